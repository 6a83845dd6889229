//! Command-line front end: parse documents, dispatch to operations, emit
//! deterministic reports and machine-readable results.
//!
//! Exit codes: 0 success/pass, 1 mathematical failure, 2 input error.
//! All output is line-oriented; documents are emitted in canonical form.

use crate::algebra::MultiMatrixAlgebra;
use crate::bimod::{conjugate, fuse, fuse_oracle, BimodError, Bimodule, BimoduleMap};
use crate::doc::{self, Document};
use crate::funcat::{
    self, bimodule_from_functor, expansion_unitary, hilb_inner_via_corner, hilb_inner_via_fusion,
    riesz_roundtrip, Functor, HilbHom, ReportLine,
};
use crate::linalg::Tolerance;
use crate::modcat::{self, ModuleMorphism, ModuleObject};
use clap::{Arg, ArgAction, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MATH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

struct Ctx {
    tol: Tolerance,
    seed: u64,
    cap: usize,
    expect: Option<String>,
    out: String,
}

impl Ctx {
    fn line(&mut self, s: &str) {
        self.out.push_str(s);
        self.out.push('\n');
    }

    fn doc(&mut self, d: &Document) {
        let text = doc::emit(d);
        self.line(&text);
    }

    fn reports(&mut self, lines: &[ReportLine]) -> i32 {
        let mut code = EXIT_OK;
        for l in lines {
            let text = l.to_string();
            self.line(&text);
            if !l.pass {
                code = EXIT_MATH;
            }
        }
        code
    }

    fn verdict(&mut self, name: &str, member: bool, detail: &str) -> i32 {
        let word = if member { "member" } else { "nonmember" };
        let text = if detail.is_empty() {
            format!("{name} verdict={word}")
        } else {
            format!("{name} verdict={word} {detail}")
        };
        self.line(&text);
        match self.expect.as_deref() {
            Some(e) if e != word => EXIT_MATH,
            _ => EXIT_OK,
        }
    }
}

fn command_spec() -> Command {
    const SLOTS: [&str; 3] = ["input1", "input2", "input3"];
    let sub = |name: &'static str, about: &'static str, n: usize| {
        Command::new(name).about(about).args(
            SLOTS
                .iter()
                .take(n)
                .map(|&slot| Arg::new(slot).value_name("FILE").required(true)),
        )
    };
    Command::new("wstarcat")
        .about("finite-dimensional W*-category calculator")
        .subcommand_required(true)
        .arg(
            Arg::new("tol")
                .long("tol")
                .value_name("FLOAT")
                .global(true)
                .action(ArgAction::Set),
        )
        .arg(
            Arg::new("seed")
                .long("seed")
                .value_name("INT")
                .global(true)
                .action(ArgAction::Set),
        )
        .arg(
            Arg::new("cap")
                .long("cap")
                .value_name("INT")
                .global(true)
                .action(ArgAction::Set),
        )
        .arg(
            Arg::new("expect")
                .long("expect")
                .value_name("VERDICT")
                .global(true)
                .action(ArgAction::Set),
        )
        .subcommand(sub("fuse", "Connes fusion by multiplicity contraction", 2))
        .subcommand(sub("fuse-oracle", "definitional Connes fusion with witness", 2))
        .subcommand(sub("inner", "Hilb-valued inner product of two modules", 2))
        .subcommand(sub("adjoint", "adjoint functor via the conjugate bimodule", 1))
        .subcommand(
            Command::new("gram-schmidt")
                .about("orthogonalize a generator list by support subtraction")
                .arg(
                    Arg::new("inputs")
                        .value_name("FILE")
                        .num_args(1..)
                        .required(true),
                ),
        )
        .subcommand(sub("csb", "Cantor-Schroeder-Bernstein unitary from two isometries", 2))
        .subcommand(sub("split", "split an idempotent module endomorphism", 1))
        .subcommand(sub("cone-v", "vertical cone membership of an endo-transformation", 1))
        .subcommand(sub("cone-h", "horizontal cone membership via the Choi criterion", 3))
        .subcommand(sub("audit-biinv", "bi-involutive coherence audit on three bimodules", 3))
        .subcommand(sub("audit-vn2", "dictionary round-trip audit on three algebras", 3))
        .subcommand(sub("coherences", "phi/nu coherence identities for two functors", 2))
        .subcommand(sub("riesz", "Riesz correspondence roundtrip for a module pair", 2))
        .subcommand(sub("reconstruct", "reconstruct a functor from its simple values", 1))
}

fn load(path: &str) -> Result<Document, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read `{path}`: {e}"))?;
    doc::parse(&text).map_err(|e| format!("in `{path}`: {e}"))
}

fn want_bimodule(d: Document, path: &str) -> Result<Bimodule, String> {
    match d {
        Document::Bimodule(b) | Document::Functor(b) => Ok(b),
        other => Err(format!(
            "`{path}`: expected a bimodule or functor document, got kind `{}`",
            other.kind()
        )),
    }
}

fn want_module(d: Document, path: &str) -> Result<ModuleObject, String> {
    match d {
        Document::Module(m) => Ok(m),
        other => Err(format!(
            "`{path}`: expected a module document, got kind `{}`",
            other.kind()
        )),
    }
}

fn want_morphism(d: Document, path: &str) -> Result<ModuleMorphism, String> {
    match d {
        Document::Morphism(m) => Ok(m),
        other => Err(format!(
            "`{path}`: expected a morphism document, got kind `{}`",
            other.kind()
        )),
    }
}

fn want_map(d: Document, path: &str) -> Result<BimoduleMap, String> {
    match d {
        Document::BimoduleMap(m) | Document::Nat(m) => Ok(m),
        other => Err(format!(
            "`{path}`: expected a bimodule-map or nat document, got kind `{}`",
            other.kind()
        )),
    }
}

fn want_algebra(d: Document, path: &str) -> Result<MultiMatrixAlgebra, String> {
    match d {
        Document::Algebra(a) => Ok(a),
        other => Err(format!(
            "`{path}`: expected an algebra document, got kind `{}`",
            other.kind()
        )),
    }
}

/// Runs the tool on argv-style arguments (excluding the program name).
/// `env_tol` supplies the WSTAR_TOL override, if set; the --tol flag wins.
pub fn run(args: &[String], env_tol: Option<&str>) -> (i32, String) {
    let mut argv = vec!["wstarcat".to_string()];
    argv.extend(args.iter().cloned());
    let matches = match command_spec().try_get_matches_from(&argv) {
        Ok(m) => m,
        Err(e) => return (EXIT_INPUT, e.to_string()),
    };
    let tol_text = matches
        .get_one::<String>("tol")
        .cloned()
        .or_else(|| env_tol.map(|s| s.to_string()));
    let tol = match tol_text {
        Some(t) => match t.parse::<f64>() {
            Ok(eps) if eps > 0.0 => Tolerance { eps },
            _ => return (EXIT_INPUT, format!("invalid tolerance `{t}`\n")),
        },
        None => Tolerance::default(),
    };
    let seed = match matches.get_one::<String>("seed") {
        Some(s) => match s.parse::<u64>() {
            Ok(v) => v,
            Err(_) => return (EXIT_INPUT, format!("invalid seed `{s}`\n")),
        },
        None => 0,
    };
    let cap = match matches.get_one::<String>("cap") {
        Some(s) => match s.parse::<usize>() {
            Ok(v) => v,
            Err(_) => return (EXIT_INPUT, format!("invalid cap `{s}`\n")),
        },
        None => crate::bimod::DEFAULT_ORACLE_CAP,
    };
    let mut ctx = Ctx {
        tol,
        seed,
        cap,
        expect: matches.get_one::<String>("expect").cloned(),
        out: String::new(),
    };

    let (name, sm) = matches.subcommand().expect("subcommand required");
    let result = dispatch(name, sm, &mut ctx);
    match result {
        Ok(code) => (code, ctx.out),
        Err((code, msg)) => {
            ctx.line(&format!("error: {msg}"));
            (code, ctx.out)
        }
    }
}

type CliError = (i32, String);

fn input_err(msg: String) -> CliError {
    (EXIT_INPUT, msg)
}

fn file<'a>(sm: &'a clap::ArgMatches, slot: &str) -> &'a str {
    sm.get_one::<String>(slot).expect("required file argument")
}

fn dispatch(name: &str, sm: &clap::ArgMatches, ctx: &mut Ctx) -> Result<i32, CliError> {
    match name {
        "fuse" => {
            let x = want_bimodule(load(file(sm, "input1")).map_err(input_err)?, file(sm, "input1"))
                .map_err(input_err)?;
            let y = want_bimodule(load(file(sm, "input2")).map_err(input_err)?, file(sm, "input2"))
                .map_err(input_err)?;
            let fused = fuse(&x, &y).map_err(|e| input_err(format!("Connes fusion: {e}")))?;
            ctx.doc(&Document::Bimodule(fused));
            Ok(EXIT_OK)
        }
        "fuse-oracle" => {
            let x = want_bimodule(load(file(sm, "input1")).map_err(input_err)?, file(sm, "input1"))
                .map_err(input_err)?;
            let y = want_bimodule(load(file(sm, "input2")).map_err(input_err)?, file(sm, "input2"))
                .map_err(input_err)?;
            let witness = match fuse_oracle(&x, &y, ctx.tol, ctx.cap) {
                Ok(w) => w,
                Err(e @ BimodError::CapExceeded(_, _)) => {
                    return Err(input_err(format!("Connes fusion oracle: {e}")))
                }
                Err(e) => return Err((EXIT_MATH, format!("Connes fusion oracle: {e}"))),
            };
            let fast = fuse(&x, &y).map_err(|e| input_err(format!("Connes fusion: {e}")))?;
            let pass = witness.is_unitary(ctx.tol) && witness.dimension == fast.dim();
            let line = ReportLine {
                id: format!("fuse-oracle dimension={}", witness.dimension),
                residual: witness.residual,
                pass,
            };
            let code = ctx.reports(&[line]);
            Ok(code)
        }
        "inner" => {
            let a = want_module(load(file(sm, "input1")).map_err(input_err)?, file(sm, "input1"))
                .map_err(input_err)?;
            let b = want_module(load(file(sm, "input2")).map_err(input_err)?, file(sm, "input2"))
                .map_err(input_err)?;
            let hh = HilbHom::new(a.clone(), b.clone())
                .map_err(|e| input_err(format!("Hilb-valued inner product: {e}")))?;
            let (d1, _u1) = hilb_inner_via_corner(&a, &b, ctx.tol)
                .map_err(|e| (EXIT_MATH, format!("corner route: {e}")))?;
            let (d2, u2) = hilb_inner_via_fusion(&a, &b)
                .map_err(|e| (EXIT_MATH, format!("fusion route: {e}")))?;
            let residual = u2
                .mul(&u2.adjoint())
                .sub(&crate::linalg::CMatrix::identity(hh.dim()))
                .norm();
            let pass = d1 == hh.dim() && d2 == hh.dim() && ctx.tol.admits(residual, 1.0);
            ctx.doc(&Document::Module(ModuleObject::new(
                MultiMatrixAlgebra::scalars(),
                vec![hh.dim()],
            )));
            let line = ReportLine {
                id: format!("inner dimension={}", hh.dim()),
                residual,
                pass,
            };
            Ok(ctx.reports(&[line]))
        }
        "adjoint" => {
            let x = want_bimodule(load(file(sm, "input1")).map_err(input_err)?, file(sm, "input1"))
                .map_err(input_err)?;
            ctx.doc(&Document::Functor(conjugate(&x)));
            Ok(EXIT_OK)
        }
        "gram-schmidt" => {
            let paths: Vec<&String> = sm.get_many::<String>("inputs").unwrap().collect();
            let mut gens = Vec::new();
            for p in &paths {
                gens.push(want_module(load(p).map_err(input_err)?, p).map_err(input_err)?);
            }
            let gs = modcat::gram_schmidt(&gens)
                .map_err(|e| input_err(format!("orthogonal generators: {e}")))?;
            for g in &gs.generators {
                ctx.doc(&Document::Module(g.clone()));
            }
            let rem = gs
                .remainder
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let text = format!("gram-schmidt parts={} remainder=[{}]", gs.generators.len(), rem);
            ctx.line(&text);
            Ok(EXIT_OK)
        }
        "csb" => {
            let f = want_morphism(load(file(sm, "input1")).map_err(input_err)?, file(sm, "input1"))
                .map_err(input_err)?;
            let g = want_morphism(load(file(sm, "input2")).map_err(input_err)?, file(sm, "input2"))
                .map_err(input_err)?;
            let (u, steps) = modcat::csb_isomorphism(&f, &g, ctx.tol)
                .map_err(|e| (EXIT_MATH, format!("Cantor-Schroeder-Bernstein: {e}")))?;
            let residual = if u.is_unitary(ctx.tol) { 0.0 } else { 1.0 };
            ctx.doc(&Document::Morphism(u));
            let line = ReportLine {
                id: format!("csb steps={steps}"),
                residual,
                pass: residual == 0.0,
            };
            Ok(ctx.reports(&[line]))
        }
        "split" => {
            let p = want_morphism(load(file(sm, "input1")).map_err(input_err)?, file(sm, "input1"))
                .map_err(input_err)?;
            let (obj, iota) = modcat::split_idempotent(&p, ctx.tol)
                .map_err(|e| (EXIT_MATH, format!("idempotent splitting: {e}")))?;
            ctx.doc(&Document::Module(obj));
            ctx.doc(&Document::Morphism(iota));
            Ok(EXIT_OK)
        }
        "cone-v" => {
            let eta = want_map(load(file(sm, "input1")).map_err(input_err)?, file(sm, "input1"))
                .map_err(input_err)?;
            let member = funcat::vertical_cone_member(&eta, ctx.tol)
                .map_err(|e| (EXIT_MATH, format!("vertical cone: {e}")))?;
            Ok(ctx.verdict("cone-v", member, ""))
        }
        "cone-h" => {
            let theta = want_map(load(file(sm, "input1")).map_err(input_err)?, file(sm, "input1"))
                .map_err(input_err)?;
            let x = want_bimodule(load(file(sm, "input2")).map_err(input_err)?, file(sm, "input2"))
                .map_err(input_err)?;
            let y = want_bimodule(load(file(sm, "input3")).map_err(input_err)?, file(sm, "input3"))
                .map_err(input_err)?;
            let cert = funcat::horizontal_cone_member(&theta, &x, &y, ctx.tol)
                .map_err(|e| (EXIT_MATH, format!("horizontal cone (Choi): {e}")))?;
            let min = cert
                .min_eigenvalues
                .iter()
                .fold(f64::INFINITY, |a, &b| a.min(b));
            let min = if min.is_finite() { min } else { 0.0 };
            let detail = format!("min_eig={}", doc::fmt_g17(min));
            Ok(ctx.verdict("cone-h", cert.positive, &detail))
        }
        "audit-biinv" => {
            let x = want_bimodule(load(file(sm, "input1")).map_err(input_err)?, file(sm, "input1"))
                .map_err(input_err)?;
            let y = want_bimodule(load(file(sm, "input2")).map_err(input_err)?, file(sm, "input2"))
                .map_err(input_err)?;
            let z = want_bimodule(load(file(sm, "input3")).map_err(input_err)?, file(sm, "input3"))
                .map_err(input_err)?;
            let lines = funcat::biinvolutive_audit(&x, &y, &z, ctx.tol)
                .map_err(|e| input_err(format!("bi-involutive audit: {e}")))?;
            Ok(ctx.reports(&lines))
        }
        "audit-vn2" => {
            let a = want_algebra(load(file(sm, "input1")).map_err(input_err)?, file(sm, "input1"))
                .map_err(input_err)?;
            let b = want_algebra(load(file(sm, "input2")).map_err(input_err)?, file(sm, "input2"))
                .map_err(input_err)?;
            let c = want_algebra(load(file(sm, "input3")).map_err(input_err)?, file(sm, "input3"))
                .map_err(input_err)?;
            let lines = funcat::vn2_roundtrip_audit(&a, &b, &c, ctx.seed, ctx.tol)
                .map_err(|e| input_err(format!("dictionary audit: {e}")))?;
            Ok(ctx.reports(&lines))
        }
        "coherences" => {
            let g = want_bimodule(load(file(sm, "input1")).map_err(input_err)?, file(sm, "input1"))
                .map_err(input_err)?;
            let f = want_bimodule(load(file(sm, "input2")).map_err(input_err)?, file(sm, "input2"))
                .map_err(input_err)?;
            if g.right != f.left {
                return Err(input_err(
                    "coherences: the two functors are not composable".to_string(),
                ));
            }
            let lines = funcat::coherence_audit(&Functor::new(g), &Functor::new(f), ctx.seed, ctx.tol);
            let mut all = lines;
            let adj = funcat::adjunction_audit(
                &Functor::new(want_bimodule(
                    load(file(sm, "input2")).map_err(input_err)?,
                    file(sm, "input2"),
                )
                .map_err(input_err)?),
                ctx.seed,
                ctx.tol,
            )
            .map_err(|e| (EXIT_MATH, format!("adjunction audit: {e}")))?;
            all.extend(adj);
            Ok(ctx.reports(&all))
        }
        "riesz" => {
            let a = want_module(load(file(sm, "input1")).map_err(input_err)?, file(sm, "input1"))
                .map_err(input_err)?;
            let b = want_module(load(file(sm, "input2")).map_err(input_err)?, file(sm, "input2"))
                .map_err(input_err)?;
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ctx.seed);
            let blocks = a
                .mult
                .iter()
                .zip(&b.mult)
                .map(|(&x, &y)| {
                    let mut m = crate::linalg::CMatrix::zeros(y, x);
                    for r in 0..y {
                        for c in 0..x {
                            m[(r, c)] = crate::linalg::C64::new(
                                rng.random::<f64>() - 0.5,
                                rng.random::<f64>() - 0.5,
                            );
                        }
                    }
                    m
                })
                .collect();
            let f = ModuleMorphism::new(a.clone(), b.clone(), blocks)
                .map_err(|e| input_err(format!("Riesz correspondence: {e}")))?;
            let (rt, pairing) = riesz_roundtrip(&a, &b, &f)
                .map_err(|e| input_err(format!("Riesz correspondence: {e}")))?;
            let scale = f.frobenius_norm().max(1.0);
            let lines = vec![
                ReportLine::check("riesz-roundtrip", rt, ctx.tol, scale),
                ReportLine::check("riesz-pairing", pairing, ctx.tol, scale * scale),
            ];
            Ok(ctx.reports(&lines))
        }
        "reconstruct" => {
            let bim = want_bimodule(load(file(sm, "input1")).map_err(input_err)?, file(sm, "input1"))
                .map_err(input_err)?;
            let f = Functor::new(bim.clone());
            let probes: Vec<ModuleObject> = (1..=2)
                .map(|m| {
                    ModuleObject::new(
                        bim.right.clone(),
                        vec![m; bim.right.num_blocks()],
                    )
                })
                .collect();
            let rec = bimodule_from_functor(
                &bim.right.clone(),
                &bim.left.clone(),
                |c| f.apply_object(c).unwrap(),
                &probes,
            )
            .map_err(|e| (EXIT_MATH, format!("functor reconstruction: {e}")))?;
            let residual = if rec == bim { 0.0 } else { 1.0 };
            ctx.doc(&Document::Functor(rec));
            let exp = expansion_unitary(&f, &probes[1])
                .map_err(|e| (EXIT_MATH, format!("expansion: {e}")))?;
            let exp_res = if exp.is_unitary(ctx.tol) { 0.0 } else { 1.0 };
            let lines = vec![
                ReportLine {
                    id: "reconstruct".to_string(),
                    residual,
                    pass: residual == 0.0,
                },
                ReportLine {
                    id: "reconstruct-expansion".to_string(),
                    residual: exp_res,
                    pass: exp_res == 0.0,
                },
            ];
            Ok(ctx.reports(&lines))
        }
        other => Err(input_err(format!("unknown subcommand `{other}`"))),
    }
}
