//! Acceptance gate: one test per criterion, each printing a single
//! `criterion-NN <name> pass` line (visible with --nocapture) and failing
//! the build otherwise.  All randomness is seeded; suites stay at desk
//! scale.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wstarcat::algebra::{
    commutant, l2_standard_form, AlgebraElement, MultiMatrixAlgebra,
};
use wstarcat::bimod::{
    associator, conjugate, conjugate_map, fuse, fuse_map, fuse_oracle, left_unitor, right_unitor,
    Bimodule, BimoduleMap, DEFAULT_ORACLE_CAP,
};
use wstarcat::funcat::{
    adjunction_audit, biinvolutive_audit, coherence_audit, hilb_inner_via_corner,
    hilb_inner_via_fusion, horizontal_cone_levels, horizontal_cone_member, left_module_size,
    random_algebra_seeded, random_bimodule_seeded, vn2_roundtrip_audit, Functor,
};
use wstarcat::linalg::{psd_rank, CMatrix, Tolerance, C64};
use wstarcat::modcat::{
    completion_from_presentation, csb_isomorphism, gram_schmidt, hom_basis, ModuleMorphism,
    ModuleObject, Presentation,
};

#[path = "support/cases.rs"]
mod cases;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn verdict(id: &str, name: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("{id} {name} pass");
    } else {
        println!("{id} {name} fail");
        panic!("{name}: {} failures\n{}", failures.len(), failures.join("\n"));
    }
}

// 1. Fusion oracle equivalence on >= 200 random fixtures: the definitional
// Gram-matrix dimension equals the multiplicity contraction, with a unitary
// witness.
#[test]
fn criterion_01_fusion_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut failures = Vec::new();
    for case in 0..200 {
        let b = random_algebra_seeded(&mut rng, 2, 2);
        let a = random_algebra_seeded(&mut rng, 2, 2);
        let c = random_algebra_seeded(&mut rng, 2, 2);
        let x = random_bimodule_seeded(&mut rng, &b, &a, 2);
        let y = random_bimodule_seeded(&mut rng, &a, &c, 2);
        let w = match fuse_oracle(&x, &y, tol(), DEFAULT_ORACLE_CAP) {
            Ok(w) => w,
            Err(e) => {
                failures.push(format!("case {case}: oracle error {e}"));
                continue;
            }
        };
        let fast = fuse(&x, &y).unwrap();
        if w.dimension != fast.dim() {
            failures.push(format!(
                "case {case}: oracle dim {} vs contraction {}",
                w.dimension,
                fast.dim()
            ));
        }
        if w.residual > 1e-8 || !w.is_unitary(Tolerance::new(1e-8)) {
            failures.push(format!("case {case}: witness residual {}", w.residual));
        }
    }
    verdict("criterion-01", "fusion-oracle-equivalence", &failures);
}

/// All block-size multisets with at most `blocks` blocks of size <= `size`.
fn all_algebras(blocks: usize, size: usize) -> Vec<MultiMatrixAlgebra> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(cur) = stack.pop() {
        if !cur.is_empty() {
            out.push(MultiMatrixAlgebra::new(cur.clone()));
        }
        if cur.len() < blocks {
            let lo = cur.last().copied().unwrap_or(1);
            for n in lo..=size {
                let mut next = cur.clone();
                next.push(n);
                stack.push(next);
            }
        }
    }
    out
}

/// A two-element generating set of A: a diagonal with globally distinct
/// entries and the sum of the in-block cyclic shifts.
fn generating_pair(a: &MultiMatrixAlgebra) -> (AlgebraElement, AlgebraElement) {
    let mut d = a.zero();
    let mut s = a.zero();
    let mut next = 1.0;
    for (i, &n) in a.blocks().iter().enumerate() {
        for r in 0..n {
            d.blocks[i][(r, r)] = C64::new(next, 0.0);
            next += 1.0;
            s.blocks[i][((r + 1) % n, r)] = C64::new(1.0, 0.0);
        }
    }
    (d, s)
}

/// dim {x : x g = g x for g in gens} via the rank of the stacked
/// commutation constraints (pivoted Cholesky on the constraint Gram).
fn commutant_dim(gens: &[CMatrix], tol: Tolerance) -> usize {
    let n = gens[0].rows;
    let dim = n * n;
    let mut gram = CMatrix::zeros(dim, dim);
    for g in gens {
        for h in [g.clone(), g.adjoint()] {
            let c = h
                .transpose()
                .kron(&CMatrix::identity(n))
                .sub(&CMatrix::identity(n).kron(&h));
            gram = gram.add(&c.adjoint().mul(&c));
        }
    }
    dim - psd_rank(&gram, tol).expect("constraint Gram is PSD by construction")
}

// 2. Standard form: J^2 = id exactly, J(a xi b) = b* J(xi) a* on all basis
// triples, and the left/right actions are mutual commutants of dimension
// exactly dim A, for every algebra with <= 4 blocks of size <= 4.
#[test]
fn criterion_02_standard_form_identities() {
    let mut failures = Vec::new();
    for alg in all_algebras(4, 4) {
        let name = format!("{:?}", alg.blocks());
        let l2 = l2_standard_form(&alg);
        let j = l2.modular_conjugation();
        let n = l2.dim;
        let jj = j.square().sub(&CMatrix::identity(n));
        if jj.norm() != 0.0 {
            failures.push(format!("{name}: J^2 differs from id by {}", jj.norm()));
        }
        // J(a xi b) = b* J(xi) a* for all basis triples.  The identity is
        // trilinear and factors through the one-sided operator identities
        // J L(a) = R(a*) J and J R(b) = L(b*) J, checked on every basis
        // element; tiny algebras are additionally checked triple by triple.
        let jm = &j.matrix;
        let mut worst: f64 = 0.0;
        for e in alg.basis() {
            let la = l2.left_action(&e);
            let ra = l2.right_action(&e.adjoint());
            worst = worst.max(jm.mul(&la.conj()).sub(&ra.mul(jm)).norm());
            let rb = l2.right_action(&e);
            let lb = l2.left_action(&e.adjoint());
            worst = worst.max(jm.mul(&rb.conj()).sub(&lb.mul(jm)).norm());
        }
        if worst > 1e-10 {
            failures.push(format!("{name}: one-sided J identity residual {worst}"));
        }
        if n <= 9 {
            let mut direct: f64 = 0.0;
            for a in alg.basis() {
                for b in alg.basis() {
                    for xi in alg.basis() {
                        let lhs = j.apply_vec(&l2.vec(&a.mul(&xi).mul(&b)));
                        let rhs_el = l2
                            .unvec(&j.apply_vec(&l2.vec(&xi)));
                        let rhs = l2.vec(&b.adjoint().mul(&rhs_el).mul(&a.adjoint()));
                        let d: f64 = lhs
                            .iter()
                            .zip(&rhs)
                            .map(|(p, q)| (p - q).norm_sqr())
                            .sum::<f64>()
                            .sqrt();
                        direct = direct.max(d);
                    }
                }
            }
            if direct > 1e-10 {
                failures.push(format!("{name}: triple identity residual {direct}"));
            }
        }
        // Mutual commutation of the two actions, on a generating pair.
        let (d, s) = generating_pair(&alg);
        let lgens = [l2.left_action(&d), l2.left_action(&s)];
        let rgens = [l2.right_action(&d), l2.right_action(&s)];
        for lg in &lgens {
            for rg in &rgens {
                let comm = lg.mul(rg).sub(&rg.mul(lg)).norm();
                if comm > 1e-12 {
                    failures.push(format!("{name}: actions fail to commute ({comm})"));
                }
            }
        }
        // Commutant dimension.  The left action of the central projection
        // z_i is exactly the coordinate projection onto block i, so every
        // commutant element is block diagonal and the dimension is the sum
        // of the per-block commutant dimensions.
        for side in 0..2 {
            let mut total = 0usize;
            for (i, &ni) in alg.blocks().iter().enumerate() {
                let mut z = alg.zero();
                z.blocks[i] = CMatrix::identity(ni);
                let act = if side == 0 {
                    l2.left_action(&z)
                } else {
                    l2.right_action(&z)
                };
                let base = l2.vec_index(i, 0, 0);
                let span = ni * ni;
                let mut proj_err = 0.0f64;
                for r in 0..n {
                    for c in 0..n {
                        let expect = if r == c && r >= base && r < base + span {
                            C64::new(1.0, 0.0)
                        } else {
                            C64::new(0.0, 0.0)
                        };
                        proj_err = proj_err.max((act[(r, c)] - expect).norm());
                    }
                }
                if proj_err != 0.0 {
                    failures.push(format!("{name}: z_{i} is not the block projection"));
                }
                let gens: Vec<CMatrix> = [&d, &s]
                    .iter()
                    .map(|e| {
                        let mut cut = alg.zero();
                        cut.blocks[i] = e.blocks[i].clone();
                        let full = if side == 0 {
                            l2.left_action(&cut)
                        } else {
                            l2.right_action(&cut)
                        };
                        full.submatrix(base..base + span, base..base + span)
                    })
                    .collect();
                total += commutant_dim(&gens, tol());
            }
            if total != alg.dim() {
                failures.push(format!(
                    "{name}: side {side} commutant dimension {total} vs {}",
                    alg.dim()
                ));
            }
        }
        // Cross-check against the eigensolver-based commutant on small L^2.
        if n <= 9 {
            let basis_gens: Vec<CMatrix> =
                alg.basis().iter().map(|e| l2.left_action(e)).collect();
            let full = commutant(&basis_gens, tol()).unwrap();
            if full.len() != alg.dim() {
                failures.push(format!(
                    "{name}: commutant() found {} vs {}",
                    full.len(),
                    alg.dim()
                ));
            }
        }
    }
    verdict("criterion-02", "standard-form-identities", &failures);
}

// 3. The Hilb-valued inner product computed two ways on >= 200 pairs.
#[test]
fn criterion_03_inner_product_double_computation() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut failures = Vec::new();
    for case in 0..200 {
        let alg = random_algebra_seeded(&mut rng, 3, 3);
        let a = ModuleObject::new(
            alg.clone(),
            (0..alg.num_blocks()).map(|_| rng.random_range(0..=3)).collect(),
        );
        let b = ModuleObject::new(
            alg.clone(),
            (0..alg.num_blocks()).map(|_| rng.random_range(0..=3)).collect(),
        );
        let expected: usize = a.mult.iter().zip(&b.mult).map(|(&x, &y)| x * y).sum();
        let (d1, u1) = hilb_inner_via_corner(&a, &b, tol()).unwrap();
        let (d2, u2) = hilb_inner_via_fusion(&a, &b).unwrap();
        if d1 != expected || d2 != expected {
            failures.push(format!("case {case}: dims {d1}/{d2} vs {expected}"));
        }
        for u in [&u1, &u2] {
            let r = u.mul(&u.adjoint()).sub(&CMatrix::identity(u.rows)).norm();
            if r > 1e-9 {
                failures.push(format!("case {case}: connecting unitary residual {r}"));
            }
        }
    }
    verdict("criterion-03", "inner-product-double-computation", &failures);
}

// 4. Adjunction unitary and its naturality in both slots, >= 100 functors.
#[test]
fn criterion_04_adjunction() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut failures = Vec::new();
    for case in 0..100 {
        let a = random_algebra_seeded(&mut rng, 2, 2);
        let b = random_algebra_seeded(&mut rng, 2, 2);
        let f = Functor::new(random_bimodule_seeded(&mut rng, &b, &a, 2));
        match adjunction_audit(&f, 404 + case, Tolerance::new(1e-9)) {
            Ok(lines) => {
                for l in lines.iter().filter(|l| !l.pass) {
                    failures.push(format!("case {case}: {l}"));
                }
            }
            Err(e) => failures.push(format!("case {case}: {e}")),
        }
    }
    verdict("criterion-04", "adjunction", &failures);
}

// 5. The phi/nu coherence identities on >= 100 composable (F, G, H) triples.
#[test]
fn criterion_05_coherences() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut failures = Vec::new();
    for case in 0..100 {
        let a0 = random_algebra_seeded(&mut rng, 2, 2);
        let a1 = random_algebra_seeded(&mut rng, 2, 2);
        let a2 = random_algebra_seeded(&mut rng, 2, 2);
        let a3 = random_algebra_seeded(&mut rng, 2, 2);
        let x = random_bimodule_seeded(&mut rng, &a1, &a0, 2);
        let y = random_bimodule_seeded(&mut rng, &a2, &a1, 2);
        let z = random_bimodule_seeded(&mut rng, &a3, &a2, 2);
        let eps = Tolerance::new(1e-9);
        let mut lines = coherence_audit(&Functor::new(y.clone()), &Functor::new(x.clone()), 505 + case, eps);
        lines.extend(coherence_audit(&Functor::new(z.clone()), &Functor::new(y.clone()), 905 + case, eps));
        lines.extend(biinvolutive_audit(&x, &y, &z, eps).unwrap());
        for l in lines.iter().filter(|l| !l.pass) {
            failures.push(format!("case {case}: {l}"));
        }
    }
    verdict("criterion-05", "coherences", &failures);
}

// 6. Pentagon and triangle on >= 100 random composable quadruples/triples.
#[test]
fn criterion_06_pentagon_triangle() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut failures = Vec::new();
    for case in 0..100 {
        let algs: Vec<MultiMatrixAlgebra> =
            (0..5).map(|_| random_algebra_seeded(&mut rng, 2, 2)).collect();
        let x = random_bimodule_seeded(&mut rng, &algs[0], &algs[1], 2);
        let y = random_bimodule_seeded(&mut rng, &algs[1], &algs[2], 2);
        let z = random_bimodule_seeded(&mut rng, &algs[2], &algs[3], 2);
        let w = random_bimodule_seeded(&mut rng, &algs[3], &algs[4], 2);
        let xy = fuse(&x, &y).unwrap();
        let yz = fuse(&y, &z).unwrap();
        let zw = fuse(&z, &w).unwrap();
        let route1 = fuse_map(&x.identity_map(), &associator(&y, &z, &w).unwrap())
            .unwrap()
            .compose(&associator(&x, &yz, &w).unwrap())
            .compose(&fuse_map(&associator(&x, &y, &z).unwrap(), &w.identity_map()).unwrap());
        let route2 = associator(&x, &y, &zw)
            .unwrap()
            .compose(&associator(&xy, &z, &w).unwrap());
        let pent = route1.sub(&route2).frobenius_norm();
        if pent > 1e-9 {
            failures.push(format!("case {case}: pentagon residual {pent}"));
        }
        let l2 = Bimodule::l2(&algs[1]);
        let via_assoc = fuse_map(&x.identity_map(), &left_unitor(&y).unwrap())
            .unwrap()
            .compose(&associator(&x, &l2, &y).unwrap());
        let direct = fuse_map(&right_unitor(&x).unwrap(), &y.identity_map()).unwrap();
        let tri = via_assoc.sub(&direct).frobenius_norm();
        if tri > 1e-9 {
            failures.push(format!("case {case}: triangle residual {tri}"));
        }
    }
    verdict("criterion-06", "pentagon-triangle", &failures);
}

// 7. Horizontal cone: the Choi certificate agrees with the definitional
// level check at the stabilization level (total multiplicity dimension),
// on CP members, constructed non-members, and the transpose example.
#[test]
fn criterion_07_cone_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut failures = Vec::new();
    let mut checked = 0usize;
    let check = |theta: &BimoduleMap,
                 x: &Bimodule,
                 y: &Bimodule,
                 label: String,
                 seed: u64,
                 failures: &mut Vec<String>| {
        let cert = horizontal_cone_member(theta, x, y, tol()).unwrap();
        let level: usize =
            (0..x.left.num_blocks()).map(|j| left_module_size(x, j)).max().unwrap_or(1);
        let worst =
            horizontal_cone_levels(theta, x, y, level.max(1), 8, seed, tol()).unwrap();
        if cert.positive && worst < -1e-8 {
            failures.push(format!("{label}: certified member but level worst {worst}"));
        }
        if !cert.positive && worst > -1e-8 {
            failures.push(format!("{label}: certified nonmember but level worst {worst}"));
        }
    };
    while checked < 100 {
        let b = random_algebra_seeded(&mut rng, 2, 2);
        let a = random_algebra_seeded(&mut rng, 2, 2);
        let x = random_bimodule_seeded(&mut rng, &b, &a, 2);
        let y = random_bimodule_seeded(&mut rng, &b, &a, 2);
        if x.dim() == 0 || y.dim() == 0 {
            continue;
        }
        // Member: conj(mu) (*) mu for a random map mu: X -> Y is CP.
        let cells: Vec<Vec<CMatrix>> = x
            .mult
            .iter()
            .zip(&y.mult)
            .map(|(xr, yr)| {
                xr.iter()
                    .zip(yr)
                    .map(|(&kx, &ky)| {
                        let mut m = CMatrix::zeros(ky, kx);
                        for r in 0..ky {
                            for c in 0..kx {
                                m[(r, c)] = C64::new(
                                    rng.random::<f64>() - 0.5,
                                    rng.random::<f64>() - 0.5,
                                );
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        let mu = BimoduleMap::new(x.clone(), y.clone(), cells).unwrap();
        let theta = fuse_map(&conjugate_map(&mu), &mu).unwrap();
        check(&theta, &x, &y, format!("member {checked}"), 707 + checked as u64, &mut failures);
        checked += 1;
        // Non-member: an endo-map conj(mu') (*) mu' minus enough of the
        // identity that the Choi matrix acquires a decisively negative
        // eigenvalue.
        let cells_endo: Vec<Vec<CMatrix>> = x
            .mult
            .iter()
            .map(|xr| {
                xr.iter()
                    .map(|&kx| {
                        let mut m = CMatrix::zeros(kx, kx);
                        for r in 0..kx {
                            for c in 0..kx {
                                m[(r, c)] = C64::new(
                                    rng.random::<f64>() - 0.5,
                                    rng.random::<f64>() - 0.5,
                                );
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        let mu2 = BimoduleMap::new(x.clone(), x.clone(), cells_endo).unwrap();
        let theta_cp = fuse_map(&conjugate_map(&mu2), &mu2).unwrap();
        let theta_id = fuse_map(&conjugate_map(&x.identity_map()), &x.identity_map()).unwrap();
        let scale = theta_cp.frobenius_norm().max(1.0);
        let mut bad = None;
        for k in 1..=12 {
            let cand = theta_cp.sub(&theta_id.scale(C64::new(scale * k as f64, 0.0)));
            let cert = horizontal_cone_member(&cand, &x, &x, tol());
            if let Ok(c) = cert {
                let min = c.min_eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
                if !c.positive && min < -0.1 * scale {
                    bad = Some(cand);
                    break;
                }
            }
        }
        if let Some(cand) = bad {
            check(&cand, &x, &x, format!("nonmember {checked}"), 1707 + checked as u64, &mut failures);
            checked += 1;
        }
    }
    // The fixed transpose example: positive at level 1, rejected by the
    // certificate and by the level check at the stabilization level 2.
    let c_alg = MultiMatrixAlgebra::scalars();
    let x = Bimodule::right_module(&c_alg, vec![2]);
    let cxx = fuse(&conjugate(&x), &x).unwrap();
    let mut tcell = CMatrix::zeros(4, 4);
    for k1 in 0..2 {
        for k2 in 0..2 {
            tcell[(k2 * 2 + k1, k1 * 2 + k2)] = C64::new(1.0, 0.0);
        }
    }
    let theta_t = BimoduleMap::new(cxx.clone(), cxx, vec![vec![tcell]]).unwrap();
    let cert_t = horizontal_cone_member(&theta_t, &x, &x, tol()).unwrap();
    let w1 = horizontal_cone_levels(&theta_t, &x, &x, 1, 8, 7, tol()).unwrap();
    let w2 = horizontal_cone_levels(&theta_t, &x, &x, 2, 8, 7, tol()).unwrap();
    if cert_t.positive || w1 < -1e-9 || w2 > -1e-6 {
        failures.push(format!(
            "transpose example: positive={} level1={w1} level2={w2}",
            cert_t.positive
        ));
    }
    verdict("criterion-07", "cone-equivalence", &failures);
}

// 8. Gram-Schmidt: pairwise-orthogonal outputs preserving the support
// union, and regeneration through a presentation by central projections.
#[test]
fn criterion_08_gram_schmidt() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut failures = Vec::new();
    for case in 0..100 {
        let alg = random_algebra_seeded(&mut rng, 4, 3);
        let count = rng.random_range(2..=4);
        let gens: Vec<ModuleObject> = (0..count)
            .map(|_| {
                ModuleObject::new(
                    alg.clone(),
                    (0..alg.num_blocks()).map(|_| rng.random_range(0..=2)).collect(),
                )
            })
            .collect();
        let gs = gram_schmidt(&gens).unwrap();
        for (i, g) in gs.generators.iter().enumerate() {
            for h in gs.generators.iter().skip(i + 1) {
                let (d, _) = hom_basis(g, h).unwrap();
                if d != 0 {
                    failures.push(format!("case {case}: hom dimension {d} between parts"));
                }
            }
        }
        let mut union_in: Vec<usize> = gens.iter().flat_map(|g| g.support()).collect();
        union_in.sort_unstable();
        union_in.dedup();
        let mut union_out: Vec<usize> =
            gs.generators.iter().flat_map(|g| g.support()).collect();
        union_out.sort_unstable();
        union_out.dedup();
        if union_in != union_out {
            failures.push(format!("case {case}: support union changed"));
        }
        // Regenerate: central projections of the partition classes (plus
        // the remainder) present the completion; the images reproduce the
        // original block set.
        let mut projections = Vec::new();
        let mut classes: Vec<Vec<usize>> = gs.partition.clone();
        if !gs.remainder.is_empty() {
            classes.push(gs.remainder.clone());
        }
        for class in &classes {
            let mut z = alg.zero();
            for &i in class {
                z.blocks[i] = CMatrix::identity(alg.blocks()[i]);
            }
            projections.push(z);
        }
        let pres = Presentation { algebra: alg.clone(), projections };
        let (cat, images) = completion_from_presentation(&pres, tol()).unwrap();
        if cat != alg {
            failures.push(format!("case {case}: presented algebra changed"));
        }
        let mut covered: Vec<usize> = images.iter().flat_map(|m| m.support()).collect();
        covered.sort_unstable();
        covered.dedup();
        let all: Vec<usize> = (0..alg.num_blocks()).collect();
        if covered != all {
            failures.push(format!("case {case}: completion misses blocks"));
        }
        for (class, image) in classes.iter().zip(&images) {
            let mut sup = image.support();
            sup.sort_unstable();
            let mut want = class.clone();
            want.sort_unstable();
            if sup != want {
                failures.push(format!("case {case}: image support differs from class"));
            }
        }
    }
    verdict("criterion-08", "gram-schmidt", &failures);
}

// 9. Cantor-Schroeder-Bernstein: isometries both ways yield a unitary
// within dim(H) chain steps.
#[test]
fn criterion_09_csb() {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut failures = Vec::new();
    for case in 0..100 {
        let alg = random_algebra_seeded(&mut rng, 3, 3);
        let mult: Vec<usize> =
            (0..alg.num_blocks()).map(|_| rng.random_range(0..=3)).collect();
        let h = ModuleObject::new(alg.clone(), mult.clone());
        let k = ModuleObject::new(alg.clone(), mult);
        let rand_isometry = |src: &ModuleObject, dst: &ModuleObject, rng: &mut ChaCha8Rng| {
            let blocks: Vec<CMatrix> = src
                .mult
                .iter()
                .zip(&dst.mult)
                .map(|(&x, &y)| {
                    let mut m = CMatrix::zeros(y, x);
                    for r in 0..y {
                        for c in 0..x {
                            m[(r, c)] = C64::new(
                                rng.random::<f64>() - 0.5,
                                rng.random::<f64>() - 0.5,
                            );
                        }
                    }
                    if x == 0 || y == 0 {
                        m
                    } else {
                        let (v, _) = wstarcat::linalg::polar_decompose(&m, tol()).unwrap();
                        v
                    }
                })
                .collect();
            ModuleMorphism::new(src.clone(), dst.clone(), blocks).unwrap()
        };
        let f = rand_isometry(&h, &k, &mut rng);
        let g = rand_isometry(&k, &h, &mut rng);
        match csb_isomorphism(&f, &g, tol()) {
            Ok((u, steps)) => {
                if !u.is_unitary(Tolerance::new(1e-9)) {
                    failures.push(format!("case {case}: output is not unitary"));
                }
                if steps > h.dim().max(1) {
                    failures.push(format!("case {case}: {steps} steps for dim {}", h.dim()));
                }
            }
            Err(e) => failures.push(format!("case {case}: {e}")),
        }
    }
    verdict("criterion-09", "csb", &failures);
}

// 10. Dictionary round trip between algebras and module categories.
#[test]
fn criterion_10_dictionary_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut failures = Vec::new();
    for case in 0..100 {
        let a = random_algebra_seeded(&mut rng, 2, 2);
        let b = random_algebra_seeded(&mut rng, 2, 2);
        let c = random_algebra_seeded(&mut rng, 2, 2);
        match vn2_roundtrip_audit(&a, &b, &c, 1010 + case, Tolerance::new(1e-9)) {
            Ok(lines) => {
                for l in lines.iter().filter(|l| !l.pass) {
                    failures.push(format!("case {case}: {l}"));
                }
            }
            Err(e) => failures.push(format!("case {case}: {e}")),
        }
    }
    verdict("criterion-10", "dictionary-roundtrip", &failures);
}

// 11. CLI determinism: every subcommand on the shipped corpus reproduces
// the golden output byte for byte.
#[test]
fn criterion_11_cli_determinism() {
    let mut failures = Vec::new();
    for &(name, args, want_code) in cases::CASES {
        let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let (code, out) = wstarcat::cli::run(&argv, None);
        let got = format!("exit={code}\n{out}");
        let want = match std::fs::read_to_string(format!("tests/golden/{name}.txt")) {
            Ok(w) => w,
            Err(e) => {
                failures.push(format!("{name}: missing golden file ({e})"));
                continue;
            }
        };
        if code != want_code || got != want {
            failures.push(format!("{name}: output or exit code differs"));
        }
    }
    verdict("criterion-11", "cli-determinism", &failures);
}
