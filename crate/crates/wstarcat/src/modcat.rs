//! The category of modules over a multimatrix algebra, at finite
//! dimension: objects as multiplicity vectors, morphisms as per-block
//! matrices on multiplicity spaces, direct sums, idempotent splitting,
//! generators, Gram-Schmidt, Cantor-Schroeder-Bernstein, central
//! decomposition, and Cauchy completion from a presentation.

use crate::algebra::{AlgebraElement, MultiMatrixAlgebra};
use crate::linalg::{hermitian_eig, range_isometry, CMatrix, LinalgError, Tolerance, C64};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModcatError {
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("morphism is not a projection within tolerance")]
    NotProjection,
    #[error("morphism is not an isometry within tolerance")]
    NotIsometry,
    #[error("generators are not orthogonal: Hom(c_{0}, c_{1}) is nonzero")]
    NotOrthogonal(usize, usize),
    #[error("module is not faithful (a block multiplicity is zero)")]
    NotFaithful,
    #[error("presentation projections do not sum to the identity")]
    ProjectionsDontSum,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A module H = sum_i C^{n_i} (x) C^{x_i} over A, classified by its
/// multiplicity vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleObject {
    pub algebra: MultiMatrixAlgebra,
    pub mult: Vec<usize>,
}

impl ModuleObject {
    pub fn new(algebra: MultiMatrixAlgebra, mult: Vec<usize>) -> Self {
        assert_eq!(mult.len(), algebra.num_blocks(), "multiplicity length mismatch");
        ModuleObject { algebra, mult }
    }

    pub fn zero(algebra: MultiMatrixAlgebra) -> Self {
        let k = algebra.num_blocks();
        ModuleObject { algebra, mult: vec![0; k] }
    }

    /// The standard form L^2 A viewed as a left module: multiplicity n_i per block.
    pub fn l2(algebra: &MultiMatrixAlgebra) -> Self {
        ModuleObject {
            algebra: algebra.clone(),
            mult: algebra.blocks().to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.algebra
            .blocks()
            .iter()
            .zip(&self.mult)
            .map(|(&n, &x)| n * x)
            .sum()
    }

    pub fn support(&self) -> Vec<usize> {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(|&x| x == 0)
    }

    pub fn identity_morphism(&self) -> ModuleMorphism {
        ModuleMorphism {
            source: self.clone(),
            target: self.clone(),
            blocks: self.mult.iter().map(|&x| CMatrix::identity(x)).collect(),
        }
    }

    pub fn zero_morphism_to(&self, target: &ModuleObject) -> ModuleMorphism {
        assert_eq!(self.algebra, target.algebra);
        ModuleMorphism {
            source: self.clone(),
            target: target.clone(),
            blocks: self
                .mult
                .iter()
                .zip(&target.mult)
                .map(|(&x, &y)| CMatrix::zeros(y, x))
                .collect(),
        }
    }
}

/// A module morphism: per block a y_i x x_i matrix on multiplicity space
/// (tensored with the identity on the algebra factor).
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleMorphism {
    pub source: ModuleObject,
    pub target: ModuleObject,
    pub blocks: Vec<CMatrix>,
}

impl ModuleMorphism {
    pub fn new(
        source: ModuleObject,
        target: ModuleObject,
        blocks: Vec<CMatrix>,
    ) -> Result<Self, ModcatError> {
        if source.algebra != target.algebra {
            return Err(ModcatError::AlgebraMismatch);
        }
        if blocks.len() != source.mult.len()
            || blocks
                .iter()
                .zip(source.mult.iter().zip(&target.mult))
                .any(|(m, (&x, &y))| m.rows != y || m.cols != x)
        {
            return Err(ModcatError::Linalg(LinalgError::DimensionMismatch(
                "morphism block shapes do not match multiplicities".into(),
            )));
        }
        Ok(ModuleMorphism { source, target, blocks })
    }

    pub fn compose(&self, first: &ModuleMorphism) -> ModuleMorphism {
        // self . first, so first.target = self.source.
        assert_eq!(first.target, self.source);
        ModuleMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&first.blocks)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    pub fn adjoint(&self) -> ModuleMorphism {
        ModuleMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            blocks: self.blocks.iter().map(|m| m.adjoint()).collect(),
        }
    }

    pub fn add(&self, other: &ModuleMorphism) -> ModuleMorphism {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        ModuleMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &ModuleMorphism) -> ModuleMorphism {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, z: C64) -> ModuleMorphism {
        ModuleMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks: self.blocks.iter().map(|m| m.scale(z)).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.blocks.iter().map(|m| m.norm().powi(2)).sum::<f64>().sqrt()
    }

    /// The W*-norm: max over blocks of the operator norm.
    pub fn norm(&self, tol: Tolerance) -> f64 {
        self.blocks
            .iter()
            .filter(|m| m.rows > 0 && m.cols > 0)
            .map(|m| {
                let (l, _) = hermitian_eig(&m.adjoint().mul(m), tol).expect("M*M is Hermitian");
                l.last().copied().unwrap_or(0.0).max(0.0).sqrt()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_isometry(&self, tol: Tolerance) -> bool {
        self.blocks.iter().all(|m| m.is_isometry(tol))
    }

    pub fn is_projection(&self, tol: Tolerance) -> bool {
        self.source == self.target && self.blocks.iter().all(|m| m.is_projection(tol))
    }

    pub fn is_unitary(&self, tol: Tolerance) -> bool {
        self.is_isometry(tol) && self.adjoint().is_isometry(tol)
    }
}

/// Hom(H, K): dimension and an orthonormal basis of matrix-unit morphisms.
pub fn hom_basis(
    h: &ModuleObject,
    k: &ModuleObject,
) -> Result<(usize, Vec<ModuleMorphism>), ModcatError> {
    if h.algebra != k.algebra {
        return Err(ModcatError::AlgebraMismatch);
    }
    let dim: usize = h.mult.iter().zip(&k.mult).map(|(&x, &y)| x * y).sum();
    let mut basis = Vec::with_capacity(dim);
    for (i, (&x, &y)) in h.mult.iter().zip(&k.mult).enumerate() {
        for r in 0..y {
            for s in 0..x {
                let mut m = h.zero_morphism_to(k);
                m.blocks[i][(r, s)] = C64::new(1.0, 0.0);
                basis.push(m);
            }
        }
    }
    Ok((dim, basis))
}

/// Orthogonal direct sum with its coordinate isometries.
pub fn direct_sum(
    objects: &[ModuleObject],
) -> Result<(ModuleObject, Vec<ModuleMorphism>), ModcatError> {
    let algebra = objects
        .first()
        .map(|o| o.algebra.clone())
        .expect("direct_sum of an empty list needs an algebra; use ModuleObject::zero");
    if objects.iter().any(|o| o.algebra != algebra) {
        return Err(ModcatError::AlgebraMismatch);
    }
    let k = algebra.num_blocks();
    let mut mult = vec![0usize; k];
    for o in objects {
        for (m, &x) in mult.iter_mut().zip(&o.mult) {
            *m += x;
        }
    }
    let total = ModuleObject::new(algebra, mult);
    let mut offsets = vec![0usize; k];
    let mut iotas = Vec::with_capacity(objects.len());
    for o in objects {
        let mut blocks = Vec::with_capacity(k);
        for (i, &x) in o.mult.iter().enumerate() {
            let mut b = CMatrix::zeros(total.mult[i], x);
            for c in 0..x {
                b[(offsets[i] + c, c)] = C64::new(1.0, 0.0);
            }
            blocks.push(b);
            offsets[i] += x;
        }
        iotas.push(ModuleMorphism {
            source: o.clone(),
            target: total.clone(),
            blocks,
        });
    }
    Ok((total, iotas))
}

/// Split an orthogonal projection p in End(H): the subobject y and the
/// isometry iota: y -> H with iota iota* = p and iota* iota = id_y.
pub fn split_idempotent(
    p: &ModuleMorphism,
    tol: Tolerance,
) -> Result<(ModuleObject, ModuleMorphism), ModcatError> {
    if !p.is_projection(tol) {
        return Err(ModcatError::NotProjection);
    }
    let mut mult = Vec::with_capacity(p.blocks.len());
    let mut blocks = Vec::with_capacity(p.blocks.len());
    for b in &p.blocks {
        let iota = range_isometry(b, tol)?;
        mult.push(iota.cols);
        blocks.push(iota);
    }
    let y = ModuleObject::new(p.source.algebra.clone(), mult);
    let iota = ModuleMorphism {
        source: y.clone(),
        target: p.source.clone(),
        blocks,
    };
    Ok((y, iota))
}

/// Cantor-Schroeder-Bernstein: from isometries f: H -> K and g: K -> H,
/// a unitary H -> K assembled from the finite chain construction.
///
/// Returns the unitary together with the number of steps the chain took
/// to stabilize (at finite dimension, at most dim H).
pub fn csb_isomorphism(
    f: &ModuleMorphism,
    g: &ModuleMorphism,
    tol: Tolerance,
) -> Result<(ModuleMorphism, usize), ModcatError> {
    if !f.is_isometry(tol) || !g.is_isometry(tol) {
        return Err(ModcatError::NotIsometry);
    }
    assert_eq!(f.source, g.target);
    assert_eq!(f.target, g.source);
    let h = &f.source;
    let k = &f.target;
    // Isometries both ways force equal multiplicities blockwise.
    assert_eq!(h.mult, k.mult, "isometries both ways force equal multiplicities");

    // Chain of subspaces H = H_0 >= H_1 >= ... with H_{n+1} = g(K_n),
    // K_{n+1} = f(H_n); track their projections blockwise.
    let mut p_h: Vec<Vec<CMatrix>> = vec![h.mult.iter().map(|&x| CMatrix::identity(x)).collect()];
    let mut p_k: Vec<Vec<CMatrix>> = vec![k.mult.iter().map(|&x| CMatrix::identity(x)).collect()];
    let cap = h.dim().max(1);
    let mut steps = cap;
    for n in 0..cap {
        let next_h: Vec<CMatrix> = g
            .blocks
            .iter()
            .zip(&p_k[n])
            .map(|(gb, q)| gb.mul(q).mul(&gb.adjoint()))
            .collect();
        let next_k: Vec<CMatrix> = f
            .blocks
            .iter()
            .zip(&p_h[n])
            .map(|(fb, q)| fb.mul(q).mul(&fb.adjoint()))
            .collect();
        let stable = next_h
            .iter()
            .zip(&p_h[n])
            .all(|(a, b)| a.sub(b).norm() <= tol.eps * 10.0)
            && next_k
                .iter()
                .zip(&p_k[n])
                .all(|(a, b)| a.sub(b).norm() <= tol.eps * 10.0);
        p_h.push(next_h);
        p_k.push(next_k);
        if stable {
            steps = n + 1;
            break;
        }
    }
    let last = p_h.len() - 1;

    // u = f on H_infinity and on even differences, g^{-1} = g* on odd ones.
    let mut u_blocks = Vec::with_capacity(h.mult.len());
    for (bi, _) in h.mult.iter().enumerate() {
        let mut acc = f.blocks[bi].mul(&p_h[last][bi]);
        for n in 0..last {
            let diff = p_h[n][bi].sub(&p_h[n + 1][bi]);
            if n % 2 == 0 {
                acc = acc.add(&f.blocks[bi].mul(&diff));
            } else {
                acc = acc.add(&g.blocks[bi].adjoint().mul(&diff));
            }
        }
        u_blocks.push(acc);
    }
    let u = ModuleMorphism {
        source: h.clone(),
        target: k.clone(),
        blocks: u_blocks,
    };
    Ok((u, steps))
}

/// Result of Gram-Schmidt orthogonalization of a generator list.
#[derive(Debug, Clone)]
pub struct GramSchmidt {
    /// The orthogonal generators b_i (block-support subtraction).
    pub generators: Vec<ModuleObject>,
    /// Blocks supporting each b_i.
    pub partition: Vec<Vec<usize>>,
    /// Blocks supported by no generator.
    pub remainder: Vec<usize>,
    /// The projections Q_i: c_i -> c_i onto the surviving blocks.
    pub projections: Vec<ModuleMorphism>,
}

/// Orthogonalize a generator list by block-support subtraction, in list order.
pub fn gram_schmidt(generators: &[ModuleObject]) -> Result<GramSchmidt, ModcatError> {
    let algebra = generators
        .first()
        .map(|o| o.algebra.clone())
        .expect("gram_schmidt needs at least one generator");
    if generators.iter().any(|o| o.algebra != algebra) {
        return Err(ModcatError::AlgebraMismatch);
    }
    let k = algebra.num_blocks();
    let mut taken = vec![false; k];
    let mut out_gens = Vec::with_capacity(generators.len());
    let mut partition = Vec::with_capacity(generators.len());
    let mut projections = Vec::with_capacity(generators.len());
    for c in generators {
        let mut mult = vec![0usize; k];
        let mut blocks = Vec::with_capacity(k);
        let mut part = Vec::new();
        for (i, &x) in c.mult.iter().enumerate() {
            let keep = x > 0 && !taken[i];
            if keep {
                mult[i] = x;
                part.push(i);
                blocks.push(CMatrix::identity(x));
            } else {
                blocks.push(CMatrix::zeros(x, x));
            }
        }
        for &i in &part {
            taken[i] = true;
        }
        let b = ModuleObject::new(algebra.clone(), mult);
        projections.push(ModuleMorphism {
            source: c.clone(),
            target: c.clone(),
            blocks,
        });
        out_gens.push(b);
        partition.push(part);
    }
    let remainder = (0..k).filter(|&i| !taken[i]).collect();
    Ok(GramSchmidt {
        generators: out_gens,
        partition,
        remainder,
        projections,
    })
}

/// At finite dimension: stable equivalence is equality of block supports.
pub fn stable_equivalent(c: &ModuleObject, d: &ModuleObject) -> Result<bool, ModcatError> {
    if c.algebra != d.algebra {
        return Err(ModcatError::AlgebraMismatch);
    }
    Ok(c.support() == d.support())
}

/// Central (boxplus) decomposition induced by pairwise-orthogonal generators.
#[derive(Debug, Clone)]
pub struct CentralDecomposition {
    /// Central projections p_i, one per generator.
    pub projections: Vec<AlgebraElement>,
    /// The remainder projection q = 1 - sum p_i.
    pub remainder: AlgebraElement,
    /// Presentations of the summand categories C_i.
    pub summands: Vec<MultiMatrixAlgebra>,
    /// Presentation of the leftover category D.
    pub leftover: MultiMatrixAlgebra,
}

pub fn central_decomposition(
    objects: &[ModuleObject],
) -> Result<CentralDecomposition, ModcatError> {
    let algebra = objects
        .first()
        .map(|o| o.algebra.clone())
        .expect("central_decomposition needs at least one object");
    for (i, a) in objects.iter().enumerate() {
        for (j, b) in objects.iter().enumerate() {
            if i != j {
                let (dim, _) = hom_basis(a, b)?;
                if dim != 0 {
                    return Err(ModcatError::NotOrthogonal(i, j));
                }
            }
        }
    }
    let mut projections = Vec::with_capacity(objects.len());
    let mut summands = Vec::with_capacity(objects.len());
    let mut q = algebra.identity();
    for o in objects {
        let mut p = algebra.zero();
        let mut blocks = Vec::new();
        for &i in &o.support() {
            p.blocks[i] = CMatrix::identity(algebra.blocks()[i]);
            blocks.push(algebra.blocks()[i]);
        }
        q = q.sub(&p);
        summands.push(MultiMatrixAlgebra::new(blocks));
        projections.push(p);
    }
    let leftover_blocks: Vec<usize> = (0..algebra.num_blocks())
        .filter(|&i| q.blocks[i].norm() > 0.5)
        .map(|i| algebra.blocks()[i])
        .collect();
    Ok(CentralDecomposition {
        projections,
        remainder: q,
        summands,
        leftover: MultiMatrixAlgebra::new(leftover_blocks),
    })
}

/// Embed K into finitely many copies of a faithful module H.
pub fn embed_into_power(
    k: &ModuleObject,
    h: &ModuleObject,
) -> Result<(usize, ModuleMorphism), ModcatError> {
    if k.algebra != h.algebra {
        return Err(ModcatError::AlgebraMismatch);
    }
    if h.mult.iter().any(|&x| x == 0) {
        return Err(ModcatError::NotFaithful);
    }
    let copies = k
        .mult
        .iter()
        .zip(&h.mult)
        .map(|(&ki, &hi)| ki.div_ceil(hi))
        .max()
        .unwrap_or(0);
    let power = ModuleObject::new(
        h.algebra.clone(),
        h.mult.iter().map(|&x| x * copies).collect(),
    );
    let mut blocks = Vec::with_capacity(k.mult.len());
    for (&ki, &pi) in k.mult.iter().zip(&power.mult) {
        let mut b = CMatrix::zeros(pi, ki);
        for c in 0..ki {
            b[(c, c)] = C64::new(1.0, 0.0);
        }
        blocks.push(b);
    }
    Ok((
        copies,
        ModuleMorphism {
            source: k.clone(),
            target: power,
            blocks,
        },
    ))
}

/// Tensoring by a Hilbert space of dimension n: multiplicities scale.
pub fn hilb_scale(n: usize, c: &ModuleObject) -> ModuleObject {
    ModuleObject::new(c.algebra.clone(), c.mult.iter().map(|&x| x * n).collect())
}

/// A presentation of a Cauchy complete category: the endomorphism algebra
/// of a generator together with the projections cutting out the pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    pub algebra: MultiMatrixAlgebra,
    pub projections: Vec<AlgebraElement>,
}

/// The Cauchy completion of a presentation: the category of modules over
/// the presented algebra, with the images of the generators.
pub fn completion_from_presentation(
    p: &Presentation,
    tol: Tolerance,
) -> Result<(MultiMatrixAlgebra, Vec<ModuleObject>), ModcatError> {
    let mut sum = p.algebra.zero();
    for proj in &p.projections {
        if !proj.is_projection(tol) {
            return Err(ModcatError::NotProjection);
        }
        sum = sum.add(proj);
    }
    if sum.sub(&p.algebra.identity()).norm() > tol.eps * (p.algebra.dim() as f64).max(1.0) {
        return Err(ModcatError::ProjectionsDontSum);
    }
    let images = p
        .projections
        .iter()
        .map(|proj| ModuleObject::new(p.algebra.clone(), proj.block_ranks(tol)))
        .collect();
    Ok((p.algebra.clone(), images))
}
