//! Finite-dimensional von Neumann algebras as multimatrix algebras,
//! their standard forms with modular conjugation, corners, tensor
//! products, homomorphism splitting, and the positive cone.

use crate::linalg::{
    hermitian_eig, intertwiner_basis, range_isometry, CMatrix, LinalgError, Tolerance, C64,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("element is not a projection within tolerance")]
    NotProjection,
    #[error("element is not unitary within tolerance")]
    NotUnitary,
    #[error("homomorphism is not unital: block {0} has covered dimension {1}, expected {2}")]
    NotUnital(usize, usize, usize),
    #[error("block shapes do not match the algebra")]
    BlockMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A = direct sum of full matrix algebras M_{n_i}(C), as an ordered block list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiMatrixAlgebra {
    blocks: Vec<usize>,
}

impl MultiMatrixAlgebra {
    pub fn new(blocks: Vec<usize>) -> Self {
        assert!(blocks.iter().all(|&n| n >= 1), "block sizes must be positive");
        MultiMatrixAlgebra { blocks }
    }

    pub fn scalars() -> Self {
        MultiMatrixAlgebra { blocks: vec![1] }
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Vector-space dimension, sum of n_i^2.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|&n| n * n).sum()
    }

    pub fn identity(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            blocks: self.blocks.iter().map(|&n| CMatrix::identity(n)).collect(),
        }
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            blocks: self.blocks.iter().map(|&n| CMatrix::zeros(n, n)).collect(),
        }
    }

    /// The element that is the matrix unit E_{rs} in block `i` and zero elsewhere.
    pub fn matrix_unit(&self, i: usize, r: usize, s: usize) -> AlgebraElement {
        let mut e = self.zero();
        e.blocks[i][(r, s)] = C64::new(1.0, 0.0);
        e
    }

    /// All matrix units, in (block, row, col) lexicographic order; a basis of A.
    pub fn basis(&self) -> Vec<AlgebraElement> {
        let mut out = Vec::with_capacity(self.dim());
        for (i, &n) in self.blocks.iter().enumerate() {
            for r in 0..n {
                for s in 0..n {
                    out.push(self.matrix_unit(i, r, s));
                }
            }
        }
        out
    }
}

/// Spatial tensor product: blocks n_i * m_j in lexicographic order.
pub fn spatial_tensor(a: &MultiMatrixAlgebra, b: &MultiMatrixAlgebra) -> MultiMatrixAlgebra {
    let mut blocks = Vec::with_capacity(a.num_blocks() * b.num_blocks());
    for &n in a.blocks() {
        for &m in b.blocks() {
            blocks.push(n * m);
        }
    }
    MultiMatrixAlgebra { blocks }
}

/// Product of algebras: concatenation of block lists.
pub fn product(algebras: &[MultiMatrixAlgebra]) -> MultiMatrixAlgebra {
    MultiMatrixAlgebra {
        blocks: algebras.iter().flat_map(|a| a.blocks.iter().copied()).collect(),
    }
}

/// An element of a multimatrix algebra, one square matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub algebra: MultiMatrixAlgebra,
    pub blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn new(algebra: MultiMatrixAlgebra, blocks: Vec<CMatrix>) -> Result<Self, AlgebraError> {
        if blocks.len() != algebra.num_blocks()
            || blocks
                .iter()
                .zip(algebra.blocks())
                .any(|(m, &n)| m.rows != n || m.cols != n)
        {
            return Err(AlgebraError::BlockMismatch);
        }
        Ok(AlgebraElement { algebra, blocks })
    }

    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.algebra, other.algebra);
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.algebra, other.algebra);
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.algebra, other.algebra);
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, z: C64) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|m| m.scale(z)).collect(),
        }
    }

    pub fn adjoint(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|m| m.adjoint()).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(|m| m.norm().powi(2)).sum::<f64>().sqrt()
    }

    pub fn is_projection(&self, tol: Tolerance) -> bool {
        self.blocks.iter().all(|m| m.is_projection(tol))
    }

    pub fn is_unitary(&self, tol: Tolerance) -> bool {
        self.blocks.iter().all(|m| m.is_unitary(tol))
    }

    pub fn block_ranks(&self, tol: Tolerance) -> Vec<usize> {
        // For projections: rank = rounded trace.
        self.blocks
            .iter()
            .map(|m| {
                let t = m.trace().re;
                let r = t.round();
                assert!((t - r).abs() <= tol.eps.max(1e-6), "non-integer projection trace");
                r as usize
            })
            .collect()
    }
}

/// An antilinear map xi -> matrix . conj(xi).
#[derive(Debug, Clone)]
pub struct AntiUnitary {
    pub matrix: CMatrix,
}

impl AntiUnitary {
    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.matrix.rows];
        for i in 0..self.matrix.rows {
            for j in 0..self.matrix.cols {
                out[i] += self.matrix[(i, j)] * v[j].conj();
            }
        }
        out
    }

    pub fn is_antiunitary(&self, tol: Tolerance) -> bool {
        self.matrix.is_unitary(tol)
    }

    /// J . J as a linear map; the identity when J is involutive.
    pub fn square(&self) -> CMatrix {
        self.matrix.mul(&self.matrix.conj())
    }
}

/// The standard form L^2 A: the algebra as a Hilbert space under the
/// blockwise (unnormalized) trace inner product.
///
/// Basis: matrix units in (block, row, col) lexicographic order, so the
/// coordinate vector of an element is the concatenation of its row-major
/// block matrices.
#[derive(Debug, Clone)]
pub struct L2Space {
    pub algebra: MultiMatrixAlgebra,
    pub dim: usize,
    block_offsets: Vec<usize>,
}

/// Construct the standard form of A; J is blockwise conjugate-transpose.
pub fn l2_standard_form(algebra: &MultiMatrixAlgebra) -> L2Space {
    let mut offsets = Vec::with_capacity(algebra.num_blocks());
    let mut acc = 0;
    for &n in algebra.blocks() {
        offsets.push(acc);
        acc += n * n;
    }
    L2Space {
        algebra: algebra.clone(),
        dim: acc,
        block_offsets: offsets,
    }
}

impl L2Space {
    pub fn vec(&self, x: &AlgebraElement) -> Vec<C64> {
        assert_eq!(x.algebra, self.algebra);
        x.blocks.iter().flat_map(|m| m.data.iter().copied()).collect()
    }

    pub fn unvec(&self, v: &[C64]) -> AlgebraElement {
        assert_eq!(v.len(), self.dim);
        let mut blocks = Vec::with_capacity(self.algebra.num_blocks());
        for (i, &n) in self.algebra.blocks().iter().enumerate() {
            let off = self.block_offsets[i];
            blocks.push(CMatrix {
                rows: n,
                cols: n,
                data: v[off..off + n * n].to_vec(),
            });
        }
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks,
        }
    }

    /// Coordinate of the matrix-unit basis vector (block, row, col).
    pub fn vec_index(&self, block: usize, row: usize, col: usize) -> usize {
        self.block_offsets[block] + row * self.algebra.blocks()[block] + col
    }

    /// Matrix of xi -> a xi.
    pub fn left_action(&self, a: &AlgebraElement) -> CMatrix {
        assert_eq!(a.algebra, self.algebra);
        // Row-major vec: vec(A X) = (A kron I) vec(X).
        let mut out = CMatrix::zeros(0, 0);
        for (i, &n) in self.algebra.blocks().iter().enumerate() {
            out = out.direct_sum(&a.blocks[i].kron(&CMatrix::identity(n)));
        }
        out
    }

    /// Matrix of xi -> xi b.
    pub fn right_action(&self, b: &AlgebraElement) -> CMatrix {
        assert_eq!(b.algebra, self.algebra);
        // Row-major vec: vec(X B) = (I kron B^T) vec(X).
        let mut out = CMatrix::zeros(0, 0);
        for (i, &n) in self.algebra.blocks().iter().enumerate() {
            out = out.direct_sum(&CMatrix::identity(n).kron(&b.blocks[i].transpose()));
        }
        out
    }

    /// Modular conjugation xi -> xi^*.
    pub fn modular_conjugation(&self) -> AntiUnitary {
        // On conjugated coordinates this is the per-block transpose permutation.
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (i, &n) in self.algebra.blocks().iter().enumerate() {
            let off = self.block_offsets[i];
            for r in 0..n {
                for s in 0..n {
                    m[(off + s * n + r, off + r * n + s)] = C64::new(1.0, 0.0);
                }
            }
        }
        AntiUnitary { matrix: m }
    }

    /// Generators of the left action: matrices of all matrix units acting on the left.
    pub fn left_generators(&self) -> Vec<CMatrix> {
        self.algebra.basis().iter().map(|e| self.left_action(e)).collect()
    }

    pub fn right_generators(&self) -> Vec<CMatrix> {
        self.algebra.basis().iter().map(|e| self.right_action(e)).collect()
    }
}

/// Orthonormal basis of the commutant of the *-algebra generated by `generators`.
pub fn commutant(generators: &[CMatrix], tol: Tolerance) -> Result<Vec<CMatrix>, AlgebraError> {
    let mut gens: Vec<CMatrix> = Vec::with_capacity(2 * generators.len() + 1);
    let n = generators.first().map(|m| m.rows).unwrap_or(0);
    gens.push(CMatrix::identity(n));
    for g in generators {
        gens.push(g.clone());
        gens.push(g.adjoint());
    }
    Ok(intertwiner_basis(&gens, &gens, tol)?)
}

/// Span of the unital *-algebra generated by `generators`, as an orthonormal list.
fn generated_algebra_span(generators: &[CMatrix], tol: Tolerance) -> Vec<CMatrix> {
    let n = generators.first().map(|m| m.rows).unwrap_or(0);
    let mut span: Vec<CMatrix> = Vec::new();
    let add = |span: &mut Vec<CMatrix>, m: &CMatrix| -> bool {
        let mut v = m.clone();
        for b in span.iter() {
            let c = b.trace_dot(&v);
            v = v.sub(&b.scale(c));
        }
        let norm = v.norm();
        if norm > tol.eps.max(1e-12) * m.norm().max(1.0) {
            span.push(v.scale(C64::new(1.0 / norm, 0.0)));
            true
        } else {
            false
        }
    };
    add(&mut span, &CMatrix::identity(n));
    for g in generators {
        add(&mut span, g);
        add(&mut span, &g.adjoint());
    }
    // Multiply until the span stabilizes; degree is bounded by n^2.
    loop {
        let current = span.clone();
        let mut grew = false;
        for a in &current {
            for b in &current {
                if add(&mut span, &a.mul(b)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    span
}

/// Whether the *-algebra generated by `generators` equals its bicommutant.
pub fn bicommutant_check(generators: &[CMatrix], tol: Tolerance) -> Result<bool, AlgebraError> {
    let span = generated_algebra_span(generators, tol);
    let prime = commutant(generators, tol)?;
    let double = commutant(&prime, tol)?;
    if span.len() != double.len() {
        return Ok(false);
    }
    // Containment: every bicommutant basis element lies in the generated span.
    for d in &double {
        let mut v = d.clone();
        for b in &span {
            let c = b.trace_dot(&v);
            v = v.sub(&b.scale(c));
        }
        if v.norm() > tol.eps * 10.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A unital *-homomorphism A -> B encoded by a multiplicity matrix
/// (target blocks x source blocks) and an arrangement unitary per target block.
#[derive(Debug, Clone)]
pub struct AlgebraHom {
    pub source: MultiMatrixAlgebra,
    pub target: MultiMatrixAlgebra,
    /// mult[j][i] copies of source block i inside target block j.
    pub mult: Vec<Vec<usize>>,
    /// One unitary per target block; identity means the multiplicity-ordered
    /// block-diagonal embedding.
    pub arrangement: Vec<CMatrix>,
}

impl AlgebraHom {
    /// The canonical representative with identity arrangement.
    pub fn canonical(
        source: MultiMatrixAlgebra,
        target: MultiMatrixAlgebra,
        mult: Vec<Vec<usize>>,
    ) -> Result<Self, AlgebraError> {
        assert_eq!(mult.len(), target.num_blocks());
        for (j, row) in mult.iter().enumerate() {
            assert_eq!(row.len(), source.num_blocks());
            let covered: usize = row
                .iter()
                .zip(source.blocks())
                .map(|(&k, &n)| k * n)
                .sum();
            if covered != target.blocks()[j] {
                return Err(AlgebraError::NotUnital(j, covered, target.blocks()[j]));
            }
        }
        let arrangement = target.blocks().iter().map(|&m| CMatrix::identity(m)).collect();
        Ok(AlgebraHom {
            source,
            target,
            mult,
            arrangement,
        })
    }

    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        assert_eq!(a.algebra, self.source);
        let blocks = self
            .mult
            .iter()
            .zip(self.target.blocks())
            .zip(&self.arrangement)
            .map(|((row, &_m), u)| {
                let mut d = CMatrix::zeros(0, 0);
                for (i, &k) in row.iter().enumerate() {
                    if k > 0 {
                        d = d.direct_sum(&CMatrix::identity(k).kron(&a.blocks[i]));
                    }
                }
                u.mul(&d).mul(&u.adjoint())
            })
            .collect();
        AlgebraElement {
            algebra: self.target.clone(),
            blocks,
        }
    }
}

/// Split a unital homomorphism into kernel, image, and the central
/// projection z onto the kernel summand.
pub fn split_homomorphism(
    f: &AlgebraHom,
) -> (MultiMatrixAlgebra, MultiMatrixAlgebra, AlgebraElement) {
    let mut kernel_blocks = Vec::new();
    let mut image_blocks = Vec::new();
    let mut z = f.source.zero();
    for (i, &n) in f.source.blocks().iter().enumerate() {
        let dies = f.mult.iter().all(|row| row[i] == 0);
        if dies {
            kernel_blocks.push(n);
            z.blocks[i] = CMatrix::identity(n);
        } else {
            image_blocks.push(n);
        }
    }
    (
        MultiMatrixAlgebra::new(kernel_blocks),
        MultiMatrixAlgebra::new(image_blocks),
        z,
    )
}

/// The corner algebra pAp and the canonical unitary from the corner of
/// L^2 A onto L^2(pAp).
///
/// The returned matrix has shape dim L^2(pAp) x dim L^2 A; it is unitary
/// on the subspace p L^2(A) p and vanishes on its complement.
pub fn corner(
    a: &MultiMatrixAlgebra,
    p: &AlgebraElement,
    tol: Tolerance,
) -> Result<(MultiMatrixAlgebra, CMatrix), AlgebraError> {
    assert_eq!(p.algebra, *a);
    if !p.is_projection(tol) {
        return Err(AlgebraError::NotProjection);
    }
    let mut corner_blocks = Vec::new();
    let mut u = CMatrix::zeros(0, 0);
    for (i, &_n) in a.blocks().iter().enumerate() {
        let iota = range_isometry(&p.blocks[i], tol)?;
        let r = iota.cols;
        if r == 0 {
            // Zero-rank blocks are dropped; contribute no rows.
            let dead = CMatrix::zeros(0, _n * _n);
            u = u.direct_sum(&dead);
            continue;
        }
        corner_blocks.push(r);
        // x -> iota* x iota, row-major vec: (iota* kron iota^T).
        let block = iota.adjoint().kron(&iota.transpose());
        u = u.direct_sum(&block);
    }
    Ok((MultiMatrixAlgebra::new(corner_blocks), u))
}

/// p L^2(A) q = 0 iff p A q = 0; computes both sides and asserts agreement.
pub fn corner_vanishing(
    a: &MultiMatrixAlgebra,
    p: &AlgebraElement,
    q: &AlgebraElement,
    tol: Tolerance,
) -> Result<bool, AlgebraError> {
    if !p.is_projection(tol) || !q.is_projection(tol) {
        return Err(AlgebraError::NotProjection);
    }
    let mut paq_zero = true;
    for e in a.basis() {
        if p.mul(&e).mul(q).norm() > tol.eps * 10.0 {
            paq_zero = false;
            break;
        }
    }
    // Independent route through the standard form.
    let l2 = l2_standard_form(a);
    let compress = l2.left_action(p).mul(&l2.right_action(q));
    let l2_zero = a
        .basis()
        .iter()
        .all(|e| {
            let v = l2.vec(e);
            let mut img = vec![C64::new(0.0, 0.0); l2.dim];
            for i in 0..l2.dim {
                for j in 0..l2.dim {
                    img[i] += compress[(i, j)] * v[j];
                }
            }
            img.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() <= tol.eps * 10.0
        });
    assert_eq!(paq_zero, l2_zero, "pAq and pL2(A)q vanishing disagree");
    Ok(paq_zero)
}

/// The matrix of xi -> u xi u^* on L^2 A, for a unitary u.
pub fn l2_of_inner_automorphism(
    a: &MultiMatrixAlgebra,
    u: &AlgebraElement,
    tol: Tolerance,
) -> Result<CMatrix, AlgebraError> {
    if !u.is_unitary(tol) {
        return Err(AlgebraError::NotUnitary);
    }
    let l2 = l2_standard_form(a);
    Ok(l2.left_action(u).mul(&l2.right_action(&u.adjoint())))
}

/// Membership in the positive cone: blockwise Hermitian PSD.
pub fn positive_cone_member(x: &AlgebraElement, tol: Tolerance) -> bool {
    x.blocks.iter().all(|m| {
        if !m.is_hermitian(tol) {
            return false;
        }
        match hermitian_eig(m, tol) {
            Ok((lambdas, _)) => lambdas
                .iter()
                .all(|&l| l >= -tol.eps * m.norm().max(1.0)),
            Err(_) => false,
        }
    })
}
