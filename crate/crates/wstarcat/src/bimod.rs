//! Bimodules over multimatrix algebras and Connes fusion.
//!
//! Fusion is multiplicity-matrix contraction; the definitional completion
//! (the quotient of Hom(L2A, X) (x) L2A (x) Hom(L2A, Y) by the null space
//! of its inner product) is implemented as an oracle and compared against
//! the fast form. Associators and unitors are permutation unitaries on
//! multiplicity cells, with a fixed lexicographic basis order: the fused
//! multiplicity index inside a cell enumerates (middle block, left factor
//! index, right factor index).

use crate::algebra::{l2_standard_form, AlgebraElement, MultiMatrixAlgebra};
use crate::linalg::{intertwiner_basis, psd_rank, CMatrix, LinalgError, Tolerance, C64};
use crate::modcat::{ModuleMorphism, ModuleObject};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BimodError {
    #[error("bimodules are not composable: algebras do not match")]
    AlgebraMismatch,
    #[error("oracle spanning set of size {0} exceeds the cap {1}")]
    CapExceeded(usize, usize),
    #[error("fusion Gram matrix is not positive semidefinite")]
    GramNotPSD,
    #[error("action is not unital on block {0}")]
    NotUnital(usize),
    #[error("map cell shapes do not match")]
    ShapeMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A B-A-bimodule classified by its multiplicity matrix
/// (left blocks x right blocks).
///
/// Underlying space: per cell (j, i) the space C^{m_j} (x) C^{k_ji} (x)
/// dual C^{n_i}, cells in lexicographic order, coordinates (a, kappa, b)
/// in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct Bimodule {
    pub left: MultiMatrixAlgebra,
    pub right: MultiMatrixAlgebra,
    pub mult: Vec<Vec<usize>>,
}

impl Bimodule {
    pub fn new(left: MultiMatrixAlgebra, right: MultiMatrixAlgebra, mult: Vec<Vec<usize>>) -> Self {
        assert_eq!(mult.len(), left.num_blocks());
        for row in &mult {
            assert_eq!(row.len(), right.num_blocks());
        }
        Bimodule { left, right, mult }
    }

    /// L^2 A as the identity A-A-bimodule.
    pub fn l2(algebra: &MultiMatrixAlgebra) -> Self {
        let s = algebra.num_blocks();
        let mult = (0..s)
            .map(|j| (0..s).map(|i| usize::from(i == j)).collect())
            .collect();
        Bimodule::new(algebra.clone(), algebra.clone(), mult)
    }

    /// A right A-module (row vector of multiplicities) as a C-A-bimodule.
    pub fn right_module(algebra: &MultiMatrixAlgebra, mult: Vec<usize>) -> Self {
        Bimodule::new(MultiMatrixAlgebra::scalars(), algebra.clone(), vec![mult])
    }

    /// A left A-module (column of multiplicities) as an A-C-bimodule.
    pub fn left_module(algebra: &MultiMatrixAlgebra, mult: Vec<usize>) -> Self {
        Bimodule::new(
            algebra.clone(),
            MultiMatrixAlgebra::scalars(),
            mult.into_iter().map(|x| vec![x]).collect(),
        )
    }

    pub fn zero(left: MultiMatrixAlgebra, right: MultiMatrixAlgebra) -> Self {
        let mult = vec![vec![0; right.num_blocks()]; left.num_blocks()];
        Bimodule::new(left, right, mult)
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(|row| row.iter().all(|&k| k == 0))
    }

    pub fn dim(&self) -> usize {
        let mut d = 0;
        for (j, &m) in self.left.blocks().iter().enumerate() {
            for (i, &n) in self.right.blocks().iter().enumerate() {
                d += m * self.mult[j][i] * n;
            }
        }
        d
    }

    /// Total multiplicity dimension, sum of all cell multiplicities.
    pub fn mult_dim(&self) -> usize {
        self.mult.iter().flat_map(|r| r.iter()).sum()
    }

    /// Offset of cell (j, i) in the underlying-space coordinates.
    fn cell_offset(&self, j: usize, i: usize) -> usize {
        let mut off = 0;
        for jj in 0..self.left.num_blocks() {
            for ii in 0..self.right.num_blocks() {
                if jj == j && ii == i {
                    return off;
                }
                off += self.left.blocks()[jj] * self.mult[jj][ii] * self.right.blocks()[ii];
            }
        }
        unreachable!("cell out of range")
    }

    /// Coordinate of basis vector (j, i, a, kappa, b).
    pub fn coord(&self, j: usize, i: usize, a: usize, kappa: usize, b: usize) -> usize {
        let n = self.right.blocks()[i];
        let k = self.mult[j][i];
        self.cell_offset(j, i) + (a * k + kappa) * n + b
    }

    /// Matrix of the left action of an element of the left algebra.
    pub fn left_action(&self, e: &AlgebraElement) -> CMatrix {
        assert_eq!(e.algebra, self.left);
        let mut out = CMatrix::zeros(0, 0);
        for (j, _) in self.left.blocks().iter().enumerate() {
            for (i, &n) in self.right.blocks().iter().enumerate() {
                let k = self.mult[j][i];
                out = out.direct_sum(&e.blocks[j].kron(&CMatrix::identity(k * n)));
            }
        }
        out
    }

    /// Matrix of the right action of an element of the right algebra.
    pub fn right_action(&self, e: &AlgebraElement) -> CMatrix {
        assert_eq!(e.algebra, self.right);
        let mut out = CMatrix::zeros(0, 0);
        for (j, &m) in self.left.blocks().iter().enumerate() {
            for (i, _) in self.right.blocks().iter().enumerate() {
                let k = self.mult[j][i];
                // The dual-space index transforms by the transpose.
                out = out.direct_sum(&CMatrix::identity(m * k).kron(&e.blocks[i].transpose()));
            }
        }
        out
    }

    pub fn identity_map(&self) -> BimoduleMap {
        BimoduleMap {
            source: self.clone(),
            target: self.clone(),
            cells: self
                .mult
                .iter()
                .map(|row| row.iter().map(|&k| CMatrix::identity(k)).collect())
                .collect(),
        }
    }

    pub fn zero_map_to(&self, target: &Bimodule) -> BimoduleMap {
        assert_eq!(self.left, target.left);
        assert_eq!(self.right, target.right);
        BimoduleMap {
            source: self.clone(),
            target: target.clone(),
            cells: self
                .mult
                .iter()
                .zip(&target.mult)
                .map(|(srow, trow)| {
                    srow.iter()
                        .zip(trow)
                        .map(|(&k, &kp)| CMatrix::zeros(kp, k))
                        .collect()
                })
                .collect(),
        }
    }
}

/// A bimodule map: one k'_{ji} x k_{ji} matrix per cell, acting on
/// multiplicity spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct BimoduleMap {
    pub source: Bimodule,
    pub target: Bimodule,
    pub cells: Vec<Vec<CMatrix>>,
}

impl BimoduleMap {
    pub fn new(source: Bimodule, target: Bimodule, cells: Vec<Vec<CMatrix>>) -> Result<Self, BimodError> {
        if source.left != target.left || source.right != target.right {
            return Err(BimodError::AlgebraMismatch);
        }
        if cells.len() != source.mult.len() {
            return Err(BimodError::ShapeMismatch);
        }
        for ((srow, trow), crow) in source.mult.iter().zip(&target.mult).zip(&cells) {
            if crow.len() != srow.len() {
                return Err(BimodError::ShapeMismatch);
            }
            for ((&k, &kp), c) in srow.iter().zip(trow).zip(crow) {
                if c.rows != kp || c.cols != k {
                    return Err(BimodError::ShapeMismatch);
                }
            }
        }
        Ok(BimoduleMap { source, target, cells })
    }

    pub fn compose(&self, first: &BimoduleMap) -> BimoduleMap {
        assert_eq!(first.target, self.source);
        BimoduleMap {
            source: first.source.clone(),
            target: self.target.clone(),
            cells: self
                .cells
                .iter()
                .zip(&first.cells)
                .map(|(arow, brow)| arow.iter().zip(brow).map(|(a, b)| a.mul(b)).collect())
                .collect(),
        }
    }

    pub fn adjoint(&self) -> BimoduleMap {
        BimoduleMap {
            source: self.target.clone(),
            target: self.source.clone(),
            cells: self
                .cells
                .iter()
                .map(|row| row.iter().map(|c| c.adjoint()).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &BimoduleMap) -> BimoduleMap {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        BimoduleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            cells: self
                .cells
                .iter()
                .zip(&other.cells)
                .map(|(arow, brow)| arow.iter().zip(brow).map(|(a, b)| a.add(b)).collect())
                .collect(),
        }
    }

    pub fn sub(&self, other: &BimoduleMap) -> BimoduleMap {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, z: C64) -> BimoduleMap {
        BimoduleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            cells: self
                .cells
                .iter()
                .map(|row| row.iter().map(|c| c.scale(z)).collect())
                .collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.cells
            .iter()
            .flat_map(|r| r.iter())
            .map(|c| c.norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_unitary(&self, tol: Tolerance) -> bool {
        self.cells.iter().flat_map(|r| r.iter()).all(|c| {
            c.rows == c.cols
                && tol.admits(
                    c.adjoint().mul(c).sub(&CMatrix::identity(c.cols)).norm(),
                    c.norm(),
                )
        })
    }
}

/// Connes fusion by multiplicity contraction: mult(X (*) Y) = mult X . mult Y.
pub fn fuse(x: &Bimodule, y: &Bimodule) -> Result<Bimodule, BimodError> {
    if x.right != y.left {
        return Err(BimodError::AlgebraMismatch);
    }
    let s = x.right.num_blocks();
    let mult = x
        .mult
        .iter()
        .map(|xrow| {
            (0..y.right.num_blocks())
                .map(|c| (0..s).map(|i| xrow[i] * y.mult[i][c]).sum())
                .collect()
        })
        .collect();
    Ok(Bimodule::new(x.left.clone(), y.right.clone(), mult))
}

/// Index of (i, kx, ky) in the fused multiplicity cell (j, c).
fn fused_index(x: &Bimodule, y: &Bimodule, j: usize, c: usize, i: usize, kx: usize, ky: usize) -> usize {
    let mut idx = 0;
    for ii in 0..i {
        idx += x.mult[j][ii] * y.mult[ii][c];
    }
    idx + kx * y.mult[i][c] + ky
}

/// Fusion of maps: cellwise direct sum over the middle block of tensor
/// products of the factors' cells.
pub fn fuse_map(f: &BimoduleMap, g: &BimoduleMap) -> Result<BimoduleMap, BimodError> {
    let source = fuse(&f.source, &g.source)?;
    let target = fuse(&f.target, &g.target)?;
    let s = f.source.right.num_blocks();
    let mut cells = Vec::with_capacity(source.mult.len());
    for j in 0..source.mult.len() {
        let mut row = Vec::with_capacity(source.mult[j].len());
        for c in 0..source.mult[j].len() {
            let mut cell = CMatrix::zeros(target.mult[j][c], source.mult[j][c]);
            for i in 0..s {
                let fc = &f.cells[j][i];
                let gc = &g.cells[i][c];
                for r1 in 0..fc.rows {
                    for c1 in 0..fc.cols {
                        for r2 in 0..gc.rows {
                            for c2 in 0..gc.cols {
                                let v = fc[(r1, c1)] * gc[(r2, c2)];
                                if v.norm_sqr() == 0.0 {
                                    continue;
                                }
                                let tr = fused_index(&f.target, &g.target, j, c, i, r1, r2);
                                let sc = fused_index(&f.source, &g.source, j, c, i, c1, c2);
                                cell[(tr, sc)] += v;
                            }
                        }
                    }
                }
            }
            row.push(cell);
        }
        cells.push(row);
    }
    BimoduleMap::new(source, target, cells)
}

/// The associator (X (*) Y) (*) Z -> X (*) (Y (*) Z), a permutation of the
/// fused multiplicity enumeration.
pub fn associator(x: &Bimodule, y: &Bimodule, z: &Bimodule) -> Result<BimoduleMap, BimodError> {
    let xy = fuse(x, y)?;
    let yz = fuse(y, z)?;
    let source = fuse(&xy, z)?;
    let target = fuse(x, &yz)?;
    let mut cells = Vec::with_capacity(source.mult.len());
    for j in 0..source.mult.len() {
        let mut row = Vec::with_capacity(source.mult[j].len());
        for d in 0..source.mult[j].len() {
            let mut cell = CMatrix::zeros(target.mult[j][d], source.mult[j][d]);
            for c in 0..z.left.num_blocks() {
                for i in 0..y.left.num_blocks() {
                    for kx in 0..x.mult[j][i] {
                        for ky in 0..y.mult[i][c] {
                            for kz in 0..z.mult[c][d] {
                                let kxy = fused_index(x, y, j, c, i, kx, ky);
                                let src = fused_index(&xy, z, j, d, c, kxy, kz);
                                let kyz = fused_index(y, z, i, d, c, ky, kz);
                                let tgt = fused_index(x, &yz, j, d, i, kx, kyz);
                                cell[(tgt, src)] = C64::new(1.0, 0.0);
                            }
                        }
                    }
                }
            }
            row.push(cell);
        }
        cells.push(row);
    }
    BimoduleMap::new(source, target, cells)
}

/// The left unitor L^2 B (*) X -> X. With the canonical enumeration this
/// is the identity on every cell.
pub fn left_unitor(x: &Bimodule) -> Result<BimoduleMap, BimodError> {
    let source = fuse(&Bimodule::l2(&x.left), x)?;
    let mut out = x.identity_map();
    out.source = source;
    Ok(out)
}

/// The right unitor X (*) L^2 A -> X.
pub fn right_unitor(x: &Bimodule) -> Result<BimoduleMap, BimodError> {
    let source = fuse(x, &Bimodule::l2(&x.right))?;
    let mut out = x.identity_map();
    out.source = source;
    Ok(out)
}

/// The conjugate bimodule: mult transposed, cells canonically identified.
pub fn conjugate(x: &Bimodule) -> Bimodule {
    let mult = (0..x.right.num_blocks())
        .map(|i| (0..x.left.num_blocks()).map(|j| x.mult[j][i]).collect())
        .collect();
    Bimodule::new(x.right.clone(), x.left.clone(), mult)
}

/// Conjugate of a bimodule map: entrywise conjugate cells, transposed cell grid.
pub fn conjugate_map(f: &BimoduleMap) -> BimoduleMap {
    let source = conjugate(&f.source);
    let target = conjugate(&f.target);
    let cells = (0..source.mult.len())
        .map(|i| {
            (0..source.mult[i].len())
                .map(|j| f.cells[j][i].conj())
                .collect()
        })
        .collect();
    BimoduleMap { source, target, cells }
}

/// The unitary nu: conj(Y) (*) conj(X) -> conj(X (*) Y), swapping the two
/// factor indices inside each fused cell.
pub fn nu_unitary(x: &Bimodule, y: &Bimodule) -> Result<BimoduleMap, BimodError> {
    if x.right != y.left {
        return Err(BimodError::AlgebraMismatch);
    }
    let cy = conjugate(y);
    let cx = conjugate(x);
    let source = fuse(&cy, &cx)?;
    let target = conjugate(&fuse(x, y)?);
    let mut cells = Vec::with_capacity(source.mult.len());
    for c in 0..source.mult.len() {
        let mut row = Vec::with_capacity(source.mult[c].len());
        for j in 0..source.mult[c].len() {
            let mut cell = CMatrix::zeros(target.mult[c][j], source.mult[c][j]);
            for i in 0..y.left.num_blocks() {
                for ky in 0..y.mult[i][c] {
                    for kx in 0..x.mult[j][i] {
                        let src = fused_index(&cy, &cx, c, j, i, ky, kx);
                        let tgt = fused_index(x, y, j, c, i, kx, ky);
                        cell[(tgt, src)] = C64::new(1.0, 0.0);
                    }
                }
            }
            row.push(cell);
        }
        cells.push(row);
    }
    BimoduleMap::new(source, target, cells)
}

/// Witness produced by the definitional fusion oracle.
#[derive(Debug, Clone)]
pub struct FusionWitness {
    pub fused: Bimodule,
    /// Evaluation of the spanning vectors phi (x) xi (x) psi in the
    /// fast-form space, one column per spanning vector.
    pub basis_map: CMatrix,
    /// Gram matrix of the defining inner product on the spanning set.
    pub gram: CMatrix,
    /// Rank of the Gram matrix: the dimension of the completion.
    pub dimension: usize,
    /// || basis_map* basis_map - gram ||, the unitarity defect of the
    /// induced map from the completion onto the fast-form space.
    pub residual: f64,
}

impl FusionWitness {
    pub fn is_unitary(&self, tol: Tolerance) -> bool {
        self.dimension == self.fused.dim()
            && tol.admits(self.residual, self.gram.norm())
    }
}

pub const DEFAULT_ORACLE_CAP: usize = 4096;

/// The definitional Connes fusion oracle.
///
/// Builds bases of Hom_A(L2A, X) and Hom_A(L2A, Y) by nullspace solving,
/// forms the Gram matrix of the defining inner product on the spanning
/// set phi (x) xi (x) psi, and evaluates each spanning vector in the
/// fast-form space. The rank of the Gram matrix is the dimension of the
/// completion; basis_map* basis_map = gram certifies that evaluation
/// induces a unitary from the completion onto the fast form.
pub fn fuse_oracle(
    x: &Bimodule,
    y: &Bimodule,
    tol: Tolerance,
    cap: usize,
) -> Result<FusionWitness, BimodError> {
    if x.right != y.left {
        return Err(BimodError::AlgebraMismatch);
    }
    let a = &x.right;
    let fused = fuse(x, y)?;
    let l2 = l2_standard_form(a);
    let l2bim = Bimodule::l2(a);
    let basis_a = a.basis();

    // Hom of right A-modules L2A -> X.
    let lhs_r: Vec<CMatrix> = basis_a.iter().map(|e| l2bim.right_action(e)).collect();
    let rhs_r: Vec<CMatrix> = basis_a.iter().map(|e| x.right_action(e)).collect();
    let phis = intertwiner_basis(&lhs_r, &rhs_r, tol)?;

    // Hom of left A-modules L2A -> Y.
    let lhs_l: Vec<CMatrix> = basis_a.iter().map(|e| l2bim.left_action(e)).collect();
    let rhs_l: Vec<CMatrix> = basis_a.iter().map(|e| y.left_action(e)).collect();
    let psis = intertwiner_basis(&lhs_l, &rhs_l, tol)?;

    let spanning = phis.len() * l2.dim * psis.len();
    if spanning > cap {
        return Err(BimodError::CapExceeded(spanning, cap));
    }

    // lambda^{-1}(phi* phi') and rho^{-1}(psi* psi') via evaluation at the
    // unit vector of L2A.
    let unit = l2.vec(&a.identity());
    let eval_at_unit = |op: &CMatrix| -> AlgebraElement {
        let mut v = vec![C64::new(0.0, 0.0); op.rows];
        for i in 0..op.rows {
            for j in 0..op.cols {
                v[i] += op[(i, j)] * unit[j];
            }
        }
        l2.unvec(&v)
    };
    let a_pair: Vec<Vec<AlgebraElement>> = phis
        .iter()
        .map(|p1| {
            phis.iter()
                .map(|p2| eval_at_unit(&p1.adjoint().mul(p2)))
                .collect()
        })
        .collect();
    let b_pair: Vec<Vec<AlgebraElement>> = psis
        .iter()
        .map(|q1| {
            psis.iter()
                .map(|q2| eval_at_unit(&q1.adjoint().mul(q2)))
                .collect()
        })
        .collect();

    // Gram entries <xi_mu, a xi_mu' b> on the matrix-unit basis of L2A:
    // the (mu, mu') entry of the matrix of xi -> a xi b.
    let d = l2.dim;
    let n_span = spanning;
    let mut gram = CMatrix::zeros(n_span, n_span);
    for (a1, row_a) in a_pair.iter().enumerate() {
        for (a2, elem_a) in row_a.iter().enumerate() {
            let la = l2.left_action(elem_a);
            for (b1, row_b) in b_pair.iter().enumerate() {
                for (b2, elem_b) in row_b.iter().enumerate() {
                    let m = la.mul(&l2.right_action(elem_b));
                    for mu in 0..d {
                        for mup in 0..d {
                            let r = (a1 * d + mu) * psis.len() + b1;
                            let c = (a2 * d + mup) * psis.len() + b2;
                            gram[(r, c)] = m[(mu, mup)];
                        }
                    }
                }
            }
        }
    }

    // Evaluation in the fast form: contract phi(xi) against psi(1) over
    // the middle algebra index.
    let psi_units: Vec<Vec<C64>> = psis
        .iter()
        .map(|q| {
            let mut v = vec![C64::new(0.0, 0.0); q.rows];
            for i in 0..q.rows {
                for j in 0..q.cols {
                    v[i] += q[(i, j)] * unit[j];
                }
            }
            v
        })
        .collect();
    let mut basis_map = CMatrix::zeros(fused.dim(), n_span);
    for (ai, phi) in phis.iter().enumerate() {
        for mu in 0..d {
            let xvec = phi.column(mu);
            for (bi, yvec) in psi_units.iter().enumerate() {
                let col = (ai * d + mu) * psis.len() + bi;
                // Contract x in X with y in Y over (A-block i, A index b).
                for j in 0..x.left.num_blocks() {
                    for c in 0..y.right.num_blocks() {
                        for i in 0..a.num_blocks() {
                            let n = a.blocks()[i];
                            for aa in 0..x.left.blocks()[j] {
                                for kx in 0..x.mult[j][i] {
                                    for ky in 0..y.mult[i][c] {
                                        for g in 0..y.right.blocks()[c] {
                                            let mut acc = C64::new(0.0, 0.0);
                                            for b in 0..n {
                                                acc += xvec[x.coord(j, i, aa, kx, b)]
                                                    * yvec[y.coord(i, c, b, ky, g)];
                                            }
                                            if acc.norm_sqr() > 0.0 {
                                                let kf = fused_index(x, y, j, c, i, kx, ky);
                                                basis_map[(fused.coord(j, c, aa, kf, g), col)] += acc;
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let dimension = psd_rank(&gram, tol).map_err(|_| BimodError::GramNotPSD)?;
    let residual = basis_map.adjoint().mul(&basis_map).sub(&gram).norm();
    Ok(FusionWitness {
        fused,
        basis_map,
        gram,
        dimension,
        residual,
    })
}

/// Action of an algebra A on an object c of D-Mod: a unital homomorphism
/// A -> End(c), kept aligned with all blocks of D (zero rows allowed on
/// blocks where c vanishes).
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectAction {
    pub algebra: MultiMatrixAlgebra,
    pub object: ModuleObject,
    /// mult[b][i]: copies of A-block i inside the multiplicity space of
    /// D-block b; unitality: sum_i mult[b][i] n_i = object.mult[b].
    pub mult: Vec<Vec<usize>>,
}

impl ObjectAction {
    pub fn new(
        algebra: MultiMatrixAlgebra,
        object: ModuleObject,
        mult: Vec<Vec<usize>>,
    ) -> Result<Self, BimodError> {
        assert_eq!(mult.len(), object.mult.len());
        for (b, row) in mult.iter().enumerate() {
            assert_eq!(row.len(), algebra.num_blocks());
            let covered: usize = row
                .iter()
                .zip(algebra.blocks())
                .map(|(&k, &n)| k * n)
                .sum();
            if covered != object.mult[b] {
                return Err(BimodError::NotUnital(b));
            }
        }
        Ok(ObjectAction { algebra, object, mult })
    }

    /// The tautological action of A on L^2 A viewed inside A-Mod.
    pub fn l2_action(algebra: &MultiMatrixAlgebra) -> Self {
        let object = ModuleObject::l2(algebra);
        let s = algebra.num_blocks();
        let mult = (0..s)
            .map(|b| (0..s).map(|i| usize::from(i == b)).collect())
            .collect();
        ObjectAction {
            algebra: algebra.clone(),
            object,
            mult,
        }
    }
}

/// Fusion of a bimodule with an object carrying an action of its right
/// algebra: returns the new object and the induced action of the left
/// algebra on it.
///
/// The result multiplicity over D-block b enumerates (i, kappa_H,
/// kappa_action) lexicographically.
pub fn fuse_with_object(
    h: &Bimodule,
    action: &ObjectAction,
) -> Result<(ModuleObject, ObjectAction), BimodError> {
    if h.right != action.algebra {
        return Err(BimodError::AlgebraMismatch);
    }
    let d_blocks = action.object.mult.len();
    let mut mult = vec![0usize; d_blocks];
    let mut induced = vec![vec![0usize; h.left.num_blocks()]; d_blocks];
    for b in 0..d_blocks {
        for (j, &_m) in h.left.blocks().iter().enumerate() {
            let copies: usize = (0..h.right.num_blocks())
                .map(|i| h.mult[j][i] * action.mult[b][i])
                .sum();
            induced[b][j] = copies;
        }
        mult[b] = induced[b]
            .iter()
            .zip(h.left.blocks())
            .map(|(&k, &n)| k * n)
            .sum();
    }
    let object = ModuleObject::new(action.object.algebra.clone(), mult);
    let induced_action = ObjectAction::new(h.left.clone(), object.clone(), induced)?;
    Ok((object, induced_action))
}

/// Functorial action on maps of bimodules: a map f: H -> H' induces a
/// module morphism H (*) c -> H' (*) c.
pub fn fuse_map_with_object(
    f: &BimoduleMap,
    action: &ObjectAction,
) -> Result<ModuleMorphism, BimodError> {
    let (src, _) = fuse_with_object(&f.source, action)?;
    let (tgt, _) = fuse_with_object(&f.target, action)?;
    let mut blocks = Vec::with_capacity(src.mult.len());
    for b in 0..src.mult.len() {
        let mut m = CMatrix::zeros(tgt.mult[b], src.mult[b]);
        // The result multiplicity coordinates on D-block b enumerate, for
        // each left-algebra block j, the tuples (i, kappa_H, kappa_act)
        // lexicographically, each carrying m_j coordinates.
        let mut s_base = 0usize;
        let mut t_base = 0usize;
        for (j, &mj) in f.source.left.blocks().iter().enumerate() {
            let s_tuples: usize = (0..f.source.right.num_blocks())
                .map(|i| f.source.mult[j][i] * action.mult[b][i])
                .sum();
            let t_tuples: usize = (0..f.target.right.num_blocks())
                .map(|i| f.target.mult[j][i] * action.mult[b][i])
                .sum();
            for i in 0..f.source.right.num_blocks() {
                let ka_count = action.mult[b][i];
                let cell = &f.cells[j][i];
                let s_inner: usize = (0..i)
                    .map(|ii| f.source.mult[j][ii] * action.mult[b][ii])
                    .sum();
                let t_inner: usize = (0..i)
                    .map(|ii| f.target.mult[j][ii] * action.mult[b][ii])
                    .sum();
                for kh in 0..cell.cols {
                    for khp in 0..cell.rows {
                        let v = cell[(khp, kh)];
                        if v.norm_sqr() == 0.0 {
                            continue;
                        }
                        for ka in 0..ka_count {
                            let sc = s_inner + kh * ka_count + ka;
                            let tr = t_inner + khp * ka_count + ka;
                            for a in 0..mj {
                                m[(t_base + tr * mj + a, s_base + sc * mj + a)] = v;
                            }
                        }
                    }
                }
            }
            s_base += s_tuples * mj;
            t_base += t_tuples * mj;
        }
        blocks.push(m);
    }
    ModuleMorphism::new(src, tgt, blocks).map_err(|_| BimodError::ShapeMismatch)
}

/// The tensorator: a pair of modules over A and B as a module over the
/// spatial tensor product, with multiplicities multiplied.
pub fn kron_equivalence(h: &ModuleObject, k: &ModuleObject) -> ModuleObject {
    let algebra = crate::algebra::spatial_tensor(&h.algebra, &k.algebra);
    let mut mult = Vec::with_capacity(h.mult.len() * k.mult.len());
    for &x in &h.mult {
        for &y in &k.mult {
            mult.push(x * y);
        }
    }
    ModuleObject::new(algebra, mult)
}
