//! Dense complex linear algebra used by everything downstream.
//!
//! Self-contained: Hermitian eigendecomposition (cyclic Jacobi), polar
//! decomposition, range isometries, intertwiner-space solving, and the
//! tolerance-based predicates. Matrices are row-major `Complex64`.

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,
    #[error("Jacobi sweeps exceeded the iteration cap")]
    NoConvergence,
    #[error("matrix is not an orthogonal projection within tolerance")]
    NotProjection,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Absolute-plus-relative tolerance: predicates accept a residual r when
/// `r <= eps * max(1, scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(eps: f64) -> Self {
        assert!(eps > 0.0, "tolerance must be positive");
        Tolerance { eps }
    }

    pub fn admits(&self, residual: f64, scale: f64) -> bool {
        residual <= self.eps * scale.max(1.0)
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        CMatrix { rows: r, cols: c, data }
    }

    pub fn from_real(rows: &[Vec<f64>]) -> Self {
        let converted: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        CMatrix::from_rows(&converted)
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, z: C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * z).collect(),
        }
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn direct_sum(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Trace inner product <A,B> = Tr(A* B).
    pub fn trace_dot(&self, other: &CMatrix) -> C64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn submatrix(&self, row_range: std::ops::Range<usize>, col_range: std::ops::Range<usize>) -> CMatrix {
        let mut out = CMatrix::zeros(row_range.len(), col_range.len());
        for (oi, i) in row_range.clone().enumerate() {
            for (oj, j) in col_range.clone().enumerate() {
                out[(oi, oj)] = self[(i, j)];
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Columns selected by index, in order.
    pub fn select_columns(&self, idx: &[usize]) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows, idx.len());
        for (oj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, oj)] = self[(i, j)];
            }
        }
        out
    }

    /// Permutation matrix P with P e_j = e_{perm[j]}.
    pub fn permutation(perm: &[usize]) -> CMatrix {
        let n = perm.len();
        let mut m = CMatrix::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn is_hermitian(&self, tol: Tolerance) -> bool {
        self.is_square() && tol.admits(self.sub(&self.adjoint()).norm(), self.norm())
    }

    pub fn is_unitary(&self, tol: Tolerance) -> bool {
        self.is_square()
            && tol.admits(
                self.adjoint().mul(self).sub(&CMatrix::identity(self.cols)).norm(),
                self.norm(),
            )
    }

    /// Columns orthonormal: U* U = I.
    pub fn is_isometry(&self, tol: Tolerance) -> bool {
        tol.admits(
            self.adjoint().mul(self).sub(&CMatrix::identity(self.cols)).norm(),
            self.norm(),
        )
    }

    pub fn is_projection(&self, tol: Tolerance) -> bool {
        self.is_square()
            && tol.admits(self.sub(&self.adjoint()).norm(), self.norm())
            && tol.admits(self.mul(self).sub(self).norm(), self.norm())
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

const JACOBI_SWEEP_CAP: usize = 100;

/// Hermitian eigendecomposition by cyclic Jacobi.
///
/// Returns eigenvalues ascending and a unitary U with M U = U diag(lambda).
pub fn hermitian_eig(m: &CMatrix, tol: Tolerance) -> Result<(Vec<f64>, CMatrix), LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::DimensionMismatch(format!(
            "{}x{} is not square",
            m.rows, m.cols
        )));
    }
    if !m.is_hermitian(tol) {
        return Err(LinalgError::NotHermitian);
    }
    let n = m.rows;
    // Symmetrize; the input is only Hermitian within tolerance.
    let mut a = m.add(&m.adjoint()).scale(C64::new(0.5, 0.0));
    let mut u = CMatrix::identity(n);
    let scale = a.norm();
    let threshold = tol.eps * scale.max(1.0) * 1e-3;

    let off = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _sweep in 0..JACOBI_SWEEP_CAP {
        if off(&a) <= tol.eps * scale.max(1.0) {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = a[(p, q)];
                if beta.norm() <= threshold {
                    continue;
                }
                // Diagonalize the 2x2 Hermitian block [[alpha, beta], [conj beta, gamma]].
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                let half = 0.5 * (alpha - gamma);
                let disc = (half * half + beta.norm_sqr()).sqrt();
                // Eigenvector for the larger eigenvalue: (beta, lambda1 - alpha).
                // lambda1 - alpha = disc - half cancels catastrophically when
                // half > 0 and beta is small; use the stable quotient form.
                let lam_minus_alpha = if half >= 0.0 {
                    beta.norm_sqr() / (disc + half)
                } else {
                    disc - half
                };
                let v0 = beta;
                let v1 = C64::new(lam_minus_alpha, 0.0);
                let nv = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
                let (c0, c1) = (v0 / nv, v1 / nv);
                // 2x2 unitary columns (c0, c1) and (-conj(c1), conj(c0)).
                let (d0, d1) = (-c1.conj(), c0.conj());
                // A <- J* A J on rows/cols p, q; U <- U J.
                for j in 0..n {
                    let (apj, aqj) = (a[(p, j)], a[(q, j)]);
                    a[(p, j)] = c0.conj() * apj + c1.conj() * aqj;
                    a[(q, j)] = d0.conj() * apj + d1.conj() * aqj;
                }
                for i in 0..n {
                    let (aip, aiq) = (a[(i, p)], a[(i, q)]);
                    a[(i, p)] = aip * c0 + aiq * c1;
                    a[(i, q)] = aip * d0 + aiq * d1;
                    let (uip, uiq) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = uip * c0 + uiq * c1;
                    u[(i, q)] = uip * d0 + uiq * d1;
                }
            }
        }
    }
    if !converged && off(&a) > tol.eps * scale.max(1.0) {
        return Err(LinalgError::NoConvergence);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let u_sorted = u.select_columns(&order);
    Ok((eigenvalues, u_sorted))
}

/// M = v p with p = sqrt(M* M) >= 0 and v a partial isometry vanishing on ker p.
pub fn polar_decompose(m: &CMatrix, tol: Tolerance) -> Result<(CMatrix, CMatrix), LinalgError> {
    let h = m.adjoint().mul(m);
    let (lambdas, u) = hermitian_eig(&h, tol)?;
    let sigma_max = lambdas.last().map(|l| l.max(0.0).sqrt()).unwrap_or(0.0);
    let cut = tol.eps * sigma_max.max(1.0);
    let sqrt_l: Vec<C64> = lambdas
        .iter()
        .map(|&l| C64::new(l.max(0.0).sqrt(), 0.0))
        .collect();
    let inv_l: Vec<C64> = lambdas
        .iter()
        .map(|&l| {
            let s = l.max(0.0).sqrt();
            if s > cut {
                C64::new(1.0 / s, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    let p = u.mul(&CMatrix::diag(&sqrt_l)).mul(&u.adjoint());
    let v = m.mul(&u).mul(&CMatrix::diag(&inv_l)).mul(&u.adjoint());
    Ok((v, p))
}

/// An isometry iota with iota iota* = p and iota* iota = id on rank(p) columns.
pub fn range_isometry(p: &CMatrix, tol: Tolerance) -> Result<CMatrix, LinalgError> {
    if !p.is_projection(tol) {
        return Err(LinalgError::NotProjection);
    }
    let (lambdas, u) = hermitian_eig(p, tol)?;
    let keep: Vec<usize> = lambdas
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0.5)
        .map(|(i, _)| i)
        .collect();
    Ok(u.select_columns(&keep))
}

/// Orthonormal basis (trace inner product) of {x : V -> W | x lhs_k = rhs_k x for all k}.
pub fn intertwiner_basis(
    lhs: &[CMatrix],
    rhs: &[CMatrix],
    tol: Tolerance,
) -> Result<Vec<CMatrix>, LinalgError> {
    if lhs.len() != rhs.len() {
        return Err(LinalgError::DimensionMismatch(
            "constraint lists have different lengths".into(),
        ));
    }
    let v = lhs.first().map(|m| m.rows).unwrap_or(0);
    let w = rhs.first().map(|m| m.rows).unwrap_or(0);
    for m in lhs {
        if !m.is_square() || m.rows != v {
            return Err(LinalgError::DimensionMismatch("lhs sizes differ".into()));
        }
    }
    for m in rhs {
        if !m.is_square() || m.rows != w {
            return Err(LinalgError::DimensionMismatch("rhs sizes differ".into()));
        }
    }
    if lhs.is_empty() {
        return Err(LinalgError::DimensionMismatch(
            "need at least one constraint to fix dimensions".into(),
        ));
    }

    // Column-major vectorization: vec(A X B) = (B^T kron A) vec(X).
    // x L - R x = 0 becomes (L^T kron I_w - I_v kron R) vec(x) = 0.
    let dim = w * v;
    let mut gram = CMatrix::zeros(dim, dim);
    for (l, r) in lhs.iter().zip(rhs.iter()) {
        let c = l
            .transpose()
            .kron(&CMatrix::identity(w))
            .sub(&CMatrix::identity(v).kron(r));
        gram = gram.add(&c.adjoint().mul(&c));
    }
    let (lambdas, u) = hermitian_eig(&gram, tol)?;
    let lmax: f64 = lambdas.last().copied().unwrap_or(0.0);
    let cut = tol.eps * lmax.max(1.0);
    let mut basis = Vec::new();
    for (k, &l) in lambdas.iter().enumerate() {
        if l <= cut {
            let col = u.column(k);
            let mut x = CMatrix::zeros(w, v);
            for j in 0..v {
                for i in 0..w {
                    x[(i, j)] = col[j * w + i];
                }
            }
            basis.push(x);
        }
    }
    Ok(basis)
}

/// Rank of a PSD matrix by pivoted Cholesky. Returns Err(()) when a pivot is
/// negative beyond tolerance (the matrix is not PSD).
pub fn psd_rank(g: &CMatrix, tol: Tolerance) -> Result<usize, ()> {
    assert!(g.is_square());
    let n = g.rows;
    let mut a = g.add(&g.adjoint()).scale(C64::new(0.5, 0.0));
    let scale = (0..n).map(|i| a[(i, i)].re).fold(0.0f64, f64::max);
    let cut = tol.eps * scale.max(1.0);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    for k in 0..n {
        // Pick the largest remaining diagonal pivot.
        let (piv, pval) = (k..n)
            .map(|i| (i, a[(perm[i], perm[i])].re))
            .fold((k, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if pval < -cut * 10.0 {
            return Err(());
        }
        if pval <= cut {
            // Remaining diagonal is numerically zero; confirm no large negatives.
            for i in k..n {
                if a[(perm[i], perm[i])].re < -cut * 10.0 {
                    return Err(());
                }
            }
            break;
        }
        perm.swap(k, piv);
        rank += 1;
        let pk = perm[k];
        let d = pval;
        for x in (k + 1)..n {
            for y in (k + 1)..n {
                let (px, py) = (perm[x], perm[y]);
                let update = a[(px, pk)] * a[(pk, py)] / d;
                a[(px, py)] -= update;
            }
        }
        for x in (k + 1)..n {
            let px = perm[x];
            a[(px, pk)] = C64::new(0.0, 0.0);
            a[(pk, px)] = C64::new(0.0, 0.0);
        }
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn eig_identity() {
        let (l, u) = hermitian_eig(&CMatrix::identity(2), tol()).unwrap();
        assert!((l[0] - 1.0).abs() < 1e-12 && (l[1] - 1.0).abs() < 1e-12);
        assert!(u.is_unitary(tol()));
    }

    #[test]
    fn eig_diagonal_sorts_ascending() {
        let m = CMatrix::diag(&[c(3.0, 0.0), c(-1.0, 0.0)]);
        let (l, _) = hermitian_eig(&m, tol()).unwrap();
        assert!((l[0] + 1.0).abs() < 1e-12 && (l[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eig_pauli_x() {
        // Hand oracle: characteristic polynomial lambda^2 - 1.
        let m = CMatrix::from_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let (l, u) = hermitian_eig(&m, tol()).unwrap();
        assert!((l[0] + 1.0).abs() < 1e-10 && (l[1] - 1.0).abs() < 1e-10);
        let recon = u.mul(&CMatrix::diag(&[c(l[0], 0.0), c(l[1], 0.0)])).mul(&u.adjoint());
        assert!(recon.sub(&m).norm() < 1e-10);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = CMatrix::from_real(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert_eq!(hermitian_eig(&m, tol()).unwrap_err(), LinalgError::NotHermitian);
    }

    #[test]
    fn polar_of_unitary() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u0 = CMatrix::from_real(&[vec![s, -s], vec![s, s]]);
        let (v, p) = polar_decompose(&u0, tol()).unwrap();
        assert!(v.sub(&u0).norm() < 1e-9);
        assert!(p.sub(&CMatrix::identity(2)).norm() < 1e-9);
    }

    #[test]
    fn polar_of_zero() {
        let z = CMatrix::zeros(2, 2);
        let (v, p) = polar_decompose(&z, tol()).unwrap();
        assert_eq!(v.norm(), 0.0);
        assert_eq!(p.norm(), 0.0);
    }

    #[test]
    fn polar_diag_2_0() {
        let m = CMatrix::from_real(&[vec![2.0, 0.0], vec![0.0, 0.0]]);
        let (v, p) = polar_decompose(&m, tol()).unwrap();
        assert!(v.sub(&CMatrix::from_real(&[vec![1.0, 0.0], vec![0.0, 0.0]])).norm() < 1e-9);
        assert!(p.sub(&m).norm() < 1e-9);
        // v* v is the support projection of p.
        let supp = v.adjoint().mul(&v);
        assert!(supp.sub(&CMatrix::from_real(&[vec![1.0, 0.0], vec![0.0, 0.0]])).norm() < 1e-9);
    }

    #[test]
    fn range_isometry_full_and_zero() {
        let full = range_isometry(&CMatrix::identity(3), tol()).unwrap();
        assert_eq!(full.cols, 3);
        assert!(full.mul(&full.adjoint()).sub(&CMatrix::identity(3)).norm() < 1e-9);
        let none = range_isometry(&CMatrix::zeros(2, 2), tol()).unwrap();
        assert_eq!(none.cols, 0);
    }

    #[test]
    fn range_isometry_rank_one() {
        let p = CMatrix::from_real(&[vec![0.5, 0.5], vec![0.5, 0.5]]);
        let iota = range_isometry(&p, tol()).unwrap();
        assert_eq!(iota.cols, 1);
        assert!(iota.mul(&iota.adjoint()).sub(&p).norm() < 1e-9);
        assert!(iota.adjoint().mul(&iota).sub(&CMatrix::identity(1)).norm() < 1e-9);
    }

    #[test]
    fn range_isometry_rejects_non_projection() {
        let m = CMatrix::from_real(&[vec![2.0, 0.0], vec![0.0, 0.0]]);
        assert_eq!(range_isometry(&m, tol()).unwrap_err(), LinalgError::NotProjection);
    }

    #[test]
    fn intertwiners_of_identity() {
        let basis = intertwiner_basis(&[CMatrix::identity(2)], &[CMatrix::identity(2)], tol()).unwrap();
        assert_eq!(basis.len(), 4);
    }

    #[test]
    fn intertwiners_of_full_matrix_algebra() {
        // Generators spanning M_2: commutant is the scalars.
        let gens: Vec<CMatrix> = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| {
                let mut e = CMatrix::zeros(2, 2);
                e[(i, j)] = c(1.0, 0.0);
                e
            })
            .collect();
        let basis = intertwiner_basis(&gens, &gens, tol()).unwrap();
        assert_eq!(basis.len(), 1);
    }

    #[test]
    fn intertwiners_of_distinct_diagonal() {
        let g = CMatrix::diag(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let basis = intertwiner_basis(&[g.clone()], &[g], tol()).unwrap();
        assert_eq!(basis.len(), 2);
        for x in &basis {
            for y in &basis {
                let ip = x.trace_dot(y);
                let expect = if std::ptr::eq(x, y) { 1.0 } else { 0.0 };
                assert!((ip - c(expect, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn psd_rank_basic() {
        let g = CMatrix::from_real(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert_eq!(psd_rank(&g, tol()).unwrap(), 1);
        assert_eq!(psd_rank(&CMatrix::identity(3), tol()).unwrap(), 3);
        assert_eq!(psd_rank(&CMatrix::zeros(2, 2), tol()).unwrap(), 0);
        let neg = CMatrix::from_real(&[vec![1.0, 0.0], vec![0.0, -1.0]]);
        assert!(psd_rank(&neg, tol()).is_err());
    }
}
