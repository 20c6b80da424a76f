//! Dense matrices over [`Scalar`] with exact rank/kernel/determinant
//! decisions on the exact path and tolerance-based decisions on the float
//! path.
//!
//! Kernel bases are deterministic: reduced row echelon form with pivot
//! order fixed by column index, free variables set to one in column order.

use crate::error::{Error, Result};
use crate::scalar::{Scalar, C64};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect()).collect(),
        )
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(Scalar::is_exact)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs).fold(0.0, f64::max)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        self.map(|v| v * s)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add: shape mismatch");
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub: shape mismatch");
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn neg(&self) -> Matrix {
        self.map(|v| -v)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "mul: shape mismatch");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                acc = &acc + &(self.get(i, k) * other.get(k, j));
            }
            acc
        })
    }

    pub fn pow(&self, e: u32) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn hstack(blocks: &[&Matrix]) -> Matrix {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        assert!(blocks.iter().all(|b| b.rows == rows));
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    m.set(i, off + j, b.get(i, j).clone());
                }
            }
            off += b.cols;
        }
        m
    }

    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols;
        assert!(blocks.iter().all(|b| b.cols == cols));
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..cols {
                    m.set(off + i, j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn column(&self, j: usize) -> Matrix {
        Matrix::from_fn(self.rows, 1, |i, _| self.get(i, j).clone())
    }

    pub fn columns(&self, js: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, js.len(), |i, k| self.get(i, js[k]).clone())
    }

    pub fn col_vector(entries: Vec<Scalar>) -> Matrix {
        let n = entries.len();
        Matrix { rows: n, cols: 1, data: entries }
    }

    /// Frobenius norm via float conversion; exact matrices report the norm of
    /// their float image.
    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|v| v.abs().powi(2)).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let scale = self.max_abs().max(1.0);
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = self.get(i, j) - &self.get(j, i).conj();
                if self.is_exact() {
                    if !d.is_zero() {
                        return false;
                    }
                } else if d.abs() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::Dimension("hermitian check on non-square matrix".into()));
        }
        let scale = self.max_abs().max(1.0);
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = self.get(i, j) - &self.get(j, i).conj();
                let bad = if self.is_exact() { !d.is_zero() } else { d.abs() > tol * scale };
                if bad {
                    return Err(Error::NotHermitian { row: i, col: j });
                }
            }
        }
        Ok(())
    }
}

/// A subspace of C^n given by a basis matrix with independent columns.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn new(basis: Matrix) -> Result<Self> {
        let ambient_dim = basis.rows();
        if basis.cols() > 0 {
            let info = rank_kernel(&basis, DEFAULT_TOL);
            if info.rank != basis.cols() {
                return Err(Error::Input("subspace basis columns are dependent".into()));
            }
        }
        Ok(Subspace { ambient_dim, basis })
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: Matrix::identity(n) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Exact membership test (exact path only).
    pub fn contains(&self, v: &Matrix) -> bool {
        solve(&self.basis, v).is_ok()
    }

    /// Coordinates of columns of `v` in this basis.
    pub fn coordinates(&self, v: &Matrix) -> Result<Matrix> {
        solve(&self.basis, v)
    }
}

#[derive(Clone, Debug)]
pub struct KernelInfo {
    pub rank: usize,
    pub kernel: Subspace,
    pub exact: bool,
    pub ill_conditioned: bool,
}

/// Rank and a deterministic kernel basis. Exact matrices ignore `tol`.
pub fn rank_kernel(m: &Matrix, tol: f64) -> KernelInfo {
    if m.is_exact() {
        let (rref, pivots) = rref_exact(m);
        let kernel = kernel_from_rref(&rref, &pivots, m.cols());
        KernelInfo {
            rank: pivots.len(),
            kernel: Subspace { ambient_dim: m.cols(), basis: kernel },
            exact: true,
            ill_conditioned: false,
        }
    } else {
        let (rref, pivots, ill) = rref_float(m, tol);
        let kernel = kernel_from_rref(&rref, &pivots, m.cols());
        KernelInfo {
            rank: pivots.len(),
            kernel: Subspace { ambient_dim: m.cols(), basis: kernel },
            exact: false,
            ill_conditioned: ill,
        }
    }
}

/// Reduced row echelon form, exact path. Returns (rref, pivot columns).
fn rref_exact(m: &Matrix) -> (Matrix, Vec<(usize, usize)>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        if prow >= rows {
            break;
        }
        // first nonzero entry at or below prow
        let Some(sel) = (prow..rows).find(|&r| !a.get(r, col).is_zero()) else { continue };
        if sel != prow {
            for j in 0..cols {
                let x = a.get(sel, j).clone();
                let y = a.get(prow, j).clone();
                a.set(sel, j, y);
                a.set(prow, j, x);
            }
        }
        let inv = a.get(prow, col).inv();
        for j in 0..cols {
            let v = a.get(prow, j) * &inv;
            a.set(prow, j, v);
        }
        for r in 0..rows {
            if r != prow && !a.get(r, col).is_zero() {
                let f = a.get(r, col).clone();
                for j in 0..cols {
                    let v = a.get(r, j) - &(&f * a.get(prow, j));
                    a.set(r, j, v);
                }
            }
        }
        pivots.push((prow, col));
        prow += 1;
    }
    (a, pivots)
}

/// Float RREF with tolerance pivoting (partial pivoting within each column).
/// The ill-conditioned flag fires when the smallest accepted pivot is within
/// a factor 10^3 of the largest rejected one.
fn rref_float(m: &Matrix, tol: f64) -> (Matrix, Vec<(usize, usize)>, bool) {
    let mut a = m.map(|v| Scalar::from_c64(v.to_c64()));
    let (rows, cols) = (a.rows(), a.cols());
    let scale = m.max_abs().max(1.0);
    let thresh = tol * scale;
    let mut pivots = Vec::new();
    let mut smallest_accepted = f64::INFINITY;
    let mut largest_rejected: f64 = 0.0;
    let mut prow = 0;
    for col in 0..cols {
        if prow >= rows {
            break;
        }
        let (sel, best) = (prow..rows)
            .map(|r| (r, a.get(r, col).abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if best <= thresh {
            largest_rejected = largest_rejected.max(best);
            continue;
        }
        smallest_accepted = smallest_accepted.min(best);
        if sel != prow {
            for j in 0..cols {
                let x = a.get(sel, j).clone();
                let y = a.get(prow, j).clone();
                a.set(sel, j, y);
                a.set(prow, j, x);
            }
        }
        let inv = a.get(prow, col).inv();
        for j in 0..cols {
            let v = a.get(prow, j) * &inv;
            a.set(prow, j, v);
        }
        for r in 0..rows {
            if r != prow {
                let f = a.get(r, col).clone();
                if f.abs() > 0.0 {
                    for j in 0..cols {
                        let v = a.get(r, j) - &(&f * a.get(prow, j));
                        a.set(r, j, v);
                    }
                }
            }
        }
        pivots.push((prow, col));
        prow += 1;
    }
    let ill = largest_rejected > 0.0 && smallest_accepted / largest_rejected < 1e3;
    (a, pivots, ill)
}

fn kernel_from_rref(rref: &Matrix, pivots: &[(usize, usize)], cols: usize) -> Matrix {
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Matrix::zeros(cols, free_cols.len());
    for (k, &fc) in free_cols.iter().enumerate() {
        basis.set(fc, k, Scalar::one());
        for &(pr, pc) in pivots {
            basis.set(pc, k, -rref.get(pr, fc));
        }
    }
    basis
}

/// Determinant: fraction-free Bareiss elimination on the exact path,
/// LU with partial pivoting on the float path.
pub fn determinant(m: &Matrix) -> Scalar {
    assert_eq!(m.rows(), m.cols(), "determinant of non-square matrix");
    let n = m.rows();
    if n == 0 {
        return Scalar::one();
    }
    if m.is_exact() {
        bareiss(m)
    } else {
        lu_det(m)
    }
}

fn bareiss(m: &Matrix) -> Scalar {
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = Scalar::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            let Some(sel) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                return Scalar::zero();
            };
            for j in 0..n {
                let x = a.get(sel, j).clone();
                let y = a.get(k, j).clone();
                a.set(sel, j, y);
                a.set(k, j, x);
            }
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(a.get(i, j) * a.get(k, k)) - &(a.get(i, k) * a.get(k, j));
                a.set(i, j, &num / &prev);
            }
            a.set(i, k, Scalar::zero());
        }
        prev = a.get(k, k).clone();
    }
    let d = a.get(n - 1, n - 1).clone();
    if sign {
        -d
    } else {
        d
    }
}

fn lu_det(m: &Matrix) -> Scalar {
    let n = m.rows();
    let mut a: Vec<C64> = m.data.iter().map(Scalar::to_c64).collect();
    let at = |a: &Vec<C64>, i: usize, j: usize| a[i * n + j];
    let mut det = C64::new(1.0, 0.0);
    for k in 0..n {
        let (sel, best) = (k..n)
            .map(|r| (r, at(&a, r, k).norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if best == 0.0 {
            return Scalar::from_c64(C64::new(0.0, 0.0));
        }
        if sel != k {
            for j in 0..n {
                a.swap(sel * n + j, k * n + j);
            }
            det = -det;
        }
        det *= at(&a, k, k);
        for i in k + 1..n {
            let f = at(&a, i, k) / at(&a, k, k);
            for j in k..n {
                let v = at(&a, i, j) - f * at(&a, k, j);
                a[i * n + j] = v;
            }
        }
    }
    Scalar::from_c64(det)
}

/// Exact linear solve A X = B; underdetermined systems get the deterministic
/// minimum-support solution (free variables zero, RREF column order).
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "solve: {}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let aug = Matrix::hstack(&[a, b]);
    let (rref, pivots) = if aug.is_exact() {
        rref_exact(&aug)
    } else {
        let (r, p, _) = rref_float(&aug, DEFAULT_TOL);
        (r, p)
    };
    // consistency: no pivot in the B block
    if pivots.iter().any(|&(_, c)| c >= a.cols()) {
        return Err(Error::Infeasible("linear system is inconsistent".into()));
    }
    let mut x = Matrix::zeros(a.cols(), b.cols());
    for &(pr, pc) in &pivots {
        for j in 0..b.cols() {
            x.set(pc, j, rref.get(pr, a.cols() + j).clone());
        }
    }
    Ok(x)
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    assert_eq!(a.rows(), a.cols());
    let inv = solve(a, &Matrix::identity(a.rows()))?;
    if a.mul(&inv) != Matrix::identity(a.rows()) {
        return Err(Error::Infeasible("matrix is singular".into()));
    }
    Ok(inv)
}

/// Basis-coordinate restriction C^H M C.
pub fn congruence_restrict(m: &Matrix, c: &Subspace) -> Result<Matrix> {
    if m.rows() != m.cols() || m.rows() != c.ambient_dim() {
        return Err(Error::Dimension("congruence_restrict: ambient dims differ".into()));
    }
    Ok(c.basis().adjoint().mul(m).mul(c.basis()))
}

/// Kronecker product; block (i,j) is A[i][j] * B.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (p, q) = (a.rows(), a.cols());
    let (r, s) = (b.rows(), b.cols());
    Matrix::from_fn(p * r, q * s, |i, j| a.get(i / r, j / s) * b.get(i % r, j % s))
}

/// Orthogonal projector P = C (C^H C)^{-1} C^H onto a subspace.
/// Exact for Gaussian-rational bases.
pub fn orthogonal_projector(s: &Subspace) -> Result<Matrix> {
    if s.dim() == 0 {
        return Ok(Matrix::zeros(s.ambient_dim(), s.ambient_dim()));
    }
    let c = s.basis();
    let gram = c.adjoint().mul(c);
    let gram_inv = inverse(&gram)
        .map_err(|_| Error::Internal("singular Gram matrix for independent columns".into()))?;
    Ok(c.mul(&gram_inv).mul(&c.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_kernel_proportional_rows() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        let info = rank_kernel(&m, DEFAULT_TOL);
        assert_eq!(info.rank, 1);
        assert_eq!(info.kernel.dim(), 1);
        let k = info.kernel.basis();
        assert_eq!(k.get(0, 0), &Scalar::from_int(-2));
        assert_eq!(k.get(1, 0), &Scalar::from_int(1));
    }

    #[test]
    fn rank_kernel_identity() {
        let info = rank_kernel(&Matrix::identity(3), DEFAULT_TOL);
        assert_eq!(info.rank, 3);
        assert_eq!(info.kernel.dim(), 0);
    }

    #[test]
    fn rank_kernel_bezout_example() {
        // Bezout matrix of x^2-1, x^2-x
        let m = Matrix::from_int_rows(&[&[-1, 1], &[1, -1]]);
        let info = rank_kernel(&m, DEFAULT_TOL);
        assert_eq!(info.rank, 1);
        let k = info.kernel.basis();
        assert_eq!(k.get(0, 0), &Scalar::from_int(1));
        assert_eq!(k.get(1, 0), &Scalar::from_int(1));
    }

    #[test]
    fn determinant_examples() {
        let m = Matrix::from_int_rows(&[&[0, -3], &[-3, 0]]);
        assert_eq!(determinant(&m), Scalar::from_int(-9));
        assert_eq!(determinant(&Matrix::identity(4)), Scalar::one());
        let a = Matrix::from_rows(vec![vec![Scalar::ratio(7, 3)]]);
        assert_eq!(determinant(&a), Scalar::ratio(7, 3));
    }

    #[test]
    fn congruence_restrict_examples() {
        let m = Matrix::from_int_rows(&[&[3, 1], &[1, 2]]);
        let full = Subspace::full(2);
        assert_eq!(congruence_restrict(&m, &full).unwrap(), m);

        let e1 = Subspace::new(Matrix::from_int_rows(&[&[0], &[1]])).unwrap();
        let r = congruence_restrict(&m, &e1).unwrap();
        assert_eq!(r.get(0, 0), &Scalar::from_int(2));

        let d = Matrix::from_int_rows(&[&[0, 0], &[0, -2]]);
        let s = Subspace::new(Matrix::from_int_rows(&[&[1], &[1]])).unwrap();
        let r = congruence_restrict(&d, &s).unwrap();
        assert_eq!(r.get(0, 0), &Scalar::from_int(-2));
    }

    #[test]
    fn kron_examples() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(kron(&Matrix::identity(1), &m), m);
        let e11 = Matrix::from_int_rows(&[&[1, 0], &[0, 0]]);
        let k = kron(&e11, &m);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.get(0, 1), &Scalar::from_int(2));
        assert_eq!(k.get(2, 2), &Scalar::from_int(0));
        let a = Matrix::identity(3);
        let b = Matrix::identity(2);
        assert_eq!(kron(&a, &b).rows(), 6);
    }

    #[test]
    fn projector_examples() {
        let full = Subspace::full(3);
        assert_eq!(orthogonal_projector(&full).unwrap(), Matrix::identity(3));

        let s = Subspace::new(Matrix::from_int_rows(&[&[1], &[0]])).unwrap();
        let p = orthogonal_projector(&s).unwrap();
        assert_eq!(p, Matrix::from_int_rows(&[&[1, 0], &[0, 0]]));

        let s = Subspace::new(Matrix::from_int_rows(&[&[1], &[1]])).unwrap();
        let p = orthogonal_projector(&s).unwrap();
        assert_eq!(p.get(0, 0), &Scalar::ratio(1, 2));
        assert_eq!(p.get(1, 0), &Scalar::ratio(1, 2));
        // idempotent and selfadjoint, exactly
        assert_eq!(p.mul(&p), p);
        assert_eq!(p.adjoint(), p);
    }

    #[test]
    fn float_rank_with_tolerance() {
        let m = Matrix::from_fn(2, 2, |i, j| {
            Scalar::from_f64([[1.0, 2.0], [2.0, 4.0 + 1e-13]][i][j])
        });
        let info = rank_kernel(&m, 1e-9);
        assert_eq!(info.rank, 1);
        assert!(!info.exact);
    }

    #[test]
    fn solve_underdetermined_min_support() {
        // x + y = 2 -> x = 2, y = 0 (free var zero)
        let a = Matrix::from_int_rows(&[&[1, 1]]);
        let b = Matrix::from_int_rows(&[&[2]]);
        let x = solve(&a, &b).unwrap();
        assert_eq!(x.get(0, 0), &Scalar::from_int(2));
        assert_eq!(x.get(1, 0), &Scalar::from_int(0));
    }
}
