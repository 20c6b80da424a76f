//! Classical single-variable elimination: Bezout matrices, Sylvester
//! resultants, and the determinantal representation of the image of a line
//! under a rational map.

use crate::error::{Error, Result};
use crate::matrix::{determinant, rank_kernel, Matrix, DEFAULT_TOL};
use crate::pencil::pencil_det_trivariate;
use crate::poly::{MultiPoly, UniPoly};
use crate::scalar::Scalar;

/// The unique symmetric matrix B with
/// p(x)q(y) - q(x)p(y) = sum b_ij x^i (x-y) y^j, i,j in 0..n.
#[derive(Clone, Debug)]
pub struct BezoutMatrix {
    pub n: usize,
    pub entries: Matrix,
    pub p: UniPoly,
    pub q: UniPoly,
}

/// Bezout matrix via coefficient matching: expand p(x)q(y) - q(x)p(y) and
/// divide by (x - y) with synthetic division in x.
pub fn bezout_matrix(p: &UniPoly, q: &UniPoly, n: usize) -> Result<BezoutMatrix> {
    if p.degree().unwrap_or(0) > n || q.degree().unwrap_or(0) > n {
        return Err(Error::Input(format!("degrees exceed the bound n = {}", n)));
    }
    // a_k(y): coefficients of x^k in p(x)q(y) - q(x)p(y)
    let mut a: Vec<UniPoly> = (0..=n)
        .map(|k| {
            let mut c = q.scale(&p.coeff(k)).sub(&p.scale(&q.coeff(k)));
            c = UniPoly::new(c.coeffs().to_vec());
            c
        })
        .collect();
    // synthetic division by (x - y): g_{k-1} = a_k + y g_k, remainder must vanish
    let shift = |g: &UniPoly| {
        // multiply by y
        let mut coeffs = vec![Scalar::zero()];
        coeffs.extend_from_slice(g.coeffs());
        UniPoly::new(coeffs)
    };
    let mut g: Vec<UniPoly> = vec![UniPoly::zero(); n];
    let mut carry = a.pop().unwrap(); // a_n
    for k in (0..n).rev() {
        g[k] = carry.clone();
        carry = a[k].add(&shift(&carry));
    }
    if !carry.is_zero() {
        return Err(Error::Internal("Bezout division left a remainder".into()));
    }
    let entries = Matrix::from_fn(n, n, |i, j| g[i].coeff(j));
    Ok(BezoutMatrix { n, entries, p: p.clone(), q: q.clone() })
}

/// 2n x 2n Sylvester matrix with both polynomials padded to degree n.
pub fn sylvester_matrix(p: &UniPoly, q: &UniPoly, n: usize) -> Matrix {
    let mut m = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for k in 0..=n {
            // row i holds p_n ... p_0 starting at column i
            m.set(i, i + k, p.coeff(n - k));
            m.set(n + i, i + k, q.coeff(n - k));
        }
    }
    m
}

/// Determinant of the Sylvester matrix, degree-n padding convention.
pub fn sylvester_resultant(p: &UniPoly, q: &UniPoly, n: usize) -> Result<Scalar> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::Input("resultant of a zero polynomial".into()));
    }
    if p.degree().unwrap_or(0) > n || q.degree().unwrap_or(0) > n {
        return Err(Error::Input(format!("degrees exceed the bound n = {}", n)));
    }
    Ok(determinant(&sylvester_matrix(p, q, n)))
}

/// Number of common zeros of p and q as counted by the Bezout kernel.
pub fn common_zero_count_line(p: &UniPoly, q: &UniPoly, n: usize) -> Result<usize> {
    let b = bezout_matrix(p, q, n)?;
    Ok(rank_kernel(&b.entries, DEFAULT_TOL).kernel.dim())
}

/// Determinantal representation of the image of the line under the rational
/// map t -> (p1(t)/p0(t), p2(t)/p0(t)):
/// det(y1 B(p2,p0) - y2 B(p1,p0) + B(p1,p2)).
pub struct LineImage {
    pub b10: BezoutMatrix,
    pub b20: BezoutMatrix,
    pub b12: BezoutMatrix,
    /// Bivariate polynomial in (y1, y2) cutting out the image.
    pub poly: MultiPoly,
}

pub fn line_image_detrep(
    p0: &UniPoly,
    p1: &UniPoly,
    p2: &UniPoly,
    n: usize,
) -> Result<LineImage> {
    if p0.is_zero() {
        return Err(Error::Input("p0 is identically zero".into()));
    }
    let b10 = bezout_matrix(p1, p0, n)?;
    let b20 = bezout_matrix(p2, p0, n)?;
    let b12 = bezout_matrix(p1, p2, n)?;
    let tri = pencil_det_trivariate(&b12.entries, &b20.entries, &b10.entries)?;
    let poly = tri.dehomogenize();
    if poly.is_zero() {
        return Err(Error::DegenerateMap);
    }
    Ok(LineImage { b10, b20, b12, poly })
}
