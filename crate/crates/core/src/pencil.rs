//! Determinant polynomials of linear matrix pencils, recovered exactly by
//! evaluation at rational nodes and interpolation.

use crate::error::{Error, Result};
use crate::matrix::{determinant, Matrix};
use crate::poly::{interpolate, MultiPoly, UniPoly};
use crate::scalar::Scalar;

/// det(x0*D0 + x1*D1 - x2*D2) as a univariate polynomial in x0, for fixed
/// (x1, x2). Exact when inputs are exact: evaluation at m+1 rational nodes
/// plus interpolation.
pub fn pencil_det_poly(
    d0: &Matrix,
    d1: &Matrix,
    d2: &Matrix,
    x1: &Scalar,
    x2: &Scalar,
) -> UniPoly {
    let m = d0.rows();
    let fixed = d1.scale(x1).sub(&d2.scale(x2));
    let nodes: Vec<Scalar> = (0..=m as i64).map(Scalar::from_int).collect();
    let values: Vec<Scalar> =
        nodes.iter().map(|t| determinant(&d0.scale(t).add(&fixed))).collect();
    interpolate(&nodes, &values)
}

/// det(x0*A0 + x1*A1 - x2*A2) as a homogeneous trivariate polynomial of
/// degree equal to the matrix size. Recovered by tensor interpolation of the
/// dehomogenized determinant on an (s+1) x (s+1) rational grid.
pub fn pencil_det_trivariate(a0: &Matrix, a1: &Matrix, a2: &Matrix) -> Result<MultiPoly> {
    let s = a0.rows();
    if a1.rows() != s || a2.rows() != s || a0.cols() != s || a1.cols() != s || a2.cols() != s {
        return Err(Error::Dimension("pencil matrices must be square of equal size".into()));
    }
    if s == 0 {
        return Ok(MultiPoly::constant(3, Scalar::one()));
    }
    let nodes: Vec<Scalar> = (0..=s as i64).map(Scalar::from_int).collect();
    // interpolate in t for each u, then across u coefficient-wise
    let mut per_u: Vec<UniPoly> = Vec::with_capacity(s + 1);
    for u in &nodes {
        let base = a0.sub(&a2.scale(u));
        let values: Vec<Scalar> =
            nodes.iter().map(|t| determinant(&base.add(&a1.scale(t)))).collect();
        per_u.push(interpolate(&nodes, &values));
    }
    let mut out = MultiPoly::zero(3);
    for k in 0..=s {
        let values: Vec<Scalar> = per_u.iter().map(|p| p.coeff(k)).collect();
        let in_u = interpolate(&nodes, &values);
        for l in 0..=in_u.degree().unwrap_or(0) {
            let c = in_u.coeff(l);
            if c.is_zero() {
                continue;
            }
            if k + l > s {
                return Err(Error::Internal(
                    "pencil determinant interpolation produced degree above matrix size".into(),
                ));
            }
            out.add_term(vec![(s - k - l) as u32, k as u32, l as u32], c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_pencil_is_linear() {
        // m=1, D=(a,b,c), fixed (s,t) -> a x0 + (b s - c t)
        let a = Matrix::from_int_rows(&[&[3]]);
        let b = Matrix::from_int_rows(&[&[5]]);
        let c = Matrix::from_int_rows(&[&[7]]);
        let p = pencil_det_poly(&a, &b, &c, &Scalar::from_int(2), &Scalar::from_int(1));
        assert_eq!(p.coeff(1), Scalar::from_int(3));
        assert_eq!(p.coeff(0), Scalar::from_int(3)); // 5*2 - 7*1
    }

    #[test]
    fn diagonal_pencil_factors() {
        // D0=I2, D1=diag(1,2), D2=0, fixed (1,0) -> (x0+1)(x0+2)
        let d0 = Matrix::identity(2);
        let d1 = Matrix::from_int_rows(&[&[1, 0], &[0, 2]]);
        let d2 = Matrix::zeros(2, 2);
        let p = pencil_det_poly(&d0, &d1, &d2, &Scalar::one(), &Scalar::zero());
        assert_eq!(p, UniPoly::from_ints(&[2, 3, 1]));
    }

    #[test]
    fn conic_pencil() {
        // conic fixture at (3,4): x0^2 - 25
        let d0 = Matrix::identity(2);
        let d1 = Matrix::from_int_rows(&[&[1, 0], &[0, -1]]);
        let d2 = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let p = pencil_det_poly(&d0, &d1, &d2, &Scalar::from_int(3), &Scalar::from_int(4));
        assert_eq!(p, UniPoly::from_ints(&[-25, 0, 1]));
    }

    #[test]
    fn trivariate_conic() {
        let d0 = Matrix::identity(2);
        let d1 = Matrix::from_int_rows(&[&[1, 0], &[0, -1]]);
        let d2 = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let p = pencil_det_trivariate(&d0, &d1, &d2).unwrap();
        assert_eq!(p.coeff(&[2, 0, 0]), Scalar::one());
        assert_eq!(p.coeff(&[0, 2, 0]), Scalar::from_int(-1));
        assert_eq!(p.coeff(&[0, 0, 2]), Scalar::from_int(-1));
        assert_eq!(p.num_terms(), 3);
    }

    #[test]
    fn trivariate_agrees_with_univariate_at_random_points() {
        let d0 = Matrix::from_int_rows(&[&[2, 1], &[1, -1]]);
        let d1 = Matrix::from_int_rows(&[&[0, 3], &[3, 4]]);
        let d2 = Matrix::from_int_rows(&[&[1, 1], &[1, 0]]);
        let tri = pencil_det_trivariate(&d0, &d1, &d2).unwrap();
        for (x1, x2) in [(2i64, 5i64), (-3, 1), (0, 7), (4, -4), (9, 2)] {
            let uni =
                pencil_det_poly(&d0, &d1, &d2, &Scalar::from_int(x1), &Scalar::from_int(x2));
            for x0 in [-2i64, 0, 3] {
                let a = tri.evaluate(&[
                    Scalar::from_int(x0),
                    Scalar::from_int(x1),
                    Scalar::from_int(x2),
                ]);
                assert_eq!(a, uni.eval(&Scalar::from_int(x0)));
            }
        }
    }
}
