//! Simultaneous-iteration root finding (Aberth's method) for the float path,
//! root clustering, and promotion of float roots back to exact rationals.

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::scalar::{Scalar, C64};
use num::{BigInt, BigRational, ToPrimitive, Zero};

const MAX_ITERATIONS: usize = 400;

#[derive(Clone, Debug)]
pub struct Root {
    pub value: C64,
    pub multiplicity: usize,
}

/// All complex roots of `p` with multiplicities.
///
/// On the exact path the multiple part is split off with gcd(p, p') so the
/// iteration only ever sees simple roots and stays accurate; on the float
/// path roots are clustered at a sqrt(tol)-scale distance, since a k-fold
/// root is only determined to about tol^(1/k) by the residual test.
pub fn poly_roots(p: &UniPoly, tol: f64) -> Result<Vec<Root>> {
    if p.is_exact() {
        let g = p.gcd(&p.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return Ok(all_roots(p, tol)?
                .into_iter()
                .map(|value| Root { value, multiplicity: 1 })
                .collect());
        }
        let (squarefree, r) = p.div_rem(&g);
        debug_assert!(r.is_zero());
        let inner = poly_roots(&g, tol)?;
        let scale = 1.0 + inner.iter().map(|r| r.value.norm()).fold(0.0, f64::max);
        let mut out = Vec::new();
        for value in all_roots(&squarefree, tol)? {
            let extra = inner
                .iter()
                .find(|r| (r.value - value).norm() <= 1e-6 * scale)
                .map_or(0, |r| r.multiplicity);
            out.push(Root { value, multiplicity: 1 + extra });
        }
        return Ok(out);
    }
    let roots = all_roots(p, tol)?;
    Ok(cluster(&roots, tol.sqrt().max(10.0 * tol)))
}

/// Raw root list (with repetitions), Aberth iteration.
pub fn all_roots(p: &UniPoly, tol: f64) -> Result<Vec<C64>> {
    let deg = p.degree().ok_or_else(|| Error::Input("zero polynomial has no roots".into()))?;
    if deg == 0 {
        return Err(Error::Input("constant polynomial".into()));
    }
    let coeffs: Vec<C64> = p.coeffs().iter().map(Scalar::to_c64).collect();
    let lead = coeffs[deg];
    if lead.norm() == 0.0 {
        return Err(Error::Input("leading coefficient is zero".into()));
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);

    // initial guesses on a circle of the Cauchy-style radius
    let radius = 1.0
        + coeffs[..deg].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4;
            C64::from_polar(radius, theta)
        })
        .collect();

    let dp = derivative_c(&coeffs);
    let mut best_residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let mut moved: f64 = 0.0;
        for k in 0..deg {
            let pv = horner(&coeffs, z[k]);
            let dv = horner(&dp, z[k]);
            let newton = if dv.norm() > 0.0 { pv / dv } else { pv };
            let mut sum = C64::new(0.0, 0.0);
            for j in 0..deg {
                if j != k {
                    let d = z[k] - z[j];
                    if d.norm() > 0.0 {
                        sum += d.inv();
                    }
                }
            }
            let denom = C64::new(1.0, 0.0) - newton * sum;
            let delta = if denom.norm() > 0.0 { newton / denom } else { newton };
            z[k] -= delta;
            moved = moved.max(delta.norm());
        }
        let residual =
            z.iter().map(|&r| horner(&coeffs, r).norm() / scale).fold(0.0, f64::max);
        best_residual = best_residual.min(residual);
        if residual < tol {
            let mut out = z;
            out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
            return Ok(out);
        }
        if moved < f64::EPSILON * radius {
            break;
        }
    }
    let residual =
        z.iter().map(|&r| horner(&coeffs, r).norm() / scale).fold(0.0, f64::max);
    if residual < tol {
        z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        return Ok(z);
    }
    Err(Error::NonConvergence { iterations: MAX_ITERATIONS, residual: best_residual.min(residual) })
}

fn horner(coeffs: &[C64], x: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

fn derivative_c(coeffs: &[C64]) -> Vec<C64> {
    coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

/// Greedy clustering of a sorted root list; roots within `dist` merge into
/// one representative (centroid) with a multiplicity.
pub fn cluster(roots: &[C64], dist: f64) -> Vec<Root> {
    let mut out: Vec<Root> = Vec::new();
    for &r in roots {
        match out.iter_mut().find(|c| (c.value - r).norm() <= dist) {
            Some(c) => {
                let m = c.multiplicity as f64;
                c.value = (c.value * m + r) / (m + 1.0);
                c.multiplicity += 1;
            }
            None => out.push(Root { value: r, multiplicity: 1 }),
        }
    }
    out
}

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents).
pub fn rationalize(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0) = (BigInt::from(1), BigInt::from(0));
    let (mut p1, mut q1) = (BigInt::from(x.floor() as i64), BigInt::from(1));
    let mut frac = x - x.floor();
    for _ in 0..64 {
        if frac.abs() < 1e-12 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if !a.is_finite() {
            break;
        }
        let ai = BigInt::from(a as i64);
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2 > BigInt::from(max_den) {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        frac = inv - a;
    }
    if q1.is_zero() {
        return None;
    }
    let cand = BigRational::new(p1, q1);
    let err = (cand.to_f64()? - x).abs();
    if err <= 1e-7 * x.abs().max(1.0) {
        Some(cand)
    } else {
        None
    }
}

/// Try to promote a float root of an exact polynomial to an exact
/// (Gaussian-)rational root; returns None unless exact evaluation is zero.
pub fn promote_root(p: &UniPoly, z: C64, max_den: u64) -> Option<Scalar> {
    if !p.is_exact() {
        return None;
    }
    let re = rationalize(z.re, max_den)?;
    let im = if z.im.abs() < 1e-9 * (1.0 + z.norm()) {
        BigRational::zero()
    } else {
        rationalize(z.im, max_den)?
    };
    let cand = Scalar::gaussian(re, im);
    if p.eval(&cand).is_zero() {
        Some(cand)
    } else {
        None
    }
}
