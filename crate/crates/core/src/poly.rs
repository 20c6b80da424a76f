//! Sparse multivariate polynomials with exact coefficients, univariate
//! polynomials, and the graded-lex monomial indexing that fixes the layout
//! of the blown-up spaces.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Sparse polynomial in 1, 2 or 3 variables. Zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars);
        let mut e = vec![0; nvars];
        e[idx] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.add_term(e, Scalar::one());
        p
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, coeff: Scalar) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = MultiPoly::zero(nvars);
        p.add_term(exps, coeff);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Scalar) {
        assert_eq!(exps.len(), self.nvars);
        let entry = self.terms.entry(exps.clone()).or_insert_with(Scalar::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in self.terms() {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self, n: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == n)
    }

    pub fn is_exact(&self) -> bool {
        self.terms.values().all(Scalar::is_exact)
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars, "evaluation arity mismatch");
        let mut acc = Scalar::zero();
        for (e, c) in self.terms() {
            let mut t = c.clone();
            for (x, &p) in point.iter().zip(e) {
                t = &t * &x.pow(p);
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Homogenize a bivariate polynomial to degree `n` in three variables:
    /// y1^a y2^b -> x0^{n-a-b} x1^a x2^b.
    pub fn homogenize(&self, n: u32) -> Result<MultiPoly> {
        if self.nvars != 2 {
            return Err(Error::Input("homogenize expects a bivariate polynomial".into()));
        }
        if self.total_degree().unwrap_or(0) > n {
            return Err(Error::Input(format!(
                "degree {} exceeds homogenization degree {}",
                self.total_degree().unwrap(),
                n
            )));
        }
        let mut out = MultiPoly::zero(3);
        for (e, c) in self.terms() {
            let (a, b) = (e[0], e[1]);
            out.add_term(vec![n - a - b, a, b], c.clone());
        }
        Ok(out)
    }

    /// Set x0 = 1 in a trivariate polynomial; result is bivariate in (y1, y2).
    pub fn dehomogenize(&self) -> MultiPoly {
        assert_eq!(self.nvars, 3);
        let mut out = MultiPoly::zero(2);
        for (e, c) in self.terms() {
            out.add_term(vec![e[1], e[2]], c.clone());
        }
        out
    }

    /// Evaluate a bivariate polynomial on a pair of commuting square matrices.
    pub fn evaluate_matrices(&self, a1: &Matrix, a2: &Matrix) -> Matrix {
        assert_eq!(self.nvars, 2);
        let n = a1.rows();
        let mut acc = Matrix::zeros(n, n);
        for (e, c) in self.terms() {
            let t = a1.pow(e[0]).mul(&a2.pow(e[1])).scale(c);
            acc = acc.add(&t);
        }
        acc
    }

    pub fn to_univariate(&self) -> Result<UniPoly> {
        if self.nvars != 1 {
            return Err(Error::Input("expected a univariate polynomial".into()));
        }
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut coeffs = vec![Scalar::zero(); deg + 1];
        for (e, c) in self.terms() {
            coeffs[e[0] as usize] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }
}

/// Degree-d monomials (i0,i1,i2), i0+i1+i2 = d, graded-lex with x0 > x1 > x2.
/// Within a fixed degree this is descending lexicographic order.
#[derive(Clone, Copy, Debug)]
pub struct MonomialIndex {
    degree: u32,
}

impl MonomialIndex {
    pub fn new(degree: u32) -> Self {
        MonomialIndex { degree }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        let d = self.degree as usize;
        (d + 1) * (d + 2) / 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn triples(&self) -> Vec<[u32; 3]> {
        let d = self.degree;
        let mut v = Vec::with_capacity(self.len());
        for i0 in (0..=d).rev() {
            for i1 in (0..=d - i0).rev() {
                v.push([i0, i1, d - i0 - i1]);
            }
        }
        v
    }

    pub fn position(&self, t: [u32; 3]) -> Result<usize> {
        if t[0] + t[1] + t[2] != self.degree {
            return Err(Error::Input(format!(
                "monomial {:?} does not have degree {}",
                t, self.degree
            )));
        }
        let d = self.degree;
        // monomials before the i0-block, plus offset within the block
        let before: u32 = (t[0] + 1..=d).map(|v| d - v + 1).sum::<u32>();
        Ok((before + (d - t[0] - t[1])) as usize)
    }
}

/// Dense univariate polynomial, coefficients ascending by degree.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, Scalar::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Scalar::zero());
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![Scalar::zero()] }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_exact)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) - &other.coeff(k)).collect())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &Scalar) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(out)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c * &Scalar::from_int((k + 1) as i64))
                .collect(),
        )
    }

    /// Quotient and remainder of self by other (other nonzero).
    pub fn div_rem(&self, other: &UniPoly) -> (UniPoly, UniPoly) {
        let dq = other.degree().expect("division by zero polynomial");
        let lead = other.coeff(dq);
        let mut r = self.clone();
        let mut q = vec![Scalar::zero(); self.coeffs.len()];
        while let Some(dr) = r.degree() {
            if dr < dq {
                break;
            }
            let f = &r.coeff(dr) / &lead;
            q[dr - dq] = f.clone();
            let mut sub = vec![Scalar::zero(); dr - dq + 1];
            sub[dr - dq] = f;
            r = r.sub(&UniPoly::new(sub).mul(other));
        }
        (UniPoly::new(q), r)
    }

    /// Remainder of self by other (other nonzero).
    pub fn rem(&self, other: &UniPoly) -> UniPoly {
        self.div_rem(other).1
    }

    /// Monic gcd via the Euclidean algorithm, exact path.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        match a.degree() {
            None => a,
            Some(d) => a.scale(&a.coeff(d).inv()),
        }
    }

    pub fn to_multi(&self) -> MultiPoly {
        let mut p = MultiPoly::zero(1);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.add_term(vec![k as u32], c.clone());
            }
        }
        p
    }
}

/// Exact interpolation through (nodes[i], values[i]) via Newton divided
/// differences.
pub fn interpolate(nodes: &[Scalar], values: &[Scalar]) -> UniPoly {
    assert_eq!(nodes.len(), values.len());
    let n = nodes.len();
    // divided-difference table
    let mut dd: Vec<Scalar> = values.to_vec();
    let mut coeffs: Vec<Scalar> = vec![dd[0].clone()];
    for level in 1..n {
        for i in 0..n - level {
            let num = &dd[i + 1] - &dd[i];
            let den = &nodes[i + level] - &nodes[i];
            dd[i] = &num / &den;
        }
        dd.truncate(n - level);
        coeffs.push(dd[0].clone());
    }
    // expand Newton form
    let mut poly = UniPoly::zero();
    let mut basis = UniPoly::new(vec![Scalar::one()]);
    for (k, c) in coeffs.iter().enumerate() {
        poly = poly.add(&basis.scale(c));
        if k + 1 < n {
            basis = basis.mul(&UniPoly::new(vec![-&nodes[k], Scalar::one()]));
        }
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y1() -> MultiPoly {
        MultiPoly::var(2, 0)
    }
    fn y2() -> MultiPoly {
        MultiPoly::var(2, 1)
    }

    #[test]
    fn homogenize_examples() {
        // y1^2 + y2, n=2 -> x1^2 + x0 x2
        let p = y1().mul(&y1()).add(&y2());
        let h = p.homogenize(2).unwrap();
        assert_eq!(h.coeff(&[0, 2, 0]), Scalar::one());
        assert_eq!(h.coeff(&[1, 0, 1]), Scalar::one());
        assert_eq!(h.num_terms(), 2);

        let one = MultiPoly::constant(2, Scalar::one());
        let h = one.homogenize(3).unwrap();
        assert_eq!(h.coeff(&[3, 0, 0]), Scalar::one());

        let p = y1().mul(&y2());
        let h = p.homogenize(2).unwrap();
        assert_eq!(h.coeff(&[0, 1, 1]), Scalar::one());

        // dehomogenize is a left inverse
        let p = y1().mul(&y1()).add(&y2().scale(&Scalar::from_int(5)));
        assert_eq!(p.homogenize(4).unwrap().dehomogenize(), p);

        // degree overflow rejected
        assert!(y1().mul(&y1()).homogenize(1).is_err());
    }

    #[test]
    fn evaluate_examples() {
        // x0^2 - x1^2 - x2^2 at (5,3,4) -> 0
        let mut p = MultiPoly::zero(3);
        p.add_term(vec![2, 0, 0], Scalar::one());
        p.add_term(vec![0, 2, 0], Scalar::from_int(-1));
        p.add_term(vec![0, 0, 2], Scalar::from_int(-1));
        let v = p.evaluate(&[Scalar::from_int(5), Scalar::from_int(3), Scalar::from_int(4)]);
        assert!(v.is_zero());

        let q = MultiPoly::var(3, 0);
        assert_eq!(
            q.evaluate(&[Scalar::from_int(1), Scalar::from_int(2), Scalar::from_int(3)]),
            Scalar::from_int(1)
        );
    }

    #[test]
    fn monomial_index_order() {
        let idx = MonomialIndex::new(1);
        assert_eq!(idx.triples(), vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(idx.position([1, 0, 0]).unwrap(), 0);
        assert_eq!(idx.position([0, 0, 1]).unwrap(), 2);

        let idx = MonomialIndex::new(2);
        assert_eq!(
            idx.triples(),
            vec![[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]
        );
        for (k, t) in idx.triples().into_iter().enumerate() {
            assert_eq!(idx.position(t).unwrap(), k);
        }

        let idx = MonomialIndex::new(0);
        assert_eq!(idx.len(), 1);
        assert_eq!(idx.position([0, 0, 0]).unwrap(), 0);

        assert!(MonomialIndex::new(2).position([1, 0, 0]).is_err());
    }

    #[test]
    fn interpolation_roundtrip() {
        let p = UniPoly::from_ints(&[2, -3, 0, 5]);
        let nodes: Vec<Scalar> = (0..4).map(Scalar::from_int).collect();
        let values: Vec<Scalar> = nodes.iter().map(|x| p.eval(x)).collect();
        assert_eq!(interpolate(&nodes, &values), p);
    }

    #[test]
    fn gcd_degree() {
        // (x-1)(x-2) and (x-1)(x+3)
        let a = UniPoly::from_ints(&[2, -3, 1]);
        let b = UniPoly::from_ints(&[-3, 2, 1]);
        let g = a.gcd(&b);
        assert_eq!(g.degree(), Some(1));
        assert!(g.eval(&Scalar::from_int(1)).is_zero());
    }
}
