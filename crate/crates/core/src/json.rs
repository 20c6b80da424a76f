//! JSON encodings for the core types.
//!
//! Conventions (human-diffable, bit-exact):
//! - rational: string "a/b" with b > 0 in lowest terms ("a" accepted on input)
//! - Gaussian rational: {"re": "a/b", "im": "c/d"}
//! - complex float: [re, im]
//! - matrices: nested row-major arrays of scalars
//! - polynomials: list of {"exp": [i, ...], "coeff": scalar}
//! - vessel: named-field object

use crate::matrix::Matrix;
use crate::poly::{MultiPoly, UniPoly};
use crate::scalar::Scalar;
use crate::vessel::Vessel;
use num::{BigInt, BigRational, One, Zero};
use serde::de::Error as DeError;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

fn rat_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rat(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.trim().parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Rational(r) => s.serialize_str(&rat_string(r)),
            Scalar::Gaussian(re, im) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("re", &rat_string(re))?;
                m.serialize_entry("im", &rat_string(im))?;
                m.end()
            }
            Scalar::Float(z) => [z.re, z.im].serialize(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Rational(String),
    Gaussian { re: String, im: String },
    Float([f64; 2]),
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ScalarRepr::deserialize(d)?;
        match repr {
            ScalarRepr::Rational(s) => parse_rat(&s)
                .map(Scalar::from_rational)
                .ok_or_else(|| D::Error::custom(format!("malformed rational {:?}", s))),
            ScalarRepr::Gaussian { re, im } => {
                let re = parse_rat(&re)
                    .ok_or_else(|| D::Error::custom(format!("malformed rational {:?}", re)))?;
                let im = parse_rat(&im)
                    .ok_or_else(|| D::Error::custom(format!("malformed rational {:?}", im)))?;
                Ok(Scalar::gaussian(re, im))
            }
            ScalarRepr::Float([re, im]) => {
                if !re.is_finite() || !im.is_finite() {
                    return Err(D::Error::custom("non-finite float scalar"));
                }
                Ok(Scalar::from_c64(crate::scalar::C64::new(re, im)))
            }
        }
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<&Scalar>> = (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.get(i, j)).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<Scalar>> = Vec::deserialize(d)?;
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        Ok(Matrix::from_rows(rows))
    }
}

#[derive(Serialize, Deserialize)]
struct Term {
    exp: Vec<u32>,
    coeff: Scalar,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<Term> = self
            .terms()
            .map(|(e, c)| Term { exp: e.clone(), coeff: c.clone() })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms: Vec<Term> = Vec::deserialize(d)?;
        let nvars = terms
            .first()
            .map(|t| t.exp.len())
            .ok_or_else(|| D::Error::custom("empty term list; encode zero as one zero-coefficient term"))?;
        if !(1..=3).contains(&nvars) {
            return Err(D::Error::custom("polynomials must have 1 to 3 variables"));
        }
        let mut p = MultiPoly::zero(nvars);
        for t in terms {
            if t.exp.len() != nvars {
                return Err(D::Error::custom("inconsistent exponent lengths"));
            }
            p.add_term(t.exp, t.coeff);
        }
        Ok(p)
    }
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<Term> = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| Term { exp: vec![k as u32], coeff: c.clone() })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms: Vec<Term> = Vec::deserialize(d)?;
        let deg = terms.iter().map(|t| *t.exp.first().unwrap_or(&0)).max().unwrap_or(0);
        let mut coeffs = vec![Scalar::zero(); deg as usize + 1];
        for t in terms {
            if t.exp.len() != 1 {
                return Err(D::Error::custom("univariate terms need a single exponent"));
            }
            let k = t.exp[0] as usize;
            coeffs[k] = &coeffs[k] + &t.coeff;
        }
        Ok(UniPoly::new(coeffs))
    }
}

#[derive(Serialize, Deserialize)]
struct VesselRepr {
    a1: Matrix,
    a2: Matrix,
    phi: Matrix,
    sigma1: Matrix,
    sigma2: Matrix,
    gamma_in: Matrix,
    gamma_out: Matrix,
}

impl Serialize for Vessel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        VesselRepr {
            a1: self.a1.clone(),
            a2: self.a2.clone(),
            phi: self.phi.clone(),
            sigma1: self.sigma1.clone(),
            sigma2: self.sigma2.clone(),
            gamma_in: self.gamma_in.clone(),
            gamma_out: self.gamma_out.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vessel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = VesselRepr::deserialize(d)?;
        Vessel::new(r.a1, r.a2, r.phi, r.sigma1, r.sigma2, r.gamma_in, r.gamma_out)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip<T>(v: &T) -> T
    where
        T: Serialize + for<'de> Deserialize<'de>,
    {
        let s = serde_json::to_string(v).unwrap();
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn scalar_encodings() {
        let r = Scalar::ratio(-3, 6);
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"-1/2\"");
        let g = Scalar::gaussian_int(1, -2);
        assert_eq!(serde_json::to_string(&g).unwrap(), "{\"re\":\"1/1\",\"im\":\"-2/1\"}");
        let f = Scalar::from_c64(crate::scalar::C64::new(0.5, -1.25));
        assert_eq!(serde_json::to_string(&f).unwrap(), "[0.5,-1.25]");
        for v in [r, g, f] {
            assert_eq!(round_trip(&v), v);
        }
    }

    #[test]
    fn scalar_parse_plain_integer() {
        let v: Scalar = serde_json::from_str("\"7\"").unwrap();
        assert_eq!(v, Scalar::from_int(7));
    }

    #[test]
    fn matrix_round_trip() {
        let m = Matrix::from_rows(vec![
            vec![Scalar::one(), Scalar::i()],
            vec![Scalar::ratio(2, 3), Scalar::zero()],
        ]);
        assert_eq!(round_trip(&m), m);
    }

    #[test]
    fn poly_round_trips() {
        let p = UniPoly::from_ints(&[-1, 0, 1]);
        assert_eq!(round_trip(&p), p);
        let mut q = MultiPoly::zero(2);
        q.add_term(vec![2, 0], Scalar::from_int(-1));
        q.add_term(vec![0, 1], Scalar::one());
        assert_eq!(round_trip(&q), q);
    }

    #[test]
    fn vessel_round_trip() {
        let v = crate::vessel::vessel_fixture(
            &[Scalar::i()],
            &[Scalar::gaussian_int(1, 2)],
        )
        .unwrap();
        let v2 = round_trip(&v);
        assert_eq!(v2.a1, v.a1);
        assert_eq!(v2.gamma_out, v.gamma_out);
    }

    #[test]
    fn invalid_vessel_rejected() {
        let s = r#"{"a1":[["0"]],"a2":[["0"]],"phi":[["0"]],
                    "sigma1":[["0","1"],["1","0"]],
                    "sigma2":[["0"]],"gamma_in":[["0"]],"gamma_out":[["0"]]}"#;
        assert!(serde_json::from_str::<Vessel>(s).is_err());
    }
}
