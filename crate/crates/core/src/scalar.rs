//! Scalar arithmetic substrate: exact rationals, Gaussian rationals, and a
//! complex float path for curve-point computations.
//!
//! Exact variants are closed under field operations; mixed arithmetic
//! promotes Rational -> Gaussian -> Float. Gaussian values with zero
//! imaginary part are demoted to Rational so exact equality is structural.

use num::complex::Complex;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type C64 = Complex<f64>;

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Gaussian(BigRational, BigRational),
    Float(C64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    /// Gaussian rational; demotes to Rational when the imaginary part vanishes.
    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        if im.is_zero() {
            Scalar::Rational(re)
        } else {
            Scalar::Gaussian(re, im)
        }
    }

    pub fn gaussian_int(re: i64, im: i64) -> Self {
        Scalar::gaussian(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        )
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::gaussian_int(0, 1)
    }

    pub fn from_f64(x: f64) -> Self {
        Scalar::Float(C64::new(x, 0.0))
    }

    pub fn from_c64(z: C64) -> Self {
        Scalar::Float(z)
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Float(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Gaussian(a, b) => a.is_zero() && b.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            _ => false,
        }
    }

    /// Real and imaginary parts of an exact value.
    pub fn exact_parts(&self) -> Option<(BigRational, BigRational)> {
        match self {
            Scalar::Rational(r) => Some((r.clone(), BigRational::zero())),
            Scalar::Gaussian(a, b) => Some((a.clone(), b.clone())),
            Scalar::Float(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_c64(&self) -> C64 {
        match self {
            Scalar::Rational(r) => C64::new(rat_to_f64(r), 0.0),
            Scalar::Gaussian(a, b) => C64::new(rat_to_f64(a), rat_to_f64(b)),
            Scalar::Float(z) => *z,
        }
    }

    pub fn abs(&self) -> f64 {
        self.to_c64().norm()
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.clone()),
            Scalar::Gaussian(a, b) => Scalar::Gaussian(a.clone(), -b.clone()),
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }

    pub fn inv(&self) -> Self {
        match self {
            Scalar::Rational(r) => {
                assert!(!r.is_zero(), "division by zero");
                Scalar::Rational(r.recip())
            }
            Scalar::Gaussian(a, b) => {
                let n = a * a + b * b;
                assert!(!n.is_zero(), "division by zero");
                Scalar::gaussian(a / &n, -b / &n)
            }
            Scalar::Float(z) => Scalar::Float(z.inv()),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to quotient of float approximations for huge ints
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY * r.numer().signum().to_f64().unwrap());
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

enum Promoted {
    Rational(BigRational, BigRational),
    Gaussian((BigRational, BigRational), (BigRational, BigRational)),
    Float(C64, C64),
}

fn promote(a: &Scalar, b: &Scalar) -> Promoted {
    use Scalar::*;
    match (a, b) {
        (Rational(x), Rational(y)) => Promoted::Rational(x.clone(), y.clone()),
        (Float(_), _) | (_, Float(_)) => Promoted::Float(a.to_c64(), b.to_c64()),
        _ => {
            let (ar, ai) = a.exact_parts().unwrap();
            let (br, bi) = b.exact_parts().unwrap();
            Promoted::Gaussian((ar, ai), (br, bi))
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match promote(self, rhs) {
            Promoted::Rational(x, y) => Scalar::Rational(x + y),
            Promoted::Gaussian((a, b), (c, d)) => Scalar::gaussian(a + c, b + d),
            Promoted::Float(x, y) => Scalar::Float(x + y),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match promote(self, rhs) {
            Promoted::Rational(x, y) => Scalar::Rational(x - y),
            Promoted::Gaussian((a, b), (c, d)) => Scalar::gaussian(a - c, b - d),
            Promoted::Float(x, y) => Scalar::Float(x - y),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match promote(self, rhs) {
            Promoted::Rational(x, y) => Scalar::Rational(x * y),
            Promoted::Gaussian((a, b), (c, d)) => {
                Scalar::gaussian(&a * &c - &b * &d, &a * &d + &b * &c)
            }
            Promoted::Float(x, y) => Scalar::Float(x * y),
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r.clone()),
            Scalar::Gaussian(a, b) => Scalar::Gaussian(-a.clone(), -b.clone()),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Gaussian(a, b) => {
                write!(f, "{}/{} + {}/{}i", a.numer(), a.denom(), b.numer(), b.denom())
            }
            Scalar::Float(z) => write!(f, "{}+{}i", z.re, z.im),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_demotes_to_rational() {
        let a = Scalar::gaussian_int(3, 1);
        let b = Scalar::gaussian_int(3, -1);
        assert_eq!(&a * &b, Scalar::from_int(10));
        assert!(matches!(&a * &b, Scalar::Rational(_)));
    }

    #[test]
    fn gaussian_division_exact() {
        let a = Scalar::gaussian_int(1, 2);
        let b = Scalar::gaussian_int(3, -4);
        let q = &a / &b;
        assert_eq!(&q * &b, a);
    }

    #[test]
    fn float_contaminates() {
        let a = Scalar::from_f64(0.5);
        let b = Scalar::ratio(1, 2);
        assert!(!(&a + &b).is_exact());
        assert!((&a - &b).is_zero());
    }

    #[test]
    fn conj_and_inv() {
        let a = Scalar::gaussian_int(2, 5);
        assert_eq!(&a * &a.inv(), Scalar::one());
        assert_eq!(a.conj().conj(), a);
    }
}
