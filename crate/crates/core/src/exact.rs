//! Exact scalars: rational complex coefficients and square roots of
//! nonnegative rationals (moduli and ℓ² norms of rational vectors).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient field: complex numbers with exact rational parts.
pub type Coeff = Complex<BigRational>;

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn coeff(re: BigRational, im: BigRational) -> Coeff {
    Complex::new(re, im)
}

pub fn real(re: BigRational) -> Coeff {
    Complex::new(re, BigRational::zero())
}

pub fn is_zero_coeff(c: &Coeff) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

/// `|c|²`, exact.
pub fn modulus_sq(c: &Coeff) -> BigRational {
    &c.re * &c.re + &c.im * &c.im
}

/// `|c|²` as an unreduced fraction `(num, den)` with `den > 0`; cheaper
/// than [`modulus_sq`] when only comparisons are needed.
pub fn modulus_sq_parts(c: &Coeff) -> (BigInt, BigInt) {
    let (a, b) = (c.re.numer(), c.re.denom());
    let (x, y) = (c.im.numer(), c.im.denom());
    let bd = b * y;
    let num = a * a * y * y + x * x * b * b;
    (num, &bd * &bd)
}

pub fn coeff_to_f64(c: &Coeff) -> Complex<f64> {
    Complex::new(
        c.re.to_f64().unwrap_or(f64::NAN),
        c.im.to_f64().unwrap_or(f64::NAN),
    )
}

/// Always `num/den`, with `den > 0`.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = |e: &dyn fmt::Display| Error::Parse(format!("bad rational {s:?}: {e}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|e| bad(&e))?;
            let d: BigInt = d.trim().parse().map_err(|e| bad(&e))?;
            if d.is_zero() {
                return Err(bad(&"zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.trim().parse().map_err(|e| bad(&e))?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Compares two rationals by cross-multiplying, which is much cheaper than
/// the generic ordering for large operands.
pub fn cmp_rational(a: &BigRational, b: &BigRational) -> Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

/// `√q` for a nonnegative rational `q`, kept exactly as `q`.
///
/// Comparison and equality go through the square, which is monotone on
/// nonnegative values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SqrtRational {
    square: BigRational,
}

impl SqrtRational {
    pub fn zero() -> Self {
        SqrtRational {
            square: BigRational::zero(),
        }
    }

    pub fn from_square(square: BigRational) -> Self {
        assert!(!square.is_negative(), "square must be nonnegative");
        SqrtRational { square }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        SqrtRational {
            square: q.abs() * q.abs(),
        }
    }

    pub fn square(&self) -> &BigRational {
        &self.square
    }

    pub fn is_zero(&self) -> bool {
        self.square.is_zero()
    }

    /// The value itself when it is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.square.numer();
        let d = self.square.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
    }

    pub fn to_f64(&self) -> f64 {
        self.square.to_f64().unwrap_or(f64::INFINITY).sqrt()
    }
}

impl PartialOrd for SqrtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SqrtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_rational(&self.square, &other.square)
    }
}

/// `num/den` when rational, `sqrt(num/den)` otherwise.
impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => f.write_str(&format_rational(&q)),
            None => write!(f, "sqrt({})", format_rational(&self.square)),
        }
    }
}
