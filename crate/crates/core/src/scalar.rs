//! Dual-mode scalars: exact rationals or 64-bit floats.
//!
//! A whole computation runs in a single mode.  Exact mode admits no rounding,
//! so long orbits are drift-free; float mode exists for measure and geometry
//! work and carries the comparison tolerance [`FLOAT_EPS`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Absolute tolerance for float-mode comparisons.
pub const FLOAT_EPS: f64 = 1e-9;

/// Arithmetic mode of a scalar or of a whole computation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "float"),
        }
    }
}

impl FromStr for Mode {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, ScalarError> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(ScalarError::BadMode(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ScalarError {
    #[error("cannot mix exact and float scalars in one computation")]
    ModeMismatch,
    #[error("unknown mode `{0}` (expected \"exact\" or \"float\")")]
    BadMode(String),
    #[error("cannot parse `{0}` as a number")]
    BadNumber(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// A number in one of the two arithmetic modes.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// The value as an `i64` when it is an exact integer in range.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Scalar::Exact(r) if r.denom().is_one() => r.numer().to_i64(),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(v) => *v == 0.0,
        }
    }

    /// Parses `"p/q"`, an integer or a decimal string.  In exact mode decimals
    /// are converted exactly (`"2.5"` becomes `5/2`).
    pub fn parse(s: &str, mode: Mode) -> Result<Self, ScalarError> {
        let s = s.trim();
        match mode {
            Mode::Float => {
                let finite = |v: f64| {
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(ScalarError::BadNumber(s.to_string()))
                    }
                };
                if let Some((num, den)) = s.split_once('/') {
                    let n: f64 = num
                        .trim()
                        .parse()
                        .map_err(|_| ScalarError::BadNumber(s.to_string()))?;
                    let d: f64 = den
                        .trim()
                        .parse()
                        .map_err(|_| ScalarError::BadNumber(s.to_string()))?;
                    if d == 0.0 {
                        return Err(ScalarError::ZeroDenominator(s.to_string()));
                    }
                    Ok(Scalar::Float(finite(n / d)?))
                } else {
                    let v: f64 = s
                        .parse()
                        .map_err(|_| ScalarError::BadNumber(s.to_string()))?;
                    Ok(Scalar::Float(finite(v)?))
                }
            }
            Mode::Exact => Ok(Scalar::Exact(parse_rational(s)?)),
        }
    }

    /// Sign with float tolerance around zero: returns `None` when the value is
    /// within [`FLOAT_EPS`] of zero in float mode (boundary-ambiguous).
    pub fn fuzzy_sign(&self) -> Option<Ordering> {
        match self {
            Scalar::Exact(r) => Some(r.cmp(&BigRational::zero())),
            Scalar::Float(v) => {
                if v.abs() <= FLOAT_EPS {
                    None
                } else if *v > 0.0 {
                    Some(Ordering::Greater)
                } else {
                    Some(Ordering::Less)
                }
            }
        }
    }

    /// Compares against an integer constant; `None` means float-mode
    /// boundary ambiguity.
    pub fn fuzzy_cmp_int(&self, k: i64) -> Option<Ordering> {
        match self {
            Scalar::Exact(r) => Some(r.cmp(&BigRational::from_integer(BigInt::from(k)))),
            Scalar::Float(v) => {
                let d = v - k as f64;
                if d.abs() <= FLOAT_EPS {
                    None
                } else if d > 0.0 {
                    Some(Ordering::Greater)
                } else {
                    Some(Ordering::Less)
                }
            }
        }
    }

    /// Mode-aware equality: exact in exact mode, within [`FLOAT_EPS`] in
    /// float mode.
    pub fn close_to(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => (a - b).abs() <= FLOAT_EPS,
            _ => false,
        }
    }
}

/// Parses an exact rational from `"p/q"`, an integer or a finite decimal.
pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| ScalarError::BadNumber(s.to_string()))?;
        let d = BigInt::from_str(den.trim()).map_err(|_| ScalarError::BadNumber(s.to_string()))?;
        if d.is_zero() {
            return Err(ScalarError::ZeroDenominator(s.to_string()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            "0"
        } else {
            int_part
        };
        let i = BigInt::from_str(int_part).map_err(|_| ScalarError::BadNumber(s.to_string()))?;
        if frac_part.is_empty() {
            return Ok(BigRational::from_integer(i));
        }
        if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ScalarError::BadNumber(s.to_string()));
        }
        let f = BigInt::from_str(frac_part).map_err(|_| ScalarError::BadNumber(s.to_string()))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = BigRational::new(f, scale);
        let int = BigRational::from_integer(i.abs());
        let total = int + frac;
        return Ok(if neg { -total } else { total });
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| ScalarError::BadNumber(s.to_string()))
}

/// Renders an exact rational as `"p"` or `"p/q"`.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", rational_string(r)),
            Scalar::Float(v) => write!(f, "{}", v),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            _ => false,
        }
    }
}

/// Exact square root of a rational, when it is itself rational.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.$method(b)),
                    (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a.$method(b)),
                    _ => panic!("mixed exact/float scalar arithmetic"),
                }
            }
        }
    };
}

scalar_binop!(Add, add);
scalar_binop!(Sub, sub);
scalar_binop!(Mul, mul);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r.clone()),
            Scalar::Float(v) => Scalar::Float(-v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(
            Scalar::parse("5/2", Mode::Exact).unwrap(),
            Scalar::from_ratio(5, 2)
        );
        assert_eq!(
            Scalar::parse("2.5", Mode::Exact).unwrap(),
            Scalar::from_ratio(5, 2)
        );
        assert_eq!(
            Scalar::parse("-0.25", Mode::Exact).unwrap(),
            Scalar::from_ratio(-1, 4)
        );
        assert_eq!(
            Scalar::parse("-7", Mode::Exact).unwrap(),
            Scalar::from_int(-7)
        );
        assert!(Scalar::parse("1/0", Mode::Exact).is_err());
        assert!(Scalar::parse("x", Mode::Float).is_err());
        match Scalar::parse("3/4", Mode::Float).unwrap() {
            Scalar::Float(v) => assert_eq!(v, 0.75),
            _ => panic!("expected float"),
        }
    }

    #[test]
    fn fuzzy_comparisons_flag_boundaries() {
        assert_eq!(
            Scalar::Float(2.0 + 1e-12).fuzzy_cmp_int(2),
            None,
            "within tolerance of 2"
        );
        assert_eq!(
            Scalar::Float(2.1).fuzzy_cmp_int(2),
            Some(Ordering::Greater)
        );
        assert_eq!(
            Scalar::from_ratio(20000000001, 10000000000).fuzzy_cmp_int(2),
            Some(Ordering::Greater),
            "exact mode is never ambiguous"
        );
    }

    #[test]
    fn exact_sqrt_detects_squares() {
        let r = BigRational::new(BigInt::from(25), BigInt::from(4));
        assert_eq!(
            rational_sqrt(&r),
            Some(BigRational::new(BigInt::from(5), BigInt::from(2)))
        );
        let r = BigRational::new(BigInt::from(2), BigInt::from(1));
        assert_eq!(rational_sqrt(&r), None);
    }

    #[test]
    #[should_panic(expected = "mixed exact/float")]
    fn mixed_mode_arithmetic_panics() {
        let _ = &Scalar::from_int(1) + &Scalar::Float(1.0);
    }
}
