//! Exact scalars: arbitrary precision rationals and rational multiples of
//! square roots.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational scalar used for every identity check.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// `p/q` as an exact rational.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `p/q`, an integer, or a decimal literal such as `0.25`.
///
/// Decimals are converted digit by digit (`0.25` is exactly `1/4`), never
/// through a float.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let malformed = || ParseRationalError::Malformed(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| malformed())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| malformed())?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(malformed());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(malformed());
    }
    let digits = format!("{whole}{frac}");
    let num = BigInt::from_str(&digits).map_err(|_| malformed())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(num, den);
    Ok(if negative { -value } else { value })
}

/// Always `p/q`, including integers (`3/1`).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

/// The mixing parameter of `A_alpha = alpha D + (1 - alpha) A`, kept in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alpha(Rational);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphaError {
    #[error("alpha = {0} lies outside [0, 1)")]
    OutOfRange(String),
    #[error(transparent)]
    Parse(#[from] ParseRationalError),
}

impl Alpha {
    pub fn new(value: Rational) -> Result<Self, AlphaError> {
        if value.is_negative() || value >= Rational::one() {
            return Err(AlphaError::OutOfRange(format_rational(&value)));
        }
        Ok(Alpha(value))
    }

    pub fn zero() -> Self {
        Alpha(Rational::zero())
    }

    /// `p/q`; panics when out of range.
    pub fn ratio(p: i64, q: i64) -> Self {
        Alpha::new(rat(p, q)).expect("alpha in [0, 1)")
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// `1 - alpha`.
    pub fn complement(&self) -> Rational {
        Rational::one() - &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.0)
    }

    /// The grid used across the verification suites: 0, 1/4, 1/2, 3/4.
    pub fn quarter_grid() -> Vec<Alpha> {
        (0..4).map(|i| Alpha::ratio(i, 4)).collect()
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for Alpha {
    type Err = AlphaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Alpha::new(parse_rational(s)?)
    }
}

impl Serialize for Alpha {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `coef * sqrt(radicand)` with `radicand` square free.
///
/// Edge weights such as `sqrt(s)` on the symmetrized quotient path live here;
/// everything rational has radicand 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    coef: Rational,
    radicand: u64,
}

impl Surd {
    pub fn new(coef: Rational, radicand: u64) -> Self {
        assert!(radicand > 0, "radicand must be positive");
        if coef.is_zero() {
            return Self::zero();
        }
        let (square, free) = split_square(radicand);
        Surd {
            coef: coef * Rational::from_integer(BigInt::from(square)),
            radicand: free,
        }
    }

    pub fn zero() -> Self {
        Surd {
            coef: Rational::zero(),
            radicand: 1,
        }
    }

    pub fn one() -> Self {
        Surd::rational(Rational::one())
    }

    pub fn rational(q: Rational) -> Self {
        Surd {
            coef: q,
            radicand: 1,
        }
    }

    /// `sqrt(s)`.
    pub fn sqrt(s: u64) -> Self {
        Surd::new(Rational::one(), s)
    }

    pub fn coef(&self) -> &Rational {
        &self.coef
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.coef.is_positive()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand == 1
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.coef)
    }

    /// Exact square of the value, `coef^2 * radicand`.
    pub fn squared(&self) -> Rational {
        &self.coef * &self.coef * Rational::from_integer(BigInt::from(self.radicand))
    }

    pub fn scale(&self, q: &Rational) -> Surd {
        Surd::new(&self.coef * q, self.radicand)
    }

    pub fn mul(&self, other: &Surd) -> Surd {
        Surd::new(&self.coef * &other.coef, self.radicand * other.radicand)
    }

    /// Sum when both terms share a radicand (or either is zero).
    pub fn checked_add(&self, other: &Surd) -> Option<Surd> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        (self.radicand == other.radicand)
            .then(|| Surd::new(&self.coef + &other.coef, self.radicand))
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.coef) * (self.radicand as f64).sqrt()
    }
}

impl From<Rational> for Surd {
    fn from(q: Rational) -> Self {
        Surd::rational(q)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand == 1 {
            write!(f, "{}", format_rational(&self.coef))
        } else {
            write!(f, "sqrt({})*{}", self.radicand, format_rational(&self.coef))
        }
    }
}

impl FromStr for Surd {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("sqrt(") {
            let (rad, tail) = rest
                .split_once(')')
                .ok_or_else(|| ParseRationalError::Malformed(s.to_string()))?;
            let radicand: u64 = rad
                .trim()
                .parse()
                .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
            if radicand == 0 {
                return Err(ParseRationalError::Malformed(s.to_string()));
            }
            let coef = match tail.trim().strip_prefix('*') {
                Some(c) => parse_rational(c)?,
                None if tail.trim().is_empty() => Rational::one(),
                None => return Err(ParseRationalError::Malformed(s.to_string())),
            };
            return Ok(Surd::new(coef, radicand));
        }
        parse_rational(s).map(Surd::rational)
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Surd {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `n = square^2 * free` with `free` square free.
fn split_square(mut n: u64) -> (u64, u64) {
    let mut square = 1;
    let mut free = 1;
    let mut p = 2;
    while p * p <= n {
        let mut count = 0;
        while n.is_multiple_of(p) {
            n /= p;
            count += 1;
        }
        square *= p.pow(count / 2);
        if count % 2 == 1 {
            free *= p;
        }
        p += 1;
    }
    (square, free * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("1/3").unwrap(), rat(1, 3));
        assert_eq!(parse_rational("-2").unwrap(), int(-2));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn alpha_range() {
        assert!("0".parse::<Alpha>().is_ok());
        assert!("0.75".parse::<Alpha>().is_ok());
        assert!(matches!("1".parse::<Alpha>(), Err(AlphaError::OutOfRange(_))));
        assert!(matches!("2".parse::<Alpha>(), Err(AlphaError::OutOfRange(_))));
        assert!(matches!("-1/4".parse::<Alpha>(), Err(AlphaError::OutOfRange(_))));
        assert_eq!(Alpha::ratio(1, 4).complement(), rat(3, 4));
        assert_eq!(Alpha::ratio(1, 3).to_string(), "1/3");
    }

    #[test]
    fn surd_normalizes_square_factors() {
        let s = Surd::new(rat(1, 3), 9);
        assert!(s.is_rational());
        assert_eq!(s.coef(), &int(1));
        let s = Surd::new(int(1), 12);
        assert_eq!(s.radicand(), 3);
        assert_eq!(s.coef(), &int(2));
        assert_eq!(Surd::sqrt(3).squared(), int(3));
    }

    #[test]
    fn surd_text_form() {
        let s = Surd::sqrt(3).scale(&rat(1, 2));
        assert_eq!(s.to_string(), "sqrt(3)*1/2");
        assert_eq!("sqrt(3)*1/2".parse::<Surd>().unwrap(), s);
        assert_eq!(Surd::rational(int(4)).to_string(), "4/1");
        assert_eq!("sqrt(2)".parse::<Surd>().unwrap(), Surd::sqrt(2));
    }

    #[test]
    fn surd_addition_needs_matching_radicand() {
        assert!(Surd::sqrt(2).checked_add(&Surd::sqrt(3)).is_none());
        assert_eq!(
            Surd::sqrt(2).checked_add(&Surd::sqrt(2)).unwrap(),
            Surd::sqrt(8)
        );
        assert_eq!(Surd::zero().checked_add(&Surd::sqrt(3)).unwrap(), Surd::sqrt(3));
    }
}
