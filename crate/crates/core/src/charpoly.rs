//! Exact characteristic polynomials over the rationals.
//!
//! `f_n` is the characteristic polynomial of `B_n`, the matrix `A_alpha(P_{n+1})`
//! with the row and column of one end vertex removed. It obeys
//! `f_0 = 1`, `f_1 = x - alpha`, `f_n = (x - 2 alpha) f_{n-1} - (1 - alpha)^2 f_{n-2}`,
//! and `f_{-1} = 0` is used wherever an index runs below zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::matrix::RationalMatrix;
use crate::number::{format_rational, from_f64, int, rat, to_f64, Alpha, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CharPolyError {
    #[error("matrix is {0}x{1}, not square")]
    NotSquare(usize, usize),
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
    #[error("identity failed: {lhs} != {rhs}")]
    IdentityMismatch { lhs: String, rhs: String },
}

/// Univariate polynomial in `x`, coefficients ascending by degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        Poly::from_ints(&[0, 1])
    }

    /// `x - c`.
    pub fn x_minus(c: &Rational) -> Self {
        Poly::from_coeffs(vec![-c.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    /// Narrows a root bracketed by a sign change on `[lo, hi]` with exact
    /// bisection until the bracket is at most `width` wide. `None` when the
    /// ends do not change sign.
    pub fn refine_root(&self, lo: f64, hi: f64, width: f64) -> Option<f64> {
        let (mut lo, mut hi) = (from_f64(lo), from_f64(hi));
        let sign = |x: &Rational| self.eval(x).cmp(&Rational::zero());
        let lo_sign = sign(&lo);
        if lo_sign == Ordering::Equal {
            return Some(to_f64(&lo));
        }
        match sign(&hi) {
            Ordering::Equal => return Some(to_f64(&hi)),
            s if s == lo_sign => return None,
            _ => {}
        }
        let half = rat(1, 2);
        while to_f64(&(&hi - &lo)) > width {
            let mid = (&lo + &hi) * &half;
            match sign(&mid) {
                Ordering::Equal => return Some(to_f64(&mid)),
                s if s == lo_sign => lo = mid,
                _ => hi = mid,
            }
        }
        Some(to_f64(&((&lo + &hi) * &half)))
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::from_ints(&[1])
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let at = |p: &Poly, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
        Poly::from_coeffs((0..n).map(|i| at(self, i) + at(rhs, i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

/// `[c0, c1, ...]` with every coefficient as `p/q`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `f_0, ..., f_n` at a fixed alpha.
pub fn f_sequence(n: usize, alpha: &Alpha) -> Vec<Poly> {
    let two_alpha = alpha.value() * int(2);
    let shift = Poly::x_minus(&two_alpha);
    let c = alpha.complement();
    let c2 = &c * &c;
    let mut seq = Vec::with_capacity(n + 1);
    seq.push(Poly::one());
    if n >= 1 {
        seq.push(Poly::x_minus(alpha.value()));
    }
    for k in 2..=n {
        let next = &(&shift * &seq[k - 1]) - &seq[k - 2].scale(&c2);
        seq.push(next);
    }
    seq
}

pub fn f_poly(n: usize, alpha: &Alpha) -> Poly {
    f_sequence(n, alpha).pop().expect("f_0 always present")
}

/// `f_{n}` with `f_{-1} = 0`.
fn f_at(seq: &[Poly], n: isize) -> Poly {
    if n < 0 {
        Poly::zero()
    } else {
        seq[n as usize].clone()
    }
}

/// `f_a f_b - (1 - alpha)^2 f_{a-1} f_{b-1}`, the characteristic polynomial
/// of `A_alpha(P_{a+b})` when `a, b >= 1`.
///
/// With `b = 0` this collapses to `f_a`, which is `phi(P_a)` only at
/// `alpha = 0`.
pub fn phi_path(a: usize, b: usize, alpha: &Alpha) -> Result<Poly, CharPolyError> {
    if a + b == 0 {
        return Err(CharPolyError::InvalidArguments("a + b must be positive".into()));
    }
    let seq = f_sequence(a.max(b), alpha);
    let c = alpha.complement();
    let (a, b) = (a as isize, b as isize);
    let main = &f_at(&seq, a) * &f_at(&seq, b);
    let tail = &f_at(&seq, a - 1) * &f_at(&seq, b - 1);
    Ok(&main - &tail.scale(&(&c * &c)))
}

/// Characteristic polynomial after joining `G` and `H` by a bridge `uv` whose
/// weight squares to `w_squared`.
pub fn bridge_phi(
    phi_g: &Poly,
    phi_g_minus_u: &Poly,
    phi_h: &Poly,
    phi_h_minus_v: &Poly,
    w_squared: &Rational,
) -> Poly {
    &(phi_g * phi_h) - &(phi_g_minus_u * phi_h_minus_v).scale(w_squared)
}

/// Characteristic polynomial of the coalescence `G(u) . H(v)`.
pub fn coalescence_phi(
    phi_g: &Poly,
    phi_g_minus_u: &Poly,
    phi_h: &Poly,
    phi_h_minus_v: &Poly,
) -> Poly {
    let both_deleted = phi_g_minus_u * phi_h_minus_v;
    &(&(phi_g * phi_h_minus_v) + &(phi_g_minus_u * phi_h)) - &(&Poly::x() * &both_deleted)
}

/// `-(1 - alpha)^{2(b-1)} (alpha f_l + (1 - alpha)^2 f_{l-1})` with `l = a - b`.
pub fn inequ_closed_form(a: usize, b: usize, alpha: &Alpha) -> Result<Poly, CharPolyError> {
    check_inequ_args(a, b)?;
    let l = a - b;
    let seq = f_sequence(l, alpha);
    let c = alpha.complement();
    let c2 = &c * &c;
    let inner = &seq[l].scale(alpha.value()) + &seq[l - 1].scale(&c2);
    let factor = num_traits::pow(c2, b - 1);
    Ok(inner.scale(&-factor))
}

/// `f_a f_{b-1} - f_{a-1} f_b`, checked exactly against its telescoped
/// closed form.
pub fn inequ_difference(a: usize, b: usize, alpha: &Alpha) -> Result<Poly, CharPolyError> {
    check_inequ_args(a, b)?;
    let seq = f_sequence(a, alpha);
    let lhs = &(&seq[a] * &seq[b - 1]) - &(&seq[a - 1] * &seq[b]);
    let rhs = inequ_closed_form(a, b, alpha)?;
    if lhs != rhs {
        return Err(CharPolyError::IdentityMismatch {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    Ok(lhs)
}

fn check_inequ_args(a: usize, b: usize) -> Result<(), CharPolyError> {
    if b == 0 || a <= b {
        return Err(CharPolyError::InvalidArguments(format!(
            "need a > b >= 1, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

/// `f_0(x), ..., f_n(x)` at an exact point.
pub fn f_values_at(n: usize, alpha: &Alpha, x: &Rational) -> Vec<Rational> {
    let c = alpha.complement();
    let c2 = &c * &c;
    let shift = x - alpha.value() * int(2);
    let mut vals = vec![Rational::one()];
    if n >= 1 {
        vals.push(x - alpha.value());
    }
    for k in 2..=n {
        let next = &shift * &vals[k - 1] - &c2 * &vals[k - 2];
        vals.push(next);
    }
    vals
}

/// `f_n(x)` in floating point via the recurrence.
pub fn f_value_f64(n: usize, alpha: f64, x: f64) -> f64 {
    let c2 = (1.0 - alpha) * (1.0 - alpha);
    let (mut prev, mut cur) = (1.0, x - alpha);
    if n == 0 {
        return prev;
    }
    for _ in 2..=n {
        let next = (x - 2.0 * alpha) * cur - c2 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `det(xI - M)` by the Faddeev-LeVerrier recursion in exact arithmetic.
///
/// With `N_0 = I` and `c_n = 1`: `c_{n-k} = -tr(M N_{k-1}) / k` and
/// `N_k = M N_{k-1} + c_{n-k} I`.
pub fn char_poly_oracle(m: &RationalMatrix) -> Result<Poly, CharPolyError> {
    if !m.is_square() {
        return Err(CharPolyError::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut acc = RationalMatrix::identity(n);
    for k in 1..=n {
        let prod = m.mul(&acc);
        let c = -prod.trace() / int(k as i64);
        acc = prod;
        for i in 0..n {
            acc[(i, i)] += &c;
        }
        coeffs[n - k] = c;
    }
    Ok(Poly::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarter() -> Alpha {
        Alpha::ratio(1, 4)
    }

    /// Cofactor expansion along the first row, evaluated at a point.
    fn det_at(m: &RationalMatrix, x: &Rational) -> Rational {
        let n = m.rows();
        if n == 0 {
            return Rational::one();
        }
        let shifted = RationalMatrix::from_fn(n, n, |i, j| {
            let base = -m[(i, j)].clone();
            if i == j {
                base + x
            } else {
                base
            }
        });
        laplace(&shifted)
    }

    fn laplace(m: &RationalMatrix) -> Rational {
        let n = m.rows();
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut total = Rational::zero();
        for j in 0..n {
            if m[(0, j)].is_zero() {
                continue;
            }
            let minor = RationalMatrix::from_fn(n - 1, n - 1, |r, c| {
                m[(r + 1, if c < j { c } else { c + 1 })].clone()
            });
            let term = &m[(0, j)] * laplace(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn refine_root_brackets() {
        // x^2 - 2
        let p = Poly::from_ints(&[-2, 0, 1]);
        let r = p.refine_root(1.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(p.refine_root(2.0, 3.0, 1e-6), None);
        assert_eq!(Poly::from_ints(&[-1, 1]).refine_root(1.0, 2.0, 1e-6), Some(1.0));
    }

    #[test]
    fn poly_arithmetic() {
        let p = Poly::from_ints(&[-1, 0, 1]);
        assert_eq!(p.to_string(), "[-1/1, 0/1, 1/1]");
        assert_eq!(p.degree(), Some(2));
        assert!(p.is_monic());
        assert_eq!(&p - &p, Poly::zero());
        assert_eq!(Poly::zero().degree(), None);
        let q = &Poly::x_minus(&int(1)) * &Poly::x_minus(&int(-1));
        assert_eq!(q, p);
        assert_eq!(p.eval(&int(3)), int(8));
        assert_eq!(p.eval_f64(0.5), -0.75);
    }

    #[test]
    fn f_small_cases() {
        let a = quarter();
        assert_eq!(f_poly(0, &a), Poly::one());
        assert_eq!(f_poly(1, &a), Poly::x_minus(&rat(1, 4)));
        assert_eq!(f_poly(2, &Alpha::zero()), Poly::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn f_matches_cofactor_expansion() {
        // B_3 at alpha = 1/4: diag(2a, 2a, a), off-diagonal 1 - a.
        let a = quarter();
        let c = a.complement();
        let b3 = RationalMatrix::from_rows(vec![
            vec![rat(1, 2), c.clone(), int(0)],
            vec![c.clone(), rat(1, 2), c.clone()],
            vec![int(0), c.clone(), rat(1, 4)],
        ]);
        let f3 = f_poly(3, &a);
        for x in [int(0), rat(1, 3), int(2), rat(-7, 5)] {
            assert_eq!(f3.eval(&x), det_at(&b3, &x));
        }
        assert_eq!(char_poly_oracle(&b3).unwrap(), f3);
    }

    #[test]
    fn phi_path_small_cases() {
        let z = Alpha::zero();
        assert_eq!(phi_path(1, 1, &z).unwrap(), Poly::from_ints(&[-1, 0, 1]));
        assert_eq!(phi_path(2, 1, &z).unwrap(), Poly::from_ints(&[0, -2, 0, 1]));
        let h = Alpha::ratio(1, 2);
        assert_eq!(phi_path(3, 2, &h).unwrap(), phi_path(4, 1, &h).unwrap());
        assert_eq!(phi_path(4, 0, &z).unwrap(), f_poly(4, &z));
        assert!(phi_path(0, 0, &z).is_err());
    }

    #[test]
    fn bridge_and_coalescence_small_cases() {
        let x = Poly::x();
        let one = Poly::one();
        assert_eq!(
            bridge_phi(&x, &one, &x, &one, &int(1)),
            Poly::from_ints(&[-1, 0, 1])
        );
        assert_eq!(
            bridge_phi(&x, &one, &x, &one, &int(3)),
            Poly::from_ints(&[-3, 0, 1])
        );
        let p2 = Poly::from_ints(&[-1, 0, 1]);
        assert_eq!(
            bridge_phi(&p2, &x, &p2, &x, &int(1)),
            Poly::from_ints(&[1, 0, -3, 0, 1])
        );
        assert_eq!(
            coalescence_phi(&p2, &x, &p2, &x),
            Poly::from_ints(&[0, -2, 0, 1])
        );
        assert_eq!(coalescence_phi(&x, &one, &x, &one), x);
        // S(1,1) rooted at its center, glued to an end of P_2.
        let s11 = Poly::from_ints(&[0, -2, 0, 1]);
        let s11_minus_center = Poly::from_ints(&[0, 0, 1]);
        assert_eq!(
            coalescence_phi(&s11, &s11_minus_center, &p2, &x),
            Poly::from_ints(&[0, 0, -3, 0, 1])
        );
    }

    #[test]
    fn inequ_examples() {
        let z = Alpha::zero();
        assert_eq!(inequ_difference(2, 1, &z).unwrap(), Poly::from_ints(&[-1]));
        assert_eq!(inequ_difference(3, 1, &z).unwrap(), Poly::from_ints(&[0, -1]));
        let h = Alpha::ratio(1, 2);
        assert_eq!(
            inequ_difference(3, 2, &h).unwrap(),
            inequ_closed_form(3, 2, &h).unwrap()
        );
        assert!(matches!(
            inequ_difference(2, 2, &z),
            Err(CharPolyError::InvalidArguments(_))
        ));
        assert!(inequ_difference(2, 0, &z).is_err());
    }

    #[test]
    fn oracle_basics() {
        let one = RationalMatrix::from_rows(vec![vec![rat(2, 3)]]);
        assert_eq!(char_poly_oracle(&one).unwrap(), Poly::x_minus(&rat(2, 3)));
        let p2 = RationalMatrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        assert_eq!(char_poly_oracle(&p2).unwrap(), Poly::from_ints(&[-1, 0, 1]));
        let rect = RationalMatrix::zeros(2, 3);
        assert_eq!(
            char_poly_oracle(&rect),
            Err(CharPolyError::NotSquare(2, 3))
        );
        assert_eq!(char_poly_oracle(&RationalMatrix::zeros(0, 0)).unwrap(), Poly::one());
    }

    #[test]
    fn pointwise_values_agree() {
        let a = Alpha::ratio(3, 4);
        let x = rat(7, 5);
        let vals = f_values_at(9, &a, &x);
        for (n, v) in vals.iter().enumerate() {
            assert_eq!(*v, f_poly(n, &a).eval(&x));
            assert!((to_f64(v) - f_value_f64(n, 0.75, 1.4)).abs() < 1e-12);
        }
    }
}
