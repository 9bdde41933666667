//! Spectral radii in floating point.
//!
//! Two independent routes: cyclic Jacobi diagonalization for symmetric
//! matrices and shifted power iteration for any nonnegative matrix.

use serde::Serialize;
use thiserror::Error;

use crate::charpoly::f_value_f64;
use crate::matrix::FloatMatrix;
use crate::number::Alpha;
use crate::tolerances;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("matrix is {0}x{1}, not square")]
    NotSquare(usize, usize),
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("negative entry {value} at ({row}, {col})")]
    Negative { row: usize, col: usize, value: f64 },
    #[error("no convergence after {0} iterations")]
    NotConverged(usize),
    #[error("{0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusResult {
    pub value: f64,
    /// `||Mx - value x||_inf` for the returned eigenvector.
    pub residual: f64,
    /// Jacobi sweeps or power steps.
    pub iterations: usize,
}

fn check_square(m: &FloatMatrix) -> Result<usize, SpectraError> {
    if !m.is_square() {
        return Err(SpectraError::NotSquare(m.rows(), m.cols()));
    }
    if m.rows() == 0 {
        return Err(SpectraError::Empty);
    }
    Ok(m.rows())
}

fn residual(m: &FloatMatrix, x: &[f64], value: f64) -> f64 {
    m.mul_vec(x)
        .iter()
        .zip(x)
        .map(|(mx, xi)| (mx - value * xi).abs())
        .fold(0.0, f64::max)
}

/// Eigenvalues and eigenvectors (as columns) of a symmetric matrix.
///
/// Classic cyclic sweep: every off-diagonal pair is annihilated by one plane
/// rotation per sweep until the off-diagonal mass is negligible.
pub fn jacobi_eigen(m: &FloatMatrix) -> Result<(Vec<f64>, FloatMatrix, usize), SpectraError> {
    let n = check_square(m)?;
    let scale = m.inf_norm().max(1.0);
    let asym = m.max_abs_asymmetry();
    if asym > tolerances::SYMMETRY * scale {
        return Err(SpectraError::NotSymmetric(asym));
    }
    let mut a = m.clone();
    let mut v = FloatMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 });
    let target = tolerances::JACOBI_OFF_DIAGONAL * m.frobenius_norm();
    let mut sweeps = 0;
    loop {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        if sweeps >= 100 {
            return Err(SpectraError::NotConverged(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[(i, i)]).collect();
    Ok((values, v, sweeps))
}

/// Largest eigenvalue of a symmetric matrix; the spectral radius whenever the
/// matrix is nonnegative.
pub fn radius_symmetric(m: &FloatMatrix) -> Result<RadiusResult, SpectraError> {
    let (values, vectors, sweeps) = jacobi_eigen(m)?;
    let top = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("nonempty");
    let x: Vec<f64> = (0..m.rows()).map(|k| vectors[(k, top)]).collect();
    let value = values[top];
    Ok(RadiusResult {
        value,
        residual: residual(m, &x, value),
        iterations: sweeps,
    })
}

/// Perron root of a nonnegative matrix by power iteration on `M + cI`, where
/// `c` is the largest diagonal entry plus one.
///
/// The shift makes the dominant eigenvalue unique in modulus. While the
/// iterate stays positive the Collatz-Wielandt quotients bracket the root and
/// the loop stops once the bracket closes. Reducible inputs can keep the
/// bracket open forever, so a small residual also ends the loop.
pub fn radius_power(m: &FloatMatrix) -> Result<RadiusResult, SpectraError> {
    let n = check_square(m)?;
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)] < 0.0 {
                return Err(SpectraError::Negative {
                    row: i,
                    col: j,
                    value: m[(i, j)],
                });
            }
        }
    }
    let shift = (0..n).map(|i| m[(i, i)]).fold(f64::MIN, f64::max) + 1.0;
    let scale = m.inf_norm().max(1.0);
    let mut x = vec![1.0; n];
    for iteration in 1..=tolerances::POWER_MAX_ITERATIONS {
        let mx = m.mul_vec(&x);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut positive = true;
        for (mxi, xi) in mx.iter().zip(&x) {
            if *xi > 0.0 {
                let q = mxi / xi;
                lo = lo.min(q);
                hi = hi.max(q);
            } else {
                positive = false;
            }
        }
        let bracket_closed = positive && hi - lo <= 1e-14 * scale;
        let estimate = if bracket_closed { 0.5 * (lo + hi) } else { hi };
        if bracket_closed || residual(m, &x, estimate) <= 1e-13 * scale {
            return Ok(RadiusResult {
                value: estimate,
                residual: residual(m, &x, estimate),
                iterations: iteration,
            });
        }
        let mut y: Vec<f64> = mx.iter().zip(&x).map(|(a, b)| a + shift * b).collect();
        let norm = y.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()));
        if norm == 0.0 {
            return Ok(RadiusResult {
                value: 0.0,
                residual: 0.0,
                iterations: iteration,
            });
        }
        y.iter_mut().for_each(|v| *v /= norm);
        x = y;
    }
    Err(SpectraError::NotConverged(tolerances::POWER_MAX_ITERATIONS))
}

/// Largest root of `f_n`, the spectral radius of `B_n`.
///
/// `theta_1 = alpha`. For `n >= 2` the root lies in `(theta_{n-1}, 2)`:
/// `f_n` is negative at `theta_{n-1}` by interlacing, and positive at 2
/// because every row sum of `B_n` is at most 2 with the end rows below it.
pub fn theta(n: usize, alpha: &Alpha) -> Result<f64, SpectraError> {
    if n == 0 {
        return Err(SpectraError::InvalidArgument("theta needs n >= 1".into()));
    }
    let a = alpha.to_f64();
    let mut current = a;
    for k in 2..=n {
        let (mut lo, mut hi) = (current, 2.0);
        assert!(f_value_f64(k, a, lo) < 0.0, "f_{k} must be negative at theta_{}", k - 1);
        assert!(f_value_f64(k, a, hi) > 0.0, "f_{k} must be positive at 2");
        while hi - lo > tolerances::THETA_WIDTH {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f_value_f64(k, a, mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        current = 0.5 * (lo + hi);
    }
    Ok(current)
}
