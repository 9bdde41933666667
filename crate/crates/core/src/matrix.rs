//! Small dense row-major matrices over floats, exact rationals and surds.

use std::ops::{Index, IndexMut};

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::number::{format_rational, to_f64, Rational, Surd};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type FloatMatrix = Matrix<f64>;
pub type RationalMatrix = Matrix<Rational>;
pub type SurdMatrix = Matrix<Surd>;

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds from row vectors; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Matrix {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// `P M P^T` where row `i` of the result is row `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert!(self.is_square() && order.len() == self.rows);
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(order[i], order[j])].clone()
        })
    }

    /// Principal submatrix with index `k` deleted.
    pub fn delete_index(&self, k: usize) -> Self {
        assert!(self.is_square() && k < self.rows);
        let keep: Vec<usize> = (0..self.rows).filter(|&i| i != k).collect();
        self.principal_submatrix(&keep)
    }

    pub fn principal_submatrix(&self, keep: &[usize]) -> Self {
        Matrix::from_fn(keep.len(), keep.len(), |i, j| {
            self[(keep[i], keep[j])].clone()
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, T::zero())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl RationalMatrix {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            }
        })
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, k| {
                acc + &self[(i, k)] * &other[(k, j)]
            })
        })
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn to_float(&self) -> FloatMatrix {
        self.map(to_f64)
    }

    pub fn to_surd(&self) -> SurdMatrix {
        self.map(|q| Surd::rational(q.clone()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

impl SurdMatrix {
    pub fn to_float(&self) -> FloatMatrix {
        self.map(Surd::to_f64)
    }

    /// Exact rational copy when no entry carries a square root.
    pub fn to_rational(&self) -> Option<RationalMatrix> {
        self.data
            .iter()
            .all(Surd::is_rational)
            .then(|| self.map(|s| s.coef().clone()))
    }
}

impl FloatMatrix {
    pub fn max_abs_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// JSON form: row-major arrays of strings (`p/q`, `sqrt(s)*p/q`).
impl Serialize for SurdMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(Surd::to_string).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect();
        rows.serialize(serializer)
    }
}
