//! Small dense linear algebra over [`Ring`] and [`Field`] scalars.
//!
//! Fibers of decomposed bundles are coordinate spaces of dimension at most a
//! handful, so a row-major `Vec` is all that is needed.

use crate::scalar::{Field, Ring};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// `self * v`. Panics on length mismatch.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "matrix-vector length");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `selfᵀ * v`. Panics on length mismatch.
    pub fn tr_mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows, "transpose-vector length");
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(T::zero(), |acc, i| {
                    acc + self.get(i, j).clone() * v[i].clone()
                })
            })
            .collect()
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    /// Panics on shape mismatch.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: add(&self.data, &other.data),
        }
    }

    pub fn map<U, G: FnMut(&T) -> U>(&self, f: G) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn into_row_major(self) -> Vec<T> {
        self.data
    }
}

pub fn dot<T: Ring>(u: &[T], v: &[T]) -> T {
    assert_eq!(u.len(), v.len(), "dot length");
    u.iter()
        .zip(v)
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

pub fn add<T: Ring>(u: &[T], v: &[T]) -> Vec<T> {
    assert_eq!(u.len(), v.len(), "add length");
    u.iter().zip(v).map(|(a, b)| a.clone() + b.clone()).collect()
}

pub fn sub<T: Ring>(u: &[T], v: &[T]) -> Vec<T> {
    assert_eq!(u.len(), v.len(), "sub length");
    u.iter().zip(v).map(|(a, b)| a.clone() - b.clone()).collect()
}

pub fn scale<T: Ring>(s: &T, v: &[T]) -> Vec<T> {
    v.iter().map(|x| s.clone() * x.clone()).collect()
}

pub fn neg<T: Ring>(v: &[T]) -> Vec<T> {
    v.iter().map(|x| -x.clone()).collect()
}

pub fn zeros<T: Ring>(n: usize) -> Vec<T> {
    vec![T::zero(); n]
}

/// `i`-th standard basis vector of length `n`.
pub fn basis<T: Ring>(n: usize, i: usize) -> Vec<T> {
    let mut e = zeros(n);
    e[i] = T::one();
    e
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot is exactly zero.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "solve needs a square matrix");
    assert_eq!(n, b.len(), "solve right-hand side length");

    let mut m: Vec<Vec<F>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[pivot][col].is_zero() {
            return None;
        }
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].clone() / p.clone();
            for j in col..=n {
                let delta = factor.clone() * m[col][j].clone();
                m[i][j] = m[i][j].clone() - delta;
            }
        }
    }

    let mut x = vec![F::zero(); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in i + 1..n {
            acc = acc - m[i][j].clone() * x[j].clone();
        }
        x[i] = acc / m[i][i].clone();
    }
    Some(x)
}

/// Row rank, treating pivots with `|p| <= tol` as zero (`tol = 0` is exact).
pub fn rank<F: Field>(a: &Matrix<F>, tol: f64) -> usize {
    let mut m: Vec<Vec<F>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let Some(pivot) = pivot else { break };
        if m[pivot][col].is_zero() || m[pivot][col].abs().approx() <= tol {
            continue;
        }
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for i in rank + 1..rows {
            let factor = m[i][col].clone() / p.clone();
            for j in col..cols {
                let delta = factor.clone() * m[rank][j].clone();
                m[i][j] = m[i][j].clone() - delta;
            }
        }
        rank += 1;
    }
    rank
}
