//! Dense exact rational matrices, just large enough for graded homology
//! data and word products.

use crate::scalar::{int, Scalar};
use num_traits::Zero;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![int(0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, int(1));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// `self · rhs` with shapes `(m×k)·(k×n)`.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = Matrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = int(0);
                for t in 0..self.cols {
                    let a = self.get(i, t);
                    if a.is_zero() {
                        continue;
                    }
                    acc += a * rhs.get(t, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Matrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut out = Matrix::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Scale so that the first nonzero entry is 1. Matrices equal up to a
    /// nonzero rational factor get identical canonical forms; zero matrices
    /// are returned unchanged.
    pub fn scalar_canonical(&self) -> Matrix {
        match self.data.iter().find(|v| !v.is_zero()) {
            None => self.clone(),
            Some(pivot) => {
                let pivot = pivot.clone();
                let mut out = self.clone();
                for v in out.data.iter_mut() {
                    *v = (v.clone()) / &pivot;
                }
                out
            }
        }
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }
}

impl std::fmt::Display for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", crate::scalar::format_scalar(self.get(i, j)))?;
            }
        }
        write!(f, "]")
    }
}
