//! Dense containers for symbolic and numeric tensor components.

use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use crate::expr::{DomainError, Expr};

/// Row-major matrix of expressions; entry `(r, c)` is the component with
/// upper index `r` and lower index `c` for endomorphisms.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Expr>,
}

impl ExprMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Expr) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ExprMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Expr>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(ExprMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Expr::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Expr::one())
    }

    pub fn scalar(n: usize, value: Expr) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { value.clone() } else { Expr::zero() })
    }

    /// Lifts a numeric matrix to constant expressions.
    pub fn from_numeric(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |r, c| Expr::constant(m[(r, c)]))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> impl Iterator<Item = &Expr> {
        self.data.iter()
    }

    pub fn row(&self, r: usize) -> &[Expr] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn map(&self, f: impl FnMut(&Expr) -> Expr) -> Self {
        ExprMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] + &other[(r, c)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] - &other[(r, c)])
    }

    pub fn scale(&self, factor: &Expr) -> Self {
        self.map(|e| factor * e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        Self::from_fn(self.rows, other.cols, |r, c| {
            sum((0..self.cols).map(|k| &self[(r, k)] * &other[(k, c)]))
        })
    }

    pub fn apply(&self, v: &[Expr]) -> Vec<Expr> {
        (0..self.rows)
            .map(|r| sum((0..self.cols).map(|c| &self[(r, c)] * &v[c])))
            .collect()
    }

    pub fn diff(&self, coord: usize) -> Self {
        self.map(|e| e.diff(coord))
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn determinant(&self) -> Expr {
        assert!(self.is_square(), "determinant of non-square matrix");
        let cols: Vec<usize> = (0..self.cols).collect();
        self.minor_det(0, &cols)
    }

    fn minor_det(&self, row: usize, cols: &[usize]) -> Expr {
        match cols.len() {
            0 => Expr::one(),
            1 => self[(row, cols[0])].clone(),
            _ => {
                let mut acc = Expr::zero();
                for (k, &c) in cols.iter().enumerate() {
                    let entry = &self[(row, c)];
                    if entry.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = entry * self.minor_det(row + 1, &rest);
                    acc = if k % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }

    /// Symbolic inverse `adj(M)/det(M)`; `None` when the determinant folds
    /// to the constant zero.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let det = self.determinant();
        if det.is_zero() {
            return None;
        }
        if n == 1 {
            return Some(Self::from_fn(1, 1, |_, _| Expr::one() / det.clone()));
        }
        Some(Self::from_fn(n, n, |r, c| {
            // adj(M)[r][c] = (-1)^(r+c) * minor(c, r)
            let minor = Self::from_fn(n - 1, n - 1, |i, j| {
                let si = if i < c { i } else { i + 1 };
                let sj = if j < r { j } else { j + 1 };
                self[(si, sj)].clone()
            });
            let cof = minor.determinant();
            let cof = if (r + c) % 2 == 0 { cof } else { -cof };
            cof / det.clone()
        }))
    }

    pub fn eval(&self, point: &[f64]) -> Result<DMatrix<f64>, DomainError> {
        let mut out = DMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)].eval(point)?;
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for ExprMatrix {
    type Output = Expr;
    fn index(&self, (r, c): (usize, usize)) -> &Expr {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ExprMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Expr {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

/// Sum of expressions through the simplifying constructors.
pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
    terms.into_iter().fold(Expr::zero(), |acc, t| acc + t)
}

/// `n x n x n` array, indexed `[a, b, c]`.
///
/// Rank-(1,2) tensors store the upper index first: `t[[k, i, j]] = T^k_{ij}`.
/// For the covariant derivative of an endomorphism this means
/// `t[[k, i, j]] = (∇_i J)^k_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3<T> {
    n: usize,
    data: Vec<T>,
}

impl<T> Tensor3<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    data.push(f(a, b, c));
                }
            }
        }
        Tensor3 { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Tensor3<U> {
        Tensor3 {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<Tensor3<U>, E> {
        Ok(Tensor3 {
            n: self.n,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }
}

impl Tensor3<Expr> {
    pub fn eval(&self, point: &[f64]) -> Result<Tensor3<f64>, DomainError> {
        self.try_map(|e| e.eval(point))
    }
}

impl Tensor3<f64> {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl<T> Index<[usize; 3]> for Tensor3<T> {
    type Output = T;
    fn index(&self, [a, b, c]: [usize; 3]) -> &T {
        let n = self.n;
        assert!(a < n && b < n && c < n, "index out of bounds");
        &self.data[(a * n + b) * n + c]
    }
}

/// `n^4` array, indexed `[a, b, c, d]`; curvature is stored as
/// `r[[l, i, j, k]] = R^l_{ijk}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor4<T> {
    n: usize,
    data: Vec<T>,
}

impl<T> Tensor4<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        data.push(f(a, b, c, d));
                    }
                }
            }
        }
        Tensor4 { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<Tensor4<U>, E> {
        Ok(Tensor4 {
            n: self.n,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }
}

impl Tensor4<Expr> {
    pub fn eval(&self, point: &[f64]) -> Result<Tensor4<f64>, DomainError> {
        self.try_map(|e| e.eval(point))
    }
}

impl Tensor4<f64> {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl<T> Index<[usize; 4]> for Tensor4<T> {
    type Output = T;
    fn index(&self, [a, b, c, d]: [usize; 4]) -> &T {
        let n = self.n;
        assert!(a < n && b < n && c < n && d < n, "index out of bounds");
        &self.data[((a * n + b) * n + c) * n + d]
    }
}

/// Largest absolute entry of a numeric matrix.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}
