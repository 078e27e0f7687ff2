//! Exact Gauss-Jordan elimination over Q and Q(i).

use num_traits::{One, Zero};

use crate::coeff::{GaussCoeff, Rational};

pub trait Field: Clone + PartialEq + Zero + One {
    fn inv(&self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
}

impl Field for Rational {
    fn inv(&self) -> Self {
        self.recip()
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
}

impl Field for GaussCoeff {
    fn inv(&self) -> Self {
        GaussCoeff::inv(self).expect("pivot is nonzero")
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<F>>,
}

/// Reduced row echelon form with its pivot columns.
pub struct Rref<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![vec![F::zero(); cols]; rows] }
    }

    pub fn from_rows(data: Vec<Vec<F>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from its columns.
    pub fn from_cols(cols: Vec<Vec<F>>, rows: usize) -> Self {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, c) in cols.into_iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, v) in c.into_iter().enumerate() {
                m.data[i][j] = v;
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        self.data
            .iter()
            .map(|row| {
                let mut acc = F::zero();
                for (a, b) in row.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.fmul(b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn rref(mut self) -> Rref<F> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = self.data[r][c].inv();
            for v in self.data[r].iter_mut().skip(c) {
                if !v.is_zero() {
                    *v = v.fmul(&inv);
                }
            }
            let pivot_row = self.data[r].clone();
            for i in 0..self.rows {
                if i == r || self.data[i][c].is_zero() {
                    continue;
                }
                let f = self.data[i][c].clone();
                for (j, pv) in pivot_row.iter().enumerate().skip(c) {
                    if !pv.is_zero() {
                        self.data[i][j] = self.data[i][j].fsub(&f.fmul(pv));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: self, pivots }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().pivots.len()
    }

    /// Unique solution of a square system with several right-hand sides; `None` if singular.
    pub fn solve_many(&self, rhs: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
        assert_eq!(self.rows, self.cols, "square system expected");
        let n = self.rows;
        let k = rhs.len();
        let mut aug = Matrix::zeros(n, n + k);
        for i in 0..n {
            for j in 0..n {
                aug.data[i][j] = self.data[i][j].clone();
            }
            for (t, b) in rhs.iter().enumerate() {
                aug.data[i][n + t] = b[i].clone();
            }
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        Some((0..k).map(|t| (0..n).map(|i| matrix.data[i][n + t].clone()).collect()).collect())
    }

    pub fn solve(&self, rhs: &[F]) -> Option<Vec<F>> {
        self.solve_many(&[rhs.to_vec()]).map(|mut v| v.remove(0))
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        let n = self.rows;
        let ident: Vec<Vec<F>> = (0..n)
            .map(|t| (0..n).map(|i| if i == t { F::one() } else { F::zero() }).collect())
            .collect();
        self.solve_many(&ident).map(|cols| Matrix::from_cols(cols, n))
    }

    /// Basis of the right null space, one vector per free column (free variable set to 1).
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let cols = self.cols;
        let Rref { matrix, pivots } = self.clone().rref();
        let mut out = Vec::new();
        for free in (0..cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![F::zero(); cols];
            v[free] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                let e = &matrix.data[r][free];
                if !e.is_zero() {
                    v[pc] = F::zero().fsub(e);
                }
            }
            out.push(v);
        }
        out
    }
}
