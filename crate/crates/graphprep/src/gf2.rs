//! Dense GF(2) linear algebra: rank, solve, nullspace.
//!
//! Elimination is plain Gaussian with word-parallel row XOR and a fixed
//! pivot order (lowest row, lowest column) so solutions are reproducible.

use crate::bits::BitVec;
use thiserror::Error;

pub type Gf2Vector = BitVec;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            rows,
            cols,
            data: (0..rows).map(|_| BitVec::zeros(cols)).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        Gf2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Builds a matrix from 0/1 literals, row major.
    pub fn from_bits(bits: &[&[u8]]) -> Self {
        let rows = bits.len();
        let cols = bits.first().map_or(0, |r| r.len());
        let mut m = Gf2Matrix::zeros(rows, cols);
        for (i, row) in bits.iter().enumerate() {
            debug_assert_eq!(row.len(), cols);
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b != 0);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.data[r].set(c, v);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.data[r].iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.data.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_with(&pivot_row);
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    pub fn mat_vec(&self, x: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        if x.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.data[r].dot(x) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Solves `self * x = b`. Returns the solution with all free variables
    /// zero after forward elimination, or `None` when inconsistent.
    pub fn solve(&self, b: &Gf2Vector) -> Result<Option<Gf2Vector>, Gf2Error> {
        if b.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch(format!(
                "rhs of length {} against {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut rows = self.data.clone();
        let mut rhs = b.clone();
        let mut pivot_col_of_row = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, pivot);
            if pivot != rank {
                let (a, b) = (rhs.get(rank), rhs.get(pivot));
                rhs.set(rank, b);
                rhs.set(pivot, a);
            }
            let pivot_row = rows[rank].clone();
            let pivot_rhs = rhs.get(rank);
            for r in 0..rows.len() {
                if r != rank && rows[r].get(col) {
                    let new_rhs = rhs.get(r) ^ pivot_rhs;
                    rows[r].xor_with(&pivot_row);
                    rhs.set(r, new_rhs);
                }
            }
            pivot_col_of_row.push(col);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        // rows below the rank are zero after a full column sweep, so any
        // remaining rhs bit means the system is inconsistent
        for r in rank..rows.len() {
            debug_assert!(rows[r].is_zero());
            if rhs.get(r) {
                return Ok(None);
            }
        }
        let mut x = BitVec::zeros(self.cols);
        for (r, &col) in pivot_col_of_row.iter().enumerate() {
            if rhs.get(r) {
                x.set(col, true);
            }
        }
        debug_assert_eq!(self.mat_vec(&x).unwrap(), *b);
        Ok(Some(x))
    }

    /// Basis of the kernel {x : self * x = 0}; size = cols - rank.
    pub fn nullspace(&self) -> Vec<Gf2Vector> {
        let mut rows = self.data.clone();
        let mut pivot_col_of_row = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_with(&pivot_row);
                }
            }
            pivot_col_of_row.push(col);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &pivot_col_of_row {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free_col in 0..self.cols {
            if is_pivot[free_col] {
                continue;
            }
            let mut x = BitVec::zeros(self.cols);
            x.set(free_col, true);
            for (r, &pc) in pivot_col_of_row.iter().enumerate() {
                if rows[r].get(free_col) {
                    x.set(pc, true);
                }
            }
            debug_assert!(self.mat_vec(&x).unwrap().is_zero());
            basis.push(x);
        }
        basis
    }
}
