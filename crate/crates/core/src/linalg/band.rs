//! Banded storage and LU factorization for the discretized elliptic
//! operators.
//!
//! The matrices handed to this solver are gram-scaled forms whose Hermitian
//! part is positive definite, so elimination without pivoting is well defined;
//! one step of iterative refinement cleans up the remaining roundoff.

use super::{CMat, C64};
use crate::error::{Error, Result};

/// Coordinate-format accumulator; repeated entries are summed.
#[derive(Debug, Clone, Default)]
pub struct Triplets {
    n: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl Triplets {
    pub fn new(n: usize) -> Self {
        Self { n, entries: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn push(&mut self, row: usize, col: usize, value: C64) {
        debug_assert!(row < self.n && col < self.n);
        if value != C64::new(0.0, 0.0) {
            self.entries.push((row, col, value));
        }
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.n, self.n);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    pub fn to_band(&self) -> BandMatrix {
        let bw = self.entries.iter().map(|&(r, c, _)| r.abs_diff(c)).max().unwrap_or(0);
        let mut band = BandMatrix::zeros(self.n, bw);
        for &(r, c, v) in &self.entries {
            *band.get_mut(r, c) += v;
        }
        band
    }
}

/// Square matrix with equal lower and upper bandwidth, stored row by row.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    bw: usize,
    data: Vec<C64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self { n, bw, data: vec![C64::new(0.0, 0.0); n * (2 * bw + 1)] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn index(&self, row: usize, col: usize) -> usize {
        row * (2 * self.bw + 1) + (col + self.bw - row)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        if row.abs_diff(col) > self.bw {
            C64::new(0.0, 0.0)
        } else {
            self.data[self.index(row, col)]
        }
    }

    #[inline]
    fn get_mut(&mut self, row: usize, col: usize) -> &mut C64 {
        let i = self.index(row, col);
        &mut self.data[i]
    }

    fn cols(&self, row: usize) -> std::ops::Range<usize> {
        row.saturating_sub(self.bw)..(row + self.bw + 1).min(self.n)
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|r| self.cols(r).map(|c| self.get(r, c) * x[c]).sum())
            .collect()
    }

    pub fn factor(&self) -> Result<BandLu> {
        let mut lu = self.clone();
        let scale = self.data.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
        for k in 0..self.n {
            let pivot = lu.get(k, k);
            if !(pivot.norm() > 1e-14 * scale) || !pivot.re.is_finite() {
                return Err(Error::SolveFailed(format!("pivot {k} is numerically zero")));
            }
            let end = (k + self.bw + 1).min(self.n);
            for i in k + 1..end {
                let factor = lu.get(i, k) / pivot;
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                *lu.get_mut(i, k) = factor;
                for j in k + 1..end {
                    let update = factor * lu.get(k, j);
                    *lu.get_mut(i, j) -= update;
                }
            }
        }
        Ok(BandLu { lu, original: self.clone() })
    }
}

/// LU factors of a [`BandMatrix`]; shareable across threads for
/// column-by-column solves.
#[derive(Debug, Clone)]
pub struct BandLu {
    lu: BandMatrix,
    original: BandMatrix,
}

impl BandLu {
    fn substitute(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.n;
        let bw = self.lu.bw;
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for k in i.saturating_sub(bw)..i {
                s -= self.lu.get(i, k) * x[k];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..(i + bw + 1).min(n) {
                s -= self.lu.get(i, k) * x[k];
            }
            x[i] = s / self.lu.get(i, i);
        }
        x
    }

    /// Solves `A x = b` with one step of iterative refinement.
    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        if b.len() != self.lu.n {
            return Err(Error::DimensionMismatch { expected: self.lu.n, found: b.len() });
        }
        let mut x = self.substitute(b);
        let ax = self.original.matvec(&x);
        let r: Vec<C64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let dx = self.substitute(&r);
        for (xi, d) in x.iter_mut().zip(dx) {
            *xi += d;
        }
        if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::SolveFailed("non-finite solution".into()));
        }
        Ok(x)
    }
}
