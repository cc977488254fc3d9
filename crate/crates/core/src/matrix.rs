//! Dense exact-rational square matrices and their support patterns.

use std::collections::VecDeque;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Row-major square matrix with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(dim: usize) -> Self {
        RationalMatrix {
            dim,
            entries: vec![BigRational::zero(); dim * dim],
        }
    }

    /// Builds from rows; panics if the rows do not form a square.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        RationalMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row * self.dim + col]
    }

    pub fn get_mut(&mut self, row: usize, col: usize) -> &mut BigRational {
        &mut self.entries[row * self.dim + col]
    }

    pub fn column_sum(&self, col: usize) -> BigRational {
        (0..self.dim).map(|r| self.get(r, col)).sum()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigRational]> {
        self.entries.chunks(self.dim.max(1))
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = RationalMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.dim {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    /// Row-major `f64` copy.
    pub fn to_f64(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Boolean pattern of the positive entries.
    pub fn support(&self) -> SupportPattern {
        let mut pattern = SupportPattern::empty(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                if self.get(i, j) > &BigRational::zero() {
                    pattern.set(i, j);
                }
            }
        }
        pattern
    }

    /// Smallest `k` with every entry of the `k`-th power positive, if the matrix is primitive.
    pub fn primitivity_exponent(&self) -> Option<usize> {
        self.support().primitivity_exponent()
    }
}

/// Square boolean matrix stored as row bitsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPattern {
    dim: usize,
    blocks: usize,
    bits: Vec<u64>,
}

impl SupportPattern {
    pub fn empty(dim: usize) -> Self {
        let blocks = dim.div_ceil(64).max(1);
        SupportPattern {
            dim,
            blocks,
            bits: vec![0; dim * blocks],
        }
    }

    pub fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.blocks + col / 64] |= 1 << (col % 64);
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.blocks + col / 64] & (1 << (col % 64)) != 0
    }

    fn row(&self, row: usize) -> &[u64] {
        &self.bits[row * self.blocks..(row + 1) * self.blocks]
    }

    pub fn is_full(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.get(i, j)))
    }

    pub fn mul(&self, other: &SupportPattern) -> SupportPattern {
        let mut out = SupportPattern::empty(self.dim);
        for i in 0..self.dim {
            let start = i * self.blocks;
            for k in 0..self.dim {
                if self.get(i, k) {
                    for (o, b) in out.bits[start..start + self.blocks]
                        .iter_mut()
                        .zip(other.row(k))
                    {
                        *o |= b;
                    }
                }
            }
        }
        out
    }

    fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(move |&j| self.get(i, j))
    }

    /// Strong connectivity of the directed graph `i -> j` whenever entry `(i, j)` is set.
    pub fn is_irreducible(&self) -> bool {
        if self.dim == 0 {
            return false;
        }
        let forward = self.reachable_from(0, false);
        let backward = self.reachable_from(0, true);
        forward.iter().all(|&r| r) && backward.iter().all(|&r| r)
    }

    fn reachable_from(&self, start: usize, reverse: bool) -> Vec<bool> {
        let mut seen = vec![false; self.dim];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            for j in 0..self.dim {
                let edge = if reverse { self.get(j, i) } else { self.get(i, j) };
                if edge && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen
    }

    /// Period of an irreducible pattern: gcd over edges of `level(i) + 1 - level(j)`.
    fn period(&self) -> usize {
        let mut level = vec![usize::MAX; self.dim];
        level[0] = 0;
        let mut queue = VecDeque::from([0]);
        let mut g = 0usize;
        while let Some(i) = queue.pop_front() {
            for j in self.successors(i) {
                if level[j] == usize::MAX {
                    level[j] = level[i] + 1;
                    queue.push_back(j);
                } else {
                    g = gcd(g, (level[i] + 1).abs_diff(level[j]));
                }
            }
        }
        g
    }

    /// Smallest `k` with the `k`-th boolean power full, or `None` when the pattern is
    /// reducible or periodic. The witness never exceeds the Wielandt bound `(m-1)^2 + 1`.
    pub fn primitivity_exponent(&self) -> Option<usize> {
        if !self.is_irreducible() || self.period() != 1 {
            return None;
        }
        let bound = (self.dim - 1) * (self.dim - 1) + 1;
        let mut power = self.clone();
        for k in 1..=bound {
            if power.is_full() {
                return Some(k);
            }
            power = power.mul(self);
        }
        None
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
