//! Perfect hash of P^N(F_p).
//!
//! Points are normalized with their last nonzero coordinate equal to 1. Group
//! `k` holds the points whose trailing 1 sits at position `k`; groups are laid
//! out for `k = N, N-1, ..., 0`, and inside a group the free coordinates
//! `x_0 .. x_{k-1}` are read as a base-p number with `x_0` most significant.
//! For N = 1, p = 3 the order is (0:1), (1:1), (2:1), (1:0).

use crate::error::{Error, Result};
use crate::poly::point::ProjPointModP;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointIndexer {
    n: usize,
    p: u64,
    total: u64,
    /// `pow[j] = p^j`
    pow: Vec<u64>,
    /// `offset[k]` = number of points in groups `N..k+1`
    offset: Vec<u64>,
}

impl PointIndexer {
    pub fn new(n: usize, p: u64) -> Result<Self> {
        let mut pow = vec![1u64];
        for _ in 0..=n {
            let last = *pow.last().unwrap();
            let next = last.checked_mul(p).ok_or_else(|| Error::Resource(format!("P^{} over F_{} is too large to index", n, p)))?;
            pow.push(next);
        }
        let mut offset = vec![0u64; n + 1];
        for k in 0..=n {
            offset[k] = (k + 1..=n).map(|j| pow[j]).sum();
        }
        let total = (0..=n).map(|j| pow[j]).sum();
        Ok(PointIndexer { n, p, total, pow, offset })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// `(p^(N+1) - 1) / (p - 1)`
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Index of normalized coordinates.
    pub fn index_of(&self, coords: &[u64]) -> u64 {
        let k = coords.iter().rposition(|&c| c != 0).expect("nonzero point");
        debug_assert_eq!(coords[k], 1);
        let mut within = 0u64;
        for &c in &coords[..k] {
            within = within * self.p + c;
        }
        self.offset[k] + within
    }

    /// Normalized coordinates of the point with index `i`.
    pub fn coords_of(&self, i: u64) -> Vec<u64> {
        assert!(i < self.total, "index out of range");
        let k = (0..=self.n).rev().find(|&k| i >= self.offset[k] && i < self.offset[k] + self.pow[k]).unwrap();
        let mut within = i - self.offset[k];
        let mut coords = vec![0u64; self.n + 1];
        coords[k] = 1;
        for j in (0..k).rev() {
            coords[j] = within % self.p;
            within /= self.p;
        }
        coords
    }

    pub fn point_of(&self, i: u64) -> ProjPointModP {
        ProjPointModP::from_normalized(self.coords_of(i), self.p)
    }

    pub fn index_of_point(&self, pt: &ProjPointModP) -> u64 {
        self.index_of(pt.coords())
    }
}
