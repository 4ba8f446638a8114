//! h*-polynomials of prism slices, by the Ehrhart series and by counting
//! c-compatible decorated ordered set partitions by winding number.

pub mod conjectures;
pub mod roots;
pub mod sturm;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::counting::CapVector;
use crate::ehrhart::{ehrhart_formula, SliceSpec};
use crate::enumerate::{permutations, set_partitions, BoundedCompositions};
use crate::error::{Error, Result};
use crate::polyarith::{hstar_from_ehrhart, IntPoly};

pub use conjectures::{
    interlace_check, real_rooted_check, self_inversive_check, unit_circle_check, w_generating_poly, InterlaceVerdict,
    UnitCircleReport, UnitCircleStatus,
};

/// A cyclically ordered set partition of `[n]` with a positive weight on each
/// block. The block containing 1 is stored first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DecoratedPartition {
    blocks: Vec<Vec<usize>>,
    weights: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindingProfile {
    pub lambdas: Vec<u64>,
    pub d: u64,
}

impl DecoratedPartition {
    pub fn new(blocks: Vec<Vec<usize>>, weights: Vec<u64>) -> Result<Self> {
        if blocks.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: blocks.len(), actual: weights.len() });
        }
        if weights.contains(&0) {
            return Err(Error::Malformed("decorated partition block weights must be at least 1".into()));
        }
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; n + 1];
        for &x in blocks.iter().flatten() {
            if x == 0 || x > n || seen[x] {
                return Err(Error::Malformed(format!("blocks do not partition [{n}]")));
            }
            seen[x] = true;
        }
        if blocks.iter().any(Vec::is_empty) {
            return Err(Error::Malformed("empty block".into()));
        }
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        let mut weights = weights;
        let first = blocks.iter().position(|b| b.contains(&1)).unwrap_or(0);
        blocks.rotate_left(first);
        weights.rotate_left(first);
        Ok(DecoratedPartition { blocks, weights })
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Total weight, the `k` of type `(k, n)`.
    pub fn k(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn is_compatible(&self, c: &CapVector) -> Result<bool> {
        if c.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), actual: c.len() });
        }
        Ok(self.blocks.iter().zip(&self.weights).all(|(b, &w)| w < c.sum_over(b)))
    }

    /// `λ_i` is the clockwise weight distance from the block of `i` to the
    /// block of `i+1` (cyclically in `[n]`); the winding number is `Σλ_i / k`.
    pub fn winding_number(&self) -> Result<WindingProfile> {
        let n = self.n();
        let m = self.blocks.len();
        let mut block_of = vec![0usize; n + 1];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                block_of[x] = b;
            }
        }
        let lambdas: Vec<u64> = (1..=n)
            .map(|i| {
                let from = block_of[i];
                let to = block_of[i % n + 1];
                let mut dist = 0;
                let mut b = from;
                while b != to {
                    dist += self.weights[b];
                    b = (b + 1) % m;
                }
                dist
            })
            .collect();
        let total: u64 = lambdas.iter().sum();
        let k = self.k();
        if !total.is_multiple_of(k) {
            return Err(Error::ModelViolation(format!(
                "winding sum {total} is not a multiple of k = {k} for {self:?}"
            )));
        }
        Ok(WindingProfile { lambdas, d: total / k })
    }
}

/// All c-compatible decorated ordered set partitions of type `(k, n)`, `n = c.len()`.
pub fn compatible_partitions(k: u64, c: &CapVector) -> Vec<DecoratedPartition> {
    let mut out = Vec::new();
    for part in set_partitions(c.len()) {
        let m = part.len();
        if m as u64 > k {
            continue;
        }
        let caps: Vec<u64> = part.iter().map(|b| c.sum_over(b) - 1).collect();
        if caps.contains(&0) {
            continue;
        }
        // part[0] holds 1; order the remaining blocks every way.
        for order in permutations(m - 1) {
            let idx: Vec<usize> = std::iter::once(0).chain(order.iter().copied()).collect();
            let blocks: Vec<Vec<usize>> = idx.iter().map(|&i| part[i].clone()).collect();
            let hi: Vec<u64> = idx.iter().map(|&i| caps[i]).collect();
            for weights in BoundedCompositions::new(vec![1; m], hi.clone(), k) {
                out.push(DecoratedPartition { blocks: blocks.clone(), weights });
            }
        }
    }
    out
}

/// `[x^i] h*` = number of c-compatible decorated partitions with winding number `i`.
pub fn hstar_combinatorial(s: &SliceSpec) -> Result<IntPoly> {
    if !s.is_full_dimensional() {
        return Err(Error::OutOfRange(format!("need 0 < k < {}, got k = {}", s.c.total(), s.k)));
    }
    let mut hist = vec![BigInt::from(0); s.n() + 1];
    for xi in compatible_partitions(s.k, &s.c) {
        let d = xi.winding_number()?.d as usize;
        if d >= hist.len() {
            return Err(Error::ModelViolation(format!("winding number {d} exceeds n for {xi:?}")));
        }
        hist[d] += BigInt::one();
    }
    Ok(IntPoly::new(hist))
}

/// h* from the Ehrhart series of the `(n−1)`-dimensional slice.
pub fn hstar_series(s: &SliceSpec) -> Result<IntPoly> {
    if !s.is_full_dimensional() {
        return Err(Error::OutOfRange(format!("need 0 < k < {}, got k = {}", s.c.total(), s.k)));
    }
    hstar_from_ehrhart(&ehrhart_formula(s), s.n() - 1)
}
