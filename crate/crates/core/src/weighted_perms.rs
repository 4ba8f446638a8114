//! Weighted permutations, c-compatibility, their counts `W(ℓ, n, m, c)` and
//! the bijection with internally ordered set partitions (Lah partitions).

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::counting::{CapVector, NumberCache};
use crate::enumerate::{cycles_of, permutations, set_partitions, BoundedCompositions};
use crate::error::{Error, Result};
use crate::polyarith::binomial;

/// A permutation of `[n]` given by its cycles, with a nonnegative weight on
/// each cycle. Stored canonically: each cycle starts at its minimum and cycles
/// are sorted by minimum, weights following their cycles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWeighted", into = "RawWeighted")]
pub struct WeightedPermutation {
    cycles: Vec<Vec<usize>>,
    weights: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawWeighted {
    cycles: Vec<Vec<usize>>,
    weights: Vec<u64>,
}

impl TryFrom<RawWeighted> for WeightedPermutation {
    type Error = Error;
    fn try_from(raw: RawWeighted) -> Result<Self> {
        WeightedPermutation::new(raw.cycles, raw.weights)
    }
}

impl From<WeightedPermutation> for RawWeighted {
    fn from(p: WeightedPermutation) -> Self {
        RawWeighted { cycles: p.cycles, weights: p.weights }
    }
}

/// Checks that `blocks` partition `[n]` for `n` = total element count.
fn check_partition(blocks: &[Vec<usize>]) -> Result<usize> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut seen = vec![false; n + 1];
    for b in blocks {
        if b.is_empty() {
            return Err(Error::Malformed("empty block".into()));
        }
        for &x in b {
            if x == 0 || x > n || seen[x] {
                return Err(Error::Malformed(format!("blocks do not partition [{n}]")));
            }
            seen[x] = true;
        }
    }
    Ok(n)
}

impl WeightedPermutation {
    pub fn new(cycles: Vec<Vec<usize>>, weights: Vec<u64>) -> Result<Self> {
        if cycles.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: cycles.len(), actual: weights.len() });
        }
        check_partition(&cycles)?;
        let mut pairs: Vec<(Vec<usize>, u64)> = cycles
            .into_iter()
            .map(|mut c| {
                let pos = c.iter().enumerate().min_by_key(|(_, &x)| x).map(|(i, _)| i).unwrap_or(0);
                c.rotate_left(pos);
                c
            })
            .zip(weights)
            .collect();
        pairs.sort_by_key(|(c, _)| c[0]);
        let (cycles, weights) = pairs.into_iter().unzip();
        Ok(WeightedPermutation { cycles, weights })
    }

    pub fn n(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// One-line notation of the underlying permutation.
    pub fn one_line(&self) -> Vec<usize> {
        let mut p = vec![0; self.n()];
        for c in &self.cycles {
            for (i, &x) in c.iter().enumerate() {
                p[x - 1] = c[(i + 1) % c.len()];
            }
        }
        p
    }

    /// Every cycle's weight is strictly below the sum of its members' caps.
    pub fn is_compatible(&self, c: &CapVector) -> Result<bool> {
        if c.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), actual: c.len() });
        }
        Ok(self.cycles.iter().zip(&self.weights).all(|(cyc, &w)| w < c.sum_over(cyc)))
    }
}

/// Ordering key: cycle type (lengths, descending) then canonical cycles.
fn cycle_order_key(cycles: &[Vec<usize>]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut lengths: Vec<usize> = cycles.iter().map(Vec::len).collect();
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    (lengths, cycles.to_vec())
}

/// Canonical cycle decompositions of all permutations of `[n]` with `m` cycles.
pub fn permutations_with_cycles(n: usize, m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = permutations(n)
        .iter()
        .map(|p| cycles_of(p))
        .filter(|cycles| cycles.len() == m)
        .collect();
    out.sort_by_cached_key(|c| cycle_order_key(c));
    out
}

/// Streams `𝓦(ℓ, n, m, c)`: c-compatible weighted permutations of `[n]`
/// (`n = c.len()`) with `m` cycles and total weight `ℓ`, each exactly once.
pub fn enumerate_weighted(m: usize, l: u64, c: &CapVector) -> impl Iterator<Item = WeightedPermutation> + '_ {
    let n = c.len();
    let shapes = if m >= 1 && m <= n { permutations_with_cycles(n, m) } else { Vec::new() };
    shapes.into_iter().flat_map(move |cycles| {
        let bounds: Vec<u64> = cycles.iter().map(|cyc| c.sum_over(cyc) - 1).collect();
        BoundedCompositions::capped(bounds, l).map(move |weights| WeightedPermutation {
            cycles: cycles.clone(),
            weights,
        })
    })
}

/// `W(ℓ, n, m, c)` by exhausting [`enumerate_weighted`].
pub fn w_count_enum(l: u64, m: usize, c: &CapVector) -> u64 {
    enumerate_weighted(m, l, c).count() as u64
}

/// `W(ℓ, n, m+1, c)` by the closed alternating formula
///
/// `Σ_{j=0}^{n} (−1)^j P^{n−1−m}_{1−j, n−1−j} Σ_{i=0}^{ℓ} ρ_{c,j}(i) C(m+ℓ−i, m)`.
///
/// Note the index shift: the argument `m` yields the count for `m + 1` cycles.
/// The result is returned signed; callers decide how to treat a negative value.
pub fn w_count_formula(l: u64, m: usize, c: &CapVector, cache: &mut NumberCache) -> BigInt {
    let n = c.len();
    if m >= n {
        return BigInt::zero();
    }
    if let Some(v) = cache.w.get(&(c.clone(), l, m)) {
        return v.clone();
    }
    let s = (n - 1 - m) as u64;
    let mut acc = BigInt::zero();
    for j in 0..=n {
        let p = cache.interval_esp(1 - j as i64, n as i64 - 1 - j as i64, s);
        if p.is_zero() {
            continue;
        }
        let mut inner = BigInt::zero();
        for i in 0..=l {
            let r = cache.rho(c, j, i as i64);
            if !r.is_zero() {
                inner += r * binomial(m as u64 + l - i, m as u64);
            }
        }
        let term = p * inner;
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    cache.w.insert((c.clone(), l, m), acc.clone());
    acc
}

/// A set partition of `[n]` into internally ordered blocks, stored with
/// blocks sorted by their minimum element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LahPartition {
    blocks: Vec<Vec<usize>>,
}

impl LahPartition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        check_partition(&blocks)?;
        blocks.sort_by_key(|b| b.iter().copied().min());
        Ok(LahPartition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of elements of `block` smaller than its first element.
    pub fn block_weight(block: &[usize]) -> u64 {
        block.iter().filter(|&&x| x < block[0]).count() as u64
    }

    pub fn weight(&self) -> u64 {
        self.blocks.iter().map(|b| Self::block_weight(b)).sum()
    }
}

/// Sends each cycle of weight `w` to the block that starts at the cycle's
/// `(w+1)`-th smallest element and follows the cycle order from there.
pub fn to_lah(p: &WeightedPermutation) -> Result<LahPartition> {
    let mut blocks = Vec::with_capacity(p.cycles.len());
    for (cycle, &w) in p.cycles.iter().zip(&p.weights) {
        if w as usize >= cycle.len() {
            return Err(Error::OutOfRange(format!("cycle {cycle:?} has weight {w} ≥ its length")));
        }
        let mut sorted = cycle.clone();
        sorted.sort_unstable();
        let head = sorted[w as usize];
        let pos = cycle.iter().position(|&x| x == head).expect("head is in cycle");
        let mut block = cycle.clone();
        block.rotate_left(pos);
        blocks.push(block);
    }
    LahPartition::new(blocks)
}

/// Inverse of [`to_lah`]: each block becomes a cycle weighted by its block weight.
pub fn from_lah(pi: &LahPartition) -> WeightedPermutation {
    let weights = pi.blocks.iter().map(|b| LahPartition::block_weight(b)).collect();
    WeightedPermutation::new(pi.blocks.clone(), weights).expect("Lah partition blocks partition [n]")
}

/// All partitions of `[n]` into `m` internally ordered blocks.
pub fn enumerate_lah(n: usize, m: usize) -> Vec<LahPartition> {
    let mut out = Vec::new();
    for part in set_partitions(n).into_iter().filter(|p| p.len() == m) {
        let orders: Vec<Vec<Vec<usize>>> = part
            .iter()
            .map(|block| {
                permutations(block.len())
                    .into_iter()
                    .map(|perm| perm.iter().map(|&i| block[i - 1]).collect())
                    .collect()
            })
            .collect();
        let mut idx = vec![0usize; m];
        loop {
            let blocks = idx.iter().enumerate().map(|(b, &i)| orders[b][i].clone()).collect();
            out.push(LahPartition { blocks });
            let Some(pos) = (0..m).rev().find(|&b| idx[b] + 1 < orders[b].len()) else {
                break;
            };
            idx[pos] += 1;
            for x in idx.iter_mut().skip(pos + 1) {
                *x = 0;
            }
        }
    }
    out
}
