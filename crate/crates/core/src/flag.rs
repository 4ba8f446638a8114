//! c-colored permutations, flag descents and flag Eulerian numbers
//! `A^{(c)}_{n,k}`, computed by enumeration, by the Eulerian convolution, by
//! slice volumes, and refined by h* winding numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::counting::{bounded_compositions, CapVector, NumberCache};
use crate::ehrhart::{volume, SliceSpec};
use crate::enumerate::permutations;
use crate::error::{Error, Result};
use crate::hstar::hstar_combinatorial;
use crate::polyarith::{factorial, IntPoly};

/// A permutation in one-line notation with a color `0 ≤ s_i < c_i` per position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredPermutation {
    perm: Vec<usize>,
    colors: Vec<u64>,
}

impl ColoredPermutation {
    pub fn new(perm: Vec<usize>, colors: Vec<u64>) -> Result<Self> {
        if perm.len() != colors.len() {
            return Err(Error::DimensionMismatch { expected: perm.len(), actual: colors.len() });
        }
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        if sorted.iter().enumerate().any(|(i, &x)| x != i + 1) {
            return Err(Error::Malformed(format!("{perm:?} is not a permutation")));
        }
        Ok(ColoredPermutation { perm, colors })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn colors(&self) -> &[u64] {
        &self.colors
    }
}

/// `fdes(σ, s) = s_n + Σ_{i ∈ Des} c_{i+1}`, where `i` is a descent when
/// `s_i > s_{i+1}`, or `s_i = s_{i+1}` and `σ_i > σ_{i+1}`.
pub fn flag_descent(p: &ColoredPermutation, c: &CapVector) -> Result<u64> {
    let n = p.perm.len();
    if c.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: c.len() });
    }
    let caps = c.entries();
    if let Some(i) = (0..n).find(|&i| p.colors[i] >= caps[i]) {
        return Err(Error::OutOfRange(format!("color {} at position {} exceeds cap {}", p.colors[i], i + 1, caps[i])));
    }
    let (s, sigma) = (&p.colors, &p.perm);
    let descents: u64 = (0..n.saturating_sub(1))
        .filter(|&i| s[i] > s[i + 1] || (s[i] == s[i + 1] && sigma[i] > sigma[i + 1]))
        .map(|i| caps[i + 1])
        .sum();
    Ok(s.last().copied().unwrap_or(0) + descents)
}

/// Distribution of `fdes` over all `n!·∏c_i` colored permutations, indexed by `k`.
pub fn flag_eulerian_distribution(c: &CapVector) -> Vec<u64> {
    let caps = c.entries();
    let n = caps.len();
    let mut dist = vec![0u64; c.total() as usize];
    let perms = permutations(n);
    let mut colors = vec![0u64; n];
    loop {
        for sigma in &perms {
            let p = ColoredPermutation { perm: sigma.clone(), colors: colors.clone() };
            let k = flag_descent(&p, c).expect("colors are within caps") as usize;
            if k >= dist.len() {
                dist.resize(k + 1, 0);
            }
            dist[k] += 1;
        }
        let Some(pos) = (0..n).rev().find(|&i| colors[i] + 1 < caps[i]) else {
            break;
        };
        colors[pos] += 1;
        for x in colors.iter_mut().skip(pos + 1) {
            *x = 0;
        }
    }
    dist
}

/// `A^{(c)}_{n,k}` by exhaustive enumeration.
pub fn flag_eulerian_enum(k: u64, c: &CapVector) -> u64 {
    flag_eulerian_distribution(c).get(k as usize).copied().unwrap_or(0)
}

/// `A^{(c)}_{n,k} = Σ_{ℓ≤k} B(ℓ, c) A(n, k−ℓ)`.
pub fn flag_eulerian_convolution(k: u64, c: &CapVector) -> BigInt {
    let mut cache = NumberCache::new();
    (0..=k)
        .map(|l| bounded_compositions(l, c) * cache.eulerian(c.len(), (k - l) as i64))
        .sum()
}

/// The slice `R_{k+1, (c, 1)}` whose normalized volume is `A^{(c)}_{n,k}`.
fn flag_slice(k: u64, c: &CapVector) -> Result<SliceSpec> {
    if k >= c.total() {
        return Err(Error::OutOfRange(format!("need k < {}, got k = {k}", c.total())));
    }
    SliceSpec::new(k + 1, c.appended(1)?)
}

/// `n!·vol(R_{k+1,(c,1)})`, which must be an integer.
pub fn flag_eulerian_via_volume(k: u64, c: &CapVector) -> Result<BigInt> {
    let s = flag_slice(k, c)?;
    let scaled = volume(&s)? * BigRational::from_integer(factorial(c.len() as u64));
    if !scaled.is_integer() {
        return Err(Error::ModelViolation(format!("n!·vol(R_{{{},{}}}) = {scaled} is not an integer", s.k, s.c)));
    }
    Ok(scaled.to_integer())
}

/// Winding-number histogram of the `(c,1)`-compatible decorated partitions of
/// type `(k+1, n+1)`; its entries sum to `A^{(c)}_{n,k}`.
pub fn flag_eulerian_hstar_refinement(k: u64, c: &CapVector) -> Result<IntPoly> {
    hstar_combinatorial(&flag_slice(k, c)?)
}

pub fn total_of(p: &IntPoly) -> BigInt {
    p.coeffs().iter().fold(BigInt::zero(), |acc, x| acc + x)
}
