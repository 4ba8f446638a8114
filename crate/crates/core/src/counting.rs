//! Number families used by the Ehrhart and h* formulas.
//!
//! Every function returns zero outside its natural support instead of
//! erroring, so the alternating sums that consume them can range over
//! index sets wider than the support.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyarith::{binomial, bounded_power_coeff, factorial};

/// Per-coordinate box sizes `c = (c_1, …, c_n)`, each at least 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct CapVector(Vec<u64>);

impl CapVector {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyCaps);
        }
        if entries.contains(&0) {
            return Err(Error::InvalidCaps(entries));
        }
        Ok(CapVector(entries))
    }

    pub fn ones(n: usize) -> Self {
        Self::uniform(n, 1)
    }

    pub fn uniform(n: usize, r: u64) -> Self {
        assert!(n > 0 && r > 0);
        CapVector(vec![r; n])
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Sum of the caps of the (1-based) elements in `members`.
    pub fn sum_over(&self, members: &[usize]) -> u64 {
        members.iter().map(|&i| self.0[i - 1]).sum()
    }

    pub fn appended(&self, c: u64) -> Result<Self> {
        let mut v = self.0.clone();
        v.push(c);
        Self::new(v)
    }

    /// Entrywise `self ≤ other`.
    pub fn dominated_by(&self, other: &CapVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All cap vectors of length `n` with entries in `1..=max_c`, in lexicographic order.
    pub fn grid(n: usize, max_c: u64) -> Vec<CapVector> {
        let mut out = Vec::new();
        if n == 0 || max_c == 0 {
            return out;
        }
        let mut cur = vec![1u64; n];
        loop {
            out.push(CapVector(cur.clone()));
            let Some(pos) = cur.iter().rposition(|&x| x < max_c) else {
                break;
            };
            cur[pos] += 1;
            for x in cur.iter_mut().skip(pos + 1) {
                *x = 1;
            }
        }
        out
    }
}

impl TryFrom<Vec<u64>> for CapVector {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        CapVector::new(v)
    }
}

impl From<CapVector> for Vec<u64> {
    fn from(c: CapVector) -> Self {
        c.0
    }
}

impl FromStr for CapVector {
    type Err = Error;

    /// Comma-separated positive integers, e.g. `6,3,4`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|p| p.trim().parse::<u64>().map_err(|_| Error::Malformed(format!("cap vector {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        CapVector::new(entries)
    }
}

impl fmt::Display for CapVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Memo tables shared by one computation tree. Not `Sync`; give each thread its own.
#[derive(Debug, Default)]
pub struct NumberCache {
    eulerian_rows: Vec<Vec<BigInt>>,
    stirling_rows: Vec<Vec<BigInt>>,
    esp: HashMap<(i64, i64, u64), BigInt>,
    rho: HashMap<CapVector, Vec<Vec<BigInt>>>,
    pub(crate) w: HashMap<(CapVector, u64, usize), BigInt>,
}

impl NumberCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Eulerian number `A(n, k)`: permutations of `[n]` with exactly `k` descents.
    pub fn eulerian(&mut self, n: usize, k: i64) -> BigInt {
        if self.eulerian_rows.is_empty() {
            self.eulerian_rows.push(vec![BigInt::one()]);
        }
        while self.eulerian_rows.len() <= n {
            let m = self.eulerian_rows.len();
            let prev = &self.eulerian_rows[m - 1];
            // A(m, j) = (j+1) A(m−1, j) + (m−j) A(m−1, j−1)
            let row = (0..m)
                .map(|j| {
                    let stay = prev.get(j).map(|a| a * BigInt::from(j + 1)).unwrap_or_default();
                    let up = if j == 0 { BigInt::zero() } else { prev.get(j - 1).map(|a| a * BigInt::from(m - j)).unwrap_or_default() };
                    stay + up
                })
                .collect();
            self.eulerian_rows.push(row);
        }
        usize::try_from(k)
            .ok()
            .and_then(|k| self.eulerian_rows[n].get(k).cloned())
            .unwrap_or_default()
    }

    /// Unsigned Stirling number of the first kind: permutations of `[n]` with `m` cycles.
    pub fn stirling1(&mut self, n: usize, m: i64) -> BigInt {
        if self.stirling_rows.is_empty() {
            self.stirling_rows.push(vec![BigInt::one()]);
        }
        while self.stirling_rows.len() <= n {
            let r = self.stirling_rows.len();
            let prev = &self.stirling_rows[r - 1];
            // c(r, j) = c(r−1, j−1) + (r−1) c(r−1, j)
            let row = (0..=r)
                .map(|j| {
                    let new_cycle = if j == 0 { BigInt::zero() } else { prev.get(j - 1).cloned().unwrap_or_default() };
                    let insert = prev.get(j).map(|a| a * BigInt::from(r - 1)).unwrap_or_default();
                    new_cycle + insert
                })
                .collect();
            self.stirling_rows.push(row);
        }
        usize::try_from(m)
            .ok()
            .and_then(|m| self.stirling_rows[n].get(m).cloned())
            .unwrap_or_default()
    }

    /// `P^s_{a,b}`: the `s`-th elementary symmetric function of the integers in `[a, b]`.
    pub fn interval_esp(&mut self, a: i64, b: i64, s: u64) -> BigInt {
        if s == 0 {
            return BigInt::one();
        }
        if a > b || s > (b - a + 1) as u64 {
            return BigInt::zero();
        }
        if let Some(v) = self.esp.get(&(a, b, s)) {
            return v.clone();
        }
        let mut e = vec![BigInt::zero(); s as usize + 1];
        e[0] = BigInt::one();
        for x in a..=b {
            let x = BigInt::from(x);
            for t in (1..e.len()).rev() {
                let add = &e[t - 1] * &x;
                e[t] += add;
            }
        }
        let v = e.pop().unwrap_or_default();
        self.esp.insert((a, b, s), v.clone());
        v
    }

    /// `P^s_{−a,b}` for `a, b > 0` by the alternating Stirling convolution.
    pub fn interval_esp_via_stirling(&mut self, a: usize, b: usize, s: u64) -> BigInt {
        let mut acc = BigInt::zero();
        for j in 0..=s as i64 {
            let term = self.stirling1(a + 1, a as i64 + 1 - j) * self.stirling1(b + 1, b as i64 + 1 - s as i64 + j);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    /// `ρ_{c,j}(s)`: number of `j`-subsets of coordinates whose caps sum to `s`.
    pub fn rho(&mut self, c: &CapVector, j: usize, s: i64) -> BigInt {
        if j > c.len() || s < 0 || s as u64 > c.total() {
            return BigInt::zero();
        }
        let table = self.rho.entry(c.clone()).or_insert_with(|| {
            let total = c.total() as usize;
            let mut dp = vec![vec![BigInt::zero(); total + 1]; c.len() + 1];
            dp[0][0] = BigInt::one();
            for &ci in c.entries() {
                let ci = ci as usize;
                for card in (1..dp.len()).rev() {
                    for sum in (ci..=total).rev() {
                        let add = dp[card - 1][sum - ci].clone();
                        dp[card][sum] += add;
                    }
                }
            }
            dp
        });
        table[j][s as usize].clone()
    }
}

pub fn eulerian(n: usize, k: i64) -> BigInt {
    NumberCache::new().eulerian(n, k)
}

pub fn stirling1_unsigned(n: usize, m: i64) -> BigInt {
    NumberCache::new().stirling1(n, m)
}

pub fn interval_esp(a: i64, b: i64, s: u64) -> BigInt {
    NumberCache::new().interval_esp(a, b, s)
}

pub fn interval_esp_via_stirling(a: usize, b: usize, s: u64) -> BigInt {
    NumberCache::new().interval_esp_via_stirling(a, b, s)
}

pub fn rho(c: &CapVector, j: usize, s: i64) -> BigInt {
    NumberCache::new().rho(c, j, s)
}

/// Lah number `L(n, m) = n!/m! · C(n−1, m−1)`; zero unless `1 ≤ m ≤ n`.
pub fn lah(n: u64, m: u64) -> BigInt {
    if m < 1 || m > n {
        return BigInt::zero();
    }
    factorial(n) / factorial(m) * binomial(n - 1, m - 1)
}

/// `B(ℓ, c)`: ways to put `ℓ` indistinguishable balls into boxes of capacities `c_i − 1`.
pub fn bounded_compositions(l: u64, c: &CapVector) -> BigInt {
    let caps: Vec<u64> = c.entries().iter().map(|ci| ci - 1).collect();
    bounded_power_coeff(&caps, l)
}

/// `C(n, a)_b = [x^a] (1 + x + … + x^{b−1})^n` by direct coefficient extraction.
pub fn gen_binomial(n: u64, a: i64, b: u64) -> BigInt {
    if a < 0 || b == 0 {
        return BigInt::zero();
    }
    bounded_power_coeff(&vec![b - 1; n as usize], a as u64)
}

/// `C(n, a)_b` by the alternating sum `Σ_j (−1)^j C(n, j) C(n−1+a−bj, n−1)`.
pub fn gen_binomial_alternating(n: u64, a: i64, b: u64) -> BigInt {
    if a < 0 || b == 0 {
        return BigInt::zero();
    }
    let a = a as u64;
    if n == 0 {
        return if a == 0 { BigInt::one() } else { BigInt::zero() };
    }
    let mut acc = BigInt::zero();
    for j in 0..=a / b {
        let term = binomial(n, j) * binomial(n - 1 + a - b * j, n - 1);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}
