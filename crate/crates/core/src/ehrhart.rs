//! Ehrhart polynomials of slices of the prism `[0,c_1] × ⋯ × [0,c_n]`.
//!
//! The thin slice `R_{k,c}` cuts the prism with `Σ x_i = k`; the fat slice
//! `R'_{a,b,c}` keeps `a ≤ Σ x_i ≤ b`. Three independent routes produce the
//! same polynomial: brute dilation counting, the alternating binomial sum,
//! and the per-coefficient formula through c-compatible weighted permutations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::counting::{bounded_compositions, CapVector, NumberCache};
use crate::error::{Error, Result};
use crate::polyarith::{binomial, bounded_power_coeff, factorial, poly_binomial, LinearForm, RatPoly};
use crate::weighted_perms::w_count_formula;

/// The thin slice `R_{k,c}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SliceSpec {
    pub k: u64,
    pub c: CapVector,
}

impl SliceSpec {
    pub fn new(k: u64, c: CapVector) -> Result<Self> {
        if k == 0 {
            return Err(Error::OutOfRange("slice level k must be positive".into()));
        }
        Ok(SliceSpec { k, c })
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// `0 < k < Σ c_i`, i.e. the slice is `(n−1)`-dimensional.
    pub fn is_full_dimensional(&self) -> bool {
        self.k < self.c.total()
    }

    fn require_full_dimensional(&self) -> Result<()> {
        if self.is_full_dimensional() {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!("need 0 < k < {}, got k = {}", self.c.total(), self.k)))
        }
    }

    /// All full-dimensional slices with `n ≤ max_n` and caps `≤ max_c`.
    pub fn grid(max_n: usize, max_c: u64) -> Vec<SliceSpec> {
        let mut out = Vec::new();
        for n in 1..=max_n {
            for c in CapVector::grid(n, max_c) {
                for k in 1..c.total() {
                    out.push(SliceSpec { k, c: c.clone() });
                }
            }
        }
        out
    }
}

/// The fat slice `R'_{a,b,c}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FatSliceSpec {
    pub a: u64,
    pub b: u64,
    pub c: CapVector,
}

impl FatSliceSpec {
    pub fn new(a: u64, b: u64, c: CapVector) -> Result<Self> {
        if a >= b {
            return Err(Error::OutOfRange(format!("fat slice needs a < b, got a = {a}, b = {b}")));
        }
        Ok(FatSliceSpec { a, b, c })
    }
}

/// `#(t R_{k,c} ∩ Z^n) = [x^{kt}] ∏ (1 + x + ⋯ + x^{c_i t})`.
pub fn brute_count(s: &SliceSpec, t: u64) -> BigInt {
    let caps: Vec<u64> = s.c.entries().iter().map(|c| c * t).collect();
    bounded_power_coeff(&caps, s.k * t)
}

/// Lattice points of `t R'_{a,b,c}` by walking every point of the dilated box.
pub fn fat_brute_count(f: &FatSliceSpec, t: u64) -> u64 {
    let caps: Vec<u64> = f.c.entries().iter().map(|c| c * t).collect();
    let (lo, hi) = (f.a * t, f.b * t);
    let mut point = vec![0u64; caps.len()];
    let mut count = 0;
    loop {
        let sum: u64 = point.iter().sum();
        if lo <= sum && sum <= hi {
            count += 1;
        }
        let Some(pos) = (0..point.len()).rev().find(|&i| point[i] < caps[i]) else {
            return count;
        };
        point[pos] += 1;
        for x in point.iter_mut().skip(pos + 1) {
            *x = 0;
        }
    }
}

/// `Σ_{j=0}^{k−1} (−1)^j Σ_{v=0}^{k−1} binom(t(k−v) + n−1−j, n−1) ρ_{c,j}(v)`.
///
/// `k = Σc_i` gives the constant 1 (a single vertex) and `k > Σc_i` the zero
/// polynomial (empty slice).
pub fn ehrhart_formula(s: &SliceSpec) -> RatPoly {
    ehrhart_formula_with(s, &mut NumberCache::new())
}

pub fn ehrhart_formula_with(s: &SliceSpec, cache: &mut NumberCache) -> RatPoly {
    let total = s.c.total();
    if s.k == total {
        return RatPoly::one();
    }
    if s.k > total {
        return RatPoly::zero();
    }
    let n = s.n() as i64;
    let k = s.k as i64;
    let mut acc = RatPoly::zero();
    for j in 0..k {
        for v in 0..k {
            let r = cache.rho(&s.c, j as usize, v);
            if r.is_zero() {
                continue;
            }
            let mut term = poly_binomial(LinearForm::new(k - v, n - 1 - j), (n - 1) as u32);
            if j % 2 == 1 {
                term = -&term;
            }
            acc = &acc + &term.scale(&BigRational::from_integer(r));
        }
    }
    acc
}

/// `[t^m] ehr(R_{k,c}, t) = (1/(n−1)!) Σ_{ℓ<k} W(ℓ, n, m+1, c) A(m, k−ℓ−1)`.
pub fn ehrhart_coefficient(s: &SliceSpec, m: usize, cache: &mut NumberCache) -> Result<BigRational> {
    s.require_full_dimensional()?;
    let n = s.n();
    if m >= n {
        return Err(Error::OutOfRange(format!("coefficient index {m} exceeds degree {}", n - 1)));
    }
    let mut acc = BigInt::zero();
    for l in 0..s.k {
        let w = w_count_formula(l, m, &s.c, cache);
        if w.is_zero() {
            continue;
        }
        acc += w * cache.eulerian(m, s.k as i64 - l as i64 - 1);
    }
    Ok(BigRational::new(acc, factorial(n as u64 - 1)))
}

/// The Ehrhart polynomial assembled coefficient by coefficient.
pub fn ehrhart_via_coefficients(s: &SliceSpec) -> Result<RatPoly> {
    ehrhart_via_coefficients_with(s, &mut NumberCache::new())
}

pub fn ehrhart_via_coefficients_with(s: &SliceSpec, cache: &mut NumberCache) -> Result<RatPoly> {
    let coeffs = (0..s.n())
        .map(|m| ehrhart_coefficient(s, m, cache))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatPoly::new(coeffs))
}

/// Interpolates brute counts at `t = 1..=n` together with the value 1 at `t = 0`.
pub fn ehrhart_by_interpolation(s: &SliceSpec) -> RatPoly {
    let mut points = vec![(BigRational::zero(), BigRational::one())];
    for t in 1..=s.n() as u64 {
        points.push((BigRational::from_integer(t.into()), BigRational::from_integer(brute_count(s, t))));
    }
    RatPoly::interpolate(&points).expect("abscissae are distinct")
}

/// `ehr(R_c, t) = ∏ (c_i t + 1)` for the whole prism.
pub fn prism_ehrhart(c: &CapVector) -> RatPoly {
    c.entries()
        .iter()
        .fold(RatPoly::one(), |acc, &ci| &acc * &RatPoly::from_ints([1, ci as i64]))
}

/// `R'_{a,b,c}` is integrally equivalent to `R_{b,(c, b−a)}`.
pub fn fat_to_thin(f: &FatSliceSpec) -> SliceSpec {
    SliceSpec {
        k: f.b,
        c: f.c.appended(f.b - f.a).expect("b > a so the new cap is positive"),
    }
}

/// Ehrhart polynomial of the independence polytope of the uniform matroid
/// `U_{k,n}`: `Σ_{j<k} (−1)^j C(n, j) binom((k−j)t + n − j, n)`.
pub fn uniform_independence_ehrhart(k: u64, n: u64) -> Result<RatPoly> {
    if k < 1 || k > n {
        return Err(Error::OutOfRange(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    let mut acc = RatPoly::zero();
    for j in 0..k {
        let mut term = poly_binomial(LinearForm::new((k - j) as i64, (n - j) as i64), n as u32)
            .scale(&BigRational::from_integer(binomial(n, j)));
        if j % 2 == 1 {
            term = -&term;
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `(n−1)!·vol(R_{k,c}) = Σ_{ℓ<k} B(ℓ, c) A(n−1, k−ℓ−1)`.
pub fn normalized_volume(s: &SliceSpec) -> Result<BigInt> {
    s.require_full_dimensional()?;
    let mut cache = NumberCache::new();
    let n = s.n();
    Ok((0..s.k)
        .map(|l| bounded_compositions(l, &s.c) * cache.eulerian(n - 1, s.k as i64 - l as i64 - 1))
        .sum())
}

/// Relative Euclidean volume, the leading Ehrhart coefficient.
pub fn volume(s: &SliceSpec) -> Result<BigRational> {
    let nv = normalized_volume(s)?;
    Ok(BigRational::new(nv, factorial(s.n() as u64 - 1)))
}

/// Coefficient-wise `ehr(R_{k,c}) ≤ ehr(R_{k,c'})`.
pub fn monotonicity_check(s: &SliceSpec, c_prime: &CapVector) -> Result<bool> {
    if c_prime.len() != s.n() {
        return Err(Error::DimensionMismatch { expected: s.n(), actual: c_prime.len() });
    }
    if !s.c.dominated_by(c_prime) {
        return Err(Error::OutOfRange(format!("{} is not entrywise ≤ {}", s.c, c_prime)));
    }
    let bigger = SliceSpec::new(s.k, c_prime.clone())?;
    s.require_full_dimensional()?;
    bigger.require_full_dimensional()?;
    Ok(coefficientwise_le(&ehrhart_formula(s), &ehrhart_formula(&bigger)))
}

pub fn coefficientwise_le(p: &RatPoly, q: &RatPoly) -> bool {
    let len = p.coeffs().len().max(q.coeffs().len());
    (0..len).all(|i| p.coeff(i) <= q.coeff(i))
}

pub fn all_coefficients_positive(p: &RatPoly) -> bool {
    !p.is_zero() && p.coeffs().iter().all(Signed::is_positive)
}
