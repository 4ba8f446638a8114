//! Exact checkers for the two root-location conjectures: unit-circle roots of
//! the W-number generating polynomials, and real-rootedness plus interlacing
//! of h*-polynomials.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::roots::{certified_roots, RootFailure};
use super::sturm::{gcd, squarefree_decomposition, squarefree_part, RootInterval, SturmChain};
use crate::counting::{CapVector, NumberCache};
use crate::polyarith::IntPoly;
use crate::weighted_perms::w_count_formula;

/// `p_{n,m,c}(x) = Σ_ℓ W(ℓ, n, m+1, c) x^ℓ`, `n = c.len()`. Terms vanish for `ℓ ≥ Σc_i`.
pub fn w_generating_poly(m: usize, c: &CapVector) -> IntPoly {
    let mut cache = NumberCache::new();
    IntPoly::new((0..c.total()).map(|l| w_count_formula(l, m, c, &mut cache)).collect())
}

/// Coefficient sequence equals its reverse up to a global sign.
pub fn self_inversive_check(p: &IntPoly) -> bool {
    let c = p.coeffs();
    if c.is_empty() {
        return false;
    }
    let rev: Vec<&BigInt> = c.iter().rev().collect();
    let same = c.iter().zip(&rev).all(|(a, b)| a == *b);
    let opposite = c.iter().zip(&rev).all(|(a, b)| *a == -(*b));
    same || opposite
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitCircleStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitCircleReport {
    pub status: UnitCircleStatus,
    /// Certified upper bound on `max | |z| − 1 |` over all roots; `None` when
    /// root refinement did not certify.
    pub max_deviation: Option<f64>,
    pub self_inversive: bool,
}

impl UnitCircleReport {
    pub fn pass(&self) -> bool {
        self.status == UnitCircleStatus::Pass
    }
}

/// Do all complex roots of `p` lie within `tol` of the unit circle?
///
/// Roots are found on the square-free part, so repeated roots on the circle
/// do not degrade accuracy.
pub fn unit_circle_check(p: &IntPoly, tol: f64) -> UnitCircleReport {
    let self_inversive = self_inversive_check(p);
    let g = squarefree_part(&p.to_rat());
    let (status, max_deviation) = match certified_roots(&g) {
        Ok(roots) => {
            let dev = roots
                .centers
                .iter()
                .zip(&roots.radii)
                .map(|(z, r)| (z.norm() - 1.0).abs() + r)
                .fold(0.0, f64::max);
            let ok = self_inversive && dev <= tol && !p.is_zero();
            (if ok { UnitCircleStatus::Pass } else { UnitCircleStatus::Fail }, Some(dev))
        }
        Err(RootFailure::NoConvergence | RootFailure::OverlappingDisks) => (UnitCircleStatus::Inconclusive, None),
    };
    UnitCircleReport { status, max_deviation, self_inversive }
}

/// True iff every complex root of `p` is real, counted with multiplicity.
pub fn real_rooted_check(p: &IntPoly) -> bool {
    let Some(deg) = p.degree() else {
        return false;
    };
    let real: usize = squarefree_decomposition(&p.to_rat())
        .iter()
        .map(|(f, mult)| mult * SturmChain::new(f).count_real())
        .sum();
    real == deg
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterlaceVerdict {
    Interlacing,
    NotInterlacing,
    /// One of the polynomials is not real-rooted.
    NotApplicable,
}

/// Strict interlacing of the real roots of `p` and `q`, with
/// `deg q ∈ {deg p, deg p + 1}`. A shared root counts as a failure.
pub fn interlace_check(p: &IntPoly, q: &IntPoly) -> InterlaceVerdict {
    if !real_rooted_check(p) || !real_rooted_check(q) {
        return InterlaceVerdict::NotApplicable;
    }
    let (dp, dq) = (p.degree().unwrap_or(0), q.degree().unwrap_or(0));
    if dq != dp && dq != dp + 1 {
        return InterlaceVerdict::NotInterlacing;
    }
    let (pr, qr) = (p.to_rat(), q.to_rat());
    if gcd(&pr, &qr).degree().unwrap_or(0) > 0 {
        return InterlaceVerdict::NotInterlacing;
    }

    // (interval, multiplicity, label) for each distinct root of each polynomial
    let mut roots: Vec<(RootInterval, usize, u8, SturmChain)> = Vec::new();
    for (label, poly) in [(0u8, &pr), (1u8, &qr)] {
        for (f, mult) in squarefree_decomposition(poly) {
            let chain = SturmChain::new(&f);
            for iv in chain.isolate() {
                roots.push((iv, mult, label, chain.clone()));
            }
        }
    }
    // refine until intervals of different roots are pairwise disjoint
    loop {
        let mut clash = None;
        'outer: for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if roots[i].0.overlaps(&roots[j].0) {
                    clash = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = clash else { break };
        for idx in [i, j] {
            let refined = roots[idx].3.bisect(&roots[idx].0);
            roots[idx].0 = refined;
        }
    }
    roots.sort_by(|a, b| a.0.lo.cmp(&b.0.lo));
    let labels: Vec<u8> = roots.iter().flat_map(|(_, mult, label, _)| std::iter::repeat_n(*label, *mult)).collect();
    if labels.windows(2).all(|w| w[0] != w[1]) {
        InterlaceVerdict::Interlacing
    } else {
        InterlaceVerdict::NotInterlacing
    }
}
