//! Exact real-root counting and isolation over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::polyarith::RatPoly;

/// Euclidean division `a = q·b + r` with `deg r < deg b`.
pub fn div_rem(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly) {
    let db = b.degree().expect("division by the zero polynomial");
    let lead = b.leading_coeff().expect("nonzero divisor").clone();
    let mut rem = a.coeffs().to_vec();
    let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(db)];
    while rem.len() > db {
        let top = rem.len() - 1;
        let factor = &rem[top] / &lead;
        let shift = top - db;
        if !factor.is_zero() {
            for (i, bc) in b.coeffs().iter().enumerate() {
                rem[shift + i] -= &factor * bc;
            }
            quot[shift] = factor;
        }
        rem.pop();
    }
    (RatPoly::new(quot), RatPoly::new(rem))
}

pub fn monic(p: &RatPoly) -> RatPoly {
    match p.leading_coeff() {
        Some(l) => p.scale(&l.recip()),
        None => RatPoly::zero(),
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Yun's square-free decomposition: `p = lc · ∏ f_i^i` with each `f_i`
/// square-free and pairwise coprime. Returns `(f_i, i)` for nonconstant `f_i`.
pub fn squarefree_decomposition(p: &RatPoly) -> Vec<(RatPoly, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative();
    let a0 = gcd(p, &dp);
    let mut b = div_rem(p, &a0).0;
    let mut c = div_rem(&dp, &a0).0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = gcd(&b, &d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = div_rem(&b, &a).0;
        c = div_rem(&d, &a).0;
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

pub fn squarefree_part(p: &RatPoly) -> RatPoly {
    if p.degree().unwrap_or(0) == 0 {
        return monic(p);
    }
    monic(&div_rem(p, &gcd(p, &p.derivative())).0)
}

/// Sturm sequence of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<RatPoly>,
}

fn sign_changes<I: Iterator<Item = i8>>(signs: I) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl SturmChain {
    pub fn new(p: &RatPoly) -> Self {
        let mut chain = vec![p.clone()];
        let mut next = p.derivative();
        while !next.is_zero() {
            let (_, r) = div_rem(chain.last().expect("nonempty"), &next);
            chain.push(next);
            next = -&r;
        }
        SturmChain { chain }
    }

    pub fn poly(&self) -> &RatPoly {
        &self.chain[0]
    }

    fn changes_at(&self, x: &BigRational) -> usize {
        sign_changes(self.chain.iter().map(|p| sign(&p.eval(x))))
    }

    fn changes_at_infinity(&self, positive: bool) -> usize {
        sign_changes(self.chain.iter().map(|p| {
            let lead = sign(p.leading_coeff().expect("chain members are nonzero"));
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if positive || !odd {
                lead
            } else {
                -lead
            }
        }))
    }

    /// Distinct real roots.
    pub fn count_real(&self) -> usize {
        self.changes_at_infinity(false) - self.changes_at_infinity(true)
    }

    /// Distinct roots in the half-open interval `(lo, hi]`.
    pub fn count_in(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.changes_at(lo) - self.changes_at(hi)
    }

    /// Disjoint intervals `(lo, hi]`, sorted, each holding exactly one real root.
    pub fn isolate(&self) -> Vec<RootInterval> {
        let bound = cauchy_bound(self.poly());
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((lo, hi)) = stack.pop() {
            match self.count_in(&lo, &hi) {
                0 => {}
                1 => out.push(RootInterval { lo, hi }),
                _ => {
                    let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
                    stack.push((lo, mid.clone()));
                    stack.push((mid, hi));
                }
            }
        }
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        out
    }

    /// Halves an isolating interval, keeping the half that holds the root.
    pub fn bisect(&self, iv: &RootInterval) -> RootInterval {
        let mid = (&iv.lo + &iv.hi) / BigRational::from_integer(BigInt::from(2));
        if self.count_in(&iv.lo, &mid) == 1 {
            RootInterval { lo: iv.lo.clone(), hi: mid }
        } else {
            RootInterval { lo: mid, hi: iv.hi.clone() }
        }
    }
}

/// Half-open rational interval `(lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn overlaps(&self, other: &RootInterval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }
}

/// Every root lies strictly inside `(−B, B)`.
fn cauchy_bound(p: &RatPoly) -> BigRational {
    let lead = p.leading_coeff().expect("nonzero polynomial").abs();
    let max = p.coeffs().iter().map(|c| c.abs() / &lead).max().unwrap_or_default();
    max + BigRational::one()
}
