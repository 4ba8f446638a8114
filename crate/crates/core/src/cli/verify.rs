//! The `verify` command: every identity of the library, checked against an
//! independent route on a grid of cap vectors.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::counting::{eulerian, lah, CapVector, NumberCache};
use crate::ehrhart::{
    all_coefficients_positive, brute_count, ehrhart_formula_with, ehrhart_via_coefficients_with, fat_brute_count,
    fat_to_thin, monotonicity_check, normalized_volume, prism_ehrhart, uniform_independence_ehrhart, FatSliceSpec,
    SliceSpec,
};
use crate::flag::{flag_eulerian_convolution, flag_eulerian_distribution, flag_eulerian_via_volume};
use crate::hstar::{hstar_combinatorial, hstar_series};
use crate::polyarith::{factorial, RatPoly};
use crate::weighted_perms::{enumerate_weighted, from_lah, to_lah, w_count_enum, w_count_formula};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub check: String,
    pub instance: Value,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub by_check: BTreeMap<String, CheckTally>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_n: usize,
    pub max_c: u64,
    pub records: Vec<VerifyRecord>,
    pub summary: VerifySummary,
}

impl VerifyReport {
    fn new(max_n: usize, max_c: u64, records: Vec<VerifyRecord>) -> Self {
        let mut summary = VerifySummary { total: records.len(), ..Default::default() };
        for r in &records {
            let tally = summary.by_check.entry(r.check.clone()).or_default();
            if r.pass {
                summary.passed += 1;
                tally.passed += 1;
            } else {
                summary.failed += 1;
                tally.failed += 1;
            }
        }
        VerifyReport { max_n, max_c, records, summary }
    }

    /// One line per check, plus the first counterexample of each failing one.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, tally) in &self.summary.by_check {
            let status = if tally.failed == 0 { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {name}: {} passed, {} failed\n", tally.passed, tally.failed));
            if let Some(r) = self.records.iter().find(|r| &r.check == name && !r.pass) {
                out.push_str(&format!("  first failure {}: expected {}, got {}\n", r.instance, r.expected, r.actual));
            }
        }
        out.push_str(&format!("{} checks, {} passed, {} failed\n", self.summary.total, self.summary.passed, self.summary.failed));
        out
    }
}

fn record(check: &str, instance: Value, expected: impl ToString, actual: impl ToString) -> VerifyRecord {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    VerifyRecord { check: check.into(), pass: expected == actual, instance, expected, actual }
}

fn flag_record(check: &str, instance: Value, pass: bool, expected: impl ToString, actual: impl ToString) -> VerifyRecord {
    VerifyRecord { check: check.into(), instance, expected: expected.to_string(), actual: actual.to_string(), pass }
}

fn list<T: ToString>(xs: &[T]) -> String {
    format!("[{}]", xs.iter().map(T::to_string).collect::<Vec<_>>().join(", "))
}

fn caps_grid(max_n: usize, max_c: u64) -> Vec<CapVector> {
    (1..=max_n).flat_map(|n| CapVector::grid(n, max_c)).collect()
}

fn values(p: &RatPoly, ts: impl Iterator<Item = u64>) -> Vec<BigRational> {
    ts.map(|t| p.eval_int(t as i64)).collect()
}

fn rat(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

/// Ehrhart formula against brute counts at `t = 0..=n`, and the
/// per-coefficient assembly against the formula, with positivity.
fn ehrhart_checks(caps: &[CapVector]) -> Vec<VerifyRecord> {
    caps.par_iter()
        .flat_map_iter(|c| {
            let mut cache = NumberCache::new();
            let mut out = Vec::new();
            for k in 1..c.total() {
                let s = SliceSpec { k, c: c.clone() };
                let inst = json!({"k": k, "c": c});
                let formula = ehrhart_formula_with(&s, &mut cache);
                let brute: Vec<BigRational> = std::iter::once(BigRational::one())
                    .chain((1..=c.len() as u64).map(|t| rat(brute_count(&s, t))))
                    .collect();
                out.push(record("ehrhart_vs_brute", inst.clone(), list(&brute), list(&values(&formula, 0..=c.len() as u64))));
                match ehrhart_via_coefficients_with(&s, &mut cache) {
                    Ok(p) => out.push(record("coefficients_vs_formula", inst.clone(), &formula, &p)),
                    Err(e) => out.push(flag_record("coefficients_vs_formula", inst.clone(), false, &formula, e)),
                }
                out.push(flag_record(
                    "ehrhart_positivity",
                    inst,
                    all_coefficients_positive(&formula),
                    "all coefficients positive",
                    &formula,
                ));
            }
            out
        })
        .collect()
}

fn w_checks(caps: &[CapVector]) -> Vec<VerifyRecord> {
    caps.par_iter()
        .flat_map_iter(|c| {
            let mut cache = NumberCache::new();
            (0..c.len())
                .map(|m| {
                    let formula: Vec<BigInt> = (0..c.total()).map(|l| w_count_formula(l, m, c, &mut cache)).collect();
                    let enumerated: Vec<u64> = (0..c.total()).map(|l| w_count_enum(l, m + 1, c)).collect();
                    record("w_formula_vs_enumeration", json!({"c": c, "m": m + 1}), list(&enumerated), list(&formula))
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Round trip through the Lah bijection for every `(n, m)`.
fn lah_checks(max_n: usize) -> Vec<VerifyRecord> {
    let pairs: Vec<(usize, usize)> = (1..=max_n).flat_map(|n| (1..=n).map(move |m| (n, m))).collect();
    pairs
        .par_iter()
        .map(|&(n, m)| {
            let ones = CapVector::ones(n);
            let mut images = HashSet::new();
            let mut round_trips = true;
            for l in 0..=(n - m) as u64 {
                for p in enumerate_weighted(m, l, &ones) {
                    match to_lah(&p) {
                        Ok(pi) => {
                            round_trips &= from_lah(&pi) == p && pi.weight() == l;
                            images.insert(pi);
                        }
                        Err(_) => round_trips = false,
                    }
                }
            }
            let pass = round_trips && BigInt::from(images.len()) == lah(n as u64, m as u64);
            flag_record("lah_roundtrip", json!({"n": n, "m": m}), pass, lah(n as u64, m as u64), images.len())
        })
        .collect()
}

fn hstar_and_volume_checks(caps: &[CapVector]) -> Vec<VerifyRecord> {
    caps.par_iter()
        .flat_map_iter(|c| {
            let mut out = Vec::new();
            let mut cache = NumberCache::new();
            for k in 1..c.total() {
                let s = SliceSpec { k, c: c.clone() };
                let inst = json!({"k": k, "c": c});
                let series = hstar_series(&s);
                let comb = hstar_combinatorial(&s);
                match (&series, &comb) {
                    (Ok(a), Ok(b)) => out.push(record("hstar_series_vs_combinatorial", inst.clone(), a, b)),
                    (a, b) => out.push(flag_record("hstar_series_vs_combinatorial", inst.clone(), false, format!("{a:?}"), format!("{b:?}"))),
                }
                let nv = normalized_volume(&s);
                let leading = ehrhart_formula_with(&s, &mut cache).coeff(c.len() - 1) * rat(factorial(c.len() as u64 - 1));
                match (&nv, &series) {
                    (Ok(nv), Ok(h)) => {
                        let h1: BigInt = h.coeffs().iter().sum();
                        out.push(record("volume_vs_hstar", inst.clone(), nv, h1));
                        out.push(record("volume_vs_leading_coefficient", inst.clone(), rat(nv.clone()), leading));
                        if c.entries().iter().all(|&x| x == 1) {
                            out.push(record("hypersimplex_volume", inst.clone(), eulerian(c.len() - 1, k as i64 - 1), nv));
                        }
                    }
                    (a, b) => out.push(flag_record("volume_vs_hstar", inst.clone(), false, format!("{a:?}"), format!("{b:?}"))),
                }
            }
            out
        })
        .collect()
}

fn flag_checks(caps: &[CapVector]) -> Vec<VerifyRecord> {
    caps.par_iter()
        .map(|c| {
            let dist = flag_eulerian_distribution(c);
            let enumerated: Vec<BigInt> = (0..c.total()).map(|k| BigInt::from(dist.get(k as usize).copied().unwrap_or(0))).collect();
            let conv: Vec<BigInt> = (0..c.total()).map(|k| flag_eulerian_convolution(k, c)).collect();
            let vol: Vec<String> = (0..c.total())
                .map(|k| flag_eulerian_via_volume(k, c).map_or_else(|e| e.to_string(), |v| v.to_string()))
                .collect();
            let pass = list(&enumerated) == list(&conv) && list(&conv) == list(&vol);
            flag_record(
                "flag_three_way",
                json!({"c": c}),
                pass,
                format!("enumeration {}", list(&enumerated)),
                format!("convolution {}, via volume {}", list(&conv), list(&vol)),
            )
        })
        .collect()
}

fn monotonicity_checks(caps: &[CapVector]) -> Vec<VerifyRecord> {
    let pairs: Vec<(&CapVector, &CapVector)> = caps
        .iter()
        .flat_map(|c| caps.iter().filter(move |d| *d != c && c.dominated_by(d)).map(move |d| (c, d)))
        .collect();
    pairs
        .par_iter()
        .map(|&(c, d)| {
            let failing: Vec<u64> = (1..c.total())
                .filter(|&k| !monotonicity_check(&SliceSpec { k, c: c.clone() }, d).unwrap_or(false))
                .collect();
            flag_record("monotonicity", json!({"c": c, "c_prime": d}), failing.is_empty(), "[]", list(&failing))
        })
        .collect()
}

/// Fat slices against the thin reduction at `t = 1, 2`, and the full prism.
fn fat_checks(caps: &[CapVector]) -> Vec<VerifyRecord> {
    caps.par_iter()
        .flat_map_iter(|c| {
            let mut out = Vec::new();
            let mut cache = NumberCache::new();
            let total = c.total();
            for a in 0..total {
                for b in a + 1..=total {
                    let f = FatSliceSpec::new(a, b, c.clone()).expect("a < b");
                    let thin = ehrhart_formula_with(&fat_to_thin(&f), &mut cache);
                    let direct: Vec<BigRational> = (1..=2).map(|t| rat(fat_brute_count(&f, t).into())).collect();
                    out.push(record("fat_to_thin", json!({"a": a, "b": b, "c": c}), list(&direct), list(&values(&thin, 1..=2))));
                }
            }
            let full = ehrhart_formula_with(&fat_to_thin(&FatSliceSpec::new(0, total, c.clone()).expect("0 < Σc")), &mut cache);
            out.push(record("prism_closed_form", json!({"c": c}), prism_ehrhart(c), full));
            out
        })
        .collect()
}

fn uniform_matroid_checks(max_n: usize) -> Vec<VerifyRecord> {
    let mut out = Vec::new();
    for n in 1..=max_n as u64 {
        for k in 1..=n {
            let inst = json!({"k": k, "n": n});
            let fat = FatSliceSpec::new(0, k, CapVector::ones(n as usize)).expect("0 < k");
            let thin = ehrhart_formula_with(&fat_to_thin(&fat), &mut NumberCache::new());
            match uniform_independence_ehrhart(k, n) {
                Ok(u) => {
                    out.push(record("uniform_matroid", inst.clone(), &thin, &u));
                    out.push(flag_record("uniform_matroid_positivity", inst, all_coefficients_positive(&u), "all coefficients positive", &u));
                }
                Err(e) => out.push(flag_record("uniform_matroid", inst, false, &thin, e)),
            }
        }
    }
    out
}

/// Runs every cross-check over `n ≤ max_n`, `c_i ≤ max_c`. Record order is deterministic.
pub fn verify(max_n: usize, max_c: u64) -> VerifyReport {
    let caps = caps_grid(max_n, max_c);
    let mut records = Vec::new();
    records.extend(ehrhart_checks(&caps));
    records.extend(w_checks(&caps));
    records.extend(lah_checks(max_n));
    records.extend(hstar_and_volume_checks(&caps));
    records.extend(flag_checks(&caps));
    records.extend(monotonicity_checks(&caps));
    records.extend(fat_checks(&caps));
    records.extend(uniform_matroid_checks(max_n));
    VerifyReport::new(max_n, max_c, records)
}
