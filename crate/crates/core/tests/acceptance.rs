//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Reference values come from oracles defined here, independent of the
//! library routes they check: naive polynomial products for lattice counts,
//! descent counting over permutations for Eulerian numbers, direct cycle
//! walks for W-numbers and colored-permutation walks for flag descents.
//!
//! Every check is exact except the unit-circle scan, which uses the root
//! tolerance 1e-9.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use prism_slices::counting::CapVector;
use prism_slices::ehrhart::{
    all_coefficients_positive, coefficientwise_le, ehrhart_formula, ehrhart_formula_with, ehrhart_via_coefficients_with,
    fat_brute_count, fat_to_thin, normalized_volume, uniform_independence_ehrhart, FatSliceSpec, SliceSpec,
};
use prism_slices::flag::{flag_eulerian_convolution, flag_eulerian_enum, flag_eulerian_via_volume};
use prism_slices::hstar::{
    hstar_combinatorial, hstar_series, interlace_check, real_rooted_check, unit_circle_check, w_generating_poly,
    InterlaceVerdict,
};
use prism_slices::hstar::sturm::gcd;
use prism_slices::weighted_perms::{
    enumerate_lah, enumerate_weighted, from_lah, to_lah, w_count_enum, w_count_formula,
};
use prism_slices::{IntPoly, NumberCache, RatPoly};

const ROOT_TOL: f64 = 1e-9;

// ---------------------------------------------------------------- oracles

/// Coefficients of `∏ (1 + x + … + x^{b_i})` by schoolbook multiplication.
fn box_product(bounds: &[u64]) -> Vec<BigInt> {
    let mut acc = vec![BigInt::one()];
    for &b in bounds {
        let mut next = vec![BigInt::zero(); acc.len() + b as usize];
        for (i, a) in acc.iter().enumerate() {
            for j in 0..=b as usize {
                next[i + j] += a;
            }
        }
        acc = next;
    }
    acc
}

/// Lattice points of `t·R_{k,c}` for every `k`, indexed by `kt`.
fn level_counts(c: &CapVector, t: u64) -> Vec<BigInt> {
    let bounds: Vec<u64> = c.entries().iter().map(|ci| ci * t).collect();
    box_product(&bounds)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n);
            out.push(q);
        }
    }
    out
}

fn eulerian_oracle(n: usize, k: usize) -> u64 {
    permutations(n)
        .iter()
        .filter(|p| p.windows(2).filter(|w| w[0] > w[1]).count() == k)
        .count() as u64
}

fn cycle_members(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len() + 1];
    let mut cycles = Vec::new();
    for start in 1..=p.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push(x);
            x = p[x - 1];
        }
        cycles.push(cyc);
    }
    cycles
}

/// `W(ℓ, n, m, c)` for all `ℓ`: per permutation with `m` cycles, the number of
/// weight assignments with `w(C) < Σ_{i∈C} c_i` summing to `ℓ`.
fn w_oracle(m: usize, c: &CapVector) -> Vec<BigInt> {
    let mut total = vec![BigInt::zero(); c.total() as usize];
    for p in permutations(c.len()) {
        let cycles = cycle_members(&p);
        if cycles.len() != m {
            continue;
        }
        let bounds: Vec<u64> = cycles.iter().map(|cyc| cyc.iter().map(|&i| c.entries()[i - 1]).sum::<u64>() - 1).collect();
        for (l, x) in box_product(&bounds).into_iter().enumerate() {
            if l < total.len() {
                total[l] += x;
            }
        }
    }
    total
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn binomial(n: u64, r: u64) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(r) * factorial(n - r))
}

/// `n!/m! · C(n−1, m−1)`.
fn lah_oracle(n: u64, m: u64) -> BigInt {
    factorial(n) / factorial(m) * binomial(n - 1, m - 1)
}

/// h* read off brute counts: `h_i = Σ_j (−1)^j C(n, j) L(i − j)` for `i < n`.
fn hstar_oracle(k: u64, c: &CapVector) -> IntPoly {
    let n = c.len() as u64;
    let counts: Vec<BigInt> = (0..n)
        .map(|t| if t == 0 { BigInt::one() } else { level_counts(c, t)[(k * t) as usize].clone() })
        .collect();
    let coeffs = (0..n)
        .map(|i| {
            (0..=i).fold(BigInt::zero(), |acc, j| {
                let term = binomial(n, j) * &counts[(i - j) as usize];
                if j % 2 == 0 { acc + term } else { acc - term }
            })
        })
        .collect();
    IntPoly::new(coeffs)
}

/// Flag descent histogram by walking all colored permutations.
fn flag_oracle(c: &CapVector) -> Vec<u64> {
    let caps = c.entries();
    let n = caps.len();
    let mut hist = vec![0u64; c.total() as usize + 1];
    let colorings: Vec<Vec<u64>> = caps.iter().fold(vec![vec![]], |acc, &ci| {
        acc.into_iter().flat_map(|v| (0..ci).map(move |s| [v.clone(), vec![s]].concat())).collect()
    });
    for sigma in permutations(n) {
        for s in &colorings {
            let mut f = s[n - 1];
            for i in 0..n - 1 {
                if s[i] > s[i + 1] || (s[i] == s[i + 1] && sigma[i] > sigma[i + 1]) {
                    f += caps[i + 1];
                }
            }
            hist[f as usize] += 1;
        }
    }
    hist
}

fn caps_upto(max_n: usize, max_c: u64) -> Vec<CapVector> {
    (1..=max_n).flat_map(|n| CapVector::grid(n, max_c)).collect()
}

fn rat(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

// ---------------------------------------------------------------- harness

struct Outcome {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

fn outcome(instances: usize, failures: Vec<String>) -> Outcome {
    let pass = failures.is_empty();
    let detail = if pass {
        format!("{instances} instances")
    } else {
        format!("{} of {instances} instances failed; first: {}", failures.len(), failures[0])
    };
    Outcome { pass, detail, notes: Vec::new() }
}

// ---------------------------------------------------------------- criteria

fn criterion_1() -> Outcome {
    let caps = caps_upto(5, 4);
    let results: Vec<(usize, Vec<String>)> = caps
        .par_iter()
        .map(|c| {
            let mut cache = NumberCache::new();
            let n = c.len() as u64;
            let counts: Vec<Vec<BigInt>> = (1..=n).map(|t| level_counts(c, t)).collect();
            let mut fails = Vec::new();
            let mut seen = 0;
            for k in 1..c.total() {
                seen += 1;
                let p = ehrhart_formula_with(&SliceSpec::new(k, c.clone()).unwrap(), &mut cache);
                if p.eval_int(0) != BigRational::one() {
                    fails.push(format!("k={k} c=({c}) t=0: {}", p.eval_int(0)));
                }
                for t in 1..=n {
                    let want = rat(counts[t as usize - 1][(k * t) as usize].clone());
                    if p.eval_int(t as i64) != want {
                        fails.push(format!("k={k} c=({c}) t={t}: formula {} vs count {want}", p.eval_int(t as i64)));
                    }
                }
            }
            (seen, fails)
        })
        .collect();
    let seen: usize = results.iter().map(|r| r.0).sum();
    outcome(seen, results.into_iter().flat_map(|r| r.1).collect())
}

fn criterion_2() -> Outcome {
    let caps = caps_upto(5, 4);
    let results: Vec<(usize, Vec<String>)> = caps
        .par_iter()
        .map(|c| {
            let mut cache = NumberCache::new();
            let mut fails = Vec::new();
            for k in 1..c.total() {
                let s = SliceSpec::new(k, c.clone()).unwrap();
                let formula = ehrhart_formula_with(&s, &mut cache);
                match ehrhart_via_coefficients_with(&s, &mut cache) {
                    Ok(p) if p != formula => fails.push(format!("k={k} c=({c}): {p} vs {formula}")),
                    Ok(p) if !all_coefficients_positive(&p) => fails.push(format!("k={k} c=({c}): nonpositive {p}")),
                    Ok(_) => {}
                    Err(e) => fails.push(format!("k={k} c=({c}): {e}")),
                }
            }
            (c.total() as usize - 1, fails)
        })
        .collect();
    let seen: usize = results.iter().map(|r| r.0).sum();
    outcome(seen, results.into_iter().flat_map(|r| r.1).collect())
}

fn criterion_3() -> Outcome {
    let caps = caps_upto(5, 3);
    let results: Vec<(usize, Vec<String>)> = caps
        .par_iter()
        .map(|c| {
            let mut cache = NumberCache::new();
            let mut fails = Vec::new();
            let mut seen = 0;
            for m in 0..c.len() {
                let oracle = w_oracle(m + 1, c);
                for l in 0..c.total() {
                    seen += 1;
                    let f = w_count_formula(l, m, c, &mut cache);
                    let e = BigInt::from(w_count_enum(l, m + 1, c));
                    if f != e || e != oracle[l as usize] {
                        fails.push(format!("l={l} m={m} c=({c}): formula {f}, enumeration {e}, oracle {}", oracle[l as usize]));
                    }
                }
            }
            (seen, fails)
        })
        .collect();
    let mut seen: usize = results.iter().map(|r| r.0).sum();
    let mut fails: Vec<String> = results.into_iter().flat_map(|r| r.1).collect();
    // weighted Lah specialization and its row sums
    for n in 1..=5usize {
        let ones = CapVector::ones(n);
        let mut cache = NumberCache::new();
        for m in 1..=n {
            seen += 1;
            let row: BigInt = (0..n as u64).map(|l| w_count_formula(l, m - 1, &ones, &mut cache)).sum();
            if row != lah_oracle(n as u64, m as u64) {
                fails.push(format!("Lah row n={n} m={m}: {row} vs {}", lah_oracle(n as u64, m as u64)));
            }
        }
    }
    outcome(seen, fails)
}

fn criterion_4() -> Outcome {
    let pairs: Vec<(usize, usize)> = (1..=6).flat_map(|n| (1..=n).map(move |m| (n, m))).collect();
    let results: Vec<Vec<String>> = pairs
        .par_iter()
        .map(|&(n, m)| {
            let ones = CapVector::ones(n);
            let mut fails = Vec::new();
            let mut images = HashSet::new();
            let mut count = 0u64;
            for l in 0..=(n - m) as u64 {
                for p in enumerate_weighted(m, l, &ones) {
                    count += 1;
                    match to_lah(&p) {
                        Ok(pi) => {
                            if from_lah(&pi) != p || pi.weight() != l || pi.blocks().len() != m {
                                fails.push(format!("n={n} m={m}: {p:?} does not round-trip"));
                            }
                            images.insert(pi);
                        }
                        Err(e) => fails.push(format!("n={n} m={m}: {p:?}: {e}")),
                    }
                }
            }
            let want = lah_oracle(n as u64, m as u64);
            if BigInt::from(count) != want || BigInt::from(images.len()) != want {
                fails.push(format!("n={n} m={m}: {count} objects, {} images, lah {want}", images.len()));
            }
            for pi in enumerate_lah(n, m) {
                if to_lah(&from_lah(&pi)).ok().as_ref() != Some(&pi) {
                    fails.push(format!("n={n} m={m}: partition {pi:?} does not round-trip"));
                }
            }
            fails
        })
        .collect();
    outcome(pairs.len(), results.into_iter().flatten().collect())
}

fn criterion_5() -> Outcome {
    let slices = SliceSpec::grid(5, 3);
    let fails: Vec<String> = slices
        .par_iter()
        .filter_map(|s| {
            let series = hstar_series(s);
            let comb = hstar_combinatorial(s);
            let oracle = hstar_oracle(s.k, &s.c);
            match (series, comb) {
                (Ok(a), Ok(b)) if a == b && b == oracle => None,
                (a, b) => Some(format!("k={} c=({}): series {a:?}, combinatorial {b:?}, oracle {oracle}", s.k, s.c)),
            }
        })
        .collect();
    let mut fails = fails;
    let spots = [(2, vec![1, 1, 1, 1], IntPoly::from_ints([1, 2, 1])), (1, vec![2, 1], IntPoly::from_ints([1]))];
    for (k, c, want) in spots {
        let s = SliceSpec::new(k, CapVector::new(c).unwrap()).unwrap();
        let got = hstar_combinatorial(&s).unwrap();
        if got != want {
            fails.push(format!("spot k={k} c=({}): {got} vs {want}", s.c));
        }
    }
    outcome(slices.len() + 2, fails)
}

fn criterion_6() -> Outcome {
    let mut fails = Vec::new();
    let mut seen = 0;
    for n in 2..=6usize {
        for k in 1..n as u64 {
            seen += 1;
            let s = SliceSpec::new(k, CapVector::ones(n)).unwrap();
            let want = BigInt::from(eulerian_oracle(n - 1, k as usize - 1));
            match normalized_volume(&s) {
                Ok(v) if v == want => {}
                other => fails.push(format!("hypersimplex k={k} n={n}: {other:?} vs {want}")),
            }
        }
    }
    let slices = SliceSpec::grid(5, 3);
    seen += slices.len();
    fails.extend(slices.par_iter().filter_map(|s| {
        let h1: BigInt = hstar_oracle(s.k, &s.c).coeffs().iter().sum();
        match normalized_volume(s) {
            Ok(v) if v == h1 => None,
            other => Some(format!("k={} c=({}): volume {other:?} vs h*(1) {h1}", s.k, s.c)),
        }
    }).collect::<Vec<_>>());
    outcome(seen, fails)
}

fn criterion_7() -> Outcome {
    let caps = caps_upto(4, 3);
    let results: Vec<(usize, Vec<String>)> = caps
        .par_iter()
        .map(|c| {
            let oracle = flag_oracle(c);
            let mut fails = Vec::new();
            for k in 0..c.total() {
                let e = flag_eulerian_enum(k, c);
                let conv = flag_eulerian_convolution(k, c);
                let vol = flag_eulerian_via_volume(k, c);
                let ok = e == oracle[k as usize] && BigInt::from(e) == conv && vol.as_ref() == Ok(&conv);
                if !ok {
                    fails.push(format!("k={k} c=({c}): enumeration {e}, convolution {conv}, via volume {vol:?}"));
                }
            }
            (c.total() as usize, fails)
        })
        .collect();
    let seen: usize = results.iter().map(|r| r.0).sum();
    let mut fails: Vec<String> = results.into_iter().flat_map(|r| r.1).collect();
    let c = CapVector::new(vec![2, 2]).unwrap();
    let spot: Vec<u64> = (0..4).map(|k| flag_eulerian_enum(k, &c)).collect();
    if spot != [1, 3, 3, 1] {
        fails.push(format!("spot c=(2,2): {spot:?}"));
    }
    let mut o = outcome(seen + 1, fails);
    o.notes.push(criterion_7_breakdown());
    o
}

/// Splits the criterion 7 grid by which pairs of routes agree.
fn criterion_7_breakdown() -> String {
    let caps = caps_upto(4, 3);
    let conv_eq_vol = caps
        .iter()
        .all(|c| (0..c.total()).all(|k| flag_eulerian_via_volume(k, c).ok() == Some(flag_eulerian_convolution(k, c))));
    let agrees = |c: &CapVector| (0..c.total()).all(|k| BigInt::from(flag_eulerian_enum(k, c)) == flag_eulerian_convolution(k, c));
    let sorted: Vec<&CapVector> = caps.iter().filter(|c| c.entries().windows(2).all(|w| w[0] <= w[1])).collect();
    let sorted_ok = sorted.iter().filter(|c| agrees(c)).count();
    let unsorted_bad = caps.iter().filter(|c| !agrees(c)).count();
    format!(
        "breakdown: convolution = via volume on every cap vector: {conv_eq_vol}; enumeration agrees on {sorted_ok} of {} nondecreasing cap vectors; {unsorted_bad} of {} cap vectors disagree",
        sorted.len(),
        caps.len()
    )
}

fn criterion_8() -> Outcome {
    let mut fails = Vec::new();
    let mut seen = 0;
    for n in 1..=6u64 {
        for k in 1..=n {
            seen += 1;
            let ones = CapVector::ones(n as usize);
            let fat = FatSliceSpec::new(0, k, ones.clone()).unwrap();
            let thin = ehrhart_formula(&fat_to_thin(&fat));
            let u = uniform_independence_ehrhart(k, n).unwrap();
            if u != thin {
                fails.push(format!("U_{{{k},{n}}}: {u} vs thin {thin}"));
            }
            if !all_coefficients_positive(&u) {
                fails.push(format!("U_{{{k},{n}}}: nonpositive {u}"));
            }
            for t in 1..=2u64 {
                let oracle: BigInt = level_counts(&ones, t).into_iter().take((k * t + 1) as usize).sum();
                let direct = BigInt::from(fat_brute_count(&fat, t));
                if direct != oracle || rat(oracle.clone()) != u.eval_int(t as i64) {
                    fails.push(format!("U_{{{k},{n}}} t={t}: polynomial {}, direct {direct}, oracle {oracle}", u.eval_int(t as i64)));
                }
            }
        }
    }
    outcome(seen, fails)
}

fn criterion_9() -> Outcome {
    let caps = caps_upto(4, 3);
    let polys: Vec<Vec<RatPoly>> = caps
        .par_iter()
        .map(|c| {
            let mut cache = NumberCache::new();
            (1..c.total()).map(|k| ehrhart_formula_with(&SliceSpec::new(k, c.clone()).unwrap(), &mut cache)).collect()
        })
        .collect();
    let mut fails = Vec::new();
    let mut seen = 0;
    for (i, c) in caps.iter().enumerate() {
        for (j, d) in caps.iter().enumerate() {
            if i == j || !c.dominated_by(d) {
                continue;
            }
            for k in 1..c.total() {
                seen += 1;
                let (p, q) = (&polys[i][k as usize - 1], &polys[j][k as usize - 1]);
                if !coefficientwise_le(p, q) {
                    fails.push(format!("k={k} c=({c}) c'=({d}): {p} vs {q}"));
                }
            }
        }
    }
    outcome(seen, fails)
}

fn interlace_partner(c: &CapVector) -> Option<CapVector> {
    let mut v = c.entries().to_vec();
    let last = v.last_mut()?;
    if *last < 2 {
        return None;
    }
    *last -= 1;
    v.push(1);
    CapVector::new(v).ok()
}

fn criterion_10() -> Outcome {
    let caps = caps_upto(5, 3);
    let unit: Vec<(usize, Vec<String>)> = caps
        .par_iter()
        .map(|c| {
            let fails = (0..c.len())
                .filter_map(|m| {
                    let p = w_generating_poly(m, c);
                    let r = unit_circle_check(&p, ROOT_TOL);
                    (!r.pass()).then(|| format!("unit circle m={m} c=({c}): p = {p}, {r:?}"))
                })
                .collect();
            (c.len(), fails)
        })
        .collect();
    let slices = SliceSpec::grid(5, 3);
    let hstars: Vec<Vec<String>> = slices
        .par_iter()
        .map(|s| {
            let mut fails = Vec::new();
            let p = hstar_series(s).unwrap();
            if !real_rooted_check(&p) {
                fails.push(format!("real-rooted k={} c=({}): h* = {p}", s.k, s.c));
            }
            if let Some(partner) = interlace_partner(&s.c) {
                let q = hstar_series(&SliceSpec::new(s.k, partner.clone()).unwrap()).unwrap();
                let verdict = interlace_check(&p, &q);
                if verdict != InterlaceVerdict::Interlacing {
                    let common = gcd(&p.to_rat(), &q.to_rat());
                    let why = if common.degree().unwrap_or(0) > 0 { format!("common factor {common}") } else { "no common root".into() };
                    fails.push(format!("interlace k={} c=({}) c'=({partner}): {p} vs {q}: {verdict:?}, {why}", s.k, s.c));
                }
            }
            fails
        })
        .collect();
    let seen = unit.iter().map(|u| u.0).sum::<usize>() + slices.len();
    let mut fails: Vec<String> = unit.into_iter().flat_map(|u| u.1).collect();
    fails.extend(hstars.into_iter().flatten());
    let notes: Vec<String> = fails.iter().map(|f| format!("counterexample: {f}")).collect();
    let mut o = outcome(seen, fails);
    o.notes = notes;
    o
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Ehrhart formula matches lattice counts (n<=5, c_i<=4, t=0..n)", criterion_1),
        ("per-coefficient assembly equals formula, all coefficients positive", criterion_2),
        ("W-number formula equals enumeration, Lah specialization and row sums", criterion_3),
        ("weighted permutation <-> Lah partition round trip (n<=6)", criterion_4),
        ("h* by winding numbers equals h* by series (n<=5, c_i<=3)", criterion_5),
        ("hypersimplex volumes are Eulerian numbers, volume = h*(1)", criterion_6),
        ("flag Eulerian numbers: enumeration = convolution = volume (n<=4, c_i<=3)", criterion_7),
        ("uniform matroid independence polytopes via fat-to-thin (n<=6)", criterion_8),
        ("Ehrhart coefficients are monotone in c (n<=4, c_i<=3)", criterion_9),
        ("root-location scans: unit circle, real-rooted, interlacing (n<=5, c_i<=3)", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let status = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        println!("{status} criterion {:>2}: {name}: {} [{:.1}s]", i + 1, o.detail, start.elapsed().as_secs_f64());
        for note in &o.notes {
            println!("      {note}");
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
