//! The `scan` command: conjecture checks over a grid, one JSONL record per
//! instance, resumable from an existing output file.

use std::collections::HashSet;
use std::io::{self, Write};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::int_poly_value;
use crate::counting::CapVector;
use crate::ehrhart::SliceSpec;
use crate::hstar::{
    hstar_series, interlace_check, real_rooted_check, unit_circle_check, w_generating_poly, InterlaceVerdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ScanCheck {
    /// Roots of the W-number generating polynomials on |z| = 1
    #[value(alias = "unit_circle")]
    UnitCircle,
    /// h*-polynomials are real-rooted
    #[value(alias = "real_rooted")]
    RealRooted,
    /// h*(R_{k,c}) and h*(R_{k,c'}) interlace, c' = (c_1,…,c_n − 1, 1)
    Interlace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub n: usize,
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    pub c: CapVector,
    pub poly: Value,
    pub check: ScanCheck,
    pub pass: bool,
    pub detail: Value,
}

type RecordKey = (ScanCheck, CapVector, Option<usize>, Option<u64>);

impl ScanRecord {
    fn key(&self) -> RecordKey {
        (self.check, self.c.clone(), self.m, self.k)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub written: usize,
    /// Instances already present in the output file.
    pub skipped: usize,
    /// Lines of the existing file that did not parse as records.
    pub ignored_lines: usize,
    pub passed: usize,
    /// Every failing record, old or new: potential counterexamples.
    pub failures: Vec<ScanRecord>,
}

impl ScanSummary {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} written, {} skipped, {} passed, {} failed\n",
            self.written,
            self.skipped,
            self.passed,
            self.failures.len()
        );
        for f in &self.failures {
            out.push_str(&format!("counterexample: {}\n", serde_json::to_string(f).expect("record serializes")));
        }
        out
    }
}

#[derive(Clone, Debug)]
struct Instance {
    check: ScanCheck,
    c: CapVector,
    m: Option<usize>,
    k: Option<u64>,
}

impl Instance {
    fn key(&self) -> RecordKey {
        (self.check, self.c.clone(), self.m, self.k)
    }
}

fn instances(check: ScanCheck, max_n: usize, max_c: u64) -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for c in CapVector::grid(n, max_c) {
            match check {
                ScanCheck::UnitCircle => {
                    out.extend((0..n).map(|m| Instance { check, c: c.clone(), m: Some(m), k: None }));
                }
                ScanCheck::RealRooted => {
                    out.extend((1..c.total()).map(|k| Instance { check, c: c.clone(), m: None, k: Some(k) }));
                }
                ScanCheck::Interlace if c.entries()[n - 1] >= 2 => {
                    out.extend((1..c.total()).map(|k| Instance { check, c: c.clone(), m: None, k: Some(k) }));
                }
                ScanCheck::Interlace => {}
            }
        }
    }
    out
}

/// `(c_1, …, c_{n−1}, c_n − 1, 1)`.
pub fn interlace_partner(c: &CapVector) -> Option<CapVector> {
    let mut v = c.entries().to_vec();
    let last = v.last_mut()?;
    if *last < 2 {
        return None;
    }
    *last -= 1;
    v.push(1);
    CapVector::new(v).ok()
}

fn evaluate(inst: &Instance, tol: f64) -> ScanRecord {
    let c = &inst.c;
    let n = c.len();
    let base = |poly: Value, pass: bool, detail: Value| ScanRecord {
        n,
        m: inst.m,
        k: inst.k,
        c: c.clone(),
        poly,
        check: inst.check,
        pass,
        detail,
    };
    match inst.check {
        ScanCheck::UnitCircle => {
            let p = w_generating_poly(inst.m.unwrap_or(0), c);
            let report = unit_circle_check(&p, tol);
            base(int_poly_value(&p), report.pass(), json!(report))
        }
        ScanCheck::RealRooted | ScanCheck::Interlace => {
            let s = SliceSpec { k: inst.k.unwrap_or(1), c: c.clone() };
            let p = match hstar_series(&s) {
                Ok(p) => p,
                Err(e) => return base(Value::Null, false, json!({"error": e.to_string()})),
            };
            if inst.check == ScanCheck::RealRooted {
                return base(int_poly_value(&p), real_rooted_check(&p), json!({"degree": p.degree()}));
            }
            let partner = interlace_partner(c).expect("instances have c_n ≥ 2");
            let q = match hstar_series(&SliceSpec { k: s.k, c: partner.clone() }) {
                Ok(q) => q,
                Err(e) => return base(int_poly_value(&p), false, json!({"error": e.to_string()})),
            };
            let verdict = interlace_check(&p, &q);
            let detail = json!({"c_prime": partner, "poly_prime": int_poly_value(&q), "verdict": verdict});
            base(int_poly_value(&p), verdict == InterlaceVerdict::Interlacing, detail)
        }
    }
}

/// Runs `checks` over `n ≤ max_n`, `c_i ≤ max_c`, skipping instances that
/// already have a record in `existing` (the current contents of the output),
/// and appends new records to `sink` one line at a time.
pub fn scan<W: Write + Send>(
    checks: &[ScanCheck],
    max_n: usize,
    max_c: u64,
    tol: f64,
    existing: &str,
    sink: &mut W,
) -> io::Result<ScanSummary> {
    let mut summary = ScanSummary::default();
    let mut done: HashSet<RecordKey> = HashSet::new();
    for line in existing.lines().filter(|l| !l.trim().is_empty()) {
        match serde_json::from_str::<ScanRecord>(line) {
            Ok(r) => {
                if done.insert(r.key()) && !r.pass {
                    summary.failures.push(r);
                }
            }
            Err(_) => summary.ignored_lines += 1,
        }
    }
    let todo: Vec<Instance> = checks
        .iter()
        .flat_map(|&check| instances(check, max_n, max_c))
        .filter(|inst| {
            let present = done.contains(&inst.key());
            summary.skipped += usize::from(present);
            !present
        })
        .collect();
    if !existing.is_empty() && !existing.ends_with('\n') {
        // an interrupted run left a partial line
        sink.write_all(b"\n")?;
    }

    let abort = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<ScanRecord>();
    let written = std::thread::scope(|scope| {
        let writer = scope.spawn(|| -> io::Result<(usize, usize, Vec<ScanRecord>)> {
            let (mut written, mut passed, mut failures) = (0, 0, Vec::new());
            for rec in rx {
                let line = serde_json::to_string(&rec).expect("record serializes");
                if let Err(e) = writeln!(sink, "{line}").and_then(|_| sink.flush()) {
                    abort.store(true, Ordering::Relaxed);
                    return Err(e);
                }
                written += 1;
                if rec.pass {
                    passed += 1;
                } else {
                    failures.push(rec);
                }
            }
            Ok((written, passed, failures))
        });
        todo.par_iter().for_each_with(tx, |tx, inst| {
            if !abort.load(Ordering::Relaxed) {
                let _ = tx.send(evaluate(inst, tol));
            }
        });
        writer.join().expect("writer thread does not panic")
    })?;
    summary.written = written.0;
    summary.passed = written.1;
    summary.failures.extend(written.2);
    Ok(summary)
}
