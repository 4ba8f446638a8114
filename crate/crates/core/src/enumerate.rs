//! Exhaustive generators for permutations, set partitions and bounded
//! compositions. All elements are 1-based.

/// All permutations of `[n]` in one-line notation, lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (1..=n).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("pivot has a larger successor");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Cycle decomposition of a one-line permutation, each cycle starting at its
/// minimum and cycles sorted by minimum.
pub fn cycles_of(perm: &[usize]) -> Vec<Vec<usize>> {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    let mut cycles = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = perm[x - 1];
        }
        cycles.push(cycle);
    }
    cycles
}

/// All set partitions of `[n]`, blocks sorted by minimum, generated from
/// restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().max().map_or(0, |m| m + 1);
        let mut part = vec![Vec::new(); blocks];
        for (i, &b) in rgs.iter().enumerate() {
            part[b].push(i + 1);
        }
        out.push(part);

        // Advance the restricted growth string: rgs[i] ≤ 1 + max(rgs[..i]).
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for x in rgs.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Compositions `(p_1, …, p_m)` of `total` with `lo_i ≤ p_i ≤ hi_i`, in
/// lexicographic order. Bounds are applied while generating, so infeasible
/// prefixes are never visited.
#[derive(Clone, Debug)]
pub struct BoundedCompositions {
    lo: Vec<u64>,
    hi: Vec<u64>,
    lo_suffix: Vec<u64>,
    hi_suffix: Vec<u64>,
    total: u64,
    current: Option<Vec<u64>>,
    started: bool,
}

impl BoundedCompositions {
    pub fn new(lo: Vec<u64>, hi: Vec<u64>, total: u64) -> Self {
        assert_eq!(lo.len(), hi.len());
        let m = lo.len();
        let mut lo_suffix = vec![0u64; m + 1];
        let mut hi_suffix = vec![0u64; m + 1];
        for i in (0..m).rev() {
            lo_suffix[i] = lo_suffix[i + 1] + lo[i];
            hi_suffix[i] = hi_suffix[i + 1].saturating_add(hi[i]);
        }
        let feasible = lo.iter().zip(&hi).all(|(l, h)| l <= h) && lo_suffix[0] <= total && total <= hi_suffix[0];
        let mut it = BoundedCompositions { lo, hi, lo_suffix, hi_suffix, total, current: None, started: false };
        if feasible {
            let mut first = vec![0; m];
            it.fill_min(&mut first, 0, total);
            it.current = Some(first);
        }
        it
    }

    /// Upper bounds only (lower bounds zero).
    pub fn capped(hi: Vec<u64>, total: u64) -> Self {
        Self::new(vec![0; hi.len()], hi, total)
    }

    /// Lexicographically smallest completion of positions `from..` summing to `remaining`.
    fn fill_min(&self, parts: &mut [u64], from: usize, mut remaining: u64) {
        for i in from..parts.len() {
            let need = remaining.saturating_sub(self.hi_suffix[i + 1]);
            let v = need.max(self.lo[i]);
            parts[i] = v;
            remaining -= v;
        }
    }

    fn advance(&self, parts: &mut [u64]) -> bool {
        let m = parts.len();
        if m == 0 {
            return false;
        }
        let mut prefix: u64 = parts.iter().sum::<u64>() - parts[m - 1];
        for i in (0..m - 1).rev() {
            prefix -= parts[i];
            let bumped = parts[i] + 1;
            if bumped > self.hi[i] {
                continue;
            }
            let Some(rest) = self.total.checked_sub(prefix + bumped) else {
                continue;
            };
            if rest < self.lo_suffix[i + 1] || rest > self.hi_suffix[i + 1] {
                continue;
            }
            parts[i] = bumped;
            self.fill_min(parts, i + 1, rest);
            return true;
        }
        false
    }
}

impl Iterator for BoundedCompositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if !self.started {
            self.started = true;
            return self.current.clone();
        }
        let mut cur = self.current.take()?;
        if self.advance(&mut cur) {
            self.current = Some(cur.clone());
            Some(cur)
        } else {
            None
        }
    }
}
