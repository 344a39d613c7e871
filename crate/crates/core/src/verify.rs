//! Brute-force checks of the sieve's claims at finite bounds.
//!
//! The scan side of every check walks pairs with plain nested loops and
//! reduces with its own Euclid; it never calls the closed forms it is
//! checking. Range checks split their domain into contiguous pieces that run
//! on the rayon pool and are merged in order, so a report does not depend on
//! the partition count.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{phi_inverse, Fraction};
use crate::error::{domain, Result};
use crate::qenum::{q_rank, q_unrank, QEnumeration};
use crate::sieve::{count_new_denominators, first_appearance, DistinctFractions, FirstAppearances};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub input: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_name: String,
    pub bound: String,
    pub passed: bool,
    /// All failures, including those past the counterexample cap.
    pub failures: u64,
    pub counterexamples: Vec<Counterexample>,
    pub items_tested: u64,
    pub metrics: Vec<Metric>,
}

impl CheckReport {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics
            .iter()
            .find(|m| m.name == name)
            .map(|m| m.value)
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}",
            self.check_name,
            self.bound,
            if self.passed { "PASS" } else { "FAIL" },
            self.items_tested
        )
    }
}

/// Summary line, then one indented line per counterexample and metric.
impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary_line())?;
        for c in &self.counterexamples {
            writeln!(f, "  {c}")?;
        }
        if self.failures > self.counterexamples.len() as u64 {
            writeln!(
                f,
                "  ... {} more failures",
                self.failures - self.counterexamples.len() as u64
            )?;
        }
        for m in &self.metrics {
            writeln!(f, "  {} = {}", m.name, m.value)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Findings {
    cap: usize,
    failures: u64,
    examples: Vec<Counterexample>,
}

impl Findings {
    fn new(cap: usize) -> Self {
        Findings {
            cap,
            failures: 0,
            examples: Vec::new(),
        }
    }

    fn fail(
        &mut self,
        input: impl fmt::Display,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) {
        self.failures += 1;
        if self.examples.len() < self.cap {
            self.examples.push(Counterexample {
                input: input.to_string(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }

    fn check<T: PartialEq + fmt::Display>(
        &mut self,
        input: impl fmt::Display,
        expected: T,
        actual: T,
    ) {
        if expected != actual {
            self.fail(input, expected, actual);
        }
    }

    fn merge(mut self, other: Findings) -> Findings {
        self.failures += other.failures;
        for e in other.examples {
            if self.examples.len() == self.cap {
                break;
            }
            self.examples.push(e);
        }
        self
    }

    fn into_report(
        self,
        name: &str,
        bound: String,
        items_tested: u64,
        metrics: Vec<Metric>,
    ) -> CheckReport {
        CheckReport {
            check_name: name.to_string(),
            bound,
            passed: self.failures == 0,
            failures: self.failures,
            counterexamples: self.examples,
            items_tested,
            metrics,
        }
    }
}

fn euclid(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Splits `lo..=hi` into at most `parts` contiguous ranges.
fn split(lo: i64, hi: i64, parts: usize) -> Vec<(i64, i64)> {
    if hi < lo {
        return Vec::new();
    }
    let len = (hi - lo + 1) as u64;
    let parts = (parts.max(1) as u64).min(len);
    (0..parts)
        .map(|k| {
            let a = lo + (len * k / parts) as i64;
            let b = lo + (len * (k + 1) / parts) as i64 - 1;
            (a, b)
        })
        .collect()
}

/// Runs the checks with a counterexample cap and a partition count.
#[derive(Debug, Clone)]
pub struct Verifier {
    pub counterexample_cap: usize,
    pub partitions: usize,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier {
            counterexample_cap: 10,
            partitions: rayon::current_num_threads(),
        }
    }
}

impl Verifier {
    pub fn new() -> Self {
        Self::default()
    }

    /// `gcd(p+q, p−q) ∈ {1, 2}` and `gcd(p+q, p−q) = gcd(p+q, 2q)` on every
    /// pair with `p <= max_p`.
    pub fn check_gcd_lemma(&self, max_p: i64) -> Result<CheckReport> {
        if max_p < 2 {
            return domain(format!("max_p = {max_p} leaves no pairs"));
        }
        let cap = self.counterexample_cap;
        let findings = split(2, max_p, self.partitions)
            .into_par_iter()
            .map(|(lo, hi)| {
                let mut f = Findings::new(cap);
                for p in lo..=hi {
                    for q in 1..p {
                        let g = euclid(p + q, p - q);
                        let via_2q = euclid(p + q, 2 * q);
                        let input = || format!("gcd({}, {}) for ({p}, {q})", p + q, p - q);
                        if g != via_2q {
                            f.fail(input(), format!("gcd({}, {}) = {via_2q}", p + q, 2 * q), g);
                        }
                        if g != 1 && g != 2 {
                            f.fail(input(), "1 or 2", g);
                        }
                    }
                }
                f
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Findings::new(cap), Findings::merge);
        let pairs = (max_p - 1) as u64 * max_p as u64 / 2;
        Ok(findings.into_report("gcd", format!("p <= {max_p}"), pairs, Vec::new()))
    }

    /// Scans every row through `p = max_d + 1`, where each `d <= max_d` has
    /// certainly occurred (as `2/(2d)` at `(d+1, d−1)`), and compares the first
    /// occurrence of each denominator with the index laws, then checks that
    /// the merged law order lists the same denominators in the same order.
    pub fn check_first_appearance(&self, max_d: i64) -> Result<CheckReport> {
        if max_d < 2 {
            return domain(format!("max_d = {max_d}; denominators start at 2"));
        }
        let last_row = max_d + 1;
        let ranges = split(2, last_row, self.partitions);
        // Row p holds p − 1 pairs; counted directly rather than by formula.
        let offsets: Vec<u64> = ranges
            .iter()
            .map(|&(lo, _)| (2..lo).map(|p| (p - 1) as u64).sum())
            .collect();
        let partial: Vec<HashMap<i64, (u64, i64)>> = ranges
            .par_iter()
            .zip(offsets.par_iter())
            .map(|(&(lo, hi), &offset)| {
                let mut firsts = HashMap::new();
                let mut index = offset;
                for p in lo..=hi {
                    for q in 1..p {
                        let g = euclid(p - q, p + q);
                        let den = (p + q) / g;
                        if den <= max_d {
                            firsts.entry(den).or_insert((index, (p - q) / g));
                        }
                        index += 1;
                    }
                }
                firsts
            })
            .collect();
        let scan_rows: u64 = (2..=last_row).map(|p| (p - 1) as u64).sum();
        let mut scanned: HashMap<i64, (u64, i64)> = HashMap::new();
        for part in partial {
            for (d, hit) in part {
                scanned.entry(d).or_insert(hit);
            }
        }

        let mut f = Findings::new(self.counterexample_cap);
        for d in 2..=max_d {
            let law = first_appearance(d)?;
            match scanned.get(&d) {
                None => f.fail(
                    format!("d = {d}"),
                    format!("index {}", law.index),
                    "never seen",
                ),
                Some(&(index, num)) => {
                    f.check(format!("first index of d = {d}"), law.index, index);
                    f.check(
                        format!("first value with d = {d}"),
                        format!("1/{d}"),
                        format!("{num}/{d}"),
                    );
                }
            }
        }

        let mut scan_order: Vec<(u64, i64)> = scanned.iter().map(|(&d, &(i, _))| (i, d)).collect();
        scan_order.sort_unstable();
        let last_first = scan_order.last().map_or(0, |&(i, _)| i);
        let merged: Vec<(u64, i64)> = FirstAppearances::new()
            .take_while(|fa| fa.index <= last_first)
            .filter(|fa| fa.d <= max_d)
            .map(|fa| (fa.index, fa.d))
            .collect();
        let mut emitted = HashSet::new();
        for &(_, d) in &merged {
            if !emitted.insert(d) {
                f.fail(
                    format!("merged order, d = {d}"),
                    "emitted once",
                    "emitted twice",
                );
            }
        }
        let law_indices: HashSet<u64> = merged.iter().map(|&(i, _)| i).collect();
        f.check(
            "distinct first-appearance indices",
            merged.len(),
            law_indices.len(),
        );
        f.check(
            "denominators in merged order",
            (max_d - 1) as usize,
            merged.len(),
        );
        if merged != scan_order {
            let at = merged
                .iter()
                .zip(&scan_order)
                .position(|(a, b)| a != b)
                .unwrap_or(merged.len().min(scan_order.len()));
            let show = |v: Option<&(u64, i64)>| {
                v.map_or("end".to_string(), |(i, d)| format!("d = {d} at {i}"))
            };
            f.fail(
                format!("position {at} of the first-appearance order"),
                show(scan_order.get(at)),
                show(merged.get(at)),
            );
        }
        let metrics = vec![
            Metric {
                name: "rows_scanned".into(),
                value: scan_rows as f64,
            },
            Metric {
                name: "last_first_index".into(),
                value: last_first as f64,
            },
        ];
        Ok(f.into_report(
            "first",
            format!("d <= {max_d}"),
            (max_d - 1) as u64,
            metrics,
        ))
    }

    /// Duplicate-free stream: distinct, reduced, inside `(0, 1)`, recovered by
    /// `phi_inverse`, and complete for every denominator it fully covers.
    pub fn check_bijection(&self, count: u64) -> Result<CheckReport> {
        if count < 1 {
            return domain("count must be at least 1");
        }
        let items: Vec<_> = DistinctFractions::new().take(count as usize).collect();
        let mut f = Findings::new(self.counterexample_cap);
        let mut values = HashSet::with_capacity(items.len());
        for item in &items {
            let v = item.value;
            let (p, q) = (item.pair.p(), item.pair.q());
            let g = euclid(p - q, p + q);
            f.check(
                format!("value at rank {}", item.rank),
                format!("{}/{}", (p - q) / g, (p + q) / g),
                v.to_string(),
            );
            if !(v.num() > 0 && v.num() < v.den()) {
                f.fail(format!("rank {}", item.rank), "value in (0, 1)", v);
            }
            if euclid(v.num(), v.den()) != 1 {
                f.fail(format!("rank {}", item.rank), "reduced", v);
            }
            if !values.insert(v) {
                f.fail(
                    format!("rank {}", item.rank),
                    "new value",
                    format!("repeat of {v}"),
                );
            }
            match phi_inverse(v) {
                Ok(pr) => f.check(format!("phi_inverse({v})"), item.pair, pr),
                Err(e) => f.fail(format!("phi_inverse({v})"), item.pair, e),
            }
        }
        // Rows through `complete_p` are fully present; the preimage of a/d
        // has p <= 2d − 1, so every d <= (complete_p + 1) / 2 is covered.
        let last = items.last().expect("count >= 1").pair;
        let complete_p = if last.q() == last.p() - 1 {
            last.p()
        } else {
            last.p() - 1
        };
        let covered = (complete_p + 1) / 2;
        let mut coverage_items = 0u64;
        for d in 2..=covered {
            for a in (1..d).filter(|&a| euclid(a, d) == 1) {
                coverage_items += 1;
                let r = Fraction::new(a, d)?;
                if !values.contains(&r) {
                    f.fail(format!("coverage of {r}"), "present", "missing");
                }
            }
        }
        let metrics = vec![
            Metric {
                name: "complete_p".into(),
                value: complete_p as f64,
            },
            Metric {
                name: "covered_denominator".into(),
                value: covered as f64,
            },
        ];
        Ok(f.into_report(
            "bijection",
            format!("first {count} distinct fractions, denominators <= {covered}"),
            count + coverage_items,
            metrics,
        ))
    }

    /// The first-occurrence subsequence of the first `count` rows equals the
    /// coprime-pair subsequence, and both equal the library's duplicate-free
    /// stream.
    pub fn check_dedup_coprime(&self, count: u64) -> Result<CheckReport> {
        if count < 1 {
            return domain("count must be at least 1");
        }
        let mut firsts = Vec::new();
        let mut coprime = Vec::new();
        let mut seen = HashSet::new();
        let mut rows = 0u64;
        'scan: for p in 2i64.. {
            for q in 1..p {
                if rows == count {
                    break 'scan;
                }
                rows += 1;
                let g = euclid(p - q, p + q);
                if seen.insert(((p - q) / g, (p + q) / g)) {
                    firsts.push((p, q));
                }
                if euclid(p, q) == 1 {
                    coprime.push((p, q));
                }
            }
        }
        let mut f = Findings::new(self.counterexample_cap);
        let show =
            |v: Option<&(i64, i64)>| v.map_or("end".to_string(), |(p, q)| format!("({p}, {q})"));
        if let Some(at) =
            (0..firsts.len().max(coprime.len())).find(|&k| firsts.get(k) != coprime.get(k))
        {
            f.fail(
                format!("position {at}: coprime filter"),
                show(firsts.get(at)),
                show(coprime.get(at)),
            );
        }
        let library: Vec<(i64, i64)> = DistinctFractions::new()
            .take(firsts.len())
            .map(|it| (it.pair.p(), it.pair.q()))
            .collect();
        if let Some(at) = (0..firsts.len()).find(|&k| firsts.get(k) != library.get(k)) {
            f.fail(
                format!("position {at}: distinct stream"),
                show(firsts.get(at)),
                show(library.get(at)),
            );
        }
        let metrics = vec![Metric {
            name: "distinct_values".into(),
            value: firsts.len() as f64,
        }];
        Ok(f.into_report("dedup", format!("first {count} rows"), count, metrics))
    }

    /// First `count` rationals of the ℚ enumeration: no repeats, rank/unrank
    /// round trips, and every `a/b` with `|a|, b <= B` present.
    pub fn check_q_enumeration(&self, count: u64) -> Result<CheckReport> {
        if count < 3 {
            return domain("count must be at least 3");
        }
        let mut f = Findings::new(self.counterexample_cap);
        let mut values = HashSet::with_capacity(count as usize);
        for entry in QEnumeration::new().take(count as usize) {
            let (n, v) = (entry.n, entry.value);
            if !values.insert(v) {
                f.fail(format!("n = {n}"), "new value", format!("repeat of {v}"));
            }
            match q_rank(v) {
                Ok(back) => f.check(format!("q_rank({v})"), n, back),
                Err(e) => f.fail(format!("q_rank({v})"), n, e),
            }
            match q_unrank(n) {
                Ok(u) => f.check(format!("q_unrank({n})"), v, u),
                Err(e) => f.fail(format!("q_unrank({n})"), v, e),
            }
        }
        // a/b lands at n <= 4j + 6, where j < c(max(|a|, b)) and c(P) counts
        // coprime pairs with p <= P. Take the largest B with 4c(B) + 3 <= count.
        let mut bound = 1i64;
        let mut pairs_through = 0u64;
        loop {
            let next = bound + 1;
            let row = (1..next).filter(|&q| euclid(next, q) == 1).count() as u64;
            if 4 * (pairs_through + row) + 3 > count {
                break;
            }
            pairs_through += row;
            bound = next;
        }
        let mut coverage_items = 0u64;
        for b in 1..=bound {
            for a in -bound..=bound {
                if euclid(a, b) != 1 {
                    continue;
                }
                coverage_items += 1;
                let r = Fraction::new(a, b)?;
                if !values.contains(&r) {
                    f.fail(format!("coverage of {r}"), "present", "missing");
                }
            }
        }
        let metrics = vec![Metric {
            name: "coverage_bound".into(),
            value: bound as f64,
        }];
        Ok(f.into_report(
            "q",
            format!("first {count} rationals, |num|, den <= {bound}"),
            count + coverage_items,
            metrics,
        ))
    }

    /// New-denominator counts from a scan against the closed-form count;
    /// reports `count / √i` for each positive `i`.
    pub fn check_density(&self, indices: &[u64]) -> Result<CheckReport> {
        let Some(&max_i) = indices.iter().max() else {
            return domain("no indices given");
        };
        let mut wanted: Vec<u64> = indices.to_vec();
        wanted.sort_unstable();
        wanted.dedup();
        let mut counts = HashMap::new();
        let mut seen = HashSet::new();
        let mut new = 0u64;
        let mut index = 0u64;
        let mut targets = wanted.iter().peekable();
        'scan: for p in 2i64.. {
            for q in 1..p {
                let g = euclid(p - q, p + q);
                if seen.insert((p + q) / g) {
                    new += 1;
                }
                while targets.next_if(|&&t| t == index).is_some() {
                    counts.insert(index, new);
                }
                if index == max_i {
                    break 'scan;
                }
                index += 1;
            }
        }
        let mut f = Findings::new(self.counterexample_cap);
        let mut metrics = Vec::new();
        for &i in indices {
            let closed = count_new_denominators(i);
            f.check(
                format!("new denominators through index {i}"),
                counts[&i],
                closed,
            );
            metrics.push(Metric {
                name: format!("count@{i}"),
                value: closed as f64,
            });
            if i > 0 {
                metrics.push(Metric {
                    name: format!("ratio@{i}"),
                    value: closed as f64 / (i as f64).sqrt(),
                });
            }
        }
        let shown: Vec<String> = indices.iter().map(u64::to_string).collect();
        Ok(f.into_report(
            "density",
            format!("i in {{{}}}", shown.join(",")),
            indices.len() as u64,
            metrics,
        ))
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: expected {}, got {}",
            self.input, self.expected, self.actual
        )
    }
}
