//! Range checkers for the identities relating Stern polynomials, digit
//! reversal, transition matrices, continuants and hyperbinary expansions.
//!
//! Every checker collects counterexamples instead of stopping at the first
//! one. A [`Verifier`] carries the digit matrices it checks against, so the
//! whole harness can be pointed at a deliberately corrupted `A(1)` to show
//! that each check is able to fail.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bipoly::BiPoly;
use crate::digits::{bit_length, continuant_numerator, is_power_of_two, reverse, runs};
use crate::error::{Error, Result};
use crate::hyperbinary::{h_counts_enum, h_counts_recurrence, HCount, HCountTable};
use crate::stern::{
    stern_poly, stern_poly_matrix_with, stern_value, PolyVec2, SternTable, Transitions,
};

pub const DEFAULT_FAIL_LIMIT: usize = 10;

/// Largest index for which range checks precompute a bottom-up table; past
/// this, polynomials are computed top-down per index.
const TABLE_LIMIT: u64 = 1 << 21;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    #[serde(skip)]
    pub key: u64,
    pub instance: String,
    pub expected: String,
    pub actual: String,
}

impl Failure {
    fn new(
        key: u64,
        instance: impl Into<String>,
        expected: impl ToString,
        actual: impl ToString,
    ) -> Self {
        Failure {
            key,
            instance: instance.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: u64,
    /// The first failures by instance, at most the verifier's fail limit.
    pub failures: Vec<Failure>,
    /// Total number of failing instances, including those not kept.
    pub failure_count: u64,
    pub elapsed: Duration,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    checked: u64,
    failures: &'a [Failure],
    elapsed_ms: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// Deterministic text form; elapsed time is left out.
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "checked: {}, failures: {}\n",
            self.checked, self.failure_count
        );
        for f in &self.failures {
            let _ = writeln!(
                out,
                "  {}: expected {}, got {}",
                f.instance, f.expected, f.actual
            );
        }
        let hidden = self
            .failure_count
            .saturating_sub(self.failures.len() as u64);
        if hidden > 0 {
            let _ = writeln!(out, "  ... {hidden} more");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&JsonReport {
            checked: self.checked,
            failures: &self.failures,
            elapsed_ms: self.elapsed.as_millis() as u64,
        })
        .expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReversalMode {
    Polynomial,
    Integer,
}

enum Outcome {
    Skip,
    Pass,
    Fail(Failure),
}

impl Outcome {
    fn compare<T: PartialEq + ToString>(
        key: u64,
        instance: impl Into<String>,
        expected: T,
        actual: T,
    ) -> Self {
        if expected == actual {
            Outcome::Pass
        } else {
            Outcome::Fail(Failure::new(
                key,
                instance,
                expected.to_string(),
                actual.to_string(),
            ))
        }
    }

    fn error(key: u64, instance: impl Into<String>, err: Error) -> Self {
        Outcome::Fail(Failure::new(
            key,
            instance,
            "a value",
            format!("error: {err}"),
        ))
    }
}

#[derive(Default)]
struct Tally {
    checked: u64,
    failure_count: u64,
    failures: Vec<Failure>,
}

/// Where the checkers get `s_n` from.
enum PolySource<'a> {
    Table(SternTable),
    TopDown,
    Descent(&'a Transitions),
}

impl PolySource<'_> {
    fn poly(&self, n: u64) -> Result<BiPoly> {
        match self {
            PolySource::Table(t) => t.get(n).cloned().map_or_else(|| stern_poly(n), Ok),
            PolySource::TopDown => stern_poly(n),
            PolySource::Descent(t) => t.pair(n).map(|p| p.lo),
        }
    }

    fn value(&self, n: u64) -> Result<u64> {
        match self {
            PolySource::Descent(t) => {
                let v = t.pair(n)?.lo.eval(1, 1)?;
                u64::try_from(v).map_err(|_| Error::Overflow("stern value"))
            }
            _ => stern_value(n),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Verifier {
    transitions: Transitions,
    workers: usize,
    fail_limit: usize,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier {
            transitions: Transitions::standard(),
            workers: 1,
            fail_limit: DEFAULT_FAIL_LIMIT,
        }
    }
}

impl Verifier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_fail_limit(mut self, limit: usize) -> Self {
        self.fail_limit = limit;
        self
    }

    /// Checks against the given digit matrices instead of `A(0)`, `A(1)`.
    pub fn with_transitions(mut self, transitions: Transitions) -> Self {
        self.transitions = transitions;
        self
    }

    pub fn transitions(&self) -> &Transitions {
        &self.transitions
    }

    fn source(&self, max: u64) -> Result<PolySource<'_>> {
        if !self.transitions.is_standard() {
            Ok(PolySource::Descent(&self.transitions))
        } else if max <= TABLE_LIMIT {
            Ok(PolySource::Table(SternTable::build(max)?))
        } else {
            Ok(PolySource::TopDown)
        }
    }

    /// Runs `check` over `lo..=hi` split into contiguous blocks, one per
    /// worker. Blocks are merged in index order, so the report does not
    /// depend on the number of workers.
    fn scan<F>(&self, lo: u64, hi: u64, check: F) -> Tally
    where
        F: Fn(u64) -> Outcome + Sync,
    {
        let run_block = |a: u64, b: u64| {
            let mut tally = Tally::default();
            for n in a..=b {
                match check(n) {
                    Outcome::Skip => continue,
                    Outcome::Pass => {}
                    Outcome::Fail(f) => {
                        tally.failure_count += 1;
                        if tally.failures.len() < self.fail_limit {
                            tally.failures.push(f);
                        }
                    }
                }
                tally.checked += 1;
            }
            tally
        };

        let span = hi - lo;
        let workers = (self.workers as u64).min(span.saturating_add(1)).max(1);
        if workers == 1 {
            return run_block(lo, hi);
        }
        let block = span / workers + 1;
        let tallies: Vec<Tally> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .filter_map(|w| {
                    let a = lo.checked_add(w * block)?;
                    (a <= hi).then(|| {
                        let b = a.saturating_add(block - 1).min(hi);
                        let run_block = &run_block;
                        scope.spawn(move || run_block(a, b))
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("verification worker panicked"))
                .collect()
        });

        let mut merged = Tally::default();
        for t in tallies {
            merged.checked += t.checked;
            merged.failure_count += t.failure_count;
            merged.failures.extend(t.failures);
        }
        merged.failures.sort_by_key(|f| f.key);
        merged.failures.truncate(self.fail_limit);
        merged
    }

    fn finish(&self, tally: Tally, start: Instant) -> VerifyReport {
        VerifyReport {
            checked: tally.checked,
            failures: tally.failures,
            failure_count: tally.failure_count,
            elapsed: start.elapsed(),
        }
    }

    /// `s_n = s_{n^R}` for every `n` in `lo..=hi`, either as polynomials or
    /// as integers.
    pub fn check_reversal_range(
        &self,
        lo: u64,
        hi: u64,
        mode: ReversalMode,
    ) -> Result<VerifyReport> {
        check_range(lo, hi)?;
        let start = Instant::now();
        let tally = match mode {
            ReversalMode::Polynomial => {
                // reverse(n) < 2^bitlen(hi) for n <= hi
                let needed = u64::MAX >> (64 - bit_length(hi));
                let source = self.source(needed)?;
                self.scan(lo, hi, |n| {
                    let r = reverse(n).expect("n >= 1");
                    let instance = format!("n={n} (n^R={r})");
                    match (source.poly(r), source.poly(n)) {
                        (Ok(expected), Ok(actual)) => {
                            Outcome::compare(n, instance, expected, actual)
                        }
                        (Err(e), _) | (_, Err(e)) => Outcome::error(n, instance, e),
                    }
                })
            }
            ReversalMode::Integer => {
                let source = if self.transitions.is_standard() {
                    PolySource::TopDown
                } else {
                    PolySource::Descent(&self.transitions)
                };
                self.scan(lo, hi, |n| {
                    let r = reverse(n).expect("n >= 1");
                    let instance = format!("n={n} (n^R={r})");
                    match (source.value(r), source.value(n)) {
                        (Ok(expected), Ok(actual)) => {
                            Outcome::compare(n, instance, expected, actual)
                        }
                        (Err(e), _) | (_, Err(e)) => Outcome::error(n, instance, e),
                    }
                })
            }
        };
        Ok(self.finish(tally, start))
    }

    /// The eight row-vector identities for `A = A(0)`, `B = A(1)`:
    ///
    /// ```text
    /// (x y) P Q          = a (x y) + b (x y) Q
    /// (1 1) P^T Q^T      = a (1 1) + b (1 1) Q^T
    /// ```
    ///
    /// with `(a, b)` equal to `(-y, y+1)`, `(x, y)`, `(y, x)`, `(-x, x+1)` for
    /// `PQ = AA, AB, BA, BB`.
    pub fn check_lemma_identities(&self) -> VerifyReport {
        let start = Instant::now();
        let x = BiPoly::x();
        let y = BiPoly::y();
        let one = BiPoly::one();
        let families = [
            ("A", "A", 0u8, 0u8, -&y, &y + &one),
            ("A", "B", 0, 1, x.clone(), y.clone()),
            ("B", "A", 1, 0, y.clone(), x.clone()),
            ("B", "B", 1, 1, -&x, &x + &one),
        ];
        let mut tally = Tally::default();
        let mut key = 0;
        for (pn, qn, p, q, alpha, beta) in families {
            let p = self.transitions.get(p).expect("bit");
            let q = self.transitions.get(q).expect("bit");
            let sides = [
                (
                    format!("(x y){pn}{qn}"),
                    PolyVec2::xy(),
                    p.clone(),
                    q.clone(),
                ),
                (
                    format!("(1 1)t{pn}t{qn}"),
                    PolyVec2::ones(),
                    p.transpose(),
                    q.transpose(),
                ),
            ];
            for (instance, v, p, q) in sides {
                let outcome = (|| -> Result<Outcome> {
                    let lhs = v.try_times(&p)?.try_times(&q)?;
                    let rhs = v
                        .try_scale(&alpha)?
                        .try_add(&v.try_times(&q)?.try_scale(&beta)?)?;
                    Ok(Outcome::compare(
                        key,
                        instance.clone(),
                        rhs.to_string(),
                        lhs.to_string(),
                    ))
                })()
                .unwrap_or_else(|e| Outcome::error(key, instance, e));
                tally.checked += 1;
                if let Outcome::Fail(f) = outcome {
                    tally.failure_count += 1;
                    if tally.failures.len() < self.fail_limit {
                        tally.failures.push(f);
                    }
                }
                key += 1;
            }
        }
        self.finish(tally, start)
    }

    /// `(x y) A(e_1)...A(e_k) (1 1)^T == (1 1) A(e_1)^T...A(e_k)^T (x y)^T`.
    pub fn check_reflection_product(&self, eps: &[u8]) -> Result<bool> {
        Ok(self.transitions.forward_product(eps)? == self.transitions.transposed_product(eps)?)
    }

    /// [`Self::check_reflection_product`] on every 0/1 word of length at
    /// most `max_len`, the empty word included.
    pub fn check_reflection_words(&self, max_len: u32) -> Result<VerifyReport> {
        if max_len > 40 {
            return Err(Error::InvalidRange {
                lo: 0,
                hi: u64::from(max_len),
            });
        }
        let start = Instant::now();
        // word id: (1 << len) + value - 1 orders words by length, then value
        let last = (1u64 << (max_len + 1)) - 2;
        let tally = self.scan(0, last, |id| {
            let len = bit_length(id + 1) - 1;
            let value = (id + 1) - (1 << len);
            let word: Vec<u8> = (0..len).rev().map(|k| ((value >> k) & 1) as u8).collect();
            let instance = if word.is_empty() {
                "()".to_string()
            } else {
                word.iter().map(|b| char::from(b'0' + b)).collect()
            };
            match (
                self.transitions.forward_product(&word),
                self.transitions.transposed_product(&word),
            ) {
                (Ok(lhs), Ok(rhs)) => Outcome::compare(id, instance, rhs, lhs),
                (Err(e), _) | (_, Err(e)) => Outcome::error(id, instance, e),
            }
        });
        Ok(self.finish(tally, start))
    }

    /// The matrix product over interior bits agrees with the recurrence for
    /// every odd `n` in `lo..=hi`.
    pub fn check_matrix_range(&self, lo: u64, hi: u64) -> Result<VerifyReport> {
        check_range(lo, hi)?;
        let start = Instant::now();
        let reference = if hi <= TABLE_LIMIT {
            PolySource::Table(SternTable::build(hi)?)
        } else {
            PolySource::TopDown
        };
        let tally = self.scan(lo, hi, |n| {
            if n.is_multiple_of(2) {
                return Outcome::Skip;
            }
            let instance = format!("n={n}");
            match (
                reference.poly(n),
                stern_poly_matrix_with(n, &self.transitions),
            ) {
                (Ok(expected), Ok(actual)) => Outcome::compare(n, instance, expected, actual),
                (Err(e), _) | (_, Err(e)) => Outcome::error(n, instance, e),
            }
        });
        Ok(self.finish(tally, start))
    }

    /// For each `n`: the polynomial read off the expansions of `n - 1`
    /// equals `s_n`, and the enumerated counts equal the recurrence counts.
    pub fn check_oracle_equivalence(&self, lo: u64, hi: u64) -> Result<VerifyReport> {
        check_range(lo, hi)?;
        let start = Instant::now();
        let source = self.source(hi)?;
        let counts = if hi <= TABLE_LIMIT {
            Some(HCountTable::build(hi)?)
        } else {
            None
        };
        let tally = self.scan(lo, hi, |n| {
            let enumerated = match h_counts_enum(n) {
                Ok(h) => h,
                Err(e) => return Outcome::error(n, format!("n={n}"), e),
            };
            let poly = match (enumerated.to_poly(), source.poly(n)) {
                (Ok(from_enum), Ok(s_n)) => (from_enum, s_n),
                (Err(e), _) | (_, Err(e)) => return Outcome::error(n, format!("n={n}"), e),
            };
            if poly.0 != poly.1 {
                return Outcome::compare(n, format!("n={n} polynomial"), poly.0, poly.1);
            }
            let recurrence = match counts.as_ref().and_then(|t| t.get(n)) {
                Some(h) => h,
                None => match h_counts_recurrence(n) {
                    Ok(h) => h,
                    Err(e) => return Outcome::error(n, format!("n={n}"), e),
                },
            };
            Outcome::compare(n, format!("n={n} counts"), enumerated, recurrence)
        });
        Ok(self.finish(tally, start))
    }

    /// For odd `n`: `s_n(1,1)` is the continuant of the run profile of `n`,
    /// and that continuant is unchanged by reversing the profile.
    pub fn check_continuant_range(&self, lo: u64, hi: u64) -> Result<VerifyReport> {
        check_range(lo, hi)?;
        let start = Instant::now();
        let source = if self.transitions.is_standard() {
            PolySource::TopDown
        } else {
            PolySource::Descent(&self.transitions)
        };
        let tally = self.scan(lo, hi, |n| {
            if n.is_multiple_of(2) {
                return Outcome::Skip;
            }
            let instance = format!("n={n}");
            let check = || -> Result<Outcome> {
                let profile = runs(n)?;
                let forward = continuant_numerator(&profile)?;
                let backward = continuant_numerator(&profile.reversed())?;
                let value = source.value(n)?;
                if value != forward {
                    return Ok(Outcome::compare(n, instance.clone(), forward, value));
                }
                Ok(Outcome::compare(
                    n,
                    format!("{instance} reversed runs"),
                    forward,
                    backward,
                ))
            };
            check().unwrap_or_else(|e| Outcome::error(n, instance.clone(), e))
        });
        Ok(self.finish(tally, start))
    }

    /// `h_t(0, 0)` is 1 exactly when `t` is a power of two and absent
    /// otherwise, for `1 <= t <= hi`.
    pub fn check_power_of_two_clause(&self, hi: u64) -> Result<VerifyReport> {
        check_range(1, hi)?;
        let start = Instant::now();
        let table = if self.transitions.is_standard() && hi <= TABLE_LIMIT {
            Some(HCountTable::build(hi)?)
        } else {
            None
        };
        let counts = |t: u64| -> Result<HCount> {
            if !self.transitions.is_standard() {
                let p = self.transitions.pair(t)?.lo;
                return HCount::from_poly(t, &p).ok_or(Error::Overflow("negative count"));
            }
            match table.as_ref().and_then(|tab| tab.get(t)) {
                Some(h) => Ok(h),
                None => h_counts_recurrence(t),
            }
        };
        let tally = self.scan(1, hi, |t| {
            let instance = format!("t={t}");
            match counts(t) {
                Ok(h) => {
                    let expected = if is_power_of_two(t) { "1" } else { "absent" };
                    let actual = if h.contains(0, 0) {
                        h.get(0, 0).to_string()
                    } else {
                        "absent".to_string()
                    };
                    Outcome::compare(t, instance, expected.to_string(), actual)
                }
                Err(e) => Outcome::error(t, instance, e),
            }
        });
        Ok(self.finish(tally, start))
    }
}

fn check_range(lo: u64, hi: u64) -> Result<()> {
    if lo == 0 || lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    Ok(())
}

pub fn check_reversal_range(lo: u64, hi: u64, mode: ReversalMode) -> Result<VerifyReport> {
    Verifier::default().check_reversal_range(lo, hi, mode)
}

pub fn check_lemma_identities() -> VerifyReport {
    Verifier::default().check_lemma_identities()
}

pub fn check_reflection_product(eps: &[u8]) -> Result<bool> {
    Verifier::default().check_reflection_product(eps)
}

pub fn check_oracle_equivalence(lo: u64, hi: u64) -> Result<VerifyReport> {
    Verifier::default().check_oracle_equivalence(lo, hi)
}

pub fn check_continuant_range(lo: u64, hi: u64) -> Result<VerifyReport> {
    Verifier::default().check_continuant_range(lo, hi)
}

pub fn check_power_of_two_clause(hi: u64) -> Result<VerifyReport> {
    Verifier::default().check_power_of_two_clause(hi)
}

/// `A(1)` with the constant coefficient of its top-right entry flipped from
/// 0 to 1, i.e. `y` becomes `y + 1`. Every checker in this module detects it.
pub fn corrupted_transitions() -> Transitions {
    Transitions::standard()
        .with_entry(1, 0, 1, &BiPoly::y() + &BiPoly::one())
        .expect("1 is a bit")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversal_examples() {
        for n in [11, 19, 1] {
            let r = check_reversal_range(n, n, ReversalMode::Polynomial).unwrap();
            assert_eq!((r.checked, r.failure_count), (1, 0));
        }
        let r = check_reversal_range(1, 3000, ReversalMode::Integer).unwrap();
        assert!(r.passed());
        assert_eq!(r.checked, 3000);
        assert!(check_reversal_range(0, 5, ReversalMode::Integer).is_err());
        assert!(check_reversal_range(6, 5, ReversalMode::Integer).is_err());
    }

    #[test]
    fn lemma_holds_and_can_fail() {
        let r = check_lemma_identities();
        assert_eq!(r.checked, 8);
        assert!(r.passed(), "{}", r.render_text());
        assert_eq!(r.render_text(), "checked: 8, failures: 0\n");

        let bumped = Transitions::standard()
            .with_entry(1, 1, 1, BiPoly::constant(2))
            .unwrap();
        let r = Verifier::new()
            .with_transitions(bumped)
            .check_lemma_identities();
        assert!(r.failure_count >= 1);
    }

    #[test]
    fn reflection_examples() {
        assert!(check_reflection_product(&[]).unwrap());
        assert!(check_reflection_product(&[1, 0]).unwrap());
        let t = Transitions::standard();
        assert_eq!(
            t.forward_product(&[1, 0]).unwrap(),
            "x^2 + x*y + y^2 + x^2*y + x*y^2".parse().unwrap()
        );
        assert!(check_reflection_product(&[2]).is_err());
        let r = Verifier::new().check_reflection_words(6).unwrap();
        assert_eq!(r.checked, 127);
        assert!(r.passed());
    }

    #[test]
    fn oracle_continuant_powers() {
        let r = check_oracle_equivalence(21, 21).unwrap();
        assert_eq!((r.checked, r.failure_count), (1, 0));
        assert!(check_oracle_equivalence(1, 300).unwrap().passed());
        for n in [11, 7, 1] {
            let r = check_continuant_range(n, n).unwrap();
            assert_eq!((r.checked, r.failure_count), (1, 0));
        }
        let r = check_continuant_range(2, 2).unwrap();
        assert_eq!(r.checked, 0);
        assert!(check_power_of_two_clause(4096).unwrap().passed());
        assert!(check_power_of_two_clause(0).is_err());
    }

    #[test]
    fn workers_do_not_change_reports() {
        let bad = corrupted_transitions();
        for workers in [1, 2, 3, 7] {
            let v = Verifier::new()
                .with_transitions(bad.clone())
                .with_workers(workers)
                .with_fail_limit(4);
            let r = v
                .check_reversal_range(1, 500, ReversalMode::Polynomial)
                .unwrap();
            let base = Verifier::new()
                .with_transitions(bad.clone())
                .with_fail_limit(4)
                .check_reversal_range(1, 500, ReversalMode::Polynomial)
                .unwrap();
            assert_eq!(r.render_text(), base.render_text());
            assert_eq!(r.failures.len(), 4);
        }
    }

    #[test]
    fn fail_limit_caps_listing_not_count() {
        let v = Verifier::new()
            .with_transitions(corrupted_transitions())
            .with_fail_limit(2);
        let r = v.check_power_of_two_clause(100).unwrap();
        assert_eq!(r.failures.len(), 2);
        assert!(r.failure_count > 2);
        assert!(r.render_text().contains("more"));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["checked"], 100);
        assert_eq!(json["failures"].as_array().unwrap().len(), 2);
        assert!(json["elapsed_ms"].is_u64());
    }
}
