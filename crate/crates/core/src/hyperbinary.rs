//! Hyperbinary expansions: sums `sum e_i 2^i` with digits `e_i` in {0, 1, 2}.
//!
//! `enumerate_expansions` lists them outright and is the brute-force oracle.
//! `h_counts_recurrence` tallies them by (number of 2s, number of 0s) without
//! listing, using the halving recurrence on the index.

use std::collections::BTreeMap;
use std::fmt;

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};

/// Proper hyperbinary expansion, most significant digit first: empty, or
/// with a nonzero leading digit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperExpansion(Vec<u8>);

impl HyperExpansion {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d > 2) {
            return Err(Error::InvalidDigit {
                digit: d,
                context: "hyperbinary expansion",
            });
        }
        if digits.first() == Some(&0) {
            return Err(Error::InvalidDigit {
                digit: 0,
                context: "leading position of a proper expansion",
            });
        }
        Ok(HyperExpansion(digits))
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn count_digit(&self, d: u8) -> u32 {
        self.0.iter().filter(|&&x| x == d).count() as u32
    }
}

impl fmt::Display for HyperExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for HyperExpansion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "()" {
            return Ok(HyperExpansion(Vec::new()));
        }
        let digits = s
            .bytes()
            .map(|b| match b {
                b'0'..=b'2' => Ok(b - b'0'),
                other => Err(Error::InvalidDigit {
                    digit: other,
                    context: "hyperbinary expansion text",
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        if digits.is_empty() {
            return Err(Error::Parse {
                input: s.to_string(),
                reason: "empty expansion is written \"()\"".to_string(),
            });
        }
        HyperExpansion::new(digits)
    }
}

/// `sum e_i 2^i`, widened so that any expansion of a `u64` fits.
pub fn expansion_value(e: &HyperExpansion) -> u128 {
    e.0.iter().fold(0u128, |acc, &d| {
        acc.saturating_mul(2).saturating_add(u128::from(d))
    })
}

/// Every proper hyperbinary expansion of `m`, sorted lexicographically on
/// the MSB-first digit strings.
pub fn enumerate_expansions(m: u64) -> Vec<HyperExpansion> {
    let mut out = Vec::new();
    let mut suffix = Vec::new();
    expand(m, &mut suffix, &mut out);
    out.sort();
    out
}

// `suffix` holds the digits chosen so far, least significant first.
fn expand(m: u64, suffix: &mut Vec<u8>, out: &mut Vec<HyperExpansion>) {
    if m == 0 {
        let mut digits = suffix.clone();
        digits.reverse();
        out.push(HyperExpansion(digits));
        return;
    }
    if m % 2 == 1 {
        suffix.push(1);
        expand((m - 1) / 2, suffix, out);
        suffix.pop();
        return;
    }
    suffix.push(0);
    expand(m / 2, suffix, out);
    suffix.pop();
    suffix.push(2);
    expand((m - 2) / 2, suffix, out);
    suffix.pop();
}

/// `h_n(i, j)`: number of expansions of `n - 1` with `i` twos and `j` zeros.
/// Only nonzero counts are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HCount {
    pub n: u64,
    counts: BTreeMap<(u32, u32), u64>,
}

impl HCount {
    pub fn from_counts(n: u64, counts: impl IntoIterator<Item = ((u32, u32), u64)>) -> Self {
        HCount {
            n,
            counts: counts.into_iter().filter(|&(_, c)| c != 0).collect(),
        }
    }

    pub fn get(&self, i: u32, j: u32) -> u64 {
        self.counts.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn contains(&self, i: u32, j: u32) -> bool {
        self.counts.contains_key(&(i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> Result<u64> {
        self.counts
            .values()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or(Error::Overflow("h-count total"))
    }

    /// `sum h(i, j) x^i y^j`
    pub fn to_poly(&self) -> Result<BiPoly> {
        let terms = self
            .counts
            .iter()
            .map(|(&(i, j), &c)| {
                i64::try_from(c)
                    .map(|c| (i, j, c))
                    .map_err(|_| Error::Overflow("h-count coefficient"))
            })
            .collect::<Result<Vec<_>>>()?;
        BiPoly::from_terms(terms)
    }

    /// Reads counts off a polynomial; negative coefficients are rejected.
    pub fn from_poly(n: u64, p: &BiPoly) -> Option<Self> {
        let mut counts = BTreeMap::new();
        for (i, j, c) in p.terms() {
            counts.insert((i, j), u64::try_from(c).ok()?);
        }
        Some(HCount { n, counts })
    }
}

impl fmt::Display for HCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (idx, ((i, j), c)) in self.iter().enumerate() {
            if idx > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({i},{j}):{c}")?;
        }
        f.write_str("}")
    }
}

pub fn h_counts_enum(n: u64) -> Result<HCount> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    let mut counts = BTreeMap::new();
    for e in enumerate_expansions(n - 1) {
        *counts
            .entry((e.count_digit(2), e.count_digit(0)))
            .or_insert(0) += 1;
    }
    Ok(HCount { n, counts })
}

type Counts = BTreeMap<(u32, u32), u64>;

/// `h_{2m+1}` from `h_m` and `h_{m+1}`, line by line:
///
/// ```text
/// h(0, 0) = 0
/// h(i, 0) = h_m(i-1, 0)                     i >= 1
/// h(0, j) = h_{m+1}(0, j-1)                 j >= 1
/// h(i, j) = h_m(i-1, j) + h_{m+1}(i, j-1)   i, j >= 1
/// ```
fn odd_step(h_m: &Counts, h_m1: &Counts) -> Result<Counts> {
    let at = |c: &Counts, i: u32, j: u32| c.get(&(i, j)).copied().unwrap_or(0);
    let candidates: std::collections::BTreeSet<(u32, u32)> = h_m
        .keys()
        .map(|&(i, j)| (i + 1, j))
        .chain(h_m1.keys().map(|&(i, j)| (i, j + 1)))
        .collect();
    let mut out = Counts::new();
    for (i, j) in candidates {
        let value = match (i, j) {
            (0, 0) => 0,
            (i, 0) => at(h_m, i - 1, 0),
            (0, j) => at(h_m1, 0, j - 1),
            (i, j) => at(h_m, i - 1, j)
                .checked_add(at(h_m1, i, j - 1))
                .ok_or(Error::Overflow("h recurrence"))?,
        };
        if value != 0 {
            out.insert((i, j), value);
        }
    }
    Ok(out)
}

fn unit() -> Counts {
    Counts::from([((0, 0), 1)])
}

/// `h_n` from the recurrence alone, descending the bits of `n` with the pair
/// `(h_k, h_{k+1})`; `h_2k = h_k` is the even case.
pub fn h_counts_recurrence(n: u64) -> Result<HCount> {
    let word = crate::digits::bits(n)?;
    let (mut lo, mut hi) = (unit(), unit());
    for &b in &word.as_slice()[1..] {
        let mid = odd_step(&lo, &hi)?;
        if b == 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(HCount { n, counts: lo })
}

/// Bottom-up memo of `h_n` for `1 <= n <= max`, odd indices only.
#[derive(Debug, Clone)]
pub struct HCountTable {
    max: u64,
    odd: Vec<Counts>,
}

impl HCountTable {
    pub fn build(max: u64) -> Result<Self> {
        if max == 0 {
            return Err(Error::ZeroIndex);
        }
        let count = usize::try_from(max.div_ceil(2)).map_err(|_| Error::Overflow("table size"))?;
        let mut table = HCountTable {
            max,
            odd: Vec::with_capacity(count),
        };
        table.odd.push(unit());
        for m in 1..count as u64 {
            let next = odd_step(table.lookup(m), table.lookup(m + 1))?;
            table.odd.push(next);
        }
        Ok(table)
    }

    fn lookup(&self, n: u64) -> &Counts {
        let odd = n >> n.trailing_zeros();
        &self.odd[(odd / 2) as usize]
    }

    pub fn max(&self) -> u64 {
        self.max
    }

    pub fn get(&self, n: u64) -> Option<HCount> {
        (1..=self.max).contains(&n).then(|| HCount {
            n,
            counts: self.lookup(n).clone(),
        })
    }
}
