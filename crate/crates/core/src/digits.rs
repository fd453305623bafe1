//! Binary expansions: digit reversal, run-length profiles and continuants.

use std::fmt;

use crate::error::{Error, Result};

/// Proper base-2 expansion, most significant bit first. Never empty and
/// always starts with a 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryWord(Vec<u8>);

impl BinaryWord {
    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self) -> u64 {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | u64::from(b))
    }

    /// Bits strictly between the leading and the trailing bit, most
    /// significant first. Empty for one- and two-bit words.
    pub fn interior(&self) -> &[u8] {
        match self.0.len() {
            0..=2 => &[],
            n => &self.0[1..n - 1],
        }
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Lengths of the alternating 1-blocks and 0-blocks of an odd number,
/// most significant block first. Odd length, all entries positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RunProfile(Vec<u64>);

impl RunProfile {
    pub fn new(runs: Vec<u64>) -> Result<Self> {
        if runs.is_empty() {
            return Err(Error::EmptyRuns);
        }
        if runs.contains(&0) {
            return Err(Error::ZeroRun);
        }
        Ok(RunProfile(runs))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn reversed(&self) -> RunProfile {
        RunProfile(self.0.iter().rev().copied().collect())
    }
}

pub fn bits(n: u64) -> Result<BinaryWord> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    let len = bit_length(n);
    Ok(BinaryWord(
        (0..len).rev().map(|k| ((n >> k) & 1) as u8).collect(),
    ))
}

pub fn bit_length(n: u64) -> u32 {
    u64::BITS - n.leading_zeros()
}

/// Reads the binary expansion of `n` backwards. Trailing zeros of `n` become
/// leading zeros and vanish, so the result is always odd.
pub fn reverse(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    Ok(n.reverse_bits() >> n.leading_zeros())
}

pub fn runs(n: u64) -> Result<RunProfile> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenIndex(n));
    }
    let word = bits(n)?;
    let mut out = Vec::new();
    for chunk in word.as_slice().chunk_by(|a, b| a == b) {
        out.push(chunk.len() as u64);
    }
    Ok(RunProfile(out))
}

/// Numerator of the continued fraction `[k_0; k_1, ..., k_r]` via
/// `p_t = k_t p_{t-1} + p_{t-2}` with `p_{-1} = 1`, `p_0 = k_0`.
pub fn continuant_numerator(ks: &RunProfile) -> Result<u64> {
    let (first, rest) = ks.0.split_first().ok_or(Error::EmptyRuns)?;
    let (mut prev, mut cur) = (1u64, *first);
    for &k in rest {
        let next = k
            .checked_mul(cur)
            .and_then(|v| v.checked_add(prev))
            .ok_or(Error::Overflow("continuant"))?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

pub fn is_power_of_two(t: u64) -> bool {
    t.is_power_of_two()
}
