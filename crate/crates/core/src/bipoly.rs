//! Sparse bivariate polynomials in `x` and `y` with exact integer coefficients.
//!
//! Terms are kept in canonical order (total degree ascending, then the power
//! of `x` descending) with zero coefficients removed, so structural equality
//! is polynomial equality. Coefficients are `i64` and every arithmetic step is
//! checked: overflow is reported as [`Error::Overflow`], never wrapped.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The monomial `x^i y^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { i: 0, j: 0 };

    pub fn new(i: u32, j: u32) -> Self {
        Monomial { i, j }
    }

    pub fn degree(self) -> u64 {
        u64::from(self.i) + u64::from(self.j)
    }

    fn checked_mul(self, other: Monomial) -> Result<Monomial> {
        let i = self
            .i
            .checked_add(other.i)
            .ok_or(Error::Overflow("exponent"))?;
        let j = self
            .j
            .checked_add(other.j)
            .ok_or(Error::Overflow("exponent"))?;
        Ok(Monomial { i, j })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.i.cmp(&self.i))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BiPoly {
    terms: Vec<(Monomial, i64)>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(1, 0, 1)
    }

    /// `c * x^i * y^j`
    pub fn monomial(c: i64, i: u32, j: u32) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            BiPoly {
                terms: vec![(Monomial::new(i, j), c)],
            }
        }
    }

    /// Builds a polynomial from arbitrary `(i, j, c)` triples, summing repeated
    /// exponent pairs.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32, i64)>,
    {
        let mut acc = BTreeMap::new();
        for (i, j, c) in terms {
            accumulate(&mut acc, Monomial::new(i, j), c)?;
        }
        Ok(Self::from_map(acc))
    }

    fn from_map(map: BTreeMap<Monomial, i64>) -> Self {
        BiPoly {
            terms: map.into_iter().filter(|&(_, c)| c != 0).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order as `(i, j, c)`.
    pub fn terms(&self) -> impl ExactSizeIterator<Item = (u32, u32, i64)> + '_ {
        self.terms.iter().map(|&(m, c)| (m.i, m.j, c))
    }

    /// `[x^i y^j] p`
    pub fn coeff(&self, i: u32, j: u32) -> i64 {
        let key = Monomial::new(i, j);
        self.terms
            .binary_search_by(|(m, _)| m.cmp(&key))
            .map(|idx| self.terms[idx].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.last().map(|(m, _)| m.degree())
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.iter().all(|&(_, c)| c > 0)
    }

    pub fn try_add(&self, other: &BiPoly) -> Result<BiPoly> {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ma, ca)), Some(&&(mb, cb))) => match ma.cmp(&mb) {
                    Ordering::Less => {
                        out.push((ma, ca));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((mb, cb));
                        b.next();
                    }
                    Ordering::Equal => {
                        let c = ca.checked_add(cb).ok_or(Error::Overflow("add"))?;
                        if c != 0 {
                            out.push((ma, c));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => {
                    out.extend(a);
                    break;
                }
                (None, Some(_)) => {
                    out.extend(b);
                    break;
                }
                (None, None) => break,
            }
        }
        Ok(BiPoly { terms: out })
    }

    pub fn try_neg(&self) -> Result<BiPoly> {
        let terms = self
            .terms
            .iter()
            .map(|&(m, c)| c.checked_neg().map(|c| (m, c)))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::Overflow("neg"))?;
        Ok(BiPoly { terms })
    }

    pub fn try_sub(&self, other: &BiPoly) -> Result<BiPoly> {
        self.try_add(&other.try_neg()?)
    }

    pub fn try_mul(&self, other: &BiPoly) -> Result<BiPoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(BiPoly::zero());
        }
        if let [(m, c)] = other.terms[..] {
            return self.try_mul_term(m, c);
        }
        if let [(m, c)] = self.terms[..] {
            return other.try_mul_term(m, c);
        }
        let mut acc = BTreeMap::new();
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &other.terms {
                let c = ca.checked_mul(cb).ok_or(Error::Overflow("mul"))?;
                accumulate(&mut acc, ma.checked_mul(mb)?, c)?;
            }
        }
        Ok(Self::from_map(acc))
    }

    /// Multiplies by `x^i y^j`. Shifting preserves the canonical order.
    pub fn try_mul_monomial(&self, i: u32, j: u32) -> Result<BiPoly> {
        self.try_mul_term(Monomial::new(i, j), 1)
    }

    fn try_mul_term(&self, m: Monomial, c: i64) -> Result<BiPoly> {
        let terms = self
            .terms
            .iter()
            .map(|&(mt, ct)| {
                let ct = ct.checked_mul(c).ok_or(Error::Overflow("mul"))?;
                Ok((mt.checked_mul(m)?, ct))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BiPoly { terms })
    }

    /// Exact value at `(xv, yv)`.
    pub fn eval(&self, xv: i64, yv: i64) -> Result<i128> {
        let overflow = || Error::Overflow("eval");
        let mut total: i128 = 0;
        for &(m, c) in &self.terms {
            let xp = i128::from(xv).checked_pow(m.i).ok_or_else(overflow)?;
            let yp = i128::from(yv).checked_pow(m.j).ok_or_else(overflow)?;
            let term = i128::from(c)
                .checked_mul(xp)
                .and_then(|t| t.checked_mul(yp))
                .ok_or_else(overflow)?;
            total = total.checked_add(term).ok_or_else(overflow)?;
        }
        Ok(total)
    }

    pub fn canonical_text(&self) -> String {
        self.to_string()
    }
}

fn accumulate(acc: &mut BTreeMap<Monomial, i64>, m: Monomial, c: i64) -> Result<()> {
    let slot = acc.entry(m).or_insert(0);
    *slot = slot.checked_add(c).ok_or(Error::Overflow("add"))?;
    Ok(())
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: Monomial, abs: u64) -> fmt::Result {
    let mut factors = Vec::with_capacity(3);
    if abs != 1 || m == Monomial::ONE {
        factors.push(abs.to_string());
    }
    for (var, exp) in [("x", m.i), ("y", m.j)] {
        match exp {
            0 => {}
            1 => factors.push(var.to_string()),
            e => factors.push(format!("{var}^{e}")),
        }
    }
    f.write_str(&factors.join("*"))
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, &(m, c)) in self.terms.iter().enumerate() {
            match (idx, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_monomial(f, m, c.unsigned_abs())?;
        }
        Ok(())
    }
}

impl FromStr for BiPoly {
    type Err = Error;

    /// Parses the canonical text form, e.g. `"y + x^2 - 3*x*y"`. Term order
    /// and repeated monomials are accepted; the result is canonicalized.
    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(fail("empty input"));
        }
        let mut acc = BTreeMap::new();
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'-' => (true, &rest[1..]),
                b'+' if !first => (false, &rest[1..]),
                _ if first => (false, rest),
                _ => return Err(fail("expected '+' or '-' between terms")),
            };
            first = false;
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (term, tail) = body.split_at(end);
            if term.is_empty() {
                return Err(fail("empty term"));
            }
            let (m, c) = parse_term(term).map_err(|r| fail(&r))?;
            let c = if negative {
                c.checked_neg().ok_or(Error::Overflow("parse"))?
            } else {
                c
            };
            accumulate(&mut acc, m, c)?;
            rest = tail;
        }
        Ok(Self::from_map(acc))
    }
}

fn parse_term(term: &str) -> std::result::Result<(Monomial, i64), String> {
    let mut coeff: Option<i64> = None;
    let mut m = Monomial::ONE;
    for factor in term.split('*') {
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => (
                b,
                e.parse::<u32>()
                    .map_err(|_| format!("bad exponent in {factor:?}"))?,
            ),
            None => (factor, 1),
        };
        match base {
            "x" => m.i = m.i.checked_add(exp).ok_or("exponent overflow")?,
            "y" => m.j = m.j.checked_add(exp).ok_or("exponent overflow")?,
            digits if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) => {
                if coeff.is_some() || factor.contains('^') {
                    return Err(format!("unexpected factor {factor:?}"));
                }
                coeff = Some(
                    digits
                        .parse::<i64>()
                        .map_err(|_| format!("coefficient {digits:?} out of range"))?,
                );
            }
            _ => return Err(format!("unexpected factor {factor:?}")),
        }
    }
    Ok((m, coeff.unwrap_or(1)))
}

// Operator forms panic on overflow, like primitive integer arithmetic in
// debug builds. Use the `try_*` methods where overflow is plausible.

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        self.try_add(rhs).expect("BiPoly addition overflowed")
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self.try_sub(rhs).expect("BiPoly subtraction overflowed")
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        self.try_mul(rhs).expect("BiPoly multiplication overflowed")
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.try_neg().expect("BiPoly negation overflowed")
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    i: u32,
    j: u32,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    terms: Vec<JsonTerm>,
}

/// `{"terms":[{"i":I,"j":J,"c":"C"},...]}` in canonical order, coefficients
/// as decimal strings.
impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        JsonPoly {
            terms: self
                .terms()
                .map(|(i, j, c)| JsonTerm {
                    i,
                    j,
                    c: c.to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = JsonPoly::deserialize(deserializer)?;
        let terms = raw
            .terms
            .into_iter()
            .map(|t| {
                t.c.parse::<i64>()
                    .map(|c| (t.i, t.j, c))
                    .map_err(|_| D::Error::custom(format!("bad coefficient {:?}", t.c)))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        BiPoly::from_terms(terms).map_err(D::Error::custom)
    }
}
