//! Stern polynomials `s_n(x, y)`.
//!
//! Two independent routes are provided: the defining recurrence
//! (`s_1 = 1`, `s_2n = s_n`, `s_2n+1 = x s_n + y s_n+1`), walked top-down
//! along the binary expansion of `n`, and the transition-matrix product
//! `(x y) A(e_1) ... A(e_k) (1 1)^T` over the interior bits of an odd `n`.

use std::fmt;

use crate::bipoly::BiPoly;
use crate::digits::bits;
use crate::error::{Error, Result};

/// Length-2 vector of polynomials, used both as a row and as a column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyVec2(pub [BiPoly; 2]);

impl PolyVec2 {
    pub fn new(a: BiPoly, b: BiPoly) -> Self {
        PolyVec2([a, b])
    }

    /// `(x y)`
    pub fn xy() -> Self {
        PolyVec2::new(BiPoly::x(), BiPoly::y())
    }

    /// `(1 1)`
    pub fn ones() -> Self {
        PolyVec2::new(BiPoly::one(), BiPoly::one())
    }

    /// Row vector times matrix.
    pub fn try_times(&self, m: &PolyMatrix2) -> Result<PolyVec2> {
        let col = |c: usize| -> Result<BiPoly> {
            self.0[0]
                .try_mul(&m.0[0][c])?
                .try_add(&self.0[1].try_mul(&m.0[1][c])?)
        };
        Ok(PolyVec2::new(col(0)?, col(1)?))
    }

    pub fn try_dot(&self, other: &PolyVec2) -> Result<BiPoly> {
        self.0[0]
            .try_mul(&other.0[0])?
            .try_add(&self.0[1].try_mul(&other.0[1])?)
    }

    pub fn try_scale(&self, k: &BiPoly) -> Result<PolyVec2> {
        Ok(PolyVec2::new(self.0[0].try_mul(k)?, self.0[1].try_mul(k)?))
    }

    pub fn try_add(&self, other: &PolyVec2) -> Result<PolyVec2> {
        Ok(PolyVec2::new(
            self.0[0].try_add(&other.0[0])?,
            self.0[1].try_add(&other.0[1])?,
        ))
    }
}

impl fmt::Display for PolyVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0[0], self.0[1])
    }
}

/// 2x2 matrix over [`BiPoly`], stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix2(pub [[BiPoly; 2]; 2]);

impl PolyMatrix2 {
    pub fn new(rows: [[BiPoly; 2]; 2]) -> Self {
        PolyMatrix2(rows)
    }

    pub fn identity() -> Self {
        PolyMatrix2([
            [BiPoly::one(), BiPoly::zero()],
            [BiPoly::zero(), BiPoly::one()],
        ])
    }

    pub fn entry(&self, row: usize, col: usize) -> &BiPoly {
        &self.0[row][col]
    }

    pub fn with_entry(mut self, row: usize, col: usize, value: BiPoly) -> Self {
        self.0[row][col] = value;
        self
    }

    pub fn transpose(&self) -> PolyMatrix2 {
        let [[a, b], [c, d]] = &self.0;
        PolyMatrix2([[a.clone(), c.clone()], [b.clone(), d.clone()]])
    }

    pub fn row(&self, r: usize) -> PolyVec2 {
        PolyVec2(self.0[r].clone())
    }

    pub fn try_mul(&self, other: &PolyMatrix2) -> Result<PolyMatrix2> {
        let cell = |r: usize, c: usize| -> Result<BiPoly> {
            self.0[r][0]
                .try_mul(&other.0[0][c])?
                .try_add(&self.0[r][1].try_mul(&other.0[1][c])?)
        };
        Ok(PolyMatrix2([
            [cell(0, 0)?, cell(0, 1)?],
            [cell(1, 0)?, cell(1, 1)?],
        ]))
    }

    /// Matrix times column vector.
    pub fn try_apply(&self, v: &PolyVec2) -> Result<PolyVec2> {
        Ok(PolyVec2::new(
            self.row(0).try_dot(v)?,
            self.row(1).try_dot(v)?,
        ))
    }
}

impl fmt::Display for PolyMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.0;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// `A(0) = [[1, 0], [x, y]]`, `A(1) = [[x, y], [0, 1]]`.
pub fn transition_matrix(bit: u8) -> Result<PolyMatrix2> {
    match bit {
        0 => Ok(PolyMatrix2([
            [BiPoly::one(), BiPoly::zero()],
            [BiPoly::x(), BiPoly::y()],
        ])),
        1 => Ok(PolyMatrix2([
            [BiPoly::x(), BiPoly::y()],
            [BiPoly::zero(), BiPoly::one()],
        ])),
        digit => Err(Error::InvalidDigit {
            digit,
            context: "transition matrix",
        }),
    }
}

/// The pair of digit matrices `A(0)`, `A(1)`. Swappable so that the
/// verification harness can be run against a corrupted copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transitions {
    zero: PolyMatrix2,
    one: PolyMatrix2,
}

impl Transitions {
    pub fn standard() -> Self {
        Transitions {
            zero: transition_matrix(0).expect("0 is a bit"),
            one: transition_matrix(1).expect("1 is a bit"),
        }
    }

    pub fn new(zero: PolyMatrix2, one: PolyMatrix2) -> Self {
        Transitions { zero, one }
    }

    pub fn get(&self, bit: u8) -> Result<&PolyMatrix2> {
        match bit {
            0 => Ok(&self.zero),
            1 => Ok(&self.one),
            digit => Err(Error::InvalidDigit {
                digit,
                context: "transition matrix",
            }),
        }
    }

    pub fn is_standard(&self) -> bool {
        *self == Self::standard()
    }

    /// Replaces one entry of `A(bit)`.
    pub fn with_entry(mut self, bit: u8, row: usize, col: usize, value: BiPoly) -> Result<Self> {
        let slot = match bit {
            0 => &mut self.zero,
            1 => &mut self.one,
            digit => {
                return Err(Error::InvalidDigit {
                    digit,
                    context: "transition matrix",
                })
            }
        };
        slot.0[row][col] = value;
        Ok(self)
    }

    /// `(x y) A(e_1) ... A(e_k) (1 1)^T`
    pub fn forward_product(&self, word: &[u8]) -> Result<BiPoly> {
        let mut row = PolyVec2::xy();
        for &b in word {
            row = row.try_times(self.get(b)?)?;
        }
        row.try_dot(&PolyVec2::ones())
    }

    /// `(1 1) A(e_1)^T ... A(e_k)^T (x y)^T`
    pub fn transposed_product(&self, word: &[u8]) -> Result<BiPoly> {
        let mut row = PolyVec2::ones();
        for &b in word {
            row = row.try_times(&self.get(b)?.transpose())?;
        }
        row.try_dot(&PolyVec2::xy())
    }

    /// `(s_n, s_n+1)` obtained as `A(e_0) A(e_1) ... (1 1)^T`, i.e. by
    /// applying the digit matrices from the top bit of `n` downwards.
    pub fn pair(&self, n: u64) -> Result<SternPair> {
        let word = bits(n)?;
        let mut v = PolyVec2::ones();
        for &b in &word.as_slice()[1..] {
            v = self.get(b)?.try_apply(&v)?;
        }
        let [lo, hi] = v.0;
        Ok(SternPair { index: n, lo, hi })
    }
}

impl Default for Transitions {
    fn default() -> Self {
        Self::standard()
    }
}

/// `(s_n, s_n+1)` for a given `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SternPair {
    pub index: u64,
    pub lo: BiPoly,
    pub hi: BiPoly,
}

/// `x * a + y * b`
fn mix(a: &BiPoly, b: &BiPoly) -> Result<BiPoly> {
    a.try_mul_monomial(1, 0)?
        .try_add(&b.try_mul_monomial(0, 1)?)
}

pub fn stern_pair(n: u64) -> Result<SternPair> {
    let word = bits(n)?;
    let (mut lo, mut hi) = (BiPoly::one(), BiPoly::one());
    for &b in &word.as_slice()[1..] {
        let mid = mix(&lo, &hi)?;
        if b == 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(SternPair { index: n, lo, hi })
}

pub fn stern_poly(n: u64) -> Result<BiPoly> {
    stern_pair(n).map(|p| p.lo)
}

/// `s_n` for odd `n` from the matrix product over the interior bits of `n`.
/// `n = 1` has no interior and is defined to be 1.
pub fn stern_poly_matrix(n: u64) -> Result<BiPoly> {
    stern_poly_matrix_with(n, &Transitions::standard())
}

pub fn stern_poly_matrix_with(n: u64, transitions: &Transitions) -> Result<BiPoly> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenIndex(n));
    }
    if n == 1 {
        return Ok(BiPoly::one());
    }
    transitions.forward_product(bits(n)?.interior())
}

/// The Stern sequence `s_n = s_n(1, 1)`, from the integer recurrence.
pub fn stern_value(n: u64) -> Result<u64> {
    let word = bits(n)?;
    let (mut lo, mut hi) = (1u64, 1u64);
    for &b in &word.as_slice()[1..] {
        let mid = lo.checked_add(hi).ok_or(Error::Overflow("stern value"))?;
        if b == 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

/// Bottom-up table of `s_n` for `1 <= n <= max`. Only odd indices are
/// stored; `s_2n = s_n` resolves the rest.
#[derive(Debug, Clone)]
pub struct SternTable {
    max: u64,
    odd: Vec<BiPoly>,
}

impl SternTable {
    pub fn build(max: u64) -> Result<Self> {
        if max == 0 {
            return Err(Error::ZeroIndex);
        }
        let count = usize::try_from(max.div_ceil(2)).map_err(|_| Error::Overflow("table size"))?;
        let mut table = SternTable {
            max,
            odd: Vec::with_capacity(count),
        };
        table.odd.push(BiPoly::one());
        for m in 1..count as u64 {
            // s_{2m+1}
            let next = mix(table.lookup(m), table.lookup(m + 1))?;
            table.odd.push(next);
        }
        Ok(table)
    }

    fn lookup(&self, n: u64) -> &BiPoly {
        let odd = n >> n.trailing_zeros();
        &self.odd[(odd / 2) as usize]
    }

    pub fn max(&self) -> u64 {
        self.max
    }

    pub fn get(&self, n: u64) -> Option<&BiPoly> {
        (1..=self.max).contains(&n).then(|| self.lookup(n))
    }
}
