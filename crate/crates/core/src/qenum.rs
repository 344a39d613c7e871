//! A bijection between the naturals and all of ℚ built on the Cayley
//! transform `x ↦ (1+x)/(1−x)`, which carries `(−1, 1)` onto `(0, ∞)`.
//!
//! With `f_j` the `j`-th entry of the duplicate-free sieve stream, let
//! `x_{2j} = f_j` and `x_{2j+1} = −f_j`; this lists `(−1, 1) ∩ ℚ` without 0.
//! The enumeration is then
//!
//! ```text
//! 0, 1, −1, C(x_0), −C(x_0), C(x_1), −C(x_1), …
//! ```
//!
//! Zero is left out of the `x` list because `C(0) = 1` is already emitted.

use crate::arith::Fraction;
use crate::error::{Error, Result};
use crate::sieve::{fraction_at_rank, fraction_rank, DistinctFractions};

/// `(1 + x) / (1 − x)`.
pub fn cayley(x: Fraction) -> Result<Fraction> {
    if x == Fraction::ONE {
        return Err(Error::Pole("cayley", "x = 1"));
    }
    let (n, d) = (x.num() as i128, x.den() as i128);
    Fraction::from_i128(d + n, d - n, "cayley")
}

/// `(r − 1) / (r + 1)`.
pub fn cayley_inverse(r: Fraction) -> Result<Fraction> {
    if r == Fraction::MINUS_ONE {
        return Err(Error::Pole("cayley_inverse", "r = -1"));
    }
    let (n, d) = (r.num() as i128, r.den() as i128);
    Fraction::from_i128(n - d, n + d, "cayley_inverse")
}

/// `−x`. Only fails for a numerator of `i64::MIN`.
pub fn negate(x: Fraction) -> Result<Fraction> {
    let num = x.num().checked_neg().ok_or(Error::Overflow("negate"))?;
    Fraction::new(num, x.den())
}

/// `1 / x`.
pub fn invert(x: Fraction) -> Result<Fraction> {
    if x.is_zero() {
        return Err(Error::Pole("invert", "x = 0"));
    }
    Fraction::from_i128(x.den() as i128, x.num() as i128, "invert")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QEntry {
    pub n: u64,
    pub value: Fraction,
}

/// The `n`-th rational of the enumeration.
pub fn q_unrank(n: u64) -> Result<Fraction> {
    match n {
        0 => return Ok(Fraction::ZERO),
        1 => return Ok(Fraction::ONE),
        2 => return Ok(Fraction::MINUS_ONE),
        _ => {}
    }
    let m = n - 3;
    let k = m / 2;
    let f = fraction_at_rank(k / 2)?.value;
    let x = if k.is_multiple_of(2) { f } else { negate(f)? };
    let r = cayley(x)?;
    if m.is_multiple_of(2) {
        Ok(r)
    } else {
        negate(r)
    }
}

/// Position of `r` in the enumeration.
pub fn q_rank(r: Fraction) -> Result<u64> {
    if r.is_zero() {
        return Ok(0);
    }
    if r == Fraction::ONE {
        return Ok(1);
    }
    if r == Fraction::MINUS_ONE {
        return Ok(2);
    }
    let x = cayley_inverse(r.abs()?)?;
    let j = fraction_rank(x.abs()?)?;
    let overflow = Error::Overflow("q_rank");
    let k = j
        .checked_mul(2)
        .and_then(|v| v.checked_add(u64::from(x.signum() < 0)))
        .ok_or(overflow.clone())?;
    k.checked_mul(2)
        .and_then(|v| v.checked_add(3 + u64::from(r.signum() < 0)))
        .ok_or(overflow)
}

/// Sequential walk of the enumeration from `n = 0`.
#[derive(Debug, Clone)]
pub struct QEnumeration {
    n: u64,
    source: DistinctFractions,
    pending: [Fraction; 4],
    used: usize,
}

impl Default for QEnumeration {
    fn default() -> Self {
        QEnumeration {
            n: 0,
            source: DistinctFractions::new(),
            pending: [Fraction::ZERO; 4],
            used: 4,
        }
    }
}

impl QEnumeration {
    pub fn new() -> Self {
        Self::default()
    }

    fn refill(&mut self) -> Option<()> {
        let f = self.source.next()?.value;
        // C(−f) = 1/C(f).
        let r = cayley(f).ok()?;
        let s = invert(r).ok()?;
        self.pending = [r, negate(r).ok()?, s, negate(s).ok()?];
        self.used = 0;
        Some(())
    }
}

impl Iterator for QEnumeration {
    type Item = QEntry;

    fn next(&mut self) -> Option<QEntry> {
        let value = match self.n {
            0 => Fraction::ZERO,
            1 => Fraction::ONE,
            2 => Fraction::MINUS_ONE,
            _ => {
                if self.used == self.pending.len() {
                    self.refill()?;
                }
                self.used += 1;
                self.pending[self.used - 1]
            }
        };
        let entry = QEntry { n: self.n, value };
        self.n += 1;
        Some(entry)
    }
}
