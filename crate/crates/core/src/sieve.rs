//! The imbalance sieve: pairs in lexicographic order, their reduced
//! imbalances, and when each denominator shows up for the first time.
//!
//! Denominator `d >= 2` first appears as the unit fraction `1/d`, at
//!
//! ```text
//! I(d) = (d² − 9) / 8        d odd,  pair ((d+1)/2, (d−1)/2)
//! I(d) = d(d+1)/2 − 2        d even, pair (d+1, d−1)
//! ```
//!
//! `d = 1` never occurs, since every imbalance lies strictly inside `(0, 1)`.

use crate::arith::{imbalance, iteration_index, pair_from_index, phi_inverse, Fraction, Pair};
use crate::error::{domain, Error, Result};
use crate::totient::{self, coprime_count_upto, distinct_prime_factors, TotientTable};

/// One row of the sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveItem {
    pub index: u64,
    pub pair: Pair,
    pub value: Fraction,
    /// No earlier row has the same reduced denominator.
    pub is_new_denominator: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FirstAppearance {
    pub d: i64,
    pub index: u64,
    pub pair: Pair,
    /// Always `1/d`.
    pub value: Fraction,
}

/// Growable bit set over denominators.
#[derive(Debug, Default, Clone)]
struct DenominatorSet {
    words: Vec<u64>,
}

impl DenominatorSet {
    /// Returns true if `d` was not already present.
    fn insert(&mut self, d: u64) -> bool {
        let (word, bit) = ((d / 64) as usize, d % 64);
        if word >= self.words.len() {
            self.words.resize((word + 1).max(self.words.len() * 2), 0);
        }
        let mask = 1u64 << bit;
        let fresh = self.words[word] & mask == 0;
        self.words[word] |= mask;
        fresh
    }
}

fn next_pair(pair: Pair) -> Option<Pair> {
    let (p, q) = (pair.p(), pair.q());
    if q + 1 < p {
        Pair::new(p, q + 1).ok()
    } else {
        Pair::new(p.checked_add(1)?, 1).ok()
    }
}

/// Last index of the row `p` must be addressable for the row to be emitted.
fn row_is_addressable(p: i64) -> bool {
    Pair::new(p, p - 1).and_then(iteration_index).is_ok()
}

/// Sieve rows in index order, with first-appearance flags.
///
/// A stream that starts past index 0 seeds its seen-set from the closed-form
/// index laws, so its flags agree with a scan from the beginning.
#[derive(Debug, Clone)]
pub struct SieveStream {
    next: Option<Pair>,
    index: u64,
    remaining: Option<u64>,
    seen: DenominatorSet,
}

impl SieveStream {
    /// Unbounded stream from `start`; ends where indices stop being
    /// representable.
    pub fn from_index(start: u64) -> Result<SieveStream> {
        let pair = pair_from_index(start)?;
        let mut seen = DenominatorSet::default();
        for d in denominators_seen_before(start) {
            seen.insert(d);
        }
        Ok(SieveStream {
            next: Some(pair).filter(|pr| row_is_addressable(pr.p())),
            index: start,
            remaining: None,
            seen,
        })
    }
}

/// Denominators whose first appearance precedes `start`.
fn denominators_seen_before(start: u64) -> impl Iterator<Item = u64> {
    let below = move |d: i64| first_appearance_index(d).is_ok_and(|i| i < start);
    let odd = (3..).step_by(2).take_while(move |&d| below(d));
    let even = (2..).step_by(2).take_while(move |&d| below(d));
    odd.chain(even).map(|d| d as u64)
}

impl Iterator for SieveStream {
    type Item = SieveItem;

    fn next(&mut self) -> Option<SieveItem> {
        if self.remaining == Some(0) {
            return None;
        }
        let pair = self.next?;
        let value = imbalance(pair).ok()?;
        let item = SieveItem {
            index: self.index,
            pair,
            value,
            is_new_denominator: self.seen.insert(value.den() as u64),
        };
        self.next = next_pair(pair).filter(|pr| pr.q() > 1 || row_is_addressable(pr.p()));
        self.index += 1;
        if let Some(r) = self.remaining.as_mut() {
            *r -= 1;
        }
        Some(item)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        match self.remaining {
            Some(r) => (r as usize, Some(r as usize)),
            None => (0, None),
        }
    }
}

/// Rows `start .. start + count`.
pub fn sieve_stream(start: u64, count: u64) -> Result<SieveStream> {
    if count > 0 {
        let last = start
            .checked_add(count - 1)
            .ok_or(Error::Overflow("sieve_stream"))?;
        pair_from_index(last)?;
    }
    let mut stream = SieveStream::from_index(start)?;
    stream.remaining = Some(count);
    Ok(stream)
}

/// Index at which reduced denominator `d` first occurs.
pub fn first_appearance_index(d: i64) -> Result<u64> {
    if d < 2 {
        return domain(format!(
            "denominator {d} never occurs; d must be at least 2"
        ));
    }
    let overflow = Error::Overflow("first_appearance_index");
    let index = if d % 2 == 1 {
        (d.checked_mul(d).ok_or(overflow)? - 9) / 8
    } else {
        d.checked_mul(d + 1).ok_or(overflow)? / 2 - 2
    };
    Ok(index as u64)
}

/// The pair at [`first_appearance_index`]`(d)`.
pub fn first_appearance_pair(d: i64) -> Result<Pair> {
    if d < 2 {
        return domain(format!(
            "denominator {d} never occurs; d must be at least 2"
        ));
    }
    if d % 2 == 1 {
        Pair::new(d / 2 + 1, d / 2)
    } else {
        let p = d
            .checked_add(1)
            .ok_or(Error::Overflow("first_appearance_pair"))?;
        Pair::new(p, d - 1)
    }
}

pub fn first_appearance(d: i64) -> Result<FirstAppearance> {
    Ok(FirstAppearance {
        d,
        index: first_appearance_index(d)?,
        pair: first_appearance_pair(d)?,
        value: Fraction::new(1, d)?,
    })
}

/// First appearances in index order, merged from the odd and even laws.
///
/// The merge stops as soon as either progression leaves the `i64` range, so
/// every emitted record is in its true position.
#[derive(Debug, Clone)]
pub struct FirstAppearances {
    odd: Option<FirstAppearance>,
    even: Option<FirstAppearance>,
}

impl Default for FirstAppearances {
    fn default() -> Self {
        FirstAppearances {
            odd: first_appearance(3).ok(),
            even: first_appearance(2).ok(),
        }
    }
}

impl FirstAppearances {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Iterator for FirstAppearances {
    type Item = FirstAppearance;

    fn next(&mut self) -> Option<FirstAppearance> {
        let (odd, even) = (self.odd?, self.even?);
        // The two laws never produce the same index for d >= 2.
        debug_assert_ne!(odd.index, even.index);
        let slot = if odd.index <= even.index {
            &mut self.odd
        } else {
            &mut self.even
        };
        let out = *slot;
        *slot = out
            .and_then(|fa| fa.d.checked_add(2))
            .and_then(|d| first_appearance(d).ok());
        out
    }
}

pub fn first_appearance_order(count: usize) -> Result<Vec<FirstAppearance>> {
    let out: Vec<_> = FirstAppearances::new().take(count).collect();
    if out.len() < count {
        return Err(Error::Overflow("first_appearance_order"));
    }
    Ok(out)
}

/// Number of denominators whose first appearance is at or before index `i`.
pub fn count_new_denominators(i: u64) -> u64 {
    let i = i as u128;
    // Odd d >= 3 with d² <= 8i + 9.
    let s = (8 * i + 9).isqrt();
    let odd = (s - 1) / 2;
    // Even d >= 2 with d(d+1) <= 2i + 4.
    let t = ((4 * (2 * i + 4) + 1).isqrt() - 1) / 2;
    let even = t / 2;
    (odd + even) as u64
}

/// One entry of the duplicate-free stream of `(0, 1) ∩ ℚ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistinctFraction {
    pub rank: u64,
    pub pair: Pair,
    pub value: Fraction,
}

/// The sieve restricted to the first occurrence of each value, which is the
/// subsequence of coprime pairs.
#[derive(Debug, Clone)]
pub struct DistinctFractions {
    next: Option<Pair>,
    rank: u64,
}

impl Default for DistinctFractions {
    fn default() -> Self {
        DistinctFractions {
            next: Pair::new(2, 1).ok(),
            rank: 0,
        }
    }
}

impl DistinctFractions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rank(rank: u64) -> Result<Self> {
        let first = fraction_at_rank(rank)?;
        Ok(DistinctFractions {
            next: Some(first.pair),
            rank,
        })
    }
}

impl Iterator for DistinctFractions {
    type Item = DistinctFraction;

    fn next(&mut self) -> Option<DistinctFraction> {
        let pair = self.next?;
        let value = imbalance(pair).ok()?;
        let mut following = next_pair(pair);
        while let Some(pr) = following {
            if pr.is_coprime() {
                break;
            }
            following = next_pair(pr);
        }
        self.next = following;
        let item = DistinctFraction {
            rank: self.rank,
            pair,
            value,
        };
        self.rank = self.rank.checked_add(1)?;
        Some(item)
    }
}

pub fn distinct_fractions(count: usize) -> Vec<DistinctFraction> {
    DistinctFractions::new().take(count).collect()
}

/// Position of `r` in [`DistinctFractions`].
///
/// With `(p, q) = phi_inverse(r)`, this is `φ(2) + … + φ(p−1)` plus the number
/// of `q' < q` coprime to `p`.
pub fn fraction_rank(r: Fraction) -> Result<u64> {
    fraction_rank_with(totient::shared(), r)
}

pub fn fraction_rank_with(table: &TotientTable, r: Fraction) -> Result<u64> {
    let pair = phi_inverse(r)?;
    let (p, q) = (pair.p() as u64, pair.q() as u64);
    let before_row = table.summatory(p - 1)? - 1;
    let in_row = coprime_count_upto(&distinct_prime_factors(p), q - 1);
    before_row
        .checked_add(in_row)
        .ok_or(Error::Overflow("fraction_rank"))
}

/// Inverse of [`fraction_rank`].
pub fn fraction_at_rank(rank: u64) -> Result<DistinctFraction> {
    fraction_at_rank_with(totient::shared(), rank)
}

pub fn fraction_at_rank_with(table: &TotientTable, rank: u64) -> Result<DistinctFraction> {
    // Ranks through row p: Φ(p) − 1. Find the first row reaching past `rank`.
    let target = rank
        .checked_add(1)
        .ok_or(Error::Overflow("fraction_at_rank"))?;
    // A summatory value past u64 is certainly past the target.
    let passes = |n: u64| match table.summatory(n) {
        Ok(v) => Ok(v > target),
        Err(Error::Overflow(_)) => Ok(true),
        Err(e) => Err(e),
    };
    let mut lo = 1u64;
    let mut hi = 2u64;
    while !passes(hi)? {
        lo = hi;
        hi = hi
            .checked_mul(2)
            .ok_or(Error::Overflow("fraction_at_rank"))?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if passes(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let p = hi;
    let offset = rank - (table.summatory(p - 1)? - 1);
    let primes = distinct_prime_factors(p);
    // Smallest q with exactly offset + 1 coprimes in [1, q].
    let (mut lo, mut hi) = (0u64, p - 1);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if coprime_count_upto(&primes, mid) > offset {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let p = i64::try_from(p).map_err(|_| Error::Overflow("fraction_at_rank"))?;
    let pair = Pair::new(p, hi as i64)?;
    Ok(DistinctFraction {
        rank,
        pair,
        value: imbalance(pair)?,
    })
}
