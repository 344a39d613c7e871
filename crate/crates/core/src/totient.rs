//! Euler's totient and its summatory function.
//!
//! A [`TotientTable`] holds prefix sums `Φ(n) = φ(1) + … + φ(n)` produced by a
//! linear sieve. The table is rebuilt at twice the size whenever a query runs
//! past its end, up to [`TotientTable::DEFAULT_CAP`]; queries beyond the cap
//! fall back to the recurrence
//!
//! ```text
//! Φ(n) = n(n+1)/2 − Σ_{k=2..n} Φ(⌊n/k⌋)
//! ```
//!
//! evaluated over the O(√n) distinct quotients, with table lookups for the
//! small ones.

use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use crate::error::{Error, Result};

pub struct TotientTable {
    cap: u64,
    prefix: RwLock<Vec<u64>>,
}

static SHARED: LazyLock<TotientTable> = LazyLock::new(TotientTable::new);

/// The process-wide table used by the rank functions.
pub fn shared() -> &'static TotientTable {
    &SHARED
}

impl Default for TotientTable {
    fn default() -> Self {
        Self::new()
    }
}

impl TotientTable {
    pub const DEFAULT_CAP: u64 = 1 << 21;
    const INITIAL_LEN: u64 = 1 << 10;

    pub fn new() -> Self {
        Self::with_cap(Self::DEFAULT_CAP)
    }

    /// A table that never sieves past `cap`.
    pub fn with_cap(cap: u64) -> Self {
        let cap = cap.max(16);
        TotientTable {
            cap,
            prefix: RwLock::new(linear_sieve_prefix(Self::INITIAL_LEN.min(cap))),
        }
    }

    /// Largest `n` currently answerable without extending.
    pub fn sieved_up_to(&self) -> u64 {
        self.prefix.read().unwrap().len() as u64 - 1
    }

    fn lookup(&self, n: u64) -> Option<u64> {
        if n > self.cap {
            return None;
        }
        if let Some(&v) = self.prefix.read().unwrap().get(n as usize) {
            return Some(v);
        }
        let mut guard = self.prefix.write().unwrap();
        if guard.len() as u64 <= n {
            let mut len = guard.len() as u64 - 1;
            while len < n {
                len = (len * 2).min(self.cap);
            }
            *guard = linear_sieve_prefix(len);
        }
        Some(guard[n as usize])
    }

    /// `φ(n)` for `n >= 1`; `φ(0)` is taken as 0.
    pub fn phi(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Ok(0);
        }
        Ok(self.summatory(n)? - self.summatory(n - 1)?)
    }

    /// `Φ(n) = Σ_{m=1..n} φ(m)`.
    pub fn summatory(&self, n: u64) -> Result<u64> {
        if let Some(v) = self.lookup(n) {
            return Ok(v);
        }
        let mut memo = HashMap::new();
        let v = self.summatory_large(n, &mut memo);
        u64::try_from(v).map_err(|_| Error::Overflow("totient summatory"))
    }

    fn summatory_large(&self, n: u64, memo: &mut HashMap<u64, u128>) -> u128 {
        if let Some(v) = self.lookup(n) {
            return v as u128;
        }
        if let Some(&v) = memo.get(&n) {
            return v;
        }
        let n128 = n as u128;
        let mut total = n128 * (n128 + 1) / 2;
        let mut k = 2u64;
        while k <= n {
            let quotient = n / k;
            let last = n / quotient;
            total -= (last - k + 1) as u128 * self.summatory_large(quotient, memo);
            k = last + 1;
        }
        memo.insert(n, total);
        total
    }
}

/// `Φ(0..=n)` via a linear (Euler) sieve.
fn linear_sieve_prefix(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut phi = vec![0u64; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    if n >= 1 {
        phi[1] = 1;
    }
    for i in 2..=n {
        if phi[i] == 0 {
            phi[i] = i as u64 - 1;
            primes.push(i);
        }
        for &p in &primes {
            let m = i * p;
            if m > n {
                break;
            }
            if i % p == 0 {
                phi[m] = phi[i] * p as u64;
                break;
            }
            phi[m] = phi[i] * (p as u64 - 1);
        }
    }
    let mut acc = 0u64;
    for v in phi.iter_mut() {
        acc += *v;
        *v = acc;
    }
    phi
}

/// Distinct prime factors of `n`, by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `#{1 <= y <= x : gcd(y, n) = 1}` by inclusion–exclusion over `primes`,
/// which must be the distinct prime factors of `n`.
pub fn coprime_count_upto(primes: &[u64], x: u64) -> u64 {
    let mut total: i128 = 0;
    for mask in 0u32..(1 << primes.len()) {
        let mut product = 1u64;
        let mut overflowed = false;
        for (bit, &p) in primes.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                match product.checked_mul(p) {
                    Some(v) if v <= x => product = v,
                    _ => {
                        overflowed = true;
                        break;
                    }
                }
            }
        }
        if overflowed {
            continue;
        }
        let term = (x / product) as i128;
        if mask.count_ones() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total as u64
}
