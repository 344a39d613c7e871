//! Exact integer and rational primitives.
//!
//! Everything here is fixed-width `i64` arithmetic with explicit overflow
//! detection: an operation whose result (or a documented intermediate) leaves
//! the signed 64-bit range returns [`Error::Overflow`] instead of wrapping.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// Greatest common divisor of `|a|` and `|b|`, with `gcd(0, 0) = 0`.
pub fn gcd(a: i64, b: i64) -> u64 {
    gcd_u64(a.unsigned_abs(), b.unsigned_abs())
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A lattice point `(p, q)` with `p >= 2` and `1 <= q < p`.
///
/// The derived ordering is lexicographic, which is the order the sieve
/// visits pairs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    p: i64,
    q: i64,
}

impl Pair {
    pub fn new(p: i64, q: i64) -> Result<Pair> {
        if p < 2 || q < 1 || q >= p {
            return domain(format!(
                "({p}, {q}) is not a pair with p >= 2 and 1 <= q < p"
            ));
        }
        Ok(Pair { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_coprime(&self) -> bool {
        gcd(self.p, self.q) == 1
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// An exact rational in lowest terms.
///
/// The denominator is always positive and the sign lives in the numerator;
/// zero is stored as `0/1`. Since the representation is unique, the derived
/// equality and hash are value equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: i64,
    den: i64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };
    pub const MINUS_ONE: Fraction = Fraction { num: -1, den: 1 };

    /// Reduces `num/den` and normalizes its sign.
    pub fn new(num: i64, den: i64) -> Result<Fraction> {
        if den == 0 {
            return domain("zero denominator");
        }
        Self::from_i128(num as i128, den as i128, "fraction")
    }

    pub fn integer(n: i64) -> Fraction {
        Fraction { num: n, den: 1 }
    }

    pub(crate) fn from_i128(num: i128, den: i128, op: &'static str) -> Result<Fraction> {
        debug_assert!(den != 0);
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs()) as i128;
        let num = i64::try_from(num / g).map_err(|_| Error::Overflow(op))?;
        let den = i64::try_from(den / g).map_err(|_| Error::Overflow(op))?;
        Ok(Fraction { num, den })
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn signum(&self) -> i64 {
        self.num.signum()
    }

    /// True for `0 < self < 1`.
    pub fn in_unit_interval(&self) -> bool {
        self.num > 0 && self.num < self.den
    }

    pub fn abs(&self) -> Result<Fraction> {
        let num = self.num.checked_abs().ok_or(Error::Overflow("abs"))?;
        Ok(Fraction { num, den: self.den })
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Prints `a/b`, or just `a` for integers.
impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Accepts `a/b` or `a`; the result is reduced and sign-normalized.
impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Fraction> {
        let parse_err = |reason| Error::Parse {
            input: s.to_string(),
            reason,
        };
        let parse_int = |t: &str| {
            if t.is_empty() || t.starts_with('+') || t.chars().any(char::is_whitespace) {
                return Err(parse_err("expected an integer or a/b"));
            }
            t.parse::<i64>()
                .map_err(|_| parse_err("expected an integer or a/b"))
        };
        match s.split_once('/') {
            None => Ok(Fraction::integer(parse_int(s)?)),
            Some((n, d)) => {
                let (n, d) = (parse_int(n)?, parse_int(d)?);
                if d == 0 {
                    return Err(parse_err("zero denominator"));
                }
                Fraction::new(n, d)
            }
        }
    }
}

/// Position of `pair` in lexicographic order: `(p-2)(p-1)/2 + (q-1)`.
///
/// The product `(p-2)(p-1)` must itself fit in `i64`; beyond that
/// (`p` around `2^31.5`) the call fails with [`Error::Overflow`].
pub fn iteration_index(pair: Pair) -> Result<u64> {
    let tri = (pair.p - 2)
        .checked_mul(pair.p - 1)
        .ok_or(Error::Overflow("iteration_index"))?
        / 2;
    let i = tri
        .checked_add(pair.q - 1)
        .ok_or(Error::Overflow("iteration_index"))?;
    Ok(i as u64)
}

/// Inverse of [`iteration_index`], by integer triangular root.
pub fn pair_from_index(i: u64) -> Result<Pair> {
    if i > i64::MAX as u64 {
        return Err(Error::Overflow("pair_from_index"));
    }
    // t = p - 2 is the largest t with t(t+1)/2 <= i.
    let t = (((i as u128) * 8 + 1).isqrt() - 1) / 2;
    let tri = t * (t + 1) / 2;
    debug_assert!(tri <= i as u128 && i as u128 - tri <= t);
    let p = i64::try_from(t + 2).map_err(|_| Error::Overflow("pair_from_index"))?;
    let q = (i as u128 - tri + 1) as i64;
    let pair = Pair { p, q };
    // Keeps the index domain identical to the one iteration_index accepts.
    let back = iteration_index(pair).map_err(|_| Error::Overflow("pair_from_index"))?;
    debug_assert_eq!(back, i);
    Ok(pair)
}

/// The imbalance `(p-q)/(p+q)`, fully reduced.
pub fn imbalance(pair: Pair) -> Result<Fraction> {
    let sum = pair
        .p
        .checked_add(pair.q)
        .ok_or(Error::Overflow("imbalance"))?;
    Fraction::new(pair.p - pair.q, sum)
}

/// Denominator of the fully reduced imbalance.
pub fn reduced_denominator(pair: Pair) -> Result<i64> {
    imbalance(pair).map(|f| f.den())
}

/// The parity formula: `p+q` when `p+q` is odd, `(p+q)/2` otherwise.
///
/// Agrees with [`reduced_denominator`] on coprime pairs only; `(6, 2)` gives
/// 4 here while `4/8` reduces to `1/2`.
pub fn parity_denominator(pair: Pair) -> Result<i64> {
    let sum = pair
        .p
        .checked_add(pair.q)
        .ok_or(Error::Overflow("parity_denominator"))?;
    Ok(if sum % 2 == 1 { sum } else { sum / 2 })
}

/// The coprime pair whose imbalance is `r`, for `0 < r < 1`.
///
/// With `r = a/d`: `((d+a)/2, (d-a)/2)` when `a` and `d` are both odd,
/// `(d+a, d-a)` otherwise. Every other preimage is a multiple of this one,
/// so it is also the preimage with the smallest index.
pub fn phi_inverse(r: Fraction) -> Result<Pair> {
    if !r.in_unit_interval() {
        return domain(format!("{r} is not in (0, 1)"));
    }
    let (a, d) = (r.num(), r.den());
    if a % 2 == 1 && d % 2 == 1 {
        let q = (d - a) / 2;
        Ok(Pair { p: a + q, q })
    } else {
        let p = d.checked_add(a).ok_or(Error::Overflow("phi_inverse"))?;
        Ok(Pair { p, q: d - a })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(p: i64, q: i64) -> Pair {
        Pair::new(p, q).unwrap()
    }

    fn frac(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    fn pairs_up_to(max_p: i64) -> impl Iterator<Item = Pair> {
        (2..=max_p).flat_map(|p| (1..p).map(move |q| pair(p, q)))
    }

    #[test]
    fn pair_rejects_invalid_coordinates() {
        assert!(Pair::new(1, 0).is_err());
        assert!(Pair::new(3, 3).is_err());
        assert!(Pair::new(3, 0).is_err());
        assert!(Pair::new(2, 1).is_ok());
    }

    #[test]
    fn iteration_index_examples() {
        assert_eq!(iteration_index(pair(2, 1)), Ok(0));
        assert_eq!(iteration_index(pair(3, 1)), Ok(1));
        assert_eq!(iteration_index(pair(3, 2)), Ok(2));
        assert_eq!(iteration_index(pair(5, 3)), Ok(8));
        assert_eq!(iteration_index(pair(6, 5)), Ok(14));
    }

    #[test]
    fn pair_from_index_examples() {
        assert_eq!(pair_from_index(0), Ok(pair(2, 1)));
        assert_eq!(pair_from_index(8), Ok(pair(5, 3)));
        assert_eq!(pair_from_index(14), Ok(pair(6, 5)));
    }

    #[test]
    fn index_round_trip_first_million() {
        for i in 0..=1_000_000u64 {
            assert_eq!(iteration_index(pair_from_index(i).unwrap()), Ok(i));
        }
    }

    #[test]
    fn index_is_lexicographic_rank() {
        let mut prev: Option<Pair> = None;
        for (expected, pr) in (0u64..).zip(pairs_up_to(300)) {
            assert_eq!(iteration_index(pr), Ok(expected));
            if let Some(prev) = prev {
                assert!(prev < pr);
            }
            prev = Some(pr);
        }
    }

    #[test]
    fn overflow_boundary() {
        // Largest p with (p-2)(p-1) <= i64::MAX.
        let fits = |p: i64| ((p - 2) as i128) * ((p - 1) as i128) <= i64::MAX as i128;
        let mut p_max = 3_037_000_000i64;
        while fits(p_max + 1) {
            p_max += 1;
        }
        while !fits(p_max) {
            p_max -= 1;
        }
        let top = pair(p_max, p_max - 1);
        let want = ((p_max - 2) as i128 * (p_max - 1) as i128 / 2 + (p_max - 2) as i128) as u64;
        assert_eq!(iteration_index(top), Ok(want));
        assert_eq!(pair_from_index(want), Ok(top));
        assert_eq!(
            iteration_index(pair(p_max + 1, 1)),
            Err(Error::Overflow("iteration_index"))
        );
        assert!(pair_from_index(want + 1).is_err());
        assert!(pair_from_index(u64::MAX).is_err());
        assert!(iteration_index(pair(i64::MAX, i64::MAX - 1)).is_err());
    }

    #[test]
    fn imbalance_examples() {
        assert_eq!(imbalance(pair(2, 1)), Ok(frac(1, 3)));
        assert_eq!(imbalance(pair(4, 2)), Ok(frac(1, 3)));
        assert_eq!(imbalance(pair(5, 2)), Ok(frac(3, 7)));
        assert!(imbalance(pair(i64::MAX, 2)).is_err());
    }

    #[test]
    fn reduced_denominator_examples() {
        assert_eq!(reduced_denominator(pair(2, 1)), Ok(3));
        assert_eq!(reduced_denominator(pair(5, 3)), Ok(4));
        assert_eq!(reduced_denominator(pair(6, 2)), Ok(2));
        assert_eq!(parity_denominator(pair(6, 2)), Ok(4));
    }

    #[test]
    fn gcd_is_one_or_two_on_coprime_pairs() {
        for pr in pairs_up_to(500).filter(Pair::is_coprime) {
            let (p, q) = (pr.p(), pr.q());
            let g = gcd(p + q, p - q);
            assert_eq!(g, gcd(p + q, 2 * q));
            let same_parity = p % 2 == q % 2;
            assert_eq!(g, if same_parity { 2 } else { 1 }, "{pr}");
        }
    }

    #[test]
    fn gcd_bound_fails_without_coprimality() {
        assert_eq!(gcd(6 + 2, 6 - 2), 4);
        assert_eq!(gcd(6 + 3, 6 - 3), 3);
        // The difference identity holds regardless.
        for pr in pairs_up_to(200) {
            let (p, q) = (pr.p(), pr.q());
            assert_eq!(gcd(p + q, p - q), gcd(p + q, 2 * q));
        }
    }

    #[test]
    fn denominator_cross_check() {
        for pr in pairs_up_to(500) {
            let value = imbalance(pr).unwrap();
            let sum = pr.p() + pr.q();
            assert_eq!(reduced_denominator(pr), Ok(value.den()));
            assert_eq!(sum % value.den(), 0);
            assert!(value.in_unit_interval());
            if pr.is_coprime() {
                assert!(value.den() == sum || 2 * value.den() == sum);
                assert_eq!(parity_denominator(pr), Ok(value.den()), "{pr}");
            }
        }
    }

    #[test]
    fn phi_inverse_examples() {
        assert_eq!(phi_inverse(frac(1, 2)), Ok(pair(3, 1)));
        assert_eq!(phi_inverse(frac(3, 5)), Ok(pair(4, 1)));
        assert_eq!(phi_inverse(frac(1, 3)), Ok(pair(2, 1)));
        assert!(phi_inverse(Fraction::ZERO).is_err());
        assert!(phi_inverse(Fraction::ONE).is_err());
        assert!(phi_inverse(frac(-1, 3)).is_err());
        assert!(phi_inverse(frac(4, 3)).is_err());
    }

    #[test]
    fn phi_inverse_is_right_inverse() {
        for d in 2..=500i64 {
            for a in (1..d).filter(|&a| gcd(a, d) == 1) {
                let r = frac(a, d);
                let pr = phi_inverse(r).unwrap();
                assert!(pr.is_coprime(), "{r} -> {pr}");
                assert_eq!(imbalance(pr), Ok(r));
            }
        }
    }

    #[test]
    fn phi_inverse_is_earliest_preimage() {
        let mut first_seen = std::collections::HashMap::new();
        for pr in pairs_up_to(120) {
            first_seen.entry(imbalance(pr).unwrap()).or_insert(pr);
        }
        for (value, pr) in first_seen {
            assert_eq!(phi_inverse(value), Ok(pr));
        }
    }

    #[test]
    fn swap_and_reflection_identities() {
        for pr in pairs_up_to(200) {
            let (p, q) = (pr.p(), pr.q());
            let value = imbalance(pr).unwrap();
            let swapped = frac(q - p, q + p);
            assert_eq!(swapped, frac(-value.num(), value.den()));
            let reflected = frac(p + q, p - q);
            assert_eq!(reflected, frac(value.den(), value.num()));
        }
    }

    #[test]
    fn make_fraction_examples() {
        assert_eq!(frac(2, 6), Fraction { num: 1, den: 3 });
        assert_eq!(frac(-4, -8), Fraction { num: 1, den: 2 });
        assert_eq!(frac(0, 5), Fraction::ZERO);
        assert_eq!(frac(0, -5), Fraction::ZERO);
        assert_eq!(frac(3, -6), Fraction { num: -1, den: 2 });
        assert!(matches!(Fraction::new(1, 0), Err(Error::Domain(_))));
        assert_eq!(
            Fraction::new(i64::MIN, -1),
            Err(Error::Overflow("fraction"))
        );
        assert_eq!(
            frac(i64::MIN, 2),
            Fraction {
                num: i64::MIN / 2,
                den: 1
            }
        );
    }

    #[test]
    fn fraction_text() {
        assert_eq!(frac(1, 3).to_string(), "1/3");
        assert_eq!(frac(-6, 3).to_string(), "-2");
        assert_eq!(Fraction::ZERO.to_string(), "0");
        assert_eq!("2/6".parse(), Ok(frac(1, 3)));
        assert_eq!("-7".parse(), Ok(Fraction::integer(-7)));
        assert_eq!("3/-4".parse(), Ok(frac(-3, 4)));
        for bad in ["", "1/0", "a/b", "1 /2", "1/", "/2", "+1", "1/2/3"] {
            assert!(bad.parse::<Fraction>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn fraction_ordering() {
        assert!(frac(1, 3) < frac(1, 2));
        assert!(frac(-1, 2) < Fraction::ZERO);
        assert!(frac(i64::MAX, 2) > frac(i64::MAX - 1, 2));
    }

    proptest! {
        #[test]
        fn make_fraction_is_canonical(n in any::<i64>(), d in any::<i64>().prop_filter("nonzero", |d| *d != 0)) {
            match Fraction::new(n, d) {
                Ok(f) => {
                    prop_assert!(f.den() > 0);
                    prop_assert_eq!(gcd(f.num(), f.den()), 1);
                    prop_assert_eq!(f.num() as i128 * d as i128, n as i128 * f.den() as i128);
                }
                // Only -2^63 over a negative denominator can fail.
                Err(e) => {
                    prop_assert_eq!(e, Error::Overflow("fraction"));
                    prop_assert!(d < 0 && (n == i64::MIN || d == i64::MIN));
                }
            }
        }

        #[test]
        fn fraction_text_round_trip(n in -1_000_000_000i64..1_000_000_000, d in 1i64..1_000_000_000) {
            let f = Fraction::new(n, d).unwrap();
            prop_assert_eq!(f.to_string().parse::<Fraction>(), Ok(f));
        }

        #[test]
        fn iteration_index_never_wraps(p in (1i64 << 31)..(1i64 << 33), q_off in 0i64..1000) {
            let q = (p - 1 - q_off).max(1);
            let exact = (p as i128 - 2) * (p as i128 - 1);
            match iteration_index(pair(p, q)) {
                Ok(i) => {
                    prop_assert!(exact <= i64::MAX as i128);
                    prop_assert_eq!(i as i128, exact / 2 + q as i128 - 1);
                }
                Err(e) => {
                    prop_assert!(exact > i64::MAX as i128);
                    prop_assert_eq!(e, Error::Overflow("iteration_index"));
                }
            }
        }

        #[test]
        fn index_round_trip_large(i in 0u64..(1u64 << 61)) {
            let pr = pair_from_index(i).unwrap();
            prop_assert_eq!(iteration_index(pr), Ok(i));
        }
    }
}
