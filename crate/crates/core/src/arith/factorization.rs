use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::primality::{is_prime, is_prime_u64};
use super::{rho, small_primes};
use crate::error::{invalid, Error, Result};

/// Trial division bound applied to integers wider than 64 bits before
/// falling back to rho.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

// Word-sized inputs only trial-divide this far before switching to
// Miller-Rabin plus rho.
const WORD_TRIAL_BOUND: u64 = 1 << 12;

const BIG_RHO_ITERATIONS: u64 = 1 << 22;

/// Canonical prime factorization: `(prime, exponent)` pairs with strictly
/// increasing primes and positive exponents. The empty list is 1.
///
/// Every prime factor fits in a `u64`; the integer itself may be any size.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Self::default()
    }

    /// Validates ordering, exponents and primality of every base.
    pub fn from_pairs(pairs: Vec<(u64, u32)>) -> Result<Self> {
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 {
                return invalid(format!("primes not strictly increasing: {} then {}", w[0].0, w[1].0));
            }
        }
        for &(p, e) in &pairs {
            if e == 0 {
                return invalid(format!("zero exponent on {p}"));
            }
            if !is_prime_u64(p) {
                return invalid(format!("{p} is not prime"));
            }
        }
        Ok(Factorization { factors: pairs })
    }

    pub(crate) fn from_sorted_unchecked(factors: Vec<(u64, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        Factorization { factors }
    }

    /// Sorts and merges unordered prime-power pairs.
    pub(crate) fn from_unsorted(mut pairs: Vec<(u64, u32)>) -> Self {
        pairs.sort_unstable();
        let mut factors: Vec<(u64, u32)> = Vec::with_capacity(pairs.len());
        for (p, e) in pairs {
            match factors.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => factors.push((p, e)),
            }
        }
        Factorization { factors }
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of distinct primes.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_prime(&self) -> bool {
        matches!(self.factors.as_slice(), [(_, 1)])
    }

    pub fn is_power_of_two(&self) -> bool {
        matches!(self.factors.as_slice(), [(2, _)])
    }

    pub fn smallest_prime(&self) -> Option<u64> {
        self.factors.first().map(|&(p, _)| p)
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map_or(0, |i| self.factors[i].1)
    }

    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, &(p, e)| acc * BigUint::from(p).pow(e))
    }

    /// The value if it fits in 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        let mut acc = 1u64;
        for &(p, e) in &self.factors {
            for _ in 0..e {
                acc = acc.checked_mul(p)?;
            }
        }
        Some(acc)
    }

    /// Number of divisors, `prod(e + 1)`.
    pub fn divisor_count(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, &(_, e)| acc * (e as u64 + 1))
    }

    pub fn mul(&self, other: &Factorization) -> Factorization {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
        Factorization { factors: out }
    }

    /// Multiplies by `p^e`; `p` must be prime.
    pub fn mul_prime_power(&self, p: u64, e: u32) -> Factorization {
        if e == 0 {
            return self.clone();
        }
        self.mul(&Factorization { factors: vec![(p, e)] })
    }

    /// Divides by `p`, or `None` if `p` does not divide the value.
    pub fn div_prime(&self, p: u64) -> Option<Factorization> {
        let i = self.factors.binary_search_by_key(&p, |&(q, _)| q).ok()?;
        let mut factors = self.factors.clone();
        if factors[i].1 == 1 {
            factors.remove(i);
        } else {
            factors[i].1 -= 1;
        }
        Some(Factorization { factors })
    }
}

/// Renders as `2^2 · 3`; the empty factorization renders as `1`.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" · ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factorization of a word-sized integer. Fails only on zero.
pub fn factorize_u64(n: u64) -> Result<Factorization> {
    if n == 0 {
        return invalid("cannot factor 0");
    }
    let mut pairs = Vec::new();
    let mut m = n;
    let tz = m.trailing_zeros();
    if tz > 0 {
        pairs.push((2, tz));
        m >>= tz;
    }
    let mut d = 3u64;
    while d <= WORD_TRIAL_BOUND && d * d <= m {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            pairs.push((d, e));
        }
        d += 2;
    }
    if m > 1 {
        let mut stack = vec![m];
        while let Some(x) = stack.pop() {
            if x == 1 {
                continue;
            }
            if d * d > x || is_prime_u64(x) {
                pairs.push((x, 1));
                continue;
            }
            // Rho exhausting 63 polynomials on an odd composite without
            // small factors does not happen in practice.
            let f = rho::split_u64(x).expect("rho failed on a 64-bit composite");
            stack.push(f);
            stack.push(x / f);
        }
    }
    Ok(Factorization::from_unsorted(pairs))
}

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| small_primes(TRIAL_DIVISION_BOUND))
}

/// Factorization of an arbitrary natural number.
///
/// Integers wider than 64 bits are trial-divided to
/// [`TRIAL_DIVISION_BOUND`] and the cofactor is split with rho. Fails with
/// a resource-limit error when rho gives up or a prime factor exceeds 64
/// bits.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    if n.is_zero() {
        return invalid("cannot factor 0");
    }
    if let Some(small) = n.to_u64() {
        return factorize_u64(small);
    }
    let mut pairs = Vec::new();
    let mut m = n.clone();
    for &p in trial_primes() {
        if (&m % p).is_zero() {
            let mut e = 0;
            while (&m % p).is_zero() {
                m /= p;
                e += 1;
            }
            pairs.push((p, e));
        }
        if m.is_one() {
            break;
        }
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        if let Some(small) = x.to_u64() {
            pairs.extend_from_slice(factorize_u64(small)?.pairs());
            continue;
        }
        if is_prime(&x).is_likely_prime() {
            return Err(Error::ResourceLimit(format!(
                "prime factor {x} exceeds 64 bits"
            )));
        }
        let f = rho::split_big(&x, BIG_RHO_ITERATIONS).ok_or_else(|| {
            Error::ResourceLimit(format!("rho found no factor of {} within budget", x))
        })?;
        stack.push(&x / &f);
        stack.push(f);
    }
    Ok(Factorization::from_unsorted(pairs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_factorizations() {
        let f = factorize(&BigUint::from(23994u32)).unwrap();
        assert_eq!(f.pairs(), &[(2, 1), (3, 2), (31, 1), (43, 1)]);
        assert_eq!(f.to_string(), "2 · 3^2 · 31 · 43");
        assert!(factorize(&BigUint::one()).unwrap().is_one());
        assert_eq!(factorize_u64(16256).unwrap().pairs(), &[(2, 7), (127, 1)]);
        assert!(matches!(factorize(&BigUint::zero()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn reconstructs_small_range() {
        for n in 1..=100_000u64 {
            let f = factorize_u64(n).unwrap();
            assert_eq!(f.to_u64(), Some(n));
            assert!(f.pairs().iter().all(|&(p, e)| e >= 1 && is_prime_u64(p)));
            assert!(f.pairs().windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn word_inputs_with_large_factors() {
        let n = 4_294_967_291u64 * 4_294_967_279;
        assert_eq!(factorize_u64(n).unwrap().pairs(), &[(4_294_967_279, 1), (4_294_967_291, 1)]);
        let p = 18_446_744_073_709_551_557u64;
        assert_eq!(factorize_u64(p).unwrap().pairs(), &[(p, 1)]);
    }

    #[test]
    fn wide_inputs() {
        let f = Factorization::from_pairs(vec![(2, 1), (3, 1), (7, 1), (43, 2), (77659, 5)]).unwrap();
        assert_eq!(factorize(&f.value()).unwrap(), f);
        let g = Factorization::from_pairs(vec![(3, 4), (1_000_003, 1), (4_294_967_311, 2)]).unwrap();
        assert_eq!(factorize(&g.value()).unwrap(), g);
        let big_prime = (BigUint::one() << 127u32) - 1u32;
        assert!(matches!(factorize(&big_prime), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn construction_helpers() {
        assert!(Factorization::from_pairs(vec![(3, 1), (2, 1)]).is_err());
        assert!(Factorization::from_pairs(vec![(2, 0)]).is_err());
        assert!(Factorization::from_pairs(vec![(4, 1)]).is_err());
        let a = factorize_u64(18).unwrap();
        let b = factorize_u64(17 * 3).unwrap();
        assert_eq!(a.mul(&b).to_u64(), Some(18 * 51));
        assert_eq!(a.div_prime(3).unwrap().to_u64(), Some(6));
        assert_eq!(a.div_prime(5), None);
        assert_eq!(a.mul_prime_power(17, 2).to_u64(), Some(5202));
        assert_eq!(a.divisor_count(), BigUint::from(6u32));
        assert_eq!(Factorization::one().to_string(), "1");
    }
}
