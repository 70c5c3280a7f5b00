//! Per-integer predicates: the divisor-subtraction map and its orbit, the
//! divisor-chain test, the Egyptian-fraction classes and extended Fermat
//! prime levels.
//!
//! Egyptian-fraction equations are checked over the common denominator `n`:
//! `sum(1/p^k) + 1/n = 1` becomes `sum(n/p^k) + 1 = n`, where every term is
//! an exact integer.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{factorize, factorize_u64, is_prime, is_prime_u64, Factorization, Primality};
use crate::error::{invalid, Result};

/// Default largest `n` for which [`is_pseudoperfect`] runs its subset-sum.
pub const PSEUDOPERFECT_CAP: u64 = 1_000_000;

/// One application of `f`: `n - 1` for prime `n`, otherwise `n` minus its
/// largest proper divisor. Computed as `(p - 1) * (n / p)` with `p` the
/// smallest prime factor.
pub fn f_step(n: u64) -> Result<u64> {
    if n < 2 {
        return invalid(format!("f is defined for n >= 2, got {n}"));
    }
    let p = factorize_u64(n)?.smallest_prime().unwrap_or(n);
    Ok((p - 1) * (n / p))
}

/// The orbit `n, f(n), f(f(n)), ..., 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Trajectory {
    values: Vec<u64>,
}

impl Trajectory {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start(&self) -> u64 {
        self.values[0]
    }

    /// The `i`-th iterate, if the orbit is that long.
    pub fn iterate(&self, i: usize) -> Option<u64> {
        self.values.get(i).copied()
    }
}

impl fmt::Display for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn trajectory(n: u64) -> Result<Trajectory> {
    if n == 0 {
        return invalid("trajectory of 0 is undefined");
    }
    let mut values = vec![n];
    let mut x = n;
    while x > 1 {
        x = f_step(x)?;
        values.push(x);
    }
    Ok(Trajectory { values })
}

/// Whether the orbit of `n` under `f` is exactly the divisor set of `n`.
pub fn is_murthy(n: u64) -> Result<bool> {
    if n == 0 {
        return invalid("is_murthy(0) is undefined");
    }
    Ok(is_murthy_factored(&factorize_u64(n)?))
}

/// [`is_murthy`] on a factored integer of any size.
///
/// The orbit is walked on exponent vectors over the primes of `n`. The walk
/// stops with `false` at the first iterate that does not divide `n`;
/// otherwise the orbit is a strictly decreasing run of divisors and matches
/// the divisor set exactly when its length is the divisor count.
pub fn is_murthy_factored(fact: &Factorization) -> bool {
    let pairs = fact.pairs();
    let bound: Vec<u32> = pairs.iter().map(|&(_, e)| e).collect();
    // Exponent vector of p_i - 1 over the primes of n, when it has one.
    let step_factors: Vec<Option<Vec<u32>>> = pairs
        .iter()
        .map(|&(p, _)| {
            let pm1 = factorize_u64(p - 1).ok()?;
            let mut v = vec![0u32; pairs.len()];
            for &(q, e) in pm1.pairs() {
                let idx = pairs.binary_search_by_key(&q, |&(r, _)| r).ok()?;
                v[idx] = e;
            }
            Some(v)
        })
        .collect();
    let target = fact.divisor_count();
    let mut cur = bound.clone();
    let mut count = BigUint::one();
    while let Some(i) = cur.iter().position(|&e| e > 0) {
        let Some(add) = &step_factors[i] else {
            return false;
        };
        cur[i] -= 1;
        for (j, &a) in add.iter().enumerate() {
            cur[j] += a;
            if cur[j] > bound[j] {
                return false;
            }
        }
        count += 1u32;
        if count > target {
            return false;
        }
    }
    count == target
}

/// Each `p_i - 1` equals the product of the earlier prime powers
/// `p_j^a_j, j < i`. Vacuously true for 1.
pub fn chain_condition(fact: &Factorization) -> bool {
    let mut prefix: u128 = 1;
    for &(p, e) in fact.pairs() {
        if p as u128 - 1 != prefix {
            return false;
        }
        for _ in 0..e {
            prefix = match prefix.checked_mul(p as u128) {
                Some(v) => v,
                // Nothing after this prime can match: every later prime
                // fits in 64 bits.
                None => return fact.largest_prime() == Some(p),
            };
        }
    }
    true
}

/// Whether `n` is a sum of distinct proper divisors, up to
/// [`PSEUDOPERFECT_CAP`].
pub fn is_pseudoperfect(n: u64) -> Result<bool> {
    is_pseudoperfect_capped(n, PSEUDOPERFECT_CAP)
}

/// Subset-sum over the proper divisors with a bitset. Fails with a
/// resource-limit error above `cap`.
pub fn is_pseudoperfect_capped(n: u64, cap: u64) -> Result<bool> {
    if n == 0 {
        return invalid("is_pseudoperfect(0) is undefined");
    }
    if n > cap {
        return Err(crate::Error::ResourceLimit(format!(
            "subset-sum for {n} exceeds the cap {cap}"
        )));
    }
    let divisors: Vec<u64> = divisors(&factorize_u64(n)?)
        .into_iter()
        .filter(|&d| d < n)
        .collect();
    let aliquot: u64 = divisors.iter().sum();
    if aliquot < n {
        return Ok(false);
    }
    if aliquot == n {
        return Ok(true);
    }
    let bits = n as usize + 1;
    let mut reach = vec![0u64; bits.div_ceil(64)];
    reach[0] = 1;
    let target = n as usize;
    // Largest divisors first tends to reach the target early.
    for &d in divisors.iter().rev() {
        shift_or(&mut reach, d as usize);
        if reach[target / 64] >> (target % 64) & 1 == 1 {
            return Ok(true);
        }
    }
    Ok(false)
}

// reach |= reach << shift, truncated to the vector length.
fn shift_or(reach: &mut [u64], shift: usize) {
    let words = shift / 64;
    let bits = shift % 64;
    for i in (words..reach.len()).rev() {
        let src = i - words;
        let mut v = reach[src] << bits;
        if bits > 0 && src > 0 {
            v |= reach[src - 1] >> (64 - bits);
        }
        reach[i] |= v;
    }
}

/// All divisors of a word-sized factored integer, ascending.
pub(crate) fn divisors(fact: &Factorization) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in fact.pairs() {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// `sum over primes p | n of n / p`.
pub(crate) fn prime_cosum(pairs: &[(u64, u32)], n: u64) -> u128 {
    pairs.iter().map(|&(p, _)| (n / p) as u128).sum()
}

/// `sum over prime powers p^k | n of n / p^k`.
pub(crate) fn prime_power_cosum(pairs: &[(u64, u32)], n: u64) -> u128 {
    let mut total = 0u128;
    for &(p, e) in pairs {
        let mut q = n;
        for _ in 0..e {
            q /= p;
            total += q as u128;
        }
    }
    total
}

fn prime_power_cosum_big(fact: &Factorization, n: &BigUint) -> BigUint {
    let mut total = BigUint::zero();
    for &(p, e) in fact.pairs() {
        let mut q = n.clone();
        for _ in 0..e {
            q /= p;
            total += &q;
        }
    }
    total
}

fn require_at_least_two(n: u64, what: &str) -> Result<()> {
    if n < 2 {
        return invalid(format!("{what} requires n >= 2, got {n}"));
    }
    Ok(())
}

/// `sum(1/p) + 1/n = 1` over the prime divisors.
pub fn is_primary_pseudoperfect(n: u64) -> Result<bool> {
    require_at_least_two(n, "is_primary_pseudoperfect")?;
    let f = factorize_u64(n)?;
    Ok(prime_cosum(f.pairs(), n) + 1 == n as u128)
}

/// Composite `n` with `sum(1/p) - 1/n` a positive integer.
pub fn is_giuga(n: u64) -> Result<bool> {
    require_at_least_two(n, "is_giuga")?;
    let f = factorize_u64(n)?;
    if f.is_prime() {
        return Ok(false);
    }
    let s = prime_cosum(f.pairs(), n) - 1;
    Ok(s > 0 && s % n as u128 == 0)
}

/// `sum(1/p^k) + 1/n = 1` over all prime power divisors.
pub fn is_pp_pseudoperfect(n: u64) -> Result<bool> {
    require_at_least_two(n, "is_pp_pseudoperfect")?;
    let f = factorize_u64(n)?;
    Ok(prime_power_cosum(f.pairs(), n) + 1 == n as u128)
}

/// [`is_pp_pseudoperfect`] for a factored integer of any size.
pub fn is_pp_pseudoperfect_factored(fact: &Factorization) -> bool {
    if let Some(n) = fact.to_u64() {
        return n >= 2 && prime_power_cosum(fact.pairs(), n) + 1 == n as u128;
    }
    let n = fact.value();
    prime_power_cosum_big(fact, &n) + 1u32 == n
}

/// Exact value of `sum(1/p^k) - 1/n` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Excess {
    pub numer: BigUint,
    pub denom: BigUint,
}

impl Excess {
    fn reduced(numer: BigUint, denom: BigUint) -> Self {
        let g = numer.gcd(&denom);
        Excess { numer: numer / &g, denom: denom / g }
    }

    pub fn is_integer(&self) -> bool {
        self.denom.is_one()
    }

    pub fn to_integer(&self) -> Option<&BigUint> {
        self.is_integer().then_some(&self.numer)
    }
}

impl fmt::Display for Excess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

pub fn pp_giuga_excess(n: u64) -> Result<Excess> {
    require_at_least_two(n, "pp_giuga_excess")?;
    pp_giuga_excess_factored(&factorize_u64(n)?)
}

/// Fails on primes and on 1: the class is defined for composites only.
pub fn pp_giuga_excess_factored(fact: &Factorization) -> Result<Excess> {
    if fact.is_one() || fact.is_prime() {
        return invalid(format!("{} is not composite", fact.value()));
    }
    if let Some(n) = fact.to_u64() {
        let s = prime_power_cosum(fact.pairs(), n) - 1;
        return Ok(Excess::reduced(BigUint::from(s), BigUint::from(n)));
    }
    let n = fact.value();
    let s = prime_power_cosum_big(fact, &n) - 1u32;
    Ok(Excess::reduced(s, n))
}

/// Composite `n` with `sum(1/p^k) - 1/n` a positive integer. False for primes.
pub fn is_pp_giuga(n: u64) -> Result<bool> {
    require_at_least_two(n, "is_pp_giuga")?;
    is_pp_giuga_factored(&factorize_u64(n)?)
}

pub fn is_pp_giuga_factored(fact: &Factorization) -> Result<bool> {
    if fact.is_prime() {
        return Ok(false);
    }
    let e = pp_giuga_excess_factored(fact)?;
    Ok(e.is_integer() && !e.numer.is_zero())
}

/// Primality verdict and extended Fermat level of a candidate prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EfpVerdict {
    pub primality: Primality,
    pub level: Option<u32>,
}

/// Tests `p` for primality, then checks the chain condition on `p - 1`.
///
/// `p_minus_1` may carry a known factorization of `p - 1`; it is checked
/// against `p` and used instead of factoring.
pub fn efp_classify(p: &BigUint, p_minus_1: Option<&Factorization>) -> Result<EfpVerdict> {
    if p < &BigUint::from(2u32) {
        return invalid(format!("extended Fermat level requires p >= 2, got {p}"));
    }
    let pm1 = p - 1u32;
    if let Some(f) = p_minus_1 {
        if f.value() != pm1 {
            return invalid(format!("supplied factorization {f} does not equal p - 1"));
        }
    }
    let primality = is_prime(p);
    if primality.is_composite() {
        return Ok(EfpVerdict { primality, level: None });
    }
    let owned;
    let fact = match p_minus_1 {
        Some(f) => f,
        None => {
            owned = factorize(&pm1)?;
            &owned
        }
    };
    let level = chain_condition(fact).then_some(fact.len() as u32);
    Ok(EfpVerdict { primality, level })
}

/// The extended Fermat level of `p`, or `None` when `p` is composite or
/// `p - 1` breaks the chain condition. The prime 2 has level 0.
pub fn efp_level(p: &BigUint, p_minus_1: Option<&Factorization>) -> Result<Option<u32>> {
    Ok(efp_classify(p, p_minus_1)?.level)
}

/// Every predicate verdict for one integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub n: u64,
    pub factorization: Factorization,
    /// `None` when `n` is above the subset-sum cap.
    pub pseudoperfect: Option<bool>,
    pub primary_pseudoperfect: bool,
    pub giuga: bool,
    pub pp_pseudoperfect: bool,
    pub pp_giuga: bool,
    pub murthy: bool,
    pub efp_level: Option<u32>,
}

pub fn classify_all(n: u64) -> Result<Classification> {
    require_at_least_two(n, "classify_all")?;
    let factorization = factorize_u64(n)?;
    let pseudoperfect = match is_pseudoperfect(n) {
        Ok(v) => Some(v),
        Err(crate::Error::ResourceLimit(_)) => None,
        Err(e) => return Err(e),
    };
    let efp_level = if is_prime_u64(n) {
        let pm1 = factorize_u64(n - 1)?;
        chain_condition(&pm1).then_some(pm1.len() as u32)
    } else {
        None
    };
    Ok(Classification {
        n,
        pseudoperfect,
        primary_pseudoperfect: prime_cosum(factorization.pairs(), n) + 1 == n as u128,
        giuga: is_giuga(n)?,
        pp_pseudoperfect: is_pp_pseudoperfect_factored(&factorization),
        pp_giuga: is_pp_giuga_factored(&factorization)?,
        murthy: is_murthy_factored(&factorization),
        efp_level,
        factorization,
    })
}
