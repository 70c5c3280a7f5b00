use std::ops::Index;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::factorization::{factorize, Factorization};
use crate::error::{invalid, Error, Result};

/// Environment variable overriding the sieve memory budget, in bytes.
pub const SIEVE_BUDGET_ENV: &str = "EGYPTFRAC_SIEVE_BYTES";

/// Default budget: 1 GiB, enough for a limit of about 2.6 * 10^8.
pub const DEFAULT_SIEVE_BUDGET_BYTES: u64 = 1 << 30;

/// Smallest-prime-factor table over `[2, limit]`, built by a linear sieve.
///
/// Immutable after construction; share it freely between threads.
#[derive(Clone, Debug)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    /// Builds the sieve under the budget from [`SIEVE_BUDGET_ENV`], or
    /// [`DEFAULT_SIEVE_BUDGET_BYTES`] when unset.
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_budget(limit, budget_from_env()?)
    }

    pub fn with_budget(limit: u64, budget_bytes: u64) -> Result<Self> {
        if limit < 2 {
            return invalid(format!("sieve limit must be at least 2, got {limit}"));
        }
        let bytes = (limit as u128 + 1) * std::mem::size_of::<u32>() as u128;
        if limit > u32::MAX as u64 || bytes > budget_bytes as u128 {
            return Err(Error::ResourceLimit(format!(
                "sieve to {limit} needs {bytes} bytes, budget is {budget_bytes}"
            )));
        }
        let len = limit as usize + 1;
        let mut spf = vec![0u32; len];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let lp = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > lp || m >= len {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(SpfSieve { spf })
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn contains(&self, n: u64) -> bool {
        (2..=self.limit()).contains(&n)
    }

    /// Smallest prime factor of `n`, or `None` outside `[2, limit]`.
    pub fn spf(&self, n: u64) -> Option<u64> {
        self.contains(n).then(|| self.spf[n as usize] as u64)
    }

    /// Appends the prime-power pairs of `n` (ascending) to `out`.
    ///
    /// `n` must lie in `[1, limit]`.
    pub fn factor_into(&self, mut n: u64, out: &mut Vec<(u64, u32)>) {
        debug_assert!(n >= 1 && n <= self.limit());
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }

    /// Factorization of `n` read off the table. Fails outside `[1, limit]`.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 || n > self.limit() {
            return invalid(format!("{n} is outside the sieve range [1, {}]", self.limit()));
        }
        let mut pairs = Vec::new();
        self.factor_into(n, &mut pairs);
        Ok(Factorization::from_sorted_unchecked(pairs))
    }

    /// Uses the table when `n` is in range, the general factorizer otherwise.
    pub fn factorize_any(&self, n: &BigUint) -> Result<Factorization> {
        match n.to_u64() {
            Some(small) if small >= 1 && small <= self.limit() => self.factorize(small),
            _ => factorize(n),
        }
    }
}

impl Index<usize> for SpfSieve {
    type Output = u32;

    fn index(&self, n: usize) -> &u32 {
        assert!(n >= 2, "sieve has no entry for {n}");
        &self.spf[n]
    }
}

fn budget_from_env() -> Result<u64> {
    match std::env::var(SIEVE_BUDGET_ENV) {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("{SIEVE_BUDGET_ENV}={raw:?} is not a byte count"))
        }),
        Err(_) => Ok(DEFAULT_SIEVE_BUDGET_BYTES),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_spf(n: u64) -> u64 {
        (2..=n).find(|d| n % d == 0).unwrap()
    }

    #[test]
    fn small_table_entries() {
        let s = SpfSieve::with_budget(10, 1 << 20).unwrap();
        assert_eq!(s[9], 3);
        assert_eq!(s[7], 7);
        assert_eq!(s.spf(1), None);
        assert_eq!(s.spf(11), None);
    }

    #[test]
    fn rejects_bad_limits() {
        assert!(matches!(SpfSieve::with_budget(1, 1 << 20), Err(Error::InvalidArgument(_))));
        assert!(matches!(SpfSieve::with_budget(1_000_000, 1000), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn agrees_with_trial_division() {
        let s = SpfSieve::with_budget(20_000, 1 << 20).unwrap();
        for n in 2..=20_000 {
            assert_eq!(s.spf(n), Some(trial_spf(n)), "n = {n}");
        }
    }

    #[test]
    fn table_one_bound() {
        let s = SpfSieve::with_budget(10_000_000, 1 << 30).unwrap();
        assert_eq!(s[23994], trial_spf(23994) as u32);
        assert_eq!(s[23994], 2);
        assert_eq!(s[9_999_991], 9_999_991);
    }
}
