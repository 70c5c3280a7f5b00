//! Exact integer services: the smallest-prime-factor sieve, factorization and
//! primality testing for machine-word and arbitrary-size integers.

mod factorization;
mod primality;
mod rho;
mod sieve;

pub use factorization::{factorize, factorize_u64, Factorization, TRIAL_DIVISION_BOUND};
pub use primality::{
    is_prime, is_prime_u64, Primality, DETERMINISTIC_BITS, ERROR_BOUND_LOG4, RANDOM_ROUNDS,
};
pub use sieve::{SpfSieve, DEFAULT_SIEVE_BUDGET_BYTES, SIEVE_BUDGET_ENV};

/// Arbitrary-precision natural number.
pub type BigNatural = num_bigint::BigUint;

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Primes below `bound` by a plain Eratosthenes sieve.
pub(crate) fn small_primes(bound: u64) -> Vec<u64> {
    let bound = bound as usize;
    let mut composite = vec![false; bound];
    let mut primes = Vec::new();
    for i in 2..bound {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j < bound {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}
