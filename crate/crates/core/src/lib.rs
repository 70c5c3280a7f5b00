//! Egyptian-fraction number classes built on prime power divisors.
//!
//! The crate covers four families of integers:
//!
//! * prime power pseudoperfect numbers, `sum(1/p^k) + 1/n = 1` over all prime
//!   power divisors `p^k | n`;
//! * prime power Giuga numbers, composite `n` with `sum(1/p^k) - 1/n` a
//!   positive integer;
//! * divisor-chain numbers, whose orbit under `f(n) = n - d(n)` (with `d(n)`
//!   the largest proper divisor, `f(p) = p - 1` for primes) visits exactly
//!   the divisors of `n`;
//! * extended Fermat primes, primes `p` for which `p - 1` is a divisor-chain
//!   number.
//!
//! [`arith`] provides sieving, factorization and primality, [`classify`] the
//! per-integer predicates, [`enumerate`] range scans and generation trees,
//! and [`oeis`] b-file and DOT serialization.

pub mod arith;
pub mod classify;
pub mod enumerate;
mod error;
pub mod oeis;

pub use arith::{
    factorize, factorize_u64, is_prime, is_prime_u64, BigNatural, Factorization, Primality, SpfSieve,
};
pub use error::{Error, Result};
