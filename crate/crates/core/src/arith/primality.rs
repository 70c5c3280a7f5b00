use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{mul_mod, pow_mod, small_primes};

/// Integers with at most this many bits get an exact verdict.
pub const DETERMINISTIC_BITS: u64 = 64;

/// Random-base Miller-Rabin rounds run after the Baillie-PSW core.
pub const RANDOM_ROUNDS: u32 = 20;

/// A composite passes all random rounds with probability at most
/// `4^ERROR_BOUND_LOG4`. The Baillie-PSW core is not counted in the bound.
pub const ERROR_BOUND_LOG4: i32 = -(RANDOM_ROUNDS as i32);

// Covers every n < 3.3 * 10^24, in particular all of u64.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const RNG_SEED: u64 = 0x5eed_e9f7_1a2b_3c4d;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Primality {
    Prime,
    /// Passed Baillie-PSW plus [`RANDOM_ROUNDS`] random Miller-Rabin rounds.
    ProbablePrime,
    Composite,
}

impl Primality {
    pub fn is_composite(self) -> bool {
        self == Primality::Composite
    }

    /// True for both `Prime` and `ProbablePrime`.
    pub fn is_likely_prime(self) -> bool {
        !self.is_composite()
    }
}

impl std::fmt::Display for Primality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Primality::Prime => "prime",
            Primality::ProbablePrime => "probable-prime",
            Primality::Composite => "composite",
        })
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality verdict for an arbitrary natural number.
///
/// Below 2^64 the answer is exact. Above, a `Composite` verdict is always
/// exact and a passing number is reported as `ProbablePrime`.
pub fn is_prime(n: &BigUint) -> Primality {
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) { Primality::Prime } else { Primality::Composite };
    }
    if n.is_even() {
        return Primality::Composite;
    }
    for &p in trial_primes() {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    if !strong_probable_prime(n, &BigUint::from(2u32)) || !strong_lucas(n) {
        return Primality::Composite;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);
    let two = BigUint::from(2u32);
    let upper = n - 1u32;
    for _ in 0..RANDOM_ROUNDS {
        let a = rng.gen_biguint_range(&two, &upper);
        if !strong_probable_prime(n, &a) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| small_primes(1000))
}

fn strong_probable_prime(n: &BigUint, base: &BigUint) -> bool {
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = base.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

fn jacobi(a: &BigUint, n: &BigUint) -> i32 {
    let mut a = a % n;
    let mut n = n.clone();
    let mut t = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n_mod_8 = n.iter_u32_digits().next().unwrap_or(0) & 7;
        if tz % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        let low = |x: &BigUint| x.iter_u32_digits().next().unwrap_or(0) & 3;
        if low(&a) == 3 && low(&n) == 3 {
            t = -t;
        }
        a %= &n;
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Residue of a signed integer modulo `n`.
fn signed_mod(x: i64, n: &BigUint) -> BigUint {
    let r = BigUint::from(x.unsigned_abs()) % n;
    if x < 0 && !r.is_zero() {
        n - r
    } else {
        r
    }
}

fn half_mod(x: BigUint, n: &BigUint) -> BigUint {
    if x.is_odd() {
        (x + n) >> 1
    } else {
        x >> 1
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters (P = 1).
///
/// `n` must be odd and free of small factors.
fn strong_lucas(n: &BigUint) -> bool {
    let root = n.sqrt();
    if &(&root * &root) == n {
        return false;
    }
    let mut d: i64 = 5;
    loop {
        match jacobi(&signed_mod(d, n), n) {
            -1 => break,
            0 => return false,
            _ => d = if d > 0 { -(d + 2) } else { -d + 2 },
        }
    }
    let q = (1 - d) / 4;
    let d_mod = signed_mod(d, n);
    let q_mod = signed_mod(q, n);

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    let mut u = BigUint::one();
    let mut v = BigUint::one();
    let mut qk = q_mod.clone();
    let two_n = n << 1;
    for i in (0..k.bits() - 1).rev() {
        u = &u * &v % n;
        v = (&v * &v + &two_n - (&qk << 1u32) % n) % n;
        qk = &qk * &qk % n;
        if k.bit(i) {
            let new_u = half_mod(&u + &v, n);
            let new_v = half_mod(&d_mod * &u + &v, n) % n;
            u = new_u % n;
            v = new_v;
            qk = &qk * &q_mod % n;
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v + &two_n - (&qk << 1u32) % n) % n;
        if v.is_zero() {
            return true;
        }
        qk = &qk * &qk % n;
    }
    false
}
