//! Brent's variant of Pollard's rho, for 64-bit and arbitrary-size cofactors.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::mul_mod;

const BATCH: u64 = 128;

/// A nontrivial factor of the odd composite `n`, or `None` if every
/// polynomial in the budget failed.
pub(crate) fn split_u64(n: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    for c in 1..64u64 {
        let step = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut y = 2u64;
        let mut x = 0u64;
        let mut ys = y;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = step(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
            if r > 1 << 26 {
                break;
            }
        }
        if g == n {
            loop {
                ys = step(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

/// Big-integer counterpart of [`split_u64`]; `max_iterations` bounds the
/// walk length per polynomial.
pub(crate) fn split_big(n: &BigUint, max_iterations: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    for c in 1..16u32 {
        let c = BigUint::from(c);
        let step = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x;
        let mut ys = y.clone();
        let mut q = one.clone();
        let mut g = one.clone();
        let mut r = 1u64;
        let mut walked = 0u64;
        while g.is_one() && walked < max_iterations {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            walked += 2 * r;
            r *= 2;
            if g == *n {
                loop {
                    ys = step(&ys);
                    let diff = if x > ys { &x - &ys } else { &ys - &x };
                    g = diff.gcd(n);
                    if !g.is_one() {
                        break;
                    }
                }
            }
        }
        if !g.is_one() && !g.is_zero() && g != *n {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_word_semiprimes() {
        for n in [8051u64, 10403, 600_851_475_143, 4_294_967_291 * 65521] {
            let f = split_u64(n).unwrap();
            assert!(f > 1 && f < n && n % f == 0, "{n} -> {f}");
        }
    }

    #[test]
    fn splits_big_semiprime() {
        let a = BigUint::from(4_294_967_311u64);
        let b = BigUint::from(18_446_744_073_709_551_557u64);
        let n = &a * &b;
        let f = split_big(&n, 1 << 24).unwrap();
        assert!(f == a || f == b);
    }
}
