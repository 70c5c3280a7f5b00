//! Computes the OEIS sequences that `verify` and `enumerate --format bfile`
//! can emit.

use clap::ValueEnum;
use num_bigint::BigUint;

use egyptfrac::classify::{is_pseudoperfect, trajectory};
use egyptfrac::enumerate::{
    enumerate_giuga, enumerate_murthy, enumerate_pp_giuga, enumerate_pp_pseudoperfect,
    enumerate_primary_pseudoperfect, extended_fermat_primes, scan_a003306,
};
use egyptfrac::oeis::SequenceFile;
use egyptfrac::{is_prime, Result, SpfSieve};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SequenceId {
    /// Prime power pseudoperfect numbers.
    #[value(name = "A283423")]
    A283423,
    /// Prime power Giuga numbers.
    #[value(name = "A286497")]
    A286497,
    /// Extended Fermat primes.
    #[value(name = "A286499")]
    A286499,
    /// Divisor-chain numbers, 1 included as in the OEIS entry.
    #[value(name = "A073935")]
    A073935,
    /// Orbit rows n, f(n), ..., 1 read by rows; the limit counts rows.
    #[value(name = "A073932")]
    A073932,
    /// k with 2*3^k + 1 prime; the limit bounds k.
    #[value(name = "A003306")]
    A003306,
    /// Primary pseudoperfect numbers.
    #[value(name = "A054377")]
    A054377,
    /// Giuga numbers.
    #[value(name = "A007850")]
    A007850,
    /// Pseudoperfect numbers.
    #[value(name = "A005835")]
    A005835,
    /// Mersenne primes.
    #[value(name = "A000668")]
    A000668,
    /// Fermat primes.
    #[value(name = "A019434")]
    A019434,
}

impl SequenceId {
    pub fn tag(self) -> &'static str {
        match self {
            SequenceId::A283423 => "A283423",
            SequenceId::A286497 => "A286497",
            SequenceId::A286499 => "A286499",
            SequenceId::A073935 => "A073935",
            SequenceId::A073932 => "A073932",
            SequenceId::A003306 => "A003306",
            SequenceId::A054377 => "A054377",
            SequenceId::A007850 => "A007850",
            SequenceId::A005835 => "A005835",
            SequenceId::A000668 => "A000668",
            SequenceId::A019434 => "A019434",
        }
    }

    /// Whether the limit bounds term values, so a sieve is needed.
    fn needs_sieve(self) -> bool {
        matches!(
            self,
            SequenceId::A283423
                | SequenceId::A286497
                | SequenceId::A073935
                | SequenceId::A054377
                | SequenceId::A007850
        )
    }
}

pub fn compute(id: SequenceId, limit: u64) -> Result<SequenceFile> {
    let sieve = if id.needs_sieve() { Some(SpfSieve::new(limit.max(2))?) } else { None };
    let sieve = || sieve.as_ref().expect("sieve built for value-bounded sequences");
    let values: Vec<BigUint> = match id {
        SequenceId::A283423 => to_big(enumerate_pp_pseudoperfect(sieve(), limit)?),
        SequenceId::A286497 => {
            enumerate_pp_giuga(sieve(), limit)?.into_iter().map(|(n, _)| BigUint::from(n)).collect()
        }
        SequenceId::A286499 => extended_fermat_primes(&BigUint::from(limit.max(2)))?
            .into_iter()
            .map(|e| e.prime)
            .filter(|p| p <= &BigUint::from(limit))
            .collect(),
        SequenceId::A073935 => {
            let mut v = vec![1u64];
            v.extend(enumerate_murthy(sieve(), limit)?);
            to_big(v)
        }
        SequenceId::A073932 => {
            let mut v = Vec::new();
            for n in 1..=limit {
                v.extend_from_slice(trajectory(n)?.values());
            }
            to_big(v)
        }
        SequenceId::A003306 => {
            let k = u32::try_from(limit).map_err(|_| {
                egyptfrac::Error::InvalidArgument(format!("k limit {limit} too large"))
            })?;
            scan_a003306(k).into_iter().map(BigUint::from).collect()
        }
        SequenceId::A054377 => to_big(enumerate_primary_pseudoperfect(sieve(), limit)?),
        SequenceId::A007850 => to_big(enumerate_giuga(sieve(), limit)?),
        SequenceId::A005835 => {
            let mut v = Vec::new();
            for n in 1..=limit {
                if is_pseudoperfect(n)? {
                    v.push(n);
                }
            }
            to_big(v)
        }
        SequenceId::A000668 => {
            let limit = BigUint::from(limit);
            let mut v = Vec::new();
            for k in 2.. {
                let m = (BigUint::from(1u32) << k) - 1u32;
                if m > limit {
                    break;
                }
                if is_prime(&m).is_likely_prime() {
                    v.push(m);
                }
            }
            v
        }
        SequenceId::A019434 => extended_fermat_primes(&BigUint::from(limit.max(2)))?
            .into_iter()
            .filter(|e| e.level == 1)
            .map(|e| e.prime)
            .collect(),
    };
    Ok(SequenceFile::new(id.tag(), 1, values))
}

fn to_big(v: Vec<u64>) -> Vec<BigUint> {
    v.into_iter().map(BigUint::from).collect()
}
