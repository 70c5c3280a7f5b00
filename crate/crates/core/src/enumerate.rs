//! Range enumerators over the sieve, the two generation trees and the
//! closed-form constructions of new terms.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, Factorization, SpfSieve};
use crate::classify::{
    chain_condition, is_murthy, is_murthy_factored, is_pp_giuga_factored, is_pp_pseudoperfect,
    is_pp_pseudoperfect_factored, pp_giuga_excess_factored, prime_cosum, prime_power_cosum,
    Excess,
};
use crate::error::{invalid, Error, Result};

/// Integers per work unit in the parallel range scans.
pub const BLOCK_SIZE: u64 = 1 << 16;

/// Runs `keep` over every `n` in `[2, limit]` with its factor pairs, in
/// parallel blocks, and returns the kept values in ascending order of `n`.
fn scan_range<T, F>(sieve: &SpfSieve, limit: u64, keep: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &[(u64, u32)]) -> Option<T> + Sync,
{
    if limit < 2 || limit > sieve.limit() {
        return invalid(format!(
            "limit {limit} outside [2, {}] covered by the sieve",
            sieve.limit()
        ));
    }
    let blocks = (limit - 2) / BLOCK_SIZE + 1;
    let parts: Vec<Vec<T>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = 2 + b * BLOCK_SIZE;
            let hi = (lo + BLOCK_SIZE - 1).min(limit);
            let mut pairs = Vec::with_capacity(16);
            let mut out = Vec::new();
            for n in lo..=hi {
                pairs.clear();
                sieve.factor_into(n, &mut pairs);
                if let Some(t) = keep(n, &pairs) {
                    out.push(t);
                }
            }
            out
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

/// Prime power pseudoperfect numbers in `[2, limit]`.
pub fn enumerate_pp_pseudoperfect(sieve: &SpfSieve, limit: u64) -> Result<Vec<u64>> {
    scan_range(sieve, limit, |n, pairs| {
        (prime_power_cosum(pairs, n) + 1 == n as u128).then_some(n)
    })
}

/// Prime power Giuga numbers in `[2, limit]` with their factorizations.
pub fn enumerate_pp_giuga(sieve: &SpfSieve, limit: u64) -> Result<Vec<(u64, Factorization)>> {
    scan_range(sieve, limit, |n, pairs| {
        if matches!(pairs, [(_, 1)]) {
            return None;
        }
        let s = prime_power_cosum(pairs, n) - 1;
        (s % n as u128 == 0).then(|| (n, Factorization::from_sorted_unchecked(pairs.to_vec())))
    })
}

/// Divisor-chain numbers in `[2, limit]`; 1 is left out.
pub fn enumerate_murthy(sieve: &SpfSieve, limit: u64) -> Result<Vec<u64>> {
    scan_range(sieve, limit, |n, pairs| {
        // The orbit must pass through n/2, so n is even.
        if pairs[0].0 != 2 {
            return None;
        }
        is_murthy_factored(&Factorization::from_sorted_unchecked(pairs.to_vec())).then_some(n)
    })
}

/// Primary pseudoperfect numbers in `[2, limit]`.
pub fn enumerate_primary_pseudoperfect(sieve: &SpfSieve, limit: u64) -> Result<Vec<u64>> {
    scan_range(sieve, limit, |n, pairs| {
        (prime_cosum(pairs, n) + 1 == n as u128).then_some(n)
    })
}

/// Giuga numbers in `[2, limit]`.
pub fn enumerate_giuga(sieve: &SpfSieve, limit: u64) -> Result<Vec<u64>> {
    scan_range(sieve, limit, |n, pairs| {
        if matches!(pairs, [(_, 1)]) {
            return None;
        }
        let s = prime_cosum(pairs, n) - 1;
        (s > 0 && s % n as u128 == 0).then_some(n)
    })
}

/// Prime power Giuga numbers up to `limit` whose excess is not exactly 1.
pub fn scan_strict_giuga(sieve: &SpfSieve, limit: u64) -> Result<Vec<(u64, Excess)>> {
    if limit < 12 {
        // Nothing below 12, and the sieve may not even reach 2.
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (n, f) in enumerate_pp_giuga(sieve, limit)? {
        let e = pp_giuga_excess_factored(&f)?;
        if e.to_integer() != Some(&BigUint::one()) {
            out.push((n, e));
        }
    }
    Ok(out)
}

/// Exponents `k` in `[0, k_limit]` with `2 * 3^k + 1` prime.
pub fn scan_a003306(k_limit: u32) -> Vec<u32> {
    let three = BigUint::from(3u32);
    (0..=k_limit)
        .filter(|&k| {
            let q = three.pow(k) * 2u32 + 1u32;
            is_prime(&q).is_likely_prime()
        })
        .collect()
}

/// `2^k (2^k - 1)` when `2^k - 1` is prime.
pub fn mersenne_giuga(k: u32) -> Option<BigUint> {
    let pk = BigUint::one() << k;
    let m = &pk - 1u32;
    is_prime(&m).is_likely_prime().then(|| pk * m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeLabel {
    TimesLargestPrime,
    TimesNPlusOne,
    EfpChild,
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeLabel::TimesLargestPrime => "times-largest-prime",
            EdgeLabel::TimesNPlusOne => "times-n-plus-1",
            EdgeLabel::EfpChild => "efp-child",
        })
    }
}

/// How a node value is known in factored form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactoredForm {
    /// The value itself.
    Product(Factorization),
    /// The value minus one.
    Successor(Factorization),
}

impl fmt::Display for FactoredForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactoredForm::Product(fact) => write!(f, "{fact}"),
            FactoredForm::Successor(fact) => write!(f, "{fact} + 1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub value: BigUint,
    pub form: FactoredForm,
    pub parent: Option<usize>,
    pub edge: Option<EdgeLabel>,
    /// Distance from the root. In the extended Fermat tree this is also the
    /// extended Fermat level.
    pub level: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeKind {
    Murthy,
    ExtendedFermat,
}

/// A rooted tree with nodes stored breadth-first; children of a node appear
/// in their canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenTree {
    pub kind: TreeKind,
    nodes: Vec<TreeNode>,
}

impl GenTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn children(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(move |(_, n)| n.parent == Some(idx))
            .map(|(i, _)| i)
    }

    pub fn find(&self, value: &BigUint) -> Option<usize> {
        self.nodes.iter().position(|n| &n.value == value)
    }

    pub fn find_u64(&self, value: u64) -> Option<usize> {
        self.find(&BigUint::from(value))
    }

    /// Child values of the node holding `value`.
    pub fn child_values(&self, value: u64) -> Vec<BigUint> {
        match self.find_u64(value) {
            Some(i) => self.children(i).map(|c| self.nodes[c].value.clone()).collect(),
            None => Vec::new(),
        }
    }

    /// Keeps the nodes at level `max_level` or above the root. Nodes are
    /// stored by nondecreasing level, so this is a prefix.
    pub fn truncated(mut self, max_level: u32) -> GenTree {
        let keep = self.nodes.partition_point(|n| n.level <= max_level);
        self.nodes.truncate(keep);
        self
    }

    /// Root-to-node path of values.
    pub fn path_to(&self, idx: usize) -> Vec<&BigUint> {
        let mut path = vec![&self.nodes[idx].value];
        let mut cur = idx;
        while let Some(p) = self.nodes[cur].parent {
            path.push(&self.nodes[p].value);
            cur = p;
        }
        path.reverse();
        path
    }
}

fn word_prime(p: &BigUint) -> Result<u64> {
    p.to_u64().ok_or_else(|| {
        Error::ResourceLimit(format!("prime {p} is wider than 64 bits and cannot be a factor"))
    })
}

/// Breadth-first expansion of both branches of the divisor-chain generator
/// from 2: `n -> n p` with `p` the largest prime of `n`, and `n -> n (n + 1)`
/// when `n + 1` is prime. Values above `value_limit` are pruned, as are
/// nodes deeper than `max_depth` when given.
pub fn build_murthy_tree(value_limit: &BigUint, max_depth: Option<u32>) -> Result<GenTree> {
    let root_fact = Factorization::from_sorted_unchecked(vec![(2, 1)]);
    let mut nodes = vec![TreeNode {
        value: BigUint::from(2u32),
        form: FactoredForm::Product(root_fact.clone()),
        parent: None,
        edge: None,
        level: 0,
    }];
    if value_limit < &nodes[0].value {
        return invalid(format!("value limit {value_limit} is below the root 2"));
    }
    let mut queue = VecDeque::from([(0usize, root_fact)]);
    while let Some((idx, fact)) = queue.pop_front() {
        let level = nodes[idx].level + 1;
        if max_depth.is_some_and(|d| level > d) {
            continue;
        }
        let value = nodes[idx].value.clone();
        let p = fact.largest_prime().expect("tree values exceed 1");
        let mut kids = Vec::with_capacity(2);
        let by_p = &value * p;
        if &by_p <= value_limit {
            kids.push((by_p, fact.mul_prime_power(p, 1), EdgeLabel::TimesLargestPrime));
        }
        let succ = &value + 1u32;
        let by_succ = &value * &succ;
        if &by_succ <= value_limit && is_prime(&succ).is_likely_prime() {
            let q = word_prime(&succ)?;
            kids.push((by_succ, fact.mul_prime_power(q, 1), EdgeLabel::TimesNPlusOne));
        }
        for (v, f, edge) in kids {
            nodes.push(TreeNode {
                value: v,
                form: FactoredForm::Product(f.clone()),
                parent: Some(idx),
                edge: Some(edge),
                level,
            });
            queue.push_back((nodes.len() - 1, f));
        }
    }
    Ok(GenTree { kind: TreeKind::Murthy, nodes })
}

/// Tree of extended Fermat primes up to `prime_limit`, rooted at 2.
///
/// The children of `p` are the primes `(p - 1) p^k + 1`, `1 <= k <=
/// exponent_limit`, so the parent of every node is the largest prime of its
/// predecessor. Every extended Fermat prime below the limit appears once
/// `exponent_limit` reaches `log2(prime_limit)`.
pub fn build_efp_tree(prime_limit: &BigUint, exponent_limit: u32) -> Result<GenTree> {
    if exponent_limit == 0 {
        return invalid("exponent limit must be at least 1");
    }
    let two = BigUint::from(2u32);
    if prime_limit < &two {
        return invalid(format!("prime limit {prime_limit} is below the root 2"));
    }
    let mut nodes = vec![TreeNode {
        value: two,
        form: FactoredForm::Successor(Factorization::one()),
        parent: None,
        edge: None,
        level: 0,
    }];
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        let FactoredForm::Successor(chain) = nodes[idx].form.clone() else {
            unreachable!("extended Fermat nodes are stored as successors");
        };
        let p_big = nodes[idx].value.clone();
        let level = nodes[idx].level + 1;
        let pm1 = &p_big - 1u32;
        if &(&pm1 * &p_big + 1u32) > prime_limit {
            continue;
        }
        let p = word_prime(&p_big)?;
        let mut m = pm1;
        for k in 1..=exponent_limit {
            m *= p;
            let q = &m + 1u32;
            if &q > prime_limit {
                break;
            }
            if is_prime(&q).is_likely_prime() {
                let f = chain.mul_prime_power(p, k);
                debug_assert!(chain_condition(&f) && f.len() as u32 == level);
                nodes.push(TreeNode {
                    value: q,
                    form: FactoredForm::Successor(f),
                    parent: Some(idx),
                    edge: Some(EdgeLabel::EfpChild),
                    level,
                });
                queue.push_back(nodes.len() - 1);
            }
        }
    }
    Ok(GenTree { kind: TreeKind::ExtendedFermat, nodes })
}

/// One extended Fermat prime with the factorization of `p - 1` and its level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EfpEntry {
    pub prime: BigUint,
    pub predecessor: Factorization,
    pub level: u32,
}

/// All extended Fermat primes up to `prime_limit`, ascending.
pub fn extended_fermat_primes(prime_limit: &BigUint) -> Result<Vec<EfpEntry>> {
    let exps = prime_limit.bits().max(1) as u32;
    let tree = build_efp_tree(prime_limit, exps)?;
    let mut out: Vec<EfpEntry> = tree
        .nodes
        .into_iter()
        .map(|n| {
            let FactoredForm::Successor(predecessor) = n.form else {
                unreachable!("extended Fermat nodes are stored as successors");
            };
            EfpEntry { prime: n.value, predecessor, level: n.level }
        })
        .collect();
    out.sort_by(|a, b| a.prime.cmp(&b.prime));
    Ok(out)
}

/// The four closed-form ways of producing a new term from a known one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// Divisor-chain `n` -> `n / p`, `p` the largest prime of `n`.
    DivideLargestPrime,
    /// Divisor-chain `n` -> `n p`.
    TimesLargestPrime,
    /// Divisor-chain `n` with `n + 1` prime -> `n (n + 1)^k`.
    ChainTimesSuccessorPower,
    /// Prime power pseudoperfect `n` with `n + 1` prime -> `n (n + 1)^k`.
    PseudoperfectTimesSuccessorPower,
    /// Prime power pseudoperfect `n` with `n - 1` prime -> `n (n - 1)`,
    /// a prime power Giuga number.
    PseudoperfectTimesPredecessor,
}

/// Class an output of a [`Construction`] is guaranteed to belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetClass {
    Murthy,
    PpPseudoperfect,
    PpGiuga,
}

impl Construction {
    pub fn target(self) -> TargetClass {
        match self {
            Construction::DivideLargestPrime
            | Construction::TimesLargestPrime
            | Construction::ChainTimesSuccessorPower => TargetClass::Murthy,
            Construction::PseudoperfectTimesSuccessorPower => TargetClass::PpPseudoperfect,
            Construction::PseudoperfectTimesPredecessor => TargetClass::PpGiuga,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructed {
    pub construction: Construction,
    pub factorization: Factorization,
}

impl Constructed {
    pub fn value(&self) -> BigUint {
        self.factorization.value()
    }

    /// Re-checks membership of the output in its target class, working on
    /// the factored form.
    pub fn verify(&self) -> bool {
        let f = &self.factorization;
        match self.construction.target() {
            TargetClass::Murthy => is_murthy_factored(f),
            TargetClass::PpPseudoperfect => is_pp_pseudoperfect_factored(f),
            TargetClass::PpGiuga => is_pp_giuga_factored(f).unwrap_or(false),
        }
    }
}

fn precondition(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::PreconditionFailed(msg()))
    }
}

/// Builds a new term from `n`; `k` is the exponent for the successor-power
/// constructions and ignored otherwise.
pub fn construct(n: u64, construction: Construction, k: u32) -> Result<Constructed> {
    precondition(n >= 2, || format!("n = {n} must be at least 2"))?;
    let fact = crate::arith::factorize_u64(n)?;
    let largest = fact.largest_prime().expect("n >= 2");
    let successor_prime = || -> Result<u64> {
        let s = n.checked_add(1).ok_or_else(|| Error::ResourceLimit("n + 1 overflows".into()))?;
        precondition(crate::arith::is_prime_u64(s), || format!("n + 1 = {s} is not prime"))?;
        Ok(s)
    };
    let murthy = || precondition(is_murthy(n).unwrap_or(false), || format!("{n} is not a divisor-chain number"));
    let pseudoperfect = || {
        precondition(is_pp_pseudoperfect(n).unwrap_or(false), || {
            format!("{n} is not prime power pseudoperfect")
        })
    };
    let factorization = match construction {
        Construction::DivideLargestPrime => {
            murthy()?;
            fact.div_prime(largest).expect("largest prime divides n")
        }
        Construction::TimesLargestPrime => {
            murthy()?;
            fact.mul_prime_power(largest, 1)
        }
        Construction::ChainTimesSuccessorPower => {
            murthy()?;
            fact.mul_prime_power(successor_prime()?, k)
        }
        Construction::PseudoperfectTimesSuccessorPower => {
            pseudoperfect()?;
            fact.mul_prime_power(successor_prime()?, k)
        }
        Construction::PseudoperfectTimesPredecessor => {
            pseudoperfect()?;
            let q = n - 1;
            precondition(crate::arith::is_prime_u64(q), || format!("n - 1 = {q} is not prime"))?;
            fact.mul_prime_power(q, 1)
        }
    };
    Ok(Constructed { construction, factorization })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve(limit: u64) -> SpfSieve {
        SpfSieve::with_budget(limit, 1 << 30).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn small_enumerations() {
        let s = sieve(100_000);
        assert_eq!(enumerate_pp_pseudoperfect(&s, 21).unwrap(), vec![2, 4, 6, 8, 16, 18, 20]);
        assert_eq!(enumerate_pp_pseudoperfect(&s, 2).unwrap(), vec![2]);
        assert!(enumerate_pp_pseudoperfect(&s, 100_000).unwrap().contains(&23994));
        assert!(enumerate_pp_giuga(&s, 11).unwrap().is_empty());
        let g: Vec<u64> = enumerate_pp_giuga(&s, 60).unwrap().into_iter().map(|p| p.0).collect();
        assert_eq!(g, vec![12, 30, 56]);
        assert!(enumerate_pp_giuga(&s, 1).is_err());
        assert!(enumerate_pp_giuga(&s, 100_001).is_err());
        assert_eq!(enumerate_primary_pseudoperfect(&s, 100_000).unwrap(), vec![2, 6, 42, 1806, 47058]);
        assert_eq!(enumerate_giuga(&s, 100_000).unwrap(), vec![30, 858, 1722, 66198]);
    }

    #[test]
    fn strict_giuga_small() {
        let s = sieve(100);
        assert!(scan_strict_giuga(&s, 100).unwrap().is_empty());
        assert!(scan_strict_giuga(&s, 11).unwrap().is_empty());
    }

    #[test]
    fn a003306_prefix() {
        assert_eq!(scan_a003306(9), vec![0, 1, 2, 4, 5, 6, 9]);
        assert_eq!(scan_a003306(0), vec![0]);
    }

    #[test]
    fn mersenne_constructions() {
        assert_eq!(mersenne_giuga(2), Some(big(12)));
        assert_eq!(mersenne_giuga(5), Some(big(992)));
        assert_eq!(mersenne_giuga(4), None);
        assert_eq!(mersenne_giuga(1), None);
    }

    #[test]
    fn murthy_tree_children() {
        let t = build_murthy_tree(&big(80_000), None).unwrap();
        assert_eq!(t.child_values(2), vec![big(4), big(6)]);
        assert_eq!(t.child_values(8), vec![big(16)]);
        assert_eq!(t.child_values(342), vec![big(6498)]);
        assert_eq!(t.child_values(1806), vec![big(77658)]);
        for node in t.nodes() {
            if let Some(p) = node.parent {
                assert!(node.value > t.nodes()[p].value);
            }
        }
        let shallow = build_murthy_tree(&big(80_000), Some(1)).unwrap();
        assert_eq!(shallow.len(), 3);
        assert_eq!(t.clone().truncated(1), shallow);
        assert!(t.nodes().windows(2).all(|w| w[0].level <= w[1].level));
        assert!(build_murthy_tree(&big(1), None).is_err());
    }

    #[test]
    fn efp_tree_children() {
        let t = build_efp_tree(&big(1_000_000), 9).unwrap();
        let three: Vec<BigUint> = [7u64, 19, 163, 487, 1459, 39367].iter().map(|&v| big(v)).collect();
        assert_eq!(t.child_values(3), three);
        let t = build_efp_tree(&big(100_000), 20).unwrap();
        assert_eq!(t.child_values(43), vec![big(77659)]);
        let idx = t.find_u64(77659).unwrap();
        let path: Vec<u64> = t.path_to(idx).iter().map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(path, vec![2, 3, 7, 43, 77659]);
        assert_eq!(t.nodes()[idx].level, 4);
    }

    #[test]
    fn constructions() {
        let c = construct(18, Construction::PseudoperfectTimesPredecessor, 0).unwrap();
        assert_eq!(c.value(), big(306));
        assert!(c.verify());
        let c = construct(2, Construction::PseudoperfectTimesSuccessorPower, 0).unwrap();
        assert_eq!(c.value(), big(2));
        let c = construct(6, Construction::ChainTimesSuccessorPower, 2).unwrap();
        assert_eq!(c.value(), big(294));
        assert!(c.verify());
        // 23993 is prime, so this one goes through.
        let c = construct(23994, Construction::PseudoperfectTimesPredecessor, 0).unwrap();
        assert!(c.verify());
        let c = construct(20, Construction::PseudoperfectTimesPredecessor, 0).unwrap();
        assert_eq!(c.value(), big(380));
        let c = construct(16, Construction::PseudoperfectTimesPredecessor, 0);
        assert!(matches!(c, Err(Error::PreconditionFailed(_))));
        let c = construct(558, Construction::PseudoperfectTimesSuccessorPower, 1);
        assert!(matches!(c, Err(Error::PreconditionFailed(_))));
        let c = construct(23994, Construction::TimesLargestPrime, 0);
        assert!(matches!(c, Err(Error::PreconditionFailed(_))));
        let c = construct(8, Construction::ChainTimesSuccessorPower, 1);
        assert!(matches!(c, Err(Error::PreconditionFailed(_))));
        assert_eq!(construct(20, Construction::DivideLargestPrime, 0).unwrap().value(), big(4));
    }
}
