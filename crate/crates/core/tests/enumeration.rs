use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use egyptfrac::classify::{efp_level, is_murthy, is_pp_giuga, is_pp_pseudoperfect};
use egyptfrac::enumerate::{
    build_efp_tree, build_murthy_tree, construct, enumerate_murthy, enumerate_pp_giuga,
    enumerate_pp_pseudoperfect, mersenne_giuga, Construction, FactoredForm,
};
use egyptfrac::oeis::{read_bfile, write_bfile, SequenceFile};
use egyptfrac::{factorize_u64, is_prime_u64, SpfSieve};

fn sieve(limit: u64) -> SpfSieve {
    SpfSieve::with_budget(limit, 1 << 30).unwrap()
}

#[test]
fn range_scans_match_pointwise_predicates() {
    let s = sieve(200_000);
    let pp: Vec<u64> = (2..=200_000).filter(|&n| is_pp_pseudoperfect(n).unwrap()).collect();
    assert_eq!(enumerate_pp_pseudoperfect(&s, 200_000).unwrap(), pp);
    let giuga: Vec<u64> = (2..=200_000).filter(|&n| is_pp_giuga(n).unwrap()).collect();
    let scanned: Vec<u64> = enumerate_pp_giuga(&s, 200_000).unwrap().into_iter().map(|r| r.0).collect();
    assert_eq!(scanned, giuga);
    let murthy: Vec<u64> = (2..=200_000).filter(|&n| is_murthy(n).unwrap()).collect();
    assert_eq!(enumerate_murthy(&s, 200_000).unwrap(), murthy);
}

#[test]
fn scans_are_deterministic_across_thread_counts() {
    let s = sieve(2_000_000);
    let many = enumerate_pp_giuga(&s, 2_000_000).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let one = pool.install(|| enumerate_pp_giuga(&s, 2_000_000).unwrap());
    assert_eq!(many, one);
    assert_eq!(enumerate_pp_giuga(&s, 2_000_000).unwrap(), many);
}

#[test]
fn murthy_tree_covers_every_chain_number() {
    let limit = 1_000_000u64;
    let tree = build_murthy_tree(&BigUint::from(limit), None).unwrap();
    let nodes: BTreeSet<u64> = tree.nodes().iter().map(|n| n.value.to_u64().unwrap()).collect();
    assert_eq!(nodes.len(), tree.len(), "tree values are distinct");
    let scanned: BTreeSet<u64> = enumerate_murthy(&sieve(limit), limit).unwrap().into_iter().collect();
    assert_eq!(nodes, scanned);
    for node in tree.nodes() {
        let v = node.value.to_u64().unwrap();
        assert!(is_murthy(v).unwrap() && is_pp_pseudoperfect(v).unwrap(), "{v}");
        let FactoredForm::Product(f) = &node.form else { panic!("product form expected") };
        assert_eq!(f.to_u64(), Some(v));
    }
}

#[test]
fn efp_tree_matches_definition() {
    let limit = 100_000u64;
    let tree = build_efp_tree(&BigUint::from(limit), 17).unwrap();
    let in_tree: BTreeSet<u64> = tree.nodes().iter().map(|n| n.value.to_u64().unwrap()).collect();
    let direct: BTreeSet<u64> = (2..=limit)
        .filter(|&p| is_prime_u64(p) && efp_level(&BigUint::from(p), None).unwrap().is_some())
        .collect();
    assert_eq!(in_tree, direct);
    for node in tree.nodes() {
        let q = node.value.to_u64().unwrap();
        assert_eq!(efp_level(&node.value, None).unwrap(), Some(node.level));
        if let Some(parent) = node.parent {
            let parent = &tree.nodes()[parent];
            assert_eq!(node.level, parent.level + 1);
            let largest = factorize_u64(q - 1).unwrap().largest_prime().unwrap();
            assert_eq!(BigUint::from(largest), parent.value);
        }
    }
}

#[test]
fn mersenne_construction_lands_in_scan() {
    let limit = 10_000_000u64;
    let scanned: BTreeSet<u64> =
        enumerate_pp_giuga(&sieve(limit), limit).unwrap().into_iter().map(|r| r.0).collect();
    let built: Vec<u64> = (2..32)
        .filter_map(mersenne_giuga)
        .filter_map(|v| v.to_u64())
        .filter(|&v| v <= limit)
        .collect();
    assert_eq!(built, vec![12, 56, 992, 16256]);
    assert!(built.iter().all(|v| scanned.contains(v)));
}

#[test]
fn constructions_from_all_small_seeds() {
    let mut checked = 0;
    for n in 2..=10_000u64 {
        let murthy = is_murthy(n).unwrap();
        let pp = is_pp_pseudoperfect(n).unwrap();
        let mut attempts = vec![];
        if murthy {
            attempts.push((Construction::DivideLargestPrime, 0));
            attempts.push((Construction::TimesLargestPrime, 0));
            if is_prime_u64(n + 1) {
                attempts.extend((0..=3).map(|k| (Construction::ChainTimesSuccessorPower, k)));
            }
        }
        if pp && is_prime_u64(n + 1) {
            attempts.extend((0..=3).map(|k| (Construction::PseudoperfectTimesSuccessorPower, k)));
        }
        if pp && is_prime_u64(n - 1) {
            attempts.push((Construction::PseudoperfectTimesPredecessor, 0));
        }
        for (c, k) in attempts {
            let out = construct(n, c, k).unwrap();
            let v = out.value().to_u64().unwrap();
            let holds = match c {
                Construction::PseudoperfectTimesSuccessorPower => is_pp_pseudoperfect(v).unwrap(),
                Construction::PseudoperfectTimesPredecessor => is_pp_giuga(v).unwrap(),
                _ => is_murthy(v).unwrap(),
            };
            assert!(holds && out.verify(), "{c:?} n = {n} k = {k} -> {v}");
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn counterexample_guards() {
    assert!(!is_pp_pseudoperfect(43 * 23994).unwrap());
    assert!(!is_pp_pseudoperfect(23994 / 43).unwrap());
    assert!(!is_pp_giuga(18 * 17 * 17).unwrap());
}

fn giant_decimal() -> impl Strategy<Value = BigUint> {
    proptest::collection::vec(0u32..10, 1..970)
        .prop_map(|digits| digits.into_iter().fold(BigUint::from(0u32), |acc, d| acc * 10u32 + d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn bfile_round_trip(offset in -5i64..5, values in proptest::collection::vec(giant_decimal(), 0..20)) {
        let offset = if values.is_empty() { 1 } else { offset };
        let seq = SequenceFile::new("A000000", offset, values);
        let mut buf = Vec::new();
        write_bfile(&seq, &mut buf).unwrap();
        prop_assert_eq!(read_bfile("A000000", buf.as_slice()).unwrap(), seq);
    }
}
