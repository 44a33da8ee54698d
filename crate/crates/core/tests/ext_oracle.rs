//! Candidate enumeration checked against exhaustive subgroup search. The
//! sweep over every pair with |A|, |C| <= 64 runs in the acceptance target.

mod common;

use cohomotopy::abelian::FinAbGroup;
use cohomotopy::ext::{enumerate_middle_groups, ExtensionProblem};
use common::oracle::*;
use common::{library, named};

#[test]
fn oracle_sanity() {
    assert_eq!(oracle(&[2], &[2]), vec![vec![2, 2], vec![4]]);
    assert_eq!(oracle(&[4], &[4]), vec![vec![2, 8], vec![4, 4], vec![16]]);
    assert_eq!(oracle(&[3], &[2]), vec![vec![6]]);
    assert_eq!(abelian_groups_of_order(64).len(), 11);
}

#[test]
fn agrees_with_oracle_on_small_orders() {
    // Every pair with |A|·|C| ≤ 128.
    let groups = all_groups_up_to(64);
    let mut checked = 0;
    for a in &groups {
        for c in &groups {
            let order = a.iter().product::<i64>() * c.iter().product::<i64>();
            if order > 128 {
                continue;
            }
            assert_eq!(library(a, c), oracle(a, c), "A = {a:?}, C = {c:?}");
            checked += 1;
        }
    }
    assert!(checked > 500, "{checked}");
}

#[test]
fn primary_oracle_matches_plain_search() {
    // The sampled witnesses only shortcut searches that would succeed.
    let mut o = PrimaryOracle::default();
    for p in [2i64, 3] {
        for ea in 0..=4u32 {
            for ec in 0..=4u32 {
                if p.pow(ea + ec) > 1024 {
                    continue;
                }
                for mu in partitions(ea) {
                    for nu in partitions(ec) {
                        let a: Vec<i64> = mu.iter().rev().map(|&e| p.pow(e)).collect();
                        let c: Vec<i64> = nu.iter().rev().map(|&e| p.pow(e)).collect();
                        assert_eq!(o.middle_groups(&a, &c), oracle(&a, &c), "{a:?} {c:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn sampled_extensions_have_the_right_ends() {
    // (Z/4 + Z/2) by Z/4 glued along the first factor.
    assert_eq!(extension_type(&[2, 4], &[4], &[vec![0, 1]]), vec![2, 16]);
    assert_eq!(extension_type(&[2, 4], &[4], &[vec![0, 0]]), vec![2, 4, 4]);
    assert!(realizes(&[2, 16], &[2, 4], &[4]));
}

#[test]
fn every_candidate_is_realized_by_some_extension_class() {
    use cohomotopy::ext::{apply_evidence, Citation, Evidence, EvidenceRecord, ExtError};
    let groups = all_groups_up_to(32);
    for a in &groups {
        for c in &groups {
            let order = a.iter().product::<i64>() * c.iter().product::<i64>();
            if order > 64 {
                continue;
            }
            let set = enumerate_middle_groups(&ExtensionProblem::new(named(a), named(c))).unwrap();
            for g in &set.candidates {
                let fact = EvidenceRecord::new(
                    Evidence::ExternalFact { group: g.clone() },
                    Citation::new("test", "candidate"),
                );
                let r = apply_evidence(&set, &[fact]).unwrap();
                assert_eq!(&r.result, g, "A = {a:?}, C = {c:?}");
            }
            let impossible = FinAbGroup::from_u64(1, &[]);
            let fact = EvidenceRecord::new(
                Evidence::ExternalFact { group: impossible },
                Citation::new("test", "not a candidate"),
            );
            assert!(matches!(
                apply_evidence(&set, &[fact]),
                Err(ExtError::Inconsistent { .. })
            ));
        }
    }
}
