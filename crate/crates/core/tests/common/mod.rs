#![allow(dead_code)]

pub mod oracle;
pub mod props;

use cohomotopy::abelian::FinAbGroup;
use cohomotopy::ext::{enumerate_middle_groups, ExtensionProblem};
use cohomotopy::named::NamedGroup;

pub fn named(orders: &[i64]) -> NamedGroup {
    let spec: Vec<(String, Option<u64>)> = orders
        .iter()
        .enumerate()
        .map(|(i, &o)| (format!("g{i}"), Some(o as u64)))
        .collect();
    let refs: Vec<(&str, Option<u64>)> = spec.iter().map(|(s, o)| (s.as_str(), *o)).collect();
    NamedGroup::from_spec(&refs)
}

/// The library's middle groups for A ↪ G ↠ C, as sorted invariant-factor lists.
pub fn library(a: &[i64], c: &[i64]) -> Vec<Vec<i64>> {
    let p = ExtensionProblem::new(named(a), named(c));
    let set = enumerate_middle_groups(&p).unwrap();
    let mut out: Vec<Vec<i64>> = set
        .candidates
        .iter()
        .map(|g: &FinAbGroup| {
            assert_eq!(g.free_rank(), 0);
            g.torsion()
                .iter()
                .map(|d| i64::try_from(d).unwrap())
                .collect()
        })
        .collect();
    out.sort();
    out
}
