use cohomotopy::abelian::{
    direct_sum, primary_decomposition, FinAbGroup, IntMatrix, Order, PresentedGroup,
};
use cohomotopy::ext::{enumerate_middle_groups, ext_group, ExtensionProblem};
use cohomotopy::named::NamedGroup;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

mod common;

use common::props::*;

fn matrix_strategy() -> impl Strategy<Value = IntMatrix> {
    (0usize..5, 0usize..5)
        .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-12i64..12, r * c)))
        .prop_map(|(r, c, data)| IntMatrix::from_vec(r, c, big(&data)))
}

fn group_strategy() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(prop::sample::select(CYCLIC_ORDERS.to_vec()), 0..4)
}

proptest! {
    #[test]
    fn smith_is_sound(m in matrix_strategy()) {
        check_smith(&m).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn presentation_invariance(m in matrix_strategy(), seed in any::<u64>()) {
        check_presentation_invariance(&m, seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn first_isomorphism_theorem(src in group_strategy(), tgt in group_strategy(), seed in any::<u64>()) {
        check_first_isomorphism(&random_hom(&src, &tgt, seed)).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn primary_parts_reassemble(orders in group_strategy()) {
        let g = FinAbGroup::from_u64(0, &orders);
        let pd = primary_decomposition(&g);
        prop_assert_eq!(pd.reassemble(), g);
    }

    #[test]
    fn subgroup_times_quotient(orders in prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 6, 8]), 1..4),
                               gens in prop::collection::vec(prop::collection::vec(-6i64..6, 3), 0..3)) {
        let g = PresentedGroup::cyclic_sum_u64(&orders);
        let gens: Vec<Vec<BigInt>> = gens.iter().map(|v| big(&v[..orders.len()])).collect();
        let (sub, quo) = g.subgroup_and_quotient(&gens).unwrap();
        prop_assert_eq!(sub.torsion_order() * quo.torsion_order(), g.canonical().torsion_order());
        for x in &gens {
            match g.element_order(x).unwrap() {
                Order::Finite(n) => prop_assert!((sub.torsion_order() % n).is_zero()),
                Order::Infinite => prop_assert!(false),
            }
        }
    }

    #[test]
    fn split_extension_is_a_candidate(a in group_strategy(), c in group_strategy()) {
        let name = |v: &[u64]| {
            let spec: Vec<(String, Option<u64>)> = v.iter().enumerate()
                .map(|(i, &o)| (format!("g{i}"), if o == 0 { None } else { Some(o) })).collect();
            let refs: Vec<(&str, Option<u64>)> = spec.iter().map(|(s, o)| (s.as_str(), *o)).collect();
            NamedGroup::from_spec(&refs)
        };
        let p = ExtensionProblem::new(name(&a), name(&c));
        let size = p.sub_group().torsion_order() * p.quot_group().torsion_order();
        if size > BigInt::from(1u64 << 20) {
            // Past the default bound the enumeration refuses, naming the bound.
            let refused = matches!(
                enumerate_middle_groups(&p),
                Err(cohomotopy::ext::ExtError::BoundExceeded { bound: 1_048_576, .. })
            );
            prop_assert!(refused);
            return Ok(());
        }
        let set = enumerate_middle_groups(&p).unwrap();
        prop_assert!(set.contains(&p.split()));
        for w in set.candidates.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        for g in &set.candidates {
            prop_assert_eq!(g.free_rank(), p.sub_group().free_rank() + p.quot_group().free_rank());
            prop_assert_eq!(g.torsion_order(),
                p.sub_group().torsion_order() * p.quot_group().torsion_order());
        }
        let ext = ext_group(&p.quot_group().torsion_part(), &p.sub_group().torsion_part());
        if ext.is_trivial() {
            prop_assert_eq!(set.candidates.clone(), vec![p.split()]);
            let r = cohomotopy::ext::apply_evidence(&set, &[]).unwrap();
            prop_assert_eq!(r.result, p.split());
        }
    }
}

#[test]
fn element_orders() {
    let g = PresentedGroup::cyclic_sum_u64(&[4, 3]);
    assert_eq!(g.element_order(&big(&[2, 1])).unwrap(), Order::finite(6));
    assert_eq!(g.element_order(&big(&[0, 0])).unwrap(), Order::finite(1));
    let h = PresentedGroup::cyclic_sum_u64(&[0, 2]);
    assert_eq!(h.element_order(&big(&[1, 0])).unwrap(), Order::Infinite);
    assert!(g.element_order(&big(&[1])).is_err());
}

#[test]
fn subgroup_and_quotient_examples() {
    // Z ⊕ Z/2 ⊕ Z/3 with generators {2ν, Σν′}.
    let g = PresentedGroup::cyclic_sum_u64(&[0, 2, 3]);
    let (s, q) = g
        .subgroup_and_quotient(&[big(&[2, 0, 0]), big(&[0, 1, 0])])
        .unwrap();
    assert_eq!(s, FinAbGroup::from_u64(1, &[2]));
    assert_eq!(q, FinAbGroup::from_u64(0, &[6]));
    let g = PresentedGroup::cyclic_sum_u64(&[4, 3]);
    let (s, q) = g
        .subgroup_and_quotient(&[big(&[2, 0]), big(&[0, 1])])
        .unwrap();
    assert_eq!(s, FinAbGroup::from_u64(0, &[6]));
    assert_eq!(q, FinAbGroup::cyclic(2));
}

#[test]
fn primary_decomposition_example() {
    let g = FinAbGroup::from_u64(1, &[8, 2, 9, 3, 5]);
    let pd = primary_decomposition(&g);
    assert_eq!(pd.free_rank, 1);
    assert_eq!(pd.parts[&BigInt::from(2)], FinAbGroup::from_u64(0, &[8, 2]));
    assert_eq!(pd.parts[&BigInt::from(3)], FinAbGroup::from_u64(0, &[9, 3]));
    assert_eq!(pd.parts[&BigInt::from(5)], FinAbGroup::cyclic(5));
    assert_eq!(
        direct_sum(&pd.parts[&BigInt::from(2)], &pd.parts[&BigInt::from(5)]),
        FinAbGroup::from_u64(0, &[2, 40])
    );
}
