use gcs_core::charge::*;
use proptest::prelude::*;

fn st(a: i64, b: i64, c: i64) -> ChargeState {
    ChargeState::new(a, b, c).unwrap()
}

#[test]
fn origin_is_excluded() {
    assert!(ChargeState::new(0, 0, 0).is_none());
    assert_eq!(st(-2, 3, -1).charge(), 6);
    assert_eq!(st(-2, 3, -1).to_string(), "Q(-2,3,-1)");
}

#[test]
fn cases_cover_the_sign_regions() {
    let cases: Vec<u8> = [(1, 1, 1), (-1, -1, -1)].iter().map(|&(a, b, c)| st(a, b, c).case()).collect();
    assert_eq!(cases, vec![1, 8]);
    assert_eq!(st(0, 0, 1).closed_cases().len(), 4);
    let mut all: Vec<u8> = st(1, 0, 0).closed_cases();
    all.extend(st(-1, 0, 0).closed_cases());
    all.sort_unstable();
    all.dedup();
    assert_eq!(all, (1..=8).collect::<Vec<_>>());
}

#[test]
fn tables_agree_on_boundaries() {
    assert!(boundary_check(50).is_empty());
}

#[test]
fn every_move_can_be_undone() {
    assert!(move_symmetry_failures(30).is_empty());
}

#[test]
fn census_at_thirty() {
    let c = census(30);
    let expected = [
        (NodeType(0, 3, 0), 60),
        (NodeType(1, 1, 1), 2640),
        (NodeType(1, 2, 0), 3780),
        (NodeType(2, 0, 1), 158_400),
        (NodeType(2, 1, 0), 8100),
        (NodeType(3, 0, 0), 54_000),
    ];
    assert_eq!(c, expected.into_iter().collect());
    assert_eq!(c.values().sum::<u64>(), 61 * 61 * 61 - 1);
}

#[test]
fn reachability_examples() {
    assert_eq!(bounded_reachability(st(0, 1, 0), st(1, 0, 0), 1), Reachability::Reachable { path: vec![1] });
    assert_eq!(bounded_reachability(st(0, 1, 0), st(0, -1, 0), 1), Reachability::Unreachable { explored: 2 });
    assert_eq!(bounded_reachability(st(0, 1, 0), st(0, -1, 0), 8), Reachability::Unreachable { explored: 35 });
    let s = st(3, -2, 1);
    assert_eq!(bounded_reachability(s, s, 6), Reachability::Reachable { path: vec![] });
    assert!(!bounded_reachability(s, s, 5).is_reachable());
}

#[test]
fn peak_argument_holds() {
    assert!(peak_argument_check(30).is_empty());
}

#[test]
fn listed_conditions_overcount_in_case_four() {
    let ex = listed_111_exceptions(30);
    assert_eq!(ex.len(), 30);
    for (s, t) in &ex {
        assert_eq!((s.alpha, s.beta, s.case()), (0, 0, 4), "{s}");
        assert_eq!(*t, NodeType(1, 2, 0));
    }
}

#[test]
fn constant_charge_components_are_small() {
    let comp = constant_charge_component(st(0, 1, 0));
    assert!(comp.contains(&st(1, 0, 0)));
    assert!(comp.iter().all(|s| s.charge() == 1));
}

proptest! {
    #[test]
    fn moves_are_reversible_and_match_the_stated_change(a in -40i64..=40, b in -40i64..=40, c in -40i64..=40, v in 1u8..=3) {
        prop_assume!((a, b, c) != (0, 0, 0));
        let s = st(a, b, c);
        let t = mutate_charge(s, v).unwrap();
        prop_assert!((1..=3).any(|w| mutate_charge(t, w).ok() == Some(s)));
        prop_assert_eq!(t.charge() - s.charge(), stated_delta(s.case(), v, s));
    }

    #[test]
    fn node_types_count_three_moves(a in -40i64..=40, b in -40i64..=40, c in -40i64..=40) {
        prop_assume!((a, b, c) != (0, 0, 0));
        let s = st(a, b, c);
        let t = classify(s).unwrap();
        prop_assert_eq!(t.0 + t.1 + t.2, 3);
        prop_assert!(type_allowed(s, t) || listed_111(s));
    }
}
