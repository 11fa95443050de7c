use gcs_core::engine::random::{
    abstract_copy, classical_binomial, laurent_check, random_seed, soundness_case, RandomSeedConfig,
};
use gcs_core::engine::{ExchangeString, GeneralizedSeed, MultiplicityQuiver, TauMonomial, VertexKind};
use gcs_core::exact::{functions_equal, Coord, IdentityConfig, RegularFunction};
use gcs_core::{rng_from_seed, Error};
use proptest::prelude::*;

fn var(n: usize, i: usize) -> RegularFunction {
    RegularFunction::entry(n, Coord::from_index(i, n))
}

fn seed_of(q: MultiplicityQuiver, strings: Vec<ExchangeString>) -> GeneralizedSeed {
    let n = gcs_core::engine::random::coordinate_n(q.len());
    let cluster = (0..q.len()).map(|i| var(n, i)).collect();
    let names = q.vertices().iter().map(|v| v.label.clone()).collect();
    GeneralizedSeed::new(n, q, cluster, names, strings).unwrap()
}

fn equal(f: &RegularFunction, g: &RegularFunction) -> bool {
    functions_equal(f, g, &IdentityConfig::default(), &mut rng_from_seed(9)).unwrap().holds()
}

#[test]
fn triangle_mutation() {
    let mut q = MultiplicityQuiver::new();
    for l in ["1", "2", "3"] {
        q.add_vertex(l, VertexKind::Mutable, 1);
    }
    q.add_edge(0, 1, 1);
    q.add_edge(1, 2, 1);
    let m = q.mutate(1).unwrap();
    assert_eq!(m.edge(0, 2), 1);
    assert_eq!(m.edge(1, 0), 1);
    assert_eq!(m.edge(2, 1), 1);
    assert_eq!(m.edge_count(), 3);
}

#[test]
fn special_vertex_multiplies_mutable_paths() {
    let mut q = MultiplicityQuiver::new();
    let i = q.add_vertex("i", VertexKind::Mutable, 1);
    let k = q.add_vertex("k", VertexKind::Mutable, 4);
    let j = q.add_vertex("j", VertexKind::Mutable, 1);
    q.add_edge(i, k, 1);
    q.add_edge(k, j, 1);
    assert_eq!(q.mutate(k).unwrap().edge(i, j), 4);
}

#[test]
fn frozen_path_uses_the_other_multiplicity() {
    let mut q = MultiplicityQuiver::new();
    let i = q.add_vertex("i", VertexKind::Frozen, 1);
    let k = q.add_vertex("k", VertexKind::Mutable, 4);
    let j = q.add_vertex("j", VertexKind::Mutable, 1);
    q.add_edge(i, k, 1);
    q.add_edge(k, j, 1);
    assert_eq!(q.mutate(k).unwrap().edge(i, j), 1);
}

#[test]
fn frozen_frozen_paths_are_ignored() {
    let mut q = MultiplicityQuiver::new();
    let a = q.add_vertex("a", VertexKind::Frozen, 1);
    let k = q.add_vertex("k", VertexKind::Mutable, 1);
    let b = q.add_vertex("b", VertexKind::Frozen, 1);
    q.add_edge(a, k, 2);
    q.add_edge(k, b, 3);
    let m = q.mutate(k).unwrap();
    assert_eq!(m.edge(a, b) + m.edge(b, a), 0);
    assert_eq!(m.edge(k, a), 2);
    assert_eq!(m.edge(b, k), 3);
}

#[test]
fn frozen_and_isolated_vertices_cannot_mutate() {
    let mut q = MultiplicityQuiver::new();
    let f = q.add_vertex("f", VertexKind::Frozen, 1);
    let c = q.add_vertex("c", VertexKind::Isolated, 1);
    assert!(matches!(q.mutate(f), Err(Error::VertexKind { .. })));
    assert!(matches!(q.mutate(c), Err(Error::VertexKind { .. })));
    assert!(matches!(q.mutate(7), Err(Error::Range(_))));
}

#[test]
fn string_reversal() {
    let inner = (1..=3).map(TauMonomial::var).collect();
    let s = ExchangeString::with_inner(0, inner);
    let r = s.reversed();
    assert_eq!(r.coeffs[1], TauMonomial::var(3));
    assert_eq!(r.coeffs[3], TauMonomial::var(1));
    assert!(r.ends_are_one());
    assert_eq!(r.reversed(), s);
    let t = ExchangeString::trivial(0, 1);
    assert_eq!(t.reversed(), t);
}

#[test]
fn bad_strings_are_rejected() {
    let mut q = MultiplicityQuiver::new();
    let k = q.add_vertex("k", VertexKind::Mutable, 2);
    let m = q.add_vertex("m", VertexKind::Mutable, 1);
    let cluster = vec![var(1, 0), var(1, 1)];
    let names = vec!["k".to_string(), "m".to_string()];
    let wrong_degree = ExchangeString::trivial(k, 3);
    assert!(GeneralizedSeed::new(1, q.clone(), cluster.clone(), names.clone(), [wrong_degree]).is_err());
    let mutable_coeff = ExchangeString::with_inner(k, vec![TauMonomial::var(m)]);
    assert!(GeneralizedSeed::new(1, q, cluster, names, [mutable_coeff]).is_err());
}

#[test]
fn ordinary_exchange_is_a_binomial() {
    let mut q = MultiplicityQuiver::new();
    let a = q.add_vertex("a", VertexKind::Mutable, 1);
    let k = q.add_vertex("k", VertexKind::Mutable, 1);
    let b = q.add_vertex("b", VertexKind::Mutable, 1);
    q.add_edge(a, k, 1);
    q.add_edge(k, b, 1);
    let s = seed_of(q, vec![]);
    let n = s.n;
    assert!(equal(&s.exchange_polynomial(k).unwrap(), &var(n, a).add(&var(n, b))));
    assert!(equal(&s.y_variable(k).unwrap(), &var(n, b).div(&var(n, a))));
}

#[test]
fn degree_two_exchange() {
    let mut q = MultiplicityQuiver::new();
    let k = q.add_vertex("k", VertexKind::Mutable, 2);
    let a = q.add_vertex("a", VertexKind::Mutable, 1);
    let b = q.add_vertex("b", VertexKind::Mutable, 1);
    let p = q.add_vertex("p", VertexKind::Isolated, 1);
    q.add_edge(k, a, 1);
    q.add_edge(b, k, 1);
    let s = seed_of(q, vec![ExchangeString::with_inner(k, vec![TauMonomial::var(p)])]);
    let n = s.n;
    let (va, vb, vp) = (var(n, a), var(n, b), var(n, p));
    let expected = RegularFunction::sum(n, [vb.pow(2), vp.mul(&va).mul(&vb), va.pow(2)]);
    assert!(equal(&s.exchange_polynomial(k).unwrap(), &expected));
}

#[test]
fn sink_has_empty_in_product() {
    let mut q = MultiplicityQuiver::new();
    let k = q.add_vertex("k", VertexKind::Mutable, 1);
    let a = q.add_vertex("a", VertexKind::Mutable, 1);
    q.add_edge(k, a, 2);
    let s = seed_of(q, vec![]);
    assert!(equal(&s.y_variable(k).unwrap(), &var(s.n, a).pow(2)));
    assert!(equal(&s.exchange_polynomial(k).unwrap(), &var(s.n, a).pow(2).add(&RegularFunction::one(s.n))));
}

#[test]
fn a2_mutation() {
    let mut q = MultiplicityQuiver::new();
    q.add_vertex("1", VertexKind::Mutable, 1);
    q.add_vertex("2", VertexKind::Mutable, 1);
    q.add_edge(0, 1, 1);
    let s = seed_of(q, vec![]);
    let n = s.n;
    let m = s.mutate(0).unwrap();
    let expected = RegularFunction::one(n).add(&var(n, 1)).div(&var(n, 0));
    assert!(equal(&m.cluster[0], &expected));
    assert_eq!(m.names[0], "1'");
    let back = m.mutate(0).unwrap();
    assert!(equal(&back.cluster[0], &s.cluster[0]));
    assert_eq!(back.quiver, s.quiver);
}

#[test]
fn casimir_monomials_with_trivial_frozen_part() {
    let mut q = MultiplicityQuiver::new();
    let k = q.add_vertex("k", VertexKind::Mutable, 1);
    let f = q.add_vertex("f", VertexKind::Frozen, 1);
    q.add_edge(k, f, 1);
    let s = seed_of(q, vec![]);
    let p = s.casimir_monomials(k).unwrap();
    assert_eq!(p.len(), 2);
    for m in &p {
        assert!(equal(m, &RegularFunction::one(s.n)));
    }
}

#[test]
fn tau_monomials_use_floor_exponents() {
    let mut q = MultiplicityQuiver::new();
    let k = q.add_vertex("k", VertexKind::Mutable, 3);
    let f = q.add_vertex("f", VertexKind::Frozen, 1);
    q.add_edge(k, f, 2);
    let s = seed_of(q, vec![]);
    let exps: Vec<u32> = (0..=3).map(|r| s.tau(k, r).unwrap().0 .0.get(&f).copied().unwrap_or(0)).collect();
    assert_eq!(exps, vec![0, 0, 1, 2]);
}

#[test]
fn laurent_phenomenon_on_the_n3_seed() {
    let seed = gcs_core::double::build_seed_bar(3).unwrap();
    let report = laurent_check(&seed, 4, 200_000).unwrap();
    assert_eq!(report.variables, 10 + 10 * 9 + 10 * 81 + 10 * 729);
    assert!(report.failures.is_empty(), "{:?}", report.failures.first());
}

#[test]
fn abstract_copy_keeps_structure() {
    let seed = gcs_core::double::build_seed_bar(3).unwrap();
    let copy = abstract_copy(&seed);
    assert_eq!(copy.quiver, seed.quiver);
    assert_eq!(copy.strings, seed.strings);
    assert_eq!(copy.n, 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generalized_mutation_is_sound(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let s = random_seed(&RandomSeedConfig::default(), &mut rng);
        let case = soundness_case(&s, 25, &IdentityConfig::default(), &mut rng).unwrap();
        prop_assert!(case.passed(), "{:?}", case);
    }

    #[test]
    fn classical_mutation_is_sound(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let s = random_seed(&RandomSeedConfig::classical(), &mut rng);
        let case = soundness_case(&s, 25, &IdentityConfig::default(), &mut rng).unwrap();
        prop_assert!(case.classical);
        prop_assert!(case.passed(), "{:?}", case);
    }

    #[test]
    fn classical_exchange_matches_binomial_everywhere(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let s = random_seed(&RandomSeedConfig::classical(), &mut rng);
        for k in s.mutable_vertices() {
            prop_assert!(equal(&s.exchange_polynomial(k).unwrap(), &classical_binomial(&s, k)));
        }
    }

    #[test]
    fn quiver_mutation_keeps_normal_form(seed in any::<u64>(), steps in prop::collection::vec(0usize..5, 1..30)) {
        let mut rng = rng_from_seed(seed);
        let s = random_seed(&RandomSeedConfig::default(), &mut rng);
        let mutable = s.mutable_vertices();
        let mut q = s.quiver.clone();
        for k in steps {
            q = match q.mutate(mutable[k % mutable.len()]) {
                Ok(q) => q,
                Err(e) => {
                    prop_assert!(matches!(e, Error::Range(_)));
                    break;
                }
            };
            prop_assert!(!q.has_two_cycle());
            prop_assert!(q.isolated_vertices_are_isolated());
            for v in q.vertices() {
                prop_assert_eq!(v.multiplicity, s.quiver.multiplicity(v.id));
            }
        }
    }

    #[test]
    fn strings_keep_unit_ends(seed in any::<u64>(), steps in prop::collection::vec(0usize..5, 1..20)) {
        let mut rng = rng_from_seed(seed);
        let mut s = random_seed(&RandomSeedConfig::default(), &mut rng);
        let mutable = s.mutable_vertices();
        for k in steps {
            s = match s.mutate(mutable[k % mutable.len()]) {
                Ok(s) => s,
                Err(e) => {
                    prop_assert!(matches!(e, Error::Range(_)));
                    break;
                }
            };
            prop_assert!(s.strings.values().all(|p| p.ends_are_one()));
        }
    }
}

#[test]
fn runaway_multiplicities_are_an_error() {
    let mut q = MultiplicityQuiver::new();
    let a = q.add_vertex("a", VertexKind::Mutable, 1);
    let b = q.add_vertex("b", VertexKind::Mutable, 1);
    let c = q.add_vertex("c", VertexKind::Mutable, 1);
    q.add_edge(a, b, 3);
    q.add_edge(b, c, 3);
    q.add_edge(c, a, 3);
    let mut r = Ok(q);
    for step in 0..200 {
        r = r.and_then(|q| q.mutate(step % 3));
    }
    assert!(matches!(r, Err(Error::Range(_))));
}

#[test]
fn mutation_shares_unchanged_nodes() {
    let mut rng = rng_from_seed(77);
    let s = random_seed(&RandomSeedConfig::default(), &mut rng);
    let k = s.mutable_vertices()[0];
    let m = s.mutate(k).unwrap();
    for v in 0..s.len() {
        if v != k {
            assert!(std::sync::Arc::ptr_eq(m.cluster[v].root(), s.cluster[v].root()));
        }
    }
}
