use gcs_core::completeness::{
    build_g, build_h, first_row_solve, first_row_symbolic, g_denominator_check, h_denominator_check,
    notequiv_sequence_check, one_step_regularity, round_trip_mismatches,
};
use gcs_core::double::*;
use gcs_core::engine::VertexKind;
use gcs_core::exact::{functions_equal, q, sample_points, IdentityConfig, RegularFunction};
use gcs_core::poisson::{
    bracket, compatibility_check, extract_weights, in_half_integers, log_canonicity_matrix, y_weight_zero_check,
    LogCanonicity,
};
use gcs_core::{rng_from_seed, Error};
use proptest::prelude::*;

#[test]
fn dimensions() {
    for n in 2..7 {
        assert_eq!(big_n(n), n * (n - 1));
        assert_eq!(build_phi(n).rows(), big_n(n));
        assert_eq!(phi_functions(n).len(), big_n(n));
    }
}

#[test]
fn kappa_table_for_three() {
    let k: Vec<i64> = (1..=6).map(|l| kappa(3, l)).collect();
    assert_eq!(k, vec![3, 2, 1, 1, 0, 0]);
}

#[test]
fn kappa_table_rows_match_binomials() {
    let c2 = |m: i64| m * (m - 1) / 2;
    for n in 2..9usize {
        let ni = n as i64;
        assert_eq!(kappa(n, 1), c2(ni));
        assert_eq!(kappa(n, n - 1), c2(ni - 1) + 1);
        assert_eq!(kappa(n, big_n(n)), 0);
        for mu in 1..n {
            assert_eq!(kappa(n, mu * (n - 1) + 1), c2(ni - mu as i64));
        }
    }
}

#[test]
fn kappa_lambda_mu_relation() {
    for n in 2..9 {
        for k in 1..=big_n(n) {
            let (lambda, _) = lambda_rho(n, k);
            let (mu, _) = mu_sigma(n, k);
            let (a, b) = (kappa(n, k), kappa(n, k + 1));
            let ok = (lambda == mu && a == b + 1) || (lambda + 1 == mu && a == b);
            assert!(ok, "n={n} k={k}");
        }
    }
}

#[test]
fn kappa_steps_repeat_with_period_n_except_at_row_ends() {
    for n in 3..9 {
        for k in 1..big_n(n) - n {
            let same = kappa(n, k) - kappa(n, k + 1) == kappa(n, k + n) - kappa(n, k + n + 1);
            assert_eq!(same, k % (n - 1) != 0, "n={n} k={k}");
        }
    }
}

#[test]
fn phi_is_homogeneous_in_y() {
    let mut rng = rng_from_seed(1);
    for n in 2..=4 {
        for row in kappa_check(n, 3, 1000, &mut rng).unwrap() {
            assert!(row.holds(), "n={n} l={}", row.l);
        }
    }
}

#[test]
fn phi_n2_expansion() {
    let phi = &phi_functions(2)[0];
    let expected = coord_minor(2, &[(true, 2), (false, 2)], &[1, 2]);
    let v = functions_equal(phi, &expected, &IdentityConfig::default(), &mut rng_from_seed(0)).unwrap();
    assert!(v.holds());
}

#[test]
fn c_tilde_signs() {
    let mut rng = rng_from_seed(2);
    let p = &sample_points(3, 1, 100, &mut rng)[0];
    let c = c_functions(3);
    let ct = c_tilde_functions(3);
    for i in 1..3 {
        assert_eq!(ct[i - 1].eval_q(p).unwrap(), c[i].eval_q(p).unwrap());
    }
    let c4 = c_functions(4);
    let ct4 = c_tilde_functions(4);
    let p = &sample_points(4, 1, 100, &mut rng)[0];
    assert_eq!(ct4[0].eval_q(p).unwrap(), -c4[1].eval_q(p).unwrap());
    assert_eq!(ct4[1].eval_q(p).unwrap(), c4[2].eval_q(p).unwrap());
}

#[test]
fn quiver_shape() {
    for n in 3..=5 {
        let (q, members) = build_quiver_bar(n).unwrap();
        assert_eq!(q.len(), 2 * n * n);
        assert_eq!(members.len(), q.len());
        let special = q.find(&grid_label(2, 1)).unwrap();
        assert_eq!(q.multiplicity(special), n as u32);
        let isolated = q.vertices().iter().filter(|v| v.kind == VertexKind::Isolated).count();
        assert_eq!(isolated, n - 1);
        assert!(q.isolated_vertices_are_isolated());
        assert!(!q.has_two_cycle());
    }
    assert!(matches!(build_quiver_bar(2), Err(Error::Range(_))));
}

#[test]
fn special_string_is_reversed_pencil() {
    let s = build_seed_bar(4).unwrap();
    let special = s.find(&grid_label(2, 1)).unwrap();
    let string = s.string(special).unwrap();
    assert_eq!(string.degree(), 4);
    let c3 = s.find("c3").unwrap();
    let c1 = s.find("c1").unwrap();
    assert_eq!(string.coeffs[1].0.keys().copied().collect::<Vec<_>>(), vec![c3]);
    assert_eq!(string.coeffs[3].0.keys().copied().collect::<Vec<_>>(), vec![c1]);
}

#[test]
fn special_exchange_is_the_pencil_identity() {
    let cfg = IdentityConfig::default();
    let mut rng = rng_from_seed(3);
    for n in 3..=4 {
        let s = build_seed_bar(n).unwrap();
        let k = s.find(&grid_label(2, 1)).unwrap();
        let v = functions_equal(&s.exchange_polynomial(k).unwrap(), &long_identity_rhs(n).unwrap(), &cfg, &mut rng).unwrap();
        assert!(v.holds(), "n={n}");
    }
}

#[test]
fn family_is_log_canonical_for_three() {
    let fam = DoubleFamily::new(3).unwrap();
    let funcs: Vec<RegularFunction> = fam.members().into_iter().map(|m| fam.get(m).clone()).collect();
    let pts = sample_points(3, 5, 1_000_000, &mut rng_from_seed(4));
    let LogCanonicity::Constant(omega) = log_canonicity_matrix(&funcs, &pts).unwrap() else {
        panic!("omega depends on the point");
    };
    assert!(in_half_integers(&omega));
    for i in 0..omega.rows() {
        assert_eq!(omega[(i, i)], q(0));
        for j in 0..omega.cols() {
            assert_eq!(omega[(i, j)], -omega[(j, i)].clone());
        }
    }
}

#[test]
fn seed_is_compatible_for_three() {
    let s = build_seed_bar(3).unwrap();
    let pts = sample_points(3, 5, 1_000_000, &mut rng_from_seed(5));
    let r = compatibility_check(&s, &pts, None).unwrap();
    assert!(r.passed(), "{:?}", r.failures.first());
    assert_eq!(r.lambda, Some(q(-1)));
}

#[test]
fn weights_match_the_table_for_three() {
    let n = 3;
    let fam = DoubleFamily::new(n).unwrap();
    let base = &sample_points(n, 1, 1000, &mut rng_from_seed(6))[0];
    for m in fam.members() {
        if let Some(expected) = expected_weights(n, m) {
            assert_eq!(extract_weights(fam.get(m), base).unwrap(), expected, "{m}");
        }
    }
    let s = build_seed_bar(n).unwrap();
    assert!(y_weight_zero_check(&s, base).unwrap().is_empty());
}

#[test]
fn casimirs_commute_with_entries() {
    let n = 3;
    let p = &sample_points(n, 1, 1000, &mut rng_from_seed(7))[0];
    let ct = c_tilde_functions(n);
    for c in &ct {
        for coord in gcs_core::Coord::all(n) {
            let e = RegularFunction::entry(n, coord);
            assert_eq!(bracket(c, &e, p).unwrap(), q(0));
        }
    }
}

#[test]
fn elimination_ledgers_pass_for_three() {
    let pts = sample_points(3, 3, 1000, &mut rng_from_seed(8));
    for p in &pts {
        let g = build_g(3, p).unwrap();
        let h = build_h(3, p).unwrap();
        assert!(g.passed() && h.passed());
        assert!(g_denominator_check(3, p, &g).unwrap());
        assert!(h_denominator_check(3, p, &h).unwrap());
    }
}

#[test]
fn first_row_is_recovered() {
    for n in 2..=3 {
        let pts = sample_points(n, 3, 1000, &mut rng_from_seed(9));
        let ratios: Vec<_> = pts.iter().map(|p| first_row_solve(n, p).unwrap()).collect();
        assert!(ratios.iter().all(|r| r.recovered));
        assert!(ratios.windows(2).all(|w| w[0].ratio == w[1].ratio));
    }
    let kappa2 = first_row_symbolic(2, 10_000).unwrap();
    assert!(kappa2.is_some());
    let p = &sample_points(2, 1, 1000, &mut rng_from_seed(10))[0];
    assert_eq!(Some(first_row_solve(2, p).unwrap().ratio), kappa2);
}

#[test]
fn one_step_mutations_are_polynomial_for_three() {
    let rows = one_step_regularity(&build_seed_bar(3).unwrap(), 500_000).unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.certified()), "{:?}", rows.iter().find(|r| !r.certified()));
}

#[test]
fn notequiv_sequence_gives_the_minors() {
    let res = notequiv_sequence_check(&IdentityConfig::default(), &mut rng_from_seed(11)).unwrap();
    assert_eq!(res.len(), 5);
    assert!(res.iter().all(|r| r.verdict.holds()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn mutation_round_trips_on_the_n3_seed(seq in prop::collection::vec(0usize..10, 1..4)) {
        let s = build_seed_bar(3).unwrap();
        let mutable = s.mutable_vertices();
        let ks: Vec<usize> = seq.iter().map(|&i| mutable[i]).collect();
        let cfg = IdentityConfig { symbolic_term_limit: 0, ..IdentityConfig::default() };
        prop_assert!(round_trip_mismatches(&s, &ks, &cfg, &mut rng_from_seed(12)).unwrap().is_empty());
    }

    #[test]
    fn kappa_holds_at_random_points(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        prop_assert!(kappa_check(3, 1, 1_000_000, &mut rng).unwrap().iter().all(|r| r.holds()));
    }
}
