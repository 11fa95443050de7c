use gcs_core::band::*;
use gcs_core::completeness::one_step_regularity;
use gcs_core::engine::VertexKind;
use gcs_core::exact::{q, ExactMatrix, GradScalar};
use gcs_core::poisson::{bracket_from_grads, bracket_matrix, gradients_at, LogCanonicity};
use gcs_core::{rng_from_seed, Error};
use proptest::prelude::*;

const PAIRS: [(usize, usize); 5] = [(2, 3), (3, 4), (3, 5), (4, 5), (4, 7)];

fn points(k: usize, n: usize, count: usize, seed: u64) -> Vec<BandPoint> {
    let mut rng = rng_from_seed(seed);
    (0..count).map(|_| BandPoint::random(k, n, 1000, &mut rng).unwrap()).collect()
}

/// Edge multiplicities read off the description of the quiver: vertical,
/// horizontal (minus the missing one at the special vertex), diagonal,
/// the dotted path, and the frozen edges at the special vertex.
fn expected_edge_total(k: usize, n: usize) -> u32 {
    let (k, n) = (k as u32, n as u32);
    let mesh = 2 * (n - 2) * (k - 1) + (n - 1) * (k - 1) - 1;
    let path = 2 * (k - 2);
    let frozen = (n - 1) * (k - 1) + n + 1;
    mesh + path + frozen
}

#[test]
fn family_and_quiver_sizes() {
    for (k, n) in PAIRS {
        let (qv, members) = build_band_quiver(k, n).unwrap();
        assert_eq!(qv.len(), (k + 1) * n);
        assert_eq!(members.len(), (k + 1) * n);
        let count = |kind| qv.vertices().iter().filter(|v| v.kind == kind).count();
        assert_eq!(count(VertexKind::Isolated), k - 1);
        assert_eq!(count(VertexKind::Frozen), 2 * n);
        assert_eq!(count(VertexKind::Mutable), (k - 1) * (n - 1));
        let sp = qv.find("(1,k)".replace('k', &k.to_string()).as_str()).unwrap();
        assert_eq!(qv.multiplicity(sp), k as u32);
        assert_eq!(qv.edge_count(), expected_edge_total(k, n), "(k,n)=({k},{n})");
        assert!(!qv.has_two_cycle());
        assert!(qv.isolated_vertices_are_isolated());
    }
    assert_eq!(build_band_seed(4, 7).unwrap().len(), 35);
}

#[test]
fn special_vertex_edges_to_frozen_columns() {
    let (qv, _) = build_band_quiver(4, 5).unwrap();
    let sp = qv.find("(1,4)").unwrap();
    for i in 1..5 {
        assert_eq!(qv.edge(qv.find(&format!("({i},5)")).unwrap(), sp), 3);
    }
    assert_eq!(qv.edge(qv.find("(0,1)").unwrap(), sp), 1);
    assert_eq!(qv.edge(sp, qv.find("(0,5)").unwrap()), 1);
    let (q2, _) = build_band_quiver(2, 4).unwrap();
    let sp2 = q2.find("(1,2)").unwrap();
    assert_eq!(q2.edge(sp2, q2.find("(1,1)").unwrap()), 1);
}

#[test]
fn invalid_ranges() {
    assert!(matches!(build_band_seed(1, 4), Err(Error::Range(_))));
    assert!(matches!(build_band_seed(5, 4), Err(Error::Range(_))));
    assert!(matches!(build_band_seed(2, 2), Err(Error::Range(_))));
    assert!(BandPoint::new(2, 3, ExactMatrix::zeros(2, 3)).is_err());
}

#[test]
fn factorizations_hold() {
    for n in 3..=5 {
        for p in points(n, n, 5, n as u64) {
            for ledger in factorization_check(&p).unwrap() {
                assert!(ledger.passed(), "{} n={n}", ledger.name);
            }
        }
        for k in 3..=n {
            for p in points(k - 1, n, 5, (10 * k + n) as u64) {
                for ledger in induction_check(&p).unwrap() {
                    assert!(ledger.passed(), "{} k={k} n={n}", ledger.name);
                }
            }
        }
    }
}

#[test]
fn band_is_a_poisson_submanifold() {
    for (k, n) in PAIRS {
        for p in points(k, n, 2, 7) {
            assert!(submanifold_violations(&p).is_empty(), "(k,n)=({k},{n})");
        }
    }
}

#[test]
fn inclusion_is_poisson() {
    for (k, n) in [(3, 4), (3, 5), (4, 5)] {
        let lower = BandFamily::new(k - 1, n, CornerSign::Plus).unwrap();
        for p in points(k - 1, n, 2, 8) {
            let wide = p.widen().unwrap();
            let (pt, wpt) = (p.to_point(), wide.to_point());
            assert_eq!(pt, wpt);
            let grads: Vec<GradScalar> = gradients_at(&lower.tilde_phis, &pt).unwrap();
            let pm = bracket_matrix(&pt);
            let (m_low, m_high) = (band_mask(k - 1, n), band_mask(k, n));
            for a in &grads {
                for b in &grads {
                    let low = bracket_from_grads(&pm, a, b, Some(&m_low));
                    let high = bracket_from_grads(&pm, a, b, Some(&m_high));
                    assert_eq!(low, high);
                }
            }
        }
    }
}

#[test]
fn log_canonical_and_compatible() {
    for (k, n) in [(2, 3), (3, 4), (3, 5), (4, 5)] {
        let r = band_poisson_check(k, n, &points(k, n, 5, 9)).unwrap();
        assert!(r.omega.is_constant(), "(k,n)=({k},{n})");
        assert!(r.compat.passed(), "(k,n)=({k},{n}) {:?}", r.compat.failures.first());
        assert_eq!(r.compat.lambda, Some(q(-1)));
    }
}

#[test]
fn omega_recursion() {
    for n in 3..=4 {
        let rows = omega_recursion_check(n, 3, 1000, &mut rng_from_seed(10)).unwrap();
        assert_eq!(rows.len(), n - 1);
        assert!(rows.iter().all(OmegaRecursion::passed), "{rows:?}");
    }
}

#[test]
fn y_variables_coincide() {
    for n in 3..=4 {
        for p in points(n, n, 3, 11) {
            let rows = y_coincidence_check(&p).unwrap();
            assert!(rows.iter().all(YRow::holds), "{:?}", rows.iter().find(|r| !r.holds()));
            assert!(rows.iter().filter(|r| r.expected.is_some()).count() > 0);
        }
    }
}

#[test]
fn index_conventions_are_pinned() {
    for (k, n) in [(3, 4), (4, 5), (4, 4)] {
        let pts = points(k, n, 3, 12);
        let tall = resolve_tall(&pts).unwrap();
        assert_eq!(tall.chosen(), Some(TallConvention { x_first_row: 2 }), "(k,n)=({k},{n})");
        let long = resolve_long(&pts).unwrap();
        // For k = n the two numerator variants coincide and only one is tried.
        let expected = LongConvention { column_shift: -1, numerator_uses_k: k != n };
        assert_eq!(long.chosen(), Some(expected), "(k,n)=({k},{n})");
    }
}

#[test]
fn psi_minors_and_denominators() {
    for (k, n) in [(3, 4), (4, 5)] {
        for p in points(k, n, 3, 13) {
            let g = band_tall(&p, TallConvention { x_first_row: 2 }).unwrap();
            let h = band_long(&p).unwrap();
            for ledger in psi_check(&p, &h.assembled).unwrap() {
                assert!(ledger.passed(), "{} (k,n)=({k},{n})", ledger.name);
            }
            assert!(band_denominator_check(&p, &g.matrix, &h.matrix).unwrap());
        }
    }
}

#[test]
fn one_step_mutations_are_polynomial() {
    for (k, n) in [(2, 3), (3, 3)] {
        let rows = one_step_regularity(&build_band_seed(k, n).unwrap(), 500_000).unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.certified()), "(k,n)=({k},{n})");
    }
}

#[test]
fn tilde_phi_omega_is_constant() {
    let LogCanonicity::Constant(m) = tilde_phi_omega(3, 4, &points(3, 4, 4, 14)).unwrap() else {
        panic!("not constant");
    };
    assert_eq!(m.rows(), block_size(3, 4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn widened_points_vanish_on_the_new_diagonal(seed in any::<u64>(), k in 2usize..4) {
        let p = points(k, 4, 1, seed).pop().unwrap();
        let w = p.widen().unwrap();
        prop_assert!(!w.in_open_band());
        for i in 1..=4 {
            prop_assert_eq!(w.param(1, i), &q(0));
            prop_assert_eq!(w.param(k + 2, i), p.param(k + 1, i));
        }
    }

    #[test]
    fn band_coordinates_round_trip(k in 2usize..=5, n in 3usize..=6, r in 1usize..=6, i in 1usize..=6) {
        prop_assume!(k <= n && r <= k + 1 && i <= n);
        let c = band_coord(k, n, r, i);
        prop_assert_eq!(band_param_at(k, n, c), Some((r, i)));
    }
}
