use gcs_core::exact::{
    det_cofactor, functions_equal, q, random_point, Coord, ExactMatrix, GradScalar, IdentityConfig, IdentityVerdict,
    Monomial, RegularFunction, Ring, SparsePolynomial, Q,
};
use gcs_core::{rng_from_seed, Error, Point};
use proptest::prelude::*;
use rand::Rng as _;

fn int_matrix(size: usize, vals: &[i64]) -> ExactMatrix<Q> {
    ExactMatrix::from_fn(size, size, |i, j| q(vals[(i - 1) * size + (j - 1)]))
}

fn x(n: usize, i: usize, j: usize) -> RegularFunction {
    RegularFunction::entry(n, Coord::x(i, j))
}

fn y(n: usize, i: usize, j: usize) -> RegularFunction {
    RegularFunction::entry(n, Coord::y(i, j))
}

fn identity_point(n: usize) -> Point {
    Point::new(ExactMatrix::identity(n), ExactMatrix::identity(n))
}

/// Random expression DAG over `n = 2` built from entries, small constants,
/// sums, products, powers and 2x2 determinants.
fn random_dag(seed: u64, depth: usize) -> RegularFunction {
    let mut rng = rng_from_seed(seed);
    let n = 2;
    let mut pool: Vec<RegularFunction> = Coord::all(n).map(|c| RegularFunction::entry(n, c)).collect();
    pool.push(RegularFunction::constant(n, q(rng.gen_range(-3..=3))));
    for _ in 0..depth {
        let a = pool[rng.gen_range(0..pool.len())].clone();
        let b = pool[rng.gen_range(0..pool.len())].clone();
        let f = match rng.gen_range(0..4) {
            0 => a.add(&b),
            1 => a.mul(&b),
            2 => a.pow(rng.gen_range(0..3)),
            _ => {
                let c = pool[rng.gen_range(0..pool.len())].clone();
                let d = pool[rng.gen_range(0..pool.len())].clone();
                RegularFunction::det(n, &ExactMatrix::new(2, 2, vec![a, b, c, d]))
            }
        };
        pool.push(f);
    }
    pool.pop().unwrap()
}

#[test]
fn det_examples() {
    assert_eq!(int_matrix(2, &[1, 2, 3, 4]).det().unwrap(), q(-2));
    for size in 1..6 {
        assert_eq!(ExactMatrix::<Q>::identity(size).det().unwrap(), q(1));
    }
    let xv = GradScalar::variable(q(3), 0, 1);
    let one = GradScalar::constant(q(1));
    let m = ExactMatrix::new(2, 2, vec![xv.clone(), one.clone(), one, xv]);
    let d = m.det().unwrap();
    assert_eq!(d.value(), &q(8));
    assert_eq!(d.partial(0), q(6));
}

#[test]
fn non_square_det_is_an_error() {
    let m = ExactMatrix::from_fn(2, 3, |i, j| q((i + j) as i64));
    assert!(matches!(m.det(), Err(Error::NotSquare { rows: 2, cols: 3 })));
}

#[test]
fn gradient_elimination_needs_a_nonzero_pivot() {
    let zero = GradScalar::variable(q(0), 0, 2);
    let m = ExactMatrix::new(2, 2, vec![zero.clone(), GradScalar::constant(q(1)), zero, GradScalar::constant(q(2))]);
    assert_eq!(m.det(), Err(Error::NeedsRerandomization));
}

#[test]
fn evaluation_examples() {
    let f = x(2, 1, 1).mul(&y(2, 2, 2));
    assert_eq!(f.eval_q(&identity_point(2)).unwrap(), q(1));

    let det_x = RegularFunction::det_of(2, 2, |i, j| x(2, i, j));
    let p = Point::new(int_matrix(2, &[1, 2, 3, 4]), ExactMatrix::identity(2));
    assert_eq!(det_x.eval_q(&p).unwrap(), q(-2));

    let phi1 = &gcs_core::double::phi_functions(2)[0];
    let p = Point::new(int_matrix(2, &[0, 0, 0, 1]), int_matrix(2, &[0, 0, 1, 0]));
    assert_eq!(phi1.eval_q(&p).unwrap(), q(1));
}

#[test]
fn zero_denominator_is_reported() {
    let f = x(2, 1, 1).div(&x(2, 1, 2));
    assert!(matches!(f.eval_q(&identity_point(2)), Err(Error::DivisionByZero { .. })));
}

#[test]
fn gradient_examples() {
    let det_x = RegularFunction::det_of(2, 2, |i, j| x(2, i, j));
    let g = det_x.eval_grad(&identity_point(2)).unwrap();
    assert_eq!(g.partial(Coord::x(1, 1).index(2)), q(1));
    assert_eq!(g.partial(Coord::x(1, 2).index(2)), q(0));

    let sq = x(1, 1, 1).pow(2);
    let mut p = identity_point(1);
    p.set(Coord::x(1, 1), q(5));
    assert_eq!(sq.eval_grad(&p).unwrap().partial(0), q(10));
}

#[test]
fn phi1_gradient_matches_symbolic_derivative() {
    let n = 2;
    let phi1 = &gcs_core::double::phi_functions(n)[0];
    let expected = y(n, 2, 1).mul(&x(n, 2, 2)).sub(&y(n, 2, 2).mul(&x(n, 2, 1)));
    let poly = expected.to_polynomial(100).unwrap();
    let mut rng = rng_from_seed(11);
    for _ in 0..5 {
        let p = random_point(n, 1000, &mut rng);
        let values: Vec<Q> = Coord::all(n).map(|c| p.get(c).clone()).collect();
        let g = phi1.eval_grad(&p).unwrap();
        assert_eq!(g.value(), &poly.evaluate(&values));
        for i in 0..2 * n * n {
            assert_eq!(g.partial(i), poly.derivative(i).evaluate(&values));
        }
    }
}

#[test]
fn identity_testing_examples() {
    let cfg = IdentityConfig::default();
    let mut rng = rng_from_seed(5);
    let (a, b) = (x(1, 1, 1), y(1, 1, 1));
    let lhs = a.add(&b).pow(2);
    let rhs = RegularFunction::sum(1, [a.pow(2), a.mul(&b).scale(&q(2)), b.pow(2)]);
    assert_eq!(functions_equal(&lhs, &rhs, &cfg, &mut rng).unwrap(), IdentityVerdict::EqualCertified);

    let v = functions_equal(&a, &b, &cfg, &mut rng).unwrap();
    let IdentityVerdict::Unequal { witness, f_value, g_value } = v else { panic!("expected a witness") };
    assert_ne!(f_value, g_value);
    assert_eq!(a.eval_q(&witness).unwrap(), f_value);

    let no_symbolic = IdentityConfig { symbolic_term_limit: 0, ..IdentityConfig::default() };
    let v = functions_equal(&lhs, &rhs, &no_symbolic, &mut rng).unwrap();
    assert!(matches!(v, IdentityVerdict::EqualProbabilistic { trials: 5, .. }));
}

#[test]
fn degenerate_points_hit_the_resample_cap() {
    let cfg = IdentityConfig { range: 0, max_resamples: 10, symbolic_term_limit: 0, ..IdentityConfig::default() };
    let f = x(1, 1, 1).div(&y(1, 1, 1));
    let r = functions_equal(&f, &f, &cfg, &mut rng_from_seed(1));
    assert_eq!(r, Err(Error::ResampleCapExceeded { attempts: 11 }));
}

#[test]
fn exact_division_examples() {
    let xv = SparsePolynomial::var(2, 0);
    let yv = SparsePolynomial::var(2, 1);
    let f = xv.mul(&xv).sub(&yv.mul(&yv));
    assert_eq!(f.exact_divide(&xv.sub(&yv)).unwrap(), xv.add(&yv));
    let g = xv.mul(&xv).add(&SparsePolynomial::constant(2, q(1)));
    assert_eq!(g.exact_divide(&xv), Err(Error::NotDivisible));
}

#[test]
fn monomials_divide_exactly() {
    let a = Monomial(vec![2, 1, 0]);
    let b = Monomial(vec![1, 1, 0]);
    assert_eq!(a.div(&b), Some(Monomial(vec![1, 0, 0])));
    assert_eq!(b.div(&a), None);
    assert_eq!(a.mul(&b).degree(), 5);
}

#[test]
fn submatrix_is_one_indexed_inclusive() {
    let m = ExactMatrix::from_fn(4, 4, |i, j| q((10 * i + j) as i64));
    let s = m.sub(2, 3, 1, 2);
    assert_eq!((s.rows(), s.cols()), (2, 2));
    assert_eq!(s.entry(1, 1), &q(21));
    assert_eq!(s.entry(2, 2), &q(32));
}

#[test]
fn failure_bound_is_capped() {
    let cfg = IdentityConfig { range: 1, ..IdentityConfig::default() };
    assert_eq!(cfg.failure_bound(10), q(1));
    let cfg = IdentityConfig::default();
    assert!(cfg.failure_bound(40) < gcs_core::exact::q_frac(1, 1_000_000_000));
}

proptest! {
    #[test]
    fn bareiss_matches_cofactor(size in 1usize..=5, vals in prop::collection::vec(-9i64..=9, 25)) {
        let m = int_matrix(size, &vals);
        prop_assert_eq!(m.det().unwrap(), det_cofactor(&m));
    }

    #[test]
    fn det_is_multiplicative(size in 1usize..=4, a in prop::collection::vec(-9i64..=9, 16), b in prop::collection::vec(-9i64..=9, 16)) {
        let (ma, mb) = (int_matrix(size, &a), int_matrix(size, &b));
        prop_assert_eq!(ma.mul(&mb).unwrap().det().unwrap(), ma.det().unwrap() * mb.det().unwrap());
    }

    #[test]
    fn rationals_stay_normalized(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let s = gcs_core::exact::q_frac(a, b) + gcs_core::exact::q_frac(c, -d);
        prop_assert!(*s.denom() > 0.into());
        prop_assert_eq!(num_integer::Integer::gcd(s.numer(), s.denom()), if s.numer() == &0.into() { s.denom().clone() } else { 1.into() });
    }

    #[test]
    fn product_divides_back(pa in prop::collection::vec((0u32..3, 0u32..3, -5i64..=5), 1..5), pb in prop::collection::vec((0u32..3, 0u32..3, -5i64..=5), 1..4)) {
        let poly = |t: &[(u32, u32, i64)]| SparsePolynomial::from_terms(2, t.iter().map(|&(i, j, c)| (Monomial(vec![i, j]), q(c))));
        let (a, b) = (poly(&pa), poly(&pb));
        prop_assume!(!b.is_zero());
        prop_assert_eq!(a.mul(&b).exact_divide(&b).unwrap(), a);
    }

    #[test]
    fn value_part_of_gradient_is_the_value(seed in any::<u64>(), depth in 1usize..12) {
        let f = random_dag(seed, depth);
        let p = random_point(2, 50, &mut rng_from_seed(seed ^ 1));
        prop_assert_eq!(f.eval_grad(&p).unwrap().value().clone(), f.eval_q(&p).unwrap());
    }

    #[test]
    fn gradient_matches_symbolic_derivative(seed in any::<u64>(), depth in 1usize..10) {
        let f = random_dag(seed, depth);
        let poly = f.to_polynomial(5000);
        prop_assume!(poly.is_ok());
        let poly = poly.unwrap();
        let p = random_point(2, 50, &mut rng_from_seed(seed ^ 2));
        let values: Vec<Q> = Coord::all(2).map(|c| p.get(c).clone()).collect();
        let g = f.eval_grad(&p).unwrap();
        for i in 0..8 {
            prop_assert_eq!(g.partial(i), poly.derivative(i).evaluate(&values));
        }
    }

    #[test]
    fn elimination_and_adjugate_gradients_agree(seed in any::<u64>(), size in 1usize..=5) {
        let mut rng = rng_from_seed(seed);
        let dim = 3;
        let m = ExactMatrix::from_fn(size, size, |_, _| {
            let grad = (0..dim).map(|_| q(rng.gen_range(-5..=5))).collect();
            GradScalar::from_parts(q(rng.gen_range(-20..=20)), grad)
        });
        match m.det_adjugate() {
            Ok(adj) => {
                let elim = m.det().unwrap();
                prop_assert_eq!(elim.value(), adj.value());
                for i in 0..dim {
                    prop_assert_eq!(elim.partial(i), adj.partial(i));
                }
            }
            Err(e) => prop_assert_eq!(e, Error::NeedsRerandomization),
        }
    }

    #[test]
    fn identity_testing_is_reflexive_and_symmetric(s1 in any::<u64>(), s2 in any::<u64>(), depth in 1usize..8) {
        let cfg = IdentityConfig::default();
        let (f, g) = (random_dag(s1, depth), random_dag(s2, depth));
        prop_assert!(functions_equal(&f, &f, &cfg, &mut rng_from_seed(0)).unwrap().holds());
        let fg = functions_equal(&f, &g, &cfg, &mut rng_from_seed(1)).unwrap().holds();
        let gf = functions_equal(&g, &f, &cfg, &mut rng_from_seed(2)).unwrap().holds();
        prop_assert_eq!(fg, gf);
    }
}
