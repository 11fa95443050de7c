use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng as _;

use super::{Coord, ExactMatrix, Point, RegularFunction, Q};
use crate::{Error, Rng};

/// Parameters of randomized identity testing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityConfig {
    /// Independent random points per identity.
    pub trials: usize,
    /// Coordinates are drawn uniformly from `[-range, range]`.
    pub range: i64,
    /// Degenerate points (a zero denominator) tolerated before giving up.
    pub max_resamples: usize,
    /// Attempt a symbolic proof when every intermediate polynomial stays
    /// under this many terms. Zero disables the attempt.
    pub symbolic_term_limit: usize,
    /// Largest matrix size `n` for which the symbolic attempt is made.
    pub symbolic_max_n: usize,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        IdentityConfig { trials: 5, range: 1_000_000, max_resamples: 1000, symbolic_term_limit: 2000, symbolic_max_n: 3 }
    }
}

impl IdentityConfig {
    /// Size of the sample set `S`.
    pub fn sample_size(&self) -> u64 {
        2 * self.range as u64 + 1
    }

    /// `(D / |S|)^trials`, capped at 1.
    pub fn failure_bound(&self, degree: u64) -> Q {
        let ratio = Q::new(BigInt::from(degree), BigInt::from(self.sample_size()));
        if ratio >= Q::one() {
            return Q::one();
        }
        num_traits::pow(ratio, self.trials)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityVerdict {
    /// Both sides expand to the same polynomial.
    EqualCertified,
    /// All sampled points agree.
    EqualProbabilistic { trials: usize, failure_bound: Q, resamples: usize },
    /// A point where the two sides differ.
    Unequal { witness: Point, f_value: Q, g_value: Q },
}

impl IdentityVerdict {
    pub fn holds(&self) -> bool {
        !matches!(self, IdentityVerdict::Unequal { .. })
    }
}

/// Uniform random point of `Mat_n x Mat_n` with coordinates in
/// `[-range, range]`.
pub fn random_point(n: usize, range: i64, rng: &mut Rng) -> Point {
    let mut draw = || Q::from_integer(BigInt::from(rng.gen_range(-range..=range)));
    let x = ExactMatrix::from_fn(n, n, |_, _| draw());
    let y = ExactMatrix::from_fn(n, n, |_, _| draw());
    Point::new(x, y)
}

pub fn sample_points(n: usize, count: usize, range: i64, rng: &mut Rng) -> Vec<Point> {
    (0..count).map(|_| random_point(n, range, rng)).collect()
}

fn is_degenerate(e: &Error) -> bool {
    matches!(e, Error::DivisionByZero { .. } | Error::NeedsRerandomization)
}

/// Decide whether `f == g` as rational functions.
///
/// A symbolic expansion is tried first when enabled; if it does not fit in
/// the term budget (or a quotient is not polynomial) the two sides are
/// compared at `cfg.trials` random points. Points where either side has a
/// zero denominator are redrawn.
pub fn functions_equal(
    f: &RegularFunction,
    g: &RegularFunction,
    cfg: &IdentityConfig,
    rng: &mut Rng,
) -> Result<IdentityVerdict, Error> {
    let n = f.n();
    if cfg.symbolic_term_limit > 0 && n <= cfg.symbolic_max_n {
        if let (Ok(pf), Ok(pg)) = (f.to_polynomial(cfg.symbolic_term_limit), g.to_polynomial(cfg.symbolic_term_limit)) {
            if pf == pg {
                return Ok(IdentityVerdict::EqualCertified);
            }
        }
    }
    let mut resamples = 0;
    let mut done = 0;
    while done < cfg.trials {
        let p = random_point(n, cfg.range, rng);
        let values = f.eval_q(&p).and_then(|a| g.eval_q(&p).map(|b| (a, b)));
        match values {
            Ok((a, b)) => {
                if a != b {
                    return Ok(IdentityVerdict::Unequal { witness: p, f_value: a, g_value: b });
                }
                done += 1;
            }
            Err(e) if is_degenerate(&e) => {
                resamples += 1;
                if resamples > cfg.max_resamples {
                    return Err(Error::ResampleCapExceeded { attempts: resamples });
                }
            }
            Err(e) => return Err(e),
        }
    }
    let degree = f.sub(g).degree_bound().0;
    Ok(IdentityVerdict::EqualProbabilistic { trials: cfg.trials, failure_bound: cfg.failure_bound(degree), resamples })
}

/// Evaluate `f` at `point`, treating any coordinate missing from `values` as
/// zero. Convenience for tests.
pub fn eval_sparse(f: &RegularFunction, values: &[(Coord, Q)]) -> Result<Q, Error> {
    let n = f.n();
    let mut p = Point::new(ExactMatrix::from_fn(n, n, |_, _| Q::zero()), ExactMatrix::from_fn(n, n, |_, _| Q::zero()));
    for (c, v) in values {
        p.set(*c, v.clone());
    }
    f.eval_q(&p)
}
