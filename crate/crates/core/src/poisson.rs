//! The standard Poisson-Lie bracket on `Mat_n x Mat_n` in matrix entries,
//! log-canonicity, compatibility and toric weights.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::engine::GeneralizedSeed;
use crate::exact::{q_frac, Coord, Evaluator, ExactMatrix, GradScalar, Point, RegularFunction, Tag, Q};
use crate::Error;

fn sign(v: i64) -> i64 {
    v.signum()
}

/// Bracket of two coordinate functions at a point.
pub fn entry_bracket(a: Coord, b: Coord, p: &Point) -> Q {
    let half = q_frac(1, 2);
    let (i, j, pp, qq) = (a.row as i64, a.col as i64, b.row as i64, b.col as i64);
    let c = |t: Tag, r: i64, s: i64| p.get(Coord { tag: t, row: r as usize, col: s as usize }).clone();
    match (a.tag, b.tag) {
        (Tag::X, Tag::X) | (Tag::Y, Tag::Y) => {
            let s = sign(pp - i) + sign(qq - j);
            if s == 0 {
                return Q::zero();
            }
            half * Q::from_integer(BigInt::from(s)) * c(a.tag, i, qq) * c(a.tag, pp, j)
        }
        (Tag::Y, Tag::X) => {
            let s1 = 1 + sign(qq - j);
            let s2 = 1 + sign(i - pp);
            let mut v = Q::zero();
            if s1 != 0 {
                v += Q::from_integer(BigInt::from(s1)) * c(Tag::Y, i, qq) * c(Tag::X, pp, j);
            }
            if s2 != 0 {
                v -= Q::from_integer(BigInt::from(s2)) * c(Tag::X, i, qq) * c(Tag::Y, pp, j);
            }
            half * v
        }
        (Tag::X, Tag::Y) => -entry_bracket(b, a, p),
    }
}

/// The `2n^2 x 2n^2` matrix of coordinate brackets at `p`, in the dense
/// coordinate order.
pub fn bracket_matrix(p: &Point) -> ExactMatrix<Q> {
    let n = p.n();
    ExactMatrix::from_fn(2 * n * n, 2 * n * n, |a, b| {
        entry_bracket(Coord::from_index(a - 1, n), Coord::from_index(b - 1, n), p)
    })
}

/// `P grad g`, optionally with the gradient and the result restricted to
/// the coordinates where `mask` is true.
pub fn apply_bracket(pm: &ExactMatrix<Q>, gg: &GradScalar, mask: Option<&[bool]>) -> Vec<Q> {
    let dim = pm.rows();
    let keep = |a: usize| !matches!(mask, Some(m) if !m[a]);
    let g = gg.gradient();
    let mut out = alloc::vec![Q::zero(); dim];
    for (b, gb) in g.iter().enumerate() {
        if gb.is_zero() || !keep(b) {
            continue;
        }
        for (a, slot) in out.iter_mut().enumerate() {
            let e = &pm[(a, b)];
            if !e.is_zero() && keep(a) {
                *slot += e * gb;
            }
        }
    }
    out
}

/// `grad f . v`.
pub fn grad_dot(gf: &GradScalar, v: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (a, ga) in gf.gradient().iter().enumerate() {
        if !ga.is_zero() && !v[a].is_zero() {
            acc += ga * &v[a];
        }
    }
    acc
}

/// `grad f^T P grad g`, optionally with both gradients restricted to the
/// coordinates where `mask` is true.
pub fn bracket_from_grads(pm: &ExactMatrix<Q>, gf: &GradScalar, gg: &GradScalar, mask: Option<&[bool]>) -> Q {
    grad_dot(gf, &apply_bracket(pm, gg, mask))
}

/// `{f, g}` at `p`.
pub fn bracket(f: &RegularFunction, g: &RegularFunction, p: &Point) -> Result<Q, Error> {
    let mut ev = Evaluator::<GradScalar>::at_point(p);
    let gf = ev.eval(f)?;
    let gg = ev.eval(g)?;
    Ok(bracket_from_grads(&bracket_matrix(p), &gf, &gg, None))
}

/// Values and gradients of many functions at one point, sharing work on
/// common subexpressions.
pub fn gradients_at(funcs: &[RegularFunction], p: &Point) -> Result<Vec<GradScalar>, Error> {
    let mut ev = Evaluator::<GradScalar>::at_point(p);
    funcs.iter().map(|f| ev.eval(f)).collect()
}

/// `{f_i, f_j} / (f_i f_j)` for all pairs at one point.
pub fn omega_at(funcs: &[RegularFunction], p: &Point, mask: Option<&[bool]>) -> Result<ExactMatrix<Q>, Error> {
    let grads = gradients_at(funcs, p)?;
    omega_from_grads(&grads, &bracket_matrix(p), mask)
}

pub fn omega_from_grads(grads: &[GradScalar], pm: &ExactMatrix<Q>, mask: Option<&[bool]>) -> Result<ExactMatrix<Q>, Error> {
    let m = grads.len();
    if grads.iter().any(|g| g.value().is_zero()) {
        return Err(Error::DivisionByZero { node: 0 });
    }
    let pg: Vec<Vec<Q>> = grads.iter().map(|g| apply_bracket(pm, g, mask)).collect();
    let mut out = ExactMatrix::from_fn(m, m, |_, _| Q::zero());
    for i in 0..m {
        for j in i + 1..m {
            let b = grad_dot(&grads[i], &pg[j]);
            let w = b / (grads[i].value() * grads[j].value());
            out.set_entry(j + 1, i + 1, -w.clone());
            out.set_entry(i + 1, j + 1, w);
        }
    }
    Ok(out)
}

/// Outcome of a log-canonicity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogCanonicity {
    /// The same matrix at every point.
    Constant(ExactMatrix<Q>),
    /// The pair `(i, j)` (0-based) whose ratio differs between point 0 and
    /// point `point`.
    NotConstant { i: usize, j: usize, point: usize, first: Q, other: Q },
}

impl LogCanonicity {
    pub fn is_constant(&self) -> bool {
        matches!(self, LogCanonicity::Constant(_))
    }
}

/// Compare per-point omega matrices.
pub fn compare_omegas(mats: &[ExactMatrix<Q>]) -> LogCanonicity {
    let first = &mats[0];
    for (t, m) in mats.iter().enumerate().skip(1) {
        for i in 0..first.rows() {
            for j in 0..first.cols() {
                if first[(i, j)] != m[(i, j)] {
                    return LogCanonicity::NotConstant { i, j, point: t, first: first[(i, j)].clone(), other: m[(i, j)].clone() };
                }
            }
        }
    }
    LogCanonicity::Constant(first.clone())
}

pub fn log_canonicity_matrix(funcs: &[RegularFunction], points: &[Point]) -> Result<LogCanonicity, Error> {
    let mats = points.iter().map(|p| omega_at(funcs, p, None)).collect::<Result<Vec<_>, _>>()?;
    Ok(compare_omegas(&mats))
}

/// True when every entry lies in `(1/2) Z`.
pub fn in_half_integers(m: &ExactMatrix<Q>) -> bool {
    let two = Q::from_integer(BigInt::from(2));
    m.data().iter().all(|v| (v * &two).is_integer())
}

/// A failed compatibility condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompatFailure {
    /// `{x_i, y_j}/(x_i y_j)` off the diagonal was nonzero.
    OffDiagonal { i: usize, j: usize, point: usize, value: Q },
    /// The diagonal value was not `lambda d_j`.
    Diagonal { j: usize, point: usize, value: Q, expected: Q },
    /// A function expected to be a Casimir had a nonzero bracket.
    Casimir { what: alloc::string::String, with: usize, point: usize, value: Q },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatReport {
    pub lambda: Option<Q>,
    pub failures: Vec<CompatFailure>,
    /// Diagonal values `{x_j, y_j}/(x_j y_j)` at the first point.
    pub diagonal: Vec<(usize, Q)>,
}

impl CompatReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.lambda.is_some()
    }
}

/// Extra functions that must Poisson-commute with every cluster variable.
pub fn seed_casimirs(seed: &GeneralizedSeed) -> Result<Vec<(alloc::string::String, RegularFunction)>, Error> {
    let mut out = Vec::new();
    for k in seed.mutable_vertices() {
        if seed.quiver.multiplicity(k) > 1 || !seed.strings[&k].is_trivial() {
            for (r, f) in seed.casimir_monomials(k)?.into_iter().enumerate() {
                out.push((alloc::format!("p^{}_{}", seed.names[k], r), f));
            }
        }
    }
    for v in seed.quiver.vertices() {
        if v.kind == crate::engine::VertexKind::Isolated {
            out.push((seed.names[v.id].clone(), seed.cluster[v.id].clone()));
        }
    }
    Ok(out)
}

/// Compatibility test: `{x_i, y_j}/(x_i y_j) = lambda d_j delta_ij` for
/// every vertex `i` and mutable `j`, with one `lambda`, plus vanishing
/// brackets of the Casimir monomials and isolated variables. `mask`
/// restricts gradients to a set of coordinates (used on submanifolds).
pub fn compatibility_check(seed: &GeneralizedSeed, points: &[Point], mask: Option<&[bool]>) -> Result<CompatReport, Error> {
    let mutable = seed.mutable_vertices();
    let ys = mutable.iter().map(|&j| seed.y_variable(j)).collect::<Result<Vec<_>, _>>()?;
    let casimirs = seed_casimirs(seed)?;
    let mut lambda: Option<Q> = None;
    let mut failures = Vec::new();
    let mut diagonal = Vec::new();
    for (t, p) in points.iter().enumerate() {
        let mut ev = Evaluator::<GradScalar>::at_point(p);
        let xs = seed.cluster.iter().map(|f| ev.eval(f)).collect::<Result<Vec<_>, _>>()?;
        let yv = ys.iter().map(|f| ev.eval(f)).collect::<Result<Vec<_>, _>>()?;
        let cv = casimirs.iter().map(|(_, f)| ev.eval(f)).collect::<Result<Vec<_>, _>>()?;
        if xs.iter().chain(&yv).any(|g| g.value().is_zero()) {
            return Err(Error::DivisionByZero { node: 0 });
        }
        let pm = bracket_matrix(p);
        for (jj, &j) in mutable.iter().enumerate() {
            let py = apply_bracket(&pm, &yv[jj], mask);
            let dj = Q::from_integer(BigInt::from(seed.quiver.multiplicity(j)));
            for (i, xi) in xs.iter().enumerate() {
                let v = grad_dot(xi, &py) / (xi.value() * yv[jj].value());
                if i == j {
                    if t == 0 {
                        diagonal.push((j, v.clone()));
                    }
                    match &lambda {
                        None => lambda = Some(&v / &dj),
                        Some(l) => {
                            let expected = l * &dj;
                            if v != expected {
                                failures.push(CompatFailure::Diagonal { j, point: t, value: v, expected });
                            }
                        }
                    }
                } else if !v.is_zero() {
                    failures.push(CompatFailure::OffDiagonal { i, j, point: t, value: v });
                }
            }
        }
        for ((name, _), c) in casimirs.iter().zip(&cv) {
            let pc = apply_bracket(&pm, c, mask);
            for (i, xi) in xs.iter().enumerate() {
                let v = -grad_dot(xi, &pc);
                if !v.is_zero() {
                    failures.push(CompatFailure::Casimir { what: name.clone(), with: i, point: t, value: v });
                }
            }
        }
    }
    if lambda.as_ref().is_some_and(|l| l.is_zero()) {
        lambda = None;
    }
    Ok(CompatReport { lambda, failures, diagonal })
}

/// Exponent vectors of the diagonal scaling `(X, Y) -> (T1 X T2, T1 Y T2)`:
/// `left` is the exponent in the entries of `T2` (columns), `right` in the
/// entries of `T1` (rows).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct ToricWeights {
    pub left: Vec<i64>,
    pub right: Vec<i64>,
}

impl ToricWeights {
    pub fn zero(n: usize) -> Self {
        ToricWeights { left: alloc::vec![0; n], right: alloc::vec![0; n] }
    }

    pub fn is_zero(&self) -> bool {
        self.left.iter().chain(&self.right).all(|&w| w == 0)
    }
}

/// The integer `w` with `base^w = r`, if any.
fn exact_log(r: &Q, base: i64) -> Option<i64> {
    if !r.is_positive() {
        return None;
    }
    let b = BigInt::from(base);
    let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
    let mut w = 0i64;
    while num > BigInt::one() && (&num % &b).is_zero() {
        num /= &b;
        w += 1;
    }
    while den > BigInt::one() && (&den % &b).is_zero() {
        den /= &b;
        w -= 1;
    }
    (num.is_one() && den.is_one()).then_some(w)
}

/// Toric weights of `f`, measured at `base` (where `f` must be nonzero) by
/// scaling one diagonal entry at a time by 2 and by 3.
pub fn extract_weights(f: &RegularFunction, base: &Point) -> Result<ToricWeights, Error> {
    let n = base.n();
    let f0 = f.eval_q(base)?;
    if f0.is_zero() {
        return Err(Error::DivisionByZero { node: 0 });
    }
    let ones = alloc::vec![Q::one(); n];
    let mut w = ToricWeights::zero(n);
    for side in 0..2 {
        for a in 0..n {
            let mut exps = [0i64; 2];
            for (slot, qv) in [2i64, 3].into_iter().enumerate() {
                let mut s = ones.clone();
                s[a] = Q::from_integer(BigInt::from(qv));
                let p = if side == 0 { base.scaled(&ones, &s) } else { base.scaled(&s, &ones) };
                let r = f.eval_q(&p)? / &f0;
                exps[slot] = exact_log(&r, qv).ok_or(Error::NotHomogeneous { position: a + 1 })?;
            }
            if exps[0] != exps[1] {
                return Err(Error::NotHomogeneous { position: a + 1 });
            }
            if side == 0 {
                w.left[a] = exps[0];
            } else {
                w.right[a] = exps[0];
            }
        }
    }
    Ok(w)
}

/// Mutable vertices whose `y`-variable has nonzero toric weight.
pub fn y_weight_zero_check(seed: &GeneralizedSeed, base: &Point) -> Result<Vec<(usize, ToricWeights)>, Error> {
    let mut bad = Vec::new();
    for k in seed.mutable_vertices() {
        let w = extract_weights(&seed.y_variable(k)?, base)?;
        if !w.is_zero() {
            bad.push((k, w));
        }
    }
    Ok(bad)
}
