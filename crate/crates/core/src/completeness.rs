//! Elimination certificates for the staircase matrix, the first-row linear
//! system, and fixed mutation sequences whose results are known minors.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::double::{big_n, build_seed_bar, c_functions, coord_minor, grid_label, phi_at, phi_functions};
use crate::engine::GeneralizedSeed;
use crate::exact::{
    functions_equal, solve, solve_consistent, Coord, Evaluator, ExactMatrix, GradScalar, IdentityConfig,
    IdentityVerdict, Point, SparsePolynomial, Q,
};
use crate::{Error, Rng};

/// One checked identity `actual = expected` at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerRow {
    /// Index tuple identifying the row, e.g. `(k, i)`.
    pub index: (usize, usize),
    pub expected: Q,
    pub actual: Q,
}

impl LedgerRow {
    pub fn holds(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationCertificate {
    /// The unipotent matrix (`G` upper or `H` lower triangular).
    pub matrix: ExactMatrix<Q>,
    /// The stacked (`S`) or concatenated (`T`) matrix the ledger reads.
    pub assembled: ExactMatrix<Q>,
    pub ledger: Vec<LedgerRow>,
    /// Every elimination step produced an exactly consistent system.
    pub consistent: bool,
}

impl EliminationCertificate {
    pub fn unit_diagonal(&self) -> bool {
        (1..=self.matrix.rows()).all(|i| self.matrix.entry(i, i).is_one())
    }

    pub fn passed(&self) -> bool {
        self.consistent && self.unit_diagonal() && self.ledger.iter().all(LedgerRow::holds)
    }
}

/// Trailing principal minors of a square matrix, `t[i] = det M_[i,m]^[i,m]`
/// for `i = 1..=m`, with `t[m+1] = 1`. Index 0 is unused.
pub fn trailing_minors(m: &ExactMatrix<Q>) -> Result<Vec<Q>, Error> {
    let s = m.rows();
    let mut out = alloc::vec![Q::zero(); s + 2];
    for (i, t) in out.iter_mut().enumerate().take(s + 1).skip(1) {
        *t = m.sub(i, s, i, s).det()?;
    }
    out[s + 1] = Q::one();
    Ok(out)
}

/// Coefficients `a` with `sum_m a_m rows[m] = target`, exact.
pub(crate) fn combination(target: &[Q], rows: &[Vec<Q>]) -> Result<Vec<Q>, Error> {
    if rows.is_empty() {
        return if target.iter().all(Zero::is_zero) { Ok(Vec::new()) } else { Err(Error::Inconsistent) };
    }
    let a = ExactMatrix::from_fn(target.len(), rows.len(), |c, m| rows[m - 1][c - 1].clone());
    solve_consistent(&a, target)
}

/// Schur complement of row `r` of `m` against the trailing block starting
/// at `r + 1` (rows and columns `r+1..=size`), restricted to `cols`.
pub(crate) fn row_schur(m: &ExactMatrix<Q>, size: usize, r: usize, cols: core::ops::RangeInclusive<usize>) -> Result<Vec<Q>, Error> {
    let psi = m.sub(r + 1, size, r + 1, size);
    let rhs: Vec<Q> = (r + 1..=size).map(|c| m.entry(r, c).clone()).collect();
    let coef = if psi.rows() == 0 { Vec::new() } else { solve(&psi.transpose(), &rhs)? };
    Ok(cols
        .map(|c| {
            let mut v = m.entry(r, c).clone();
            for (t, a) in coef.iter().enumerate() {
                v -= a * m.entry(r + 1 + t, c);
            }
            v
        })
        .collect())
}

/// Column analogue of [`row_schur`].
pub(crate) fn col_schur(m: &ExactMatrix<Q>, size: usize, c: usize, rows: core::ops::RangeInclusive<usize>) -> Result<Vec<Q>, Error> {
    let psi = m.sub(c + 1, size, c + 1, size);
    let rhs: Vec<Q> = (c + 1..=size).map(|r| m.entry(r, c).clone()).collect();
    let coef = if psi.rows() == 0 { Vec::new() } else { solve(&psi, &rhs)? };
    Ok(rows
        .map(|r| {
            let mut v = m.entry(r, c).clone();
            for (t, a) in coef.iter().enumerate() {
                v -= m.entry(r, c + 1 + t) * a;
            }
            v
        })
        .collect())
}

/// Unipotent upper triangular `G` and the ledger
/// `det S_[n-i+1+k, n+k]^[n-i+1, n] = phi_{kn-i+1} / phi_{kn+1}` for
/// `k = 1..n-2`, `i = 1..n`, where `S = [Y; G X_[2,n]]`.
pub fn build_g(n: usize, p: &Point) -> Result<EliminationCertificate, Error> {
    let nn = big_n(n);
    let phi = phi_at(&p.x, &p.y);
    let t = trailing_minors(&phi)?;
    let xs = p.x.sub(2, n, 1, n);
    let mut g = ExactMatrix::<Q>::identity(n - 1);
    let mut consistent = true;
    for k in 1..=n.saturating_sub(2) {
        let row = row_schur(&phi, nn, k * n, (k - 1) * n + 1..=k * n)?;
        let target: Vec<Q> = row.iter().zip(xs.row(k)).map(|(a, b)| a - b).collect();
        let rows: Vec<Vec<Q>> = (k + 1..n).map(|m| xs.row(m)).collect();
        match combination(&target, &rows) {
            Ok(coef) => {
                for (idx, a) in coef.into_iter().enumerate() {
                    g.set_entry(k, k + 1 + idx, a);
                }
            }
            Err(Error::Inconsistent) => consistent = false,
            Err(e) => return Err(e),
        }
    }
    let s = p.y.vstack(&g.mul(&xs)?);
    let mut ledger = Vec::new();
    for k in 1..=n.saturating_sub(2) {
        for i in 1..=n {
            let actual = s.sub(n - i + 1 + k, n + k, n - i + 1, n).det()?;
            ledger.push(LedgerRow { index: (k, i), expected: &t[k * n - i + 1] / &t[k * n + 1], actual });
        }
    }
    Ok(EliminationCertificate { matrix: g, assembled: s, ledger, consistent })
}

/// Unipotent lower triangular `H` and the ledger
/// `det T_[n-i, n-1]^[n+k-i+1, n+k] = phi_{(n-k)(n-1)-i+1} / phi_{(n-k)(n-1)+1}`
/// for `k, i = 1..n-1`, where `T = [X_[2,n] | Y_[2,n] H]`.
pub fn build_h(n: usize, p: &Point) -> Result<EliminationCertificate, Error> {
    let nn = big_n(n);
    let phi = phi_at(&p.x, &p.y);
    let t = trailing_minors(&phi)?;
    let xs = p.x.sub(2, n, 1, n);
    let ys = p.y.sub(2, n, 1, n);
    let mut h = ExactMatrix::<Q>::identity(n);
    let mut consistent = true;
    for k in 1..n {
        let c = k * (n - 1);
        let col = col_schur(&phi, nn, c, (k - 1) * (n - 1) + 1..=k * (n - 1))?;
        let j = n - k;
        let target: Vec<Q> = col.iter().zip(ys.col(j)).map(|(a, b)| a - b).collect();
        let cols: Vec<Vec<Q>> = (j + 1..=n).map(|m| ys.col(m)).collect();
        match combination(&target, &cols) {
            Ok(coef) => {
                for (idx, a) in coef.into_iter().enumerate() {
                    h.set_entry(j + 1 + idx, j, a);
                }
            }
            Err(Error::Inconsistent) => consistent = false,
            Err(e) => return Err(e),
        }
    }
    let tm = xs.hstack(&ys.mul(&h)?);
    let mut ledger = Vec::new();
    for k in 1..n {
        for i in 1..n {
            let actual = tm.sub(n - i, n - 1, n + k - i + 1, n + k).det()?;
            let base = (n - k) * (n - 1);
            ledger.push(LedgerRow { index: (k, i), expected: &t[base - i + 1] / &t[base + 1], actual });
        }
    }
    Ok(EliminationCertificate { matrix: h, assembled: tm, ledger, consistent })
}

/// Whether `v * scale` is an integer for every entry above (`upper`) or
/// below the diagonal in row/column `k` of a certificate matrix, with
/// `scale` the cluster variable that should clear the denominators.
pub fn denominators_cleared(v: &[Q], scale: &Q) -> bool {
    v.iter().all(|a| (a * scale).is_integer())
}

/// Rows of `G` (resp. columns of `H`) paired with the `phi` that clears
/// their denominators: `phi_{kn+1}` for row `k` of `G`,
/// `phi_{k(n-1)+1}` for column `n-k` of `H`.
pub fn g_denominator_check(n: usize, p: &Point, cert: &EliminationCertificate) -> Result<bool, Error> {
    let t = trailing_minors(&phi_at(&p.x, &p.y))?;
    Ok((1..=n.saturating_sub(2)).all(|k| denominators_cleared(&cert.matrix.row(k), &t[k * n + 1])))
}

pub fn h_denominator_check(n: usize, p: &Point, cert: &EliminationCertificate) -> Result<bool, Error> {
    let t = trailing_minors(&phi_at(&p.x, &p.y))?;
    Ok((1..n).all(|k| denominators_cleared(&cert.matrix.col(n - k), &t[k * (n - 1) + 1])))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstRowSystem {
    /// `z_ij = d c_j / d x_1i`.
    pub z: ExactMatrix<Q>,
    /// `c_j(X, Y) - c_j(Xbar, Y)` where `Xbar` has a zero first row.
    pub rhs: Vec<Q>,
    /// The first row of `X` recovered from `Z^T x = rhs`.
    pub solution: Vec<Q>,
    pub recovered: bool,
    /// `det Z / phi_1`.
    pub ratio: Q,
}

/// Build and solve the first-row system at `p`.
pub fn first_row_solve(n: usize, p: &Point) -> Result<FirstRowSystem, Error> {
    let c = c_functions(n);
    let mut bar = p.clone();
    for j in 1..=n {
        bar.set(Coord::x(1, j), Q::zero());
    }
    let grads: Vec<GradScalar> = {
        let mut ev = crate::exact::Evaluator::<GradScalar>::at_point(p);
        c[1..].iter().map(|f| ev.eval(f)).collect::<Result<_, _>>()?
    };
    let z = ExactMatrix::from_fn(n, n, |i, j| grads[j - 1].partial(Coord::x(1, i).index(n)));
    let rhs: Vec<Q> = (1..=n)
        .map(|j| Ok(grads[j - 1].value() - c[j].eval_q(&bar)?))
        .collect::<Result<_, Error>>()?;
    let solution = solve(&z.transpose(), &rhs)?;
    let recovered = solution.iter().enumerate().all(|(i, v)| v == p.get(Coord::x(1, i + 1)));
    let phi1 = phi_functions(n)[0].eval_q(p)?;
    if phi1.is_zero() {
        return Err(Error::DivisionByZero { node: 0 });
    }
    let ratio = z.det()? / phi1;
    Ok(FirstRowSystem { z, rhs, solution, recovered, ratio })
}

/// Symbolic version: expands `det Z` and `phi_1` and returns the constant
/// `kappa` with `det Z = kappa phi_1`, or `None` if they are not
/// proportional.
pub fn first_row_symbolic(n: usize, term_limit: usize) -> Result<Option<Q>, Error> {
    let c = c_functions(n);
    let polys = c[1..].iter().map(|f| f.to_polynomial(term_limit)).collect::<Result<Vec<_>, _>>()?;
    let z = ExactMatrix::from_fn(n, n, |i, j| polys[j - 1].derivative(Coord::x(1, i).index(n)));
    let det = z.det_bareiss_limited(Some(term_limit))?;
    let phi1 = phi_functions(n)[0].to_polynomial(term_limit)?;
    let (Some((_, a)), Some((_, b))) = (det.leading_term(), phi1.leading_term()) else {
        return Ok(None);
    };
    let kappa = a / b;
    let scaled = phi1.scale(&kappa);
    Ok((scaled == det).then_some(kappa))
}

/// The fixed mutation sequence on the `n = 4` seed, by grid label.
pub const NOTEQUIV_SEQUENCE: [(usize, usize); 8] = [(5, 4), (4, 3), (3, 2), (6, 4), (5, 3), (4, 2), (5, 4), (4, 3)];

/// A variable expected after the sequence: vertex, display name and the
/// minor it must equal (rows as `(is_y, row)`, all over the given columns).
pub struct NotequivTarget {
    pub vertex: (usize, usize),
    pub name: &'static str,
    pub rows: &'static [(bool, usize)],
    pub cols: &'static [usize],
}

pub const NOTEQUIV_TARGETS: [NotequivTarget; 5] = [
    NotequivTarget { vertex: (6, 4), name: "phi'_8", rows: &[(true, 4), (false, 4)], cols: &[3, 4] },
    NotequivTarget { vertex: (5, 3), name: "phi'_7", rows: &[(true, 4), (false, 3), (false, 4)], cols: &[2, 3, 4] },
    NotequivTarget { vertex: (5, 4), name: "phi''_4", rows: &[(true, 3), (true, 4), (false, 4)], cols: &[2, 3, 4] },
    NotequivTarget { vertex: (4, 2), name: "phi'_6", rows: &[(true, 3), (true, 4), (false, 3), (false, 4)], cols: &[1, 2, 3, 4] },
    NotequivTarget { vertex: (4, 3), name: "phi''_3", rows: &[(true, 2), (true, 3), (true, 4), (false, 4)], cols: &[1, 2, 3, 4] },
];

pub fn notequiv_vertices(seed: &GeneralizedSeed) -> Result<Vec<usize>, Error> {
    NOTEQUIV_SEQUENCE
        .iter()
        .map(|&(r, c)| seed.find(&grid_label(r, c)).ok_or_else(|| Error::Range(alloc::format!("no vertex ({r},{c})"))))
        .collect()
}

#[derive(Clone, Debug)]
pub struct NotequivResult {
    pub name: String,
    pub vertex: (usize, usize),
    pub verdict: IdentityVerdict,
}

/// Run the sequence on the `n = 4` seed and compare each target variable
/// with its minor.
pub fn notequiv_sequence_check(cfg: &IdentityConfig, rng: &mut Rng) -> Result<Vec<NotequivResult>, Error> {
    let seed = build_seed_bar(4)?;
    let end = seed.mutate_sequence(&notequiv_vertices(&seed)?)?;
    let mut out = Vec::new();
    for t in &NOTEQUIV_TARGETS {
        let v = end.find(&grid_label(t.vertex.0, t.vertex.1)).expect("grid vertex");
        let minor = coord_minor(4, t.rows, t.cols);
        let verdict = functions_equal(&end.cluster[v], &minor, cfg, rng)?;
        out.push(NotequivResult { name: t.name.into(), vertex: t.vertex, verdict });
    }
    Ok(out)
}

/// Mutate along `seq` and back; report vertices whose variable differs from
/// the original.
pub fn round_trip_mismatches(seed: &GeneralizedSeed, seq: &[usize], cfg: &IdentityConfig, rng: &mut Rng) -> Result<Vec<usize>, Error> {
    let mut back: Vec<usize> = seq.to_vec();
    back.reverse();
    let end = seed.mutate_sequence(seq)?.mutate_sequence(&back)?;
    let mut bad = Vec::new();
    for v in 0..seed.len() {
        if !functions_equal(&seed.cluster[v], &end.cluster[v], cfg, rng)?.holds() {
            bad.push(v);
        }
    }
    if end.quiver != seed.quiver || end.strings != seed.strings {
        bad.push(usize::MAX);
    }
    Ok(bad)
}

/// A mutation sequence (by vertex label) whose last new variable equals a
/// single matrix entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryWitness {
    pub sequence: Vec<String>,
    pub entry: Coord,
}

/// Breadth-first search over mutation sequences of length at most
/// `max_len` (no immediate repeats) for new cluster variables equal to a
/// single entry of `X` or `Y`. Matching is by value at one random point;
/// callers confirm candidates with [`functions_equal`].
pub fn entry_witness_search(seed: &GeneralizedSeed, max_len: usize, p: &Point) -> Result<Vec<EntryWitness>, Error> {
    let n = seed.n;
    let mut found: Vec<EntryWitness> = Vec::new();
    let mut frontier: Vec<(Vec<usize>, GeneralizedSeed)> = alloc::vec![(Vec::new(), seed.clone())];
    let entries: Vec<(Coord, Q)> = Coord::all(n).map(|c| (c, p.get(c).clone())).collect();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (seq, s) in &frontier {
            for k in s.mutable_vertices() {
                if seq.last() == Some(&k) {
                    continue;
                }
                let m = s.mutate(k)?;
                let val = match m.cluster[k].eval_q(p) {
                    Ok(v) => v,
                    Err(Error::DivisionByZero { .. }) => continue,
                    Err(e) => return Err(e),
                };
                let mut path = seq.clone();
                path.push(k);
                for (c, v) in &entries {
                    if *v == val && !found.iter().any(|w| w.entry == *c) {
                        found.push(EntryWitness { sequence: path.iter().map(|&i| s.quiver.vertex(i).label.clone()).collect(), entry: *c });
                    }
                }
                next.push((path, m));
            }
        }
        frontier = next;
    }
    Ok(found)
}

/// Result of expanding one freshly mutated cluster variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityRow {
    pub vertex: usize,
    pub label: String,
    /// Number of terms of the new variable, or the reason expansion failed
    /// (`NotDivisible` means the exchange relation is not polynomial).
    pub outcome: Result<usize, Error>,
}

impl RegularityRow {
    pub fn certified(&self) -> bool {
        self.outcome.is_ok()
    }
}

/// Mutate once at every mutable vertex and expand the new variable as a
/// polynomial by exact division.
pub fn one_step_regularity(seed: &GeneralizedSeed, term_limit: usize) -> Result<Vec<RegularityRow>, Error> {
    let n = seed.n;
    let nv = 2 * n * n;
    let mut ev = Evaluator::new(move |c: Coord| SparsePolynomial::var(nv, c.index(n)));
    ev.set_term_limit(Some(term_limit));
    let mut out = Vec::new();
    for k in seed.mutable_vertices() {
        let m = seed.mutate(k)?;
        let outcome = ev.eval(&m.cluster[k]).map(|p| p.num_terms());
        out.push(RegularityRow { vertex: k, label: seed.quiver.vertex(k).label.clone(), outcome });
    }
    Ok(out)
}
