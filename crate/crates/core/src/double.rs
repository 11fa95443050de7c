//! The staircase matrix `Phi` on `Mat_n x Mat_n`, the function families
//! `phi`, `g`, `h`, `c~`, and the initial seed with its quiver.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::Rng as _;

use crate::engine::{ExchangeString, GeneralizedSeed, MultiplicityQuiver, TauMonomial, VertexKind};
use crate::exact::{q, random_point, Coord, ExactMatrix, Point, Ring, RegularFunction, Q};
use crate::poisson::ToricWeights;
use crate::{Error, Rng};

/// `N = n(n-1)`, the size of `Phi`.
pub fn big_n(n: usize) -> usize {
    n * (n - 1)
}

/// Lay out `Phi`: rows `2..n` of `Y` on block `(i, i)` and rows `2..n` of
/// `X` on block `(i+1, i)`, blocks of height `n-1` and width `n`.
pub fn phi_layout<T: Clone>(n: usize, zero: T, x: impl Fn(usize, usize) -> T, y: impl Fn(usize, usize) -> T) -> ExactMatrix<T> {
    let nn = big_n(n);
    let h = n - 1;
    let mut m = ExactMatrix::from_fn(nn, nn, |_, _| zero.clone());
    for blk in 0..n - 1 {
        for a in 1..=h {
            for b in 1..=n {
                m.set_entry(blk * h + a, blk * n + b, y(a + 1, b));
                m.set_entry((blk + 1) * h + a, blk * n + b, x(a + 1, b));
            }
        }
    }
    m
}

/// `Phi` with symbolic entries.
pub fn build_phi(n: usize) -> ExactMatrix<RegularFunction> {
    phi_layout(
        n,
        RegularFunction::constant(n, q(0)),
        |i, j| RegularFunction::entry(n, Coord::x(i, j)),
        |i, j| RegularFunction::entry(n, Coord::y(i, j)),
    )
}

/// `Phi` evaluated at a point.
pub fn phi_at(x: &ExactMatrix<Q>, y: &ExactMatrix<Q>) -> ExactMatrix<Q> {
    let n = x.rows();
    phi_layout(n, q(0), |i, j| x.entry(i, j).clone(), |i, j| y.entry(i, j).clone())
}

/// Minor of coordinate entries, rows and columns 1-indexed inclusive.
pub fn coord_minor(n: usize, rows: &[(bool, usize)], cols: &[usize]) -> RegularFunction {
    assert_eq!(rows.len(), cols.len());
    RegularFunction::det_of(n, rows.len(), |a, b| {
        let (is_y, r) = rows[a - 1];
        let c = cols[b - 1];
        RegularFunction::entry(n, if is_y { Coord::y(r, c) } else { Coord::x(r, c) })
    })
}

/// Trailing principal minors `phi_i = det Phi_[i,N]^[i,N]`, `i = 1..=N`.
pub fn phi_functions(n: usize) -> Vec<RegularFunction> {
    let p = build_phi(n);
    let nn = big_n(n);
    (1..=nn).map(|i| RegularFunction::det(n, &p.sub(i, nn, i, nn))).collect()
}

/// `g_ij = det X_[i,n]^[j, j+n-i]`, `1 <= j <= i <= n`.
pub fn g_function(n: usize, i: usize, j: usize) -> Result<RegularFunction, Error> {
    if !(1 <= j && j <= i && i <= n) {
        return Err(Error::Range(alloc::format!("g_{i}{j} needs 1 <= j <= i <= {n}")));
    }
    let rows: Vec<_> = (i..=n).map(|r| (false, r)).collect();
    let cols: Vec<_> = (j..=j + n - i).collect();
    Ok(coord_minor(n, &rows, &cols))
}

/// `h_ij = det Y_[i, i+n-j]^[j,n]`, `1 <= i <= j <= n`.
pub fn h_function(n: usize, i: usize, j: usize) -> Result<RegularFunction, Error> {
    if !(1 <= i && i <= j && j <= n) {
        return Err(Error::Range(alloc::format!("h_{i}{j} needs 1 <= i <= j <= {n}")));
    }
    let rows: Vec<_> = (i..=i + n - j).map(|r| (true, r)).collect();
    let cols: Vec<_> = (j..=n).collect();
    Ok(coord_minor(n, &rows, &cols))
}

/// Coefficients `c_0..c_n` of `det(Y + mu X) = sum_i c_i mu^i`, obtained by
/// interpolating at `mu = 0..n`.
pub fn c_functions(n: usize) -> Vec<RegularFunction> {
    pencil_coefficients(n, |i, j| RegularFunction::entry(n, Coord::x(i, j)), |i, j| RegularFunction::entry(n, Coord::y(i, j)))
}

/// [`c_functions`] for arbitrary entry functions of `X` and `Y`.
pub fn pencil_coefficients(
    n: usize,
    x: impl Fn(usize, usize) -> RegularFunction,
    y: impl Fn(usize, usize) -> RegularFunction,
) -> Vec<RegularFunction> {
    let pencils: Vec<RegularFunction> =
        (0..=n as i64).map(|mu| RegularFunction::det_of(n, n, |i, j| y(i, j).add(&x(i, j).scale(&q(mu))))).collect();
    let vandermonde = ExactMatrix::from_fn(n + 1, n + 1, |m, i| Ring::pow(&q(m as i64 - 1), (i - 1) as u32));
    let inv = vandermonde.inverse().expect("Vandermonde matrix at distinct nodes is invertible");
    (1..=n + 1)
        .map(|i| RegularFunction::sum(n, (1..=n + 1).map(|m| pencils[m - 1].scale(inv.entry(i, m)))))
        .collect()
}

/// `c~_i = (-1)^{i(n-1)} c_i`, `i = 1..n-1`.
pub fn c_tilde_functions(n: usize) -> Vec<RegularFunction> {
    let c = c_functions(n);
    (1..n).map(|i| if (i * (n - 1)) % 2 == 1 { c[i].neg() } else { c[i].clone() }).collect()
}

/// Homogeneity exponent of `phi_l` under `Y -> sY`: with
/// `l = mu (n-1) + sigma`, `kappa_l = C(n-mu, 2) - max(0, sigma-mu-1)`.
/// Returns 0 for `l = N+1`.
pub fn kappa(n: usize, l: usize) -> i64 {
    let nn = big_n(n);
    assert!(l >= 1 && l <= nn + 1);
    if l == nn + 1 {
        return 0;
    }
    let mu = (l - 1) / (n - 1);
    let sigma = (l - 1) % (n - 1) + 1;
    let m = (n - mu) as i64;
    m * (m - 1) / 2 - (sigma as i64 - mu as i64 - 1).max(0)
}

/// `(lambda, rho)` with `k = lambda n + rho`, `1 <= rho <= n`.
pub fn lambda_rho(n: usize, k: usize) -> (usize, usize) {
    ((k - 1) / n, (k - 1) % n + 1)
}

/// `(mu, sigma)` with `k = mu (n-1) + sigma`, `1 <= sigma <= n-1`.
pub fn mu_sigma(n: usize, k: usize) -> (usize, usize) {
    ((k - 1) / (n - 1), (k - 1) % (n - 1) + 1)
}

/// Identification of the trailing `phi`s: `phi_{N-s+1} = g_{n-s+1, n-s+1}`
/// for `s = 1..n-1`. Returns the `g` diagonal index.
pub fn trailing_phi_g_index(n: usize, s: usize) -> usize {
    assert!(s >= 1 && s < n);
    n - s + 1
}

/// A member of the family on the double.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Member {
    Phi(usize),
    G(usize, usize),
    H(usize, usize),
    CTilde(usize),
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Member::Phi(i) => write!(f, "phi{i}"),
            Member::G(i, j) => write!(f, "g{i},{j}"),
            Member::H(i, j) => write!(f, "h{i},{j}"),
            Member::CTilde(i) => write!(f, "ct{i}"),
        }
    }
}

fn delta(n: usize, a: usize, b: usize) -> Vec<i64> {
    (1..=n).map(|t| i64::from(a <= t && t <= b)).collect()
}

fn axpy(a: i64, x: &[i64], y: &[i64]) -> Vec<i64> {
    x.iter().zip(y).map(|(u, v)| a * u + v).collect()
}

/// Toric weights predicted by the weight table; `None` for `c~`, which the
/// table does not list.
pub fn expected_weights(n: usize, m: Member) -> Option<ToricWeights> {
    let w = match m {
        Member::G(i, j) => ToricWeights { left: delta(n, j, n + j - i), right: delta(n, i, n) },
        Member::H(i, j) => ToricWeights { left: delta(n, j, n), right: delta(n, i, n + i - j) },
        Member::Phi(k) => {
            let (lambda, rho) = lambda_rho(n, k);
            let (mu, sigma) = mu_sigma(n, k);
            ToricWeights {
                left: axpy(n as i64 - 2 - lambda as i64, &delta(n, 1, n), &delta(n, rho, n)),
                right: axpy(n as i64 - 1 - mu as i64, &delta(n, 2, n), &delta(n, sigma + 1, n)),
            }
        }
        Member::CTilde(_) => return None,
    };
    Some(w)
}

/// Every function of the family with its member tag.
#[derive(Clone, Debug)]
pub struct DoubleFamily {
    pub n: usize,
    /// `phi_1..phi_N`.
    pub phis: Vec<RegularFunction>,
    pub g: BTreeMap<(usize, usize), RegularFunction>,
    pub h: BTreeMap<(usize, usize), RegularFunction>,
    /// `c_0..c_n`.
    pub c: Vec<RegularFunction>,
    /// `c~_1..c~_{n-1}`.
    pub c_tilde: Vec<RegularFunction>,
}

impl DoubleFamily {
    pub fn new(n: usize) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::Range(alloc::format!("n = {n}, need n >= 2")));
        }
        let mut g = BTreeMap::new();
        let mut h = BTreeMap::new();
        for i in 1..=n {
            for j in 1..=i {
                g.insert((i, j), g_function(n, i, j)?);
                h.insert((j, i), h_function(n, j, i)?);
            }
        }
        let c = c_functions(n);
        let c_tilde = (1..n).map(|i| if (i * (n - 1)) % 2 == 1 { c[i].neg() } else { c[i].clone() }).collect();
        Ok(DoubleFamily { n, phis: phi_functions(n), g, h, c, c_tilde })
    }

    pub fn get(&self, m: Member) -> &RegularFunction {
        match m {
            Member::Phi(i) => &self.phis[i - 1],
            Member::G(i, j) => &self.g[&(i, j)],
            Member::H(i, j) => &self.h[&(i, j)],
            Member::CTilde(i) => &self.c_tilde[i - 1],
        }
    }

    /// The `2n^2` members: `phi_1..phi_{(n-1)^2}`, all `g`, all `h`, all `c~`.
    pub fn members(&self) -> Vec<Member> {
        let n = self.n;
        let mut out: Vec<Member> = (1..=(n - 1) * (n - 1)).map(Member::Phi).collect();
        out.extend(self.g.keys().map(|&(i, j)| Member::G(i, j)));
        out.extend(self.h.keys().map(|&(i, j)| Member::H(i, j)));
        out.extend((1..n).map(Member::CTilde));
        out
    }
}

/// Where the special string's inner coefficients come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StringOrder {
    /// `(1, c~_{n-1}, ..., c~_1, 1)`, the order that reproduces the
    /// pencil identity under the exchange convention used here.
    #[default]
    Reversed,
    /// `(1, c~_1, ..., c~_{n-1}, 1)`.
    Increasing,
}

/// Add (`delta > 0`) or remove (`delta < 0`) edges between labelled
/// vertices after the quiver is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeOverride {
    pub from: String,
    pub to: String,
    pub delta: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeedOptions {
    pub string_order: StringOrder,
    pub edge_overrides: Vec<EdgeOverride>,
}

pub(crate) fn apply_overrides(q: &mut MultiplicityQuiver, overrides: &[EdgeOverride]) -> Result<(), Error> {
    for o in overrides {
        let a = q.find(&o.from).ok_or_else(|| Error::Range(alloc::format!("no vertex {}", o.from)))?;
        let b = q.find(&o.to).ok_or_else(|| Error::Range(alloc::format!("no vertex {}", o.to)))?;
        if o.delta >= 0 {
            q.add_edge(a, b, o.delta as u32);
        } else {
            q.remove_edge(a, b, (-o.delta) as u32);
        }
    }
    Ok(())
}

pub fn grid_label(r: usize, c: usize) -> String {
    alloc::format!("({r},{c})")
}

/// Quiver on the `(2n-1) x n` grid plus a frozen `g_11` vertex and `n-1`
/// isolated vertices, together with the member attached to each vertex.
pub fn build_quiver_bar(n: usize) -> Result<(MultiplicityQuiver, Vec<Member>), Error> {
    if n < 3 {
        return Err(Error::Range(alloc::format!("n = {n}, the quiver needs n >= 3")));
    }
    let nn = big_n(n);
    let mut attach: BTreeMap<(usize, usize), (Member, VertexKind)> = BTreeMap::new();
    for r in 1..2 * n {
        for c in 1..=n {
            if r <= c {
                let kind = if r == 1 { VertexKind::Frozen } else { VertexKind::Mutable };
                attach.insert((r, c), (Member::H(r, c), kind));
            } else if r + 1 >= n + c && (r, c) != (n, 1) {
                let kind = if c == 1 { VertexKind::Frozen } else { VertexKind::Mutable };
                attach.insert((r, c), (Member::G(r + 1 - n, c), kind));
            }
        }
    }
    for k in 0..n - 2 {
        for i in 1..=n {
            attach.insert((i + k + 1, i), (Member::Phi(k * n + i), VertexKind::Mutable));
        }
    }
    attach.insert((n, 1), (Member::Phi(nn - n + 1), VertexKind::Mutable));
    if attach.len() != (2 * n - 1) * n {
        return Err(Error::Inconsistent);
    }
    let mut q = MultiplicityQuiver::new();
    let mut members = Vec::new();
    let mut id = BTreeMap::new();
    for (&(r, c), &(m, kind)) in &attach {
        id.insert((r, c), q.add_vertex(grid_label(r, c), kind, 1));
        members.push(m);
    }
    let g11 = q.add_vertex("g11", VertexKind::Frozen, 1);
    members.push(Member::G(1, 1));
    for i in 1..n {
        q.add_vertex(alloc::format!("c{i}"), VertexKind::Isolated, 1);
        members.push(Member::CTilde(i));
    }
    q.set_multiplicity(id[&(2, 1)], n as u32);

    let v = |r: usize, c: usize| id[&(r, c)];
    for i in 1..2 * n - 1 {
        for j in 1..n {
            q.add_edge(v(i, j), v(i + 1, j + 1), 1);
        }
    }
    for i in 2..2 * n {
        for j in 2..=n {
            q.add_edge(v(i, j), v(i, j - 1), 1);
            q.add_edge(v(i, j), v(i - 1, j), 1);
        }
    }
    for i in 2..=n {
        q.add_edge(v(i, 1), v(i - 1, 1), 1);
    }
    let mut path = Vec::new();
    for m in 3..=n {
        path.push((n + m - 2, n));
        path.push((m, 1));
    }
    path.push((2 * n - 1, n));
    for w in path.windows(2) {
        q.add_edge(v(w[0].0, w[0].1), v(w[1].0, w[1].1), 1);
    }
    q.add_edge(g11, v(2, 1), 1);
    Ok((q, members))
}

/// The initial seed on the double with default options.
pub fn build_seed_bar(n: usize) -> Result<GeneralizedSeed, Error> {
    build_seed_bar_with(n, &SeedOptions::default())
}

pub fn build_seed_bar_with(n: usize, opts: &SeedOptions) -> Result<GeneralizedSeed, Error> {
    let fam = DoubleFamily::new(n)?;
    let (mut quiver, members) = build_quiver_bar(n)?;
    apply_overrides(&mut quiver, &opts.edge_overrides)?;
    let cluster = members.iter().map(|&m| fam.get(m).clone()).collect();
    let names = members.iter().map(|m| m.to_string()).collect();
    let special = quiver.find(&grid_label(2, 1)).expect("special vertex");
    let iso: Vec<usize> = (1..n).map(|i| quiver.find(&alloc::format!("c{i}")).expect("isolated vertex")).collect();
    let mut inner: Vec<TauMonomial> = iso.iter().map(|&v| TauMonomial::var(v)).collect();
    if opts.string_order == StringOrder::Reversed {
        inner.reverse();
    }
    let string = ExchangeString::with_inner(special, inner);
    GeneralizedSeed::new(n, quiver, cluster, names, [string])
}

/// Right-hand side of the pencil identity at the special vertex:
/// `sum_i c_i ((-1)^{n-1} h_22 phi_{n+1})^i phi_2^{n-i}`.
pub fn long_identity_rhs(n: usize) -> Result<RegularFunction, Error> {
    let fam = DoubleFamily::new(n)?;
    let sign = if (n - 1) % 2 == 1 { q(-1) } else { q(1) };
    let phi_n1 = if n < big_n(n) { fam.phis[n].clone() } else { RegularFunction::one(n) };
    let base = fam.h[&(2, 2)].mul(&phi_n1).scale(&sign);
    Ok(RegularFunction::sum(
        n,
        (0..=n).map(|i| RegularFunction::product(n, [fam.c[i].clone(), base.pow(i as u32), fam.phis[1].pow((n - i) as u32)])),
    ))
}

/// One row of the `Y`-homogeneity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaRow {
    pub l: usize,
    pub kappa: i64,
    /// `(point, s)` pairs where `phi_l(X, sY) != s^kappa phi_l(X, Y)`.
    pub failures: Vec<(Point, Q)>,
}

impl KappaRow {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compare `phi_l(X, sY)` with `s^kappa_l phi_l(X, Y)` for every `l` at
/// `points` random points, each with its own random rational `s`.
pub fn kappa_check(n: usize, points: usize, range: i64, rng: &mut Rng) -> Result<Vec<KappaRow>, Error> {
    if n < 2 {
        return Err(Error::Range(alloc::format!("n = {n}, need n >= 2")));
    }
    let phis = phi_functions(n);
    let mut rows: Vec<KappaRow> =
        (1..=phis.len()).map(|l| KappaRow { l, kappa: kappa(n, l), failures: Vec::new() }).collect();
    for _ in 0..points {
        let p = random_point(n, range, rng);
        let num = loop {
            let v: i64 = rng.gen_range(-range..=range);
            if v != 0 && v != 1 {
                break v;
            }
        };
        let s = Q::new(num.into(), rng.gen_range(1..=range.max(1)).into());
        let scaled = Point::new(p.x.clone(), ExactMatrix::from_fn(n, n, |i, j| p.y.entry(i, j) * &s));
        for (row, f) in rows.iter_mut().zip(&phis) {
            let lhs = f.eval_q(&scaled)?;
            let rhs = f.eval_q(&p)? * num_traits::pow(s.clone(), row.kappa as usize);
            if lhs != rhs {
                row.failures.push((p.clone(), s.clone()));
            }
        }
    }
    Ok(rows)
}
