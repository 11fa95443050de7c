//! Periodic band matrices `L_kn`, the truncated staircase block and the
//! seed `Sigma_kn`, with the identities tying it to the seed on the double.
//!
//! A band point is given by parameters `a_ri`, `r = 1..k+1`, `i = 1..n`.
//! Parameter `a_ri` sits in row `i` of `Y` at column `c = i - k - 1 + r`
//! when `c >= 1`, and in row `i` of `X` at column `n + c` otherwise. All
//! other entries are zero. Band functions are built from entries that are
//! constant zero off the band, so they are honest functions on `L_kn`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use rand::Rng as _;

use crate::completeness::{col_schur, combination, row_schur, trailing_minors, EliminationCertificate, LedgerRow};
use crate::double::{
    apply_overrides, big_n, build_seed_bar, g_function, grid_label, h_function, pencil_coefficients, phi_at,
    phi_functions, phi_layout, EdgeOverride, StringOrder,
};
use crate::engine::{ExchangeString, GeneralizedSeed, MultiplicityQuiver, TauMonomial, VertexKind};
use crate::exact::{q, Coord, Evaluator, ExactMatrix, Point, RegularFunction, Q};
use crate::poisson::{bracket_matrix, compare_omegas, compatibility_check, omega_at, CompatReport, LogCanonicity};
use crate::{Error, Rng};

fn check_range(k: usize, n: usize) -> Result<(), Error> {
    if n < 3 || k < 2 || k > n {
        return Err(Error::Range(alloc::format!("(k, n) = ({k}, {n}), need 2 <= k <= n and n >= 3")));
    }
    Ok(())
}

/// Size `(k-1)(n-1)` of the truncated staircase block.
pub fn block_size(k: usize, n: usize) -> usize {
    (k - 1) * (n - 1)
}

/// Position of the parameter `a_ri` in `(X, Y)`.
pub fn band_coord(k: usize, n: usize, r: usize, i: usize) -> Coord {
    let c = i as i64 - k as i64 - 1 + r as i64;
    if c >= 1 {
        Coord::y(i, c as usize)
    } else {
        Coord::x(i, (n as i64 + c) as usize)
    }
}

/// Inverse of [`band_coord`]: the parameter `(r, i)` stored at `c`, if any.
pub fn band_param_at(k: usize, n: usize, c: Coord) -> Option<(usize, usize)> {
    let i = c.row;
    (1..=k + 1).find(|&r| band_coord(k, n, r, i) == c).map(|r| (r, i))
}

/// Dense coordinate mask of the band.
pub fn band_mask(k: usize, n: usize) -> Vec<bool> {
    let mut m = alloc::vec![false; 2 * n * n];
    for r in 1..=k + 1 {
        for i in 1..=n {
            m[band_coord(k, n, r, i).index(n)] = true;
        }
    }
    m
}

/// The coordinate function `c` restricted to `L_kn`: itself on the band,
/// zero elsewhere.
pub fn band_entry(k: usize, n: usize, c: Coord) -> RegularFunction {
    if band_param_at(k, n, c).is_some() {
        RegularFunction::entry(n, c)
    } else {
        RegularFunction::constant(n, q(0))
    }
}

/// A point of `L_kn` (or of its closure when a boundary diagonal vanishes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandPoint {
    pub k: usize,
    pub n: usize,
    /// `(k+1) x n` parameters, `a.entry(r, i) = a_ri`.
    pub a: ExactMatrix<Q>,
}

impl BandPoint {
    pub fn new(k: usize, n: usize, a: ExactMatrix<Q>) -> Result<Self, Error> {
        check_range(k, n)?;
        if a.rows() != k + 1 || a.cols() != n {
            return Err(Error::Shape(alloc::format!(
                "band parameters must be {}x{n}, got {}x{}",
                k + 1,
                a.rows(),
                a.cols()
            )));
        }
        Ok(BandPoint { k, n, a })
    }

    /// Parameters drawn uniformly from `[-range, range] \ {0}`.
    pub fn random(k: usize, n: usize, range: i64, rng: &mut Rng) -> Result<Self, Error> {
        check_range(k, n)?;
        let a = ExactMatrix::from_fn(k + 1, n, |_, _| loop {
            let v = rng.gen_range(-range..=range);
            if v != 0 {
                break q(v);
            }
        });
        Ok(BandPoint { k, n, a })
    }

    pub fn param(&self, r: usize, i: usize) -> &Q {
        self.a.entry(r, i)
    }

    /// All entries of the lowest and highest diagonals are nonzero.
    pub fn in_open_band(&self) -> bool {
        (1..=self.n).all(|i| !self.a.entry(1, i).is_zero() && !self.a.entry(self.k + 1, i).is_zero())
    }

    /// The pair `(X, Y)`.
    pub fn to_point(&self) -> Point {
        let n = self.n;
        let mut p = Point::new(ExactMatrix::zeros(n, n), ExactMatrix::zeros(n, n));
        for r in 1..=self.k + 1 {
            for i in 1..=n {
                p.set(band_coord(self.k, n, r, i), self.a.entry(r, i).clone());
            }
        }
        p
    }

    /// The same matrices viewed in the closure of `L_{k+1,n}`, where the
    /// new lowest diagonal is zero.
    pub fn widen(&self) -> Result<BandPoint, Error> {
        let a = ExactMatrix::from_fn(self.k + 2, self.n, |r, i| if r == 1 { Q::zero() } else { self.a.entry(r - 1, i).clone() });
        BandPoint::new(self.k + 1, self.n, a)
    }
}

/// Values `t[i] = phi~_i`, `i = 1..=M`, with `t[M+1] = 1`.
pub fn tilde_phi_values(k: usize, n: usize, p: &Point) -> Result<Vec<Q>, Error> {
    let m = block_size(k, n);
    trailing_minors(&phi_at(&p.x, &p.y).sub(1, m, 1, m))
}

/// A member of the band family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BandMember {
    TildePhi(usize),
    /// `a_ri` as a coordinate function.
    A(usize, usize),
    /// The rescaled corner entry `a~_11`.
    ATilde11,
    CTilde(usize),
}

impl fmt::Display for BandMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandMember::TildePhi(i) => write!(f, "pt{i}"),
            BandMember::A(r, i) => write!(f, "a{r},{i}"),
            BandMember::ATilde11 => write!(f, "at1,1"),
            BandMember::CTilde(i) => write!(f, "ct{i}"),
        }
    }
}

/// Sign convention for `a~_11`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CornerSign {
    /// `a~_11 = a_11`; the sign that makes the special exchange regular.
    #[default]
    Plus,
    /// `a~_11 = (-1)^{k(n-1)} a_11`.
    Alternating,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BandSeedOptions {
    pub string_order: StringOrder,
    pub corner_sign: CornerSign,
    pub edge_overrides: Vec<EdgeOverride>,
}

/// The `(k+1) n` functions of `F_kn`.
#[derive(Clone, Debug)]
pub struct BandFamily {
    pub k: usize,
    pub n: usize,
    /// `phi~_1..phi~_M`.
    pub tilde_phis: Vec<RegularFunction>,
    pub a11_tilde: RegularFunction,
    /// `c_0..c_n` of the pencil restricted to the band.
    pub c: Vec<RegularFunction>,
    /// `c~_1..c~_{k-1}`.
    pub c_tilde: Vec<RegularFunction>,
}

impl BandFamily {
    pub fn new(k: usize, n: usize, corner: CornerSign) -> Result<Self, Error> {
        check_range(k, n)?;
        let e = |c: Coord| band_entry(k, n, c);
        let m = block_size(k, n);
        let phi = phi_layout(n, RegularFunction::constant(n, q(0)), |i, j| e(Coord::x(i, j)), |i, j| e(Coord::y(i, j)))
            .sub(1, m, 1, m);
        let tilde_phis = (1..=m).map(|i| RegularFunction::det(n, &phi.sub(i, m, i, m))).collect();
        let a11 = RegularFunction::entry(n, band_coord(k, n, 1, 1));
        let a11_tilde = if corner == CornerSign::Alternating && (k * (n - 1)) % 2 == 1 { a11.neg() } else { a11 };
        let c = pencil_coefficients(n, |i, j| e(Coord::x(i, j)), |i, j| e(Coord::y(i, j)));
        let c_tilde = (1..k).map(|i| if (i * (n - 1)) % 2 == 1 { c[i].neg() } else { c[i].clone() }).collect();
        Ok(BandFamily { k, n, tilde_phis, a11_tilde, c, c_tilde })
    }

    pub fn get(&self, m: BandMember) -> RegularFunction {
        match m {
            BandMember::TildePhi(i) => self.tilde_phis[i - 1].clone(),
            BandMember::A(r, i) => RegularFunction::entry(self.n, band_coord(self.k, self.n, r, i)),
            BandMember::ATilde11 => self.a11_tilde.clone(),
            BandMember::CTilde(i) => self.c_tilde[i - 1].clone(),
        }
    }
}

fn band_grid_member(k: usize, n: usize, i: usize, j: usize) -> (BandMember, VertexKind) {
    if j == 1 {
        (if i == 0 { BandMember::ATilde11 } else { BandMember::A(1, i + 1) }, VertexKind::Frozen)
    } else if j == k + 1 {
        (BandMember::A(k + 1, i + 1), VertexKind::Frozen)
    } else {
        (BandMember::TildePhi((k - j) * (n - 1) + i), VertexKind::Mutable)
    }
}

/// The quiver `Q_kn` and the member attached to each vertex. Grid
/// vertices `(i, j)` come first in row-major order, then the isolated
/// vertices `c1..c{k-1}`.
pub fn build_band_quiver(k: usize, n: usize) -> Result<(MultiplicityQuiver, Vec<BandMember>), Error> {
    check_range(k, n)?;
    let mut cells: Vec<(usize, usize)> = alloc::vec![(0, 1), (0, k + 1)];
    for i in 1..n {
        cells.extend((1..=k + 1).map(|j| (i, j)));
    }
    let mut q = MultiplicityQuiver::new();
    let mut members = Vec::new();
    let mut id = BTreeMap::new();
    for &(i, j) in &cells {
        let (m, kind) = band_grid_member(k, n, i, j);
        id.insert((i, j), q.add_vertex(grid_label(i, j), kind, 1));
        members.push(m);
    }
    for i in 1..k {
        q.add_vertex(alloc::format!("c{i}"), VertexKind::Isolated, 1);
        members.push(BandMember::CTilde(i));
    }
    let v = |i: usize, j: usize| id[&(i, j)];
    let sp = v(1, k);
    q.set_multiplicity(sp, k as u32);

    for i in 1..n - 1 {
        for j in 2..=k {
            q.add_edge(v(i, j), v(i + 1, j), 1);
            q.add_edge(v(i + 1, j), v(i, j + 1), 1);
        }
    }
    for i in 1..n {
        for j in 2..=k {
            if (i, j) != (1, k) {
                q.add_edge(v(i, j), v(i, j - 1), 1);
            }
        }
    }
    if k > 2 {
        let mut path = Vec::new();
        for m in 2..k {
            path.push((n - 1, m + 1));
            path.push((1, m));
        }
        path.push((n - 1, k + 1));
        for w in path.windows(2) {
            q.add_edge(v(w[0].0, w[0].1), v(w[1].0, w[1].1), 1);
        }
    }
    for i in 1..n {
        q.add_edge(v(i, k + 1), sp, (k - 1) as u32);
    }
    for i in 0..n {
        if k == 2 && i == 1 {
            q.add_edge(sp, v(1, 1), 1);
        } else {
            q.add_edge(v(i, 1), sp, 1);
        }
    }
    q.add_edge(sp, v(0, k + 1), 1);
    Ok((q, members))
}

pub fn build_band_seed(k: usize, n: usize) -> Result<GeneralizedSeed, Error> {
    build_band_seed_with(k, n, &BandSeedOptions::default())
}

pub fn build_band_seed_with(k: usize, n: usize, opts: &BandSeedOptions) -> Result<GeneralizedSeed, Error> {
    let fam = BandFamily::new(k, n, opts.corner_sign)?;
    let (mut quiver, members) = build_band_quiver(k, n)?;
    apply_overrides(&mut quiver, &opts.edge_overrides)?;
    let cluster = members.iter().map(|&m| fam.get(m)).collect();
    let names = members.iter().map(|m| m.to_string()).collect();
    let special = quiver.find(&grid_label(1, k)).expect("special vertex");
    let mut inner: Vec<TauMonomial> =
        (1..k).map(|i| TauMonomial::var(quiver.find(&alloc::format!("c{i}")).expect("isolated vertex"))).collect();
    if opts.string_order == StringOrder::Reversed {
        inner.reverse();
    }
    GeneralizedSeed::new(n, quiver, cluster, names, [ExchangeString::with_inner(special, inner)])
}

/// A named list of checked identities, plus rows skipped because an index
/// falls outside its range.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NamedLedger {
    pub name: String,
    pub rows: Vec<LedgerRow>,
    pub excluded: Vec<(usize, usize)>,
}

impl NamedLedger {
    fn new(name: &str) -> Self {
        NamedLedger { name: name.into(), ..Default::default() }
    }

    fn push(&mut self, index: (usize, usize), expected: Option<Q>, actual: Q) {
        match expected {
            Some(expected) => self.rows.push(LedgerRow { index, expected, actual }),
            None => self.excluded.push(index),
        }
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(LedgerRow::holds)
    }
}

fn product_of(vals: impl IntoIterator<Item = Q>) -> Q {
    vals.into_iter().fold(Q::one(), |acc, v| acc * v)
}

/// On `L_nn`: `phi_i = phi~_i phi_{(n-1)^2+1}` for `i = 1..(n-1)^2`,
/// `h_jj = a_{n+1,j}..a_{n+1,n}` and `g_jj = a_1j..a_1n`.
pub fn factorization_check(p: &BandPoint) -> Result<Vec<NamedLedger>, Error> {
    let n = p.n;
    if p.k != n {
        return Err(Error::Range(alloc::format!("factorization needs a point of L_nn, got k = {}", p.k)));
    }
    let pt = p.to_point();
    let phi = trailing_minors(&phi_at(&pt.x, &pt.y))?;
    let tp = tilde_phi_values(n, n, &pt)?;
    let m = (n - 1) * (n - 1);
    let mut f = NamedLedger::new("factor_n");
    for i in 1..=m {
        f.push((i, 0), Some(&tp[i] * &phi[m + 1]), phi[i].clone());
    }
    let mut hh = NamedLedger::new("h_jj");
    let mut gg = NamedLedger::new("g_jj");
    for j in 1..=n {
        hh.push((j, j), Some(product_of((j..=n).map(|t| p.param(n + 1, t).clone()))), h_function(n, j, j)?.eval_q(&pt)?);
        gg.push((j, j), Some(product_of((j..=n).map(|t| p.param(1, t).clone()))), g_function(n, j, j)?.eval_q(&pt)?);
    }
    Ok(alloc::vec![f, hh, gg])
}

/// At a point `p` of `L_{k-1,n}` viewed in the closure of `L_kn`:
/// `phi~^(k)_i = phi~^(k-1)_i phi~^(k)_{(k-2)(n-1)+1}` for
/// `i <= (k-2)(n-1)`, and `phi~^(k)_{(k-2)(n-1)+i} = a_{1,i+1}..a_1n` for
/// `i = 2..n` in the parameters of `p`.
pub fn induction_check(p: &BandPoint) -> Result<Vec<NamedLedger>, Error> {
    let (km1, n) = (p.k, p.n);
    let k = km1 + 1;
    check_range(k, n)?;
    let pt = p.to_point();
    let upper = tilde_phi_values(k, n, &pt)?;
    let lower = tilde_phi_values(km1, n, &pt)?;
    let m2 = block_size(km1, n);
    let mut ind = NamedLedger::new("induction");
    for i in 1..=m2 {
        ind.push((k, i), Some(&lower[i] * &upper[m2 + 1]), upper[i].clone());
    }
    let mut tail = NamedLedger::new("tail");
    for i in 2..=n {
        tail.push((k, i), Some(product_of((i + 1..=n).map(|t| p.param(1, t).clone()))), upper[m2 + i].clone());
    }
    Ok(alloc::vec![ind, tail])
}

/// Poisson submanifold test at a band point: the bracket of any band
/// coordinate with any coordinate has no component off the band.
pub fn submanifold_violations(p: &BandPoint) -> Vec<(Coord, Coord)> {
    let n = p.n;
    let mask = band_mask(p.k, n);
    let pm = bracket_matrix(&p.to_point());
    let mut bad = Vec::new();
    for a in 0..2 * n * n {
        if mask[a] {
            continue;
        }
        for b in 0..2 * n * n {
            if mask[b] && !pm[(a, b)].is_zero() {
                bad.push((Coord::from_index(a, n), Coord::from_index(b, n)));
            }
        }
    }
    bad
}

/// One `y`-variable comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YRow {
    /// `"full"`, `"L"`, `"T"` or `"S"`.
    pub kind: &'static str,
    /// `phi~` index of the vertex.
    pub index: usize,
    pub band: Q,
    /// The value it is compared against; `None` when the displayed formula
    /// refers to an index outside its range.
    pub expected: Option<Q>,
}

impl YRow {
    pub fn holds(&self) -> bool {
        !matches!(&self.expected, Some(e) if *e != self.band)
    }
}

/// On `L_nn`, compare every `y`-variable of `Sigma_nn` with the `y` of the
/// vertex carrying the same `phi` in the seed on the double, and check the
/// displayed closed forms for the left column, top row and special
/// vertex, both in band terms and in terms of the double's functions.
pub fn y_coincidence_check(p: &BandPoint) -> Result<Vec<YRow>, Error> {
    let n = p.n;
    if p.k != n {
        return Err(Error::Range(alloc::format!("y-coincidence needs a point of L_nn, got k = {}", p.k)));
    }
    let pt = p.to_point();
    let band = build_band_seed(n, n)?;
    let double = build_seed_bar(n)?;
    let mut eb = Evaluator::<Q>::at_point(&pt);
    let mut ed = Evaluator::<Q>::at_point(&pt);
    let m = (n - 1) * (n - 1);
    let nn = big_n(n);
    let tp = tilde_phi_values(n, n, &pt)?;
    let ph = trailing_minors(&phi_at(&pt.x, &pt.y))?;
    let a = |r: usize, i: usize| p.param(r, i).clone();
    let t = |i: i64| (1..=m as i64 + 1).contains(&i).then(|| tp[i as usize].clone());
    let f = |i: i64| (1..=nn as i64 + 1).contains(&i).then(|| ph[i as usize].clone());
    let gjj = |j: usize| if j <= n { g_function(n, j, j).and_then(|g| g.eval_q(&pt)) } else { Ok(Q::one()) };
    let hjj = |j: usize| if j <= n { h_function(n, j, j).and_then(|h| h.eval_q(&pt)) } else { Ok(Q::one()) };
    let ratio = |num: [Option<Q>; 2], den: [Option<Q>; 2]| -> Option<Q> {
        let mut v = Q::one();
        for x in num {
            v *= x?;
        }
        for x in den {
            v /= x?;
        }
        Some(v)
    };

    let mut out = Vec::new();
    let mut by_index = BTreeMap::new();
    for v in band.mutable_vertices() {
        let idx: usize = band.names[v].strip_prefix("pt").and_then(|s| s.parse().ok()).ok_or(Error::Inconsistent)?;
        let yb = eb.eval(&band.y_variable(v)?)?;
        let w = double.find_name(&alloc::format!("phi{idx}")).ok_or(Error::Inconsistent)?;
        let yd = ed.eval(&double.y_variable(w)?)?;
        out.push(YRow { kind: "full", index: idx, band: yb.clone(), expected: Some(yd) });
        by_index.insert(idx, yb);
    }
    let ni = n as i64;
    for i in (n - 2) * (n - 1) + 1..=m {
        let ip = i - (n - 2) * (n - 1);
        let ii = i as i64;
        let band_form = ratio([t(ii + 1), t(ii - ni)], [t(ii - 1), t(ii - ni + 1)]).map(|v| v * a(1, ip + 1));
        let dbl = ratio([f(ii + 1), f(ii - ni)], [f(ii - 1), f(ii - ni + 1)]);
        let dbl = match dbl {
            Some(v) => Some(v * gjj(ip + 1)? / gjj(ip + 2)?),
            None => None,
        };
        let y = by_index[&i].clone();
        out.push(YRow { kind: "L", index: i, band: y.clone(), expected: band_form });
        out.push(YRow { kind: "L", index: i, band: y, expected: dbl });
    }
    for i in 2..=n {
        let ii = i as i64;
        let band_form = ratio([t(ii + 1), t(ii + ni - 1)], [t(ii - 1), t(ii + ni)]).map(|v| v * a(n + 1, i));
        let dbl = match ratio([f(ii + 1), f(ii + ni - 1)], [f(ii - 1), f(ii + ni)]) {
            Some(v) => Some(v * hjj(i)? / hjj(i + 1)?),
            None => None,
        };
        let y = by_index[&i].clone();
        out.push(YRow { kind: "T", index: i, band: y.clone(), expected: band_form });
        out.push(YRow { kind: "T", index: i, band: y, expected: dbl });
    }
    let y1 = by_index[&1].clone();
    let low = product_of((1..=n).map(|j| a(1, j)));
    let high = product_of((2..=n).map(|j| a(n + 1, j)));
    let band_form = num_traits::pow(&tp[2] / &tp[n + 1], n) * a(n + 1, 1) / (low * num_traits::pow(high, n - 1));
    let dbl = num_traits::pow(&ph[2] / (&ph[n + 1] * hjj(2)?), n) * hjj(1)? / gjj(1)?;
    out.push(YRow { kind: "S", index: 1, band: y1.clone(), expected: Some(band_form) });
    out.push(YRow { kind: "S", index: 1, band: y1, expected: Some(dbl) });
    Ok(out)
}

/// Log-canonicity of the whole band family and compatibility of
/// `Sigma_kn`, with brackets restricted to the band.
#[derive(Clone, Debug)]
pub struct BandPoissonReport {
    pub omega: LogCanonicity,
    pub compat: CompatReport,
}

pub fn band_poisson_check(k: usize, n: usize, points: &[BandPoint]) -> Result<BandPoissonReport, Error> {
    let seed = build_band_seed(k, n)?;
    let mask = band_mask(k, n);
    let pts: Vec<Point> = points.iter().map(BandPoint::to_point).collect();
    let mats = pts.iter().map(|p| omega_at(&seed.cluster, p, Some(&mask))).collect::<Result<Vec<_>, _>>()?;
    let compat = compatibility_check(&seed, &pts, Some(&mask))?;
    Ok(BandPoissonReport { omega: compare_omegas(&mats), compat })
}

/// The constant matrix `{phi~_i, phi~_j} / (phi~_i phi~_j)` on `L_kn`.
pub fn tilde_phi_omega(k: usize, n: usize, points: &[BandPoint]) -> Result<LogCanonicity, Error> {
    let fam = BandFamily::new(k, n, CornerSign::Plus)?;
    let mask = band_mask(k, n);
    let mats = points
        .iter()
        .map(|p| omega_at(&fam.tilde_phis, &p.to_point(), Some(&mask)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(compare_omegas(&mats))
}

/// The constant matrix for `phi_1..phi_{(n-1)^2+1}` on the double.
pub fn double_phi_omega(n: usize, points: &[Point]) -> Result<LogCanonicity, Error> {
    let phis: Vec<RegularFunction> = phi_functions(n).into_iter().take((n - 1) * (n - 1) + 1).collect();
    let mats = points.iter().map(|p| omega_at(&phis, p, None)).collect::<Result<Vec<_>, _>>()?;
    Ok(compare_omegas(&mats))
}

/// Entries `(i, j)` (1-based) where
/// `lower_ij != upper_ij - upper_ic + upper_jc` for `i, j < c`.
pub fn omega_recursion_failures(upper: &ExactMatrix<Q>, lower: &ExactMatrix<Q>, c: usize) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    for i in 1..c {
        for j in 1..c {
            let pred = upper.entry(i, j) - upper.entry(i, c) + upper.entry(j, c);
            if *lower.entry(i, j) != pred {
                bad.push((i, j));
            }
        }
    }
    bad
}

/// Outcome of the omega recursion between levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaRecursion {
    /// Level `k` of the upper matrix; `k = n + 1` stands for the double.
    pub k: usize,
    pub failures: Vec<(usize, usize)>,
    /// A level whose matrix was not constant.
    pub not_constant: Option<usize>,
}

impl OmegaRecursion {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.not_constant.is_none()
    }
}

/// Check the recursion from level `k` to level `k-1` for `k = 3..=n`, and
/// from the double to level `n`.
pub fn omega_recursion_check(n: usize, points: usize, range: i64, rng: &mut Rng) -> Result<Vec<OmegaRecursion>, Error> {
    let mut mats = BTreeMap::new();
    for k in 2..=n {
        let pts = (0..points).map(|_| BandPoint::random(k, n, range, rng)).collect::<Result<Vec<_>, _>>()?;
        mats.insert(k, tilde_phi_omega(k, n, &pts)?);
    }
    let amb: Vec<Point> = (0..points).map(|_| crate::exact::random_point(n, range, rng)).collect();
    mats.insert(n + 1, double_phi_omega(n, &amb)?);
    let mut out = Vec::new();
    for k in 3..=n + 1 {
        let (upper, lower) = (&mats[&k], &mats[&(k - 1)]);
        let c = if k == n + 1 { (n - 1) * (n - 1) + 1 } else { block_size(k - 1, n) + 1 };
        match (upper, lower) {
            (LogCanonicity::Constant(u), LogCanonicity::Constant(l)) => {
                out.push(OmegaRecursion { k, failures: omega_recursion_failures(u, l, c), not_constant: None })
            }
            (LogCanonicity::Constant(_), _) => out.push(OmegaRecursion { k, failures: Vec::new(), not_constant: Some(k - 1) }),
            _ => out.push(OmegaRecursion { k, failures: Vec::new(), not_constant: Some(k) }),
        }
    }
    Ok(out)
}

/// Which rows of `X` enter the tall matrix `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TallConvention {
    /// First row of the `(k-1)`-row slice of `X`.
    pub x_first_row: usize,
}

pub const TALL_CANDIDATES: [TallConvention; 2] = [TallConvention { x_first_row: 1 }, TallConvention { x_first_row: 2 }];

/// Column offset and numerator index of the long-matrix ledger.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LongConvention {
    /// Added to both ends of the column range `[n+j-i+1, n+j]`.
    pub column_shift: i64,
    /// The numerator is `phi~_{(b-j)(n-1)-i+1}` with `b = n` when false and
    /// `b = k` when true.
    pub numerator_uses_k: bool,
}

pub const LONG_CANDIDATES: [LongConvention; 4] = [
    LongConvention { column_shift: 0, numerator_uses_k: false },
    LongConvention { column_shift: 0, numerator_uses_k: true },
    LongConvention { column_shift: -1, numerator_uses_k: false },
    LongConvention { column_shift: -1, numerator_uses_k: true },
];

impl fmt::Display for TallConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S = [Y_[n-k+2,n]^[n-k+2,n]; G X_[{},{}]^[n-k+2,n]]", self.x_first_row, if self.x_first_row == 1 { "k-1" } else { "k" })
    }
}

impl fmt::Display for LongConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = if self.numerator_uses_k { "k" } else { "n" };
        match self.column_shift {
            0 => write!(f, "cols [n+j-i+1, n+j], numerator ({b}-j)(n-1)-i+1"),
            s => write!(f, "cols [n+j-i+1{s:+}, n+j{s:+}], numerator ({b}-j)(n-1)-i+1"),
        }
    }
}

fn at(t: &[Q], i: i64) -> Option<Q> {
    (i >= 1 && (i as usize) < t.len()).then(|| t[i as usize].clone())
}

fn ratio_at(t: &[Q], num: i64, den: i64) -> Option<Q> {
    Some(at(t, num)? / at(t, den)?)
}

/// Upper unipotent `G` and the tall ledger
/// `det S_[k+j-i, k+j-1]^[k-i, k-1] = phi~_{jn-i+1} / phi~_{jn+1}`,
/// `j = 1..k-2`, `i = 1..k-1`.
pub fn band_tall(p: &BandPoint, conv: TallConvention) -> Result<EliminationCertificate, Error> {
    let (k, n) = (p.k, p.n);
    let pt = p.to_point();
    let m = block_size(k, n);
    let phi = phi_at(&pt.x, &pt.y).sub(1, m, 1, m);
    let t = trailing_minors(&phi)?;
    let x0 = conv.x_first_row;
    let xs = pt.x.sub(x0, x0 + k - 2, n - k + 2, n);
    let mut g = ExactMatrix::<Q>::identity(k - 1);
    let mut consistent = true;
    for j in 1..=k.saturating_sub(2) {
        let r = j * n;
        let blk = row_schur(&phi, m, r, (j - 1) * n + n - k + 2..=j * n)?;
        let target: Vec<Q> = blk.iter().zip(xs.row(j)).map(|(a, b)| a - b).collect();
        let rows: Vec<Vec<Q>> = (j + 1..k).map(|r| xs.row(r)).collect();
        match combination(&target, &rows) {
            Ok(coef) => {
                for (idx, a) in coef.into_iter().enumerate() {
                    g.set_entry(j, j + 1 + idx, a);
                }
            }
            Err(Error::Inconsistent) => consistent = false,
            Err(e) => return Err(e),
        }
    }
    let s = pt.y.sub(n - k + 2, n, n - k + 2, n).vstack(&g.mul(&xs)?);
    let mut ledger = Vec::new();
    for j in 1..=k.saturating_sub(2) {
        for i in 1..k {
            let actual = s.sub(k + j - i, k + j - 1, k - i, k - 1).det()?;
            let expected = ratio_at(&t, (j * n - i + 1) as i64, (j * n + 1) as i64).ok_or(Error::Inconsistent)?;
            ledger.push(LedgerRow { index: (j, i), expected, actual });
        }
    }
    Ok(EliminationCertificate { matrix: g, assembled: s, ledger, consistent })
}

/// Lower unipotent `H` and the band matrix
/// `T = [X_[2,n]^[n-k+2,n] | Y_[2,n]^[1,n-k+1] | Y_[2,n]^[n-k+2,n] H]`.
/// The certificate's ledger is empty; see [`band_long_ledger`].
pub fn band_long(p: &BandPoint) -> Result<EliminationCertificate, Error> {
    let (k, n) = (p.k, p.n);
    let pt = p.to_point();
    let m = block_size(k, n);
    let phi = phi_at(&pt.x, &pt.y).sub(1, m, 1, m);
    let ys = pt.y.sub(2, n, 1, n);
    let mut h = ExactMatrix::<Q>::identity(k - 1);
    let mut consistent = true;
    for j in 1..=k.saturating_sub(2) {
        let c = j * (n - 1);
        let blk = col_schur(&phi, m, c, (j - 1) * (n - 1) + 1..=j * (n - 1))?;
        let cc = n - j;
        let target: Vec<Q> = blk.iter().zip(ys.col(cc)).map(|(a, b)| a - b).collect();
        let cols: Vec<Vec<Q>> = (cc + 1..=n).map(|c| ys.col(c)).collect();
        let h0 = cc - (n - k + 2);
        match combination(&target, &cols) {
            Ok(coef) => {
                for (idx, a) in coef.into_iter().enumerate() {
                    h.set_entry(h0 + 2 + idx, h0 + 1, a);
                }
            }
            Err(Error::Inconsistent) => consistent = false,
            Err(e) => return Err(e),
        }
    }
    let yh = ys.sub(1, n - 1, n - k + 2, n).mul(&h)?;
    let tm = pt.x.sub(2, n, n - k + 2, n).hstack(&ys.sub(1, n - 1, 1, n - k + 1)).hstack(&yh);
    Ok(EliminationCertificate { matrix: h, assembled: tm, ledger: Vec::new(), consistent })
}

/// Ledger of `T` minors under a convention, `j = 2..k-1`, `i = 1..n-1`.
/// Rows whose indices leave their range are reported as failures with a
/// zero expectation.
pub fn band_long_ledger(p: &BandPoint, tm: &ExactMatrix<Q>, conv: LongConvention) -> Result<Vec<LedgerRow>, Error> {
    let (k, n) = (p.k, p.n);
    let t = tilde_phi_values(k, n, &p.to_point())?;
    let b = if conv.numerator_uses_k { k } else { n } as i64;
    let (ni, ki) = (n as i64, k as i64);
    let mut out = Vec::new();
    for j in 2..k {
        for i in 1..n {
            let (ji, ii) = (j as i64, i as i64);
            let c0 = ni + ji - ii + 1 + conv.column_shift;
            let c1 = ni + ji + conv.column_shift;
            let expected = ratio_at(&t, (b - ji) * (ni - 1) - ii + 1, (ki - ji) * (ni - 1) + 1);
            let in_cols = c0 >= 1 && c1 as usize <= tm.cols();
            match (expected, in_cols) {
                (Some(expected), true) => {
                    let actual = tm.sub(n - i, n - 1, c0 as usize, c1 as usize).det()?;
                    out.push(LedgerRow { index: (j, i), expected, actual });
                }
                _ => out.push(LedgerRow { index: (j, i), expected: Q::zero(), actual: Q::one() }),
            }
        }
    }
    Ok(out)
}

/// `psi_ij(T) = phi~_{(k-i)(n-1)+j-1} / phi~_{(k-i+1)(n-1)+1}` for
/// `i = 2..k`, `j = 2..n`, where `psi_ij` is the maximal dense minor of
/// `T` with `t_ij = T_{j-1, i+j-2}` in its upper left corner; and the
/// boundary entries `t_1j = a_1j`, `t_{k+1,j} = a_{k+1,j}`.
pub fn psi_check(p: &BandPoint, tm: &ExactMatrix<Q>) -> Result<Vec<NamedLedger>, Error> {
    let (k, n) = (p.k, p.n);
    let t = tilde_phi_values(k, n, &p.to_point())?;
    let mut psi = NamedLedger::new("psi");
    for i in 2..=k {
        for j in 2..=n {
            let s = n - j + 1;
            let c0 = i + j - 2;
            let actual = tm.sub(j - 1, n - 1, c0, c0 + s - 1).det()?;
            let expected = ratio_at(&t, ((k - i) * (n - 1) + j - 1) as i64, ((k - i + 1) * (n - 1) + 1) as i64);
            psi.push((i, j), expected, actual);
        }
    }
    let mut boundary = NamedLedger::new("t_boundary");
    for j in 3..=n {
        boundary.push((1, j), Some(p.param(1, j).clone()), tm.entry(j - 1, j - 1).clone());
    }
    for j in 2..n {
        boundary.push((k + 1, j), Some(p.param(k + 1, j).clone()), tm.entry(j - 1, k + j - 1).clone());
    }
    Ok(alloc::vec![psi, boundary])
}

/// Conventions that make every ledger row an identity at every point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution<C> {
    pub passing: Vec<C>,
    /// Rows checked per point under each candidate; zero means the ledger
    /// is empty for these `(k, n)` and no convention is pinned.
    pub rows: usize,
}

impl<C: Copy> Resolution<C> {
    /// The unique passing candidate, if the ledger is nonempty.
    pub fn chosen(&self) -> Option<C> {
        (self.rows > 0 && self.passing.len() == 1).then(|| self.passing[0])
    }

    pub fn passed(&self) -> bool {
        self.rows == 0 || self.passing.len() == 1
    }
}

pub fn resolve_tall(points: &[BandPoint]) -> Result<Resolution<TallConvention>, Error> {
    let mut passing = Vec::new();
    let mut rows = 0;
    for conv in TALL_CANDIDATES {
        let mut ok = true;
        for p in points {
            let cert = band_tall(p, conv)?;
            rows = cert.ledger.len();
            ok &= cert.passed();
        }
        if ok {
            passing.push(conv);
        }
    }
    Ok(Resolution { passing, rows })
}

pub fn resolve_long(points: &[BandPoint]) -> Result<Resolution<LongConvention>, Error> {
    let certs = points.iter().map(band_long).collect::<Result<Vec<_>, _>>()?;
    let mut passing = Vec::new();
    let mut rows = 0;
    let k = points.first().map_or(0, |p| p.k);
    let n = points.first().map_or(0, |p| p.n);
    for conv in LONG_CANDIDATES {
        if k == n && conv.numerator_uses_k {
            // Same ledger as the `b = n` variant.
            continue;
        }
        let mut ok = true;
        for (p, cert) in points.iter().zip(&certs) {
            let ledger = band_long_ledger(p, &cert.assembled, conv)?;
            rows = ledger.len();
            ok &= cert.consistent && cert.unit_diagonal() && ledger.iter().all(LedgerRow::holds);
        }
        if ok {
            passing.push(conv);
        }
    }
    Ok(Resolution { passing, rows })
}

/// Whether row `j` of `G` times `phi~_{jn+1}` and column `h0+1` of `H`
/// times `phi~_{j(n-1)+1}` are integral, for integer points.
pub fn band_denominator_check(p: &BandPoint, g: &ExactMatrix<Q>, h: &ExactMatrix<Q>) -> Result<bool, Error> {
    let (k, n) = (p.k, p.n);
    let t = tilde_phi_values(k, n, &p.to_point())?;
    let integral = |v: &[Q], s: &Q| v.iter().all(|a| (a * s).is_integer());
    let mut ok = true;
    for j in 1..=k.saturating_sub(2) {
        ok &= integral(&g.row(j), &t[j * n + 1]);
        let col = n - j - (n - k + 2) + 1;
        ok &= integral(&h.col(col), &t[j * (n - 1) + 1]);
    }
    Ok(ok)
}
