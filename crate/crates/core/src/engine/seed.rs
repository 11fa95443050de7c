use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{MultiplicityQuiver, VertexKind};
use crate::exact::RegularFunction;
use crate::Error;

/// Monomial in frozen or isolated vertex variables: vertex id to exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct TauMonomial(pub BTreeMap<usize, u32>);

impl TauMonomial {
    pub fn one() -> Self {
        TauMonomial(BTreeMap::new())
    }

    pub fn var(v: usize) -> Self {
        let mut m = BTreeMap::new();
        m.insert(v, 1);
        TauMonomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.values().all(|&e| e == 0)
    }

    pub fn times(&self, rhs: &TauMonomial) -> TauMonomial {
        let mut m = self.0.clone();
        for (&v, &e) in &rhs.0 {
            *m.entry(v).or_insert(0) += e;
        }
        TauMonomial(m)
    }

    pub fn eval(&self, cluster: &[RegularFunction], n: usize) -> RegularFunction {
        RegularFunction::product(n, self.0.iter().filter(|(_, &e)| e > 0).map(|(&v, &e)| cluster[v].pow(e)))
    }
}

/// The coefficients `p_0, ..., p_d` at a mutable vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeString {
    pub owner: usize,
    pub coeffs: Vec<TauMonomial>,
}

impl ExchangeString {
    /// All coefficients equal to 1.
    pub fn trivial(owner: usize, d: u32) -> Self {
        ExchangeString { owner, coeffs: alloc::vec![TauMonomial::one(); d as usize + 1] }
    }

    /// `(1, p_1, ..., p_{d-1}, 1)`.
    pub fn with_inner(owner: usize, inner: Vec<TauMonomial>) -> Self {
        let mut coeffs = alloc::vec![TauMonomial::one()];
        coeffs.extend(inner);
        coeffs.push(TauMonomial::one());
        ExchangeString { owner, coeffs }
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(TauMonomial::is_one)
    }

    pub fn ends_are_one(&self) -> bool {
        self.coeffs.len() >= 2 && self.coeffs[0].is_one() && self.coeffs[self.coeffs.len() - 1].is_one()
    }

    pub fn reversed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        ExchangeString { owner: self.owner, coeffs }
    }
}

/// Extended seed: quiver, one function per vertex and one string per
/// mutable vertex.
#[derive(Clone, Debug)]
pub struct GeneralizedSeed {
    pub n: usize,
    pub quiver: MultiplicityQuiver,
    pub cluster: Vec<RegularFunction>,
    /// Human-readable name of each cluster variable.
    pub names: Vec<String>,
    pub strings: BTreeMap<usize, ExchangeString>,
}

/// Neighbourhood of a mutable vertex split by mutability.
struct Star {
    d: u32,
    out_mut: Vec<(usize, u32)>,
    in_mut: Vec<(usize, u32)>,
    out_frozen: Vec<(usize, u32)>,
    in_frozen: Vec<(usize, u32)>,
}

impl GeneralizedSeed {
    /// Assemble a seed, filling in trivial strings for mutable vertices that
    /// have none.
    pub fn new(
        n: usize,
        quiver: MultiplicityQuiver,
        cluster: Vec<RegularFunction>,
        names: Vec<String>,
        strings: impl IntoIterator<Item = ExchangeString>,
    ) -> Result<Self, Error> {
        if cluster.len() != quiver.len() || names.len() != quiver.len() {
            return Err(Error::Shape(alloc::format!(
                "{} vertices, {} functions, {} names",
                quiver.len(),
                cluster.len(),
                names.len()
            )));
        }
        let mut map: BTreeMap<usize, ExchangeString> = BTreeMap::new();
        for s in strings {
            quiver.require_mutable(s.owner)?;
            if s.degree() != quiver.multiplicity(s.owner) || !s.ends_are_one() {
                return Err(Error::Shape(alloc::format!("bad exchange string at vertex {}", s.owner)));
            }
            for p in &s.coeffs {
                if p.0.keys().any(|&v| v >= quiver.len() || quiver.kind(v).is_mutable()) {
                    return Err(Error::VertexKind { vertex: s.owner, expected: "frozen-only string coefficients" });
                }
            }
            map.insert(s.owner, s);
        }
        for v in quiver.vertices() {
            if v.kind.is_mutable() {
                map.entry(v.id).or_insert_with(|| ExchangeString::trivial(v.id, v.multiplicity));
            }
        }
        Ok(GeneralizedSeed { n, quiver, cluster, names, strings: map })
    }

    pub fn len(&self) -> usize {
        self.cluster.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cluster.is_empty()
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.quiver.find(label)
    }

    pub fn find_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    pub fn mutable_vertices(&self) -> Vec<usize> {
        self.quiver.vertices().iter().filter(|v| v.kind.is_mutable()).map(|v| v.id).collect()
    }

    pub fn string(&self, k: usize) -> Option<&ExchangeString> {
        self.strings.get(&k)
    }

    fn star(&self, k: usize) -> Result<Star, Error> {
        self.quiver.require_mutable(k)?;
        type Edges = Vec<(usize, u32)>;
        let split = |edges: Edges| -> (Edges, Edges) {
            edges.into_iter().partition(|&(v, _)| self.quiver.kind(v) == VertexKind::Mutable)
        };
        let (out_mut, out_frozen) = split(self.quiver.out_edges(k));
        let (in_mut, in_frozen) = split(self.quiver.in_edges(k));
        Ok(Star { d: self.quiver.multiplicity(k), out_mut, in_mut, out_frozen, in_frozen })
    }

    fn product_of(&self, edges: &[(usize, u32)], scale: u32) -> RegularFunction {
        RegularFunction::product(self.n, edges.iter().map(|&(v, m)| self.cluster[v].pow(m * scale)))
    }

    /// Stable monomials `v_{k;>}^{[r]}` and `v_{k;<}^{[r]}` with exponents
    /// `floor(r b / d)`.
    pub fn tau(&self, k: usize, r: u32) -> Result<(TauMonomial, TauMonomial), Error> {
        let s = self.star(k)?;
        let floor = |edges: &[(usize, u32)]| {
            TauMonomial(edges.iter().map(|&(v, b)| (v, r * b / s.d)).filter(|&(_, e)| e > 0).collect())
        };
        Ok((floor(&s.out_frozen), floor(&s.in_frozen)))
    }

    /// Right-hand side of the generalized exchange relation at `k`:
    /// `sum_r p_r u_>^r v_>^[r] u_<^(d-r) v_<^[d-r]`.
    pub fn exchange_polynomial(&self, k: usize) -> Result<RegularFunction, Error> {
        let s = self.star(k)?;
        let string = self.strings.get(&k).cloned().unwrap_or_else(|| ExchangeString::trivial(k, s.d));
        let u_out = self.product_of(&s.out_mut, 1);
        let u_in = self.product_of(&s.in_mut, 1);
        let mut terms = Vec::with_capacity(s.d as usize + 1);
        for r in 0..=s.d {
            let (tau_out, _) = self.tau(k, r)?;
            let (_, tau_in) = self.tau(k, s.d - r)?;
            let p = string.coeffs[r as usize].times(&tau_out).times(&tau_in);
            terms.push(RegularFunction::product(
                self.n,
                [p.eval(&self.cluster, self.n), u_out.pow(r), u_in.pow(s.d - r)],
            ));
        }
        Ok(RegularFunction::sum(self.n, terms))
    }

    /// Mutation at `k`. The new variable is stored as the quotient of the
    /// exchange polynomial by the old one.
    pub fn mutate(&self, k: usize) -> Result<Self, Error> {
        let rhs = self.exchange_polynomial(k)?;
        let quiver = self.quiver.mutate(k)?;
        let mut cluster = self.cluster.clone();
        cluster[k] = rhs.div(&self.cluster[k]);
        let mut names = self.names.clone();
        names[k].push('\'');
        let mut strings = self.strings.clone();
        if let Some(s) = strings.get_mut(&k) {
            *s = s.reversed();
        }
        Ok(GeneralizedSeed { n: self.n, quiver, cluster, names, strings })
    }

    pub fn mutate_sequence(&self, ks: &[usize]) -> Result<Self, Error> {
        let mut s = self.clone();
        for &k in ks {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    /// `y_k = u_>^d v_> / (u_<^d v_<)`.
    pub fn y_variable(&self, k: usize) -> Result<RegularFunction, Error> {
        let s = self.star(k)?;
        let num = self.product_of(&s.out_mut, s.d).mul(&self.product_of(&s.out_frozen, 1));
        let den = self.product_of(&s.in_mut, s.d).mul(&self.product_of(&s.in_frozen, 1));
        Ok(num.div(&den))
    }

    /// `p^_{kr} = (p_{kr} v_>^[r] v_<^[d-r])^d / (v_>^r v_<^(d-r))` for
    /// `r = 0..=d`.
    pub fn casimir_monomials(&self, k: usize) -> Result<Vec<RegularFunction>, Error> {
        let s = self.star(k)?;
        let string = self.strings.get(&k).cloned().unwrap_or_else(|| ExchangeString::trivial(k, s.d));
        let mut out = Vec::new();
        for r in 0..=s.d {
            let (tau_out, _) = self.tau(k, r)?;
            let (_, tau_in) = self.tau(k, s.d - r)?;
            let num = string.coeffs[r as usize].times(&tau_out).times(&tau_in).eval(&self.cluster, self.n).pow(s.d);
            let den = self.product_of(&s.out_frozen, r).mul(&self.product_of(&s.in_frozen, s.d - r));
            out.push(num.div(&den));
        }
        Ok(out)
    }
}
