use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Zero};

use super::matrix::ExactDiv;
use super::{Ring, Q};
use crate::Error;

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then lexicographic with variable 0 most significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(alloc::vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = alloc::vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    /// `self / rhs` if every exponent allows it.
    pub fn div(&self, rhs: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&rhs.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse multivariate polynomial with rational coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl SparsePolynomial {
    pub fn zero(nvars: usize) -> Self {
        SparsePolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = SparsePolynomial::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = SparsePolynomial::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), Q::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = SparsePolynomial::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn nv(&self, rhs: &Self) -> usize {
        // Constants built without context may have 0 variables.
        self.nvars.max(rhs.nvars)
    }

    fn widen(&self, nvars: usize) -> SparsePolynomial {
        if self.nvars == nvars {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.resize(nvars, 0);
                (Monomial(e), c.clone())
            })
            .collect();
        SparsePolynomial { nvars, terms }
    }

    pub fn evaluate(&self, values: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= Ring::pow(&values[i], e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0.get(var).copied().unwrap_or(0);
            if e == 0 {
                continue;
            }
            let mut d = m.0.clone();
            d[var] -= 1;
            out.add_term(Monomial(d), c * Q::from_integer(e.into()));
        }
        out
    }

    pub fn scale(&self, s: &Q) -> SparsePolynomial {
        if s.is_zero() {
            return SparsePolynomial::zero(self.nvars);
        }
        SparsePolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    /// Exact quotient `self / d`. Fails with `NotDivisible` as soon as a
    /// leading term cannot be cancelled.
    pub fn exact_divide(&self, d: &SparsePolynomial) -> Result<SparsePolynomial, Error> {
        let nv = self.nv(d);
        let (dm, dc) = match d.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::DivisionByZero { node: 0 }),
        };
        let dm = {
            let mut e = dm.0;
            e.resize(nv, 0);
            Monomial(e)
        };
        let d = d.widen(nv);
        let mut rem = self.widen(nv);
        let mut quot = SparsePolynomial::zero(nv);
        while let Some((lm, lc)) = rem.leading_term() {
            let m = lm.div(&dm).ok_or(Error::NotDivisible)?;
            let c = lc / &dc;
            for (tm, tc) in &d.terms {
                rem.add_term(tm.mul(&m), -(tc * &c));
            }
            quot.add_term(m, c);
        }
        Ok(quot)
    }
}

impl Ring for SparsePolynomial {
    fn ring_zero() -> Self {
        SparsePolynomial::zero(0)
    }
    fn ring_one() -> Self {
        SparsePolynomial::constant(0, Q::one())
    }
    fn from_q(v: &Q) -> Self {
        SparsePolynomial::constant(0, v.clone())
    }
    fn add(&self, rhs: &Self) -> Self {
        let nv = self.nv(rhs);
        let mut out = self.widen(nv);
        for (m, c) in &rhs.widen(nv).terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        let nv = self.nv(rhs);
        let (a, b) = (self.widen(nv), rhs.widen(nv));
        let mut out = SparsePolynomial::zero(nv);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        SparsePolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
    fn ring_is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl ExactDiv for SparsePolynomial {
    fn exact_div(&self, d: &Self) -> Result<Self, Error> {
        self.exact_divide(d)
    }
    fn size(&self) -> usize {
        self.num_terms()
    }
}
