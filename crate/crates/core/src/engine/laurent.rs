use crate::exact::{Algebra, ExactDiv, ExactMatrix, Monomial, Ring, SparsePolynomial, Q};
use crate::Error;

/// Laurent polynomial `num / x^den` in a fixed set of variables, kept with
/// no common monomial factor between numerator and denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolynomial {
    num: SparsePolynomial,
    den: Monomial,
}

impl LaurentPolynomial {
    pub fn from_poly(p: SparsePolynomial) -> Self {
        let den = Monomial::one(p.nvars());
        LaurentPolynomial { num: p, den }.normalized()
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(SparsePolynomial::var(nvars, i))
    }

    pub fn numerator(&self) -> &SparsePolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Monomial {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == 0
    }

    fn nvars(&self) -> usize {
        self.num.nvars().max(self.den.0.len())
    }

    fn widen(&self, nv: usize) -> (SparsePolynomial, Monomial) {
        let num = self.num.add(&SparsePolynomial::zero(nv));
        let mut d = self.den.0.clone();
        d.resize(nv, 0);
        (num, Monomial(d))
    }

    /// Largest monomial dividing every term.
    fn content(p: &SparsePolynomial, nv: usize) -> Monomial {
        let mut m: Option<alloc::vec::Vec<u32>> = None;
        for (t, _) in p.terms() {
            let mut e = t.0.clone();
            e.resize(nv, 0);
            m = Some(match m {
                None => e,
                Some(cur) => cur.iter().zip(&e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        Monomial(m.unwrap_or_else(|| alloc::vec![0; nv]))
    }

    fn shift(p: &SparsePolynomial, m: &Monomial, nv: usize, up: bool) -> SparsePolynomial {
        SparsePolynomial::from_terms(
            nv,
            p.terms().map(|(t, c)| {
                let mut e = t.0.clone();
                e.resize(nv, 0);
                let e = if up { Monomial(e).mul(m) } else { Monomial(e).div(m).expect("content divides") };
                (e, c.clone())
            }),
        )
    }

    fn normalized(self) -> Self {
        let nv = self.nvars();
        let (num, den) = self.widen(nv);
        if num.is_zero() {
            return LaurentPolynomial { num, den: Monomial::one(nv) };
        }
        let c = Self::content(&num, nv);
        let common = Monomial(c.0.iter().zip(&den.0).map(|(a, b)| *a.min(b)).collect());
        LaurentPolynomial { num: Self::shift(&num, &common, nv, false), den: den.div(&common).expect("common factor") }
    }
}

impl Ring for LaurentPolynomial {
    fn ring_zero() -> Self {
        Self::from_poly(SparsePolynomial::ring_zero())
    }
    fn ring_one() -> Self {
        Self::from_poly(SparsePolynomial::ring_one())
    }
    fn from_q(v: &Q) -> Self {
        Self::from_poly(SparsePolynomial::from_q(v))
    }
    fn add(&self, rhs: &Self) -> Self {
        let nv = self.nvars().max(rhs.nvars());
        let (a, da) = self.widen(nv);
        let (b, db) = rhs.widen(nv);
        let lcm = Monomial(da.0.iter().zip(&db.0).map(|(x, y)| *x.max(y)).collect());
        let a = Self::shift(&a, &lcm.div(&da).expect("lcm"), nv, true);
        let b = Self::shift(&b, &lcm.div(&db).expect("lcm"), nv, true);
        LaurentPolynomial { num: a.add(&b), den: lcm }.normalized()
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        let nv = self.nvars().max(rhs.nvars());
        let (a, da) = self.widen(nv);
        let (b, db) = rhs.widen(nv);
        LaurentPolynomial { num: a.mul(&b), den: da.mul(&db) }.normalized()
    }
    fn neg(&self) -> Self {
        LaurentPolynomial { num: self.num.neg(), den: self.den.clone() }
    }
    fn ring_is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl ExactDiv for LaurentPolynomial {
    /// Division that succeeds exactly when the quotient is a Laurent
    /// polynomial.
    fn exact_div(&self, d: &Self) -> Result<Self, Error> {
        if d.ring_is_zero() {
            return Err(Error::DivisionByZero { node: 0 });
        }
        let nv = self.nvars().max(d.nvars());
        let (a, da) = self.widen(nv);
        let (b, db) = d.widen(nv);
        let cb = Self::content(&b, nv);
        let b = Self::shift(&b, &cb, nv, false);
        let q = a.exact_divide(&b)?;
        // a/da divided by (cb * b)/db = q * db / (da * cb)
        let q = Self::shift(&q, &db, nv, true);
        Ok(LaurentPolynomial { num: q, den: da.mul(&cb) }.normalized())
    }
    fn size(&self) -> usize {
        self.num.num_terms()
    }
}

impl Algebra for LaurentPolynomial {
    fn det(m: &ExactMatrix<Self>, limit: Option<usize>) -> Result<Self, Error> {
        m.det_bareiss_limited(limit)
    }
    fn checked_div(&self, d: &Self) -> Result<Self, Error> {
        self.exact_div(d)
    }
    fn size(&self) -> usize {
        self.num.num_terms()
    }
}
