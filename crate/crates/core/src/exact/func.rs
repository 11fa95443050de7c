use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::matrix::{det_cofactor, ExactDiv};
use super::{Coord, ExactMatrix, GradScalar, Point, Ring, SparsePolynomial, Q};
use crate::Error;

/// One node of a function DAG. Nodes are immutable and shared through `Arc`.
#[derive(Debug)]
pub struct Node {
    kind: NodeKind,
}

#[derive(Debug)]
pub enum NodeKind {
    Entry(Coord),
    Const(Q),
    Sum(Vec<Arc<Node>>),
    Product(Vec<Arc<Node>>),
    Pow(Arc<Node>, u32),
    /// Determinant of a `size x size` matrix given row-major.
    Det { size: usize, entries: Vec<Arc<Node>> },
    Quotient(Arc<Node>, Arc<Node>),
}

impl Node {
    pub fn kind(&self) -> &NodeKind {
        &self.kind
    }

    fn children(&self) -> Vec<&Arc<Node>> {
        match &self.kind {
            NodeKind::Entry(_) | NodeKind::Const(_) => Vec::new(),
            NodeKind::Sum(v) | NodeKind::Product(v) => v.iter().collect(),
            NodeKind::Det { entries, .. } => entries.iter().collect(),
            NodeKind::Pow(a, _) => alloc::vec![a],
            NodeKind::Quotient(a, b) => alloc::vec![a, b],
        }
    }
}

fn key(node: &Arc<Node>) -> usize {
    Arc::as_ptr(node) as usize
}

/// A rational function on `Mat_n x Mat_n`, stored as a shared expression
/// DAG. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct RegularFunction {
    root: Arc<Node>,
    n: usize,
}

impl RegularFunction {
    fn wrap(n: usize, kind: NodeKind) -> Self {
        RegularFunction { root: Arc::new(Node { kind }), n }
    }

    pub fn from_root(n: usize, root: Arc<Node>) -> Self {
        RegularFunction { root, n }
    }

    pub fn from_kind(n: usize, kind: NodeKind) -> Self {
        Self::wrap(n, kind)
    }

    pub fn root(&self) -> &Arc<Node> {
        &self.root
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(n: usize, c: Coord) -> Self {
        Self::wrap(n, NodeKind::Entry(c))
    }

    pub fn constant(n: usize, v: Q) -> Self {
        Self::wrap(n, NodeKind::Const(v))
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Q::one())
    }

    pub fn as_const(&self) -> Option<&Q> {
        match &self.root.kind {
            NodeKind::Const(v) => Some(v),
            _ => None,
        }
    }

    pub fn sum(n: usize, terms: impl IntoIterator<Item = RegularFunction>) -> Self {
        let mut nodes = Vec::new();
        let mut c = Q::zero();
        for t in terms {
            match t.as_const() {
                Some(v) => c += v,
                None => nodes.push(t.root),
            }
        }
        if nodes.is_empty() {
            return Self::constant(n, c);
        }
        if !c.is_zero() {
            nodes.push(Self::constant(n, c).root);
        }
        if nodes.len() == 1 {
            return RegularFunction { root: nodes.pop().unwrap(), n };
        }
        Self::wrap(n, NodeKind::Sum(nodes))
    }

    pub fn product(n: usize, factors: impl IntoIterator<Item = RegularFunction>) -> Self {
        let mut nodes = Vec::new();
        let mut c = Q::one();
        for f in factors {
            match f.as_const() {
                Some(v) => c *= v,
                None => nodes.push(f.root),
            }
        }
        if c.is_zero() || nodes.is_empty() {
            return Self::constant(n, c);
        }
        if !c.is_one() {
            nodes.insert(0, Self::constant(n, c).root);
        }
        if nodes.len() == 1 {
            return RegularFunction { root: nodes.pop().unwrap(), n };
        }
        Self::wrap(n, NodeKind::Product(nodes))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::sum(self.n, [self.clone(), rhs.clone()])
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::sum(self.n, [self.clone(), rhs.neg()])
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::product(self.n, [self.clone(), rhs.clone()])
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::product(self.n, [Self::constant(self.n, s.clone()), self.clone()])
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn pow(&self, e: u32) -> Self {
        match (e, self.as_const()) {
            (0, _) => Self::one(self.n),
            (1, _) => self.clone(),
            (_, Some(v)) => Self::constant(self.n, Ring::pow(v, e)),
            _ => Self::wrap(self.n, NodeKind::Pow(self.root.clone(), e)),
        }
    }

    /// `self^e` for a signed exponent.
    pub fn powi(&self, e: i64) -> Self {
        if e >= 0 {
            self.pow(e as u32)
        } else {
            Self::one(self.n).div(&self.pow((-e) as u32))
        }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        if rhs.as_const().is_some_and(|v| v.is_one()) {
            return self.clone();
        }
        Self::wrap(self.n, NodeKind::Quotient(self.root.clone(), rhs.root.clone()))
    }

    /// Determinant of a square matrix of functions.
    pub fn det(n: usize, m: &ExactMatrix<RegularFunction>) -> Self {
        assert!(m.is_square());
        if m.rows() == 0 {
            return Self::one(n);
        }
        Self::wrap(n, NodeKind::Det { size: m.rows(), entries: m.data().iter().map(|f| f.root.clone()).collect() })
    }

    /// Minor of the coordinate matrix whose `(a, b)` entry is `cell(a, b)`,
    /// `a, b = 1..=size`.
    pub fn det_of(n: usize, size: usize, mut cell: impl FnMut(usize, usize) -> RegularFunction) -> Self {
        Self::det(n, &ExactMatrix::from_fn(size, size, &mut cell))
    }

    /// Number of distinct nodes.
    pub fn node_count(&self) -> usize {
        let mut seen = BTreeMap::new();
        let mut stack = alloc::vec![self.root.clone()];
        while let Some(node) = stack.pop() {
            if seen.insert(key(&node), ()).is_some() {
                continue;
            }
            stack.extend(node.children().into_iter().cloned());
        }
        seen.len()
    }

    /// Upper bounds on the degrees of a numerator and a denominator of this
    /// rational function.
    pub fn degree_bound(&self) -> (u64, u64) {
        fn go(node: &Arc<Node>, memo: &mut BTreeMap<usize, (u64, u64)>) -> (u64, u64) {
            if let Some(d) = memo.get(&key(node)) {
                return *d;
            }
            let d = match &node.kind {
                NodeKind::Entry(_) => (1, 0),
                NodeKind::Const(_) => (0, 0),
                NodeKind::Sum(v) => {
                    let ds: Vec<_> = v.iter().map(|c| go(c, memo)).collect();
                    let den: u64 = ds.iter().map(|d| d.1).sum();
                    let num = ds.iter().map(|d| d.0 + den - d.1).max().unwrap_or(0);
                    (num, den)
                }
                NodeKind::Product(v) => v.iter().map(|c| go(c, memo)).fold((0, 0), |a, d| (a.0 + d.0, a.1 + d.1)),
                NodeKind::Pow(a, e) => {
                    let d = go(a, memo);
                    (d.0 * *e as u64, d.1 * *e as u64)
                }
                NodeKind::Det { size, entries } => {
                    let ds: Vec<_> = entries.iter().map(|c| go(c, memo)).collect();
                    let den: u64 = ds.iter().map(|d| d.1).sum();
                    let num = ds.iter().map(|d| d.0).max().unwrap_or(0) * *size as u64 + den;
                    (num, den)
                }
                NodeKind::Quotient(a, b) => {
                    let (na, da) = go(a, memo);
                    let (nb, db) = go(b, memo);
                    (na + db, da + nb)
                }
            };
            memo.insert(key(node), d);
            d
        }
        go(&self.root, &mut BTreeMap::new())
    }

    pub fn eval_q(&self, p: &Point) -> Result<Q, Error> {
        Evaluator::<Q>::at_point(p).eval(self)
    }

    pub fn eval_grad(&self, p: &Point) -> Result<GradScalar, Error> {
        Evaluator::<GradScalar>::at_point(p).eval(self)
    }

    /// Expand into a polynomial in the `2n^2` entries. Fails with
    /// `NotDivisible` if a quotient is not polynomial, or `TooLarge` if any
    /// intermediate exceeds `term_limit` terms.
    pub fn to_polynomial(&self, term_limit: usize) -> Result<SparsePolynomial, Error> {
        let nv = 2 * self.n * self.n;
        let n = self.n;
        let mut ev = Evaluator::new(move |c: Coord| SparsePolynomial::var(nv, c.index(n)));
        ev.set_term_limit(Some(term_limit));
        ev.eval(self)
    }
}

/// Algebras a function DAG can be evaluated in.
pub trait Algebra: Ring {
    fn det(m: &ExactMatrix<Self>, limit: Option<usize>) -> Result<Self, Error>;
    fn checked_div(&self, d: &Self) -> Result<Self, Error>;
    /// Size measure used for term budgets.
    fn size(&self) -> usize {
        1
    }
}

impl Algebra for Q {
    fn det(m: &ExactMatrix<Self>, limit: Option<usize>) -> Result<Self, Error> {
        m.det_bareiss_limited(limit)
    }
    fn checked_div(&self, d: &Self) -> Result<Self, Error> {
        self.exact_div(d)
    }
}

/// Largest size for which a singular gradient determinant is expanded by
/// cofactors.
const COFACTOR_FALLBACK: usize = 6;

impl Algebra for GradScalar {
    /// Adjugate rule first; a singular value matrix falls back to
    /// elimination, then to cofactor expansion for small sizes.
    fn det(m: &ExactMatrix<Self>, _limit: Option<usize>) -> Result<Self, Error> {
        match m.det_adjugate().or_else(|_| m.det()) {
            Err(Error::NeedsRerandomization) if m.rows() <= COFACTOR_FALLBACK => Ok(det_cofactor(m)),
            r => r,
        }
    }
    fn checked_div(&self, d: &Self) -> Result<Self, Error> {
        Ok(self.mul(&d.inv()?))
    }
}

impl Algebra for SparsePolynomial {
    fn det(m: &ExactMatrix<Self>, limit: Option<usize>) -> Result<Self, Error> {
        m.det_bareiss_limited(limit)
    }
    fn checked_div(&self, d: &Self) -> Result<Self, Error> {
        self.exact_divide(d)
    }
    fn size(&self) -> usize {
        self.num_terms()
    }
}

/// Memoizing evaluator. The memo is keyed by node identity and persists
/// across calls, so evaluating many functions that share subexpressions
/// (for example a whole seed) computes every shared node once.
pub struct Evaluator<'a, A> {
    entry: Box<dyn Fn(Coord) -> A + 'a>,
    memo: BTreeMap<usize, (Arc<Node>, A)>,
    term_limit: Option<usize>,
}

impl<'a> Evaluator<'a, Q> {
    pub fn at_point(p: &'a Point) -> Self {
        Evaluator::new(move |c| p.get(c).clone())
    }
}

impl<'a> Evaluator<'a, GradScalar> {
    pub fn at_point(p: &'a Point) -> Self {
        let n = p.n();
        let dim = 2 * n * n;
        Evaluator::new(move |c| GradScalar::variable(p.get(c).clone(), c.index(n), dim))
    }
}

impl<'a, A: Algebra> Evaluator<'a, A> {
    pub fn new(entry: impl Fn(Coord) -> A + 'a) -> Self {
        Evaluator { entry: Box::new(entry), memo: BTreeMap::new(), term_limit: None }
    }

    pub fn set_term_limit(&mut self, limit: Option<usize>) {
        self.term_limit = limit;
    }

    pub fn eval(&mut self, f: &RegularFunction) -> Result<A, Error> {
        self.eval_node(&f.root)
    }

    fn eval_node(&mut self, node: &Arc<Node>) -> Result<A, Error> {
        if let Some((_, v)) = self.memo.get(&key(node)) {
            return Ok(v.clone());
        }
        let v = match &node.kind {
            NodeKind::Entry(c) => (self.entry)(*c),
            NodeKind::Const(v) => A::from_q(v),
            NodeKind::Sum(ts) => {
                let mut acc = A::ring_zero();
                for t in ts {
                    acc = acc.add(&self.eval_node(t)?);
                }
                acc
            }
            NodeKind::Product(fs) => {
                let mut acc = A::ring_one();
                for f in fs {
                    let v = self.eval_node(f)?;
                    acc = acc.mul(&v);
                }
                acc
            }
            NodeKind::Pow(a, e) => self.eval_node(a)?.pow(*e),
            NodeKind::Det { size, entries } => {
                let vals = entries.iter().map(|e| self.eval_node(e)).collect::<Result<Vec<_>, _>>()?;
                A::det(&ExactMatrix::new(*size, *size, vals), self.term_limit)?
            }
            NodeKind::Quotient(a, b) => {
                let num = self.eval_node(a)?;
                let den = self.eval_node(b)?;
                let id = self.memo.len();
                num.checked_div(&den).map_err(|e| match e {
                    Error::DivisionByZero { .. } => Error::DivisionByZero { node: id },
                    other => other,
                })?
            }
        };
        if let Some(limit) = self.term_limit {
            if v.size() > limit {
                return Err(Error::TooLarge { terms: limit });
            }
        }
        self.memo.insert(key(node), (node.clone(), v.clone()));
        Ok(v)
    }
}
