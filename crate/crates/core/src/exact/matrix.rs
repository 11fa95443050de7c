use alloc::vec::Vec;
use core::ops::Index;

use num_traits::Zero;

use super::{GradScalar, Ring, Q};
use crate::Error;

/// Dense row-major matrix over any ring element type.
///
/// `entry`/`sub` use the 1-indexed inclusive convention of the interval
/// notation `M_[a,b]^[c,d]` (rows `a..=b`, columns `c..=d`). `Index` is
/// 0-indexed for tight loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> ExactMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        ExactMatrix { rows, cols, data }
    }

    /// Build from a 1-indexed generator.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 1..=rows {
            for j in 1..=cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    /// 1-indexed access.
    pub fn entry(&self, i: usize, j: usize) -> &T {
        assert!(i >= 1 && i <= self.rows && j >= 1 && j <= self.cols, "entry ({i},{j}) out of range");
        &self.data[(i - 1) * self.cols + (j - 1)]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: T) {
        assert!(i >= 1 && i <= self.rows && j >= 1 && j <= self.cols, "entry ({i},{j}) out of range");
        self.data[(i - 1) * self.cols + (j - 1)] = v;
    }

    /// `M_[r0,r1]^[c0,c1]`, 1-indexed inclusive. An empty range gives an
    /// empty matrix.
    pub fn sub(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let rows = (r1 + 1).saturating_sub(r0);
        let cols = (c1 + 1).saturating_sub(c0);
        ExactMatrix::from_fn(rows, cols, |i, j| self.entry(r0 + i - 1, c0 + j - 1).clone())
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        (1..=self.cols).map(|j| self.entry(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (1..=self.rows).map(|i| self.entry(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix::from_fn(self.cols, self.rows, |i, j| self.entry(j, i).clone())
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> ExactMatrix<U> {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        ExactMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Place `self` to the left of `other`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        ExactMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j <= self.cols {
                self.entry(i, j).clone()
            } else {
                other.entry(i, j - self.cols).clone()
            }
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn check_square(&self) -> Result<(), Error> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }
}

impl<T> Index<(usize, usize)> for ExactMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Ring> ExactMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: alloc::vec![T::ring_zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        ExactMatrix::from_fn(n, n, |i, j| if i == j { T::ring_one() } else { T::ring_zero() })
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, Error> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(alloc::format!(
                "{}x{} times {}x{}",
                self.rows,
                self.cols,
                rhs.rows,
                rhs.cols
            )));
        }
        Ok(ExactMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::ring_zero();
            for k in 1..=self.cols {
                let a = self.entry(i, k);
                if a.ring_is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(rhs.entry(k, j)));
            }
            acc
        }))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|a| a.mul(s))
    }
}

/// Ring elements that support exact division by a known divisor. Needed by
/// fraction-free (Bareiss) elimination.
pub trait ExactDiv: Ring {
    fn exact_div(&self, d: &Self) -> Result<Self, Error>;
    /// Size measure checked against term budgets.
    fn size(&self) -> usize {
        1
    }
}

impl ExactDiv for Q {
    fn exact_div(&self, d: &Self) -> Result<Self, Error> {
        if Zero::is_zero(d) {
            Err(Error::DivisionByZero { node: 0 })
        } else {
            Ok(self / d)
        }
    }
}

impl<T: ExactDiv> ExactMatrix<T> {
    /// Fraction-free (Bareiss) determinant with row pivoting on nonzero
    /// entries.
    pub fn det_bareiss(&self) -> Result<T, Error> {
        self.det_bareiss_limited(None)
    }

    /// Bareiss determinant that aborts with `TooLarge` once any intermediate
    /// entry exceeds `limit` in size.
    pub fn det_bareiss_limited(&self, limit: Option<usize>) -> Result<T, Error> {
        self.check_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(T::ring_one());
        }
        let mut m = self.clone();
        let mut sign_neg = false;
        let mut prev = T::ring_one();
        for k in 0..n - 1 {
            if m[(k, k)].ring_is_zero() {
                match (k + 1..n).find(|&r| !m[(r, k)].ring_is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign_neg = !sign_neg;
                    }
                    None => return Ok(T::ring_zero()),
                }
            }
            let pivot = m[(k, k)].clone();
            for i in k + 1..n {
                let lead = m[(i, k)].clone();
                for j in k + 1..n {
                    let t = m[(i, j)].mul(&pivot).sub(&lead.mul(&m[(k, j)]));
                    let v = if t.ring_is_zero() { t } else { t.exact_div(&prev)? };
                    if let Some(l) = limit {
                        if v.size() > l {
                            return Err(Error::TooLarge { terms: l });
                        }
                    }
                    m.data[i * n + j] = v;
                }
                m.data[i * n + k] = T::ring_zero();
            }
            prev = pivot;
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if sign_neg { d.neg() } else { d })
    }
}

impl ExactMatrix<Q> {
    /// Exact determinant (fraction-free elimination).
    pub fn det(&self) -> Result<Q, Error> {
        self.det_bareiss()
    }

    /// Inverse by Gauss-Jordan elimination; `Inconsistent` if singular.
    pub fn inverse(&self) -> Result<Self, Error> {
        self.check_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = ExactMatrix::<Q>::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !Zero::is_zero(&a[(r, c)])).ok_or(Error::Inconsistent)?;
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            let pv = a[(c, c)].recip();
            for j in 0..n {
                a.data[c * n + j] = &a.data[c * n + j] * &pv;
                inv.data[c * n + j] = &inv.data[c * n + j] * &pv;
            }
            for r in 0..n {
                if r == c || Zero::is_zero(&a[(r, c)]) {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    let t = &f * &a.data[c * n + j];
                    a.data[r * n + j] -= t;
                    let t = &f * &inv.data[c * n + j];
                    inv.data[r * n + j] -= t;
                }
            }
        }
        Ok(inv)
    }
}

impl ExactMatrix<GradScalar> {
    /// Determinant with gradient by elimination, pivoting on entries with a
    /// nonzero value part and tracking row-swap signs. A column with no
    /// nonzero value below the diagonal reports `NeedsRerandomization`.
    pub fn det(&self) -> Result<GradScalar, Error> {
        self.check_square()?;
        let n = self.rows;
        let mut m = self.clone();
        let mut acc = GradScalar::ring_one();
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !Zero::is_zero(m[(r, c)].value()))
                .ok_or(Error::NeedsRerandomization)?;
            if p != c {
                m.swap_rows(c, p);
                acc = acc.neg();
            }
            let pivot = m[(c, c)].clone();
            acc = acc.mul(&pivot);
            let pinv = pivot.inv()?;
            for r in c + 1..n {
                if m[(r, c)].ring_is_zero() {
                    continue;
                }
                let f = m[(r, c)].mul(&pinv);
                for j in c + 1..n {
                    if m[(c, j)].ring_is_zero() {
                        continue;
                    }
                    let t = f.mul(&m[(c, j)]);
                    m.data[r * n + j] = m.data[r * n + j].sub(&t);
                }
            }
        }
        Ok(acc)
    }

    /// Determinant with gradient by the adjugate rule:
    /// `d det M = sum_ab adj(M)_ba dM_ab`, with `adj(M) = det(M) M^{-1}`.
    /// Requires `det M != 0` at the value level.
    pub fn det_adjugate(&self) -> Result<GradScalar, Error> {
        self.check_square()?;
        let n = self.rows;
        let values = self.map(|e| e.value().clone());
        let d = values.det()?;
        if Zero::is_zero(&d) {
            return Err(Error::NeedsRerandomization);
        }
        let inv = values.inverse()?;
        let dim = self.data.iter().map(|e| e.gradient().len()).max().unwrap_or(0);
        let mut grad = alloc::vec![Q::zero(); dim];
        for a in 0..n {
            for b in 0..n {
                let g = self[(a, b)].gradient();
                if g.iter().all(Zero::is_zero) {
                    continue;
                }
                let cof = &d * &inv[(b, a)];
                for (k, gk) in g.iter().enumerate() {
                    if !Zero::is_zero(gk) {
                        grad[k] += &cof * gk;
                    }
                }
            }
        }
        Ok(GradScalar::from_parts(d, grad))
    }
}

/// Determinant by Laplace expansion along the first row. Exponential; for
/// cross-checking small matrices only.
pub fn det_cofactor<T: Ring>(m: &ExactMatrix<T>) -> T {
    assert!(m.is_square());
    let n = m.rows();
    match n {
        0 => T::ring_one(),
        1 => m[(0, 0)].clone(),
        _ => {
            let mut acc = T::ring_zero();
            for j in 0..n {
                if m[(0, j)].ring_is_zero() {
                    continue;
                }
                let minor = ExactMatrix::from_fn(n - 1, n - 1, |r, c| {
                    let cc = if c - 1 < j { c - 1 } else { c };
                    m[(r, cc)].clone()
                });
                let t = m[(0, j)].mul(&det_cofactor(&minor));
                acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

/// Solve the square system `A x = b`.
pub fn solve(a: &ExactMatrix<Q>, b: &[Q]) -> Result<Vec<Q>, Error> {
    if !a.is_square() || a.rows() != b.len() {
        return Err(Error::Shape(alloc::format!("{}x{} system with {} right-hand sides", a.rows(), a.cols(), b.len())));
    }
    let x = solve_consistent(a, b)?;
    if a.rows() > 0 && a.det()?.is_zero() {
        return Err(Error::Inconsistent);
    }
    Ok(x)
}

/// Solve a possibly overdetermined system `A x = b` (A is `m x k`) by
/// row reduction. Free variables are set to zero. Returns `Inconsistent`
/// when no exact solution exists.
pub fn solve_consistent(a: &ExactMatrix<Q>, b: &[Q]) -> Result<Vec<Q>, Error> {
    let (m, k) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::Shape(alloc::format!("{m} rows but {} right-hand sides", b.len())));
    }
    let mut aug = ExactMatrix::from_fn(m, k + 1, |i, j| if j <= k { a.entry(i, j).clone() } else { b[i - 1].clone() });
    let w = k + 1;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..m).find(|&i| !Zero::is_zero(&aug[(i, c)])) else { continue };
        aug.swap_rows(r, p);
        let pv = aug[(r, c)].recip();
        for j in 0..w {
            aug.data[r * w + j] = &aug.data[r * w + j] * &pv;
        }
        for i in 0..m {
            if i == r || Zero::is_zero(&aug[(i, c)]) {
                continue;
            }
            let f = aug[(i, c)].clone();
            for j in 0..w {
                let t = &f * &aug.data[r * w + j];
                aug.data[i * w + j] -= t;
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if (r..m).any(|i| !Zero::is_zero(&aug[(i, k)])) {
        return Err(Error::Inconsistent);
    }
    let mut x = alloc::vec![Q::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[(row, k)].clone();
    }
    Ok(x)
}
