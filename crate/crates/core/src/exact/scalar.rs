use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::Error;

/// Arbitrary-precision rational. `num_rational` keeps it reduced with a
/// positive denominator.
pub type Q = BigRational;

/// Integer as a rational.
pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// `num / den` as a rational. Panics on a zero denominator.
pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Commutative ring operations shared by every evaluation backend.
pub trait Ring: Clone {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn from_q(v: &Q) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn ring_is_zero(&self) -> bool;

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::ring_one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Ring for Q {
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        One::one()
    }
    fn from_q(v: &Q) -> Self {
        v.clone()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn ring_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// A rational value together with its exact gradient over a fixed set of
/// coordinates (`dim` of them). Constants carry an empty gradient vector,
/// which stands for the zero gradient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradScalar {
    value: Q,
    grad: Vec<Q>,
}

impl GradScalar {
    pub fn constant(value: Q) -> Self {
        GradScalar { value, grad: Vec::new() }
    }

    /// The coordinate function `e_index` taking the given value.
    pub fn variable(value: Q, index: usize, dim: usize) -> Self {
        let mut grad = alloc::vec![Q::zero(); dim];
        grad[index] = Q::one();
        GradScalar { value, grad }
    }

    pub fn from_parts(value: Q, grad: Vec<Q>) -> Self {
        GradScalar { value, grad }
    }

    pub fn value(&self) -> &Q {
        &self.value
    }

    /// Dense gradient. May be shorter than the coordinate count (or empty);
    /// missing entries are zero.
    pub fn gradient(&self) -> &[Q] {
        &self.grad
    }

    pub fn partial(&self, index: usize) -> Q {
        self.grad.get(index).cloned().unwrap_or_else(Q::zero)
    }

    /// Gradient padded to `dim` entries.
    pub fn gradient_dense(&self, dim: usize) -> Vec<Q> {
        let mut g = self.grad.clone();
        g.resize(dim, Q::zero());
        g
    }

    /// Multiplicative inverse; fails when the value is zero.
    pub fn inv(&self) -> Result<Self, Error> {
        if Zero::is_zero(&self.value) {
            return Err(Error::DivisionByZero { node: 0 });
        }
        let inv = self.value.recip();
        let factor = -(&inv * &inv);
        let grad = self.grad.iter().map(|g| g * &factor).collect();
        Ok(GradScalar { value: inv, grad })
    }

    pub fn scale(&self, s: &Q) -> Self {
        GradScalar {
            value: &self.value * s,
            grad: self.grad.iter().map(|g| g * s).collect(),
        }
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&Q, &Q) -> Q) -> Vec<Q> {
        let len = self.grad.len().max(rhs.grad.len());
        let zero = Q::zero();
        (0..len)
            .map(|i| f(self.grad.get(i).unwrap_or(&zero), rhs.grad.get(i).unwrap_or(&zero)))
            .collect()
    }
}

impl Ring for GradScalar {
    fn ring_zero() -> Self {
        GradScalar::constant(Q::zero())
    }
    fn ring_one() -> Self {
        GradScalar::constant(Q::one())
    }
    fn from_q(v: &Q) -> Self {
        GradScalar::constant(v.clone())
    }
    fn add(&self, rhs: &Self) -> Self {
        GradScalar { value: &self.value + &rhs.value, grad: self.zip(rhs, |a, b| a + b) }
    }
    fn sub(&self, rhs: &Self) -> Self {
        GradScalar { value: &self.value - &rhs.value, grad: self.zip(rhs, |a, b| a - b) }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = (&self.value, &rhs.value);
        let grad = self.zip(rhs, |ga, gb| {
            let mut t = Q::zero();
            if !Zero::is_zero(gb) {
                t += a * gb;
            }
            if !Zero::is_zero(ga) {
                t += b * ga;
            }
            t
        });
        GradScalar { value: a * b, grad }
    }
    fn neg(&self) -> Self {
        GradScalar { value: -&self.value, grad: self.grad.iter().map(|g| -g).collect() }
    }
    fn ring_is_zero(&self) -> bool {
        Zero::is_zero(&self.value) && self.grad.iter().all(Zero::is_zero)
    }
}
