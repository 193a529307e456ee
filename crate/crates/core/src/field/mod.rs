//! Exact arithmetic over `Q` and the cyclotomic fields `Q(ζ_p)`, plus the dense
//! linear algebra (rank, kernel, solve) used by every other module.
//!
//! Nothing in here touches floating point. Values are immutable once built and
//! all operations are pure.

mod cyclotomic;
mod matrix;
mod rational;

pub use cyclotomic::{cyclo_from_ints, CyclotomicNumber, MAX_PRIME};
pub(crate) use cyclotomic::check_prime;
pub use matrix::Matrix;
pub use rational::{format_rational, parse_rational, rational, Extended, Rational};
pub(crate) use rational::{as_string, vec_as_string};

use std::fmt::Debug;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("cyclotomic operands live in different fields (p = {0} vs p = {1})")]
    MismatchedPrime(u32, u32),
    #[error("{0} is not a supported prime (primes up to {MAX_PRIME})")]
    UnsupportedPrime(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("wrong coordinate count: expected {expected}, got {got}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// Element of an exact field.
///
/// Elements carry enough context to build the additive and multiplicative
/// identities of their own field (`Q(ζ_p)` needs `p`), which is why there are
/// `zero_like`/`one_like` instead of associated constants.
pub trait Field: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` exactly when `self` is zero.
    fn inverse(&self) -> Option<Self>;
    /// Embeds a rational number into the field of `self`.
    fn embed(&self, q: &Rational) -> Self;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }
}

/// Fields that contain a primitive `p`-th root of unity.
pub trait RootsOfUnity: Field {
    /// All primitive `p`-th roots of unity, ordered `ζ, ζ², …, ζ^{p-1}` for
    /// the field's distinguished generator `ζ`. `None` when the field does not
    /// contain them.
    fn primitive_roots(&self, p: u32) -> Option<Vec<Self>>;
}

impl Field for Rational {
    fn zero_like(&self) -> Self {
        Rational::from_integer(0.into())
    }
    fn one_like(&self) -> Self {
        Rational::from_integer(1.into())
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
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
    fn inverse(&self) -> Option<Self> {
        if Field::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn embed(&self, q: &Rational) -> Self {
        q.clone()
    }
}

impl RootsOfUnity for Rational {
    fn primitive_roots(&self, p: u32) -> Option<Vec<Self>> {
        (p == 2).then(|| vec![rational(-1, 1)])
    }
}
