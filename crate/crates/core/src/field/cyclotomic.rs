use std::fmt;

use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::{rational, Field, FieldError, Rational, RootsOfUnity};

/// Largest prime accepted for `Q(ζ_p)`.
pub const MAX_PRIME: u32 = 13;

const PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];

pub(crate) fn check_prime(p: u32) -> Result<(), FieldError> {
    if PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(FieldError::UnsupportedPrime(p))
    }
}

/// Element of `Q(ζ_p)` in the basis `1, ζ, …, ζ^{p-2}`.
///
/// Coordinates are kept reduced, so derived equality and hashing are exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    p: u32,
    coords: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn new(p: u32, coords: Vec<Rational>) -> Result<Self, FieldError> {
        check_prime(p)?;
        let expected = (p - 1) as usize;
        if coords.len() != expected {
            return Err(FieldError::CoordinateCount {
                expected,
                got: coords.len(),
            });
        }
        Ok(Self { p, coords })
    }

    /// Builds `Σ c_i ζ^i` from any number of coefficients, folding exponents
    /// mod `p` and eliminating `ζ^{p-1}`.
    pub fn from_power_coeffs(p: u32, coeffs: &[Rational]) -> Result<Self, FieldError> {
        check_prime(p)?;
        Ok(Self::reduce(p, coeffs))
    }

    pub fn zero(p: u32) -> Result<Self, FieldError> {
        Self::from_rational(p, &Rational::zero())
    }

    pub fn one(p: u32) -> Result<Self, FieldError> {
        Self::from_rational(p, &Rational::one())
    }

    pub fn from_rational(p: u32, q: &Rational) -> Result<Self, FieldError> {
        check_prime(p)?;
        let mut coords = vec![Rational::zero(); (p - 1) as usize];
        coords[0] = q.clone();
        Ok(Self { p, coords })
    }

    /// The generator `ζ = e^{2πi/p}`.
    pub fn zeta(p: u32) -> Result<Self, FieldError> {
        Self::zeta_pow(p, 1)
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(p: u32, k: i64) -> Result<Self, FieldError> {
        check_prime(p)?;
        let e = k.rem_euclid(p as i64) as usize;
        let mut coeffs = vec![Rational::zero(); p as usize];
        coeffs[e] = Rational::one();
        Ok(Self::reduce(p, &coeffs))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    fn reduce(p: u32, coeffs: &[Rational]) -> Self {
        let pu = p as usize;
        let mut folded = vec![Rational::zero(); pu];
        for (i, c) in coeffs.iter().enumerate() {
            folded[i % pu] += c;
        }
        let top = folded.pop().expect("p >= 2");
        let coords = folded.into_iter().map(|c| c - &top).collect();
        Self { p, coords }
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(FieldError::MismatchedPrime(self.p, other.p))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { p: self.p, coords })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { p: self.p, coords })
    }

    /// Product reduced modulo the cyclotomic polynomial.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        let n = self.coords.len();
        let mut prod = vec![Rational::zero(); 2 * n];
        for (i, a) in self.coords.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        Ok(Self::reduce(self.p, &prod))
    }

    /// Multiplicative inverse, found by solving `x · y = 1` as a linear system
    /// in the coordinates of `y`.
    pub fn checked_inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero_element() {
            return Err(FieldError::ZeroInverse);
        }
        let n = self.coords.len();
        // Column j holds the coordinates of self · ζ^j.
        let mut m = Matrix::zeros(n, n, &Rational::one());
        for j in 0..n {
            let basis = Self::zeta_pow(self.p, j as i64)?;
            let col = self.checked_mul(&basis)?;
            for (i, c) in col.coords.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        let one = Self::one(self.p)?;
        let sol = m
            .solve_linear(&one.coords)?
            .ok_or(FieldError::ZeroInverse)?;
        Ok(Self {
            p: self.p,
            coords: sol,
        })
    }

    fn is_zero_element(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Multiplication by `ζ` as a `(p-1)×(p-1)` rational matrix in the
    /// standard basis.
    pub fn zeta_companion(p: u32) -> Result<Matrix<Rational>, FieldError> {
        check_prime(p)?;
        let n = (p - 1) as usize;
        let zeta = Self::zeta(p)?;
        let mut m = Matrix::zeros(n, n, &Rational::one());
        for j in 0..n {
            let col = zeta.checked_mul(&Self::zeta_pow(p, j as i64)?)?;
            for (i, c) in col.coords.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        Ok(m)
    }
}

impl Field for CyclotomicNumber {
    fn zero_like(&self) -> Self {
        Self {
            p: self.p,
            coords: vec![Rational::zero(); self.coords.len()],
        }
    }
    fn one_like(&self) -> Self {
        let mut z = self.zero_like();
        z.coords[0] = Rational::one();
        z
    }
    fn is_zero(&self) -> bool {
        self.is_zero_element()
    }
    // The infallible trait methods are only reached from matrices whose
    // entries share one field, so a prime mismatch is a logic error.
    fn add(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).expect("operands share p")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.checked_sub(rhs).expect("operands share p")
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("operands share p")
    }
    fn neg(&self) -> Self {
        Self {
            p: self.p,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
    fn inverse(&self) -> Option<Self> {
        self.checked_inverse().ok()
    }
    fn embed(&self, q: &Rational) -> Self {
        let mut z = self.zero_like();
        z.coords[0] = q.clone();
        z
    }
}

impl RootsOfUnity for CyclotomicNumber {
    fn primitive_roots(&self, p: u32) -> Option<Vec<Self>> {
        if p != self.p {
            return None;
        }
        (1..p as i64)
            .map(|k| Self::zeta_pow(p, k).ok())
            .collect()
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coords.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let abs = c.abs();
            if wrote {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let coeff = if i > 0 && abs == Rational::one() {
                String::new()
            } else {
                abs.to_string()
            };
            match i {
                0 => write!(f, "{abs}")?,
                1 => write!(f, "{coeff}ζ")?,
                _ => write!(f, "{coeff}ζ^{i}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Convenience: `Σ coeffs[i] ζ^i` with small integer coefficients.
pub fn cyclo_from_ints(p: u32, coeffs: &[i64]) -> Result<CyclotomicNumber, FieldError> {
    let rs: Vec<Rational> = coeffs.iter().map(|&c| rational(c, 1)).collect();
    CyclotomicNumber::from_power_coeffs(p, &rs)
}
