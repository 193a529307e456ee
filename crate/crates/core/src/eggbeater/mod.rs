//! Fixed points of `φ_λ^p` for the egg-beater map `φ_λ = f_H ∘ f_V` in the
//! class `α̃ = a^{m_1} b^{n_1} ⋯ a^{m_p} b^{n_p}`, computed exactly.
//!
//! Every fixed point is described by its even intermediate points
//! `(x_{2j}, y_{2j}) ∈ (−1, 1)²` and a sign vector `ε ∈ {±1}^{2p}` with
//! `(sign x_{2j}, sign y_{2j}) = (ε_{2j+1}, ε_{2j+2})`. For fixed signs the
//! tent profile makes each block affine, so the fixed point solves a 2×2
//! linear system.

mod demo;
mod map;
mod planar;
mod search;
mod solve;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed as _, Zero};
use serde::{Deserialize, Serialize};

use crate::field::{format_rational, Rational};

pub use demo::{demo_orbit, smoothed_u};
pub use map::{block_matrix, block_vector, h0, parabolic_factors, phi_block, u0, Point};
pub use planar::{solve_2d, PlanarRecord};
pub use search::{
    coefficient_sum, coefficient_sums, lambda_lattice, lattice_step, min_coefficient_gap,
    param_search, threshold_lambda,
};
pub use solve::{
    action_exact, action_leading, all_valid, composite_system, enumerate, limit_point,
    limit_residual, min_action_gap, nondegeneracy, solve_signed, FixedPointRecord, Rejection,
};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EggBeaterError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("argument {0} outside [-1, 1]")]
    Domain(String),
    #[error("reduction window {0} missed: {1} not in (-1, 1)")]
    WindowMissed(u8, String),
    #[error("sign vector must have length {expected}, got {got}")]
    SignLength { expected: usize, got: usize },
    #[error("cannot parse sign vector {0:?}")]
    SignParse(String),
    #[error("det(A - id) = 0: the fixed-point system is singular")]
    Singular,
    #[error("record for {0} is not valid")]
    InvalidRecord(String),
    #[error("mu = nu makes the actions collide")]
    EqualMuNu,
    #[error("no parameters with distinct coefficient sums up to denominator {0}")]
    SearchExhausted(i64),
}

/// Parameters `(p, L, λ, μ, ν)`. `p = 1` is the planar variant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EggBeaterParams {
    pub p: u32,
    #[serde(with = "crate::field::as_string")]
    pub l: Rational,
    #[serde(with = "crate::field::as_string")]
    pub lambda: Rational,
    #[serde(with = "crate::field::vec_as_string")]
    pub mu: Vec<Rational>,
    #[serde(with = "crate::field::vec_as_string")]
    pub nu: Vec<Rational>,
}

impl EggBeaterParams {
    /// Checks `L ≥ 4`, `λ > 0`, `μ_j, ν_j ∈ (0, 1)`, distinct pairs
    /// `(μ_j, ν_j)`, and that `m_j = μ_j λ / L`, `n_j = ν_j λ / L` are positive
    /// integers.
    pub fn new(p: u32, l: Rational, lambda: Rational, mu: Vec<Rational>, nu: Vec<Rational>) -> Result<Self, EggBeaterError> {
        let params = Self::unchecked(p, l, lambda, mu, nu)?;
        for (j, (m, n)) in params.windings().into_iter().enumerate() {
            if !m.is_integer() || !n.is_integer() {
                return Err(EggBeaterError::Params(format!(
                    "lambda {} is off the lattice: m_{} = {}, n_{} = {}",
                    format_rational(&params.lambda),
                    j + 1,
                    format_rational(&m),
                    j + 1,
                    format_rational(&n)
                )));
            }
        }
        Ok(params)
    }

    /// Same checks without the lattice condition on `λ`, for exploring the
    /// algebra away from genuine classes.
    pub fn unchecked(p: u32, l: Rational, lambda: Rational, mu: Vec<Rational>, nu: Vec<Rational>) -> Result<Self, EggBeaterError> {
        let bad = |s: String| Err(EggBeaterError::Params(s));
        if p == 0 {
            return bad("p must be positive".into());
        }
        if mu.len() != p as usize || nu.len() != p as usize {
            return bad(format!("need {p} values of mu and of nu"));
        }
        if l < Rational::from_integer(4.into()) {
            return bad("L must be at least 4".into());
        }
        if !lambda.is_positive() {
            return bad("lambda must be positive".into());
        }
        let unit = |x: &Rational| x.is_positive() && x < &Rational::one();
        if !mu.iter().chain(&nu).all(unit) {
            return bad("mu and nu must lie in (0, 1)".into());
        }
        for i in 0..mu.len() {
            for j in i + 1..mu.len() {
                if mu[i] == mu[j] && nu[i] == nu[j] {
                    return bad(format!("pairs {} and {} coincide", i + 1, j + 1));
                }
            }
        }
        Ok(Self { p, l, lambda, mu, nu })
    }

    /// `(m_j, n_j) = (μ_j λ / L, ν_j λ / L)`.
    pub fn windings(&self) -> Vec<(Rational, Rational)> {
        self.mu
            .iter()
            .zip(&self.nu)
            .map(|(m, n)| (m * &self.lambda / &self.l, n * &self.lambda / &self.l))
            .collect()
    }

    pub fn with_lambda(&self, lambda: Rational) -> Result<Self, EggBeaterError> {
        Self::new(self.p, self.l.clone(), lambda, self.mu.clone(), self.nu.clone())
    }

    /// `μ_j` with `j` taken mod `p`, 1-based.
    pub fn mu_at(&self, j: i64) -> &Rational {
        &self.mu[(j - 1).rem_euclid(self.p as i64) as usize]
    }

    /// `ν_j` with `j` taken mod `p`, 1-based.
    pub fn nu_at(&self, j: i64) -> &Rational {
        &self.nu[(j - 1).rem_euclid(self.p as i64) as usize]
    }
}

/// `ε ∈ {±1}^{2p}`, indexed from 1 and cyclically mod `2p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self, EggBeaterError> {
        if signs.is_empty() || !signs.len().is_multiple_of(2) || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(EggBeaterError::SignParse(format!("{signs:?}")));
        }
        Ok(Self(signs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn p(&self) -> usize {
        self.0.len() / 2
    }

    /// `ε_i`, 1-based, mod `2p`.
    pub fn eps(&self, i: i64) -> i64 {
        self.0[(i - 1).rem_euclid(self.0.len() as i64) as usize] as i64
    }

    /// `ε_i` as a rational.
    pub fn eps_q(&self, i: i64) -> Rational {
        Rational::from_integer(self.eps(i).into())
    }

    /// `ε̄ = ∏ ε_k`.
    pub fn product(&self) -> i64 {
        self.0.iter().map(|&s| s as i64).product()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    /// All `2^{2p}` sign vectors, `+` before `−` lexicographically.
    pub fn all(p: usize) -> Vec<SignVector> {
        let n = 2 * p;
        (0..1u64 << n)
            .map(|bits| Self((0..n).map(|i| if bits >> (n - 1 - i) & 1 == 0 { 1 } else { -1 }).collect()))
            .collect()
    }

    pub(crate) fn check_len(&self, p: u32) -> Result<(), EggBeaterError> {
        if self.0.len() != 2 * p as usize {
            return Err(EggBeaterError::SignLength {
                expected: 2 * p as usize,
                got: self.0.len(),
            });
        }
        Ok(())
    }

    /// Sign of a rational in `{−1, 0, 1}` (`ε_0 = 0`).
    pub(crate) fn sign_of(x: &Rational) -> i64 {
        if x.is_zero() {
            0
        } else if x.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            write!(f, "{}", if s > 0 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

impl FromStr for SignVector {
    type Err = EggBeaterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let signs = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(EggBeaterError::SignParse(s.to_string())),
            })
            .collect::<Result<Vec<i8>, _>>()?;
        Self::new(signs).map_err(|_| EggBeaterError::SignParse(s.to_string()))
    }
}

impl Serialize for SignVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SignVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
