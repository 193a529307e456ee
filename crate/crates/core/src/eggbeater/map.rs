use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{EggBeaterError, SignVector};
use crate::field::{format_rational, Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    #[serde(with = "crate::field::as_string")]
    pub x: Rational,
    #[serde(with = "crate::field::as_string")]
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn in_open_square(&self) -> bool {
        inside(&self.x) && inside(&self.y)
    }

    /// `‖self − other‖_∞`.
    pub fn dist(&self, other: &Point) -> Rational {
        let dx = (&self.x - &other.x).abs();
        let dy = (&self.y - &other.y).abs();
        dx.max(dy)
    }
}

fn inside(s: &Rational) -> bool {
    s.abs() < Rational::one()
}

fn check_domain(s: &Rational) -> Result<(), EggBeaterError> {
    if s.abs() > Rational::one() {
        return Err(EggBeaterError::Domain(format_rational(s)));
    }
    Ok(())
}

/// Tent profile `u0(s) = 1 − |s|` on `[−1, 1]`.
pub fn u0(s: &Rational) -> Result<Rational, EggBeaterError> {
    check_domain(s)?;
    Ok(Rational::one() - s.abs())
}

/// `h0(s) = s − ε_s s²/2`, the Hamiltonian of the tent shear.
pub fn h0(s: &Rational) -> Result<Rational, EggBeaterError> {
    check_domain(s)?;
    Ok(s - s.signum() * s * s / Rational::from_integer(2.into()))
}

/// `Φ^{μ,ν}_λ(x, y) = (x + λu(y') − νλ, y')` with `y' = y + λu(x) − μλ`:
/// one `V` segment, flip, one `H` segment, flip back, in lifted coordinates.
///
/// Fails when either reduction window is missed, i.e. `y'` or the new `x`
/// leaves `(−1, 1)`.
pub fn phi_block(z: &Point, mu: &Rational, nu: &Rational, lambda: &Rational) -> Result<Point, EggBeaterError> {
    let y2 = &z.y + lambda * u0(&z.x)? - mu * lambda;
    if !inside(&y2) {
        return Err(EggBeaterError::WindowMissed(1, format_rational(&y2)));
    }
    let x2 = &z.x + lambda * u0(&y2)? - nu * lambda;
    if !inside(&x2) {
        return Err(EggBeaterError::WindowMissed(2, format_rational(&x2)));
    }
    Ok(Point::new(x2, y2))
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `A_{λ,j+1} = [[1 + ε_{2j+4}ε_{2j+1}λ², −ε_{2j+4}λ], [−ε_{2j+1}λ, 1]]`,
/// the linear part of block `j` (0-based).
pub fn block_matrix(j: usize, signs: &SignVector, lambda: &Rational) -> Matrix<Rational> {
    let j = j as i64;
    let (e1, e4) = (signs.eps_q(2 * j + 1), signs.eps_q(2 * j + 4));
    Matrix::from_rows(
        vec![
            vec![q(1) + &e4 * &e1 * lambda * lambda, -(&e4 * lambda)],
            vec![-(&e1 * lambda), q(1)],
        ],
        &q(1),
    )
    .expect("2x2")
}

/// The two shears whose product is [`block_matrix`]:
/// `[[1, −ε_{2j+4}λ], [0, 1]] · [[1, 0], [−ε_{2j+1}λ, 1]]`.
pub fn parabolic_factors(j: usize, signs: &SignVector, lambda: &Rational) -> (Matrix<Rational>, Matrix<Rational>) {
    let j = j as i64;
    let (e1, e4) = (signs.eps_q(2 * j + 1), signs.eps_q(2 * j + 4));
    let upper = Matrix::from_rows(vec![vec![q(1), -(e4 * lambda)], vec![q(0), q(1)]], &q(1)).expect("2x2");
    let lower = Matrix::from_rows(vec![vec![q(1), q(0)], vec![-(e1 * lambda), q(1)]], &q(1)).expect("2x2");
    (upper, lower)
}

/// `b_{λ,j+1} = (−ε_{2j+4}(1 − μ_{j+1})λ² + (1 − ν_{j+1})λ, (1 − μ_{j+1})λ)`.
pub fn block_vector(j: usize, signs: &SignVector, lambda: &Rational, mu: &Rational, nu: &Rational) -> Vec<Rational> {
    let e4 = signs.eps_q(2 * j as i64 + 4);
    let (a, b) = (q(1) - mu, q(1) - nu);
    vec![-(e4 * &a * lambda * lambda) + b * lambda, a * lambda]
}

pub(crate) fn trace(m: &Matrix<Rational>) -> Rational {
    (0..m.rows()).fold(Rational::zero(), |acc, i| acc + m.get(i, i))
}
