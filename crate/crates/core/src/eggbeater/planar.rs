use num_traits::Signed;
use serde::Serialize;

use super::map::phi_block;
use super::solve::{nondegeneracy, solve_signed};
use super::{EggBeaterError, EggBeaterParams, Point, SignVector};
use crate::field::Rational;

/// One of the four critical orbits of the planar variant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanarRecord {
    pub signs: SignVector,
    pub point: Point,
    #[serde(with = "crate::field::as_string")]
    pub action: Rational,
    #[serde(with = "crate::field::as_string")]
    pub det: Rational,
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// The four fixed points `z_ε = (ε_1(1 − μ), ε_2(1 − ν))` of the single
/// block map, with actions `(λ/2)(ε_1(1 − μ)² − ε_2(1 − ν)²)`.
///
/// Each point is checked against [`phi_block`] and against the general
/// solver run with `p = 1`; any disagreement is an error.
pub fn solve_2d(mu: &Rational, nu: &Rational, lambda: &Rational) -> Result<Vec<PlanarRecord>, EggBeaterError> {
    if mu == nu {
        return Err(EggBeaterError::EqualMuNu);
    }
    let params = EggBeaterParams::unchecked(1, q(4), lambda.clone(), vec![mu.clone()], vec![nu.clone()])?;
    let (a, b) = (q(1) - mu, q(1) - nu);
    let mut out = Vec::with_capacity(4);
    for signs in SignVector::all(1) {
        let (e1, e2) = (signs.eps_q(1), signs.eps_q(2));
        let point = Point::new(&e1 * &a, &e2 * &b);
        let image = phi_block(&point, mu, nu, lambda)?;
        if image != point {
            return Err(EggBeaterError::InvalidRecord(signs.to_string()));
        }
        let action = lambda * (&e1 * &a * &a - &e2 * &b * &b) / q(2);
        let record = solve_signed(&signs, &params)?;
        if record.z.as_ref() != Some(&point) || record.action_exact.as_ref() != Some(&action) {
            return Err(EggBeaterError::InvalidRecord(signs.to_string()));
        }
        let det = nondegeneracy(&signs, &params);
        if det.is_negative() == det.is_positive() {
            return Err(EggBeaterError::Singular);
        }
        out.push(PlanarRecord { signs, point, action, det });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational;

    #[test]
    fn reference_instance() {
        let recs = solve_2d(&rational(1, 2), &rational(1, 4), &q(160)).unwrap();
        assert_eq!(recs.len(), 4);
        assert_eq!(recs[0].point, Point::new(rational(1, 2), rational(3, 4)));
        assert_eq!(recs[0].action, rational(-5 * 160, 32));
        let mut acts: Vec<_> = recs.iter().map(|r| r.action.clone()).collect();
        acts.sort();
        acts.dedup();
        assert_eq!(acts.len(), 4);
        // det(A − id) = −ε_1ε_2λ².
        assert_eq!(recs[1].det, q(160 * 160));
    }

    #[test]
    fn equal_parameters_rejected() {
        assert_eq!(solve_2d(&rational(1, 3), &rational(1, 3), &q(16)), Err(EggBeaterError::EqualMuNu));
    }
}
