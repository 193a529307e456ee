use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::map::{block_matrix, block_vector, h0, phi_block, trace, Point};
use super::{EggBeaterError, EggBeaterParams, SignVector};
use crate::field::{Matrix, Rational};
use crate::par::Execution;

/// Why a candidate fixed point was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rejection {
    Singular,
    /// Block `block` (0-based) missed reduction window `window`.
    Window { block: usize, window: u8 },
    /// Realized sign of coordinate `index` (1-based, as in `ε`) differs.
    Sign { index: usize },
    /// The forward orbit does not close up.
    Residual,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::Singular => write!(f, "singular system"),
            Rejection::Window { block, window } => write!(f, "block {block} missed window {window}"),
            Rejection::Sign { index } => write!(f, "sign {index} mismatch"),
            Rejection::Residual => write!(f, "orbit does not close"),
        }
    }
}

/// Solution of the signed linear system plus its validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointRecord {
    pub signs: SignVector,
    /// `(x_0, y_0)`; absent only when the system is singular.
    pub z: Option<Point>,
    /// `(x_{2j}, y_{2j})` for `j = 0..p` as far as the forward map got.
    pub even: Vec<Point>,
    /// `(x_{2j+1}, y_{2j+1}) = (−y_{2j+2}, x_{2j})`.
    pub odd: Vec<Point>,
    #[serde(with = "crate::field::as_string")]
    pub det: Rational,
    #[serde(with = "opt_rational")]
    pub action_exact: Option<Rational>,
    #[serde(with = "crate::field::as_string")]
    pub action_leading: Rational,
    /// Smallest distance of a `u`-argument from the kinks `{−1, 0, 1}`.
    #[serde(with = "opt_rational")]
    pub kink_margin: Option<Rational>,
    pub rejection: Option<Rejection>,
}

impl FixedPointRecord {
    pub fn is_valid(&self) -> bool {
        self.rejection.is_none()
    }
}

mod opt_rational {
    use serde::Serializer;

    use crate::field::{format_rational, Rational};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&format_rational(q)),
            None => s.serialize_none(),
        }
    }
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `(Ā, v)` with `Ā = A_p ⋯ A_1` and
/// `v = Σ_{j=0}^{p−2} A_p ⋯ A_{j+2} b_{j+1} + b_p`, so that the fixed point
/// solves `(Ā − id) z = −v`.
pub fn composite_system(signs: &SignVector, params: &EggBeaterParams) -> (Matrix<Rational>, Vec<Rational>) {
    let p = params.p as usize;
    let lam = &params.lambda;
    let mats: Vec<Matrix<Rational>> = (0..p).map(|j| block_matrix(j, signs, lam)).collect();
    let vecs: Vec<Vec<Rational>> = (0..p)
        .map(|j| block_vector(j, signs, lam, &params.mu[j], &params.nu[j]))
        .collect();
    let one = q(1);
    let product = |from: usize| {
        mats[from..]
            .iter()
            .fold(Matrix::identity(2, &one), |acc, m| m.mul(&acc).expect("2x2"))
    };
    let abar = product(0);
    let mut v = vec![Rational::zero(), Rational::zero()];
    for j in 0..p {
        let term = product(j + 1).mul_vec(&vecs[j]).expect("2x2");
        v = vec![&v[0] + &term[0], &v[1] + &term[1]];
    }
    (abar, v)
}

/// `det(Ā_λ − id)`, cross-checked against `2 − tr Ā_λ` (valid since
/// `det Ā_λ = 1`).
pub fn nondegeneracy(signs: &SignVector, params: &EggBeaterParams) -> Rational {
    let (abar, _) = composite_system(signs, params);
    let det = abar.sub_scalar_identity(&q(1)).expect("square").det().expect("square");
    debug_assert_eq!(det, q(2) - trace(&abar));
    det
}

/// `(ε_{2j+1}(1 − μ_{j+1}), ε_{2j+2}(1 − ν_j))`, the large-`λ` limit of
/// `(x_{2j}, y_{2j})` (indices of `ν` mod `p`, so `ν_0 = ν_p`).
pub fn limit_point(signs: &SignVector, params: &EggBeaterParams, j: usize) -> Point {
    let j = j as i64;
    Point::new(
        signs.eps_q(2 * j + 1) * (q(1) - params.mu_at(j + 1)),
        signs.eps_q(2 * j + 2) * (q(1) - params.nu_at(j)),
    )
}

/// `max_j ‖(x_{2j}, y_{2j}) − limit_point(j)‖_∞` over a valid record.
pub fn limit_residual(record: &FixedPointRecord, params: &EggBeaterParams) -> Option<Rational> {
    if !record.is_valid() {
        return None;
    }
    record
        .even
        .iter()
        .enumerate()
        .map(|(j, z)| z.dist(&limit_point(&record.signs, params, j)))
        .max()
}

/// `(λ/2) Σ_j (ε_{2j+1}(1 − μ_{j+1})² − ε_{2j+4}(1 − ν_{j+1})²)`.
pub fn action_leading(signs: &SignVector, params: &EggBeaterParams) -> Rational {
    let mut sum = Rational::zero();
    for j in 0..params.p as usize {
        let jj = j as i64;
        let a = q(1) - &params.mu[j];
        let b = q(1) - &params.nu[j];
        sum += signs.eps_q(2 * jj + 1) * &a * &a - signs.eps_q(2 * jj + 4) * &b * &b;
    }
    &params.lambda * sum / q(2)
}

/// Segment-wise action relative to the reference loop
/// `γ(a)^{m_1} # γ(b)^{n_1} # ⋯`: each `V` segment through `x_{2j}`
/// contributes `λh0(x_{2j}) − λμ_{j+1}x_{2j}` and each `H` segment through
/// `x_{2j+1}` contributes `λh0(x_{2j+1}) − λν_{j+1}x_{2j+1}`.
pub fn action_exact(record: &FixedPointRecord, params: &EggBeaterParams) -> Result<Rational, EggBeaterError> {
    if !record.is_valid() {
        return Err(EggBeaterError::InvalidRecord(record.signs.to_string()));
    }
    segment_action(&record.even, &record.odd, params)
}

fn segment_action(even: &[Point], odd: &[Point], params: &EggBeaterParams) -> Result<Rational, EggBeaterError> {
    let lam = &params.lambda;
    let mut total = Rational::zero();
    for j in 0..params.p as usize {
        let x = &even[j].x;
        total += lam * h0(x)? - lam * &params.mu[j] * x;
        let xo = &odd[j].x;
        total += lam * h0(xo)? - lam * &params.nu[j] * xo;
    }
    Ok(total)
}

fn kink_distance(s: &Rational) -> Rational {
    let a = s.abs();
    let b = q(1) - &a;
    a.min(b)
}

/// Solves the affine system for `signs`, then validates by running the
/// exact forward map: every intermediate point in `(−1, 1)²`, every window
/// hit, the orbit closing with zero residual, and realized signs equal to
/// `signs`.
pub fn solve_signed(signs: &SignVector, params: &EggBeaterParams) -> Result<FixedPointRecord, EggBeaterError> {
    signs.check_len(params.p)?;
    let p = params.p as usize;
    let (abar, v) = composite_system(signs, params);
    let shifted = abar.sub_scalar_identity(&q(1)).expect("square");
    let det = shifted.det().expect("square");
    let leading = action_leading(signs, params);
    let mut record = FixedPointRecord {
        signs: signs.clone(),
        z: None,
        even: Vec::new(),
        odd: Vec::new(),
        det: det.clone(),
        action_exact: None,
        action_leading: leading,
        kink_margin: None,
        rejection: None,
    };
    if det.is_zero() {
        record.rejection = Some(Rejection::Singular);
        return Ok(record);
    }
    let rhs: Vec<Rational> = v.iter().map(|x| -x).collect();
    let z = shifted
        .solve_linear(&rhs)
        .expect("2x2")
        .ok_or(EggBeaterError::Singular)?;
    let z = Point::new(z[0].clone(), z[1].clone());
    record.z = Some(z.clone());
    let mut even = vec![z.clone()];
    let mut margin: Option<Rational> = None;
    let mut bump = |s: &Rational| {
        let d = kink_distance(s);
        margin = Some(match margin.take() {
            Some(m) => m.min(d),
            None => d,
        });
    };
    for j in 0..p {
        let cur = even[j].clone();
        if !cur.in_open_square() {
            record.even = even;
            record.rejection = Some(Rejection::Window { block: j, window: 0 });
            return Ok(record);
        }
        match phi_block(&cur, &params.mu[j], &params.nu[j], &params.lambda) {
            Ok(next) => {
                bump(&cur.x);
                bump(&next.y);
                even.push(next);
            }
            Err(EggBeaterError::WindowMissed(w, _)) => {
                record.even = even;
                record.rejection = Some(Rejection::Window { block: j, window: w });
                return Ok(record);
            }
            Err(e) => return Err(e),
        }
    }
    let closing = even.pop().expect("p >= 1");
    let odd: Vec<Point> = (0..p)
        .map(|j| {
            let next_y = if j + 1 < p { &even[j + 1].y } else { &closing.y };
            Point::new(-next_y, even[j].x.clone())
        })
        .collect();
    record.even = even;
    record.odd = odd;
    record.kink_margin = margin;
    if closing != z {
        record.rejection = Some(Rejection::Residual);
        return Ok(record);
    }
    for (j, pt) in record.even.iter().enumerate() {
        let jj = j as i64;
        if SignVector::sign_of(&pt.x) != signs.eps(2 * jj + 1) {
            record.rejection = Some(Rejection::Sign { index: 2 * j + 1 });
            return Ok(record);
        }
        if SignVector::sign_of(&pt.y) != signs.eps(2 * jj + 2) {
            record.rejection = Some(Rejection::Sign { index: 2 * j + 2 });
            return Ok(record);
        }
    }
    record.action_exact = Some(segment_action(&record.even, &record.odd, params)?);
    Ok(record)
}

/// [`solve_signed`] over all `2^{2p}` sign vectors, in [`SignVector::all`] order.
pub fn enumerate(params: &EggBeaterParams, exec: Execution) -> Result<Vec<FixedPointRecord>, EggBeaterError> {
    let signs = SignVector::all(params.p as usize);
    exec.try_map(&signs, |s| solve_signed(s, params))
}

pub fn all_valid(records: &[FixedPointRecord]) -> bool {
    records.iter().all(FixedPointRecord::is_valid)
}

/// Smallest `|A(z) − A(z')|` over pairs of distinct valid records; `None`
/// with fewer than two.
pub fn min_action_gap(records: &[FixedPointRecord]) -> Option<Rational> {
    let mut actions: Vec<&Rational> = records.iter().filter_map(|r| r.action_exact.as_ref()).collect();
    actions.sort();
    actions.windows(2).map(|w| w[1] - w[0]).min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eggbeater::map::parabolic_factors;
    use crate::field::rational;

    fn fixture(lambda: i64) -> EggBeaterParams {
        EggBeaterParams::new(
            2,
            q(4),
            q(lambda),
            vec![rational(1, 2), rational(1, 3)],
            vec![rational(2, 3), rational(1, 4)],
        )
        .unwrap()
    }

    #[test]
    fn matrices_have_unit_determinant_and_factor() {
        for s in SignVector::all(2) {
            for j in 0..2 {
                let a = block_matrix(j, &s, &q(7));
                assert_eq!(a.det().unwrap(), q(1));
                let (u, l) = parabolic_factors(j, &s, &q(7));
                assert_eq!(u.mul(&l).unwrap(), a);
            }
        }
    }

    #[test]
    fn inverse_on_vector() {
        let params = fixture(48);
        for s in SignVector::all(2) {
            for j in 0..2 {
                let a = block_matrix(j, &s, &params.lambda);
                let b = block_vector(j, &s, &params.lambda, &params.mu[j], &params.nu[j]);
                let got = a.inverse().unwrap().unwrap().mul_vec(&b).unwrap();
                let lam = &params.lambda;
                let e1 = s.eps_q(2 * j as i64 + 1);
                let (om, on) = (q(1) - &params.mu[j], q(1) - &params.nu[j]);
                assert_eq!(got, vec![&on * lam, &om * lam + e1 * &on * lam * lam]);
            }
        }
    }

    #[test]
    fn fixture_has_sixteen_valid_records() {
        let params = fixture(48);
        let recs = enumerate(&params, Execution::Parallel).unwrap();
        assert_eq!(recs.len(), 16);
        assert!(all_valid(&recs));
        for r in &recs {
            assert_eq!(r.det, q(2) - trace(&composite_system(&r.signs, &params).0));
            assert!(r.kink_margin.as_ref().unwrap() > &q(0));
            assert_eq!(action_exact(r, &params).unwrap(), r.action_exact.clone().unwrap());
        }
        assert_eq!(recs, enumerate(&params, Execution::Sequential).unwrap());
    }

    #[test]
    fn small_lambda_rejects() {
        let params = EggBeaterParams::unchecked(2, q(4), q(1), vec![rational(1, 2), rational(1, 3)], vec![rational(2, 3), rational(1, 4)]).unwrap();
        let recs = enumerate(&params, Execution::Sequential).unwrap();
        assert!(!all_valid(&recs));
        let bad = recs.iter().find(|r| !r.is_valid()).unwrap();
        assert!(action_exact(bad, &params).is_err());
    }

    #[test]
    fn wrong_length_signs() {
        let s: SignVector = "++".parse().unwrap();
        assert!(solve_signed(&s, &fixture(48)).is_err());
    }
}
