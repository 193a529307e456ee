use num_traits::Zero;
use serde::Serialize;

use super::module::{check_primitive, eigenspace_module, quotient_fix_module, ZpPersistenceModule};
use super::EquivariantError;
use crate::field::{Extended, Field, Rational, RootsOfUnity};
use crate::par::Execution;
use crate::persistence::{Barcode, Interval};

fn two() -> Rational {
    Rational::from_integer(2.into())
}

fn four() -> Rational {
    Rational::from_integer(4.into())
}

/// Candidate witness intervals `(x, y]`: `x` a birth, `y` a death or `+∞`.
///
/// Every interval has the same multiplicity as one of these (widen it to the
/// latest birth and earliest death among the bars containing it), so they
/// suffice for both the spread and the divisibility check.
pub fn candidate_intervals(b: &Barcode) -> Vec<Interval> {
    let mut births: Vec<&Rational> = b.entries().iter().map(|e| &e.bar.left).collect();
    births.sort();
    births.dedup();
    let mut deaths: Vec<&Extended> = b.entries().iter().map(|e| &e.bar.right).collect();
    deaths.sort();
    deaths.dedup();
    let mut out = Vec::new();
    for x in &births {
        for y in &deaths {
            if Extended::Finite((*x).clone()) < **y {
                out.push(Interval {
                    left: (*x).clone(),
                    right: (*y).clone(),
                });
            }
        }
    }
    out
}

/// Largest `c` (as a supremum) for which `i` witnesses the spread: bars not
/// containing `i` must also miss `i^{2c}`, and `i` must be longer than `4c`.
pub fn witness_value(b: &Barcode, i: &Interval) -> Extended {
    let mut best = match i.length() {
        Extended::Finite(l) => Extended::Finite(l / four()),
        Extended::Infinity => Extended::Infinity,
    };
    for e in b.entries() {
        if e.bar.contains(i) {
            continue;
        }
        // E = (b, d] contains (x + 2c, y - 2c] iff b <= x + 2c and d >= y - 2c.
        let from_birth = Extended::Finite((&e.bar.left - &i.left) / two());
        let from_death = match (&i.right, &e.bar.right) {
            (Extended::Infinity, Extended::Infinity) => Extended::zero(),
            (Extended::Infinity, Extended::Finite(_)) => Extended::Infinity,
            (Extended::Finite(_), Extended::Infinity) => Extended::zero(),
            (Extended::Finite(y), Extended::Finite(d)) => Extended::Finite((y - d) / two()),
        };
        best = best.min(from_birth.max(from_death));
    }
    best.max(Extended::zero())
}

/// Multiplicity-sensitive spread of a single barcode: the supremum of `c ≥ 0`
/// admitting an interval `I` of length `> 4c` with
/// `m(B, I) = m(B, I^{2c}) ≢ 0 (mod p)`. Zero when no such `I` exists.
pub fn mu_from_barcode(b: &Barcode, p: u32) -> Extended {
    candidate_intervals(b)
        .iter()
        .filter(|i| !b.multiplicity(i).is_multiple_of(p as u64))
        .map(|i| witness_value(b, i))
        .fold(Extended::zero(), Extended::max)
}

/// `μ_{p,ζ}`: the spread of the barcode of `L_ζ`.
pub fn mu_p_zeta<F: Field>(v: &ZpPersistenceModule<F>, zeta: &F) -> Result<Extended, EquivariantError> {
    check_primitive(zeta, v.p())?;
    let l = eigenspace_module(v, zeta)?;
    Ok(mu_from_barcode(&l.barcode(), v.p()))
}

/// Barcodes of `L_ζ` for `ζ = ζ_p, ζ_p², …, ζ_p^{p-1}`.
pub fn eigen_barcodes<F: RootsOfUnity>(
    v: &ZpPersistenceModule<F>,
    exec: Execution,
) -> Result<Vec<Barcode>, EquivariantError> {
    let roots = v
        .unit()
        .primitive_roots(v.p())
        .ok_or(EquivariantError::NoRoots(v.p()))?;
    exec.try_map(&roots, |z| Ok(eigenspace_module(v, z)?.barcode()))
}

/// `μ_p = max_ζ μ_{p,ζ}` over primitive `p`-th roots of unity.
pub fn mu_p<F: RootsOfUnity>(v: &ZpPersistenceModule<F>, exec: Execution) -> Result<Extended, EquivariantError> {
    Ok(eigen_barcodes(v, exec)?
        .iter()
        .map(|b| mu_from_barcode(b, v.p()))
        .fold(Extended::zero(), Extended::max))
}

/// Certified lower bound for the equivariant interleaving distance from `v`
/// to the full `p`-th powers: `κ(V) ≥ μ_p(V)`.
pub fn kappa_lower_bound<F: RootsOfUnity>(v: &ZpPersistenceModule<F>, exec: Execution) -> Result<Extended, EquivariantError> {
    mu_p(v, exec)
}

/// Modified spread: supremum of `d` with `θ_{s,s+d}(A_s − id) ≠ 0`, scanned
/// over pairs of constancy regions.
pub fn w_hat<F: Field>(v: &ZpPersistenceModule<F>) -> Extended {
    let base = v.base();
    let s = base.spectrum();
    let m = s.len();
    let mut best = Extended::zero();
    for i in 1..=m {
        let a_minus = v.action()[i].sub_scalar_identity(v.unit()).expect("square");
        if a_minus.is_zero() {
            continue;
        }
        // The latest region j where the composite is still nonzero.
        for j in (i..=m).rev() {
            let map = base.composite(i, j).mul(&a_minus).expect("shapes agree");
            if !map.is_zero() {
                let d = if j == m {
                    Extended::Infinity
                } else {
                    Extended::Finite(&s[j] - &s[i - 1])
                };
                best = best.max(d);
                break;
            }
        }
    }
    best
}

/// `β(L)` for `L = V/Fix(A)`, returned as `+∞` when `L` has an infinite bar.
pub fn beta_of_quotient<F: Field>(v: &ZpPersistenceModule<F>) -> Result<Extended, EquivariantError> {
    let b = quotient_fix_module(v)?.barcode();
    Ok(if b.infinite_count() > 0 {
        Extended::Infinity
    } else {
        Extended::Finite(b.longest_finite_bar())
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "UPPERCASE")]
pub enum FullPowerVerdict {
    Pass,
    /// A witness interval whose `L_ζ` multiplicity is not divisible by `p`.
    Fail { interval: Interval, multiplicity: u64 },
}

impl FullPowerVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, FullPowerVerdict::Pass)
    }
}

/// Divisibility test on a barcode: every multiplicity is `≡ 0 (mod p)`.
pub fn divisibility_verdict(b: &Barcode, p: u32) -> FullPowerVerdict {
    for i in candidate_intervals(b) {
        let m = b.multiplicity(&i);
        if !m.is_multiple_of(p as u64) {
            return FullPowerVerdict::Fail {
                interval: i,
                multiplicity: m,
            };
        }
    }
    FullPowerVerdict::Pass
}

/// PASS iff every multiplicity of `B(L_ζ)` is divisible by `p`; a FAIL
/// certifies `v` is not a full `p`-th power.
pub fn full_power_check<F: Field>(v: &ZpPersistenceModule<F>, zeta: &F) -> Result<FullPowerVerdict, EquivariantError> {
    check_primitive(zeta, v.p())?;
    let b = eigenspace_module(v, zeta)?.barcode();
    Ok(divisibility_verdict(&b, v.p()))
}

/// Moves every spectrum point right by at most `delta`, keeping the order.
///
/// The result is equivariantly `delta`-interleaved with the input by shift
/// morphisms. `fractions[i] ∈ [0, 1]` selects the shift of point `i`.
pub fn shift_spectrum(spectrum: &[Rational], delta: &Rational, fractions: &[Rational]) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(spectrum.len());
    for (i, s) in spectrum.iter().enumerate() {
        let frac = match fractions.len() {
            0 => Rational::zero(),
            n => fractions[i % n].clone(),
        };
        let mut t = s + delta * frac;
        if let Some(prev) = out.last() {
            if &t <= prev {
                t = (prev + s + delta) / two();
            }
        }
        out.push(t);
    }
    out
}

/// Shifts the spectrum of `v` by at most `delta` and checks
/// `|μ_p(V) − μ_p(W)| ≤ delta`.
pub fn perturb_and_check_lipschitz<F: RootsOfUnity>(
    v: &ZpPersistenceModule<F>,
    delta: &Rational,
    fractions: &[Rational],
) -> Result<bool, EquivariantError> {
    let shifted = shift_spectrum(v.base().spectrum(), delta, fractions);
    let w = v.with_spectrum(shifted)?;
    let (a, b) = (mu_p(v, Execution::Sequential)?, mu_p(&w, Execution::Sequential)?);
    Ok(match (a, b) {
        (Extended::Finite(x), Extended::Finite(y)) => {
            let diff = if x > y { x - y } else { y - x };
            &diff <= delta
        }
        (Extended::Infinity, Extended::Infinity) => true,
        _ => false,
    })
}

/// Per-module JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct EquivariantReport {
    pub zeta_index: u32,
    pub barcode: serde_json::Value,
    pub mu_p_zeta: Extended,
    pub mu_p: Extended,
    pub w_hat: Extended,
    pub verdict: FullPowerVerdict,
}

/// Report for `ζ = ζ_p^{zeta_index}`.
pub fn report<F: RootsOfUnity>(
    v: &ZpPersistenceModule<F>,
    zeta_index: u32,
    exec: Execution,
) -> Result<EquivariantReport, EquivariantError> {
    let p = v.p();
    if zeta_index == 0 || zeta_index >= p {
        return Err(EquivariantError::NotPrimitive(p));
    }
    let barcodes = eigen_barcodes(v, exec)?;
    let b = &barcodes[(zeta_index - 1) as usize];
    let mu = barcodes
        .iter()
        .map(|x| mu_from_barcode(x, p))
        .fold(Extended::zero(), Extended::max);
    Ok(EquivariantReport {
        zeta_index,
        barcode: serde_json::from_str(&b.to_json()).expect("valid JSON"),
        mu_p_zeta: mu_from_barcode(b, p),
        mu_p: mu,
        w_hat: w_hat(v),
        verdict: divisibility_verdict(b, p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::module::{construct_full_power, cyclic_permutation, cyclic_tuple_module};
    use crate::field::{rational, CyclotomicNumber, Matrix};
    use crate::persistence::FinitePersistenceModule;

    fn q(n: i64) -> Rational {
        rational(n, 1)
    }

    fn bars(v: &[(i64, i64, u64)]) -> Barcode {
        Barcode::from_bars(v.iter().map(|&(a, b, m)| (Interval::finite(q(a), q(b)).unwrap(), m)))
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_from_barcode(&bars(&[(0, 10, 1)]), 2), Extended::Finite(rational(5, 2)));
        assert_eq!(mu_from_barcode(&bars(&[(0, 10, 2)]), 2), Extended::zero());
        assert_eq!(mu_from_barcode(&bars(&[(0, 10, 3)]), 3), Extended::zero());
        assert_eq!(mu_from_barcode(&Barcode::new(), 5), Extended::zero());
        // Nested bar interferes: I = (0,10] needs (2c, 10-2c] to avoid (2,8].
        assert_eq!(
            mu_from_barcode(&bars(&[(0, 10, 1), (2, 8, 1)]), 2),
            Extended::Finite(q(1))
        );
        let ray = Barcode::from_bars([(Interval::new(q(0), Extended::Infinity).unwrap(), 1)]);
        assert_eq!(mu_from_barcode(&ray, 2), Extended::Infinity);
    }

    #[test]
    fn single_tuple_spread() {
        let v = cyclic_tuple_module(&q(0), 2, None, &Extended::Finite(q(10)), &q(1)).unwrap();
        assert_eq!(mu_p_zeta(&v, &q(-1)).unwrap(), Extended::Finite(rational(5, 2)));
        assert_eq!(mu_p(&v, Execution::Sequential).unwrap(), Extended::Finite(rational(5, 2)));
        assert_eq!(kappa_lower_bound(&v, Execution::Parallel).unwrap(), Extended::Finite(rational(5, 2)));
        assert!(!full_power_check(&v, &q(-1)).unwrap().is_pass());
        assert!(matches!(mu_p_zeta(&v, &q(1)), Err(EquivariantError::NotPrimitive(2))));
    }

    #[test]
    fn w_hat_examples() {
        let v = cyclic_tuple_module(&q(0), 2, None, &Extended::Finite(q(7)), &q(1)).unwrap();
        assert_eq!(w_hat(&v), Extended::Finite(q(7)));
        assert_eq!(beta_of_quotient(&v).unwrap(), Extended::Finite(q(7)));
        let base = FinitePersistenceModule::from_barcode(&bars(&[(0, 3, 2)]), &q(1));
        let id: Vec<_> = base.dims().iter().map(|&d| Matrix::identity(d, &q(1))).collect();
        let triv = ZpPersistenceModule::new(base, id, 2, None).unwrap();
        assert_eq!(w_hat(&triv), Extended::zero());
    }

    #[test]
    fn full_power_of_p_squared_cycle() {
        for p in [2u32, 3] {
            let unit = CyclotomicNumber::one(p).unwrap();
            let n = (p * p) as usize;
            let seed = FinitePersistenceModule::new(
                vec![q(0), q(6)],
                vec![0, n, 0],
                vec![Matrix::zeros(n, 0, &unit), Matrix::zeros(0, n, &unit)],
                &unit,
            )
            .unwrap();
            let b = vec![
                Matrix::zeros(0, 0, &unit),
                cyclic_permutation(n, &unit),
                Matrix::zeros(0, 0, &unit),
            ];
            let v = construct_full_power(&seed, &b, p, None).unwrap();
            let zeta = CyclotomicNumber::zeta(p).unwrap();
            assert!(full_power_check(&v, &zeta).unwrap().is_pass());
            assert_eq!(mu_p(&v, Execution::Sequential).unwrap(), Extended::zero());
        }
    }

    #[test]
    fn zero_module_passes() {
        let base = FinitePersistenceModule::zero(&q(1));
        let v = ZpPersistenceModule::new(base, vec![Matrix::zeros(0, 0, &q(1))], 2, None).unwrap();
        assert!(full_power_check(&v, &q(-1)).unwrap().is_pass());
        assert_eq!(w_hat(&v), Extended::zero());
    }

    #[test]
    fn shift_keeps_order() {
        let s = vec![q(0), rational(1, 10), q(5)];
        let t = shift_spectrum(&s, &q(1), &[q(1), q(0), rational(1, 2)]);
        assert!(t.windows(2).all(|w| w[0] < w[1]));
        for (a, b) in s.iter().zip(&t) {
            assert!(a <= b && b <= &(a + q(1)));
        }
    }

    #[test]
    fn lipschitz_on_single_bar() {
        let v = cyclic_tuple_module(&q(0), 2, None, &Extended::Finite(q(10)), &q(1)).unwrap();
        assert!(perturb_and_check_lipschitz(&v, &q(0), &[q(1)]).unwrap());
        assert!(perturb_and_check_lipschitz(&v, &q(1), &[q(1)]).unwrap());
        let w = v.with_spectrum(shift_spectrum(v.base().spectrum(), &q(1), &[q(1)])).unwrap();
        assert_eq!(mu_p(&w, Execution::Sequential).unwrap(), Extended::Finite(rational(5, 2)));
    }
}
