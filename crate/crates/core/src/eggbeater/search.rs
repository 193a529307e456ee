use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::solve::{all_valid, enumerate};
use super::{EggBeaterError, EggBeaterParams, SignVector};
use crate::field::Rational;
use crate::par::Execution;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `(1/2) Σ_j (ε_{2j+1}(1 − μ_{j+1})² − ε_{2j+4}(1 − ν_{j+1})²)`, the
/// coefficient of `λ` in the leading action.
pub fn coefficient_sum(signs: &SignVector, mu: &[Rational], nu: &[Rational]) -> Rational {
    let mut sum = Rational::zero();
    for (j, (m, n)) in mu.iter().zip(nu).enumerate() {
        let jj = j as i64;
        let (a, b) = (q(1) - m, q(1) - n);
        sum += signs.eps_q(2 * jj + 1) * &a * &a - signs.eps_q(2 * jj + 4) * &b * &b;
    }
    sum / q(2)
}

/// [`coefficient_sum`] for every sign vector, in [`SignVector::all`] order.
pub fn coefficient_sums(mu: &[Rational], nu: &[Rational]) -> Vec<Rational> {
    SignVector::all(mu.len())
        .iter()
        .map(|s| coefficient_sum(s, mu, nu))
        .collect()
}

/// Smallest difference between distinct coefficient sums: the constant `c`
/// in `|A(z) − A(z')| ≥ cλ + O(1)`. Zero when two sums coincide.
pub fn min_coefficient_gap(mu: &[Rational], nu: &[Rational]) -> Rational {
    let mut sums = coefficient_sums(mu, nu);
    sums.sort();
    sums.windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .unwrap_or_else(Rational::zero)
}

/// Reduced fractions in `(0, 1)` with denominator at most `bound`, ordered by
/// denominator then numerator.
fn candidates(bound: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for d in 2..=bound {
        for n in 1..d {
            if n.gcd(&d) == 1 {
                out.push(Rational::new(n.into(), d.into()));
            }
        }
    }
    out
}

/// First `(μ, ν)` in lexicographic order over `(μ_1, …, μ_p, ν_1, …, ν_p)`
/// whose `2^{2p}` coefficient sums are pairwise distinct and whose pairs
/// `(μ_j, ν_j)` are pairwise distinct.
///
/// Since the signs in front of the `2p` squares are independent, the sums
/// are distinct iff every partial choice doubles the set of partial sums,
/// which prunes the search early. `L` does not enter the condition; it is
/// checked only so that the result is usable with [`EggBeaterParams::new`].
pub fn param_search(p: u32, l: &Rational, bound: i64) -> Result<(Vec<Rational>, Vec<Rational>), EggBeaterError> {
    if p == 0 {
        return Err(EggBeaterError::Params("p must be positive".into()));
    }
    if l < &q(4) {
        return Err(EggBeaterError::Params("L must be at least 4".into()));
    }
    let cands = candidates(bound);
    let mut chosen = Vec::with_capacity(2 * p as usize);
    let start = BTreeSet::from([Rational::zero()]);
    if dfs(&cands, 2 * p as usize, &mut chosen, &start) {
        let (mu, nu) = chosen.split_at(p as usize);
        return Ok((mu.to_vec(), nu.to_vec()));
    }
    Err(EggBeaterError::SearchExhausted(bound))
}

fn dfs(cands: &[Rational], total: usize, chosen: &mut Vec<Rational>, sums: &BTreeSet<Rational>) -> bool {
    if chosen.len() == total {
        let p = total / 2;
        let (mu, nu) = chosen.split_at(p);
        return (0..p).all(|i| (i + 1..p).all(|j| mu[i] != mu[j] || nu[i] != nu[j]));
    }
    for c in cands {
        let sq = (q(1) - c) * (q(1) - c);
        let next: BTreeSet<Rational> = sums.iter().flat_map(|s| [s + &sq, s - &sq]).collect();
        if next.len() != 2 * sums.len() {
            continue;
        }
        chosen.push(c.clone());
        if dfs(cands, total, chosen, &next) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Generator of the rational lattice of `λ` making every `μ_jλ/L`, `ν_jλ/L`
/// an integer: `lcm(denominators) / gcd(numerators)` of the reduced
/// fractions `μ_j/L`, `ν_j/L`.
pub fn lattice_step(l: &Rational, mu: &[Rational], nu: &[Rational]) -> Rational {
    let mut den = num_bigint::BigInt::one();
    let mut num = num_bigint::BigInt::zero();
    for r in mu.iter().chain(nu) {
        let f = r / l;
        den = den.lcm(f.denom());
        num = num.gcd(&f.numer().abs());
    }
    if num.is_zero() {
        return Rational::one();
    }
    Rational::new(den, num)
}

/// The smallest `count` positive lattice values of `λ`.
pub fn lambda_lattice(l: &Rational, mu: &[Rational], nu: &[Rational], count: usize) -> Vec<Rational> {
    let step = lattice_step(l, mu, nu);
    (1..=count as i64).map(|k| &step * q(k)).collect()
}

/// Smallest lattice `λ` (among the first `max_multiples`) at which all
/// `2^{2p}` sign vectors give valid records. Below it nothing is asserted.
pub fn threshold_lambda(
    p: u32,
    l: &Rational,
    mu: &[Rational],
    nu: &[Rational],
    max_multiples: usize,
    exec: Execution,
) -> Result<Option<Rational>, EggBeaterError> {
    for lambda in lambda_lattice(l, mu, nu, max_multiples) {
        let params = EggBeaterParams::new(p, l.clone(), lambda.clone(), mu.to_vec(), nu.to_vec())?;
        if all_valid(&enumerate(&params, exec)?) {
            return Ok(Some(lambda));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{format_rational, rational};

    #[test]
    fn candidate_order() {
        let c = candidates(5);
        let s: Vec<String> = c.iter().map(format_rational).collect();
        assert_eq!(s[..5], ["1/2", "1/3", "2/3", "1/4", "3/4"]);
    }

    #[test]
    fn planar_search_separates_mu_and_nu() {
        let (mu, nu) = param_search(1, &q(4), 10).unwrap();
        assert_eq!((mu[0].clone(), nu[0].clone()), (rational(1, 2), rational(1, 3)));
    }

    #[test]
    fn symmetric_choice_collides() {
        let mu = [rational(1, 2), rational(1, 4)];
        let nu = [rational(1, 4), rational(1, 2)];
        assert!(min_coefficient_gap(&mu, &nu).is_zero());
    }

    #[test]
    fn lattices() {
        let half = [rational(1, 2), rational(1, 2)];
        assert_eq!(lattice_step(&q(4), &half, &half), q(8));
        assert!(lambda_lattice(&q(4), &half, &half, 0).is_empty());
        let mu = [rational(1, 2), rational(1, 5)];
        let nu = [rational(1, 3), rational(1, 7)];
        assert_eq!(lambda_lattice(&q(4), &mu, &nu, 2), vec![q(840), q(1680)]);
        // μ/L = 3/8 and 3/4: λ = 8/3 already gives integers.
        assert_eq!(lattice_step(&q(4), &[rational(3, 2)], &[q(3)]), rational(8, 3));
    }

    #[test]
    fn exhaustion() {
        assert_eq!(param_search(3, &q(4), 2), Err(EggBeaterError::SearchExhausted(2)));
    }
}
