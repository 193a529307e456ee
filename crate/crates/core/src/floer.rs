//! Model `Z_p`-persistence module built from egg-beater fixed-point tuples,
//! and the Hofer-distance lower bounds derived from it.
//!
//! Two values of the spread are reported side by side. `mu_p_model` is exact
//! for the zero-differential model (every tuple an infinite bar), which the
//! true Floer complex need not be. `mu_p_paper_bound` comes from a window of
//! width about one action gap above a tuple, where any differential leaves
//! multiplicity one, so it holds regardless of the differential.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eggbeater::FixedPointRecord;
use crate::equivariant::{cyclic_tuple_module, kunneth_stabilize, mu_p, EquivariantError, GradedBarcodeFamily, ZpPersistenceModule};
use crate::field::{format_rational, rational, CyclotomicNumber, Extended, Rational};
use crate::par::Execution;
use crate::persistence::{Barcode, Interval};

#[derive(Debug, Error)]
pub enum FloerError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Equivariant(#[from] EquivariantError),
}

type Result<T> = std::result::Result<T, FloerError>;

/// One `p`-tuple of fixed points: its action and the degree it is modelled in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tuple {
    #[serde(with = "crate::field::as_string")]
    pub action: Rational,
    #[serde(default)]
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelInput {
    pub tuples: Vec<Tuple>,
    pub p: u32,
}

impl ModelInput {
    pub fn new(tuples: Vec<(Rational, i64)>, p: u32) -> Self {
        Self {
            tuples: tuples.into_iter().map(|(action, degree)| Tuple { action, degree }).collect(),
            p,
        }
    }

    /// Tuples from the valid records of one enumeration, all in `degree`.
    pub fn from_records(records: &[FixedPointRecord], p: u32, degree: i64) -> Self {
        Self::new(
            records
                .iter()
                .filter_map(|r| r.action_exact.clone().map(|a| (a, degree)))
                .collect(),
            p,
        )
    }

    /// Product with a factor of Betti numbers `betti`: `betti[i]` copies of
    /// every tuple shifted up by `i` degrees.
    pub fn stabilize(&self, betti: &[u64]) -> Result<Self> {
        if betti.first() != Some(&1) {
            return Err(FloerError::Invalid("betti[0] must be 1 (connected factor)".into()));
        }
        let mut tuples = Vec::new();
        for (i, &b) in betti.iter().enumerate() {
            for t in &self.tuples {
                for _ in 0..b {
                    tuples.push(Tuple {
                        action: t.action.clone(),
                        degree: t.degree + i as i64,
                    });
                }
            }
        }
        Ok(Self { tuples, p: self.p })
    }

    fn by_degree(&self) -> BTreeMap<i64, Vec<Rational>> {
        let mut out: BTreeMap<i64, Vec<Rational>> = BTreeMap::new();
        for t in &self.tuples {
            out.entry(t.degree).or_default().push(t.action.clone());
        }
        for v in out.values_mut() {
            v.sort();
        }
        out
    }

    /// `L_ζ` barcodes of the zero-differential model, degree by degree: one
    /// infinite bar per tuple.
    pub fn family(&self) -> GradedBarcodeFamily {
        let mut fam = GradedBarcodeFamily::new();
        for (r, actions) in self.by_degree() {
            let bars = actions
                .into_iter()
                .map(|a| (Interval { left: a, right: Extended::Infinity }, 1));
            fam.insert(r, Barcode::from_bars(bars));
        }
        fam
    }
}

/// Smallest difference between distinct actions; `None` with fewer than two.
pub fn action_gap(actions: &[Rational]) -> Option<Rational> {
    let set: BTreeSet<&Rational> = actions.iter().collect();
    let v: Vec<&Rational> = set.into_iter().collect();
    v.windows(2).map(|w| w[1] - w[0]).min()
}

/// Direct sum of cyclic tuples, all born at their action and never dying,
/// restricted to tuples in `degree` (all tuples when `None`).
pub fn build_model(input: &ModelInput, degree: Option<i64>) -> Result<ZpPersistenceModule<CyclotomicNumber>> {
    let unit = CyclotomicNumber::one(input.p).map_err(EquivariantError::from)?;
    let mut acc: Option<ZpPersistenceModule<CyclotomicNumber>> = None;
    for t in input.tuples.iter().filter(|t| degree.is_none_or(|d| d == t.degree)) {
        let m = cyclic_tuple_module(&t.action, input.p, degree, &Extended::Infinity, &unit)?;
        acc = Some(match acc {
            Some(a) => a.direct_sum(&m)?,
            None => m,
        });
    }
    acc.ok_or_else(|| FloerError::Invalid("no tuples".into()))
}

/// Window bound with its witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PaperBound {
    #[serde(with = "crate::field::as_string")]
    pub value: Rational,
    pub witness: Option<Interval>,
    pub multiplicity: u64,
    pub note: Option<String>,
}

impl PaperBound {
    fn zero(note: impl Into<String>) -> Self {
        Self {
            value: Rational::zero(),
            witness: None,
            multiplicity: 0,
            note: Some(note.into()),
        }
    }
}

/// `(g − 2εg)/4` for the smallest gap `g` between distinct actions in one
/// degree, witnessed by `(A + εg/2, A + (1 − ε/2)g]` above the lowest action
/// `A`. That window meets no other tuple's action, so its multiplicity is the
/// number of tuples at `A`; the bound is `0` when this is divisible by `p`.
/// Maximized over degrees.
pub fn paper_mu_lower_bound(input: &ModelInput, eps_frac: &Rational) -> Result<PaperBound> {
    if !eps_frac.is_positive() || eps_frac >= &rational(1, 1) {
        return Err(FloerError::Invalid(format!(
            "epsilon fraction {} not in (0, 1)",
            format_rational(eps_frac)
        )));
    }
    let mut best: Option<PaperBound> = None;
    for (r, actions) in input.by_degree() {
        let bound = degree_bound(&actions, input.p, eps_frac, r);
        best = Some(match best {
            Some(b) if b.value >= bound.value && (b.note.is_none() || bound.note.is_some()) => b,
            _ => bound,
        });
    }
    Ok(best.unwrap_or_else(|| PaperBound::zero("no tuples")))
}

fn degree_bound(actions: &[Rational], p: u32, eps: &Rational, degree: i64) -> PaperBound {
    let Some(g) = action_gap(actions) else {
        return PaperBound::zero(format!("degree {degree}: fewer than two distinct actions"));
    };
    let low = &actions[0];
    let mult = actions.iter().take_while(|a| *a == low).count() as u64;
    if mult.is_multiple_of(p as u64) {
        return PaperBound {
            multiplicity: mult,
            ..PaperBound::zero(format!("degree {degree}: witness multiplicity {mult} divisible by {p}"))
        };
    }
    let two = rational(2, 1);
    let witness = Interval {
        left: low + eps * &g / &two,
        right: Extended::Finite(low + (rational(1, 1) - eps / &two) * &g),
    };
    let value = (&g - &two * eps * &g) / rational(4, 1);
    PaperBound {
        value: value.max(Rational::zero()),
        witness: Some(witness),
        multiplicity: mult,
        note: None,
    }
}

/// Where the input came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub fixture: String,
    #[serde(with = "opt_rational", default)]
    pub lambda: Option<Rational>,
    #[serde(default)]
    pub stabilize: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    /// Exact for the zero-differential model only.
    pub mu_p_model: Extended,
    #[serde(with = "crate::field::as_string")]
    pub mu_p_paper_bound: Rational,
    #[serde(with = "crate::field::as_string")]
    pub pow_bound: Rational,
    #[serde(with = "crate::field::as_string")]
    pub aut_bound: Rational,
    #[serde(with = "crate::field::as_string")]
    pub gap: Rational,
    #[serde(with = "opt_rational")]
    pub lambda: Option<Rational>,
    #[serde(with = "crate::field::as_string")]
    pub epsilon_frac: Rational,
    pub witness: Option<Interval>,
    pub notes: Vec<String>,
    pub provenance: Provenance,
}

pub const DEFAULT_EPSILON_FRAC: (i64, i64) = (1, 100);

/// Assembles all bounds. `k` is the Lipschitz constant of the
/// autonomous-vanishing invariant, so `aut_bound = gap / k`.
pub fn bounds_report(
    input: &ModelInput,
    k: &Rational,
    eps_frac: &Rational,
    provenance: Provenance,
    exec: Execution,
) -> Result<BoundsReport> {
    if !k.is_positive() {
        return Err(FloerError::Invalid("k must be positive".into()));
    }
    if input.tuples.is_empty() {
        return Err(FloerError::Invalid("no tuples".into()));
    }
    let input = match &provenance.stabilize {
        Some(betti) => input.stabilize(betti)?,
        None => input.clone(),
    };
    let paper = paper_mu_lower_bound(&input, eps_frac)?;
    let degrees: Vec<i64> = input.by_degree().into_keys().collect();
    let per_degree = exec.try_map(&degrees, |&r| -> Result<Extended> {
        Ok(mu_p(&build_model(&input, Some(r))?, Execution::Sequential)?)
    })?;
    let mu_model = per_degree.into_iter().fold(Extended::zero(), Extended::max);
    let actions: Vec<Rational> = input.tuples.iter().map(|t| t.action.clone()).collect();
    let gap = action_gap(&actions).unwrap_or_else(Rational::zero);
    let mut notes: Vec<String> = paper.note.iter().cloned().collect();
    notes.push("mu_p_model assumes a zero differential".into());
    Ok(BoundsReport {
        mu_p_model: mu_model,
        pow_bound: &paper.value / Rational::from_integer(input.p.into()),
        mu_p_paper_bound: paper.value,
        aut_bound: &gap / k,
        gap,
        lambda: provenance.lambda.clone(),
        epsilon_frac: eps_frac.clone(),
        witness: paper.witness,
        notes,
        provenance,
    })
}

/// Applies [`kunneth_stabilize`] to the model family; provided so callers can
/// compare with [`ModelInput::stabilize`].
pub fn stabilized_family(input: &ModelInput, betti: &[u64]) -> Result<GradedBarcodeFamily> {
    Ok(kunneth_stabilize(&input.family(), betti)?)
}

mod opt_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::field::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&format_rational(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}
