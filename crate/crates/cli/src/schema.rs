//! JSON input files.
//!
//! Rationals are strings (`"3/2"`); matrices are lists of rows.

use anyhow::{bail, Context, Result};
use egb_core::equivariant::{cyclic_tuple_module, EquivariantComplex, ZpPersistenceModule};
use egb_core::field::{CyclotomicNumber, Extended, Field, Matrix, Rational};
use egb_core::persistence::{FilteredComplex, FinitePersistenceModule, Generator};
use serde::Deserialize;

use crate::config::rat;

#[derive(Debug, Deserialize)]
pub struct GeneratorJson {
    pub action: String,
    #[serde(default)]
    pub degree: i64,
}

/// Filtered complex over `Q`, optionally with a chain map `T` of order `k`.
#[derive(Debug, Deserialize)]
pub struct ComplexFile {
    pub generators: Vec<GeneratorJson>,
    pub boundary: Vec<Vec<String>>,
    #[serde(default)]
    pub chain_map: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub k: Option<u32>,
}

fn matrix<F: Field>(rows: usize, cols: usize, data: &[Vec<String>], unit: &F, embed: impl Fn(&Rational) -> F) -> Result<Matrix<F>> {
    if data.len() != rows {
        bail!("expected {rows} rows, got {}", data.len());
    }
    let mut parsed = Vec::with_capacity(rows);
    for (i, row) in data.iter().enumerate() {
        if row.len() != cols {
            bail!("row {i} has {} entries, expected {cols}", row.len());
        }
        parsed.push(row.iter().map(|s| rat(s).map(|q| embed(&q))).collect::<Result<Vec<F>>>()?);
    }
    Ok(Matrix::from_fn(rows, cols, unit, |i, j| parsed[i][j].clone()))
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}

impl ComplexFile {
    pub fn complex(&self) -> Result<FilteredComplex<Rational>> {
        let gens = self
            .generators
            .iter()
            .map(|g| Ok(Generator { action: rat(&g.action)?, degree: g.degree }))
            .collect::<Result<Vec<_>>>()?;
        let n = gens.len();
        let boundary = matrix(n, n, &self.boundary, &one(), Rational::clone).context("boundary")?;
        Ok(FilteredComplex::new(gens, boundary)?)
    }

    pub fn equivariant(&self) -> Result<EquivariantComplex<Rational>> {
        let (Some(t), Some(k)) = (&self.chain_map, self.k) else {
            bail!("chain_map and k are required");
        };
        let c = self.complex()?;
        let n = c.len();
        let t = matrix(n, n, t, &one(), Rational::clone).context("chain_map")?;
        Ok(EquivariantComplex::new(c, t, k)?)
    }
}

#[derive(Debug, Deserialize)]
pub struct TupleJson {
    pub birth: String,
    #[serde(default = "inf")]
    pub death: String,
}

fn inf() -> String {
    "inf".into()
}

/// A `Z_p`-module, either explicit (rational matrices, embedded in
/// `Q(ζ_p)`) or as a direct sum of cyclic tuples.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ModuleFile {
    Tuples {
        p: u32,
        tuples: Vec<TupleJson>,
    },
    Explicit {
        p: u32,
        spectrum: Vec<String>,
        dims: Vec<usize>,
        transitions: Vec<Vec<Vec<String>>>,
        action: Vec<Vec<Vec<String>>>,
    },
}

impl ModuleFile {
    pub fn module(&self) -> Result<ZpPersistenceModule<CyclotomicNumber>> {
        match self {
            ModuleFile::Tuples { p, tuples } => {
                let unit = CyclotomicNumber::one(*p)?;
                let mut acc: Option<ZpPersistenceModule<CyclotomicNumber>> = None;
                for t in tuples {
                    let death = Extended::parse(&t.death)?;
                    let m = cyclic_tuple_module(&rat(&t.birth)?, *p, None, &death, &unit)?;
                    acc = Some(match acc {
                        Some(a) => a.direct_sum(&m)?,
                        None => m,
                    });
                }
                acc.context("no tuples")
            }
            ModuleFile::Explicit { p, spectrum, dims, transitions, action } => {
                let unit = CyclotomicNumber::one(*p)?;
                let embed = |q: &Rational| CyclotomicNumber::from_rational(*p, q).expect("prime checked");
                let spectrum = spectrum.iter().map(|s| rat(s)).collect::<Result<Vec<_>>>()?;
                if dims.len() != spectrum.len() + 1 || transitions.len() != spectrum.len() || action.len() != dims.len() {
                    bail!("need |dims| = |action| = |spectrum| + 1 and |transitions| = |spectrum|");
                }
                let ts = transitions
                    .iter()
                    .enumerate()
                    .map(|(i, t)| matrix(dims[i + 1], dims[i], t, &unit, embed).with_context(|| format!("transition {i}")))
                    .collect::<Result<Vec<_>>>()?;
                let acts = action
                    .iter()
                    .enumerate()
                    .map(|(i, a)| matrix(dims[i], dims[i], a, &unit, embed).with_context(|| format!("action {i}")))
                    .collect::<Result<Vec<_>>>()?;
                let base = FinitePersistenceModule::new(spectrum, dims.clone(), ts, &unit)?;
                Ok(ZpPersistenceModule::new(base, acts, *p, None)?)
            }
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
