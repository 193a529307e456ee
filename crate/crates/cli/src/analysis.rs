use std::path::Path;

use anyhow::{bail, Context, Result};
use egb_core::eggbeater::{enumerate, lattice_step, param_search, threshold_lambda, EggBeaterParams};
use egb_core::equivariant::{report, spread_lower_bound_from_gaps, w_hat};
use egb_core::field::{format_rational, rational, Extended, Rational};
use egb_core::floer::{bounds_report, BoundsReport, ModelInput, Provenance};
use egb_core::par::Execution;
use egb_core::persistence::{bottleneck_with, Barcode};
use serde_json::json;

use crate::config::{rat_list, u64_list, RunConfig};
use crate::schema::{read_json, ComplexFile, ModuleFile};
use crate::{svg, write_file, BarcodeCmd, BoundsArgs, Format, Output};

fn read_barcode(path: &Path) -> Result<Barcode> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Barcode::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn pretty(v: &serde_json::Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn barcode(cfg: &RunConfig, cmd: BarcodeCmd, ex: Execution) -> Result<Output> {
    match cmd {
        BarcodeCmd::Decompose { file } => {
            let c: ComplexFile = read_json(&file)?;
            Ok(Output::ok(c.complex()?.barcode().to_json() + "\n"))
        }
        BarcodeCmd::Bottleneck { a, b } => {
            let d = bottleneck_with(&read_barcode(&a)?, &read_barcode(&b)?, ex);
            Ok(Output::ok(pretty(&json!({ "bottleneck": d }))?))
        }
        BarcodeCmd::Mu { file, zeta_index } => {
            let m: ModuleFile = read_json(&file)?;
            let v = m.module()?;
            let k: u32 = cfg.parsed("zeta-index", zeta_index)?.unwrap_or(1);
            let r = report(&v, k, ex)?;
            Ok(Output::ok(serde_json::to_string_pretty(&r)? + "\n"))
        }
    }
}

pub fn spread(file: &Path, out: Option<&Path>, ex: Execution) -> Result<Output> {
    let c: ComplexFile = read_json(file)?;
    let eq = c.equivariant()?;
    let mut homology = serde_json::Map::new();
    for r in eq.complex().degrees() {
        let m = eq.homology_module(r)?;
        homology.insert(r.to_string(), json!({ "w_hat": w_hat(&m), "barcode": serde_json::from_str::<serde_json::Value>(&m.base().barcode().to_json())? }));
    }
    let w = eq.w_spread(ex);
    let note = (w == Extended::Infinity).then_some("model-degenerate, use spread_lower_bound_from_gaps");
    let text = pretty(&json!({
        "k": eq.k(),
        "w_spread": w,
        "w_spread_note": note,
        "gap_lower_bound": spread_lower_bound_from_gaps(eq.complex().generators()),
        "homology": homology,
    }))?;
    if let Some(path) = out {
        write_file(path, &text)?;
    }
    Ok(Output::ok(text))
}

/// Fixture inputs: `(λ, model input)` from the egg-beater enumeration.
fn fixture_inputs(p: u32, lambda: &str, ex: Execution) -> Result<Vec<(Rational, ModelInput)>> {
    let l = rational(4, 1);
    let (mu, nu) = param_search(p, &l, 10)?;
    let lambdas = if lambda.trim() == "auto" {
        let t = threshold_lambda(p, &l, &mu, &nu, 64, ex)?.context("no threshold found")?;
        vec![&t * rational(2, 1), &t * rational(4, 1)]
    } else {
        rat_list(lambda).context("--lambda")?
    };
    let step = lattice_step(&l, &mu, &nu);
    lambdas
        .into_iter()
        .map(|lam| {
            let params = EggBeaterParams::new(p, l.clone(), lam.clone(), mu.clone(), nu.clone())
                .with_context(|| format!("lambda {} is not a multiple of {}", format_rational(&lam), format_rational(&step)))?;
            let recs = enumerate(&params, ex)?;
            if recs.iter().any(|r| !r.is_valid()) {
                bail!("lambda {} is below the validation threshold", format_rational(&lam));
            }
            Ok((lam, ModelInput::from_records(&recs, p, 0)))
        })
        .collect()
}

pub fn bounds(cfg: &RunConfig, a: BoundsArgs, ex: Execution) -> Result<Output> {
    let k = cfg.rational("k", a.k)?.unwrap_or_else(|| rational(1, 1));
    let eps = cfg.rational("epsilon-frac", a.epsilon_frac)?.unwrap_or_else(|| rational(1, 100));
    let stabilize = cfg.pick("stabilize", a.stabilize).map(|s| u64_list(&s)).transpose()?;
    let file = a.file.or_else(|| cfg.pick("file", None).map(Into::into));
    let runs: Vec<(Option<Rational>, String, ModelInput)> = match file {
        Some(path) => {
            let input: ModelInput = read_json(&path)?;
            if input.tuples.is_empty() {
                bail!("{} has no tuples", path.display());
            }
            vec![(None, path.display().to_string(), input)]
        }
        None => {
            let name = cfg.pick("fixture", a.fixture).unwrap_or_else(|| "p2".into());
            let p: u32 = match name.as_str() {
                "p2" => cfg.parsed("p", a.p)?.unwrap_or(2),
                other => bail!("unknown fixture {other:?} (available: p2)"),
            };
            let lambda = cfg.pick("lambda", a.lambda).unwrap_or_else(|| "auto".into());
            fixture_inputs(p, &lambda, ex)?
                .into_iter()
                .map(|(lam, input)| (Some(lam), format!("eggbeater-p{p}-L4"), input))
                .collect()
        }
    };
    let mut reports: Vec<BoundsReport> = Vec::new();
    for (lambda, fixture, input) in &runs {
        let prov = Provenance { fixture: fixture.clone(), lambda: lambda.clone(), stabilize: stabilize.clone() };
        reports.push(bounds_report(input, &k, &eps, prov, ex)?);
    }
    let json = serde_json::to_string_pretty(&reports)? + "\n";
    let svg_text = {
        let (lambda, fixture, input) = &runs[0];
        let title = match lambda {
            Some(l) => format!("{fixture}, lambda = {}", format_rational(l)),
            None => fixture.clone(),
        };
        svg::render(&input.family().to_barcode(), &title)
    };
    let format = a.format.unwrap_or(Format::Json);
    if let Some(path) = &a.out {
        match format {
            Format::Svg => write_file(path, &svg_text)?,
            _ => write_file(path, &json)?,
        }
    }
    Ok(Output::ok(match format {
        Format::Json => json,
        Format::Svg => svg_text,
        Format::Csv => bail!("csv output is only available for eggbeater"),
    }))
}
