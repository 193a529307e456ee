use anyhow::{bail, Context, Result};
use egb_core::eggbeater::{
    enumerate, lattice_step, min_action_gap, min_coefficient_gap, param_search, solve_2d, threshold_lambda,
    EggBeaterParams, FixedPointRecord,
};
use egb_core::field::{format_rational, Rational};
use egb_core::par::Execution;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::config::{rat, rat_list, RunConfig};
use crate::{write_file, EggArgs, Format, Output, PlanarArgs};

const DEFAULT_BOUND: i64 = 10;
const MAX_MULTIPLES: usize = 64;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn s(x: &Rational) -> String {
    format_rational(x)
}

#[derive(Serialize)]
struct Run {
    lambda: String,
    valid: usize,
    total: usize,
    min_action_gap: Option<String>,
    gap_over_lambda: Option<String>,
    /// `det(Ā − id)/λ^{2p}` per sign vector, in enumeration order.
    det_over_lambda_2p: Vec<String>,
    records: Vec<FixedPointRecord>,
}

#[derive(Serialize)]
struct Summary {
    p: u32,
    #[serde(rename = "L")]
    l: String,
    mu: Vec<String>,
    nu: Vec<String>,
    lattice_step: String,
    threshold: Option<String>,
    coefficient_gap: String,
    runs: Vec<Run>,
}

pub fn csv_table(records: &[FixedPointRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["signs", "x0", "y0", "action_exact", "action_leading", "det", "valid", "rejection_reason"])?;
    for r in records {
        let (x, y) = r.z.as_ref().map(|z| (s(&z.x), s(&z.y))).unwrap_or_default();
        w.write_record([
            r.signs.to_string(),
            x,
            y,
            r.action_exact.as_ref().map(s).unwrap_or_default(),
            s(&r.action_leading),
            s(&r.det),
            r.is_valid().to_string(),
            r.rejection.as_ref().map(ToString::to_string).unwrap_or_default(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn lambda_values(cfg: &RunConfig, a: &EggArgs, p: u32, l: &Rational, mu: &[Rational], nu: &[Rational], ex: Execution) -> Result<(Vec<Rational>, Option<Rational>)> {
    let spec = cfg.pick("lambda", a.lambda.clone()).unwrap_or_else(|| "auto".into());
    if spec.trim() != "auto" {
        return Ok((rat_list(&spec).context("--lambda")?, None));
    }
    let count: usize = cfg.parsed("count", a.count.clone())?.unwrap_or(1);
    let threshold = threshold_lambda(p, l, mu, nu, MAX_MULTIPLES, ex)?
        .with_context(|| format!("no lattice lambda within {MAX_MULTIPLES} steps validates every sign vector"))?;
    let step = lattice_step(l, mu, nu);
    let values = (0..count as i64).map(|k| &threshold + &step * q(k)).collect();
    Ok((values, Some(threshold)))
}

pub fn run(cfg: &RunConfig, a: EggArgs, ex: Execution) -> Result<Output> {
    let p: u32 = cfg.parsed("p", a.p.clone())?.unwrap_or(2);
    let l = cfg.rational("L", a.l.clone())?.unwrap_or_else(|| q(4));
    let (mu, nu) = match (cfg.rationals("mu", a.mu.clone())?, cfg.rationals("nu", a.nu.clone())?) {
        (Some(mu), Some(nu)) => (mu, nu),
        (None, None) => {
            let bound: i64 = cfg.parsed("bound", a.bound.clone())?.unwrap_or(DEFAULT_BOUND);
            param_search(p, &l, bound)?
        }
        _ => bail!("give both --mu and --nu, or neither"),
    };
    EggBeaterParams::unchecked(p, l.clone(), q(1), mu.clone(), nu.clone())?;
    let (lambdas, threshold) = lambda_values(cfg, &a, p, &l, &mu, &nu, ex)?;
    if lambdas.is_empty() {
        bail!("no lambda values");
    }
    let mut runs = Vec::new();
    let mut tables = Vec::new();
    let mut complete = true;
    for lam in &lambdas {
        let params = EggBeaterParams::new(p, l.clone(), lam.clone(), mu.clone(), nu.clone())?;
        let records = enumerate(&params, ex)?;
        let valid = records.iter().filter(|r| r.is_valid()).count();
        complete &= valid == records.len();
        let gap = min_action_gap(&records);
        let lam_2p = num_traits::pow(lam.clone(), 2 * p as usize);
        eprintln!(
            "lambda {}: {valid}/{} valid, gap/lambda ~ {}",
            s(lam),
            records.len(),
            gap.as_ref().map(|g| format!("{:.6}", (g / lam).to_f64().unwrap_or(f64::NAN))).unwrap_or("-".into())
        );
        tables.push((lam.clone(), csv_table(&records)?));
        runs.push(Run {
            lambda: s(lam),
            valid,
            total: records.len(),
            gap_over_lambda: gap.as_ref().map(|g| s(&(g / lam))),
            min_action_gap: gap.as_ref().map(s),
            det_over_lambda_2p: records.iter().map(|r| s(&(&r.det / &lam_2p))).collect(),
            records,
        });
    }
    let summary = Summary {
        p,
        l: s(&l),
        mu: mu.iter().map(s).collect(),
        nu: nu.iter().map(s).collect(),
        lattice_step: s(&lattice_step(&l, &mu, &nu)),
        threshold: threshold.as_ref().map(s),
        coefficient_gap: s(&min_coefficient_gap(&mu, &nu)),
        runs,
    };
    let json = serde_json::to_string_pretty(&summary)? + "\n";
    if let Some(dir) = &a.out {
        for (lam, table) in &tables {
            let name = format!("eggbeater_lambda_{}.csv", s(lam).replace('/', "_"));
            write_file(&dir.join(name), table)?;
        }
        write_file(&dir.join("summary.json"), &json)?;
    }
    let text = match a.format.unwrap_or(Format::Json) {
        Format::Json => json,
        Format::Csv => tables.into_iter().map(|(_, t)| t).collect::<Vec<_>>().join("\n"),
        Format::Svg => bail!("svg output is only available for bounds"),
    };
    Ok(Output { text, complete })
}

pub fn run_2d(cfg: &RunConfig, a: PlanarArgs) -> Result<Output> {
    let mu = rat(&cfg.pick("mu", a.mu).unwrap_or_else(|| "1/2".into()))?;
    let nu = rat(&cfg.pick("nu", a.nu).unwrap_or_else(|| "1/4".into()))?;
    let lambda = rat(&cfg.pick("lambda", a.lambda).unwrap_or_else(|| "160".into()))?;
    if !lambda.is_positive() {
        bail!("lambda must be positive");
    }
    let recs = solve_2d(&mu, &nu, &lambda)?;
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "mu": s(&mu),
        "nu": s(&nu),
        "lambda": s(&lambda),
        "records": recs,
    }))? + "\n";
    if let Some(path) = &a.out {
        write_file(path, &json)?;
    }
    Ok(Output::ok(json))
}
