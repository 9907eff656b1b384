//! `dynbc compare`: coupling-scale sweeps of two configurations.

use dynbc::coupling::{assemble, assemble_a_constrained, probe_lambda};
use dynbc::discretize::DiscreteProblem;
use dynbc::matcore::spectral_abscissa;
use dynbc::stability::split_blocks;
use dynbc::{Error, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::checks::num;
use crate::config::{ScenarioConfig, SCHEMA_VERSION};
use crate::CliError;

pub const SCALES: usize = 11;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub s: f64,
    pub abscissa: f64,
    /// Certificate constant; infinite when a diagonal block is not stable.
    pub m: f64,
}

fn point(base: &DiscreteProblem, s: f64) -> Result<SweepPoint> {
    let p = base.with_coupling_scale(s);
    let abscissa = spectral_abscissa(&assemble_a_constrained(&p)?)?;
    let sys = assemble(&p, Some(probe_lambda(&p)?))?.phase_space_weighted(&p)?;
    let m = match split_blocks(&sys, "boundary")?.with_estimated_bounds() {
        Ok(b) => b.m_constant()?,
        Err(Error::PremiseViolated(_)) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    Ok(SweepPoint { s, abscissa, m })
}

pub fn sweep(base: &DiscreteProblem) -> Result<Vec<SweepPoint>> {
    (0..SCALES).into_par_iter().map(|i| point(base, i as f64 / (SCALES - 1) as f64)).collect()
}

/// No jump between neighbouring scales may exceed ten times the larger of
/// the adjacent jumps (with an absolute floor for flat stretches).
pub fn continuous(points: &[SweepPoint]) -> bool {
    let jumps: Vec<f64> = points.windows(2).map(|w| (w[1].abscissa - w[0].abscissa).abs()).collect();
    let scale = points.iter().map(|p| p.abscissa.abs()).fold(1.0, f64::max);
    (0..jumps.len()).all(|i| {
        let left = if i > 0 { jumps[i - 1] } else { 0.0 };
        let right = jumps.get(i + 1).copied().unwrap_or(0.0);
        jumps[i] <= 10.0 * left.max(right) + 1e-9 * scale
    })
}

fn first_scale(points: &[SweepPoint], lost: impl Fn(&SweepPoint) -> bool) -> Value {
    points.iter().find(|p| lost(p)).map_or(Value::Null, |p| num(p.s))
}

fn summary(cfg: &ScenarioConfig, points: &[SweepPoint]) -> Value {
    json!({
        "scenario": cfg.scenario.name(),
        "table": points.iter().map(|p| json!({"s": num(p.s), "abscissa": num(p.abscissa), "M": num(p.m)})).collect::<Vec<_>>(),
        "stability_loss_scale": first_scale(points, |p| p.abscissa >= 0.0),
        "certificate_loss_scale": first_scale(points, |p| !(p.m < 1.0)),
        "abscissa_continuous": continuous(points),
    })
}

fn same(a: f64, b: f64) -> bool {
    a == b || (a.is_nan() && b.is_nan()) || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

pub struct Comparison {
    pub report: Value,
    pub continuous: bool,
}

pub fn compare(a: &ScenarioConfig, b: &ScenarioConfig) -> std::result::Result<Comparison, CliError> {
    if a.scenario != b.scenario {
        return Err(CliError::IncompatibleScenarios(format!("{} vs {}", a.scenario.name(), b.scenario.name())));
    }
    let run = |cfg: &ScenarioConfig| -> std::result::Result<Vec<SweepPoint>, CliError> {
        sweep(&cfg.problem()?).map_err(|e| CliError::ConfigInvalid(format!("sweep failed: {e}")))
    };
    let (pa, pb) = (run(a)?, run(b)?);
    let mut diff = Vec::new();
    for (x, y) in pa.iter().zip(&pb) {
        for (field, u, v) in [("abscissa", x.abscissa, y.abscissa), ("M", x.m, y.m)] {
            if !same(u, v) {
                diff.push(json!({"s": num(x.s), "field": field, "a": num(u), "b": num(v)}));
            }
        }
    }
    let (sa, sb) = (summary(a, &pa), summary(b, &pb));
    for key in ["stability_loss_scale", "certificate_loss_scale"] {
        if sa[key] != sb[key] {
            diff.push(json!({"field": key, "a": sa[key], "b": sb[key]}));
        }
    }
    let continuous = continuous(&pa) && continuous(&pb);
    Ok(Comparison { report: json!({"schema": SCHEMA_VERSION, "a": sa, "b": sb, "diff": diff}), continuous })
}
