//! Run reports and CSV series.

use std::fs;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::checks::{self, block_norms, cplx, CheckEntry, Context, Status};
use crate::config::{CheckName, ScenarioConfig, SCHEMA_VERSION};
use crate::CliError;

pub struct RunOutcome {
    pub entries: Vec<CheckEntry>,
}

impl RunOutcome {
    /// 0 iff no check failed; skipped checks never fail a run.
    pub fn exit_code(&self) -> u8 {
        u8::from(self.entries.iter().any(|e| e.status == Status::Fail))
    }
}

pub fn run(cfg: &ScenarioConfig, out: &Path) -> Result<RunOutcome, CliError> {
    let start = Instant::now();
    let ctx = checks::prepare(cfg)?;
    let assembled = start.elapsed().as_secs_f64();
    let results = checks::run_checks(cfg, &ctx);
    fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let mut artifacts = Vec::new();
    if cfg.checks.contains(&CheckName::Evolve) {
        write_trace_csv(&ctx, &out.join("evolve.csv"))?;
        artifacts.push("evolve.csv");
    }
    let mut timings = Map::new();
    timings.insert("assemble_seconds".into(), json!(assembled));
    let mut per_check = Map::new();
    for (e, secs) in &results {
        per_check.insert(e.name.into(), json!(secs));
    }
    timings.insert("checks_seconds".into(), Value::Object(per_check));
    let entries: Vec<CheckEntry> = results.into_iter().map(|(e, _)| e).collect();
    let count = |s: Status| entries.iter().filter(|e| e.status == s).count();
    let (passed, failed, skipped) = (count(Status::Pass), count(Status::Fail), count(Status::Skipped));
    let p = &ctx.problem;
    let mut report = json!({
        "schema": SCHEMA_VERSION,
        "config": cfg,
        "problem": {
            "scenario": cfg.scenario.name(),
            "case": p.case().name(),
            "dim_x": p.dim_x(),
            "dim_boundary": p.dim_dx(),
            "form": ctx.system.form.name(),
            "lambda": cplx(ctx.system.lambda),
            "blocks": ctx.system.block_map.blocks().iter()
                .map(|b| json!({"name": b.name, "start": b.range.start, "end": b.range.end}))
                .collect::<Vec<_>>(),
        },
        "checks": entries,
        "failed_checks": entries.iter().filter(|e| e.status == Status::Fail).map(|e| e.name).collect::<Vec<_>>(),
        "summary": {"passed": passed, "failed": failed, "skipped": skipped},
        "artifacts": artifacts,
    });
    timings.insert("total_seconds".into(), json!(start.elapsed().as_secs_f64()));
    report["timings"] = Value::Object(timings);
    let text = serde_json::to_string_pretty(&report).expect("report serialises");
    fs::write(out.join("report.json"), text + "\n").map_err(|e| CliError::Io(format!("report.json: {e}")))?;
    Ok(RunOutcome { entries })
}

/// `t`, one norm per block of the reduced state, then the total norm.
fn write_trace_csv(ctx: &Context, path: &Path) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let trace = ctx.trace.as_ref().expect("trace prepared for evolve");
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    let mut header = vec!["t".to_string()];
    header.extend(ctx.system.block_map.blocks().iter().map(|b| format!("norm_{}", b.name)));
    header.push("norm_total".into());
    w.write_record(&header).map_err(io)?;
    for (t, state) in trace.time_grid.iter().zip(&trace.states) {
        let mut row = vec![format!("{t:e}")];
        row.extend(block_norms(&ctx.system, state).iter().map(|x| format!("{x:e}")));
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
