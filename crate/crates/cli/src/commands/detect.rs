use std::path::Path;

use polygen_core::analysis::{detect_period_with, Metric, PeriodReport};
use polygen_core::Complex64;
use serde::Serialize;

use super::simulate::run_simulation;
use super::{criteria, describe, Outcome};
use crate::config::{Run, Tolerances, DEFAULT_MAX_PERIOD, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};
use crate::output::{json_bytes, write_atomic};

#[derive(Debug, Clone, Serialize)]
pub struct DetectReport {
    pub schema: u32,
    pub source: String,
    pub metric: Metric,
    pub states: usize,
    pub max_period: usize,
    pub tolerances: Tolerances,
    pub report: PeriodReport,
}

/// State vectors from a trajectory CSV written by `simulate`.
pub fn read_trajectory_csv(path: &Path) -> CliResult<Vec<Vec<Complex64>>> {
    let bad = |msg: String| CliError::config(format!("{}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let mut columns = Vec::new();
    for n in 1.. {
        let re = header.iter().position(|h| h == format!("re_x{n}"));
        let im = header.iter().position(|h| h == format!("im_x{n}"));
        match (re, im) {
            (Some(re), Some(im)) => columns.push((re, im)),
            _ => break,
        }
    }
    if columns.is_empty() {
        return Err(bad("no re_x1/im_x1 columns".into()));
    }
    let mut states = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let field = |i: usize| -> CliResult<f64> {
            record
                .get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(format!("row {}: unreadable value in column {}", line + 1, i + 1)))
        };
        let state = columns
            .iter()
            .map(|&(re, im)| Ok(Complex64::new(field(re)?, field(im)?)))
            .collect::<CliResult<Vec<_>>>()?;
        states.push(state);
    }
    Ok(states)
}

pub fn detect_states(states: &[Vec<Complex64>], metric: Metric, tolerances: &Tolerances) -> CliResult<(PeriodReport, usize)> {
    let max_period = tolerances.max_period.unwrap_or(DEFAULT_MAX_PERIOD).min(states.len() / 3);
    if max_period == 0 {
        return Err(CliError::config(format!("{} states are too few for period detection", states.len())));
    }
    if metric == Metric::Set {
        let sets: Vec<_> = states.iter().cloned().map(polygen_core::numerics::RootSet::new).collect();
        return Ok((detect_period_with(&sets, metric, &criteria(tolerances, max_period))?, max_period));
    }
    Ok((detect_period_with(states, metric, &criteria(tolerances, max_period))?, max_period))
}

/// Period of a trajectory file, or of the configured run.
pub fn cmd_detect(input: Option<&Path>, run: Option<&Run>, metric: Metric, tolerances: &Tolerances, out: &Path) -> CliResult<Outcome> {
    let (source, states) = match (input, run) {
        (Some(path), _) => (path.display().to_string(), read_trajectory_csv(path)?),
        (None, Some(run)) => {
            let sim = run_simulation(run, "detect-period")?;
            sim.report.warnings.emit();
            let states = match metric {
                Metric::Set => sim.top().states.iter().map(|s| s.as_slice().to_vec()).collect(),
                Metric::Ordered => sim.presented.states.iter().map(|s| s.as_slice().to_vec()).collect(),
            };
            (run.label.clone(), states)
        }
        (None, None) => return Err(CliError::config("detect-period needs --input, --config or --preset")),
    };
    let (report, max_period) = detect_states(&states, metric, tolerances)?;
    println!("{source}: {}", describe(&Some(report.clone())));
    let out_report = DetectReport {
        schema: SCHEMA_VERSION,
        source,
        metric,
        states: states.len(),
        max_period,
        tolerances: *tolerances,
        report,
    };
    write_atomic(&out.join("period.json"), &json_bytes(&out_report)?)?;
    Ok(Outcome::Success)
}
