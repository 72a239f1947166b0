use std::path::Path;

use polygen_core::analysis::{
    classify_parameters, detect_period_with, Metric, ParameterClassification, PeriodReport, PeriodVerdict, Taxonomy,
};
use polygen_core::engine::{solve_initial_value, SolveMode};
use polygen_core::numerics::RootSet;
use polygen_core::seeds::{AffineParams, SeedSpec};
use rayon::prelude::*;
use serde::Serialize;

use super::{criteria, Outcome};
use crate::config::{Format, Param, SweepConfig, Tolerances, DEFAULT_MAX_PERIOD};
use crate::error::{CliError, CliResult};
use crate::output::{format_float, json_bytes, write_atomic};

/// Long enough for a multiplier of modulus 1.1 to push the zeros past the
/// default divergence threshold of 1e12.
pub const DEFAULT_SWEEP_STEPS: usize = 800;

pub const THREADS_VAR: &str = "POLYGEN_THREADS";

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub cell: usize,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub predicted: Option<ParameterClassification>,
    pub detected: Option<PeriodReport>,
    /// Largest zero modulus along the trajectory.
    pub max_modulus: Option<f64>,
    /// `None` where the taxonomy makes no prediction.
    pub agreement: Option<bool>,
    pub error: Option<String>,
}

/// Whether a detected verdict confirms the predicted label.
pub fn agrees(predicted: &ParameterClassification, detected: &PeriodReport) -> Option<bool> {
    let period = predicted.predicted_period.map(|p| p as usize);
    let v = detected.verdict;
    Some(match predicted.label {
        Taxonomy::Isochronous => v == PeriodVerdict::ExactPeriodic && detected.period == period,
        Taxonomy::AsymptoticallyIsochronous => {
            matches!(v, PeriodVerdict::AsymptoticallyPeriodic | PeriodVerdict::ExactPeriodic) && detected.period == period
        }
        Taxonomy::Convergent => {
            v == PeriodVerdict::Convergent || (v == PeriodVerdict::ExactPeriodic && detected.period == Some(1))
        }
        Taxonomy::Divergent => v == PeriodVerdict::Divergent,
        Taxonomy::Inconclusive => return None,
    })
}

fn cartesian(choices: &[Vec<Param>]) -> Vec<Vec<Param>> {
    choices.iter().fold(vec![Vec::new()], |acc, options| {
        acc.iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut next = prefix.clone();
                    next.push(o.clone());
                    next
                })
            })
            .collect()
    })
}

fn values(params: &[Param]) -> CliResult<Vec<polygen_core::Complex64>> {
    params.iter().map(Param::value).collect()
}

struct Grid {
    cells: Vec<Vec<Param>>,
    b: Vec<Param>,
    initial: RootSet,
    steps: usize,
    max_period: usize,
}

fn grid(config: &SweepConfig, steps: Option<usize>) -> CliResult<Grid> {
    let n = config.a.len();
    if n == 0 || config.a.iter().any(Vec::is_empty) {
        return Err(CliError::config("sweep.a needs a nonempty list per component"));
    }
    if config.b.len() != n || config.initial.len() != n {
        return Err(CliError::config(format!("sweep.b and sweep.initial need {n} entries")));
    }
    let steps = steps.or(config.steps).unwrap_or(DEFAULT_SWEEP_STEPS);
    let max_period = config.max_period.unwrap_or(DEFAULT_MAX_PERIOD).min((steps + 1) / 3);
    if max_period == 0 {
        return Err(CliError::config("sweep.steps too small for period detection"));
    }
    Ok(Grid {
        cells: cartesian(&config.a),
        b: config.b.clone(),
        initial: RootSet::new(values(&config.initial)?),
        steps,
        max_period,
    })
}

fn evaluate(grid: &Grid, tolerances: &Tolerances, cell: usize) -> SweepRow {
    let a = &grid.cells[cell];
    let mut row = SweepRow {
        cell,
        a: a.iter().map(Param::label).collect(),
        b: grid.b.iter().map(Param::label).collect(),
        predicted: None,
        detected: None,
        max_modulus: None,
        agreement: None,
        error: None,
    };
    let result = (|| -> CliResult<()> {
        let params = AffineParams {
            a: values(a)?,
            b: values(&grid.b)?,
        };
        let predicted = classify_parameters(&params);
        row.predicted = Some(predicted.clone());
        let seed = SeedSpec::affine(params.a, params.b)?;
        let traj = solve_initial_value(&seed, std::slice::from_ref(&grid.initial), grid.steps, SolveMode::Iterated)?;
        row.max_modulus = Some(traj.states.iter().map(RootSet::max_modulus).fold(0.0, f64::max));
        let detected = detect_period_with(&traj.states, Metric::Set, &criteria(tolerances, grid.max_period))?;
        row.agreement = agrees(&predicted, &detected);
        row.detected = Some(detected);
        Ok(())
    })();
    if let Err(e) = result {
        row.error = Some(e.to_string());
    }
    row
}

/// Worker count from `POLYGEN_THREADS`, if set.
pub fn thread_cap() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::config(format!("{THREADS_VAR} must be a positive integer, got {s:?}"))),
        },
    }
}

/// Evaluate every cell; rows come back in cell order whatever the thread
/// count. Per-cell failures are recorded in the row.
pub fn run_sweep(
    config: &SweepConfig,
    tolerances: &Tolerances,
    steps: Option<usize>,
    threads: Option<usize>,
) -> CliResult<Vec<SweepRow>> {
    let grid = grid(config, steps)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::config(format!("cannot start sweep workers: {e}")))?;
    Ok(pool.install(|| {
        (0..grid.cells.len())
            .into_par_iter()
            .map(|cell| evaluate(&grid, tolerances, cell))
            .collect()
    }))
}

fn label_name<T: Serialize>(value: &T) -> String {
    serde_json::to_value(value)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

pub fn sweep_csv(rows: &[SweepRow]) -> CliResult<Vec<u8>> {
    let n = rows.first().map_or(0, |r| r.a.len());
    let mut header = vec!["cell".to_string()];
    header.extend((1..=n).map(|m| format!("a{m}")));
    header.extend((1..=n).map(|m| format!("b{m}")));
    header.extend(
        ["predicted_label", "predicted_period", "verdict", "detected_period", "max_modulus", "agreement", "error"]
            .map(String::from),
    );
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let io = |e: csv::Error| CliError::io("<csv buffer>", std::io::Error::other(e));
        w.write_record(&header).map_err(io)?;
        for r in rows {
            let mut rec = vec![r.cell.to_string()];
            rec.extend(r.a.iter().cloned());
            rec.extend(r.b.iter().cloned());
            let opt = |x: Option<String>| x.unwrap_or_default();
            rec.push(opt(r.predicted.as_ref().map(|p| label_name(&p.label))));
            rec.push(opt(r.predicted.as_ref().and_then(|p| p.predicted_period).map(|p| p.to_string())));
            rec.push(match (&r.detected, &r.error) {
                (Some(d), _) => label_name(&d.verdict),
                (None, Some(_)) => "error".to_string(),
                (None, None) => String::new(),
            });
            rec.push(opt(r.detected.as_ref().and_then(|d| d.period).map(|p| p.to_string())));
            rec.push(opt(r.max_modulus.map(format_float)));
            rec.push(opt(r.agreement.map(|a| a.to_string())));
            rec.push(opt(r.error.clone()));
            w.write_record(&rec).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::io("<csv buffer>", e))?;
    }
    Ok(buf)
}

#[derive(Serialize)]
struct SweepReport<'a> {
    schema: u32,
    steps: usize,
    tolerances: &'a Tolerances,
    rows: &'a [SweepRow],
}

pub fn cmd_sweep(
    config: &SweepConfig,
    tolerances: &Tolerances,
    steps: Option<usize>,
    out: &Path,
    format: Format,
) -> CliResult<Outcome> {
    let rows = run_sweep(config, tolerances, steps, thread_cap()?)?;
    match format {
        Format::Json => {
            let report = SweepReport {
                schema: crate::config::SCHEMA_VERSION,
                steps: steps.or(config.steps).unwrap_or(DEFAULT_SWEEP_STEPS),
                tolerances,
                rows: &rows,
            };
            write_atomic(&out.join("sweep.json"), &json_bytes(&report)?)?;
        }
        _ => write_atomic(&out.join("sweep.csv"), &sweep_csv(&rows)?)?,
    }
    let predicted = rows.iter().filter(|r| r.agreement.is_some()).count();
    let agreeing = rows.iter().filter(|r| r.agreement == Some(true)).count();
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    println!("sweep: {} cells, {agreeing}/{predicted} predictions confirmed, {errors} errors", rows.len());
    for r in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("warning: cell {}: {}", r.cell, r.error.as_deref().unwrap_or_default());
    }
    Ok(Outcome::Success)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_config(a: Vec<Vec<Param>>) -> SweepConfig {
        SweepConfig {
            a,
            b: vec![Param::Real(1.0), Param::Real(2.0)],
            initial: vec![Param::Complex([-1.0, -1.0]), Param::Real(1.0)],
            steps: Some(200),
            max_period: None,
        }
    }

    #[test]
    fn cell_with_example_parameters_agrees() {
        let config = grid_config(vec![
            vec![Param::rotation(1, 3), Param::rotation(1, 2)],
            vec![Param::rotation(2, 5), Param::rotation(1, 3)],
        ]);
        let rows = run_sweep(&config, &Tolerances::default(), None, Some(2)).unwrap();
        assert_eq!(rows.len(), 4);
        let first = &rows[0];
        assert_eq!(first.a, ["1/3", "2/5"]);
        assert_eq!(first.detected.as_ref().unwrap().period, Some(15));
        assert!(rows.iter().all(|r| r.agreement == Some(true)), "{rows:?}");
    }

    #[test]
    fn contracting_grid_is_convergent() {
        let config = grid_config(vec![vec![Param::Real(0.5), Param::Complex([0.0, 0.3])], vec![Param::Real(-0.6)]]);
        let rows = run_sweep(&config, &Tolerances::default(), None, None).unwrap();
        for r in &rows {
            assert_eq!(r.predicted.as_ref().unwrap().label, Taxonomy::Convergent);
            assert_eq!(r.agreement, Some(true), "{r:?}");
        }
    }

    #[test]
    fn rows_do_not_depend_on_thread_count() {
        let config = grid_config(vec![
            vec![Param::rotation(1, 4), Param::Real(0.5), Param::Real(1.1)],
            vec![Param::rotation(1, 3), Param::Real(0.9)],
        ]);
        let one = sweep_csv(&run_sweep(&config, &Tolerances::default(), None, Some(1)).unwrap()).unwrap();
        let four = sweep_csv(&run_sweep(&config, &Tolerances::default(), None, Some(4)).unwrap()).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn invalid_cells_are_reported_without_aborting() {
        let config = grid_config(vec![vec![Param::rotation(2, 4), Param::rotation(1, 3)], vec![Param::rotation(1, 5)]]);
        let rows = run_sweep(&config, &Tolerances::default(), None, Some(2)).unwrap();
        assert!(rows[0].error.is_some());
        assert_eq!(rows[1].agreement, Some(true));
    }
}
