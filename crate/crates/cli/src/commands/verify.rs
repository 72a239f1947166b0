use polygen_core::analysis::set_distance;
use polygen_core::engine::{lift_generation, simulate, verify_key_identity, SolveMode, Trajectory};
use polygen_core::numerics::{coefficients_from_zeros, zeros_from_coefficients, RootSet};
use polygen_core::seeds::seed_closed_form_series;
use polygen_core::Complex64;
use serde::Serialize;

use super::Outcome;
use crate::config::{Run, SCHEMA_VERSION};
use crate::error::CliResult;
use crate::output::{json_bytes, write_atomic};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub label: String,
    pub steps: usize,
    pub depth: usize,
    pub perturb_closed_form: f64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Generation zero from the closed-form coefficients, with `perturb` added to
/// `y_1` after the initial data; then the same lifts as the iterated run.
fn closed_form_layers(run: &Run, iterated: &[Trajectory]) -> CliResult<Vec<Trajectory>> {
    let seed = run.spec.seed();
    let p = seed.order();
    let y0: Vec<_> = run.initial.iter().map(coefficients_from_zeros).collect::<Result<_, _>>()?;
    let mut series = seed_closed_form_series(seed, &y0, run.steps)?;
    for y in series.iter_mut().skip(p) {
        y[0] += run.perturb_closed_form;
    }
    let mut states: Vec<RootSet> = run.initial.clone();
    for y in &series[p..] {
        let found = zeros_from_coefficients(y, states.last().map(RootSet::as_slice))?;
        states.push(found.roots);
    }
    let mut layers = vec![Trajectory {
        states,
        coefficients: series,
        meta: iterated[0].meta.clone(),
    }];
    for &rule in run.spec.ordering() {
        let next = lift_generation(layers.last().expect("nonempty"), rule)?;
        layers.push(next);
    }
    Ok(layers)
}

/// Largest `dist / (1 + |x|)` between the two runs over all layers.
fn mode_gap(iterated: &[Trajectory], closed: &[Trajectory]) -> CliResult<f64> {
    let mut worst: f64 = 0.0;
    for (a, b) in iterated.iter().zip(closed) {
        for (x, y) in a.states.iter().zip(&b.states) {
            worst = worst.max(set_distance(x, y)? / (1.0 + x.max_modulus()));
        }
    }
    Ok(worst)
}

fn key_identity_gap(layers: &[Trajectory]) -> CliResult<f64> {
    let mut worst: f64 = 0.0;
    for t in layers {
        for ell in 0..t.len().saturating_sub(1) {
            let r = verify_key_identity(&t.states[ell], &t.states[ell + 1], &t.coefficients[ell], &t.coefficients[ell + 1])?;
            worst = worst.max(r);
        }
    }
    Ok(worst)
}

/// Zeros to coefficients and back, relative to the size of the data.
fn vieta_gap(layers: &[Trajectory]) -> CliResult<f64> {
    let mut worst: f64 = 0.0;
    for t in layers {
        for (x, y) in t.states.iter().zip(&t.coefficients) {
            let y_back = coefficients_from_zeros(x)?;
            let dy = y_back.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            let x_back = zeros_from_coefficients(y, Some(x.as_slice()))?.roots;
            let dx = set_distance(x, &x_back)?;
            worst = worst
                .max(dy / (1.0 + sup_norm(y)))
                .max(dx / (1.0 + x.max_modulus()));
        }
    }
    Ok(worst)
}

pub fn verify_run(run: &Run) -> CliResult<VerifyReport> {
    let iterated = simulate(&run.spec, &run.initial, run.steps, SolveMode::Iterated)?;
    let closed = closed_form_layers(run, &iterated)?;
    let tol = run.tolerances.verify;
    let check = |name, max_residual: f64| Check {
        name,
        max_residual,
        tolerance: tol,
        passed: max_residual <= tol,
    };
    let checks = vec![
        check("mode_equivalence", mode_gap(&iterated, &closed)?),
        check("key_identity", key_identity_gap(&iterated)?),
        check("vieta_round_trip", vieta_gap(&iterated)?),
    ];
    Ok(VerifyReport {
        schema: SCHEMA_VERSION,
        label: run.label.clone(),
        steps: run.steps,
        depth: run.spec.depth(),
        perturb_closed_form: run.perturb_closed_form,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

pub fn print_report(report: &VerifyReport) {
    for c in &report.checks {
        println!(
            "{}: {} {:.3e} (tol {:.1e}) {}",
            report.label,
            c.name,
            c.max_residual,
            c.tolerance,
            if c.passed { "ok" } else { "FAILED" }
        );
    }
}

pub fn cmd_verify(runs: &[Run]) -> CliResult<Outcome> {
    let mut reports = Vec::with_capacity(runs.len());
    for run in runs {
        let report = verify_run(run)?;
        print_report(&report);
        reports.push(report);
    }
    let out = &runs.first().expect("at least one run").out;
    if let [single] = reports.as_slice() {
        write_atomic(&out.join("verify.json"), &json_bytes(single)?)?;
    } else {
        write_atomic(&out.join("verify.json"), &json_bytes(&reports)?)?;
    }
    Ok(if reports.iter().all(|r| r.passed) {
        Outcome::Success
    } else {
        Outcome::Failed
    })
}
