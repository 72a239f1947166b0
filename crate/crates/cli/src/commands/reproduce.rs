use std::path::Path;

use polygen_core::analysis::{detect_period_with, Metric, PeriodReport, PeriodVerdict};
use polygen_core::engine::{simulate, OrderingRule, SolveMode};
use polygen_core::presets::Preset;
use serde::Serialize;

use super::{criteria, describe, Outcome};
use crate::config::{Tolerances, DEFAULT_MAX_PERIOD, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};
use crate::output::{json_bytes, series_csv, trajectory_csv, write_atomic, Part, Presented};
use crate::plot::{plane_svg, reim_svg};

#[derive(Debug, Clone, Serialize)]
pub struct ReproduceReport {
    pub schema: u32,
    pub preset: Preset,
    pub presentation: OrderingRule,
    pub plot_steps: usize,
    pub analysis_steps: usize,
    pub tolerances: Tolerances,
    pub expected_period: usize,
    pub expected_asymptotic: bool,
    pub detected: PeriodReport,
    pub matches: bool,
    pub files: Vec<String>,
}

pub fn parse_preset(name: &str) -> CliResult<Preset> {
    Preset::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
        CliError::config(format!("unknown preset {name:?}; known: {}", known.join(", ")))
    })
}

/// Figure data for `preset` written to `out`; `plot_steps` overrides the
/// preset's figure range.
pub fn reproduce(preset: Preset, out: &Path, plot_steps: Option<usize>, tolerances: &Tolerances) -> CliResult<ReproduceReport> {
    let plot_steps = plot_steps.unwrap_or(preset.plot_steps());
    let analysis_steps = preset.analysis_steps().max(plot_steps);
    let (spec, init) = preset.build()?;
    let top = simulate(&spec, &init, analysis_steps, SolveMode::Iterated)?
        .pop()
        .expect("at least generation zero");

    let mut shown = Presented::new(&top, preset.presentation())?;
    shown.times.truncate(plot_steps + 1);
    shown.non_generic.truncate(plot_steps + 1);
    shown.ambiguous.truncate(plot_steps + 1);
    shown.states.truncate(plot_steps + 1);

    let title = format!("Example {preset}, l = 0..{plot_steps}");
    let mut files: Vec<(&str, Vec<u8>)> = vec![
        ("trajectory.csv", trajectory_csv(&shown)?),
        ("re.csv", series_csv(&shown, Part::Re)?),
        ("im.csv", series_csv(&shown, Part::Im)?),
        ("reim.svg", reim_svg(&shown, &title).into_bytes()),
    ];
    if preset.has_plane_plot() {
        files.push(("plane.svg", plane_svg(&shown, &title).into_bytes()));
    }

    let max_period = DEFAULT_MAX_PERIOD.min(top.len() / 3);
    let detected = detect_period_with(&top.states, Metric::Set, &criteria(tolerances, max_period))?;
    let expected_verdict = if preset.asymptotic() {
        PeriodVerdict::AsymptoticallyPeriodic
    } else {
        PeriodVerdict::ExactPeriodic
    };
    let matches = detected.verdict == expected_verdict && detected.period == Some(preset.expected_period());
    let report = ReproduceReport {
        schema: SCHEMA_VERSION,
        preset,
        presentation: preset.presentation(),
        plot_steps,
        analysis_steps,
        tolerances: *tolerances,
        expected_period: preset.expected_period(),
        expected_asymptotic: preset.asymptotic(),
        detected,
        matches,
        files: files.iter().map(|(name, _)| name.to_string()).collect(),
    };
    for (name, bytes) in &files {
        write_atomic(&out.join(name), bytes)?;
    }
    write_atomic(&out.join("report.json"), &json_bytes(&report)?)?;
    Ok(report)
}

pub fn cmd_reproduce(name: &str, out: &Path, plot_steps: Option<usize>, tolerances: &Tolerances) -> CliResult<Outcome> {
    let preset = parse_preset(name)?;
    let report = reproduce(preset, out, plot_steps, tolerances)?;
    println!(
        "example {preset}: wrote {} to {}; {} (expected {}{})",
        report.files.join(", "),
        out.display(),
        describe(&Some(report.detected.clone())),
        if report.expected_asymptotic { "asymptotic " } else { "" },
        report.expected_period
    );
    Ok(if report.matches { Outcome::Success } else { Outcome::Failed })
}
