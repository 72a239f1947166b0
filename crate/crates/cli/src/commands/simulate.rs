use polygen_core::engine::{simulate, OrderingRule, SolveMode, Trajectory};
use polygen_core::seeds::SeedKindTag;
use serde::Serialize;

use super::{analyze, describe, predict, Outcome, PeriodAnalysis, Prediction, Warnings};
use crate::config::{Format, Run, Tolerances, SCHEMA_VERSION};
use crate::error::CliResult;
use crate::output::{json_bytes, trajectory_csv, write_atomic, Presented};
use crate::plot::{plane_svg, reim_svg};

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: &'static str,
    pub label: String,
    pub seed_kind: SeedKindTag,
    pub arity: usize,
    pub depth: usize,
    pub orderings: Vec<OrderingRule>,
    pub presentation: OrderingRule,
    pub mode: SolveMode,
    pub steps: usize,
    pub tolerances: Tolerances,
    pub max_period: usize,
    pub period: PeriodAnalysis,
    #[serde(flatten)]
    pub prediction: Prediction,
    pub warnings: Warnings,
}

pub struct Simulation {
    pub layers: Vec<Trajectory>,
    pub presented: Presented,
    pub report: RunReport,
}

impl Simulation {
    pub fn top(&self) -> &Trajectory {
        self.layers.last().expect("at least generation zero")
    }
}

pub fn run_simulation(run: &Run, command: &'static str) -> CliResult<Simulation> {
    let layers = simulate(&run.spec, &run.initial, run.steps, run.mode)?;
    let top = layers.last().expect("at least generation zero");
    let presented = Presented::new(top, run.presentation)?;
    let period = analyze(run, top, &presented)?;
    let report = RunReport {
        schema: SCHEMA_VERSION,
        command,
        label: run.label.clone(),
        seed_kind: run.spec.seed().tag(),
        arity: run.spec.seed().arity(),
        depth: run.spec.depth(),
        orderings: run.spec.ordering().to_vec(),
        presentation: run.presentation,
        mode: run.mode,
        steps: run.steps,
        tolerances: run.tolerances,
        max_period: run.max_period,
        period,
        prediction: predict(run)?,
        warnings: Warnings::collect(&layers, &presented),
    };
    Ok(Simulation {
        layers,
        presented,
        report,
    })
}

pub fn cmd_simulate(run: &Run) -> CliResult<Outcome> {
    let sim = run_simulation(run, "simulate")?;
    sim.report.warnings.emit();
    match run.format {
        Format::Csv => write_atomic(&run.out.join("trajectory.csv"), &trajectory_csv(&sim.presented)?)?,
        Format::Json => write_atomic(&run.out.join("trajectory.json"), &json_bytes(&sim.presented)?)?,
        Format::Svg => {
            write_atomic(&run.out.join("plane.svg"), plane_svg(&sim.presented, &run.label).as_bytes())?;
            write_atomic(&run.out.join("reim.svg"), reim_svg(&sim.presented, &run.label).as_bytes())?;
        }
    }
    write_atomic(&run.out.join("report.json"), &json_bytes(&sim.report)?)?;
    println!("{}: {} steps, {}", run.label, run.steps, describe(&sim.report.period.set));
    Ok(Outcome::Success)
}
