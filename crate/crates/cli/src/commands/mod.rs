pub mod detect;
pub mod reproduce;
pub mod simulate;
pub mod sweep;
pub mod verify;

use polygen_core::analysis::{
    classify_multiplier, classify_parameters, detect_period_with, periodicity_condition_check, Metric,
    MultiplierClass, ParameterClassification, PeriodCriteria, PeriodReport, PeriodicityConditionReport,
};
use polygen_core::engine::Trajectory;
use polygen_core::seeds::SeedKind;
use polygen_core::Complex64;
use serde::Serialize;

use crate::config::{Run, Tolerances};
use crate::error::CliResult;
use crate::output::Presented;

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// A check exceeded its tolerance.
    Failed,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::Failed => 1,
        }
    }
}

pub fn criteria(tolerances: &Tolerances, max_period: usize) -> PeriodCriteria {
    PeriodCriteria {
        max_period,
        tol: tolerances.period,
        asymptotic_tol: tolerances.asymptotic,
        divergence_threshold: tolerances.divergence,
    }
}

/// Period analysis under both metrics; `None` when the run is too short.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodAnalysis {
    /// States compared as sets.
    pub set: Option<PeriodReport>,
    /// States compared as vectors in the presentation order.
    pub ordered: Option<PeriodReport>,
}

pub fn analyze(run: &Run, top: &Trajectory, presented: &Presented) -> CliResult<PeriodAnalysis> {
    if run.max_period == 0 {
        return Ok(PeriodAnalysis { set: None, ordered: None });
    }
    let c = criteria(&run.tolerances, run.max_period);
    Ok(PeriodAnalysis {
        set: Some(detect_period_with(&top.states, Metric::Set, &c)?),
        ordered: Some(detect_period_with(&presented.states, Metric::Ordered, &c)?),
    })
}

/// Long-time predictions available for the seed kind.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Prediction {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ParameterClassification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periodicity_conditions: Option<PeriodicityConditionReport>,
}

pub fn predict(run: &Run) -> CliResult<Prediction> {
    let mut out = Prediction::default();
    match run.spec.seed().kind() {
        SeedKind::Affine(params) | SeedKind::QAffine { params, .. } => {
            out.classification = Some(classify_parameters(params));
        }
        SeedKind::SecondOrder(params) if params.is_autonomous() && run.initial.len() == 2 => {
            let zero = Complex64::new(0.0, 0.0);
            let mut period = 1u64;
            for a in params.a.at(0) {
                match classify_multiplier(a, zero) {
                    MultiplierClass::Rotation(r) => period = lcm(period, r.period()),
                    _ => return Ok(out),
                }
            }
            out.periodicity_conditions =
                periodicity_condition_check(&run.initial[0], &run.initial[1], params, period).ok();
        }
        _ => {}
    }
    Ok(out)
}

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Warnings {
    pub non_generic_steps: Vec<usize>,
    pub ambiguous_steps: Vec<usize>,
}

impl Warnings {
    pub fn collect(layers: &[Trajectory], presented: &Presented) -> Self {
        let mut non_generic: Vec<usize> = layers
            .iter()
            .flat_map(|l| l.meta.non_generic.iter().enumerate().filter(|(_, f)| **f).map(|(ell, _)| ell))
            .collect();
        non_generic.sort_unstable();
        non_generic.dedup();
        let ambiguous = presented
            .ambiguous
            .iter()
            .enumerate()
            .filter(|(_, f)| **f)
            .map(|(ell, _)| ell)
            .collect();
        Warnings {
            non_generic_steps: non_generic,
            ambiguous_steps: ambiguous,
        }
    }

    /// Report on the diagnostic stream.
    pub fn emit(&self) {
        let list = |steps: &[usize]| {
            let shown: Vec<String> = steps.iter().take(10).map(usize::to_string).collect();
            let more = if steps.len() > 10 { format!(" (+{} more)", steps.len() - 10) } else { String::new() };
            format!("{}{more}", shown.join(", "))
        };
        if !self.non_generic_steps.is_empty() {
            eprintln!("warning: non-generic zero set at steps {}", list(&self.non_generic_steps));
        }
        if !self.ambiguous_steps.is_empty() {
            eprintln!("warning: ambiguous ordering at steps {}", list(&self.ambiguous_steps));
        }
    }
}

pub fn describe(report: &Option<PeriodReport>) -> String {
    match report {
        None => "too short for period analysis".to_string(),
        Some(r) => {
            let verdict = serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from));
            let verdict = verdict.unwrap_or_default();
            match r.period {
                Some(l) => format!("{verdict}, period {l}"),
                None => verdict,
            }
        }
    }
}
