//! The JSON run configuration (`"schema": 1`) and its resolution into an
//! engine run.

use std::fs;
use std::path::{Path, PathBuf};

use polygen_core::engine::{descend_initial, GenerationSpec, OrderingRule, SolveMode};
use polygen_core::numerics::{PermutationIndex, RootSet};
use polygen_core::presets::Preset;
use polygen_core::seeds::{q_affine_wrap, AffineParams, RationalRotation, Schedule, SecondOrderParams, SeedSpec};
use polygen_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_STEPS: usize = 100;
pub const DEFAULT_MAX_PERIOD: usize = 60;

/// A complex parameter: `[re, im]`, a bare real number, or
/// `{"rotation": [q, p], "scale": s}` for `s * exp(2 pi i q / p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Rotation {
        rotation: (i64, u64),
        #[serde(default = "unit_scale")]
        scale: f64,
    },
    Complex([f64; 2]),
    Real(f64),
}

fn unit_scale() -> f64 {
    1.0
}

impl Param {
    pub fn rotation(q: i64, p: u64) -> Self {
        Param::Rotation {
            rotation: (q, p),
            scale: 1.0,
        }
    }

    pub fn value(&self) -> CliResult<Complex64> {
        let z = match *self {
            Param::Rotation { rotation: (q, p), scale } => {
                let r = RationalRotation::new(q, p).map_err(|e| CliError::config(e.to_string()))?;
                r.value() * scale
            }
            Param::Complex([re, im]) => Complex64::new(re, im),
            Param::Real(re) => Complex64::new(re, 0.0),
        };
        if !z.is_finite() {
            return Err(CliError::config("parameters must be finite"));
        }
        Ok(z)
    }

    /// Compact label used in tables: `1/3`, `0.9*2/5`, `0.5`, `0.5+1i`.
    pub fn label(&self) -> String {
        match *self {
            Param::Rotation { rotation: (q, p), scale } if scale == 1.0 => format!("{q}/{p}"),
            Param::Rotation { rotation: (q, p), scale } => format!("{scale:?}*{q}/{p}"),
            Param::Complex([re, im]) => crate::output::format_complex(Complex64::new(re, im)),
            Param::Real(re) => format!("{re:?}"),
        }
    }
}

fn values(params: &[Param]) -> CliResult<Vec<Complex64>> {
    params.iter().map(Param::value).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SeedConfig {
    Affine {
        a: Vec<Param>,
        b: Vec<Param>,
    },
    QAffine {
        a: Vec<Param>,
        b: Vec<Param>,
        q: Param,
    },
    /// `g` and `h` are lists of N-vectors, applied cyclically in `l`.
    Nonautonomous {
        g: Vec<Vec<Param>>,
        h: Vec<Vec<Param>>,
    },
    /// Autonomous second-order recursion.
    SecondOrder {
        a: Vec<Param>,
        b: Vec<Param>,
    },
}

fn cyclic_schedule(rows: &[Vec<Param>], arity: usize, name: &str) -> CliResult<Schedule> {
    if rows.is_empty() {
        return Err(CliError::config(format!("{name} needs at least one vector")));
    }
    let rows = rows.iter().map(|r| values(r)).collect::<CliResult<Vec<_>>>()?;
    if rows.iter().any(|r| r.len() != arity) {
        return Err(CliError::config(format!("every {name} vector needs {arity} entries")));
    }
    if rows.len() == 1 {
        return Ok(Schedule::Constant(rows.into_iter().next().expect("one row")));
    }
    Ok(Schedule::varying(move |ell| rows[ell % rows.len()].clone()))
}

impl SeedConfig {
    pub fn build(&self) -> CliResult<SeedSpec> {
        let core = |e: polygen_core::Error| CliError::config(format!("seed: {e}"));
        match self {
            SeedConfig::Affine { a, b } => SeedSpec::affine(values(a)?, values(b)?).map_err(core),
            SeedConfig::QAffine { a, b, q } => {
                let params = AffineParams {
                    a: values(a)?,
                    b: values(b)?,
                };
                q_affine_wrap(params, q.value()?).map_err(core)
            }
            SeedConfig::Nonautonomous { g, h } => {
                let arity = g.first().map_or(0, Vec::len);
                let g = cyclic_schedule(g, arity, "g")?;
                let h = cyclic_schedule(h, arity, "h")?;
                SeedSpec::nonautonomous(arity, g, h).map_err(core)
            }
            SeedConfig::SecondOrder { a, b } => {
                let (a, b) = (values(a)?, values(b)?);
                if a.len() != b.len() {
                    return Err(CliError::config("second-order a and b differ in length"));
                }
                SeedSpec::second_order(a.len(), SecondOrderParams::autonomous(a, b)).map_err(core)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderingConfig {
    Lexicographic,
    Contiguity,
    FixedMu(u64),
    Random(u64),
}

impl OrderingConfig {
    pub fn rule(self, arity: usize) -> CliResult<OrderingRule> {
        Ok(match self {
            OrderingConfig::Lexicographic => OrderingRule::Lexicographic,
            OrderingConfig::Contiguity => OrderingRule::Contiguity,
            OrderingConfig::FixedMu(mu) => OrderingRule::FixedMu(
                PermutationIndex::new(mu, arity).map_err(|e| CliError::config(e.to_string()))?,
            ),
            OrderingConfig::Random(seed) => OrderingRule::Random { seed },
        })
    }
}

/// Which generation the `initial` sets belong to.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialLevel {
    #[default]
    Bottom,
    /// Top-generation data; lift rules are derived from it.
    Top,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Exact-period residual bound.
    pub period: f64,
    pub asymptotic: f64,
    pub divergence: f64,
    /// Bound on every check of `verify`.
    pub verify: f64,
    pub max_period: Option<usize>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            period: 1e-9,
            asymptotic: 1e-3,
            divergence: 1e12,
            verify: 1e-9,
            max_period: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Added to `y_1` of every closed-form step; nonzero values make
    /// `verify` fail.
    pub perturb_closed_form: f64,
}

/// Grid of affine seeds: one list of candidate multipliers per component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub a: Vec<Vec<Param>>,
    pub b: Vec<Param>,
    /// Generation-zero initial set.
    pub initial: Vec<Param>,
    #[serde(default)]
    pub steps: Option<usize>,
    #[serde(default)]
    pub max_period: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    #[serde(default)]
    pub preset: Option<Preset>,
    #[serde(default)]
    pub seed: Option<SeedConfig>,
    #[serde(default)]
    pub depth: Option<usize>,
    #[serde(default)]
    pub ordering: Option<Vec<OrderingConfig>>,
    #[serde(default)]
    pub initial: Option<Vec<Vec<Param>>>,
    #[serde(default)]
    pub initial_level: InitialLevel,
    /// Order in which top-generation states are written out.
    #[serde(default)]
    pub presentation: Option<OrderingConfig>,
    #[serde(default)]
    pub steps: Option<usize>,
    #[serde(default)]
    pub mode: Option<SolveMode>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub steps: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// A fully resolved single-trajectory run.
#[derive(Debug, Clone)]
pub struct Run {
    pub label: String,
    pub preset: Option<Preset>,
    pub spec: GenerationSpec,
    pub initial: Vec<RootSet>,
    pub steps: usize,
    pub mode: SolveMode,
    pub presentation: OrderingRule,
    pub tolerances: Tolerances,
    /// Largest lag scanned; 0 when the run is too short for any.
    pub max_period: usize,
    pub perturb_closed_form: f64,
    pub out: PathBuf,
    pub format: Format,
}

impl RunConfig {
    pub fn from_preset(preset: Preset) -> Self {
        RunConfig {
            schema: SCHEMA_VERSION,
            preset: Some(preset),
            ..RunConfig::default()
        }
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let config: RunConfig = serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        if config.schema != SCHEMA_VERSION {
            return Err(CliError::config(format!(
                "unsupported schema {} (expected {SCHEMA_VERSION})",
                config.schema
            )));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        RunConfig::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn out_dir(&self, overrides: &Overrides) -> PathBuf {
        overrides
            .out
            .clone()
            .or_else(|| self.output.dir.clone())
            .unwrap_or_else(|| PathBuf::from("polygen-out"))
    }

    pub fn format(&self, overrides: &Overrides) -> Format {
        overrides.format.or(self.output.format).unwrap_or_default()
    }

    pub fn resolve(&self, overrides: &Overrides) -> CliResult<Run> {
        let (label, spec, initial, default_steps, default_presentation) = match self.preset {
            Some(preset) => {
                if self.seed.is_some() || self.initial.is_some() || self.ordering.is_some() || self.depth.is_some() {
                    return Err(CliError::config(
                        "a preset fixes seed, depth, ordering and initial data; remove them or drop the preset",
                    ));
                }
                let (spec, initial) = preset.build()?;
                (
                    format!("preset {preset}"),
                    spec,
                    initial,
                    preset.analysis_steps(),
                    preset.presentation(),
                )
            }
            None => {
                let (spec, initial) = self.custom_generation()?;
                ("config".to_string(), spec, initial, DEFAULT_STEPS, OrderingRule::Lexicographic)
            }
        };
        let arity = spec.seed().arity();
        let presentation = match self.presentation {
            Some(p) => p.rule(arity)?,
            None => default_presentation,
        };
        let steps = overrides.steps.or(self.steps).unwrap_or(default_steps);
        if steps + 1 < spec.seed().order() {
            return Err(CliError::config("steps shorter than the initial data"));
        }
        let mut tolerances = self.tolerances;
        if let Some(tol) = overrides.tol {
            tolerances.period = tol;
            tolerances.verify = tol;
        }
        for (name, t) in [
            ("period", tolerances.period),
            ("asymptotic", tolerances.asymptotic),
            ("divergence", tolerances.divergence),
            ("verify", tolerances.verify),
        ] {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::config(format!("tolerance {name} must be positive")));
            }
        }
        let max_period = tolerances
            .max_period
            .unwrap_or(DEFAULT_MAX_PERIOD)
            .min((steps + 1) / 3);
        if !self.verify.perturb_closed_form.is_finite() {
            return Err(CliError::config("perturb_closed_form must be finite"));
        }
        Ok(Run {
            label,
            preset: self.preset,
            spec,
            initial,
            steps,
            mode: self.mode.unwrap_or(SolveMode::Iterated),
            presentation,
            tolerances,
            max_period,
            perturb_closed_form: self.verify.perturb_closed_form,
            out: self.out_dir(overrides),
            format: self.format(overrides),
        })
    }

    fn custom_generation(&self) -> CliResult<(GenerationSpec, Vec<RootSet>)> {
        let seed = self
            .seed
            .as_ref()
            .ok_or_else(|| CliError::config("either `preset` or `seed` is required"))?
            .build()?;
        let arity = seed.arity();
        let initial = self
            .initial
            .as_ref()
            .ok_or_else(|| CliError::config("`initial` is required without a preset"))?
            .iter()
            .map(|set| values(set).map(RootSet::new))
            .collect::<CliResult<Vec<_>>>()?;
        if initial.iter().any(|s| s.len() != arity) {
            return Err(CliError::config(format!("every initial set needs {arity} entries")));
        }
        if initial.len() != seed.order() {
            return Err(CliError::config(format!(
                "seed of order {} needs {} initial sets, found {}",
                seed.order(),
                seed.order(),
                initial.len()
            )));
        }
        match self.initial_level {
            InitialLevel::Bottom => {
                let rules = self
                    .ordering
                    .as_deref()
                    .unwrap_or_default()
                    .iter()
                    .map(|o| o.rule(arity))
                    .collect::<CliResult<Vec<_>>>()?;
                if let Some(depth) = self.depth {
                    if depth != rules.len() {
                        return Err(CliError::config(format!(
                            "depth {depth} does not match {} ordering rules",
                            rules.len()
                        )));
                    }
                }
                Ok((GenerationSpec::new(seed, rules)?, initial))
            }
            InitialLevel::Top => {
                if self.ordering.is_some() {
                    return Err(CliError::config(
                        "with top-level initial data the ordering rules are derived; remove `ordering`",
                    ));
                }
                let depth = self
                    .depth
                    .ok_or_else(|| CliError::config("top-level initial data needs `depth`"))?;
                if depth == 0 {
                    return Ok((GenerationSpec::generation_zero(seed), initial));
                }
                if initial.len() != 1 {
                    return Err(CliError::config("top-level initial data needs a first-order seed"));
                }
                let (bottom, rules) = descend_initial(&initial[0], depth)?;
                Ok((GenerationSpec::new(seed, rules)?, vec![bottom]))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_parameter_form() {
        let p: Vec<Param> = serde_json::from_str(r#"[[1.0, -2.0], 0.5, {"rotation": [1, 3]}, {"rotation": [2, 5], "scale": 0.9}]"#).unwrap();
        assert_eq!(p[0], Param::Complex([1.0, -2.0]));
        assert_eq!(p[1], Param::Real(0.5));
        assert_eq!(p[2], Param::rotation(1, 3));
        assert_eq!(p[3].label(), "0.9*2/5");
        assert!((p[3].value().unwrap().norm() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn preset_config_resolves_to_the_preset() {
        let run = RunConfig::from_json(r#"{"schema": 1, "preset": "2a", "steps": 45}"#)
            .unwrap()
            .resolve(&Overrides::default())
            .unwrap();
        assert_eq!(run.steps, 45);
        assert_eq!(run.spec.depth(), 1);
        assert_eq!(run.max_period, 15);
    }

    #[test]
    fn rejects_schema_and_shape_errors() {
        assert!(RunConfig::from_json(r#"{"schema": 2}"#).is_err());
        assert!(RunConfig::from_json(r#"{"schema": 1, "colour": 3}"#).is_err());
        let bad = [
            r#"{"schema": 1}"#,
            r#"{"schema": 1, "seed": {"kind": "affine", "a": [1, 1], "b": [0, 0]}, "initial": [[1, 2], [3, 4]]}"#,
            r#"{"schema": 1, "seed": {"kind": "affine", "a": [1, 1], "b": [0, 0]}, "initial": [[1, 2]], "depth": 1}"#,
            r#"{"schema": 1, "seed": {"kind": "affine", "a": [{"rotation": [2, 4]}], "b": [0]}, "initial": [[1]]}"#,
            r#"{"schema": 1, "preset": "1a", "initial": [[1, 2]]}"#,
        ];
        for text in bad {
            let err = RunConfig::from_json(text).and_then(|c| c.resolve(&Overrides::default()).map(|_| ()));
            assert!(matches!(err, Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn top_level_initial_data_derives_the_lift_rules() {
        let text = r#"{"schema": 1,
            "seed": {"kind": "affine", "a": [{"rotation": [1, 3]}, {"rotation": [2, 5]}], "b": [1, 2]},
            "initial": [[[-1, -1], 1]], "initial_level": "top", "depth": 2}"#;
        let run = RunConfig::from_json(text).unwrap().resolve(&Overrides::default()).unwrap();
        let (preset_spec, preset_init) = Preset::Ex3a.build().unwrap();
        assert_eq!(run.spec.ordering(), preset_spec.ordering());
        assert_eq!(run.initial, preset_init);
    }

    #[test]
    fn command_line_overrides_win() {
        let config = RunConfig::from_json(r#"{"schema": 1, "preset": "1a", "steps": 10, "output": {"format": "json"}}"#).unwrap();
        let overrides = Overrides {
            steps: Some(45),
            tol: Some(1e-7),
            out: Some("elsewhere".into()),
            format: Some(Format::Svg),
        };
        let run = config.resolve(&overrides).unwrap();
        assert_eq!((run.steps, run.format), (45, Format::Svg));
        assert_eq!(run.tolerances.period, 1e-7);
        assert_eq!(run.out, PathBuf::from("elsewhere"));
    }
}
