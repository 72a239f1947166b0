use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use polygen_core::analysis::Metric;
use polygen_core::presets::Preset;

use crate::commands::detect::cmd_detect;
use crate::commands::reproduce::{cmd_reproduce, parse_preset};
use crate::commands::simulate::cmd_simulate;
use crate::commands::sweep::cmd_sweep;
use crate::commands::verify::cmd_verify;
use crate::commands::Outcome;
use crate::config::{Format, Overrides, RunConfig, Tolerances};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "polygen", version, about = "Zeros of polynomials driven by solvable coefficient recursions")]
pub struct Cli {
    /// Run configuration (JSON, `"schema": 1`).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Use a built-in example instead of a config file.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance for exact periodicity and for verification.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Number of time steps.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Set,
    Ordered,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the configured run and write the trajectory and a report.
    Simulate,
    /// Check closed form against iteration, the key identity and Vieta
    /// round trips; exit 1 on any failure.
    Verify {
        /// Verify every built-in example.
        #[arg(long)]
        all_presets: bool,
    },
    /// Write the figure data and plots of a built-in example.
    Reproduce { name: String },
    /// Classify and simulate every cell of the configured parameter grid.
    Sweep,
    /// Detect the period of a trajectory file or of the configured run.
    DetectPeriod {
        /// Trajectory CSV written by `simulate`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "set")]
        metric: MetricArg,
    },
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            steps: self.steps,
            tol: self.tol,
            out: self.out.clone(),
            format: self.format,
        }
    }

    fn load(&self) -> CliResult<Option<RunConfig>> {
        match (&self.config, &self.preset) {
            (Some(_), Some(_)) => Err(CliError::config("give either --config or --preset, not both")),
            (Some(path), None) => RunConfig::load(path).map(Some),
            (None, Some(name)) => Ok(Some(RunConfig::from_preset(parse_preset(name)?))),
            (None, None) => Ok(None),
        }
    }

    fn require(&self) -> CliResult<RunConfig> {
        self.load()?
            .ok_or_else(|| CliError::config("this command needs --config or --preset"))
    }

    fn tolerances(&self, config: Option<&RunConfig>) -> Tolerances {
        let mut t = config.map(|c| c.tolerances).unwrap_or_default();
        if let Some(tol) = self.tol {
            t.period = tol;
            t.verify = tol;
        }
        t
    }

    pub fn execute(&self) -> CliResult<Outcome> {
        let overrides = self.overrides();
        match &self.command {
            Command::Simulate => cmd_simulate(&self.require()?.resolve(&overrides)?),
            Command::Verify { all_presets: true } => {
                if self.config.is_some() || self.preset.is_some() {
                    return Err(CliError::config("--all-presets takes no --config or --preset"));
                }
                let runs = Preset::ALL
                    .iter()
                    .map(|&p| RunConfig::from_preset(p).resolve(&overrides))
                    .collect::<CliResult<Vec<_>>>()?;
                cmd_verify(&runs)
            }
            Command::Verify { all_presets: false } => cmd_verify(&[self.require()?.resolve(&overrides)?]),
            Command::Reproduce { name } => {
                let config = self.load()?;
                let out = config
                    .as_ref()
                    .map(|c| c.out_dir(&overrides))
                    .unwrap_or_else(|| self.out.clone().unwrap_or_else(|| PathBuf::from("polygen-out")));
                cmd_reproduce(name, &out, self.steps, &self.tolerances(config.as_ref()))
            }
            Command::Sweep => {
                let config = self.require()?;
                let grid = config
                    .sweep
                    .as_ref()
                    .ok_or_else(|| CliError::config("sweep needs a `sweep` block in the config"))?;
                cmd_sweep(
                    grid,
                    &self.tolerances(Some(&config)),
                    self.steps,
                    &config.out_dir(&overrides),
                    config.format(&overrides),
                )
            }
            Command::DetectPeriod { input, metric } => {
                let metric = match metric {
                    MetricArg::Set => Metric::Set,
                    MetricArg::Ordered => Metric::Ordered,
                };
                let config = self.load()?;
                let run = match (&config, input) {
                    (Some(c), None) => Some(c.resolve(&overrides)?),
                    _ => None,
                };
                let out = config
                    .as_ref()
                    .map(|c| c.out_dir(&overrides))
                    .unwrap_or_else(|| self.out.clone().unwrap_or_else(|| PathBuf::from("polygen-out")));
                cmd_detect(input.as_deref(), run.as_ref(), metric, &self.tolerances(config.as_ref()), &out)
            }
        }
    }
}
