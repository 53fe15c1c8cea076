//! Experiment configuration: strict JSON, validated before anything runs.

use std::path::PathBuf;

use msrom_core::bounds::TauMode;
use msrom_core::problems::{
    example1_prescription, example2_prescription, Prescription, SweepParams,
};
use msrom_core::solvers::SolverOptions;
use nalgebra::DMatrix;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{field}`: {reason}")]
    Validation { field: &'static str, reason: String },
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Example1,
    Example2,
    Prescribed,
    RandomSweep,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Example1 => "example1",
            Mode::Example2 => "example2",
            Mode::Prescribed => "prescribed",
            Mode::RandomSweep => "random-sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TauModeKey {
    Known,
    Practitioner,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolverKeys {
    max_iterations: Option<usize>,
    gradient_tolerance: Option<f64>,
    dykstra_iterations: Option<usize>,
    dykstra_tolerance: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Mode,
    tau: Option<f64>,
    n: Option<usize>,
    m: Option<usize>,
    #[serde(rename = "N")]
    ambient_dim: Option<usize>,
    seed: Option<u64>,
    sigma: Option<Vec<f64>>,
    tau_list: Option<Vec<f64>>,
    widths: Option<Vec<f64>>,
    rotation: Option<Vec<Vec<f64>>>,
    repetitions: Option<usize>,
    n_min: Option<usize>,
    n_max: Option<usize>,
    sigma_floor: Option<f64>,
    m_equals_n: Option<bool>,
    width_factor: Option<f64>,
    solver: Option<SolverKeys>,
    output_path: Option<PathBuf>,
    tau_mode: Option<TauModeKey>,
}

/// What to generate.
#[derive(Debug, Clone)]
pub enum Plan {
    /// A single instance: one of the worked examples or a prescribed one.
    Single {
        prescription: Prescription,
        tau: Option<f64>,
    },
    Sweep {
        params: SweepParams,
        repetitions: usize,
    },
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub seed: u64,
    pub plan: Plan,
    pub solver: SolverOptions,
    pub output_path: Option<PathBuf>,
    pub tau_mode: TauMode,
}

impl ExperimentConfig {
    pub fn rows(&self) -> usize {
        match &self.plan {
            Plan::Single { .. } => 1,
            Plan::Sweep { repetitions, .. } => *repetitions,
        }
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    raw.validate()
}

impl RawConfig {
    fn validate(self) -> Result<ExperimentConfig, ConfigError> {
        self.reject_unused()?;
        let seed = self.seed.unwrap_or(0);
        let solver = self.solver_options()?;
        let tau_mode = match self.tau_mode {
            None | Some(TauModeKey::Known) => TauMode::Known,
            Some(TauModeKey::Practitioner) => TauMode::Practitioner,
        };

        let plan = match self.mode {
            Mode::Example1 | Mode::Example2 => {
                let tau = self.tau.ok_or_else(|| invalid("tau", "required"))?;
                let n = self.n.ok_or_else(|| invalid("n", "required"))?;
                let m = self.m.unwrap_or(n);
                let ambient = self.ambient_dim.unwrap_or(2 * (n + m));
                let built = if self.mode == Mode::Example1 {
                    example1_prescription(tau, n, m, ambient, seed)
                } else {
                    example2_prescription(tau, n, m, ambient, seed)
                };
                let prescription = built.map_err(|e| invalid(field_of(&e), e.to_string()))?;
                Plan::Single {
                    prescription,
                    tau: Some(tau),
                }
            }
            Mode::Prescribed => {
                let sigma = self
                    .sigma
                    .clone()
                    .ok_or_else(|| invalid("sigma", "required"))?;
                let n = sigma.len();
                if let Some(given) = self.n {
                    if given != n {
                        return Err(invalid(
                            "n",
                            format!("{given} disagrees with {n} singular values"),
                        ));
                    }
                }
                let distances = self
                    .tau_list
                    .clone()
                    .ok_or_else(|| invalid("tau_list", "required"))?;
                let widths = self.widths.clone().unwrap_or_else(|| distances.clone());
                let rotation = match &self.rotation {
                    None => DMatrix::identity(n, n),
                    Some(rows) => {
                        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                            return Err(invalid(
                                "rotation",
                                format!("expected a {n} x {n} matrix"),
                            ));
                        }
                        DMatrix::from_fn(n, n, |i, j| rows[i][j])
                    }
                };
                let m = self.m.unwrap_or(n);
                let prescription = Prescription {
                    test_dim: m,
                    ambient_dim: self.ambient_dim.unwrap_or(2 * (n + m)),
                    sigma,
                    rotation,
                    distances,
                    widths,
                    seed,
                };
                prescription.validate().map_err(|e| {
                    let field = match field_of(&e) {
                        "tau" => "tau_list",
                        other => other,
                    };
                    invalid(field, e.to_string())
                })?;
                Plan::Single {
                    prescription,
                    tau: None,
                }
            }
            Mode::RandomSweep => {
                let defaults = SweepParams::default();
                let params = SweepParams {
                    n_min: self.n_min.unwrap_or(defaults.n_min),
                    n_max: self.n_max.unwrap_or(defaults.n_max),
                    square: self.m_equals_n.unwrap_or(defaults.square),
                    sigma_floor: self.sigma_floor.unwrap_or(defaults.sigma_floor),
                    width_factor: self.width_factor.unwrap_or(defaults.width_factor),
                    ambient_factor: defaults.ambient_factor,
                };
                params
                    .validate()
                    .map_err(|e| invalid(field_of(&e), e.to_string()))?;
                let repetitions = self.repetitions.unwrap_or(1);
                if repetitions == 0 {
                    return Err(invalid("repetitions", "must be at least 1"));
                }
                Plan::Sweep {
                    params,
                    repetitions,
                }
            }
        };

        Ok(ExperimentConfig {
            mode: self.mode,
            seed,
            plan,
            solver,
            output_path: self.output_path,
            tau_mode,
        })
    }

    fn solver_options(&self) -> Result<SolverOptions, ConfigError> {
        let mut opts = SolverOptions::default();
        if let Some(s) = &self.solver {
            if let Some(v) = s.max_iterations {
                opts.max_iterations = v;
            }
            if let Some(v) = s.gradient_tolerance {
                opts.gradient_tolerance = v;
            }
            if let Some(v) = s.dykstra_iterations {
                opts.dykstra_iterations = v;
            }
            if let Some(v) = s.dykstra_tolerance {
                opts.dykstra_tolerance = v;
            }
        }
        opts.validate()
            .map_err(|e| invalid("solver", e.to_string()))?;
        Ok(opts)
    }

    /// Keys that the selected mode would silently ignore are errors.
    fn reject_unused(&self) -> Result<(), ConfigError> {
        let present = [
            ("tau", self.tau.is_some()),
            ("n", self.n.is_some()),
            ("m", self.m.is_some()),
            ("N", self.ambient_dim.is_some()),
            ("sigma", self.sigma.is_some()),
            ("tau_list", self.tau_list.is_some()),
            ("widths", self.widths.is_some()),
            ("rotation", self.rotation.is_some()),
            ("repetitions", self.repetitions.is_some()),
            ("n_min", self.n_min.is_some()),
            ("n_max", self.n_max.is_some()),
            ("sigma_floor", self.sigma_floor.is_some()),
            ("m_equals_n", self.m_equals_n.is_some()),
            ("width_factor", self.width_factor.is_some()),
        ];
        let allowed: &[&str] = match self.mode {
            Mode::Example1 | Mode::Example2 => &["tau", "n", "m", "N"],
            Mode::Prescribed => &["n", "m", "N", "sigma", "tau_list", "widths", "rotation"],
            Mode::RandomSweep => &[
                "repetitions",
                "n_min",
                "n_max",
                "sigma_floor",
                "m_equals_n",
                "width_factor",
            ],
        };
        for (key, set) in present {
            if set && !allowed.contains(&key) {
                return Err(invalid(
                    key,
                    format!("not used by mode {}", self.mode.label()),
                ));
            }
        }
        Ok(())
    }
}

fn field_of(e: &msrom_core::Error) -> &'static str {
    use msrom_core::Error as E;
    match e {
        E::InvalidSpectrum(_) => "sigma",
        E::InvalidDistances(_) => "tau",
        E::InfeasibleWidths(_) => "widths",
        E::InvalidRotation { .. } => "rotation",
        E::DimensionTooSmall(_) | E::DimensionMismatch { .. } | E::LengthMismatch { .. } => "n",
        E::HadamardUnavailable(_) => "n",
        _ => "config",
    }
}
