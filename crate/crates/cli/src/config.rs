//! Experiment configuration: a single JSON document describing one run, or
//! `{"runs": [...]}` for a batch executed in parallel.

use std::collections::BTreeSet;

use num_complex::Complex64;
use opuc_core::{CoefficientSequence, DecaySpec, PointMassSpec};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Theorem1,
    Theorem2,
    Theorem3,
    Corollary1,
    Appendix,
    OracleCheck,
    Bands,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Theorem1 => "theorem1",
            Scenario::Theorem2 => "theorem2",
            Scenario::Theorem3 => "theorem3",
            Scenario::Corollary1 => "corollary1",
            Scenario::Appendix => "appendix",
            Scenario::OracleCheck => "oracle_check",
            Scenario::Bands => "bands",
        }
    }
}

/// A complex number written as `[re, im]`, or a bare real.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Cx {
    Pair([f64; 2]),
    Real(f64),
}

impl Cx {
    pub fn value(self) -> Complex64 {
        match self {
            Cx::Pair([re, im]) => Complex64::new(re, im),
            Cx::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum DecayConfig {
    Geometric { ratio: f64, amplitude: Cx },
    PowerLaw { exponent: f64, amplitude: Cx },
    Harmonic { amplitude: Cx },
}

impl DecayConfig {
    pub fn spec(&self) -> DecaySpec {
        match *self {
            DecayConfig::Geometric { ratio, amplitude } => {
                DecaySpec::geometric(ratio, amplitude.value())
            }
            DecayConfig::PowerLaw {
                exponent,
                amplitude,
            } => DecaySpec::power_law(exponent, amplitude.value()),
            DecayConfig::Harmonic { amplitude } => DecaySpec::harmonic(amplitude.value()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceConfig {
    Constant {
        limit: Cx,
    },
    ConstantPlusDecay {
        limit: Cx,
        decay: DecayConfig,
    },
    Periodic {
        betas: Vec<Cx>,
    },
    PeriodicPlusDecay {
        betas: Vec<Cx>,
        decay: DecayConfig,
    },
    /// `αₙ = L e^{−inθ}` with `θ = twist_angle`.
    Twisted {
        limit: Cx,
        twist_angle: f64,
    },
    Table {
        values: Vec<Cx>,
    },
}

impl SequenceConfig {
    pub fn build(&self) -> CliResult<CoefficientSequence> {
        let seq = match self {
            SequenceConfig::Constant { limit } => CoefficientSequence::constant(limit.value()),
            SequenceConfig::ConstantPlusDecay { limit, decay } => {
                CoefficientSequence::constant_plus_decay(limit.value(), decay.spec())
            }
            SequenceConfig::Periodic { betas } => CoefficientSequence::periodic(values(betas)),
            SequenceConfig::PeriodicPlusDecay { betas, decay } => {
                CoefficientSequence::periodic_plus_decay(values(betas), decay.spec())
            }
            SequenceConfig::Twisted { limit, twist_angle } => CoefficientSequence::twisted(
                limit.value(),
                Complex64::from_polar(1.0, *twist_angle),
            ),
            SequenceConfig::Table { values: v } => CoefficientSequence::table(values(v)),
        };
        Ok(seq?)
    }
}

fn values(v: &[Cx]) -> Vec<Complex64> {
    v.iter().map(|c| c.value()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    pub omega: f64,
    pub gamma: f64,
}

impl PointConfig {
    pub fn spec(&self) -> CliResult<PointMassSpec> {
        Ok(PointMassSpec::new(self.omega, self.gamma)?)
    }
}

/// Off-diagonal Jacobi parameters approaching 1.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OffDiagonalConfig {
    /// `aₙ ≡ value`.
    Constant { value: f64 },
    /// `aₙ = 1 − (n+1)^{−exponent}`.
    PowerApproach { exponent: f64 },
    /// `aₙ = 1 − ratioⁿ`.
    GeometricApproach { ratio: f64 },
}

impl OffDiagonalConfig {
    pub fn rule(self) -> impl Fn(usize) -> f64 + Send + Sync + 'static {
        move |n| match self {
            OffDiagonalConfig::Constant { value } => value,
            OffDiagonalConfig::PowerApproach { exponent } => 1.0 - (n as f64 + 1.0).powf(-exponent),
            OffDiagonalConfig::GeometricApproach { ratio } => 1.0 - ratio.powi(n as i32),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacobiConfig {
    pub off_diagonal: OffDiagonalConfig,
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableFormat {
    #[default]
    Csv,
    None,
}

/// One experiment.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub scenario: Scenario,
    #[serde(default)]
    pub sequence: Option<SequenceConfig>,
    /// Point masses, added one after another.
    #[serde(default)]
    pub points: Vec<PointConfig>,
    #[serde(default)]
    pub n_max: Option<usize>,
    #[serde(default)]
    pub checkpoints: Vec<usize>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Expected limit of the rate ratio in `corollary1`.
    #[serde(default)]
    pub expected: Option<f64>,
    #[serde(default)]
    pub jacobi: Option<JacobiConfig>,
    /// Sample count for `bands`.
    #[serde(default)]
    pub grid: Option<usize>,
    /// Band edges to compare against in `bands`.
    #[serde(default)]
    pub expected_edges: Vec<f64>,
    #[serde(default)]
    pub format: TableFormat,
}

impl ExperimentConfig {
    pub fn name(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| self.scenario.as_str().to_string())
    }

    pub fn default_tolerance(&self) -> f64 {
        match self.scenario {
            Scenario::Theorem1 => 1e-6,
            Scenario::Theorem2 => 1e-5,
            Scenario::Theorem3 => 1e-4,
            Scenario::Corollary1 => 0.1,
            Scenario::Appendix => 1e-4,
            Scenario::OracleCheck => 1e-8,
            Scenario::Bands => 1e-8,
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or_else(|| self.default_tolerance())
    }

    pub fn n_max(&self) -> CliResult<usize> {
        self.n_max
            .ok_or_else(|| CliError::Config(format!("{}: n_max is required", self.name())))
    }

    pub fn sequence(&self) -> CliResult<&SequenceConfig> {
        self.sequence
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("{}: sequence is required", self.name())))
    }

    /// Checkpoints, defaulting to `[n_max]`.
    pub fn checkpoints_or(&self, n_max: usize) -> Vec<usize> {
        if self.checkpoints.is_empty() {
            vec![n_max]
        } else {
            self.checkpoints.clone()
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        let name = self.name();
        let bad = |msg: String| Err(CliError::Config(format!("{name}: {msg}")));
        if name.is_empty() || name.contains(['/', '\\']) || name == "." || name == ".." {
            return bad(format!("run name {name:?} cannot be used as a directory"));
        }
        if let Some(0) = self.n_max {
            return bad("n_max must be positive".into());
        }
        if self.checkpoints.windows(2).any(|w| w[1] <= w[0]) {
            return bad("checkpoints must be strictly ascending".into());
        }
        if let (Some(n), Some(last)) = (self.n_max, self.checkpoints.last()) {
            if *last > n {
                return bad(format!("checkpoint {last} exceeds n_max {n}"));
            }
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("tolerance {t} must be positive"));
            }
        }
        if let Some(0) = self.grid {
            return bad("grid must be positive".into());
        }
        let needs_sequence = !matches!(self.scenario, Scenario::Appendix | Scenario::OracleCheck);
        if needs_sequence && self.sequence.is_none() {
            return bad("sequence is required".into());
        }
        let needs_horizon = !matches!(self.scenario, Scenario::Bands);
        if needs_horizon && self.n_max.is_none() {
            return bad("n_max is required".into());
        }
        let needs_point = matches!(
            self.scenario,
            Scenario::Theorem1
                | Scenario::Theorem2
                | Scenario::Theorem3
                | Scenario::Corollary1
                | Scenario::OracleCheck
        );
        if needs_point && self.points.is_empty() {
            return bad("at least one point mass is required".into());
        }
        if self.scenario != Scenario::Theorem1 && self.points.len() > 1 {
            return bad("only theorem1 composes several point masses".into());
        }
        if self.scenario == Scenario::Appendix && self.jacobi.is_none() {
            return bad("jacobi parameters are required".into());
        }
        Ok(())
    }
}

/// Parses either a single experiment or `{"runs": [...]}`.
pub fn parse(text: &str) -> CliResult<Vec<ExperimentConfig>> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Batch {
        runs: Vec<ExperimentConfig>,
    }
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let runs = if value.get("runs").is_some() {
        serde_json::from_value::<Batch>(value)
            .map_err(|e| CliError::Config(e.to_string()))?
            .runs
    } else {
        vec![serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))?]
    };
    if runs.is_empty() {
        return Err(CliError::Config("no runs given".into()));
    }
    let mut names = BTreeSet::new();
    for run in &runs {
        run.validate()?;
        if !names.insert(run.name()) {
            return Err(CliError::Config(format!(
                "duplicate run name {:?}",
                run.name()
            )));
        }
    }
    Ok(runs)
}
