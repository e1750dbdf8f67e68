use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use ptq_core::{Subsystem, SubsystemKind};
use serde::{Deserialize, Serialize};

use crate::error::ExperimentError;
use crate::report::sig17;

pub const DEFAULT_TOLERANCE: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum Scenario {
    /// PT ⊗ PT, second subsystem evolves.
    PtPtRight,
    /// PT ⊗ PT, first subsystem evolves.
    PtPtLeft,
    /// PT ⊗ σx, PT subsystem evolves.
    PtSqmEvolvePt,
    /// PT ⊗ σx, σx subsystem evolves.
    PtSqmEvolveSqm,
    /// Broken-phase PT ⊗ σx, PT subsystem evolves non-unitarily.
    BrokenDemo,
}

impl Scenario {
    pub fn evolving_side(self) -> Subsystem {
        match self {
            Scenario::PtPtRight | Scenario::PtSqmEvolveSqm => Subsystem::Second,
            Scenario::PtPtLeft | Scenario::PtSqmEvolvePt | Scenario::BrokenDemo => Subsystem::First,
        }
    }

    /// Whether the second subsystem is PT-symmetric (and needs `gamma2`/`zeta2`).
    pub fn uses_second_params(self) -> bool {
        matches!(self, Scenario::PtPtRight | Scenario::PtPtLeft)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::PtPtRight => "pt_pt_right",
            Scenario::PtPtLeft => "pt_pt_left",
            Scenario::PtSqmEvolvePt => "pt_sqm_evolve_pt",
            Scenario::PtSqmEvolveSqm => "pt_sqm_evolve_sqm",
            Scenario::BrokenDemo => "broken_demo",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum Axis {
    Gamma1,
    Zeta1,
    Gamma2,
    Zeta2,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Gamma1 => "gamma1",
            Axis::Zeta1 => "zeta1",
            Axis::Gamma2 => "gamma2",
            Axis::Zeta2 => "zeta2",
        }
    }
}

/// Coefficients `c11r,c11i,c12r,c12i,c21r,c21i,c22r,c22i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "CoeffRepr")]
pub struct CoeffList(pub [f64; 8]);

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    List([f64; 8]),
    Text(String),
}

impl From<CoeffRepr> for CoeffList {
    fn from(r: CoeffRepr) -> Self {
        match r {
            CoeffRepr::List(v) => CoeffList(v),
            // malformed text is caught again by `validate`
            CoeffRepr::Text(s) => s.parse().unwrap_or(CoeffList([f64::NAN; 8])),
        }
    }
}

impl FromStr for CoeffList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let values = s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        let arr: [f64; 8] = values.try_into().map_err(|v: Vec<f64>| {
            format!("expected 8 comma-separated numbers, got {}", v.len())
        })?;
        Ok(CoeffList(arr))
    }
}

impl CoeffList {
    pub fn to_matrix(&self) -> ptq_core::Mat2 {
        let v = &self.0;
        let c = |i: usize| ptq_core::Complex::new(v[2 * i], v[2 * i + 1]);
        ptq_core::Mat2::new(c(0), c(1), c(2), c(3))
    }

    pub fn from_matrix(m: &ptq_core::Mat2) -> Self {
        let mut out = [0.0; 8];
        for (k, z) in m.rows().iter().flatten().enumerate() {
            out[2 * k] = z.re;
            out[2 * k + 1] = z.im;
        }
        CoeffList(out)
    }
}

/// Flags shared by `run` and `sweep`; also the schema of the JSON config file
/// (keys are the flag names). Flags override file values.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunArgs {
    /// JSON config file with the same keys as the flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub scenario: Option<Scenario>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub zeta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub zeta2: Option<f64>,
    /// c11r,c11i,c12r,c12i,c21r,c21i,c22r,c22i
    #[arg(long, allow_hyphen_values = true, conflicts_with = "seed")]
    pub coeffs: Option<CoeffList>,
    /// Seed for random Gaussian coefficients.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    pub fn from_file(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Fills unset fields from `base`. `coeffs` and `seed` are one choice:
    /// setting either here discards both from `base`.
    pub fn overriding(self, base: RunArgs) -> RunArgs {
        let (coeffs, seed) = if self.coeffs.is_some() || self.seed.is_some() {
            (self.coeffs, self.seed)
        } else {
            (base.coeffs, base.seed)
        };
        RunArgs {
            config: self.config,
            scenario: self.scenario.or(base.scenario),
            gamma1: self.gamma1.or(base.gamma1),
            zeta1: self.zeta1.or(base.zeta1),
            gamma2: self.gamma2.or(base.gamma2),
            zeta2: self.zeta2.or(base.zeta2),
            coeffs,
            seed,
            t_start: self.t_start.or(base.t_start),
            t_end: self.t_end.or(base.t_end),
            steps: self.steps.or(base.steps),
            tolerance: self.tolerance.or(base.tolerance),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
        }
    }

    /// Merges the config file (if any) and builds a validated config.
    pub fn resolve(self) -> Result<ScenarioConfig, ExperimentError> {
        let merged = match &self.config {
            Some(path) => {
                let file = RunArgs::from_file(path)?;
                self.overriding(file)
            }
            None => self,
        };
        merged.into_config()
    }

    fn into_config(self) -> Result<ScenarioConfig, ExperimentError> {
        let missing = |name: &str| ExperimentError::Config(format!("missing --{name}"));
        let config = ScenarioConfig {
            scenario: self.scenario.ok_or_else(|| missing("scenario"))?,
            gamma1: self.gamma1.ok_or_else(|| missing("gamma1"))?,
            zeta1: self.zeta1.ok_or_else(|| missing("zeta1"))?,
            gamma2: self.gamma2,
            zeta2: self.zeta2,
            coeffs: self.coeffs,
            seed: self.seed,
            t_start: self.t_start.ok_or_else(|| missing("t-start"))?,
            t_end: self.t_end.ok_or_else(|| missing("t-end"))?,
            steps: self.steps.ok_or_else(|| missing("steps"))?,
            tolerance: self.tolerance.unwrap_or(DEFAULT_TOLERANCE),
            format: self.format.unwrap_or_default(),
        };
        config.validate()?;
        Ok(config)
    }
}

/// A fully specified scenario run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(with = "sig17")]
    pub gamma1: f64,
    #[serde(with = "sig17")]
    pub zeta1: f64,
    #[serde(with = "sig17::option")]
    pub gamma2: Option<f64>,
    #[serde(with = "sig17::option")]
    pub zeta2: Option<f64>,
    #[serde(with = "sig17::coeffs")]
    pub coeffs: Option<CoeffList>,
    pub seed: Option<u64>,
    #[serde(with = "sig17")]
    pub t_start: f64,
    #[serde(with = "sig17")]
    pub t_end: f64,
    pub steps: usize,
    #[serde(with = "sig17")]
    pub tolerance: f64,
    pub format: OutputFormat,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario, gamma1: f64, zeta1: f64) -> Self {
        Self {
            scenario,
            gamma1,
            zeta1,
            gamma2: None,
            zeta2: None,
            coeffs: None,
            seed: None,
            t_start: 0.0,
            t_end: 1.0,
            steps: 2,
            tolerance: DEFAULT_TOLERANCE,
            format: OutputFormat::Csv,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        for (name, v) in [
            ("gamma1", Some(self.gamma1)),
            ("zeta1", Some(self.zeta1)),
            ("gamma2", self.gamma2),
            ("zeta2", self.zeta2),
            ("t-start", Some(self.t_start)),
            ("t-end", Some(self.t_end)),
            ("tolerance", Some(self.tolerance)),
        ] {
            if v.is_some_and(|x| !x.is_finite()) {
                return bad(format!("{name} must be finite"));
            }
        }
        if self.t_end <= self.t_start {
            return bad("t-end must exceed t-start".into());
        }
        if self.steps < 2 {
            return bad("steps must be at least 2".into());
        }
        if self.tolerance <= 0.0 {
            return bad("tolerance must be positive".into());
        }
        match (&self.coeffs, self.seed) {
            (Some(_), Some(_)) => return bad("give either --coeffs or --seed, not both".into()),
            (None, None) => return bad("one of --coeffs or --seed is required".into()),
            (Some(c), None) if c.0.iter().any(|x| !x.is_finite()) => {
                return bad("coeffs must be 8 finite numbers".into())
            }
            _ => {}
        }
        self.left_kind()?;
        self.right_kind()?;
        Ok(())
    }

    pub fn params1(&self) -> Result<ptq_core::PtParams, ExperimentError> {
        Ok(ptq_core::PtParams::new(self.gamma1, self.zeta1)?)
    }

    pub fn params2(&self) -> Result<ptq_core::PtParams, ExperimentError> {
        match (self.gamma2, self.zeta2) {
            (Some(g), Some(z)) => Ok(ptq_core::PtParams::new(g, z)?),
            _ => Err(ExperimentError::Config(format!(
                "scenario {} needs --gamma2 and --zeta2",
                self.scenario
            ))),
        }
    }

    pub fn left_kind(&self) -> Result<SubsystemKind, ExperimentError> {
        Ok(SubsystemKind::Pt(self.params1()?))
    }

    pub fn right_kind(&self) -> Result<SubsystemKind, ExperimentError> {
        if self.scenario.uses_second_params() {
            Ok(SubsystemKind::Pt(self.params2()?))
        } else {
            Ok(SubsystemKind::Standard)
        }
    }

    pub fn set_axis(&mut self, axis: Axis, value: f64) {
        match axis {
            Axis::Gamma1 => self.gamma1 = value,
            Axis::Zeta1 => self.zeta1 = value,
            Axis::Gamma2 => self.gamma2 = Some(value),
            Axis::Zeta2 => self.zeta2 = Some(value),
        }
    }
}
