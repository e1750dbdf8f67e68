//! Run reports and their CSV / JSON encodings.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), which
//! round-trips `f64` exactly. CSV output is
//!
//! ```text
//! t,omega_plus,omega_minus,entropy_bits
//! <one row per time step>
//! # e_initial=<v> max_deviation=<v> pass=<bool>
//! ```
//!
//! with an extra `# non_unitary=true norm_drift=<v>` line before the summary
//! for broken-phase runs.

use std::fmt::Write as _;

use ptq_core::{EntropySample, PhaseClass};
use serde::{Deserialize, Serialize};

use crate::config::{Axis, OutputFormat, ScenarioConfig};
use crate::error::ExperimentError;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serde helpers writing floats with [`fmt_f64`].
pub mod sig17 {
    use serde::de::Deserialize;
    use serde::ser::Error as _;
    use serde::{Deserializer, Serializer};
    use serde_json::value::RawValue;

    use super::fmt_f64;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if !v.is_finite() {
            return Err(S::Error::custom("non-finite float"));
        }
        let raw = RawValue::from_string(fmt_f64(*v)).map_err(S::Error::custom)?;
        serde::Serialize::serialize(&raw, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        f64::deserialize(d)
    }

    struct Wrap<'a>(&'a f64);

    impl serde::Serialize for Wrap<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            serialize(self.0, s)
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(x) => s.serialize_some(&Wrap(x)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            Option::<f64>::deserialize(d)
        }
    }

    pub mod coeffs {
        use super::*;
        use crate::config::CoeffList;
        use serde::ser::SerializeSeq;

        struct Seq<'a>(&'a [f64; 8]);

        impl serde::Serialize for Seq<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(8))?;
                for x in self.0 {
                    seq.serialize_element(&Wrap(x))?;
                }
                seq.end()
            }
        }

        pub fn serialize<S: Serializer>(v: &Option<CoeffList>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(c) => s.serialize_some(&Seq(&c.0)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<CoeffList>, D::Error> {
            Option::<CoeffList>::deserialize(d)
        }

        pub mod required {
            use super::*;
            use serde::Serialize as _;

            pub fn serialize<S: Serializer>(v: &CoeffList, s: S) -> Result<S::Ok, S::Error> {
                Seq(&v.0).serialize(s)
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CoeffList, D::Error> {
                CoeffList::deserialize(d)
            }
        }
    }
}

/// Serializable mirror of [`EntropySample`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    #[serde(with = "sig17")]
    pub t: f64,
    #[serde(with = "sig17")]
    pub omega_plus: f64,
    #[serde(with = "sig17")]
    pub omega_minus: f64,
    #[serde(with = "sig17")]
    pub entropy_bits: f64,
}

impl From<EntropySample> for SampleRow {
    fn from(s: EntropySample) -> Self {
        Self {
            t: s.t,
            omega_plus: s.omega_plus,
            omega_minus: s.omega_minus,
            entropy_bits: s.entropy_bits,
        }
    }
}

/// Phase of one subsystem; the σx subsystem reports `standard`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseInfo {
    Unbroken,
    ExceptionalPoint,
    Broken,
    Standard,
}

impl From<Option<PhaseClass>> for PhaseInfo {
    fn from(p: Option<PhaseClass>) -> Self {
        match p {
            Some(PhaseClass::Unbroken) => PhaseInfo::Unbroken,
            Some(PhaseClass::ExceptionalPoint) => PhaseInfo::ExceptionalPoint,
            Some(PhaseClass::Broken) => PhaseInfo::Broken,
            None => PhaseInfo::Standard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ScenarioConfig,
    /// Unit-norm coefficients actually used (explicit or drawn from the seed).
    #[serde(with = "sig17::coeffs::required")]
    pub coefficients: crate::config::CoeffList,
    pub samples: Vec<SampleRow>,
    #[serde(with = "sig17")]
    pub e_initial: f64,
    /// `max |E(ψ_t) − E(ψ_0)|` over the grid and both reduced densities.
    #[serde(with = "sig17")]
    pub max_deviation: f64,
    pub pass: bool,
    pub phase_info: [PhaseInfo; 2],
    pub non_unitary: bool,
    /// `max |‖C(t)‖ − 1|` over `0 ≤ t ≤ 1/|Im λ|` for broken-phase runs.
    #[serde(with = "sig17::option")]
    pub norm_drift: Option<f64>,
    /// Largest entry-wise gap between traced and closed-form reduced densities.
    #[serde(with = "sig17")]
    pub max_closed_form_gap: f64,
    /// Largest of `|α + δ − 1|` and `|γ − β*|` seen.
    #[serde(with = "sig17")]
    pub max_identity_residual: f64,
}

impl RunReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,omega_plus,omega_minus,entropy_bits\n");
        for s in &self.samples {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(s.t),
                fmt_f64(s.omega_plus),
                fmt_f64(s.omega_minus),
                fmt_f64(s.entropy_bits)
            );
        }
        if let Some(drift) = self.norm_drift {
            let _ = writeln!(
                out,
                "# non_unitary={} norm_drift={}",
                self.non_unitary,
                fmt_f64(drift)
            );
        }
        let _ = writeln!(
            out,
            "# e_initial={} max_deviation={} pass={}",
            fmt_f64(self.e_initial),
            fmt_f64(self.max_deviation),
            self.pass
        );
        out
    }

    pub fn to_json(&self) -> Result<String, ExperimentError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn emit(&self, format: OutputFormat) -> Result<Vec<u8>, ExperimentError> {
        Ok(match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json()?,
        }
        .into_bytes())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SweepPoint {
    Ok {
        #[serde(with = "sig17")]
        value: f64,
        report: Box<RunReport>,
    },
    PhaseSkipped {
        #[serde(with = "sig17")]
        value: f64,
        phase: PhaseInfo,
    },
}

impl SweepPoint {
    pub fn value(&self) -> f64 {
        match self {
            SweepPoint::Ok { value, .. } | SweepPoint::PhaseSkipped { value, .. } => *value,
        }
    }

    pub fn report(&self) -> Option<&RunReport> {
        match self {
            SweepPoint::Ok { report, .. } => Some(report),
            SweepPoint::PhaseSkipped { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub axis: Axis,
    pub points: Vec<SweepPoint>,
    /// Largest `|ω₊(point) − ω₊(first point)|` over matching time steps.
    #[serde(with = "sig17")]
    pub omega_spread: f64,
    pub pass: bool,
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let axis = self.axis.as_str();
        for p in &self.points {
            match p {
                SweepPoint::Ok { value, report } => {
                    let _ = writeln!(
                        out,
                        "# sweep axis={axis} value={} status=ok",
                        fmt_f64(*value)
                    );
                    out.push_str(&report.to_csv());
                }
                SweepPoint::PhaseSkipped { value, phase } => {
                    let phase = serde_json::to_value(phase)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_owned))
                        .unwrap_or_default();
                    let _ = writeln!(
                        out,
                        "# sweep axis={axis} value={} status=phase_skipped phase={phase}",
                        fmt_f64(*value)
                    );
                }
            }
        }
        let _ = writeln!(
            out,
            "# sweep omega_spread={} pass={}",
            fmt_f64(self.omega_spread),
            self.pass
        );
        out
    }

    pub fn emit(&self, format: OutputFormat) -> Result<Vec<u8>, ExperimentError> {
        Ok(match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                s
            }
        }
        .into_bytes())
    }
}
