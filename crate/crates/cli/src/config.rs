//! Run configuration: a key-value text file plus flag overrides, flags
//! winning. Every field is validated before any computation starts so a
//! bad config fails fast with the offending field name.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use qflow::error::Error;
use qflow::fluid::InitialForm;
use qflow::momentum::TruncationPolicy;
use qflow::noise::{NoiseModel, Normalization, ScalingParams};
use qflow::qft::AqftConfig;

/// One requested evolution time. Labels `pi/2^k` carry the dyadic exponent
/// used by the analytic retention window; raw reals bypass it.
#[derive(Clone, Debug, PartialEq)]
pub struct TimePoint {
    pub label: String,
    pub seconds: f64,
    pub exponent: Option<i32>,
}

impl TimePoint {
    pub fn parse(text: &str) -> Result<Self, String> {
        let trimmed = text.trim();
        if trimmed == "0" {
            return Ok(TimePoint {
                label: "0".into(),
                seconds: 0.0,
                exponent: None,
            });
        }
        if trimmed == "pi" {
            return Ok(TimePoint {
                label: "pi".into(),
                seconds: PI,
                exponent: Some(0),
            });
        }
        if let Some(denom) = trimmed.strip_prefix("pi/") {
            let d: u32 = denom
                .parse()
                .map_err(|_| format!("cannot parse time label `{trimmed}`"))?;
            if d == 0 {
                return Err(format!("time label `{trimmed}` divides by zero"));
            }
            let exponent = if d.is_power_of_two() {
                Some(d.trailing_zeros() as i32)
            } else {
                None
            };
            return Ok(TimePoint {
                label: format!("pi{d}"),
                seconds: PI / d as f64,
                exponent,
            });
        }
        let seconds: f64 = trimmed
            .parse()
            .map_err(|_| format!("cannot parse time `{trimmed}` (use 0, pi/<int>, or a real)"))?;
        if !seconds.is_finite() || seconds < 0.0 {
            return Err(format!("time `{trimmed}` must be finite and non-negative"));
        }
        Ok(TimePoint {
            label: trimmed.replace('.', "p").replace('-', "m"),
            seconds,
            exponent: None,
        })
    }
}

/// Threshold for the transform truncation: a distance bound or the exact
/// transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AqftThreshold {
    Exact,
    Distance(usize),
}

impl AqftThreshold {
    pub fn as_b(&self) -> usize {
        match self {
            AqftThreshold::Exact => usize::MAX,
            AqftThreshold::Distance(b) => *b,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub nx_qubits: usize,
    pub ny_qubits: usize,
    pub times: Vec<TimePoint>,
    pub initial_form: InitialForm,
    pub aqft_b: AqftThreshold,
    pub epsilon_over_pi: f64,
    pub time_exponent_p: i32,
    pub compensate: bool,
    pub periodic_removal: bool,
    pub fidelity_1q: f64,
    pub fidelity_2q: f64,
    pub trajectories: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub empirical_max_n: usize,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub normalization: Normalization,
    pub dump_circuit: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            nx_qubits: 5,
            ny_qubits: 5,
            times: vec![
                TimePoint::parse("0").unwrap(),
                TimePoint::parse("pi/4").unwrap(),
                TimePoint::parse("pi/2").unwrap(),
            ],
            initial_form: InitialForm::GaussianAmplitude,
            aqft_b: AqftThreshold::Distance(2),
            epsilon_over_pi: 0.125,
            time_exponent_p: 1,
            compensate: true,
            periodic_removal: true,
            fidelity_1q: 0.9997,
            fidelity_2q: 0.9967,
            trajectories: 0,
            n_min: 4,
            n_max: 64,
            empirical_max_n: 12,
            output_dir: PathBuf::from("out"),
            seed: 0,
            normalization: Normalization::Bounded,
            dump_circuit: false,
        }
    }
}

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidConfig {
        field: field.into(),
        reason: reason.into(),
    }
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<(), Error> {
        for (line_no, raw_line) in text.lines().enumerate() {
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| invalid("config", format!("line {}: missing `=`", line_no + 1)))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), Error> {
        let parse_usize =
            |v: &str| v.parse::<usize>().map_err(|_| invalid(key, "expected an integer"));
        let parse_f64 =
            |v: &str| v.parse::<f64>().map_err(|_| invalid(key, "expected a real number"));
        let parse_bool = |v: &str| match v {
            "true" | "1" | "yes" | "on" => Ok(true),
            "false" | "0" | "no" | "off" => Ok(false),
            _ => Err(invalid(key, "expected a boolean")),
        };
        match key {
            "nx_qubits" => self.nx_qubits = parse_usize(value)?,
            "ny_qubits" => self.ny_qubits = parse_usize(value)?,
            "times" => {
                let mut times = Vec::new();
                for part in value.split(',') {
                    times.push(TimePoint::parse(part).map_err(|e| invalid("times", e))?);
                }
                if times.is_empty() {
                    return Err(invalid("times", "needs at least one time point"));
                }
                self.times = times;
            }
            "initial_form" => {
                self.initial_form = match value {
                    "gaussian_amplitude" => InitialForm::GaussianAmplitude,
                    "gaussian_density" => InitialForm::GaussianDensity,
                    _ => {
                        return Err(invalid(
                            key,
                            "expected `gaussian_amplitude` or `gaussian_density`",
                        ))
                    }
                }
            }
            "aqft_b" => {
                self.aqft_b = if value == "exact" {
                    AqftThreshold::Exact
                } else {
                    AqftThreshold::Distance(parse_usize(value)?)
                }
            }
            "epsilon_over_pi" => self.epsilon_over_pi = parse_f64(value)?,
            "time_exponent_p" => {
                self.time_exponent_p = value
                    .parse::<i32>()
                    .map_err(|_| invalid(key, "expected an integer"))?
            }
            "compensate" => self.compensate = parse_bool(value)?,
            "periodic_removal" => self.periodic_removal = parse_bool(value)?,
            "fidelity_1q" => self.fidelity_1q = parse_f64(value)?,
            "fidelity_2q" => self.fidelity_2q = parse_f64(value)?,
            "trajectories" => self.trajectories = parse_usize(value)?,
            "n_min" => self.n_min = parse_usize(value)?,
            "n_max" => self.n_max = parse_usize(value)?,
            "empirical_max_n" => self.empirical_max_n = parse_usize(value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "seed" => {
                self.seed = value
                    .parse::<u64>()
                    .map_err(|_| invalid(key, "expected an unsigned integer"))?
            }
            "normalization" => {
                self.normalization = match value {
                    "bounded" => Normalization::Bounded,
                    "raw" => Normalization::Raw,
                    _ => return Err(invalid(key, "expected `bounded` or `raw`")),
                }
            }
            _ => return Err(invalid(key, "unknown configuration key")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.nx_qubits == 0 || self.nx_qubits > 14 {
            return Err(invalid("nx_qubits", "must be in 1..=14"));
        }
        if self.ny_qubits == 0 || self.ny_qubits > 14 {
            return Err(invalid("ny_qubits", "must be in 1..=14"));
        }
        if self.nx_qubits + self.ny_qubits > qflow::state::DEFAULT_MAX_QUBITS {
            return Err(invalid("nx_qubits", "total register exceeds the memory guard"));
        }
        if self.times.is_empty() {
            return Err(invalid("times", "needs at least one time point"));
        }
        if !(0.0..1.0).contains(&self.epsilon_over_pi) {
            return Err(invalid("epsilon_over_pi", "must lie in [0, 1)"));
        }
        for (field, f) in [("fidelity_1q", self.fidelity_1q), ("fidelity_2q", self.fidelity_2q)] {
            if !(f > 0.0 && f <= 1.0) {
                return Err(invalid(field, "must lie in (0, 1]"));
            }
        }
        if self.n_min < 2 {
            return Err(invalid("n_min", "must be at least 2"));
        }
        if self.n_max < self.n_min {
            return Err(invalid("n_max", "empty sweep range"));
        }
        Ok(())
    }

    pub fn epsilon_th(&self) -> f64 {
        self.epsilon_over_pi * PI
    }

    pub fn truncated_aqft_config(&self) -> AqftConfig {
        AqftConfig::new(self.aqft_b.as_b(), self.compensate)
    }

    pub fn truncation_policy(&self) -> TruncationPolicy {
        TruncationPolicy::new(self.epsilon_th(), self.periodic_removal)
    }

    pub fn noise_model(&self) -> NoiseModel {
        NoiseModel {
            fidelity_1q: self.fidelity_1q,
            fidelity_2q: self.fidelity_2q,
            rng_seed: self.seed,
        }
    }

    pub fn scaling_params(&self) -> ScalingParams {
        ScalingParams {
            threshold_b: self.aqft_b.as_b(),
            time_exponent_p: self.time_exponent_p,
            epsilon_th: self.epsilon_th(),
            compensate: self.compensate,
            periodic_removal: self.periodic_removal,
            fidelity_2q: self.fidelity_2q,
        }
    }

    /// Echo of the effective configuration for metrics files.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        map.insert("nx_qubits".into(), self.nx_qubits.to_string());
        map.insert("ny_qubits".into(), self.ny_qubits.to_string());
        map.insert(
            "times".into(),
            self.times
                .iter()
                .map(|t| t.label.clone())
                .collect::<Vec<_>>()
                .join(","),
        );
        map.insert(
            "initial_form".into(),
            match self.initial_form {
                InitialForm::GaussianAmplitude => "gaussian_amplitude".into(),
                InitialForm::GaussianDensity => "gaussian_density".into(),
            },
        );
        map.insert(
            "aqft_b".into(),
            match self.aqft_b {
                AqftThreshold::Exact => "exact".into(),
                AqftThreshold::Distance(b) => b.to_string(),
            },
        );
        map.insert("epsilon_over_pi".into(), self.epsilon_over_pi.to_string());
        map.insert("time_exponent_p".into(), self.time_exponent_p.to_string());
        map.insert("compensate".into(), self.compensate.to_string());
        map.insert("periodic_removal".into(), self.periodic_removal.to_string());
        map.insert("fidelity_1q".into(), self.fidelity_1q.to_string());
        map.insert("fidelity_2q".into(), self.fidelity_2q.to_string());
        map.insert("trajectories".into(), self.trajectories.to_string());
        map.insert("seed".into(), self.seed.to_string());
        map.insert("normalization".into(), self.normalization.label().into());
        map
    }
}
