//! Sweep configuration: JSON schema, parameter/measure vocabularies and
//! validation.

use crate::error::{CliError, Result};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Ground,
    Thermal,
    Teleport,
    Verify,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Ground => "ground",
            Mode::Thermal => "thermal",
            Mode::Teleport => "teleport",
            Mode::Verify => "verify",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ground" => Ok(Mode::Ground),
            "thermal" => Ok(Mode::Thermal),
            "teleport" => Ok(Mode::Teleport),
            "verify" => Ok(Mode::Verify),
            other => Err(CliError::Validation(format!(
                "mode: unknown mode {other:?} (expected ground|thermal|teleport|verify)"
            ))),
        }
    }
}

/// Sweepable parameters, in canonical column order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Param {
    Eta,
    EtaX,
    EtaY,
    Lambda,
    Alpha,
    T,
    Theta,
    BetaPhase,
}

impl Param {
    pub const ALL: [Param; 8] = [
        Param::Eta,
        Param::EtaX,
        Param::EtaY,
        Param::Lambda,
        Param::Alpha,
        Param::T,
        Param::Theta,
        Param::BetaPhase,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Param::Eta => "eta",
            Param::EtaX => "eta_x",
            Param::EtaY => "eta_y",
            Param::Lambda => "lambda",
            Param::Alpha => "alpha",
            Param::T => "T",
            Param::Theta => "theta",
            Param::BetaPhase => "beta_phase",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Param::ALL
            .iter()
            .find(|p| p.as_str() == s)
            .copied()
            .ok_or_else(|| {
                CliError::Validation(format!(
                    "unknown parameter name {s:?} (expected one of eta, eta_x, eta_y, lambda, alpha, T, theta, beta_phase)"
                ))
            })
    }
}

fn mode_params(mode: Mode) -> &'static [Param] {
    match mode {
        Mode::Ground => &[
            Param::Eta,
            Param::EtaX,
            Param::EtaY,
            Param::Lambda,
            Param::Alpha,
            Param::BetaPhase,
        ],
        Mode::Thermal => &[
            Param::Eta,
            Param::EtaX,
            Param::EtaY,
            Param::Lambda,
            Param::Alpha,
            Param::T,
        ],
        Mode::Teleport => &[
            Param::Eta,
            Param::EtaX,
            Param::EtaY,
            Param::Lambda,
            Param::Alpha,
            Param::T,
            Param::Theta,
        ],
        Mode::Verify => &[],
    }
}

fn required_params(mode: Mode) -> &'static [Param] {
    match mode {
        Mode::Ground => &[Param::Eta, Param::EtaX, Param::EtaY, Param::Lambda],
        Mode::Thermal | Mode::Teleport => {
            &[Param::Eta, Param::EtaX, Param::EtaY, Param::Lambda, Param::T]
        }
        Mode::Verify => &[],
    }
}

/// Defaults injected when neither fixed nor swept: alpha = 0,
/// beta_phase = 0, theta = π/2.
fn default_value(param: Param) -> Option<f64> {
    match param {
        Param::Alpha | Param::BetaPhase => Some(0.0),
        Param::Theta => Some(FRAC_PI_2),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Clone, Debug)]
pub struct Axis {
    pub param: Param,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Axis {
    /// Grid node `k` in 0..count; endpoints are exact.
    pub fn value(&self, k: usize) -> f64 {
        debug_assert!(k < self.count);
        if k == 0 {
            return self.start;
        }
        if k == self.count - 1 {
            return self.stop;
        }
        let frac = k as f64 / (self.count - 1) as f64;
        match self.spacing {
            Spacing::Linear => self.start + (self.stop - self.start) * frac,
            Spacing::Log => self.start * (self.stop / self.start).powf(frac),
        }
    }
}

/// Per-mode measure vocabulary of the sweep outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    Energy,
    Concurrence,
    BuresRaw,
    Bures,
    /// Oracle-authoritative trace MIN: closed value unless it disagrees
    /// with the oracle beyond 1e-3, in which case the oracle value is
    /// reported and the row is flagged.
    Tmin,
    TminClosed,
    TminOracle,
    Uin,
    UinClosed,
    UinOracle,
    /// Measures of the closed-form eigenstates, 1-based label.
    ConcurrencePhi(u8),
    BuresPhi(u8),
    /// Bell-channel probability, index 0..=3.
    Prob(u8),
    ANumeric,
    BNumeric,
    AClosed,
    BClosed,
    Fidelity,
    AvgFidelity,
    AvgFidelityAb,
    BeatsClassical,
}

impl Measure {
    pub fn name(&self) -> String {
        match self {
            Measure::Energy => "energy".into(),
            Measure::Concurrence => "concurrence".into(),
            Measure::BuresRaw => "bures_raw".into(),
            Measure::Bures => "bures".into(),
            Measure::Tmin => "tmin".into(),
            Measure::TminClosed => "tmin_closed".into(),
            Measure::TminOracle => "tmin_oracle".into(),
            Measure::Uin => "uin".into(),
            Measure::UinClosed => "uin_closed".into(),
            Measure::UinOracle => "uin_oracle".into(),
            Measure::ConcurrencePhi(k) => format!("concurrence_phi{k}"),
            Measure::BuresPhi(k) => format!("bures_phi{k}"),
            Measure::Prob(k) => format!("p{k}"),
            Measure::ANumeric => "a".into(),
            Measure::BNumeric => "b".into(),
            Measure::AClosed => "a_closed".into(),
            Measure::BClosed => "b_closed".into(),
            Measure::Fidelity => "fidelity".into(),
            Measure::AvgFidelity => "avg_fidelity".into(),
            Measure::AvgFidelityAb => "avg_fidelity_ab".into(),
            Measure::BeatsClassical => "beats_classical".into(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let fixed = match s {
            "energy" => Some(Measure::Energy),
            "concurrence" => Some(Measure::Concurrence),
            "bures_raw" => Some(Measure::BuresRaw),
            "bures" => Some(Measure::Bures),
            "tmin" => Some(Measure::Tmin),
            "tmin_closed" => Some(Measure::TminClosed),
            "tmin_oracle" => Some(Measure::TminOracle),
            "uin" => Some(Measure::Uin),
            "uin_closed" => Some(Measure::UinClosed),
            "uin_oracle" => Some(Measure::UinOracle),
            "a" => Some(Measure::ANumeric),
            "b" => Some(Measure::BNumeric),
            "a_closed" => Some(Measure::AClosed),
            "b_closed" => Some(Measure::BClosed),
            "fidelity" => Some(Measure::Fidelity),
            "avg_fidelity" => Some(Measure::AvgFidelity),
            "avg_fidelity_ab" => Some(Measure::AvgFidelityAb),
            "beats_classical" => Some(Measure::BeatsClassical),
            _ => None,
        };
        if let Some(m) = fixed {
            return Ok(m);
        }
        for k in 1..=4u8 {
            if s == format!("concurrence_phi{k}") {
                return Ok(Measure::ConcurrencePhi(k));
            }
            if s == format!("bures_phi{k}") {
                return Ok(Measure::BuresPhi(k));
            }
        }
        for k in 0..=3u8 {
            if s == format!("p{k}") {
                return Ok(Measure::Prob(k));
            }
        }
        Err(CliError::Validation(format!(
            "outputs: unknown measure name {s:?}"
        )))
    }

    pub fn allowed_in(&self, mode: Mode) -> bool {
        use Measure::*;
        match mode {
            Mode::Ground => matches!(
                self,
                Energy
                    | Concurrence
                    | BuresRaw
                    | Bures
                    | Tmin
                    | TminClosed
                    | TminOracle
                    | Uin
                    | UinClosed
                    | UinOracle
                    | ConcurrencePhi(_)
                    | BuresPhi(_)
            ),
            Mode::Thermal => matches!(
                self,
                Concurrence
                    | BuresRaw
                    | Bures
                    | Tmin
                    | TminClosed
                    | TminOracle
                    | Uin
                    | UinClosed
                    | UinOracle
            ),
            Mode::Teleport => matches!(
                self,
                Prob(_)
                    | ANumeric
                    | BNumeric
                    | AClosed
                    | BClosed
                    | Fidelity
                    | AvgFidelity
                    | AvgFidelityAb
                    | BeatsClassical
            ),
            Mode::Verify => false,
        }
    }
}

/// A validated sweep (or verify) specification.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub mode: Mode,
    pub fixed: BTreeMap<Param, f64>,
    pub axes: Vec<Axis>,
    pub outputs: Vec<Measure>,
    pub seed: u64,
    pub samples: Option<u32>,
}

impl SweepSpec {
    /// Overrides a fixed parameter; the parameter must belong to the mode
    /// and must not be swept.
    pub fn set_fixed(&mut self, param: Param, value: f64) -> Result<()> {
        if !mode_params(self.mode).contains(&param) {
            return Err(CliError::Validation(format!(
                "parameter {:?} is not used in mode {:?}",
                param.as_str(),
                self.mode.as_str()
            )));
        }
        if self.axes.iter().any(|a| a.param == param) {
            return Err(CliError::Validation(format!(
                "parameter {:?} is swept by an axis and cannot be fixed",
                param.as_str()
            )));
        }
        if !value.is_finite() {
            return Err(CliError::Validation(format!(
                "parameter {:?} must be finite",
                param.as_str()
            )));
        }
        self.fixed.insert(param, value);
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: String,
    #[serde(default)]
    fixed: BTreeMap<String, f64>,
    #[serde(default)]
    axes: Vec<(String, f64, f64, usize, String)>,
    #[serde(default)]
    outputs: Vec<String>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    samples: Option<u32>,
}

/// Parses and validates a JSON sweep configuration.
pub fn parse_config(text: &str) -> Result<SweepSpec> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| {
        CliError::Validation(format!(
            "config parse error at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    validate(raw)
}

fn validate(raw: RawConfig) -> Result<SweepSpec> {
    let mode = Mode::parse(&raw.mode)?;
    let allowed = mode_params(mode);

    let mut fixed = BTreeMap::new();
    for (name, value) in &raw.fixed {
        let param = Param::parse(name).map_err(prefix("fixed"))?;
        if !allowed.contains(&param) {
            return Err(CliError::Validation(format!(
                "fixed: parameter {name:?} is not used in mode {:?}",
                mode.as_str()
            )));
        }
        if !value.is_finite() {
            return Err(CliError::Validation(format!(
                "fixed: parameter {name:?} must be finite"
            )));
        }
        fixed.insert(param, *value);
    }

    let mut axes = Vec::new();
    for (idx, (name, start, stop, count, spacing)) in raw.axes.iter().enumerate() {
        let field = format!("axes[{idx}]");
        let param = Param::parse(name).map_err(prefix(&field))?;
        if !allowed.contains(&param) {
            return Err(CliError::Validation(format!(
                "{field}: parameter {name:?} is not used in mode {:?}",
                mode.as_str()
            )));
        }
        if fixed.contains_key(&param) {
            return Err(CliError::Validation(format!(
                "{field}: parameter {name:?} is both fixed and swept"
            )));
        }
        if axes.iter().any(|a: &Axis| a.param == param) {
            return Err(CliError::Validation(format!(
                "{field}: parameter {name:?} appears on two axes"
            )));
        }
        if *count < 2 {
            return Err(CliError::Validation(format!(
                "{field}: count must be >= 2, got {count}"
            )));
        }
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(CliError::Validation(format!(
                "{field}: need finite start < stop, got {start} .. {stop}"
            )));
        }
        let spacing = match spacing.as_str() {
            "linear" => Spacing::Linear,
            "log" => Spacing::Log,
            other => {
                return Err(CliError::Validation(format!(
                    "{field}: spacing must be \"linear\" or \"log\", got {other:?}"
                )))
            }
        };
        if spacing == Spacing::Log && *start <= 0.0 {
            return Err(CliError::Validation(format!(
                "{field}: log spacing requires start > 0, got {start}"
            )));
        }
        axes.push(Axis {
            param,
            start: *start,
            stop: *stop,
            count: *count,
            spacing,
        });
    }

    if mode == Mode::Verify {
        if !axes.is_empty() {
            return Err(CliError::Validation(
                "axes: verify mode takes no axes".into(),
            ));
        }
        if !raw.outputs.is_empty() {
            return Err(CliError::Validation(
                "outputs: verify mode takes no outputs".into(),
            ));
        }
        return Ok(SweepSpec {
            mode,
            fixed,
            axes,
            outputs: Vec::new(),
            seed: raw.seed.unwrap_or(1),
            samples: raw.samples,
        });
    }

    if raw.samples.is_some() {
        return Err(CliError::Validation(
            "samples: only valid in verify mode".into(),
        ));
    }
    if axes.is_empty() {
        return Err(CliError::Validation(
            "axes: at least one sweep axis is required".into(),
        ));
    }
    if axes.len() > 2 {
        return Err(CliError::Validation(format!(
            "axes: at most two axes are supported, got {}",
            axes.len()
        )));
    }

    // fill defaults, then check required coverage
    for &param in allowed {
        if fixed.contains_key(&param) || axes.iter().any(|a| a.param == param) {
            continue;
        }
        if let Some(v) = default_value(param) {
            fixed.insert(param, v);
        }
    }
    for &param in required_params(mode) {
        if !fixed.contains_key(&param) && !axes.iter().any(|a| a.param == param) {
            return Err(CliError::Validation(format!(
                "missing parameter {:?}: fix it or sweep it",
                param.as_str()
            )));
        }
    }

    if raw.outputs.is_empty() {
        return Err(CliError::Validation(
            "outputs: at least one measure is required".into(),
        ));
    }
    let mut outputs = Vec::new();
    for name in &raw.outputs {
        let m = Measure::parse(name)?;
        if !m.allowed_in(mode) {
            return Err(CliError::Validation(format!(
                "outputs: measure {name:?} is not available in mode {:?}",
                mode.as_str()
            )));
        }
        if outputs.contains(&m) {
            return Err(CliError::Validation(format!(
                "outputs: duplicate measure {name:?}"
            )));
        }
        outputs.push(m);
    }

    Ok(SweepSpec {
        mode,
        fixed,
        axes,
        outputs,
        seed: raw.seed.unwrap_or(0),
        samples: None,
    })
}

fn prefix(field: &str) -> impl Fn(CliError) -> CliError + '_ {
    move |e| match e {
        CliError::Validation(msg) => CliError::Validation(format!("{field}: {msg}")),
        other => other,
    }
}
