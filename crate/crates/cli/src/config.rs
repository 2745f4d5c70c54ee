//! The JSON run configuration and its validation.

use std::collections::BTreeMap;

use serde::Deserialize;

use reskit_core::averaging::{HarmonicCoefficients, ResonanceCoefficients, ResonanceIndex};
use reskit_core::dynamics::{AveragedModel, ModelForm, PortraitOptions};
use reskit_core::pendulum::{
    pendulum_resonance_setup, PendulumParams, ResonanceSetup, PENDULUM_INDEX,
};
use reskit_core::Error;

use crate::error::{CliError, CliResult};

pub const PENDULUM_ID: &str = "pendulum-q2";
pub const HARMONIC_ID: &str = "harmonic-synthetic";

const PENDULUM_KEYS: [&str; 8] = [
    "p1", "p2", "p3", "omega1", "omega2", "epsilon", "gamma1", "gamma2",
];
const OPTIONAL_KEYS: [&str; 2] = ["gamma1", "gamma2"];

/// A parameter value: a number, or `"auto"` for quantities fixed by the
/// double-cycle condition.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Keyword(String),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexConfig {
    pub n: u32,
    pub m1: i32,
    pub m2: i32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GenfunConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub points: usize,
}

impl Default for GenfunConfig {
    fn default() -> Self {
        Self {
            k_min: 0.02,
            k_max: 0.98,
            points: 97,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PortraitConfig {
    pub grid: usize,
    pub horizon: f64,
    pub window: f64,
    pub escape: f64,
    pub sample_dt: f64,
    /// Extra trajectories from seeded uniform starts in the scan window.
    pub random_starts: usize,
}

impl Default for PortraitConfig {
    fn default() -> Self {
        let d = PortraitOptions::default();
        Self {
            grid: d.grid,
            horizon: d.horizon,
            window: d.window,
            escape: d.escape,
            sample_dt: d.sample_dt,
            random_starts: 0,
        }
    }
}

impl PortraitConfig {
    pub fn options(&self) -> PortraitOptions {
        PortraitOptions {
            grid: self.grid,
            horizon: self.horizon,
            window: self.window,
            escape: self.escape,
            sample_dt: self.sample_dt,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum StartConfig {
    /// A point `(v, u)` of the averaged system, mapped to the phase plane at `t = 0`.
    Averaged { v: f64, u: f64 },
    /// The first rest point of the averaged system of the given kind
    /// (`"stable"` or `"saddle"`).
    Equilibrium(String),
    /// Above the resonance zone at `u = factor·A`, `v = 0`.
    Band { factor: f64 },
    /// A phase point `(x, y)`.
    Phase { x: f64, y: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub start: StartConfig,
    /// Horizon in `t`; defaults to `10/ε`.
    #[serde(default)]
    pub t_end: Option<f64>,
    #[serde(default = "default_sample_dt")]
    pub sample_dt: f64,
    #[serde(default = "default_full_tol")]
    pub tol: f64,
}

fn default_sample_dt() -> f64 {
    1.0
}

fn default_full_tol() -> f64 {
    1e-12
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: String,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub from: Option<f64>,
    #[serde(default)]
    pub to: Option<f64>,
    #[serde(default)]
    pub points: Option<usize>,
}

pub const SWEEP_KEYS: [&str; 7] = ["p1", "p2", "p3", "epsilon", "gamma1", "gamma2", "b2"];

impl SweepConfig {
    pub fn grid(&self) -> CliResult<Vec<f64>> {
        if !SWEEP_KEYS.contains(&self.parameter.as_str()) {
            return Err(CliError::Config(format!(
                "sweep.parameter `{}` is not one of {}",
                self.parameter,
                SWEEP_KEYS.join(", ")
            )));
        }
        match (&self.values, self.from, self.to, self.points) {
            (Some(v), None, None, None) if !v.is_empty() => Ok(v.clone()),
            (None, Some(a), Some(b), Some(n)) if n >= 2 => Ok((0..n)
                .map(|j| a + (b - a) * j as f64 / (n - 1) as f64)
                .collect()),
            _ => Err(CliError::Config(
                "sweep needs either a non-empty `values` list or `from`, `to` and `points` ≥ 2"
                    .into(),
            )),
        }
    }
}

/// One run, as read from the JSON document.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub description: Option<String>,
    pub system: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, ParamValue>,
    #[serde(default)]
    pub harmonic: Option<HarmonicCoefficients>,
    #[serde(default)]
    pub index: Option<IndexConfig>,
    #[serde(default)]
    pub form: Option<ModelForm>,
    /// Replaces `B₂` on the resonant level.
    #[serde(default)]
    pub b2: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub genfun: GenfunConfig,
    #[serde(default)]
    pub portrait: PortraitConfig,
    #[serde(default)]
    pub simulate: Option<SimulateConfig>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
}

/// Line of the first occurrence of `"key"` in the document, for messages.
fn line_of(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines()
        .position(|l| l.contains(&needle))
        .map(|i| i + 1)
}

fn at_line(text: &str, key: &str) -> String {
    line_of(text, key)
        .map(|l| format!(" (line {l})"))
        .unwrap_or_default()
}

/// Pendulum parameters with `"auto"` resolved.
#[derive(Debug, Clone, Copy)]
pub struct PendulumSetup {
    pub params: PendulumParams,
    pub gamma1: f64,
    pub gamma2: f64,
    pub index: ResonanceIndex,
}

/// The analysed system after validation.
#[derive(Debug, Clone)]
pub enum SystemSetup {
    Pendulum(PendulumSetup),
    Harmonic(HarmonicCoefficients),
}

/// A parsed and validated configuration.
#[derive(Debug, Clone)]
pub struct Validated {
    pub raw: RunConfig,
    pub system: SystemSetup,
}

impl Validated {
    pub fn parse(text: &str) -> CliResult<Self> {
        let raw: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let system = match raw.system.as_str() {
            PENDULUM_ID => SystemSetup::Pendulum(pendulum_setup(&raw, text)?),
            HARMONIC_ID => {
                if !raw.parameters.is_empty() {
                    return Err(CliError::Config(format!(
                        "system `{HARMONIC_ID}` takes its coefficients from `harmonic`, not `parameters`{}",
                        at_line(text, "parameters")
                    )));
                }
                let h = raw.harmonic.ok_or_else(|| {
                    CliError::Config(format!("system `{HARMONIC_ID}` needs a `harmonic` block"))
                })?;
                SystemSetup::Harmonic(h)
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown system `{other}`{}; expected `{PENDULUM_ID}` or `{HARMONIC_ID}`",
                    at_line(text, "system")
                )))
            }
        };
        if raw.harmonic.is_some() && !matches!(system, SystemSetup::Harmonic(_)) {
            return Err(CliError::Config(format!(
                "`harmonic` is only valid for system `{HARMONIC_ID}`{}",
                at_line(text, "harmonic")
            )));
        }
        check_options(&raw, text)?;
        Ok(Self { raw, system })
    }

    pub fn form(&self) -> ModelForm {
        self.raw.form.unwrap_or(ModelForm::Full)
    }

    /// Averaged-system coefficients with detunings and the `B₂` override applied.
    pub fn coefficients(&self) -> CliResult<ResonanceCoefficients> {
        let c = match &self.system {
            SystemSetup::Pendulum(p) => {
                let eps = p.params.epsilon;
                PendulumParams {
                    epsilon: if eps > 0.0 { eps } else { 1.0 },
                    ..p.params
                }
                .resonance_coefficients_for(p.index)?
                .with_epsilon(eps)
                .with_detuning(p.gamma1, p.gamma2)
            }
            SystemSetup::Harmonic(h) => h.coefficients()?,
        };
        Ok(match self.raw.b2 {
            Some(b2) => c.with_b2(b2),
            None => c,
        })
    }
}

impl Validated {
    pub fn model(&self) -> CliResult<AveragedModel> {
        Ok(AveragedModel::new(self.coefficients()?, self.form())?)
    }

    /// The same run with one sweepable quantity replaced.
    pub fn with_value(&self, key: &str, value: f64) -> CliResult<Self> {
        let mut next = self.clone();
        if key == "b2" {
            next.raw.b2 = Some(value);
            return Ok(next);
        }
        match &mut next.system {
            SystemSetup::Pendulum(p) => match key {
                "p1" => p.params.p1 = value,
                "p2" => p.params.p2 = value,
                "p3" => p.params.p3 = value,
                "epsilon" => p.params.epsilon = value,
                "gamma1" => p.gamma1 = value,
                "gamma2" => p.gamma2 = value,
                _ => return Err(CliError::Config(format!("cannot sweep `{key}`"))),
            },
            SystemSetup::Harmonic(h) => match key {
                "epsilon" => h.epsilon = value,
                "gamma1" => h.gamma1 = value,
                "gamma2" => h.gamma2 = value,
                _ => {
                    return Err(CliError::Config(format!(
                        "`{key}` cannot be swept for system `{HARMONIC_ID}`"
                    )))
                }
            },
        }
        if let SystemSetup::Pendulum(p) = &next.system {
            if p.params.epsilon < 0.0 {
                return Err(CliError::Config("epsilon must be non-negative".into()));
            }
            PendulumParams {
                epsilon: p.params.epsilon.max(1.0),
                ..p.params
            }
            .validate()?;
        }
        Ok(next)
    }
}

fn check_options(raw: &RunConfig, text: &str) -> CliResult<()> {
    let g = &raw.genfun;
    if !(g.k_min > 0.0 && g.k_max < 1.0 && g.k_min < g.k_max) || g.points < 2 {
        return Err(CliError::Config(format!(
            "genfun grid needs 0 < k_min < k_max < 1 and points ≥ 2{}",
            at_line(text, "genfun")
        )));
    }
    let p = &raw.portrait;
    let positive = [p.horizon, p.window, p.escape, p.sample_dt]
        .iter()
        .all(|x| *x > 0.0 && x.is_finite());
    if p.grid < 2 || !positive || p.escape <= p.window {
        return Err(CliError::Config(format!(
            "portrait needs grid ≥ 2, positive horizon/window/sample_dt and escape > window{}",
            at_line(text, "portrait")
        )));
    }
    if let Some(s) = &raw.simulate {
        let ok = s.sample_dt > 0.0 && s.tol > 0.0 && s.t_end.is_none_or(|t| t > 0.0);
        if !ok {
            return Err(CliError::Config(format!(
                "simulate needs positive t_end, sample_dt and tol{}",
                at_line(text, "simulate")
            )));
        }
    }
    if raw.threads == Some(0) {
        return Err(CliError::Config(format!(
            "threads must be at least 1{}",
            at_line(text, "threads")
        )));
    }
    Ok(())
}

fn pendulum_setup(raw: &RunConfig, text: &str) -> CliResult<PendulumSetup> {
    for key in raw.parameters.keys() {
        if !PENDULUM_KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!(
                "unknown parameter `{key}`{} for system `{PENDULUM_ID}`; expected {}",
                at_line(text, key),
                PENDULUM_KEYS.join(", ")
            )));
        }
    }
    for key in PENDULUM_KEYS {
        if !OPTIONAL_KEYS.contains(&key) && !raw.parameters.contains_key(key) {
            return Err(CliError::Config(format!(
                "missing parameter `{key}` in `parameters`{}",
                at_line(text, "parameters")
            )));
        }
    }
    let (n, m1, m2) = match raw.index {
        Some(i) => (i.n, i.m1, i.m2),
        None => (PENDULUM_INDEX.n, PENDULUM_INDEX.m1, PENDULUM_INDEX.m2),
    };
    if n == 0 {
        return Err(CliError::Config(format!(
            "resonance order n must be at least 1{}",
            at_line(text, "index")
        )));
    }
    let mut setup: Option<ResonanceSetup> = None;
    let mut value = |key: &str, omega1: f64| -> CliResult<f64> {
        match raw.parameters.get(key) {
            None => Ok(0.0),
            Some(ParamValue::Number(x)) if x.is_finite() => Ok(*x),
            Some(ParamValue::Number(_)) => Err(CliError::Config(format!(
                "parameter `{key}`{} must be finite",
                at_line(text, key)
            ))),
            Some(ParamValue::Keyword(k)) if k == "auto" && (key == "p1" || key == "omega2") => {
                if setup.is_none() {
                    setup = Some(pendulum_resonance_setup(omega1)?);
                }
                let s = setup.expect("set above");
                if key == "p1" {
                    return Ok(s.p1);
                }
                if m2 == 0 {
                    return Err(CliError::Config(format!(
                        "omega2 = \"auto\" needs m2 ≠ 0 in the resonance index{}",
                        at_line(text, "omega2")
                    )));
                }
                let omega = (s.omega2 + s.omega1) / 3.0;
                Ok((n as f64 * omega - m1 as f64 * omega1) / m2 as f64)
            }
            Some(ParamValue::Keyword(k)) => Err(CliError::Config(format!(
                "parameter `{key}`{} must be a number{}, got \"{k}\"",
                at_line(text, key),
                if key == "p1" || key == "omega2" {
                    " or \"auto\""
                } else {
                    ""
                }
            ))),
        }
    };
    let omega1 = value("omega1", 1.0)?;
    let params = PendulumParams {
        p1: value("p1", omega1)?,
        p2: value("p2", omega1)?,
        p3: value("p3", omega1)?,
        omega1,
        omega2: value("omega2", omega1)?,
        epsilon: value("epsilon", omega1)?,
    };
    let gamma1 = value("gamma1", omega1)?;
    let gamma2 = value("gamma2", omega1)?;

    // The oscillation cell carries frequencies in (0, 1); an unreachable
    // target is a range error whatever the index looks like.
    let target = (m1 as f64 * params.omega1 + m2 as f64 * params.omega2) / n as f64;
    if !(target > 0.0 && target < 1.0) {
        return Err(CliError::Core(Error::FrequencyOutOfRange {
            target,
            lo: 0.0,
            hi: 1.0,
        }));
    }
    let index = ResonanceIndex::new(n, m1, m2)?;
    if params.epsilon < 0.0 {
        return Err(CliError::Config(format!(
            "epsilon must be non-negative{}",
            at_line(text, "epsilon")
        )));
    }
    PendulumParams {
        epsilon: params.epsilon.max(1.0),
        ..params
    }
    .validate()?;
    Ok(PendulumSetup {
        params,
        gamma1,
        gamma2,
        index,
    })
}
