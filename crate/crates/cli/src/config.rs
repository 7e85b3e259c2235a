//! Scenario configuration: a single JSON document, unknown keys rejected.
//!
//! Parsing happens in two passes so that every error carries the full key
//! path: the top level is read with scenarios left as raw JSON, then each
//! scenario is decoded into the struct selected by its `kind`.

use std::fmt;

use geophase::frames::{lookup_family, FAMILY_REGISTRY};
use geophase::oracle::MIN_TIME_STEPS;
use geophase::Route;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const WILSON_STEPS_RANGE: (usize, usize) = (100, 1_000_000);
pub const MAX_TOTAL_TIME: f64 = 1e6;
pub const MAX_TIME_STEPS: usize = 100_000_000;

/// A configuration problem, located by key path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    pub scenarios: Vec<Scenario>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    workers: Option<usize>,
    scenarios: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scenario {
    PhaseGate(PhaseGate),
    Cphase(Cphase),
    Hadamard(Hadamard),
    WilsonConvergence(WilsonConvergence),
    DeformationInvariance(DeformationInvariance),
    AmplitudeSweep(AmplitudeSweep),
}

pub const SCENARIO_KINDS: [&str; 6] = [
    "phase_gate",
    "cphase",
    "hadamard",
    "wilson_convergence",
    "deformation_invariance",
    "amplitude_sweep",
];

impl Scenario {
    pub fn name(&self) -> &str {
        match self {
            Scenario::PhaseGate(s) => &s.name,
            Scenario::Cphase(s) => &s.name,
            Scenario::Hadamard(s) => &s.name,
            Scenario::WilsonConvergence(s) => &s.name,
            Scenario::DeformationInvariance(s) => &s.name,
            Scenario::AmplitudeSweep(s) => &s.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::PhaseGate(_) => "phase_gate",
            Scenario::Cphase(_) => "cphase",
            Scenario::Hadamard(_) => "hadamard",
            Scenario::WilsonConvergence(_) => "wilson_convergence",
            Scenario::DeformationInvariance(_) => "deformation_invariance",
            Scenario::AmplitudeSweep(_) => "amplitude_sweep",
        }
    }

    pub fn thresholds(&self) -> &[Threshold] {
        match self {
            Scenario::PhaseGate(s) => &s.thresholds,
            Scenario::Cphase(s) => &s.thresholds,
            Scenario::Hadamard(s) => &s.thresholds,
            Scenario::WilsonConvergence(s) => &s.thresholds,
            Scenario::DeformationInvariance(s) => &s.thresholds,
            Scenario::AmplitudeSweep(s) => &s.thresholds,
        }
    }

    /// Grid axes, for the gate kinds that can be swept.
    pub fn sweep(&self) -> &[Axis] {
        match self {
            Scenario::PhaseGate(s) => &s.sweep,
            Scenario::Cphase(s) => &s.sweep,
            Scenario::Hadamard(s) => &s.sweep,
            _ => &[],
        }
    }

    /// Whether the scenario produces a CSV table.
    pub fn is_tabular(&self) -> bool {
        match self {
            Scenario::PhaseGate(_) | Scenario::Cphase(_) | Scenario::Hadamard(_) => !self.sweep().is_empty(),
            _ => true,
        }
    }
}

/// Discretization shared by the gate scenarios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    /// Wilson-loop steps `M`.
    #[serde(default = "default_wilson_steps")]
    pub wilson_steps: usize,
    /// Oracle traversal time `T`.
    #[serde(default = "default_total_time")]
    pub total_time: f64,
    /// Oracle time steps; omitted means the oracle's own default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_steps: Option<usize>,
    #[serde(default = "default_leakage_budget")]
    pub leakage_budget: f64,
}

fn default_wilson_steps() -> usize {
    4000
}

fn default_total_time() -> f64 {
    1e3
}

fn default_leakage_budget() -> f64 {
    geophase::oracle::DEFAULT_LEAKAGE_BUDGET
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig {
            wilson_steps: default_wilson_steps(),
            total_time: default_total_time(),
            time_steps: None,
            leakage_budget: default_leakage_budget(),
        }
    }
}

impl ScheduleConfig {
    pub fn check(&self, at: &str) -> Result<(), ConfigError> {
        check_wilson_steps(self.wilson_steps, &format!("{at}.wilson_steps"))?;
        if !(self.total_time > 0.0 && self.total_time <= MAX_TOTAL_TIME) {
            return Err(ConfigError::new(
                format!("{at}.total_time"),
                format!("must be in (0, 1e6], got {}", self.total_time),
            ));
        }
        if let Some(m) = self.time_steps {
            if !(MIN_TIME_STEPS..=MAX_TIME_STEPS).contains(&m) {
                return Err(ConfigError::new(
                    format!("{at}.time_steps"),
                    format!("must be in [{MIN_TIME_STEPS}, {MAX_TIME_STEPS}], got {m}"),
                ));
            }
        }
        if !(self.leakage_budget > 0.0 && self.leakage_budget <= 1.0) {
            return Err(ConfigError::new(
                format!("{at}.leakage_budget"),
                format!("must be in (0, 1], got {}", self.leakage_budget),
            ));
        }
        Ok(())
    }
}

fn check_wilson_steps(m: usize, at: &str) -> Result<(), ConfigError> {
    let (lo, hi) = WILSON_STEPS_RANGE;
    if (lo..=hi).contains(&m) {
        Ok(())
    } else {
        Err(ConfigError::new(at, format!("must be in [{lo}, {hi}], got {m}")))
    }
}

/// Bound on a reported metric. For tabular metrics every row must comply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Threshold {
    pub metric: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// One grid axis: explicit `values`, or `count` points from `start` to
/// `stop` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Axis {
    pub fn check(&self, at: &str) -> Result<(), ConfigError> {
        let ranged = [self.start.is_some(), self.stop.is_some(), self.count.is_some()];
        match (&self.values, ranged) {
            (Some(values), [false, false, false]) => {
                if let Some(i) = values.iter().position(|v| !v.is_finite()) {
                    return Err(ConfigError::new(format!("{at}.values[{i}]"), "must be finite"));
                }
            }
            (None, [true, true, true]) => {
                let (a, b) = (self.start.unwrap(), self.stop.unwrap());
                if !(a.is_finite() && b.is_finite()) {
                    return Err(ConfigError::new(format!("{at}.start"), "start and stop must be finite"));
                }
                if self.spacing == Spacing::Log && !(a > 0.0 && b > 0.0) {
                    return Err(ConfigError::new(
                        format!("{at}.spacing"),
                        "log spacing needs positive start and stop",
                    ));
                }
            }
            (Some(_), _) => {
                return Err(ConfigError::new(
                    format!("{at}.values"),
                    "give either `values` or `start`/`stop`/`count`, not both",
                ))
            }
            (None, _) => {
                return Err(ConfigError::new(
                    at,
                    "an axis needs `values` or all of `start`, `stop`, `count`",
                ))
            }
        }
        Ok(())
    }

    /// Grid values, in the order given.
    pub fn points(&self) -> Vec<f64> {
        if let Some(v) = &self.values {
            return v.clone();
        }
        let (a, b, n) = (self.start.unwrap(), self.stop.unwrap(), self.count.unwrap());
        let at = |i: usize| {
            if n == 1 {
                return a;
            }
            let t = i as f64 / (n - 1) as f64;
            match self.spacing {
                Spacing::Linear => a + (b - a) * t,
                Spacing::Log => (a.ln() + (b.ln() - a.ln()) * t).exp(),
            }
        };
        (0..n).map(at).collect()
    }
}

fn default_routes() -> Vec<Route> {
    vec![Route::ClosedForm, Route::Wilson]
}

fn default_loops() -> u32 {
    1
}

/// Phase gate. The drive is given either by the cone angle `theta` (with
/// optional `gap`) or by the triple `omega0`, `omega`, `omega1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseGate {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1: Option<f64>,
    #[serde(default = "default_loops")]
    pub loops: u32,
    #[serde(default = "default_routes")]
    pub routes: Vec<Route>,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub sweep: Vec<Axis>,
    #[serde(default)]
    pub thresholds: Vec<Threshold>,
}

impl PhaseGate {
    pub fn uses_cone_angle(&self) -> bool {
        self.theta.is_some()
    }
}

/// Conditional phase on two J-coupled spins. Without `omega1` the
/// amplitude maximizing the conditional phase is used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cphase {
    pub name: String,
    pub omega_a: f64,
    pub omega_b: f64,
    pub j: f64,
    pub omega: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1: Option<f64>,
    #[serde(default = "default_routes")]
    pub routes: Vec<Route>,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub sweep: Vec<Axis>,
    #[serde(default)]
    pub thresholds: Vec<Threshold>,
}

fn default_cos_hold() -> f64 {
    geophase::gates::DEFAULT_COS_HOLD
}

fn default_coupling() -> f64 {
    1.0
}

/// Tripod rotation compared with the Hadamard gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hadamard {
    pub name: String,
    #[serde(default = "default_cos_hold")]
    pub cos_theta_hold: f64,
    /// Tripod coupling `B`.
    #[serde(default = "default_coupling")]
    pub coupling: f64,
    #[serde(default = "default_routes")]
    pub routes: Vec<Route>,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub sweep: Vec<Axis>,
    #[serde(default)]
    pub thresholds: Vec<Threshold>,
}

fn default_convergence_steps() -> Vec<usize> {
    vec![250, 500, 1000, 2000]
}

/// Wilson-loop error against the closed form as `M` doubles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WilsonConvergence {
    pub name: String,
    /// Registry name: `bloch` or `tripod`.
    pub family: String,
    /// Cosine of the loop's polar angle.
    pub cos_theta: f64,
    #[serde(default = "default_convergence_steps")]
    pub steps: Vec<usize>,
    #[serde(default)]
    pub thresholds: Vec<Threshold>,
}

fn default_amplitude() -> f64 {
    0.1
}

fn default_harmonics() -> usize {
    3
}

fn default_samples() -> usize {
    5
}

/// Seeded smooth deformations of a cone, with and without solid-angle
/// renormalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationInvariance {
    pub name: String,
    pub theta0: f64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default = "default_harmonics")]
    pub harmonics: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_wilson_steps")]
    pub wilson_steps: usize,
    #[serde(default)]
    pub thresholds: Vec<Threshold>,
}

/// Conditional phase against drive amplitude at fixed drive frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeSweep {
    pub name: String,
    pub omega_a: f64,
    pub omega_b: f64,
    pub j: f64,
    pub omega: f64,
    pub omega1: Axis,
    #[serde(default)]
    pub thresholds: Vec<Threshold>,
}

fn decode<T: DeserializeOwned>(value: Value, at: &str) -> Result<T, ConfigError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = if inner == "." {
            at.to_string()
        } else {
            format!("{at}.{inner}")
        };
        ConfigError::new(path, e.into_inner().to_string())
    })
}

/// Parses and validates a configuration document.
pub fn parse(text: &str) -> Result<Config, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de)
        .map_err(|e| ConfigError::new(e.path().to_string(), e.into_inner().to_string()))?;
    let mut scenarios = Vec::with_capacity(raw.scenarios.len());
    for (i, value) in raw.scenarios.into_iter().enumerate() {
        scenarios.push(parse_scenario(value, &format!("scenarios[{i}]"))?);
    }
    let config = Config {
        seed: raw.seed,
        workers: raw.workers,
        scenarios,
    };
    validate(&config)?;
    Ok(config)
}

fn parse_scenario(value: Value, at: &str) -> Result<Scenario, ConfigError> {
    let Value::Object(mut map) = value else {
        return Err(ConfigError::new(at, "expected an object"));
    };
    let kind = match map.remove("kind") {
        Some(Value::String(k)) => k,
        Some(_) => return Err(ConfigError::new(format!("{at}.kind"), "expected a string")),
        None => return Err(ConfigError::new(at, "missing field `kind`")),
    };
    let body = Value::Object(map);
    Ok(match kind.as_str() {
        "phase_gate" => Scenario::PhaseGate(decode(body, at)?),
        "cphase" => Scenario::Cphase(decode(body, at)?),
        "hadamard" => Scenario::Hadamard(decode(body, at)?),
        "wilson_convergence" => Scenario::WilsonConvergence(decode(body, at)?),
        "deformation_invariance" => Scenario::DeformationInvariance(decode(body, at)?),
        "amplitude_sweep" => Scenario::AmplitudeSweep(decode(body, at)?),
        other => {
            return Err(ConfigError::new(
                format!("{at}.kind"),
                format!(
                    "unknown scenario kind `{other}`, expected one of {}",
                    SCENARIO_KINDS.join(", ")
                ),
            ))
        }
    })
}

fn finite(v: f64, at: String) -> Result<(), ConfigError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::new(at, "must be finite"))
    }
}

/// Parameters each gate kind accepts on a sweep axis.
pub fn sweepable(scenario: &Scenario) -> &'static [&'static str] {
    match scenario {
        Scenario::PhaseGate(p) if p.uses_cone_angle() => {
            &["theta", "gap", "loops", "wilson_steps", "total_time", "time_steps"]
        }
        Scenario::PhaseGate(_) => &[
            "omega0",
            "omega",
            "omega1",
            "loops",
            "wilson_steps",
            "total_time",
            "time_steps",
        ],
        Scenario::Cphase(_) => &[
            "omega_a",
            "omega_b",
            "j",
            "omega",
            "omega1",
            "wilson_steps",
            "total_time",
            "time_steps",
        ],
        Scenario::Hadamard(_) => &["cos_theta_hold", "coupling", "wilson_steps", "total_time", "time_steps"],
        _ => &[],
    }
}

/// Checks semantic constraints that the schema alone cannot express.
pub fn validate(config: &Config) -> Result<(), ConfigError> {
    if config.workers == Some(0) {
        return Err(ConfigError::new("workers", "must be at least 1"));
    }
    let mut names = std::collections::BTreeSet::new();
    for (i, s) in config.scenarios.iter().enumerate() {
        let at = format!("scenarios[{i}]");
        if s.name().trim().is_empty() {
            return Err(ConfigError::new(format!("{at}.name"), "must not be empty"));
        }
        if !names.insert(s.name().to_string()) {
            return Err(ConfigError::new(
                format!("{at}.name"),
                format!("duplicate scenario name `{}`", s.name()),
            ));
        }
        validate_scenario(s, &at)?;
        validate_sweep(s, &at)?;
        let known = crate::metrics::names(s);
        for (k, t) in s.thresholds().iter().enumerate() {
            let tat = format!("{at}.thresholds[{k}]");
            if !known.iter().any(|m| m == &t.metric) {
                return Err(ConfigError::new(
                    format!("{tat}.metric"),
                    format!(
                        "unknown metric `{}` for this scenario, expected one of {}",
                        t.metric,
                        known.join(", ")
                    ),
                ));
            }
            if t.min.is_none() && t.max.is_none() {
                return Err(ConfigError::new(tat, "a threshold needs `min`, `max` or both"));
            }
            for (key, v) in [("min", t.min), ("max", t.max)] {
                if let Some(v) = v {
                    finite(v, format!("{tat}.{key}"))?;
                }
            }
        }
    }
    Ok(())
}

fn validate_routes(routes: &[Route], at: &str) -> Result<(), ConfigError> {
    if routes.is_empty() {
        return Err(ConfigError::new(format!("{at}.routes"), "needs at least one route"));
    }
    for (k, r) in routes.iter().enumerate() {
        if routes[..k].contains(r) {
            return Err(ConfigError::new(
                format!("{at}.routes[{k}]"),
                format!("duplicate route `{}`", r.name()),
            ));
        }
    }
    Ok(())
}

pub(crate) fn validate_scenario(s: &Scenario, at: &str) -> Result<(), ConfigError> {
    match s {
        Scenario::PhaseGate(p) => {
            validate_routes(&p.routes, at)?;
            p.schedule.check(&format!("{at}.schedule"))?;
            let omegas = [("omega0", p.omega0), ("omega", p.omega), ("omega1", p.omega1)];
            match p.theta {
                Some(theta) => {
                    if let Some((key, _)) = omegas.iter().find(|(_, v)| v.is_some()) {
                        return Err(ConfigError::new(
                            format!("{at}.{key}"),
                            "give either `theta` (with `gap`) or `omega0`/`omega`/`omega1`, not both",
                        ));
                    }
                    finite(theta, format!("{at}.theta"))?;
                    if let Some(g) = p.gap {
                        if !(g > 0.0 && g.is_finite()) {
                            return Err(ConfigError::new(
                                format!("{at}.gap"),
                                format!("must be positive, got {g}"),
                            ));
                        }
                    }
                }
                None => {
                    if p.gap.is_some() {
                        return Err(ConfigError::new(format!("{at}.gap"), "`gap` goes with `theta`"));
                    }
                    for (key, v) in omegas {
                        match v {
                            Some(v) => finite(v, format!("{at}.{key}"))?,
                            None => {
                                return Err(ConfigError::new(
                                    format!("{at}.{key}"),
                                    "missing; give `theta` or all of `omega0`, `omega`, `omega1`",
                                ))
                            }
                        }
                    }
                }
            }
        }
        Scenario::Cphase(c) => {
            validate_routes(&c.routes, at)?;
            c.schedule.check(&format!("{at}.schedule"))?;
            for (key, v) in [
                ("omega_a", c.omega_a),
                ("omega_b", c.omega_b),
                ("j", c.j),
                ("omega", c.omega),
            ] {
                finite(v, format!("{at}.{key}"))?;
            }
            if c.omega_a <= c.omega_b {
                return Err(ConfigError::new(
                    format!("{at}.omega_b"),
                    "spin b must have the lower frequency",
                ));
            }
            if let Some(w1) = c.omega1 {
                finite(w1, format!("{at}.omega1"))?;
            }
        }
        Scenario::Hadamard(h) => {
            validate_routes(&h.routes, at)?;
            h.schedule.check(&format!("{at}.schedule"))?;
            if !(h.cos_theta_hold > -1.0 && h.cos_theta_hold < 1.0) {
                return Err(ConfigError::new(
                    format!("{at}.cos_theta_hold"),
                    format!("must be in (-1, 1), got {}", h.cos_theta_hold),
                ));
            }
            if !(h.coupling > 0.0 && h.coupling.is_finite()) {
                return Err(ConfigError::new(format!("{at}.coupling"), "must be positive"));
            }
        }
        Scenario::WilsonConvergence(w) => {
            if lookup_family(&w.family).is_none() {
                let known: Vec<_> = FAMILY_REGISTRY.iter().map(|f| f.name).collect();
                return Err(ConfigError::new(
                    format!("{at}.family"),
                    format!("unknown family `{}`, registered: {}", w.family, known.join(", ")),
                ));
            }
            if !["bloch", "tripod"].contains(&w.family.as_str()) {
                return Err(ConfigError::new(
                    format!("{at}.family"),
                    format!("family `{}` has no closed-form loop to converge to", w.family),
                ));
            }
            if !(w.cos_theta > -1.0 && w.cos_theta < 1.0) {
                return Err(ConfigError::new(format!("{at}.cos_theta"), "must be in (-1, 1)"));
            }
            if w.steps.is_empty() {
                return Err(ConfigError::new(format!("{at}.steps"), "needs at least one entry"));
            }
            for (k, &m) in w.steps.iter().enumerate() {
                check_wilson_steps(m, &format!("{at}.steps[{k}]"))?;
            }
        }
        Scenario::DeformationInvariance(d) => {
            finite(d.theta0, format!("{at}.theta0"))?;
            if !(d.amplitude >= 0.0 && d.amplitude.is_finite()) {
                return Err(ConfigError::new(format!("{at}.amplitude"), "must be non-negative"));
            }
            let margin = 2.0 * d.amplitude;
            if !(d.theta0 - margin > 0.0 && d.theta0 + margin < std::f64::consts::PI) {
                return Err(ConfigError::new(
                    format!("{at}.amplitude"),
                    "theta0 ± 2·amplitude must stay inside (0, π)",
                ));
            }
            if d.harmonics == 0 {
                return Err(ConfigError::new(format!("{at}.harmonics"), "must be at least 1"));
            }
            check_wilson_steps(d.wilson_steps, &format!("{at}.wilson_steps"))?;
        }
        Scenario::AmplitudeSweep(a) => {
            for (key, v) in [
                ("omega_a", a.omega_a),
                ("omega_b", a.omega_b),
                ("j", a.j),
                ("omega", a.omega),
            ] {
                finite(v, format!("{at}.{key}"))?;
            }
            if a.omega_a <= a.omega_b {
                return Err(ConfigError::new(
                    format!("{at}.omega_b"),
                    "spin b must have the lower frequency",
                ));
            }
            let axis_at = format!("{at}.omega1");
            a.omega1.check(&axis_at)?;
            if let Some(p) = &a.omega1.parameter {
                if p != "omega1" {
                    return Err(ConfigError::new(
                        format!("{axis_at}.parameter"),
                        "this axis is always `omega1`",
                    ));
                }
            }
        }
    }
    Ok(())
}

fn validate_sweep(s: &Scenario, at: &str) -> Result<(), ConfigError> {
    let axes = s.sweep();
    if axes.len() > 2 {
        return Err(ConfigError::new(
            format!("{at}.sweep"),
            "at most two axes (1-D or 2-D grids)",
        ));
    }
    let allowed = sweepable(s);
    for (k, axis) in axes.iter().enumerate() {
        let aat = format!("{at}.sweep[{k}]");
        let Some(param) = &axis.parameter else {
            return Err(ConfigError::new(format!("{aat}.parameter"), "missing"));
        };
        if !allowed.contains(&param.as_str()) {
            return Err(ConfigError::new(
                format!("{aat}.parameter"),
                format!("`{param}` cannot be swept here, expected one of {}", allowed.join(", ")),
            ));
        }
        if axes[..k].iter().any(|a| a.parameter.as_deref() == Some(param)) {
            return Err(ConfigError::new(
                format!("{aat}.parameter"),
                format!("`{param}` appears twice"),
            ));
        }
        axis.check(&aat)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> ConfigError {
        parse(text).unwrap_err()
    }

    #[test]
    fn minimal_phase_gate_fills_defaults() {
        let c = parse(r#"{"scenarios": [{"kind": "phase_gate", "name": "z", "theta": 1.0}]}"#).unwrap();
        let Scenario::PhaseGate(p) = &c.scenarios[0] else {
            panic!()
        };
        assert_eq!(p.schedule, ScheduleConfig::default());
        assert_eq!(p.routes, vec![Route::ClosedForm, Route::Wilson]);
        assert_eq!(c.seed, 0);
    }

    #[test]
    fn negative_time_names_its_key() {
        let e = err(r#"{"scenarios": [{"kind": "phase_gate", "name": "z", "theta": 1.0,
            "schedule": {"total_time": -5}}]}"#);
        assert_eq!(e.path, "scenarios[0].schedule.total_time");
    }

    #[test]
    fn unknown_keys_are_rejected_with_path() {
        let e = err(r#"{"scenarios": [{"kind": "hadamard", "name": "h", "schedule": {"wilson_step": 10}}]}"#);
        assert_eq!(e.path, "scenarios[0].schedule.wilson_step");
        assert!(e.message.contains("unknown field"), "{e}");
        let e = err(r#"{"scenarios": [], "extra": 1}"#);
        assert!(e.message.contains("extra"));
    }

    #[test]
    fn type_errors_carry_the_path() {
        let e = err(r#"{"scenarios": [{"kind": "cphase", "name": "c", "omega_a": "x"}]}"#);
        assert_eq!(e.path, "scenarios[0].omega_a");
    }

    #[test]
    fn unknown_kind() {
        let e = err(r#"{"scenarios": [{"kind": "teleport", "name": "t"}]}"#);
        assert_eq!(e.path, "scenarios[0].kind");
    }

    #[test]
    fn discretization_bounds() {
        let e = err(r#"{"scenarios": [{"kind": "hadamard", "name": "h", "schedule": {"wilson_steps": 99}}]}"#);
        assert_eq!(e.path, "scenarios[0].schedule.wilson_steps");
        let e = err(r#"{"scenarios": [{"kind": "hadamard", "name": "h", "schedule": {"total_time": 2e6}}]}"#);
        assert_eq!(e.path, "scenarios[0].schedule.total_time");
        let e = err(
            r#"{"scenarios": [{"kind": "wilson_convergence", "name": "w", "family": "tripod",
            "cos_theta": 0.1, "steps": [100, 2000000]}]}"#,
        );
        assert_eq!(e.path, "scenarios[0].steps[1]");
    }

    #[test]
    fn families_must_be_registered() {
        let e = err(
            r#"{"scenarios": [{"kind": "wilson_convergence", "name": "w", "family": "lambda",
            "cos_theta": 0.1}]}"#,
        );
        assert_eq!(e.path, "scenarios[0].family");
        assert!(e.message.contains("registered"));
    }

    #[test]
    fn sweep_axes_are_checked() {
        let e = err(r#"{"scenarios": [{"kind": "phase_gate", "name": "z", "theta": 1.0,
            "sweep": [{"parameter": "omega1", "values": [1]}]}]}"#);
        assert_eq!(e.path, "scenarios[0].sweep[0].parameter");
        let e = err(r#"{"scenarios": [{"kind": "phase_gate", "name": "z", "theta": 1.0,
            "sweep": [{"parameter": "theta", "values": [1], "count": 3}]}]}"#);
        assert_eq!(e.path, "scenarios[0].sweep[0].values");
    }

    #[test]
    fn thresholds_must_name_known_metrics() {
        let e = err(r#"{"scenarios": [{"kind": "hadamard", "name": "h",
            "thresholds": [{"metric": "oracle.leakage", "max": 1}]}]}"#);
        assert_eq!(e.path, "scenarios[0].thresholds[0].metric");
        let ok = parse(
            r#"{"scenarios": [{"kind": "hadamard", "name": "h",
            "thresholds": [{"metric": "wilson.distance_corrected", "max": 1e-5}]}]}"#,
        );
        assert!(ok.is_ok(), "{ok:?}");
    }

    #[test]
    fn axis_points() {
        let lin = Axis {
            parameter: None,
            values: None,
            start: Some(0.0),
            stop: Some(1.0),
            count: Some(5),
            spacing: Spacing::Linear,
        };
        assert_eq!(lin.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let log = Axis {
            spacing: Spacing::Log,
            start: Some(0.01),
            stop: Some(100.0),
            ..lin
        };
        let p = log.points();
        assert!((p[2] - 1.0).abs() < 1e-15 && (p[4] - 100.0).abs() < 1e-12);
    }

    #[test]
    fn resolved_config_round_trips() {
        let c = parse(
            r#"{"seed": 7, "scenarios": [{"kind": "cphase", "name": "c", "omega_a": 3,
            "omega_b": 1, "j": 0.3, "omega": 1, "sweep": [{"parameter": "omega1", "start": 0.1,
            "stop": 4, "count": 3, "spacing": "log"}]}]}"#,
        )
        .unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(parse(&text).unwrap(), c);
    }
}
