use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::defaults::{defaults_for, ParamSpec};

/// Smallest accepted number of integration steps.
pub const MIN_STEPS: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Faquad,
    Stirap,
    Qsl2,
    Qsl3,
    Optimize,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [Scenario::Faquad, Scenario::Stirap, Scenario::Qsl2, Scenario::Qsl3, Scenario::Optimize];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Faquad => "faquad",
            Scenario::Stirap => "stirap",
            Scenario::Qsl2 => "qsl2",
            Scenario::Qsl3 => "qsl3",
            Scenario::Optimize => "optimize",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }

    /// Scalings the scenario accepts.
    pub fn scalings(self) -> &'static [ScalingKind] {
        use ScalingKind::*;
        match self {
            Scenario::Faquad => &[Identity, Polynomial, QuasiUnitary],
            Scenario::Stirap | Scenario::Qsl3 => &[Identity, Polynomial, QuasiUnitary, Optimal],
            Scenario::Qsl2 => &[Identity],
            Scenario::Optimize => &[Optimal],
        }
    }

    pub fn default_scaling(self) -> ScalingKind {
        match self {
            Scenario::Optimize => ScalingKind::Optimal,
            _ => ScalingKind::Identity,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingKind {
    Identity,
    Polynomial,
    QuasiUnitary,
    Optimal,
}

impl ScalingKind {
    pub const ALL: [ScalingKind; 4] = [ScalingKind::Identity, ScalingKind::Polynomial, ScalingKind::QuasiUnitary, ScalingKind::Optimal];

    pub fn name(self) -> &'static str {
        match self {
            ScalingKind::Identity => "identity",
            ScalingKind::Polynomial => "polynomial",
            ScalingKind::QuasiUnitary => "quasi_unitary",
            ScalingKind::Optimal => "optimal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for ScalingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingOptions {
    pub kind: ScalingKind,
    /// Choose the scaled duration so the drive energy equals the unscaled one.
    #[serde(default)]
    pub energy_matched: bool,
    /// Scaled duration `T_dur`; defaults to the protocol duration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
}

/// A run request as read from JSON.
///
/// ```
/// use qscale::cli::ScenarioConfig;
///
/// let cfg: ScenarioConfig = serde_json::from_str(
///     r#"{"scenario": "stirap", "parameters": {"gamma2": 0.0}, "scaling": {"kind": "polynomial"}}"#,
/// ).unwrap();
/// let cfg = cfg.resolve().unwrap();
/// assert_eq!(cfg.parameters["epsilon"], 0.05);
/// assert_eq!(cfg.steps, 20_000);
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_steps() -> usize {
    crate::dynamics::DEFAULT_STEPS
}

/// A schema violation, tied to the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn field_error(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError { field: field.into(), message: message.into() }
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self { scenario, parameters: BTreeMap::new(), scaling: None, output_dir: None, steps: default_steps() }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| field_error("config", e.to_string()))
    }

    pub fn scaling_options(&self) -> ScalingOptions {
        self.scaling.clone().unwrap_or(ScalingOptions { kind: self.scenario.default_scaling(), energy_matched: false, duration: None })
    }

    /// Validate and fill every missing parameter from the defaults table.
    pub fn resolve(mut self) -> Result<Self, ConfigError> {
        let specs = defaults_for(self.scenario);
        for (key, value) in &self.parameters {
            let spec: &ParamSpec = specs.iter().find(|s| s.key == key).ok_or_else(|| {
                let known: Vec<&str> = specs.iter().map(|s| s.key).collect();
                field_error(format!("parameters.{key}"), format!("unknown for scenario {}; expected one of {}", self.scenario, known.join(", ")))
            })?;
            if !value.is_finite() {
                return Err(field_error(format!("parameters.{key}"), "must be a finite number"));
            }
            if let Some(msg) = spec.check(*value) {
                return Err(field_error(format!("parameters.{key}"), msg));
            }
        }
        for spec in specs {
            self.parameters.entry(spec.key.to_string()).or_insert(spec.value);
        }
        if self.steps < MIN_STEPS {
            return Err(field_error("steps", format!("must be at least {MIN_STEPS}, got {}", self.steps)));
        }
        let opts = self.scaling_options();
        if !self.scenario.scalings().contains(&opts.kind) {
            let allowed: Vec<&str> = self.scenario.scalings().iter().map(|k| k.name()).collect();
            return Err(field_error(
                "scaling.kind",
                format!("{} is not available for scenario {}; expected one of {}", opts.kind, self.scenario, allowed.join(", ")),
            ));
        }
        if let Some(d) = opts.duration {
            if !(d > 0.0 && d.is_finite()) {
                return Err(field_error("scaling.duration", format!("must be positive, got {d}")));
            }
            if opts.energy_matched {
                return Err(field_error("scaling.duration", "cannot be combined with energy_matched"));
            }
        }
        if opts.energy_matched && !matches!(self.scenario, Scenario::Faquad | Scenario::Stirap | Scenario::Qsl3) {
            return Err(field_error("scaling.energy_matched", format!("not supported for scenario {}", self.scenario)));
        }
        self.scaling = Some(opts);
        Ok(self)
    }

    /// Parameter value after [`resolve`](Self::resolve).
    pub fn param(&self, key: &str) -> f64 {
        self.parameters[key]
    }

    /// Apply a `key=value` override. `steps` and `scaling.*` are recognised;
    /// any other key is a scenario parameter.
    pub fn set(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, value) =
            assignment.split_once('=').ok_or_else(|| field_error(assignment, "expected key=value"))?;
        let (key, value) = (key.trim(), value.trim());
        let number = || value.parse::<f64>().map_err(|_| field_error(key, format!("not a number: {value}")));
        match key {
            "steps" => {
                self.steps = value.parse().map_err(|_| field_error("steps", format!("not an integer: {value}")))?;
            }
            "scaling" | "scaling.kind" => {
                let kind = ScalingKind::parse(value).ok_or_else(|| field_error("scaling.kind", format!("unknown scaling {value}")))?;
                self.scaling = Some(ScalingOptions { kind, ..self.scaling_options() });
            }
            "scaling.energy_matched" => {
                let b = value.parse().map_err(|_| field_error(key, format!("not a boolean: {value}")))?;
                self.scaling = Some(ScalingOptions { energy_matched: b, ..self.scaling_options() });
            }
            "scaling.duration" => {
                let d = number()?;
                self.scaling = Some(ScalingOptions { duration: Some(d), ..self.scaling_options() });
            }
            "output_dir" => self.output_dir = Some(PathBuf::from(value)),
            _ => {
                let key = key.strip_prefix("parameters.").unwrap_or(key);
                self.parameters.insert(key.to_string(), number()?);
            }
        }
        Ok(())
    }
}

/// A description of the config format, printed by `qscale schema`.
pub fn schema() -> serde_json::Value {
    let params: serde_json::Map<String, serde_json::Value> = Scenario::ALL
        .iter()
        .map(|s| {
            let fields: serde_json::Map<String, serde_json::Value> = defaults_for(*s)
                .iter()
                .map(|p| (p.key.to_string(), serde_json::json!({"type": "number", "default": p.value, "description": p.description})))
                .collect();
            (s.name().to_string(), serde_json::Value::Object(fields))
        })
        .collect();
    let scalings: serde_json::Map<String, serde_json::Value> = Scenario::ALL
        .iter()
        .map(|s| (s.name().to_string(), serde_json::json!(s.scalings().iter().map(|k| k.name()).collect::<Vec<_>>())))
        .collect();
    serde_json::json!({
        "type": "object",
        "required": ["scenario"],
        "additionalProperties": false,
        "properties": {
            "scenario": {"enum": Scenario::ALL.iter().map(|s| s.name()).collect::<Vec<_>>()},
            "parameters": {"type": "object", "description": "number per key; allowed keys depend on the scenario", "per_scenario": params},
            "scaling": {
                "type": "object",
                "additionalProperties": false,
                "required": ["kind"],
                "properties": {
                    "kind": {"enum": ScalingKind::ALL.iter().map(|k| k.name()).collect::<Vec<_>>(), "per_scenario": scalings},
                    "energy_matched": {"type": "boolean", "default": false},
                    "duration": {"type": "number", "exclusiveMinimum": 0}
                }
            },
            "output_dir": {"type": "string"},
            "steps": {"type": "integer", "minimum": MIN_STEPS, "default": default_steps()}
        }
    })
}
