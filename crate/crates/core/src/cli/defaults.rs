use std::f64::consts::{FRAC_PI_4, PI};

use super::config::Scenario;

/// Bumped whenever a default value changes.
pub const DEFAULTS_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Positive,
    NonNegative,
    /// Open interval.
    Between(f64, f64),
    Flag,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub key: &'static str,
    pub value: f64,
    pub bound: Bound,
    pub description: &'static str,
}

impl ParamSpec {
    /// Error message if `v` is out of range.
    pub fn check(&self, v: f64) -> Option<String> {
        let ok = match self.bound {
            Bound::Positive => v > 0.0,
            Bound::NonNegative => v >= 0.0,
            Bound::Between(lo, hi) => v > lo && v < hi,
            Bound::Flag => v == 0.0 || v == 1.0,
        };
        (!ok).then(|| match self.bound {
            Bound::Positive => format!("must be positive, got {v}"),
            Bound::NonNegative => format!("must be non-negative, got {v}"),
            Bound::Between(lo, hi) => format!("must lie in ({lo}, {hi}), got {v}"),
            Bound::Flag => format!("must be 0 or 1, got {v}"),
        })
    }
}

const fn p(key: &'static str, value: f64, bound: Bound, description: &'static str) -> ParamSpec {
    ParamSpec { key, value, bound, description }
}

const FAQUAD: [ParamSpec; 5] = [
    p("omega0", 10.0, Bound::Positive, "Rabi frequency (1/T)"),
    p("epsilon", 0.01, Bound::Between(0.0, 1.0), "boundary regularizer, cos theta(0) = 1 - epsilon"),
    p("duration", 1.0, Bound::Positive, "protocol duration T"),
    p("gamma_e", 0.1, Bound::NonNegative, "damping rate of |e> (1/T)"),
    p("gamma_g", 0.001, Bound::NonNegative, "damping rate of |g> (1/T)"),
];

const STIRAP: [ParamSpec; 5] = [
    p("epsilon", 0.05, Bound::Between(0.0, PI / 2.0), "mixing angle at both ends (rad)"),
    p("delta", FRAC_PI_4, Bound::Between(0.0, PI / 2.0), "mixing angle at mid-protocol (rad)"),
    p("duration", 1.0, Bound::Positive, "protocol duration T"),
    p("gamma2", 0.1, Bound::NonNegative, "damping rate of the intermediate level (1/T)"),
    p("corrected", 1.0, Bound::Flag, "1 to add the geometric correction pulses"),
];

const QSL2: [ParamSpec; 4] = [
    p("omega0", PI, Bound::Positive, "constant Rabi frequency (1/T); pi gives a pi pulse at T"),
    p("gamma_e", 0.2, Bound::NonNegative, "damping rate of |e> (1/T)"),
    p("gamma_g", 0.01, Bound::NonNegative, "damping rate of |g> (1/T)"),
    p("horizon", 1.5, Bound::Positive, "integration horizon (T)"),
];

const OPTIMIZE: [ParamSpec; 4] = [
    p("epsilon", 0.05, Bound::Between(0.0, PI / 2.0), "mixing angle at both ends (rad)"),
    p("delta", FRAC_PI_4, Bound::Between(0.0, PI / 2.0), "mixing angle at mid-protocol (rad)"),
    p("duration", 1.0, Bound::Positive, "protocol duration T"),
    p("gamma2", 0.1, Bound::NonNegative, "damping rate of the intermediate level (1/T)"),
];

/// Default parameters of each scenario.
pub fn defaults_for(scenario: Scenario) -> &'static [ParamSpec] {
    match scenario {
        Scenario::Faquad => &FAQUAD,
        Scenario::Stirap | Scenario::Qsl3 => &STIRAP,
        Scenario::Qsl2 => &QSL2,
        Scenario::Optimize => &OPTIMIZE,
    }
}

/// The defaults table as text, one `scenario key value description` row per line.
pub fn defaults_table() -> String {
    let mut out = format!("# qscale defaults, version {DEFAULTS_VERSION}\nscenario,key,value,description\n");
    for s in Scenario::ALL {
        for spec in defaults_for(s) {
            out += &format!("{},{},{},{}\n", s.name(), spec.key, spec.value, spec.description.replace(',', ";"));
        }
    }
    out
}
