//! Experiment configuration: a single JSON document.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::characters::{FixedPointOptions, MultiplicityRule, TestFunction};
use crate::cycles::Hemisphere;
use crate::error::{Error, Result};
use crate::flag::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    KirillovWeyl,
    PrincipalEquivalence,
    DiscreteEquivalence,
    GaussianLimit,
    DhCheck,
    /// Cycle pairing against its deformed pull-back over growing cutoffs.
    #[serde(rename = "lemma-residuals")]
    DeformationResiduals,
    EllipticFit,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 7] = [
        ExperimentId::KirillovWeyl,
        ExperimentId::PrincipalEquivalence,
        ExperimentId::DiscreteEquivalence,
        ExperimentId::GaussianLimit,
        ExperimentId::DhCheck,
        ExperimentId::DeformationResiduals,
        ExperimentId::EllipticFit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::KirillovWeyl => "kirillov-weyl",
            ExperimentId::PrincipalEquivalence => "principal-equivalence",
            ExperimentId::DiscreteEquivalence => "discrete-equivalence",
            ExperimentId::GaussianLimit => "gaussian-limit",
            ExperimentId::DhCheck => "dh-check",
            ExperimentId::DeformationResiduals => "lemma-residuals",
            ExperimentId::EllipticFit => "elliptic-fit",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        ExperimentId::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::config("experiment", format!("unknown experiment `{s}`")))
    }

    /// Whether the experiment pairs against test functions.
    pub fn needs_test_functions(self) -> bool {
        self != ExperimentId::DhCheck
    }
}

/// Where seeded bumps are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    /// Supports inside `a^2 + bc > 0`, centers in the ball of radius 3.
    Hyperbolic,
    /// Supports inside `a^2 + bc < 0`, centers in the ball of radius 3.
    Elliptic,
    /// Any support on su(2), centers in the ball of radius 1.5.
    Su2,
}

/// An explicit bump or a batch of seeded ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestFunctionSpec {
    Bump(TestFunction),
    Seeded { count: usize, region: Region },
}

fn default_n() -> Vec<u32> {
    (0..=4).collect()
}

fn default_speed() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}

/// Knob lists. `r` and `t` drive the cycle experiments, `degree` the quadrature, `n` the SU(2)
/// representations and `speed` the localization check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub r: Vec<f64>,
    pub t: Vec<f64>,
    pub degree: Vec<usize>,
    #[serde(default = "default_n")]
    pub n: Vec<u32>,
    #[serde(default = "default_speed")]
    pub speed: Vec<f64>,
}

fn default_weight() -> Weight {
    Weight::imaginary(1.0)
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    #[serde(default = "default_weight")]
    pub weight: Weight,
    #[serde(default)]
    pub test_functions: Vec<TestFunctionSpec>,
    pub sweep: Sweep,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Multiplicities of the fixed point side; defaults per experiment when absent.
    #[serde(default)]
    pub multiplicities: Option<MultiplicityRule>,
    #[serde(default)]
    pub fixed_point: FixedPointOptions,
    /// Hemisphere of the discrete cycle.
    #[serde(default = "default_hemisphere")]
    pub hemisphere: Hemisphere,
    /// Record wall-clock runtimes; off by default so that outputs are byte-stable.
    #[serde(default)]
    pub timing: bool,
}

fn default_hemisphere() -> Hemisphere {
    Hemisphere::West
}

fn strictly_monotone(v: &[f64], increasing: bool) -> bool {
    v.windows(2)
        .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text).map_err(|e| {
            let field = if e.to_string().contains("experiment") {
                "experiment"
            } else {
                "config"
            };
            Error::config(field, e.to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.sweep;
        if s.r.is_empty() {
            return Err(Error::config("sweep.r", "must be nonempty"));
        }
        if s.t.is_empty() {
            return Err(Error::config("sweep.t", "must be nonempty"));
        }
        if s.degree.is_empty() {
            return Err(Error::config("sweep.degree", "must be nonempty"));
        }
        if s.n.is_empty() {
            return Err(Error::config("sweep.n", "must be nonempty"));
        }
        if s.speed.is_empty() {
            return Err(Error::config("sweep.speed", "must be nonempty"));
        }
        if s.r.iter().any(|r| !(*r > 0.0 && r.is_finite())) || !strictly_monotone(&s.r, true) {
            return Err(Error::config("sweep.r", "values must be positive and strictly increasing"));
        }
        if s.t.iter().any(|t| !(*t > 0.0 && *t <= 1.0)) || !strictly_monotone(&s.t, false) {
            return Err(Error::config(
                "sweep.t",
                "values must lie in (0, 1] and strictly decrease toward 0",
            ));
        }
        if s.degree.iter().any(|d| *d < 2) {
            return Err(Error::config("sweep.degree", "degrees must be at least 2"));
        }
        if s.speed.iter().any(|v| *v == 0.0 || !v.is_finite()) {
            return Err(Error::config("sweep.speed", "speeds must be finite and nonzero"));
        }
        if !self.weight.is_regular() {
            return Err(Error::config("weight", "lambda(H) must be nonzero"));
        }
        if self.experiment.needs_test_functions() && self.test_functions.is_empty() {
            return Err(Error::config("test_functions", "must be nonempty"));
        }
        for (i, spec) in self.test_functions.iter().enumerate() {
            match spec {
                TestFunctionSpec::Bump(phi) if !(phi.radius > 0.0 && phi.radius.is_finite()) => {
                    return Err(Error::config(
                        format!("test_functions[{i}].radius"),
                        "must be positive",
                    ));
                }
                TestFunctionSpec::Seeded { count: 0, .. } => {
                    return Err(Error::config(format!("test_functions[{i}].count"), "must be positive"));
                }
                _ => {}
            }
        }
        if self.fixed_point.degree < 2 || self.fixed_point.cells == 0 {
            return Err(Error::config("fixed_point", "degree >= 2 and cells >= 1 required"));
        }
        Ok(())
    }

    /// The multiplicities used on the fixed point side.
    pub fn multiplicity_rule(&self) -> MultiplicityRule {
        if let Some(m) = self.multiplicities {
            return m;
        }
        match self.experiment {
            ExperimentId::DiscreteEquivalence => MultiplicityRule::hyperbolic(1, 0),
            _ => MultiplicityRule::uniform(1),
        }
    }
}
