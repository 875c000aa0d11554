use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Contribution of the part of a cycle with fiber norm in `[inner, outer]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellContribution {
    pub inner: f64,
    pub outer: f64,
    pub value: C64,
}

/// A pairing value together with the numerical knobs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub value: C64,
    pub quadrature_degree: usize,
    pub cutoff_r: Option<f64>,
    pub theta_t: Option<f64>,
    /// Magnitude of the outermost dyadic shell, `R/2 <= ||zeta|| <= R`; zero when there is no cutoff.
    pub tail_estimate: f64,
    pub shells: Vec<ShellContribution>,
    /// Number of integrand evaluations.
    pub points: usize,
}

impl PairingReport {
    /// Sum of the shells lying inside `||zeta|| <= r`; this is the pairing at cutoff `r`
    /// whenever `r` is one of the shell radii.
    pub fn value_up_to(&self, r: f64) -> C64 {
        self.shells
            .iter()
            .filter(|s| s.outer <= r * (1.0 + 1e-12))
            .map(|s| s.value)
            .sum()
    }

    /// `|value_up_to(r) - value_up_to(r/2)|`.
    pub fn shell_magnitude(&self, r: f64) -> f64 {
        (self.value_up_to(r) - self.value_up_to(0.5 * r)).norm()
    }
}
