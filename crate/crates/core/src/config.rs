//! Evaluation configuration shared by every truncated numerical evaluation.

use serde::{Deserialize, Serialize};

/// Working precision. Only IEEE double precision is implemented.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
}

/// Truncation cutoffs, tolerances and guards.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    /// Maximum number of factors (or series terms) any single evaluation may use.
    pub product_cutoff: u64,
    /// Relative tolerance for identity checks.
    pub tol: f64,
    /// Truncations are chosen so the rigorous tail bound is at most this.
    pub tail_guard: f64,
    /// Minimum `|Re (g . omega)|` (with `omega` scaled to unit max-modulus) for lattice sums.
    pub pole_guard: f64,
    /// Minimum `|Im|` of normalised period ratios.
    pub ratio_guard: f64,
    /// Minimum relative size of the denominator of a fractional-linear action.
    pub singular_guard: f64,
    pub precision: Precision,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            product_cutoff: 20_000_000,
            tol: 1e-8,
            tail_guard: 1e-13,
            pole_guard: 1e-9,
            ratio_guard: 1e-9,
            singular_guard: 1e-12,
            precision: Precision::Double,
        }
    }
}

impl EvalConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_json_falls_back_to_defaults() {
        let cfg = EvalConfig::from_json(r#"{"tol": 1e-6}"#).unwrap();
        assert_eq!(cfg.tol, 1e-6);
        assert_eq!(cfg.tail_guard, EvalConfig::default().tail_guard);
        assert_eq!(cfg.precision, Precision::Double);
    }
}
