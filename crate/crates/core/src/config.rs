use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by the geometric pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceConfig {
    /// Minimum angle between the two strands at a crossing, in degrees.
    pub min_angle_deg: f64,
    /// Minimum separation between crossings, as a fraction of the curve diameter.
    pub min_sep_fraction: f64,
    /// Absolute minimum separation; overrides `min_sep_fraction` when set.
    pub min_sep: Option<f64>,
    /// Allowed distance of the total turning (in turns) from an integer.
    pub whitney_residual: f64,
    /// Allowed distance of rounded index formulas from an integer.
    pub index_residual: f64,
    /// Excision radius as a fraction of the local clearance around a crossing.
    pub epsilon_fraction: f64,
    /// Absolute excision radius; overrides `epsilon_fraction` when set.
    pub epsilon: Option<f64>,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            min_angle_deg: 10.0,
            min_sep_fraction: 0.01,
            min_sep: None,
            whitney_residual: 0.05,
            index_residual: 0.1,
            epsilon_fraction: 0.25,
            epsilon: None,
        }
    }
}

impl ToleranceConfig {
    pub fn min_separation(&self, diameter: f64) -> f64 {
        self.min_sep.unwrap_or(self.min_sep_fraction * diameter)
    }

    pub fn with_min_sep(mut self, min_sep: f64) -> Self {
        self.min_sep = Some(min_sep);
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("min_angle_deg", self.min_angle_deg),
            ("min_sep_fraction", self.min_sep_fraction),
            ("whitney_residual", self.whitney_residual),
            ("index_residual", self.index_residual),
            ("epsilon_fraction", self.epsilon_fraction),
        ];
        let optional = [("min_sep", self.min_sep), ("epsilon", self.epsilon)];
        let present = optional.into_iter().filter_map(|(n, v)| v.map(|v| (n, v)));
        for (name, v) in positive.into_iter().chain(present) {
            if !is_positive(v) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if self.index_residual >= 0.5 || self.whitney_residual >= 0.5 {
            return Err("residual thresholds must be below 0.5".into());
        }
        Ok(())
    }
}

/// Finite and strictly positive; rejects NaN.
fn is_positive(v: f64) -> bool {
    v.is_finite() && v > 0.0
}
