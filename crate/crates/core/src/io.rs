//! JSON formats for curves, run configuration and truncation windows.
//!
//! A curve file is `{"points": [[x, y], ...]}`; coordinates may be JSON
//! numbers or decimal strings. The curve closes implicitly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ToleranceConfig;
use crate::curve::PlanarCurve;
use crate::error::{Error, Result};
use crate::exactness::TruncationWindow;
use crate::geom::Point;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn coordinate(v: &Value, at: usize) -> Result<f64> {
    let x = match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => {
            let t = s.trim();
            let decimal =
                !t.is_empty() && t.chars().all(|c| c.is_ascii_digit() || "+-.eE".contains(c));
            if decimal {
                t.parse::<f64>().ok()
            } else {
                None
            }
        }
        _ => None,
    };
    match x {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(parse_err(format!(
            "point {at}: coordinate {v} is not a finite decimal"
        ))),
    }
}

pub fn parse_curve(text: &str) -> Result<PlanarCurve> {
    let doc: Value = serde_json::from_str(text)?;
    let points = doc
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("expected an object with a \"points\" array"))?;
    let mut out = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        match p.as_array().map(Vec::as_slice) {
            Some([x, y]) => out.push(Point::new(coordinate(x, i)?, coordinate(y, i)?)),
            _ => return Err(parse_err(format!("point {i} is not a pair [x, y]"))),
        }
    }
    PlanarCurve::new(out)
}

pub fn read_curve(path: &Path) -> Result<PlanarCurve> {
    parse_curve(&read_text(path)?)
}

pub fn curve_to_json(curve: &PlanarCurve) -> String {
    serde_json::to_string_pretty(curve).expect("curves serialize")
}

/// Settings shared by the command-line tools.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    #[serde(flatten)]
    pub tolerances: ToleranceConfig,
    pub seed: u64,
    /// Perturbations per curve in invariance checks.
    pub trials: usize,
    /// Perturbation size as a fraction of the curve diameter.
    pub amplitude_fraction: f64,
    /// Random kernel elements solved per exactness window.
    pub exactness_samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerances: ToleranceConfig::default(),
            seed: 0,
            trials: 100,
            amplitude_fraction: 0.002,
            exactness_samples: 8,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate().map_err(parse_err)?;
        if !(self.amplitude_fraction >= 0.0 && self.amplitude_fraction.is_finite()) {
            return Err(parse_err("amplitude_fraction must be non-negative"));
        }
        Ok(())
    }
}

/// Parses a run configuration; unknown keys are rejected.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let doc: Value = serde_json::from_str(text)?;
    let Value::Object(map) = &doc else {
        return Err(parse_err("configuration must be a JSON object"));
    };
    let known = serde_json::to_value(RunConfig::default())?;
    if let Some(key) = map.keys().find(|k| known.get(k.as_str()).is_none()) {
        return Err(parse_err(format!("unknown configuration key `{key}`")));
    }
    let cfg: RunConfig = serde_json::from_value(doc)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn read_config(path: &Path) -> Result<RunConfig> {
    parse_config(&read_text(path)?)
}

/// One truncation window as written in a window file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub n: i64,
    pub k: i64,
    pub l: i64,
    #[serde(default = "default_depth")]
    pub depth: usize,
}

fn default_depth() -> usize {
    30
}

impl WindowSpec {
    pub fn window(&self) -> Result<TruncationWindow> {
        TruncationWindow::new(self.n, self.k, self.l, self.depth)
    }
}

/// Accepts a single window object or an array of them.
pub fn parse_windows(text: &str) -> Result<Vec<WindowSpec>> {
    let doc: Value = serde_json::from_str(text)?;
    let specs = match doc {
        Value::Array(items) => items
            .into_iter()
            .map(serde_json::from_value)
            .collect::<std::result::Result<Vec<WindowSpec>, _>>()?,
        other => vec![serde_json::from_value(other)?],
    };
    for s in &specs {
        s.window()?;
    }
    Ok(specs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::base_curve;

    #[test]
    fn config_keys() {
        let cfg = parse_config(r#"{"seed": 9, "epsilon": 0.01, "trials": 5}"#).unwrap();
        assert_eq!(
            (cfg.seed, cfg.trials, cfg.tolerances.epsilon),
            (9, 5, Some(0.01))
        );
        assert!(matches!(
            parse_config(r#"{"sead": 9}"#),
            Err(Error::Parse(_))
        ));
        assert!(parse_config(r#"{"min_angle_deg": -1}"#).is_err());
        assert!(parse_config("[]").is_err());
    }

    #[test]
    fn mixed_coordinates() {
        let text = r#"{"points": [[1, 0], ["0.8", "0.6"], [0, 1], [-0.6, "0.8"],
            [-1, 0], [-0.8, -0.6], [0, -1], ["6e-1", -0.8]]}"#;
        let c = parse_curve(text).unwrap();
        assert_eq!(c.len(), 8);
        assert_eq!(c.vertex(1), Point::new(0.8, 0.6));
        assert_eq!(c.vertex(7).x, 0.6);
    }

    #[test]
    fn bad_inputs_are_parse_errors() {
        for text in [
            r#"{"pts": []}"#,
            r#"{"points": [[1, 2, 3]]}"#,
            r#"{"points": [["abc", 1]]}"#,
            r#"{"points": [["inf", 1]]}"#,
            "not json",
        ] {
            assert!(
                matches!(parse_curve(text), Err(Error::Parse(_) | Error::Json(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn curve_round_trip() {
        let c = base_curve(2);
        assert_eq!(parse_curve(&curve_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg = parse_config(r#"{"min_angle_deg": 5.0, "seed": 9}"#).unwrap();
        assert_eq!(cfg.tolerances.min_angle_deg, 5.0);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.trials, 100);
        assert!(parse_config(r#"{"index_residual": -1}"#).is_err());
    }

    #[test]
    fn windows() {
        let one = parse_windows(r#"{"n": 0, "k": 1, "l": 1}"#).unwrap();
        assert_eq!(one[0].depth, 30);
        let many =
            parse_windows(r#"[{"n": 1, "k": -1, "l": 1, "depth": 5}, {"n": 2, "k": 1, "l": 3}]"#)
                .unwrap();
        assert_eq!(many.len(), 2);
        assert!(parse_windows(r#"{"n": 0, "k": 2, "l": 1}"#).is_err());
    }
}
