//! The crossing sum `F`, the winding term `G`, their sum and `K = Ψ ∘ F`.

use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::curve::{find_crossings, validate_stable, whitney_number, Crossing, PlanarCurve};
use crate::error::{Error, Result};
use crate::indices::{default_epsilon, double_index};
use crate::symbols::{project, DoubleIndex, XSymbol, XVector, YVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingIndices {
    pub crossing: Crossing,
    pub epsilon: f64,
    /// Index of the arc led by `u1`.
    pub first: DoubleIndex,
    /// Index of the arc led by `u2`.
    pub second: DoubleIndex,
}

impl CrossingIndices {
    pub fn symbol(&self) -> XSymbol {
        XSymbol::from_indices(self.first, self.second)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub crossing_sum: XVector,
    pub winding_term: XVector,
    pub invariant: XVector,
    pub projection: YVector,
    pub whitney: i64,
    pub per_crossing: Vec<CrossingIndices>,
}

impl InvariantResult {
    /// Canonical multi-line text form.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "whitney = {}\ncrossings = {}\nF = {}\nG = {}\nF_hat = {}\nK = {}\n",
            self.whitney,
            self.per_crossing.len(),
            self.crossing_sum,
            self.winding_term,
            self.invariant,
            self.projection
        );
        for (i, c) in self.per_crossing.iter().enumerate() {
            s.push_str(&format!(
                "crossing {i}: sign {:+} at ({}, {}) indices {} {}\n",
                c.crossing.sign,
                fixed6(c.crossing.location.x),
                fixed6(c.crossing.location.y),
                c.first,
                c.second
            ));
        }
        s
    }
}

fn fixed6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// Checks stability and returns the crossing list.
pub fn stable_crossings(curve: &PlanarCurve, cfg: &ToleranceConfig) -> Result<Vec<Crossing>> {
    let report = validate_stable(curve, cfg);
    if !report.stable {
        return Err(Error::NotStable(Box::new(report)));
    }
    find_crossings(curve)
}

/// Full evaluation with the grading check on every crossing term.
pub fn compute(curve: &PlanarCurve, cfg: &ToleranceConfig) -> Result<InvariantResult> {
    let crossings = stable_crossings(curve, cfg)?;
    let whitney = whitney_number(curve, cfg)?;
    let mut crossing_sum = XVector::zero();
    let mut per_crossing = Vec::with_capacity(crossings.len());
    for idx in 0..crossings.len() {
        let epsilon = default_epsilon(curve, &crossings, idx, cfg);
        let (first, second) = double_index(curve, &crossings, idx, Some(epsilon), cfg)?;
        let entry = CrossingIndices {
            crossing: crossings[idx].clone(),
            epsilon,
            first,
            second,
        };
        let sym = entry.symbol();
        if sym.grade() != whitney {
            return Err(Error::GradingViolation {
                symbol: sym.to_string(),
                grade: sym.grade(),
                whitney,
            });
        }
        crossing_sum.add_term(sym, crate::symbols::rat(1));
        per_crossing.push(entry);
    }
    let winding_term = winding_term_for(whitney);
    let invariant = crossing_sum.plus(&winding_term);
    let projection = project(&crossing_sum);
    Ok(InvariantResult {
        crossing_sum,
        winding_term,
        invariant,
        projection,
        whitney,
        per_crossing,
    })
}

/// `X^{ω,0}_{1,−1}`.
pub fn winding_term_for(whitney: i64) -> XVector {
    XVector::single(XSymbol::new(whitney, 0, 1, -1))
}

pub fn crossing_sum_of(curve: &PlanarCurve, cfg: &ToleranceConfig) -> Result<XVector> {
    Ok(compute(curve, cfg)?.crossing_sum)
}

pub fn winding_term_of(curve: &PlanarCurve, cfg: &ToleranceConfig) -> Result<XVector> {
    Ok(winding_term_for(whitney_number(curve, cfg)?))
}

pub fn invariant_of(curve: &PlanarCurve, cfg: &ToleranceConfig) -> Result<XVector> {
    Ok(compute(curve, cfg)?.invariant)
}

pub fn projection_of(curve: &PlanarCurve, cfg: &ToleranceConfig) -> Result<YVector> {
    Ok(compute(curve, cfg)?.projection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::base_curve;
    use crate::symbols::{rat, winding_functional};

    #[test]
    fn circles() {
        let cfg = ToleranceConfig::default();
        let c = base_curve(1);
        let r = compute(&c, &cfg).unwrap();
        assert!(r.crossing_sum.is_zero() && r.projection.is_zero());
        assert_eq!(r.invariant.to_string(), "X[1,0;1,-1]");
        let rev = compute(&c.reversed(), &cfg).unwrap();
        assert!(rev.crossing_sum.is_zero());
        assert_eq!(rev.invariant.to_string(), "X[-1,0;1,-1]");
        assert_ne!(r.invariant, rev.invariant);
    }

    #[test]
    fn figure_eight() {
        let cfg = ToleranceConfig::default();
        let r = compute(&base_curve(0), &cfg).unwrap();
        assert_eq!(r.whitney, 0);
        assert_eq!(r.crossing_sum.to_string(), "X[0,0;1,-1]");
        assert_eq!(r.winding_term.to_string(), "X[0,0;1,-1]");
        assert_eq!(r.invariant.to_string(), "2*X[0,0;1,-1]");
        assert_eq!(r.projection.to_string(), "-Y[0;-1,1]");
        assert_eq!(winding_functional(&r.projection, 0), rat(2));
    }

    #[test]
    fn three_turn_curve_has_two_grade_three_terms() {
        let cfg = ToleranceConfig::default();
        let r = compute(&base_curve(3), &cfg).unwrap();
        assert_eq!(r.whitney, 3);
        assert_eq!(r.per_crossing.len(), 2);
        for c in &r.per_crossing {
            assert_eq!(c.symbol().grade(), 3);
        }
    }
}
