//! Deterministic curve families: base curves for each Whitney number and
//! random trigonometric curves.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::curve::{find_crossings, gauss_word, validate_stable, PlanarCurve};
use crate::error::Result;
use crate::geom::Point;
use crate::invariant::compute;

/// `z(t) = Σ c_j e^{i f_j t}` sampled as a closed polyline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigCurve {
    pub terms: Vec<(i64, [f64; 2])>,
}

impl TrigCurve {
    pub fn eval(&self, t: f64) -> Point {
        let z: Complex64 = self
            .terms
            .iter()
            .map(|&(f, [re, im])| Complex64::new(re, im) * Complex64::from_polar(1.0, f as f64 * t))
            .sum();
        Point::new(z.re, z.im)
    }

    /// Samples at `t_i = 2π(i + 1/2)/n`.
    pub fn sample(&self, n: usize) -> Result<PlanarCurve> {
        sample_fn(n, |t| self.eval(t))
    }
}

pub fn sample_fn(n: usize, f: impl Fn(f64) -> Point) -> Result<PlanarCurve> {
    PlanarCurve::new(
        (0..n)
            .map(|i| f(TAU * (i as f64 + 0.5) / n as f64))
            .collect(),
    )
}

/// Loop size of the epitrochoid base curve with winding `m ≥ 2`.
fn loop_ratio(m: i64) -> f64 {
    1.4 / m as f64
}

/// Generator and sample count of the base curve with Whitney number `m`:
/// the figure eight for `m = 0`, a circle with `|m| − 1` small interior
/// loops otherwise, reflected in the x-axis for negative `m`.
pub fn base_source(m: i64) -> (TrigCurve, usize) {
    match m {
        // (sin 2t, sin t)
        0 => (
            TrigCurve {
                terms: vec![
                    (2, [0.0, -0.5]),
                    (-2, [0.0, 0.5]),
                    (1, [0.5, 0.0]),
                    (-1, [-0.5, 0.0]),
                ],
            },
            256,
        ),
        1 => (
            TrigCurve {
                terms: vec![(1, [1.0, 0.0])],
            },
            64,
        ),
        m if m >= 2 => (
            TrigCurve {
                terms: vec![(1, [1.0, 0.0]), (m, [loop_ratio(m), 0.0])],
            },
            160 * m as usize,
        ),
        m => {
            let (tc, n) = base_source(-m);
            // Conjugating every coefficient and negating every mode reflects y.
            let terms = tc
                .terms
                .iter()
                .map(|&(f, [re, im])| (-f, [re, -im]))
                .collect();
            (TrigCurve { terms }, n)
        }
    }
}

pub fn base_curve(m: i64) -> PlanarCurve {
    let (tc, n) = base_source(m);
    tc.sample(n).expect("base curves are valid polylines")
}

/// Random curve with Fourier modes in `-3..=3`.
pub fn random_trig(rng: &mut impl Rng) -> TrigCurve {
    let lead: i64 = [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
    let mut terms = vec![(lead, polar(1.0, rng.gen_range(0.0..TAU)))];
    for f in -3i64..=3 {
        if f == lead {
            continue;
        }
        let r = rng.gen_range(0.0..0.9) / (1.0 + (f - lead).abs() as f64 * 0.3);
        terms.push((f, polar(r, rng.gen_range(0.0..TAU))));
    }
    TrigCurve { terms }
}

fn polar(r: f64, a: f64) -> [f64; 2] {
    [r * a.cos(), r * a.sin()]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusCurve {
    pub name: String,
    pub curve: PlanarCurve,
    pub source: TrigCurve,
    pub samples: usize,
}

impl CorpusCurve {
    /// The same smooth curve sampled `factor` times as densely.
    pub fn resampled(&self, factor: usize) -> Result<PlanarCurve> {
        self.source.sample(factor * self.samples)
    }
}

pub const RANDOM_SAMPLES: usize = 480;

/// Accepts a random curve when it is stable with a comfortable margin, has
/// between one and ten crossings, its crossing pattern survives 2× and 4×
/// denser sampling, and the full evaluation succeeds.
pub fn accept_trig(tc: &TrigCurve, cfg: &ToleranceConfig) -> Option<PlanarCurve> {
    let curve = tc.sample(RANDOM_SAMPLES).ok()?;
    // A stricter check than the default leaves room for perturbation.
    let strict = ToleranceConfig {
        min_angle_deg: 2.0 * cfg.min_angle_deg,
        min_sep_fraction: 4.0 * cfg.min_sep_fraction,
        ..cfg.clone()
    };
    let report = validate_stable(&curve, &strict);
    if !report.stable || !(1..=10).contains(&report.crossing_count) {
        return None;
    }
    let word = gauss_word(&find_crossings(&curve).ok()?);
    for k in [2, 4] {
        let fine = tc.sample(k * RANDOM_SAMPLES).ok()?;
        if gauss_word(&find_crossings(&fine).ok()?) != word {
            return None;
        }
    }
    compute(&curve, cfg).ok()?;
    Some(curve)
}

/// `count` accepted random curves from a seeded stream.
pub fn random_curves(count: usize, seed: u64, cfg: &ToleranceConfig) -> Vec<CorpusCurve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0usize;
    while out.len() < count {
        tries += 1;
        let tc = random_trig(&mut rng);
        if let Some(curve) = accept_trig(&tc, cfg) {
            out.push(CorpusCurve {
                name: format!("trig-{seed}-{tries}"),
                curve,
                source: tc,
                samples: RANDOM_SAMPLES,
            });
        }
    }
    out
}

/// Base curves for windings `-4..=4` followed by random curves, `total`
/// curves in all.
pub fn standard_corpus(total: usize, seed: u64, cfg: &ToleranceConfig) -> Vec<CorpusCurve> {
    let mut out: Vec<CorpusCurve> = (-4..=4)
        .map(|m| {
            let (source, samples) = base_source(m);
            CorpusCurve {
                name: format!("base{m}"),
                curve: base_curve(m),
                source,
                samples,
            }
        })
        .collect();
    let extra = total.saturating_sub(out.len());
    out.extend(random_curves(extra, seed, cfg));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::whitney_number;

    #[test]
    fn base_curves_have_the_requested_winding() {
        let cfg = ToleranceConfig::default();
        for m in -4..=4 {
            let c = base_curve(m);
            let report = validate_stable(&c, &cfg);
            assert!(report.stable, "m = {m}: {report:?}");
            assert_eq!(whitney_number(&c, &cfg).unwrap(), m);
            let expect = if m == 0 {
                1
            } else {
                m.unsigned_abs() as usize - 1
            };
            assert_eq!(report.crossing_count, expect, "m = {m}");
        }
    }

    #[test]
    fn three_turn_base_curve_matches_brute_force() {
        // Every pair of non-adjacent segments, tested by plain floating-point algebra.
        let c = base_curve(3);
        let n = c.len();
        let mut hits = 0;
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (p, q) = c.segment(i);
                let (r, s) = c.segment(j);
                let d = (q - p).cross(s - r);
                let u = (r - p).cross(s - r) / d;
                let v = (r - p).cross(q - p) / d;
                if (0.0..1.0).contains(&u) && (0.0..1.0).contains(&v) {
                    hits += 1;
                }
            }
        }
        assert_eq!(hits, 2);
        assert_eq!(find_crossings(&c).unwrap().len(), 2);
    }

    #[test]
    fn random_curves_are_reproducible() {
        let cfg = ToleranceConfig::default();
        let a = random_curves(3, 7, &cfg);
        let b = random_curves(3, 7, &cfg);
        assert_eq!(a, b);
        for c in &a {
            let k = find_crossings(&c.curve).unwrap().len();
            assert!((1..=10).contains(&k));
        }
    }
}
