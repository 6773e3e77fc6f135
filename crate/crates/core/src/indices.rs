//! Exterior arcs of a crossing and their double indices.
//!
//! A small disc around the crossing is removed. The two strands through it
//! are cut where they meet the boundary circle, which leaves two arcs in the
//! complementary annulus. Each arc gets a top index (signed count of its own
//! self-crossings) and a bottom index `(φ − ω)/π`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::curve::{Crossing, PlanarCurve};
use crate::error::{Error, Result};
use crate::geom::{positive_angle, signed_angle, Point};
use crate::symbols::DoubleIndex;

/// Largest tolerated angle between a strand end and the radial direction.
pub const MAX_END_CORRECTION_DEG: f64 = 80.0;

/// The piece of one strand inside the excision disc, as unwrapped parameters
/// `entry < through < exit`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pass {
    pub entry: f64,
    pub through: f64,
    pub exit: f64,
}

fn circle_roots(a: Point, b: Point, center: Point, radius: f64) -> Option<(f64, f64)> {
    let d = b - a;
    let q = a - center;
    let aa = d.norm_sq();
    let bb = q.dot(d);
    let cc = q.norm_sq() - radius * radius;
    let disc = bb * bb - aa * cc;
    if disc < 0.0 {
        return None;
    }
    let r = disc.sqrt();
    Some(((-bb - r) / aa, (-bb + r) / aa))
}

/// Follows the strand through `through` in both directions until it leaves
/// the disc of the given radius.
pub fn pass_through(curve: &PlanarCurve, through: f64, center: Point, radius: f64) -> Result<Pass> {
    if curve.point_at(through).distance(center) >= radius {
        return Err(Error::PassOutsideDisc { param: through });
    }
    let n = curve.len() as i64;
    let base = through.floor() as i64;
    let frac = through - base as f64;
    let seg = |i: i64| curve.segment(i.rem_euclid(n) as usize);

    let mut exit = None;
    for i in base..base + n {
        let (a, b) = seg(i);
        if b.distance(center) >= radius {
            let lo = if i == base { frac } else { 0.0 };
            let u = circle_roots(a, b, center, radius).map_or(1.0, |(_, hi)| hi);
            exit = Some(i as f64 + u.clamp(lo, 1.0));
            break;
        }
    }
    let mut entry = None;
    for i in (base - n + 1..=base).rev() {
        let (a, b) = seg(i);
        if a.distance(center) >= radius {
            let hi = if i == base { frac } else { 1.0 };
            let u = circle_roots(a, b, center, radius).map_or(0.0, |(lo, _)| lo);
            entry = Some(i as f64 + u.clamp(0.0, hi));
            break;
        }
    }
    match (entry, exit) {
        (Some(entry), Some(exit)) => Ok(Pass {
            entry,
            through,
            exit,
        }),
        _ => Err(Error::EpsilonTooLarge {
            epsilon: radius,
            segment: base.rem_euclid(n) as usize,
        }),
    }
}

/// Checks that no segment outside the given passes comes within `radius` of
/// `center`.
pub fn check_disc_clear(
    curve: &PlanarCurve,
    center: Point,
    radius: f64,
    passes: &[Pass],
) -> Result<()> {
    let n = curve.len() as i64;
    let covered = |i: usize| {
        passes.iter().any(|p| {
            let lo = p.entry.floor() as i64;
            let hi = p.exit.floor() as i64;
            (i as i64 - lo).rem_euclid(n) <= hi - lo
        })
    };
    for i in 0..curve.len() {
        if covered(i) {
            continue;
        }
        if curve.segment_distance(i, center).0 < radius {
            return Err(Error::EpsilonTooLarge {
                epsilon: radius,
                segment: i,
            });
        }
    }
    Ok(())
}

/// Default excision radius for crossing `idx`: a fraction of the distance to
/// the nearest other crossing, the nearest non-incident segment and the
/// endpoints of the two crossing segments.
pub fn default_epsilon(
    curve: &PlanarCurve,
    crossings: &[Crossing],
    idx: usize,
    cfg: &ToleranceConfig,
) -> f64 {
    if let Some(eps) = cfg.epsilon {
        return eps;
    }
    let c = &crossings[idx];
    let n = curve.len();
    let near = |i: usize, s: usize| {
        let d = i.abs_diff(s);
        d <= 1 || d == n - 1
    };
    let mut clearance = f64::INFINITY;
    for (j, other) in crossings.iter().enumerate() {
        if j != idx {
            clearance = clearance.min(c.location.distance(other.location));
        }
    }
    for i in 0..n {
        if !near(i, c.seg_a) && !near(i, c.seg_b) {
            clearance = clearance.min(curve.segment_distance(i, c.location).0);
        }
    }
    for s in [c.seg_a, c.seg_b] {
        let (a, b) = curve.segment(s);
        clearance = clearance
            .min(a.distance(c.location))
            .min(b.distance(c.location));
    }
    cfg.epsilon_fraction * clearance
}

/// One of the arcs left after excising a disc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExteriorArc {
    /// Owning crossing, when the disc is centred on one.
    pub crossing: Option<usize>,
    pub center: Point,
    /// Start parameter, on the excision circle.
    pub from: f64,
    /// End parameter, unwrapped so that `to > from`.
    pub to: f64,
    /// Which frame tangent `u_i` leads into this arc (0 for discs that are
    /// not centred on a crossing).
    pub which_tangent: u8,
    pub epsilon: f64,
    pub param_length: f64,
}

impl ExteriorArc {
    /// Whether the (wrapped) parameter lies strictly inside the arc.
    pub fn contains(&self, param: f64) -> bool {
        self.unwrap(param) < self.to
    }

    /// Lifts a parameter to the first lap after `from`.
    pub fn unwrap(&self, param: f64) -> f64 {
        let mut p = param;
        while p <= self.from {
            p += self.param_length;
        }
        while p - self.param_length > self.from {
            p -= self.param_length;
        }
        p
    }
}

/// Arcs outside a disc crossed by the strands through the given parameters.
///
/// Passes are sorted by parameter; arc `i` of the result runs from the exit
/// of pass `i` to the entry of pass `i + 1` (cyclically). Returns the sorted
/// pass parameters alongside the arcs.
pub fn disc_arcs(
    curve: &PlanarCurve,
    center: Point,
    radius: f64,
    through: &[f64],
) -> Result<(Vec<f64>, Vec<ExteriorArc>)> {
    let l = curve.param_length();
    let mut order: Vec<f64> = through.iter().map(|&p| curve.wrap(p)).collect();
    order.sort_by(f64::total_cmp);
    let passes: Vec<Pass> = order
        .iter()
        .map(|&p| pass_through(curve, p, center, radius))
        .collect::<Result<_>>()?;
    check_disc_clear(curve, center, radius, &passes)?;

    let m = passes.len();
    let mut arcs = Vec::with_capacity(m);
    let mut covered = 0.0;
    for i in 0..m {
        let from = passes[i].exit;
        let mut to = passes[(i + 1) % m].entry;
        while to <= from {
            to += l;
        }
        covered += to - from + passes[i].exit - passes[i].entry;
        arcs.push(ExteriorArc {
            crossing: None,
            center,
            from,
            to,
            which_tangent: 0,
            epsilon: radius,
            param_length: l,
        });
    }
    if (covered - l).abs() > 1e-6 * l {
        let seg = curve.segment_of(order[0]);
        return Err(Error::EpsilonTooLarge {
            epsilon: radius,
            segment: seg,
        });
    }
    Ok((order, arcs))
}

/// The two exterior arcs of `crossings[idx]`, ordered by `which_tangent`.
pub fn exterior_arcs(
    curve: &PlanarCurve,
    crossings: &[Crossing],
    idx: usize,
    epsilon: f64,
) -> Result<(ExteriorArc, ExteriorArc)> {
    let c = &crossings[idx];
    let (_, mut arcs) = disc_arcs(curve, c.location, epsilon, &[c.s, c.t])?;
    let mut after_t = arcs.pop().expect("two passes");
    let mut after_s = arcs.pop().expect("two passes");
    // The arc after s is led by the tangent at s, which is u1 iff sign > 0.
    let (w_s, w_t) = if c.sign > 0 { (1, 2) } else { (2, 1) };
    for (arc, w) in [(&mut after_s, w_s), (&mut after_t, w_t)] {
        arc.crossing = Some(idx);
        arc.which_tangent = w;
    }
    Ok(if w_s == 1 {
        (after_s, after_t)
    } else {
        (after_t, after_s)
    })
}

/// Double index of an arc; its crossings must be the full crossing list of
/// `curve`.
pub fn arc_index(
    curve: &PlanarCurve,
    crossings: &[Crossing],
    arc: &ExteriorArc,
    cfg: &ToleranceConfig,
) -> Result<DoubleIndex> {
    let angles = arc_angles(curve, arc)?;
    Ok(DoubleIndex::new(
        top_index(arc, crossings),
        bottom_index(&angles, cfg)?,
    ))
}

/// Signed count of the crossings of `crossings` that the arc passes twice.
pub fn top_index(arc: &ExteriorArc, crossings: &[Crossing]) -> i64 {
    crossings
        .iter()
        .filter_map(|v| {
            let s = arc.unwrap(v.s);
            let t = arc.unwrap(v.t);
            if s < arc.to && t < arc.to {
                // Visiting t before s swaps the tangent order.
                Some(if s < t {
                    v.sign as i64
                } else {
                    -(v.sign as i64)
                })
            } else {
                None
            }
        })
        .sum()
}

/// Angles of an exterior arc measured about the excision centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcAngles {
    /// Positive angle from the initial to the final boundary point.
    pub sweep: f64,
    /// Rotation of the radius vector along the arc.
    pub radial_turn: f64,
    /// Rotation of the tangent, with both ends turned to the radial direction.
    pub tangent_turn: f64,
    /// Rotation applied at the start and end to make the ends radial.
    pub end_corrections: [f64; 2],
}

pub fn arc_angles(curve: &PlanarCurve, arc: &ExteriorArc) -> Result<ArcAngles> {
    let pts = curve.subarc_points(arc.from, arc.to);
    let c = arc.center;
    let first = pts[0];
    let last = pts[pts.len() - 1];

    let chords: Vec<Point> = pts
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| d.norm_sq() > 0.0)
        .collect();
    let start_corr = signed_angle(first - c, chords[0]);
    let end_corr = signed_angle(chords[chords.len() - 1], c - last);
    for corr in [start_corr, end_corr] {
        let deg = corr.abs().to_degrees();
        if deg > MAX_END_CORRECTION_DEG {
            return Err(Error::EndsNotPerpendicular { angle_deg: deg });
        }
    }
    let turns: f64 = chords.windows(2).map(|w| signed_angle(w[0], w[1])).sum();
    let tangent_turn = start_corr + turns + end_corr;

    let mut radial_turn = 0.0;
    for w in pts.windows(2) {
        if w[0].distance(c) == 0.0 || w[1].distance(c) == 0.0 {
            return Err(Error::BasePointOnCurve { distance: 0.0 });
        }
        radial_turn += signed_angle(w[0] - c, w[1] - c);
    }
    let sweep = positive_angle((last - c).angle() - (first - c).angle());
    Ok(ArcAngles {
        sweep,
        radial_turn,
        tangent_turn,
        end_corrections: [start_corr, end_corr],
    })
}

/// Rounds `(φ − ω)/π`, which must be an odd integer.
pub fn bottom_index(angles: &ArcAngles, cfg: &ToleranceConfig) -> Result<i64> {
    let value = (angles.radial_turn - angles.tangent_turn) / PI;
    let r = value.round();
    if (value - r).abs() >= cfg.index_residual || (r as i64).rem_euclid(2) != 1 {
        return Err(Error::NonOddBottomIndex { value });
    }
    Ok(r as i64)
}

/// Outcome of comparing the combinatorial top index with the angle formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopIndexCheck {
    pub combinatorial: i64,
    pub formula: f64,
    pub residual: f64,
    pub pass: bool,
}

/// Compares the top index with `(2φ − ω − θ + π)/2π`.
pub fn crosscheck_top_index(
    arc: &ExteriorArc,
    angles: &ArcAngles,
    crossings: &[Crossing],
    cfg: &ToleranceConfig,
) -> TopIndexCheck {
    let combinatorial = top_index(arc, crossings);
    let formula = (2.0 * angles.radial_turn - angles.tangent_turn - angles.sweep + PI) / TAU;
    let residual = (formula - combinatorial as f64).abs();
    TopIndexCheck {
        combinatorial,
        formula,
        residual,
        pass: residual < cfg.index_residual,
    }
}

/// Everything computed for one exterior arc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcReport {
    pub arc: ExteriorArc,
    pub angles: ArcAngles,
    pub index: DoubleIndex,
    pub top_index_check: TopIndexCheck,
}

pub fn arc_report(
    curve: &PlanarCurve,
    crossings: &[Crossing],
    arc: ExteriorArc,
    cfg: &ToleranceConfig,
) -> Result<ArcReport> {
    let angles = arc_angles(curve, &arc)?;
    let i2 = bottom_index(&angles, cfg)?;
    let i1 = top_index(&arc, crossings);
    let top_index_check = crosscheck_top_index(&arc, &angles, crossings, cfg);
    Ok(ArcReport {
        arc,
        angles,
        index: DoubleIndex::new(i1, i2),
        top_index_check,
    })
}

/// Both arc reports of a crossing at an explicit excision radius.
pub fn crossing_reports(
    curve: &PlanarCurve,
    crossings: &[Crossing],
    idx: usize,
    epsilon: f64,
    cfg: &ToleranceConfig,
) -> Result<(ArcReport, ArcReport)> {
    let (a1, a2) = exterior_arcs(curve, crossings, idx, epsilon)?;
    Ok((
        arc_report(curve, crossings, a1, cfg)?,
        arc_report(curve, crossings, a2, cfg)?,
    ))
}

/// Double indices of the arcs led by `u1` and `u2`. Uses the default radius
/// when `epsilon` is `None`.
pub fn double_index(
    curve: &PlanarCurve,
    crossings: &[Crossing],
    idx: usize,
    epsilon: Option<f64>,
    cfg: &ToleranceConfig,
) -> Result<(DoubleIndex, DoubleIndex)> {
    let eps = epsilon.unwrap_or_else(|| default_epsilon(curve, crossings, idx, cfg));
    let (r1, r2) = crossing_reports(curve, crossings, idx, eps, cfg)?;
    Ok((r1.index, r2.index))
}
