//! Small perturbations and the elementary moves through codimension-one
//! strata, realized on polylines by finger surgery.
//!
//! A finger is pushed out of one strand along an axis. Stopping it just
//! short of another strand and pushing it just through gives the two sides
//! of a self-tangency. A long finger whose leg is slid across an existing
//! crossing gives the two sides of a triple point.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::curve::{
    find_crossings, gauss_word, validate_stable, whitney_number, Crossing, PlanarCurve,
};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::indices::{arc_index, default_epsilon, disc_arcs};
use crate::invariant::{compute, stable_crossings};
use crate::symbols::{
    delta_a, predicted_delta, DoubleIndex, JKind, JSymbol, SSymbol, XSymbol, XVector,
};

/// Lowest acceptable `|sin|` of the angle between a strand and a finger axis.
const MIN_AXIS_SINE: f64 = 0.5;
/// How often a failed construction is retried with half the finger width.
const WIDTH_RETRIES: usize = 5;
/// Narrowest finger, relative to the curve diameter.
const MIN_WIDTH_FRACTION: f64 = 1e-4;

fn lost(msg: impl Into<String>) -> Error {
    Error::StabilityLost(msg.into())
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::SiteInvalid(msg.into())
}

/// Adds a smooth random displacement of the given maximal size and
/// resamples the polyline with between `n` and `9n/8` vertices.
///
/// Fails with [`Error::StabilityLost`] when the result is not a stable curve
/// with the same crossing pattern and winding number as the input.
pub fn perturb(
    curve: &PlanarCurve,
    seed: u64,
    amplitude: f64,
    cfg: &ToleranceConfig,
) -> Result<PlanarCurve> {
    if amplitude == 0.0 {
        return Ok(curve.clone());
    }
    let word = gauss_word(&stable_crossings(curve, cfg)?);
    let winding = whitney_number(curve, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = || Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let modes: Vec<[Point; 2]> = (0..3).map(|_| [unit(), unit()]).collect();
    let l = curve.param_length();
    let field = |p: f64| {
        let u = TAU * p / l;
        modes
            .iter()
            .enumerate()
            .fold(Point::new(0.0, 0.0), |acc, (f, [c, s])| {
                let k = (f + 1) as f64;
                acc + (*c * (k * u).cos() + *s * (k * u).sin()) * (1.0 / k)
            })
    };
    let n = curve.len();
    let count = rng.gen_range(n..=n + n / 8);
    let shift: f64 = rng.gen_range(0.0..1.0);
    let params: Vec<f64> = (0..count)
        .map(|j| (j as f64 + shift) * l / count as f64)
        .collect();
    let disp: Vec<Point> = params.iter().map(|&p| field(p)).collect();
    let peak = disp.iter().map(|d| d.norm()).fold(0.0, f64::max);
    let scale = if peak > 0.0 { amplitude / peak } else { 0.0 };
    let points = params
        .iter()
        .zip(&disp)
        .map(|(&p, &d)| curve.point_at(p) + d * scale)
        .collect();
    let out = PlanarCurve::new(points).map_err(|e| lost(e.to_string()))?;
    let report = validate_stable(&out, cfg);
    if !report.stable {
        return Err(lost(format!(
            "{} violation(s) after perturbation",
            report.violations.len()
        )));
    }
    let moved = find_crossings(&out)?;
    if gauss_word(&moved) != word {
        return Err(lost("crossing pattern changed"));
    }
    if whitney_number(&out, cfg).ok() != Some(winding) {
        return Err(lost("winding number changed"));
    }
    Ok(out)
}

/// First point where the ray `origin + τ·dir`, `τ > min_tau`, meets the
/// curve, as `(param, τ)`.
fn ray_hit(
    curve: &PlanarCurve,
    origin: Point,
    dir: Point,
    min_tau: f64,
    skip: impl Fn(usize) -> bool,
) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for i in (0..curve.len()).filter(|&i| !skip(i)) {
        let (a, b) = curve.segment(i);
        let e = b - a;
        let den = dir.cross(e);
        if den == 0.0 {
            continue;
        }
        let w = a - origin;
        let tau = w.cross(e) / den;
        let u = w.cross(dir) / den;
        if tau > min_tau && (0.0..=1.0).contains(&u) && best.is_none_or(|(_, bt)| tau < bt) {
            best = Some((i as f64 + u.min(1.0 - 1e-12), tau));
        }
    }
    best
}

fn line_meet(p: Point, d: Point, q: Point, e: Point) -> Point {
    let den = d.cross(e);
    p + d * ((q - p).cross(e) / den)
}

/// A curve with a finger grafted on, plus where the finger sits in it.
struct Finger {
    curve: PlanarCurve,
    /// Segments `0..end` belong to the finger (including its fillets).
    end: usize,
    apex: usize,
    /// Unit vector along which the strand runs across the finger base.
    across: Point,
}

/// Walks the strand from `p` until `coord` reaches `target`, forwards when
/// `target > 0`. The coordinate must change monotonically on the way.
fn cut_param(
    curve: &PlanarCurve,
    p: f64,
    coord: impl Fn(Point) -> f64,
    target: f64,
) -> Result<f64> {
    let n = curve.len() as i64;
    let fwd = target > 0.0;
    let mut prev = (p, coord(curve.point_at(p)));
    let mut k = if fwd {
        p.floor() as i64 + 1
    } else {
        p.ceil() as i64 - 1
    };
    for _ in 0..n {
        let v = coord(curve.vertex(k.rem_euclid(n) as usize));
        if (fwd && v < prev.1) || (!fwd && v > prev.1) {
            return Err(invalid("strand folds back near the finger base"));
        }
        if (fwd && v >= target) || (!fwd && v <= target) {
            let u = (target - prev.1) / (v - prev.1);
            return Ok(prev.0 + u * (k as f64 - prev.0));
        }
        prev = (k as f64, v);
        k += if fwd { 1 } else { -1 };
    }
    Err(invalid("finger base does not fit on the strand"))
}

fn quad_bezier(p0: Point, p1: Point, p2: Point, t: f64) -> Point {
    p0 * ((1.0 - t) * (1.0 - t)) + p1 * (2.0 * (1.0 - t) * t) + p2 * (t * t)
}

/// Replaces the strand around `p` by a finger of half-width `h` whose axis
/// runs from `curve.point_at(p)` along `axis` with its apex at `height`.
fn build_finger(curve: &PlanarCurve, p: f64, axis: Point, height: f64, h: f64) -> Result<Finger> {
    let base = curve.point_at(p);
    let d = curve.tangent_at(p);
    let side = axis.perp();
    if d.dot(side).abs() < MIN_AXIS_SINE {
        return Err(invalid("base strand is nearly parallel to the finger axis"));
    }
    let across = if d.dot(side) > 0.0 { side } else { side * -1.0 };
    let local = |q: Point| ((q - base).dot(across), (q - base).dot(axis));
    let world = |u: f64, v: f64| base + across * u + axis * v;

    let lo = cut_param(curve, p, |q| local(q).0, -2.0 * h)?;
    let hi = cut_param(curve, p, |q| local(q).0, 2.0 * h)?;
    let (a, b) = (curve.point_at(lo), curve.point_at(hi));
    let (ya, yb) = (local(a).1, local(b).1);
    // A strand at the steepest accepted slope rises about 3.5h over 2h.
    if ya.abs() > 4.5 * h || yb.abs() > 4.5 * h {
        return Err(invalid("base strand bends too much under the finger"));
    }
    let top = height - h;
    if top - ya.max(yb) - h < 0.5 * h {
        return Err(invalid("finger is too short for its width"));
    }

    let mut pts = vec![a];
    let (l0, l2) = (world(-h, ya + h), world(h, yb + h));
    pts.extend((1..=8).map(|j| quad_bezier(a, world(-h, ya), l0, j as f64 / 8.0)));
    let legs = ((top - ya.min(yb) - h) / h).ceil().clamp(1.0, 32.0) as usize;
    pts.extend((1..=legs).map(|j| l0.lerp(world(-h, top), j as f64 / legs as f64)));
    let mut apex = 0;
    for j in 1..=16 {
        let th = PI - PI * j as f64 / 16.0;
        if j == 8 {
            apex = pts.len();
        }
        pts.push(world(h * th.cos(), top + h * th.sin()));
    }
    pts.extend((1..=legs).map(|j| world(h, top).lerp(l2, j as f64 / legs as f64)));
    pts.extend((1..8).map(|j| quad_bezier(l2, world(h, yb), b, j as f64 / 8.0)));
    let end = pts.len();
    pts.push(b);

    let n = curve.len() as i64;
    let tiny = 1e-9 * h;
    let first = hi.ceil() as i64;
    let last = lo.floor() as i64 + n;
    for k in first..=last {
        let v = curve.vertex(k.rem_euclid(n) as usize);
        if v.distance(b) > tiny && v.distance(a) > tiny {
            pts.push(v);
        }
    }
    let curve =
        PlanarCurve::new(pts).map_err(|e| invalid(format!("finger polyline rejected: {e}")))?;
    Ok(Finger {
        curve,
        end,
        apex,
        across,
    })
}

/// Where to realize a move through a self-tangency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JSite {
    /// Point on the curve (relocated by nearest-point projection) from which
    /// the finger grows.
    pub base: Point,
    /// `+1` grows the finger to the left of the strand, `-1` to the right.
    pub side: i8,
    /// Half-width of the finger; chosen automatically when absent.
    #[serde(default)]
    pub half_width: Option<f64>,
}

/// Where to realize a move through a triple point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SSite {
    /// Location of the crossing the finger leg is slid across.
    pub crossing: Point,
    /// Approximate travel direction of the finger; snapped to the bisector
    /// of an obtuse sector at the crossing.
    pub direction: Point,
    /// `+1` slides the leg across from the left of the axis, `-1` from the right.
    pub side: i8,
    #[serde(default)]
    pub half_width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "lowercase")]
pub enum MoveSite {
    J(JSite),
    S(SSite),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "symbol")]
pub enum MoveSymbol {
    J(JSymbol),
    S(SSymbol),
}

impl std::fmt::Display for MoveSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MoveSymbol::J(j) => j.fmt(f),
            MoveSymbol::S(s) => s.fmt(f),
        }
    }
}

/// Both sides of a realized move.
///
/// For a self-tangency the plus side is the one with two more crossings; for
/// a triple point it is the side whose vanishing triangle is positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveOutcome {
    pub symbol: MoveSymbol,
    pub curve_plus: PlanarCurve,
    pub curve_minus: PlanarCurve,
    pub sum_plus: XVector,
    pub sum_minus: XVector,
    pub delta: XVector,
    pub invariant_delta: XVector,
    pub whitney: i64,
    pub half_width: f64,
    /// For self-tangencies, the indices of the arcs after the finger tip and
    /// after the other strand, in that order.
    pub labelled: Option<(DoubleIndex, DoubleIndex)>,
    /// Finger base and tip, for disjointness checks.
    pub footprint: [Point; 2],
}

impl MoveOutcome {
    /// Jump predicted from the symbol alone; only defined for self-tangencies.
    pub fn predicted(&self) -> Option<XVector> {
        match &self.symbol {
            MoveSymbol::J(j) => Some(predicted_delta(j)),
            MoveSymbol::S(_) => None,
        }
    }
}

fn move_config(cfg: &ToleranceConfig, curve: &PlanarCurve, h: f64) -> ToleranceConfig {
    let sep = cfg.min_separation(curve.diameter()).min(0.2 * h);
    cfg.clone().with_min_sep(sep)
}

fn count_near(crossings: &[Crossing], center: Point, radius: f64) -> usize {
    crossings
        .iter()
        .filter(|c| c.location.distance(center) < radius)
        .count()
}

/// Stable crossing list under `cfg`, with the expected count.
fn checked(
    curve: &PlanarCurve,
    cfg: &ToleranceConfig,
    expect: usize,
    what: &str,
) -> Result<Vec<Crossing>> {
    let report = validate_stable(curve, cfg);
    if !report.stable {
        return Err(lost(format!("{what} is not stable")));
    }
    let xs = find_crossings(curve)?;
    if xs.len() != expect {
        return Err(lost(format!(
            "{what} has {} crossings, expected {expect}",
            xs.len()
        )));
    }
    Ok(xs)
}

/// Realizes the self-tangency move at `site`.
pub fn make_j_move(
    curve: &PlanarCurve,
    site: &JSite,
    cfg: &ToleranceConfig,
) -> Result<MoveOutcome> {
    if site.side.abs() != 1 {
        return Err(invalid("side must be +1 or -1"));
    }
    let (p, _) = curve
        .nearest_param(site.base, |_| true)
        .expect("curve has segments");
    let base = curve.point_at(p);
    let axis = curve.tangent_at(p).perp() * site.side as f64;
    let (q, dist) = ray_hit(curve, base, axis, 1e-9 * curve.diameter(), |_| false)
        .ok_or_else(|| invalid("no strand in front of the finger"))?;
    if curve.tangent_at(q).dot(axis.perp()).abs() < MIN_AXIS_SINE {
        return Err(invalid(
            "target strand is nearly parallel to the finger axis",
        ));
    }
    let mut h = site
        .half_width
        .unwrap_or((dist / 8.0).min(0.03 * curve.diameter()));
    let mut last = invalid("no room for a finger at this site");
    for _ in 0..WIDTH_RETRIES {
        if h < MIN_WIDTH_FRACTION * curve.diameter() {
            break;
        }
        match try_j(curve, p, axis, q, dist, h, cfg) {
            Ok(o) => return Ok(o),
            Err(e) if site.half_width.is_none() => {
                last = e;
                h /= 2.0;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

fn try_j(
    curve: &PlanarCurve,
    p: f64,
    axis: Point,
    q: f64,
    dist: f64,
    h: f64,
    cfg: &ToleranceConfig,
) -> Result<MoveOutcome> {
    let mcfg = move_config(cfg, curve, h);
    let original = stable_crossings(curve, &mcfg)?;
    let whitney = whitney_number(curve, &mcfg)?;
    let target = curve.point_at(q);
    let target_dir = curve.tangent_at(q);
    let sine = target_dir.cross(axis).abs();

    // The tip circle has radius h; its centre sits on the axis at distance
    // h ± gap from the target strand line, on either side of the tangency.
    let gap = 0.5 * h;
    let height = |clearance: f64| dist - clearance / sine + h;
    let touch = target - axis * (h / sine);
    let normal = {
        let n = target_dir.perp();
        if n.dot(axis) > 0.0 {
            n
        } else {
            n * -1.0
        }
    };
    let center = touch + normal * h;
    let radius = 2.5 * h;

    let apart = build_finger(curve, p, axis, height(h + gap), h)?;
    let through = build_finger(curve, p, axis, height(h - gap), h)?;
    let xs_apart = checked(&apart.curve, &mcfg, original.len(), "separated side")?;
    if gauss_word(&xs_apart) != gauss_word(&original) {
        return Err(lost("finger crosses another strand"));
    }
    let xs_through = checked(
        &through.curve,
        &mcfg,
        original.len() + 2,
        "overlapping side",
    )?;
    if count_near(&xs_through, center, radius) != 2 {
        return Err(lost("new crossings are not at the tangency"));
    }

    // On the separated side of an inverse tangency, each strand sees the
    // other on its left exactly when the tip runs with the axis on its left.
    let tip_dir = apart.across;
    let kind = if tip_dir.dot(target_dir) > 0.0 {
        JKind::Plus
    } else if tip_dir.cross(axis) > 0.0 {
        JKind::B
    } else {
        JKind::A
    };

    let mut labels = Vec::new();
    for (f, xs) in [(&apart, &xs_apart), (&through, &xs_through)] {
        let end = f.end;
        let (other, _) = f
            .curve
            .nearest_param(center, |i| i >= end)
            .expect("strand exists");
        let tip = f.apex as f64;
        let (order, arcs) = disc_arcs(&f.curve, center, radius, &[tip, other])?;
        let mut idx = [DoubleIndex::new(0, 1); 2];
        for (k, arc) in arcs.iter().enumerate() {
            idx[k] = arc_index(&f.curve, xs, arc, &mcfg)?;
        }
        let tip_first = (order[0] - f.curve.wrap(tip)).abs() < 1e-12;
        labels.push(if tip_first {
            (idx[0], idx[1])
        } else {
            (idx[1], idx[0])
        });
    }
    if labels[0] != labels[1] {
        return Err(lost(format!(
            "the two sides disagree on the tangency indices: {:?} vs {:?}",
            labels[0], labels[1]
        )));
    }
    let (tip_arc, other_arc) = labels[0];
    let symbol = JSymbol::new(kind, tip_arc, other_arc);

    let plus = compute(&through.curve, &mcfg)?;
    let minus = compute(&apart.curve, &mcfg)?;
    if plus.whitney != whitney || minus.whitney != whitney {
        return Err(lost("Whitney number changed"));
    }
    Ok(MoveOutcome {
        symbol: MoveSymbol::J(symbol),
        delta: plus.crossing_sum.minus(&minus.crossing_sum),
        invariant_delta: plus.invariant.minus(&minus.invariant),
        sum_plus: plus.crossing_sum,
        sum_minus: minus.crossing_sum,
        curve_plus: through.curve,
        curve_minus: apart.curve,
        whitney,
        half_width: h,
        labelled: Some((tip_arc, other_arc)),
        footprint: [curve.point_at(p), center],
    })
}

/// Unit bisector of an obtuse sector at the crossing, pointing as close to
/// `hint` as possible.
fn obtuse_bisector(c: &Crossing, hint: Point) -> Point {
    let [u1, u2] = c.frame;
    let b = if u1.dot(u2) <= 0.0 { u1 + u2 } else { u1 - u2 }.normalized();
    if b.dot(hint) >= 0.0 {
        b
    } else {
        b * -1.0
    }
}

/// Realizes the triple-point move at `site`.
pub fn make_s_move(
    curve: &PlanarCurve,
    site: &SSite,
    cfg: &ToleranceConfig,
) -> Result<MoveOutcome> {
    if site.side.abs() != 1 {
        return Err(invalid("side must be +1 or -1"));
    }
    let xs = stable_crossings(curve, cfg)?;
    let w_idx = (0..xs.len())
        .min_by(|&i, &j| {
            let di = xs[i].location.distance(site.crossing);
            let dj = xs[j].location.distance(site.crossing);
            di.total_cmp(&dj)
        })
        .ok_or_else(|| invalid("curve has no crossings"))?;
    let w = xs[w_idx].location;
    let b = obtuse_bisector(&xs[w_idx], site.direction);
    let n = curve.len();
    let own = |i: usize| {
        [xs[w_idx].seg_a, xs[w_idx].seg_b]
            .iter()
            .any(|&s| (i + n - s) % n <= 1 || (s + n - i) % n <= 1)
    };
    let (_, reach) = ray_hit(curve, w, b * -1.0, 0.0, own)
        .ok_or_else(|| invalid("no strand behind the crossing"))?;
    let auto = ToleranceConfig {
        epsilon: None,
        ..cfg.clone()
    };
    let mut h = site
        .half_width
        .unwrap_or((0.5 * default_epsilon(curve, &xs, w_idx, &auto)).min(reach / 10.0));
    let mut last = invalid("no room for a finger at this site");
    for _ in 0..WIDTH_RETRIES {
        if h < MIN_WIDTH_FRACTION * curve.diameter() {
            break;
        }
        match try_s(curve, w, b, reach, site.side as f64, h, cfg) {
            Ok(o) => return Ok(o),
            Err(e) if site.half_width.is_none() => {
                last = e;
                h /= 2.0;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

struct TripleSide {
    finger: Finger,
    symbol: SSymbol,
    sign: i32,
}

fn try_s(
    curve: &PlanarCurve,
    w: Point,
    b: Point,
    reach: f64,
    side: f64,
    h: f64,
    cfg: &ToleranceConfig,
) -> Result<MoveOutcome> {
    if reach < 6.0 * h {
        return Err(invalid("finger base is too close to the crossing"));
    }
    let mcfg = move_config(cfg, curve, h);
    let original = stable_crossings(curve, &mcfg)?;
    let whitney = whitney_number(curve, &mcfg)?;

    let mut sides = Vec::new();
    for offset in [0.5 * h * side, 1.5 * h * side] {
        let origin = w + b.perp() * offset - b * (reach - 3.0 * h);
        let (p, tau) = ray_hit(curve, origin, b * -1.0, 0.0, |_| false)
            .ok_or_else(|| invalid("finger base not found"))?;
        if tau > 6.0 * h {
            return Err(invalid("finger base strand bends away"));
        }
        let height = (w - curve.point_at(p)).dot(b) + 4.0 * h;
        let finger = build_finger(curve, p, b, height, h)?;
        let crossings = checked(
            &finger.curve,
            &mcfg,
            original.len() + 4,
            "triple-point side",
        )?;
        if count_near(&crossings, w, h) != 3 {
            return Err(lost("vanishing triangle does not fit in the disc"));
        }
        sides.push(triple_side(finger, crossings, w, h, &mcfg)?);
    }
    if sides[0].symbol != sides[1].symbol {
        return Err(lost(format!(
            "the two sides disagree on the triple point: {} vs {}",
            sides[0].symbol, sides[1].symbol
        )));
    }
    if sides[0].sign == sides[1].sign {
        return Err(lost("vanishing triangles have equal signs on both sides"));
    }
    let (pos, neg) = if sides[0].sign > 0 {
        (&sides[0], &sides[1])
    } else {
        (&sides[1], &sides[0])
    };
    let plus = compute(&pos.finger.curve, &mcfg)?;
    let minus = compute(&neg.finger.curve, &mcfg)?;
    if plus.whitney != whitney || minus.whitney != whitney {
        return Err(lost("Whitney number changed"));
    }
    Ok(MoveOutcome {
        symbol: MoveSymbol::S(pos.symbol),
        delta: plus.crossing_sum.minus(&minus.crossing_sum),
        invariant_delta: plus.invariant.minus(&minus.invariant),
        sum_plus: plus.crossing_sum,
        sum_minus: minus.crossing_sum,
        curve_plus: pos.finger.curve.clone(),
        curve_minus: neg.finger.curve.clone(),
        whitney,
        half_width: h,
        labelled: None,
        footprint: [w - b * reach, w],
    })
}

fn triple_side(
    finger: Finger,
    crossings: Vec<Crossing>,
    w: Point,
    h: f64,
    cfg: &ToleranceConfig,
) -> Result<TripleSide> {
    let c = &finger.curve;
    let at_w = crossings
        .iter()
        .min_by(|x, y| x.location.distance(w).total_cmp(&y.location.distance(w)))
        .expect("crossing list is not empty");
    let end = finger.end;
    let (leg, _) = c.nearest_param(w, |i| i < end).expect("finger exists");
    let (order, arcs) = disc_arcs(c, w, h, &[at_w.s, at_w.t, leg])?;
    let dirs: Vec<Point> = order.iter().map(|&t| c.tangent_at(t)).collect();
    let feet: Vec<Point> = order.iter().map(|&t| c.point_at(t)).collect();
    let mut entries = Vec::with_capacity(3);
    for (i, arc) in arcs.iter().enumerate() {
        let index = arc_index(c, &crossings, arc, cfg)?;
        entries.push((index, dirs[i].cross(dirs[(i + 1) % 3]) < 0.0));
    }
    let symbol = SSymbol::new([entries[0], entries[1], entries[2]]);

    // Side i runs from its meeting with side i-1 to its meeting with side i+1.
    let meet = |i: usize, j: usize| line_meet(feet[i], dirs[i], feet[j], dirs[j]);
    let agree = (0..3)
        .filter(|&i| (meet(i, (i + 1) % 3) - meet((i + 2) % 3, i)).dot(dirs[i]) > 0.0)
        .count();
    let sign = if agree % 2 == 0 { 1 } else { -1 };
    Ok(TripleSide {
        finger,
        symbol,
        sign,
    })
}

/// Realizes either kind of move.
pub fn make_move(
    curve: &PlanarCurve,
    site: &MoveSite,
    cfg: &ToleranceConfig,
) -> Result<MoveOutcome> {
    match site {
        MoveSite::J(s) => make_j_move(curve, s, cfg),
        MoveSite::S(s) => make_s_move(curve, s, cfg),
    }
}

/// Random self-tangency site: a uniformly chosen base point and side.
pub fn random_j_site(curve: &PlanarCurve, rng: &mut impl Rng) -> JSite {
    let p = rng.gen_range(0.0..curve.param_length());
    JSite {
        base: curve.point_at(p),
        side: if rng.gen_bool(0.5) { 1 } else { -1 },
        half_width: None,
    }
}

/// Random triple-point site at one of the crossings, if there are any.
pub fn random_s_site(curve: &PlanarCurve, rng: &mut impl Rng) -> Option<SSite> {
    let xs = find_crossings(curve).ok()?;
    if xs.is_empty() {
        return None;
    }
    let c = &xs[rng.gen_range(0..xs.len())];
    Some(SSite {
        crossing: c.location,
        direction: Point::from_angle(rng.gen_range(0.0..TAU)),
        side: if rng.gen_bool(0.5) { 1 } else { -1 },
        half_width: None,
    })
}

/// Comparison of a measured self-tangency jump with the predicted one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JCheck {
    pub symbol: JSymbol,
    pub delta: XVector,
    pub predicted: XVector,
    pub matches: bool,
    /// For `J⁺`: the prediction with the strands labelled tip-first and
    /// other-first. For `J^B`: the `J^A` formula without the top shift,
    /// which must not match.
    pub alternatives: Vec<XVector>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JRelationReport {
    pub checks: Vec<JCheck>,
    pub all_match: bool,
}

/// `X^{a1,b1}_{a2,b2} + X^{b1,a1}_{b2,a2}` for an ordered pair.
fn ordered_plus(a: DoubleIndex, b: DoubleIndex) -> XVector {
    let mut v = XVector::single(XSymbol::from_indices(a, b));
    v.add_term(XSymbol::from_indices(b, a), crate::symbols::rat(1));
    v
}

/// Checks measured self-tangency jumps against the symbol formulas.
///
/// `corrupt` shifts the top index of the first arc before predicting, as a
/// negative control.
pub fn verify_j_relations(outcomes: &[MoveOutcome], corrupt: bool) -> JRelationReport {
    let mut checks = Vec::new();
    for o in outcomes {
        let MoveSymbol::J(sym) = &o.symbol else {
            continue;
        };
        let sym = if corrupt {
            JSymbol::new(sym.kind, sym.pair[0].shift_top(1), sym.pair[1])
        } else {
            *sym
        };
        let predicted = predicted_delta(&sym);
        let alternatives = match (sym.kind, o.labelled) {
            (JKind::Plus, Some((a, b))) => vec![ordered_plus(a, b), ordered_plus(b, a)],
            (JKind::B, _) => {
                vec![delta_a(&JSymbol::new(JKind::A, sym.pair[0], sym.pair[1])).expect("kind A")]
            }
            _ => Vec::new(),
        };
        checks.push(JCheck {
            matches: predicted == o.delta,
            symbol: sym,
            delta: o.delta.clone(),
            predicted,
            alternatives,
        });
    }
    let all_match = checks.iter().all(|c| c.matches);
    JRelationReport { checks, all_match }
}

/// Mixed second difference `F(++) − F(+−) − F(−+) + F(−−)` of two
/// self-tangency moves realized one after the other.
pub fn second_difference(
    curve: &PlanarCurve,
    first: &JSite,
    second: &JSite,
    cfg: &ToleranceConfig,
) -> Result<XVector> {
    let a = make_j_move(curve, first, cfg)?;
    let b = make_j_move(curve, second, cfg)?;
    let fixed = JSite {
        half_width: Some(b.half_width),
        ..second.clone()
    };
    let plus = make_j_move(&a.curve_plus, &fixed, cfg)?;
    let minus = make_j_move(&a.curve_minus, &fixed, cfg)?;
    if plus.symbol != minus.symbol {
        return Err(lost(
            "second move changes symbol between the sides of the first",
        ));
    }
    Ok(plus.delta.minus(&minus.delta))
}

/// Distance between the footprints of two moves, less their widths.
pub fn footprint_gap(a: &MoveOutcome, b: &MoveOutcome) -> f64 {
    let seg = |p: Point, [u, v]: [Point; 2]| crate::geom::segment_distance(p, u, v).0;
    let d = seg(a.footprint[0], b.footprint)
        .min(seg(a.footprint[1], b.footprint))
        .min(seg(b.footprint[0], a.footprint))
        .min(seg(b.footprint[1], a.footprint));
    d - 4.0 * (a.half_width + b.half_width)
}
