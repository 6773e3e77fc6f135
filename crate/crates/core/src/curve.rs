//! Closed polyline curves: validation, self-intersections and turning.
//!
//! A curve parameter is a real number `i + f` with `i` a segment index and
//! `f ∈ [0, 1)` the fraction along that segment. Segment `i` runs from
//! vertex `i` to vertex `i + 1` (indices modulo the number of vertices), so
//! the parameter length `L` equals the number of vertices.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::geom::{
    line_angle, segment_distance, segment_intersection, signed_angle, Point, SegmentHit,
};

pub const MIN_POINTS: usize = 8;

/// A closed oriented polyline approximating an immersion of the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve")]
pub struct PlanarCurve {
    points: Vec<Point>,
}

#[derive(Deserialize)]
struct RawCurve {
    points: Vec<Point>,
}

impl TryFrom<RawCurve> for PlanarCurve {
    type Error = Error;

    fn try_from(raw: RawCurve) -> Result<Self> {
        PlanarCurve::new(raw.points)
    }
}

impl PlanarCurve {
    /// Builds a curve, checking that consecutive points are distinct and
    /// that every vertex turns by less than a right angle.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let n = points.len();
        if n < MIN_POINTS {
            return Err(Error::MalformedCurve(format!(
                "a curve needs at least {MIN_POINTS} points, got {n}"
            )));
        }
        if let Some(i) = points
            .iter()
            .position(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return Err(Error::MalformedCurve(format!("point {i} is not finite")));
        }
        for i in 0..n {
            if points[i] == points[(i + 1) % n] {
                return Err(Error::MalformedCurve(format!(
                    "segment {i} has zero length"
                )));
            }
        }
        let curve = PlanarCurve { points };
        for v in 0..n {
            let din = curve.segment_vector(v + n - 1);
            let dout = curve.segment_vector(v);
            if din.dot(dout) <= 0.0 {
                return Err(Error::MalformedCurve(format!(
                    "vertex {v} turns by {:.1}°, which is not below 90°",
                    signed_angle(din, dout).abs().to_degrees()
                )));
            }
        }
        Ok(curve)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Number of segments, which is also the parameter length `L`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn param_length(&self) -> f64 {
        self.points.len() as f64
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.points[i % self.points.len()]
    }

    pub fn segment(&self, i: usize) -> (Point, Point) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn segment_vector(&self, i: usize) -> Point {
        let (a, b) = self.segment(i);
        b - a
    }

    /// Unit direction of segment `i`.
    pub fn direction(&self, i: usize) -> Point {
        self.segment_vector(i).normalized()
    }

    /// Wraps a parameter into `[0, L)`.
    pub fn wrap(&self, param: f64) -> f64 {
        let l = self.param_length();
        let r = param.rem_euclid(l);
        if r >= l {
            0.0
        } else {
            r
        }
    }

    fn split(&self, param: f64) -> (usize, f64) {
        let p = self.wrap(param);
        let i = (p.floor() as usize).min(self.len() - 1);
        (i, p - i as f64)
    }

    pub fn point_at(&self, param: f64) -> Point {
        let (i, f) = self.split(param);
        let (a, b) = self.segment(i);
        a.lerp(b, f)
    }

    /// Unit tangent at a parameter (the direction of its segment).
    pub fn tangent_at(&self, param: f64) -> Point {
        self.direction(self.split(param).0)
    }

    pub fn segment_of(&self, param: f64) -> usize {
        self.split(param).0
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                d = d.max(p.distance(*q));
            }
        }
        d
    }

    pub fn reversed(&self) -> PlanarCurve {
        let mut pts = self.points.clone();
        pts.reverse();
        PlanarCurve { points: pts }
    }

    /// Applies a map to every vertex and revalidates.
    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Result<PlanarCurve> {
        PlanarCurve::new(self.points.iter().map(|p| f(*p)).collect())
    }

    /// Same curve traversed from vertex `k`.
    pub fn rotated_start(&self, k: usize) -> PlanarCurve {
        let n = self.len();
        let pts = (0..n).map(|i| self.points[(i + k) % n]).collect();
        PlanarCurve { points: pts }
    }

    /// Inserts the midpoint of every segment. The geometry is unchanged.
    pub fn subdivided(&self) -> PlanarCurve {
        let mut pts = Vec::with_capacity(2 * self.len());
        for i in 0..self.len() {
            let (a, b) = self.segment(i);
            pts.push(a);
            pts.push(a.lerp(b, 0.5));
        }
        PlanarCurve { points: pts }
    }

    /// Signed turning at vertex `v`, from segment `v - 1` to segment `v`.
    pub fn vertex_turn(&self, v: usize) -> f64 {
        let n = self.len();
        signed_angle(
            self.segment_vector(v % n + n - 1),
            self.segment_vector(v % n),
        )
    }

    pub fn total_turning(&self) -> f64 {
        (0..self.len()).map(|v| self.vertex_turn(v)).sum()
    }

    /// The polyline from `from` to `to` (unwrapped, `to > from`): the two end
    /// points and every vertex strictly between them.
    pub fn subarc_points(&self, from: f64, to: f64) -> Vec<Point> {
        let mut pts = vec![self.point_at(from)];
        let mut k = from.floor() + 1.0;
        while k < to {
            pts.push(self.vertex(k.rem_euclid(self.param_length()) as usize));
            k += 1.0;
        }
        pts.push(self.point_at(to));
        pts
    }

    /// Distance from `p` to segment `i` and the fraction of the foot point.
    pub fn segment_distance(&self, i: usize, p: Point) -> (f64, f64) {
        let (a, b) = self.segment(i);
        segment_distance(p, a, b)
    }

    /// Parameter of the point of the curve closest to `p`, restricted to
    /// segments accepted by `filter`.
    pub fn nearest_param(&self, p: Point, filter: impl Fn(usize) -> bool) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for i in (0..self.len()).filter(|&i| filter(i)) {
            let (d, u) = self.segment_distance(i, p);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, i as f64 + u.min(1.0 - 1e-12)));
            }
        }
        best.map(|(d, t)| (t, d))
    }

    /// Contiguous run of segments around `seg` whose distance to `center` is
    /// below `radius`, as an inclusive unwrapped index range.
    pub fn strand_run(&self, seg: usize, center: Point, radius: f64) -> (i64, i64) {
        let n = self.len() as i64;
        let near = |i: i64| self.segment_distance(i.rem_euclid(n) as usize, center).0 < radius;
        let mut lo = seg as i64;
        while lo > seg as i64 - n + 1 && near(lo - 1) {
            lo -= 1;
        }
        let mut hi = seg as i64;
        while hi < lo + n - 1 && near(hi + 1) {
            hi += 1;
        }
        (lo, hi)
    }
}

/// A transverse double point of a curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub seg_a: usize,
    pub seg_b: usize,
    /// Earlier parameter of the double point.
    pub s: f64,
    /// Later parameter of the double point.
    pub t: f64,
    pub location: Point,
    /// Sign of `det(tangent at s, tangent at t)`.
    pub sign: i32,
    /// Unit tangents `(u1, u2)` ordered so that `det(u1, u2) > 0`.
    pub frame: [Point; 2],
}

impl Crossing {
    /// Parameter at which the tangent `u_i` (i = 1, 2) is attained.
    pub fn param_of_tangent(&self, which: u8) -> f64 {
        match (which, self.sign > 0) {
            (1, true) | (2, false) => self.s,
            _ => self.t,
        }
    }

    /// Angle between the two strands, in degrees within `[0, 90]`.
    pub fn angle_deg(&self) -> f64 {
        line_angle(self.frame[0], self.frame[1]).to_degrees()
    }
}

fn adjacent(i: usize, j: usize, n: usize) -> bool {
    let d = i.abs_diff(j);
    d <= 1 || d == n - 1
}

#[derive(Clone, Copy)]
struct Bbox {
    min: Point,
    max: Point,
}

impl Bbox {
    fn of(a: Point, b: Point) -> Self {
        Bbox {
            min: Point::new(a.x.min(b.x), a.y.min(b.y)),
            max: Point::new(a.x.max(b.x), a.y.max(b.y)),
        }
    }

    fn overlaps(&self, o: &Bbox) -> bool {
        self.min.x <= o.max.x
            && o.min.x <= self.max.x
            && self.min.y <= o.max.y
            && o.min.y <= self.max.y
    }
}

enum PairHit {
    Crossing(Crossing),
    Degenerate(usize, usize),
}

fn scan_pairs(curve: &PlanarCurve) -> Vec<PairHit> {
    let n = curve.len();
    let boxes: Vec<Bbox> = (0..n)
        .map(|i| {
            let (a, b) = curve.segment(i);
            Bbox::of(a, b)
        })
        .collect();
    // Sweep over segments sorted by their left edge.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| boxes[i].min.x.total_cmp(&boxes[j].min.x).then(i.cmp(&j)));

    let mut hits = Vec::new();
    for (oi, &i) in order.iter().enumerate() {
        for &j in &order[oi + 1..] {
            if boxes[j].min.x > boxes[i].max.x {
                break;
            }
            if adjacent(i, j, n) || !boxes[i].overlaps(&boxes[j]) {
                continue;
            }
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            let (p1, q1) = curve.segment(lo);
            let (p2, q2) = curve.segment(hi);
            match segment_intersection(p1, q1, p2, q2) {
                SegmentHit::Disjoint => {}
                SegmentHit::Degenerate => hits.push(PairHit::Degenerate(lo, hi)),
                SegmentHit::Proper { fa, fb, sign } => {
                    let ta = curve.direction(lo);
                    let tb = curve.direction(hi);
                    let frame = if sign > 0 { [ta, tb] } else { [tb, ta] };
                    hits.push(PairHit::Crossing(Crossing {
                        seg_a: lo,
                        seg_b: hi,
                        s: lo as f64 + fa.min(1.0 - 1e-15),
                        t: hi as f64 + fb.min(1.0 - 1e-15),
                        location: p1.lerp(q1, fa),
                        sign,
                        frame,
                    }));
                }
            }
        }
    }
    hits
}

fn sort_crossings(crossings: &mut [Crossing]) {
    crossings.sort_by(|a, b| a.s.total_cmp(&b.s).then(a.t.total_cmp(&b.t)));
}

/// All transverse self-intersections, sorted by `(s, t)`.
///
/// Adjacent segments are never tested. Any touching or collinear contact
/// between non-adjacent segments is reported as a degenerate intersection.
pub fn find_crossings(curve: &PlanarCurve) -> Result<Vec<Crossing>> {
    let mut crossings = Vec::new();
    for hit in scan_pairs(curve) {
        match hit {
            PairHit::Crossing(c) => crossings.push(c),
            PairHit::Degenerate(seg_a, seg_b) => {
                return Err(Error::DegenerateIntersection { seg_a, seg_b })
            }
        }
    }
    sort_crossings(&mut crossings);
    Ok(crossings)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    DegenerateIntersection,
    ShallowCrossing,
    CrossingsTooClose,
    ThirdStrandNearCrossing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub crossing_count: usize,
    pub min_crossing_separation: Option<f64>,
    /// Smallest crossing angle, in degrees.
    pub min_transversality_angle: Option<f64>,
    pub min_sep_threshold: f64,
    pub stable: bool,
    pub violations: Vec<Violation>,
}

/// Checks that every self-intersection is a well-separated transverse double
/// point under the given tolerances.
pub fn validate_stable(curve: &PlanarCurve, cfg: &ToleranceConfig) -> GenericityReport {
    let min_sep = cfg.min_separation(curve.diameter());
    let mut violations = Vec::new();
    let mut crossings = Vec::new();
    for hit in scan_pairs(curve) {
        match hit {
            PairHit::Crossing(c) => crossings.push(c),
            PairHit::Degenerate(a, b) => violations.push(Violation {
                kind: ViolationKind::DegenerateIntersection,
                detail: format!("segments {a} and {b} touch without crossing transversally"),
            }),
        }
    }
    sort_crossings(&mut crossings);

    let mut min_angle: Option<f64> = None;
    for (idx, c) in crossings.iter().enumerate() {
        let angle = c.angle_deg();
        min_angle = Some(min_angle.map_or(angle, |m| m.min(angle)));
        if angle < cfg.min_angle_deg {
            violations.push(Violation {
                kind: ViolationKind::ShallowCrossing,
                detail: format!(
                    "crossing {idx} at ({:.6}, {:.6}) has angle {angle:.2}° < {:.2}°",
                    c.location.x, c.location.y, cfg.min_angle_deg
                ),
            });
        }
    }

    let mut min_sep_seen: Option<f64> = None;
    for i in 0..crossings.len() {
        for j in i + 1..crossings.len() {
            let d = crossings[i].location.distance(crossings[j].location);
            min_sep_seen = Some(min_sep_seen.map_or(d, |m| m.min(d)));
            if d < min_sep {
                violations.push(Violation {
                    kind: ViolationKind::CrossingsTooClose,
                    detail: format!("crossings {i} and {j} are {d:.3e} apart (< {min_sep:.3e})"),
                });
            }
        }
    }

    // A third strand passing within min_sep of a crossing is a near triple point.
    let n = curve.len() as i64;
    for (idx, c) in crossings.iter().enumerate() {
        let runs = [
            curve.strand_run(c.seg_a, c.location, min_sep),
            curve.strand_run(c.seg_b, c.location, min_sep),
        ];
        let in_run = |i: usize| {
            runs.iter().any(|&(lo, hi)| {
                let off = (i as i64 - lo).rem_euclid(n);
                off <= hi - lo
            })
        };
        for i in 0..curve.len() {
            if in_run(i) {
                continue;
            }
            let (d, _) = curve.segment_distance(i, c.location);
            if d < min_sep {
                violations.push(Violation {
                    kind: ViolationKind::ThirdStrandNearCrossing,
                    detail: format!("segment {i} passes {d:.3e} from crossing {idx}"),
                });
                break;
            }
        }
    }

    GenericityReport {
        crossing_count: crossings.len(),
        min_crossing_separation: min_sep_seen,
        min_transversality_angle: min_angle,
        min_sep_threshold: min_sep,
        stable: violations.is_empty(),
        violations,
    }
}

/// Whitney winding number: total tangent turning divided by 2π, rounded.
pub fn whitney_number(curve: &PlanarCurve, cfg: &ToleranceConfig) -> Result<i64> {
    let turns = curve.total_turning() / TAU;
    let rounded = turns.round();
    let residual = (turns - rounded).abs();
    if residual >= cfg.whitney_residual {
        return Err(Error::NonIntegerTurning { residual });
    }
    Ok(rounded as i64)
}

fn unwrap_after(from: f64, to: f64, l: f64) -> f64 {
    let mut to = to;
    while to <= from {
        to += l;
    }
    while to - from > l {
        to -= l;
    }
    to
}

/// Signed tangent turning along the oriented subarc from `from` to `to`.
///
/// `to` is taken as the first parameter after `from` (modulo `L`). The turn
/// at a vertex `v` is counted when `from < v <= to`, so splitting a
/// traversal at any parameter is additive.
pub fn turning_along(curve: &PlanarCurve, from: f64, to: f64) -> f64 {
    let l = curve.param_length();
    let to = unwrap_after(from, to, l);
    let mut total = 0.0;
    let mut k = from.floor() + 1.0;
    while k <= to {
        total += curve.vertex_turn(k.rem_euclid(l) as usize);
        k += 1.0;
    }
    total
}

/// Signed rotation of the vector from `base` to the curve along the subarc
/// from `from` to `to`.
pub fn radial_winding(curve: &PlanarCurve, base: Point, from: f64, to: f64) -> Result<f64> {
    let l = curve.param_length();
    let to = unwrap_after(from, to, l);
    let pts = curve.subarc_points(from, to);
    let tol = 1e-12 * curve.diameter().max(1e-300);
    let mut total = 0.0;
    for w in pts.windows(2) {
        let (d, _) = segment_distance(base, w[0], w[1]);
        if d <= tol {
            return Err(Error::BasePointOnCurve { distance: d });
        }
        total += signed_angle(w[0] - base, w[1] - base);
    }
    Ok(total)
}

/// Canonical cyclic Gauss word of a crossing list.
///
/// Each visit of a crossing becomes a pair `(label, sign)`: labels are
/// assigned in order of first appearance and the sign is taken with the two
/// tangents in visiting order. The word is the least over all starting
/// points, so it does not depend on where the parametrization begins.
pub fn gauss_word(crossings: &[Crossing]) -> Vec<(usize, i32)> {
    let mut events: Vec<(f64, usize)> = Vec::with_capacity(2 * crossings.len());
    for (i, c) in crossings.iter().enumerate() {
        events.push((c.s, i));
        events.push((c.t, i));
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let m = events.len();
    let mut best: Option<Vec<(usize, i32)>> = None;
    for r in 0..m {
        let mut label = vec![usize::MAX; crossings.len()];
        let mut sign = vec![0i32; crossings.len()];
        let mut next = 0;
        let mut word = Vec::with_capacity(m);
        for k in 0..m {
            let (p, i) = events[(r + k) % m];
            if label[i] == usize::MAX {
                label[i] = next;
                next += 1;
                // First visit at s keeps the stored order.
                sign[i] = if p == crossings[i].s {
                    crossings[i].sign
                } else {
                    -crossings[i].sign
                };
            }
            word.push((label[i], sign[i]));
        }
        if best.as_ref().is_none_or(|b| word < *b) {
            best = Some(word);
        }
    }
    best.unwrap_or_default()
}
