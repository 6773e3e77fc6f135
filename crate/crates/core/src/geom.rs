//! Planar points, exact orientation predicates and angle helpers.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn from_angle(angle: f64) -> Self {
        Point::new(angle.cos(), angle.sin())
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the cross product, i.e. `det(self, o)`.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    /// Counterclockwise rotation by a right angle.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn distance(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point, u: f64) -> Point {
        self + (o - self) * u
    }

    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

impl Orientation {
    pub fn sign(self) -> i32 {
        match self {
            Orientation::CounterClockwise => 1,
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
        }
    }
}

/// Exact orientation of the triple `(a, b, c)` for the given double-precision
/// coordinates.
pub fn orient(a: Point, b: Point, c: Point) -> Orientation {
    let det = robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    );
    if det > 0.0 {
        Orientation::CounterClockwise
    } else if det < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    }
}

/// Result of testing two closed segments for intersection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentHit {
    Disjoint,
    /// Interiors cross transversally at `p + fa * (q - p)`.
    Proper {
        fa: f64,
        fb: f64,
        /// Sign of `det(q1 - p1, q2 - p2)`, decided exactly.
        sign: i32,
    },
    /// The segments touch at an endpoint or overlap collinearly.
    Degenerate,
}

pub fn segment_intersection(p1: Point, q1: Point, p2: Point, q2: Point) -> SegmentHit {
    let o1 = orient(p1, q1, p2).sign();
    let o2 = orient(p1, q1, q2).sign();
    let o3 = orient(p2, q2, p1).sign();
    let o4 = orient(p2, q2, q1).sign();

    if o1 * o2 < 0 && o3 * o4 < 0 {
        let d1 = q1 - p1;
        let d2 = q2 - p2;
        let denom = d1.cross(d2);
        let w = p2 - p1;
        let fa = (w.cross(d2) / denom).clamp(0.0, 1.0);
        let fb = (w.cross(d1) / denom).clamp(0.0, 1.0);
        // q2 lies strictly on the side of line (p1, q1) that d2 points to.
        return SegmentHit::Proper { fa, fb, sign: o2 };
    }
    if o1 * o2 > 0 || o3 * o4 > 0 {
        return SegmentHit::Disjoint;
    }
    // At least one orientation vanishes: touching or collinear.
    let on = |a: Point, b: Point, c: Point| {
        c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x) && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
    };
    let touches = (o1 == 0 && on(p1, q1, p2))
        || (o2 == 0 && on(p1, q1, q2))
        || (o3 == 0 && on(p2, q2, p1))
        || (o4 == 0 && on(p2, q2, q1));
    if touches {
        SegmentHit::Degenerate
    } else {
        SegmentHit::Disjoint
    }
}

/// Distance from `p` to the closed segment `[a, b]`, and the parameter of the foot.
pub fn segment_distance(p: Point, a: Point, b: Point) -> (f64, f64) {
    let d = b - a;
    let len2 = d.norm_sq();
    let u = if len2 > 0.0 {
        ((p - a).dot(d) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p.distance(a + d * u), u)
}

/// Signed angle in `(-π, π]` rotating `u` onto `v`.
pub fn signed_angle(u: Point, v: Point) -> f64 {
    u.cross(v).atan2(u.dot(v))
}

/// Normalizes an angle into `[0, 2π)`.
pub fn positive_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Smallest unsigned angle between two lines, in `[0, π/2]`.
pub fn line_angle(u: Point, v: Point) -> f64 {
    let a = signed_angle(u, v).abs();
    if a > PI / 2.0 {
        PI - a
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_is_exact_on_nearly_collinear_points() {
        let a = Point::new(0.5, 0.5);
        let b = Point::new(12.0, 12.0);
        let c = Point::new(24.0, 24.0);
        assert_eq!(orient(a, b, c), Orientation::Collinear);
        let c2 = Point::new(24.0, 24.0 + 1e-14);
        assert_eq!(orient(a, b, c2), Orientation::CounterClockwise);
    }

    #[test]
    fn proper_crossing_reports_parameters_and_sign() {
        let hit = segment_intersection(
            Point::new(-1.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, -1.0),
            Point::new(0.0, 3.0),
        );
        match hit {
            SegmentHit::Proper { fa, fb, sign } => {
                assert!((fa - 0.5).abs() < 1e-15);
                assert!((fb - 0.25).abs() < 1e-15);
                assert_eq!(sign, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        let SegmentHit::Proper { sign, .. } = segment_intersection(
            Point::new(-1.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 3.0),
            Point::new(0.0, -1.0),
        ) else {
            panic!()
        };
        assert_eq!(sign, -1);
    }

    #[test]
    fn touching_segments_are_degenerate() {
        let hit = segment_intersection(
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
        );
        assert_eq!(hit, SegmentHit::Degenerate);
        let hit = segment_intersection(
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(3.0, 0.0),
            Point::new(4.0, 0.0),
        );
        assert_eq!(hit, SegmentHit::Disjoint);
    }

    #[test]
    fn angles() {
        let e = Point::new(1.0, 0.0);
        assert!((signed_angle(e, e.perp()) - PI / 2.0).abs() < 1e-15);
        assert!((signed_angle(e.perp(), e) + PI / 2.0).abs() < 1e-15);
        assert!((positive_angle(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        assert!((line_angle(e, Point::new(-1.0, 0.1)) - 0.1f64.atan()).abs() < 1e-12);
    }
}
