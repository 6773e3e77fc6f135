use thiserror::Error;

use crate::curve::GenericityReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed curve: {0}")]
    MalformedCurve(String),

    #[error("degenerate intersection between segments {seg_a} and {seg_b}")]
    DegenerateIntersection { seg_a: usize, seg_b: usize },

    #[error("curve is not stable ({} violation(s))", .0.violations.len())]
    NotStable(Box<GenericityReport>),

    #[error("total turning is not close to an integer multiple of 2π (residual {residual:.4}); resample the curve more finely")]
    NonIntegerTurning { residual: f64 },

    #[error("base point lies on the curve (distance {distance:e})")]
    BasePointOnCurve { distance: f64 },

    #[error("excision radius {epsilon:e} is too large: the disc meets segment {segment} of a third strand")]
    EpsilonTooLarge { epsilon: f64, segment: usize },

    #[error("strand at parameter {param} does not pass inside the excision disc")]
    PassOutsideDisc { param: f64 },

    #[error("strand ends meet the excision circle {angle_deg:.1}° away from radial; use a smaller radius")]
    EndsNotPerpendicular { angle_deg: f64 },

    #[error(
        "bottom index {value:.4} is not an odd integer; use a smaller radius or a finer curve"
    )]
    NonOddBottomIndex { value: f64 },

    #[error("term {symbol} has grade {grade} but the Whitney number is {whitney}")]
    GradingViolation {
        symbol: String,
        grade: i64,
        whitney: i64,
    },

    #[error("expected a {expected} symbol, found {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid move site: {0}")]
    SiteInvalid(String),

    #[error("stability lost: {0}")]
    StabilityLost(String),

    #[error("truncation window misaligned: {0}")]
    WindowMisaligned(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}
