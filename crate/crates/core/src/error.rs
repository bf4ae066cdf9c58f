//! Crate-wide error type.

use crate::geometry::ValidationReport;
use crate::Complex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("degenerate curve: |gamma'({s})| = {speed:.3e} (vanishing tangent)")]
    DegenerateCurve { s: f64, speed: f64 },

    #[error("curve is self-intersecting near segments {seg_a} and {seg_b}")]
    SelfIntersectingCurve { seg_a: usize, seg_b: usize },

    #[error("node count {n} is not a power of two >= 16")]
    BadNodeCount { n: usize },

    #[error("point list length {n} must be a power of two >= 16")]
    BadPointList { n: usize },

    #[error("invalid workspace:\n{0}")]
    InvalidWorkspace(ValidationReport),

    #[error("center {center} lies on the curve (min node distance {dist:.3e})")]
    CenterOnCurve { center: Complex, dist: f64 },

    #[error("center {center} is on the wrong side of the curve (winding {winding})")]
    CenterMisplaced { center: Complex, winding: i32 },

    #[error("curve has wrong orientation for this operation")]
    WrongOrientation,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("linear system is badly conditioned (estimate {cond:.3e})")]
    IllConditioned { cond: f64 },

    #[error("boundary correspondence winds {winding} times instead of once")]
    BranchTracking { winding: i32 },

    #[error("evaluation point {point} is on the wrong side of the curve")]
    WrongSide { point: Complex },

    #[error("evaluation point {point} coincides with a quadrature node")]
    SingularEvaluation { point: Complex },

    #[error("point {point} is not in the free space")]
    NotInFreeSpace { point: Complex },

    #[error(
        "iteration did not converge: {} iterations, last delta {:.3e} > tol {tol:.3e}",
        .report.deltas.len(),
        .report.last_delta()
    )]
    NotConverged {
        tol: f64,
        report: crate::koebe::IterationReport,
    },

    #[error("koebe iteration {iteration}, step {step}: {source}")]
    StageBuild {
        iteration: usize,
        step: usize,
        source: Box<Error>,
    },

    #[error("sphere world invariant violated: {0}")]
    SphereWorld(String),

    #[error("image curve {index} is not circular enough: fit residual {residual:.3e} for radius {radius:.3e}; run more iterations")]
    CircleFitResidual {
        index: usize,
        residual: f64,
        radius: f64,
    },

    #[error("topology violated at iteration {iteration}: image curves {a} and {b} intersect")]
    TopologyViolation { iteration: usize, a: usize, b: usize },

    #[error("stale cache: stored key {stored} does not match workspace key {expected}")]
    StaleCache { stored: String, expected: String },

    #[error("cache format error: {0}")]
    CacheFormat(String),

    #[error("navigation parameters invalid: {0}")]
    BadNavParams(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
