//! Workspace geometry: spectrally sampled closed curves and validation.
//!
//! A workspace is one counterclockwise external boundary plus clockwise
//! internal obstacle boundaries, so the free space is always on the left of
//! every curve. Curves are uniform samples of 2π-periodic twice continuously
//! differentiable parametrizations with non-vanishing tangent; derivatives
//! ride along so downstream quadratures stay spectrally accurate.

use crate::error::{Error, Result};
use crate::{spectral, Complex};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Counterclockwise,
    Clockwise,
}

/// Uniform samples of a closed curve together with first and second
/// parametric derivatives.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParametricCurve {
    pub gamma: Vec<Complex>,
    pub dgamma: Vec<Complex>,
    pub ddgamma: Vec<Complex>,
    pub orientation: Orientation,
}

impl ParametricCurve {
    /// Builds a curve from node samples, differentiating spectrally and
    /// detecting orientation from the signed area.
    pub fn from_samples(gamma: Vec<Complex>) -> Result<Self> {
        spectral::check_node_count(gamma.len())?;
        let dgamma = spectral::differentiate(&gamma, 1);
        let ddgamma = spectral::differentiate(&gamma, 2);
        let mut curve = ParametricCurve {
            gamma,
            dgamma,
            ddgamma,
            orientation: Orientation::Counterclockwise,
        };
        if curve.signed_area() < 0.0 {
            curve.orientation = Orientation::Clockwise;
        }
        Ok(curve)
    }

    pub fn n_nodes(&self) -> usize {
        self.gamma.len()
    }

    /// Signed area enclosed by the curve, (1/2)·Im ∮ conj(γ) dγ.
    pub fn signed_area(&self) -> f64 {
        let n = self.n_nodes() as f64;
        let sum: f64 = self
            .gamma
            .iter()
            .zip(&self.dgamma)
            .map(|(g, dg)| (g.conj() * dg).im)
            .sum();
        0.5 * sum * (2.0 * PI / n)
    }

    /// Reverses the parametrization (s ↦ −s), flipping orientation.
    pub fn reversed(&self) -> Self {
        let n = self.n_nodes();
        let pick = |v: &[Complex], j: usize| v[(n - j) % n];
        ParametricCurve {
            gamma: (0..n).map(|j| pick(&self.gamma, j)).collect(),
            dgamma: (0..n).map(|j| -pick(&self.dgamma, j)).collect(),
            ddgamma: (0..n).map(|j| pick(&self.ddgamma, j)).collect(),
            orientation: match self.orientation {
                Orientation::Counterclockwise => Orientation::Clockwise,
                Orientation::Clockwise => Orientation::Counterclockwise,
            },
        }
    }

    /// Spectral resampling to a new power-of-two node count.
    pub fn resampled(&self, new_n: usize) -> Result<Self> {
        let gamma = spectral::resample(&self.gamma, new_n)?;
        let dgamma = spectral::differentiate(&gamma, 1);
        let ddgamma = spectral::differentiate(&gamma, 2);
        Ok(ParametricCurve {
            gamma,
            dgamma,
            ddgamma,
            orientation: self.orientation,
        })
    }

    pub fn min_speed(&self) -> f64 {
        self.dgamma.iter().map(|d| d.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Bounding-box diagonal, used as a cheap diameter proxy.
    pub fn diameter(&self) -> f64 {
        let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
        for g in &self.gamma {
            xmin = xmin.min(g.re);
            xmax = xmax.max(g.re);
            ymin = ymin.min(g.im);
            ymax = ymax.max(g.im);
        }
        ((xmax - xmin).powi(2) + (ymax - ymin).powi(2)).sqrt()
    }

    /// Winding number of the curve's node polygon about `p`.
    pub fn winding_number(&self, p: Complex) -> i32 {
        let n = self.n_nodes();
        let mut total = 0.0;
        for j in 0..n {
            let a = self.gamma[j] - p;
            let b = self.gamma[(j + 1) % n] - p;
            total += (b / a).arg();
        }
        (total / (2.0 * PI)).round() as i32
    }

    /// Distance from `p` to the node polygon.
    pub fn distance_to_polygon(&self, p: Complex) -> f64 {
        let n = self.n_nodes();
        let mut best = f64::INFINITY;
        for j in 0..n {
            let d = point_segment_distance(p, self.gamma[j], self.gamma[(j + 1) % n]);
            best = best.min(d);
        }
        best
    }

    /// How far the node polygon can stray from the underlying spectral curve:
    /// twice the maximum midpoint deviation. This is the resolution limit of
    /// every polygon-based containment or intersection answer.
    pub fn polygon_tolerance(&self) -> f64 {
        let n = self.n_nodes();
        let fine = match spectral::resample(&self.gamma, 2 * n) {
            Ok(f) => f,
            Err(_) => return f64::INFINITY,
        };
        let mut worst: f64 = 0.0;
        for j in 0..n {
            let mid = (self.gamma[j] + self.gamma[(j + 1) % n]) * 0.5;
            worst = worst.max((fine[2 * j + 1] - mid).norm());
        }
        2.0 * worst
    }

    /// Self-intersection test on the node polygon (adjacent segments,
    /// which share endpoints, are skipped). Resolution-limited.
    pub fn find_self_intersection(&self) -> Option<(usize, usize)> {
        let n = self.n_nodes();
        for a in 0..n {
            for b in (a + 2)..n {
                if a == 0 && b == n - 1 {
                    continue; // wraps around to the neighbour of segment 0
                }
                if segments_intersect(
                    self.gamma[a],
                    self.gamma[(a + 1) % n],
                    self.gamma[b],
                    self.gamma[(b + 1) % n],
                ) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// True when the node polygons of `self` and `other` cross.
    pub fn intersects_polygon(&self, other: &ParametricCurve) -> bool {
        let n = self.n_nodes();
        let m = other.n_nodes();
        for a in 0..n {
            for b in 0..m {
                if segments_intersect(
                    self.gamma[a],
                    self.gamma[(a + 1) % n],
                    other.gamma[b],
                    other.gamma[(b + 1) % m],
                ) {
                    return true;
                }
            }
        }
        false
    }
}

fn cross(o: Complex, a: Complex, b: Complex) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

fn point_segment_distance(p: Complex, a: Complex, b: Complex) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a).re * ab.re + (p - a).im * ab.im) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Proper or touching intersection of two segments; collinear overlaps count.
pub fn segments_intersect(a1: Complex, a2: Complex, b1: Complex, b2: Complex) -> bool {
    let d1 = cross(b1, b2, a1);
    let d2 = cross(b1, b2, a2);
    let d3 = cross(a1, a2, b1);
    let d4 = cross(a1, a2, b2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on_segment = |p: Complex, a: Complex, b: Complex| {
        p.re >= a.re.min(b.re)
            && p.re <= a.re.max(b.re)
            && p.im >= a.im.min(b.im)
            && p.im <= a.im.max(b.im)
    };
    (d1 == 0.0 && on_segment(a1, b1, b2))
        || (d2 == 0.0 && on_segment(a2, b1, b2))
        || (d3 == 0.0 && on_segment(b1, a1, a2))
        || (d4 == 0.0 && on_segment(b2, a1, a2))
}

/// One term `coeff · e^{i·degree·s}` of a complex trigonometric polynomial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrigTerm {
    pub degree: i32,
    pub coeff: [f64; 2],
}

/// Input description of a boundary curve. Analytic kinds are parametrized
/// counterclockwise; `point_list` curves keep the authored order and are
/// interpreted as exact trigonometric interpolants of the samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveSpec {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    Ellipse {
        center: [f64; 2],
        semi_axes: [f64; 2],
        #[serde(default)]
        rotation: f64,
    },
    TrigPolynomial {
        terms: Vec<TrigTerm>,
    },
    PointList {
        points: Vec<[f64; 2]>,
    },
}

impl CurveSpec {
    pub fn sample(&self, n_nodes: usize) -> Result<ParametricCurve> {
        sample_curve(self, n_nodes)
    }
}

/// Samples a curve spec at `n_nodes` uniform parameter values with exact
/// analytic derivatives where available and spectral derivatives for point
/// lists. Rejects curves with a vanishing tangent or a self-intersection.
pub fn sample_curve(spec: &CurveSpec, n_nodes: usize) -> Result<ParametricCurve> {
    spectral::check_node_count(n_nodes)?;
    let nodes: Vec<f64> = (0..n_nodes)
        .map(|j| 2.0 * PI * j as f64 / n_nodes as f64)
        .collect();
    let curve = match spec {
        CurveSpec::Circle { center, radius } => {
            let c = Complex::new(center[0], center[1]);
            let mut gamma = Vec::with_capacity(n_nodes);
            let mut dgamma = Vec::with_capacity(n_nodes);
            let mut ddgamma = Vec::with_capacity(n_nodes);
            for &s in &nodes {
                let e = Complex::new(0.0, s).exp() * *radius;
                gamma.push(c + e);
                dgamma.push(Complex::new(0.0, 1.0) * e);
                ddgamma.push(-e);
            }
            ParametricCurve {
                gamma,
                dgamma,
                ddgamma,
                orientation: Orientation::Counterclockwise,
            }
        }
        CurveSpec::Ellipse {
            center,
            semi_axes,
            rotation,
        } => {
            let c = Complex::new(center[0], center[1]);
            let rot = Complex::new(0.0, *rotation).exp();
            let (a, b) = (semi_axes[0], semi_axes[1]);
            let mut gamma = Vec::with_capacity(n_nodes);
            let mut dgamma = Vec::with_capacity(n_nodes);
            let mut ddgamma = Vec::with_capacity(n_nodes);
            for &s in &nodes {
                let e = Complex::new(a * s.cos(), b * s.sin());
                let de = Complex::new(-a * s.sin(), b * s.cos());
                gamma.push(c + rot * e);
                dgamma.push(rot * de);
                ddgamma.push(-rot * e);
            }
            ParametricCurve {
                gamma,
                dgamma,
                ddgamma,
                orientation: Orientation::Counterclockwise,
            }
        }
        CurveSpec::TrigPolynomial { terms } => {
            let max_deg = terms.iter().map(|t| t.degree.unsigned_abs()).max().unwrap_or(0);
            if 2 * max_deg as usize >= n_nodes {
                return Err(Error::BadNodeCount { n: n_nodes });
            }
            let mut gamma = vec![Complex::ZERO; n_nodes];
            let mut dgamma = vec![Complex::ZERO; n_nodes];
            let mut ddgamma = vec![Complex::ZERO; n_nodes];
            for term in terms {
                let c = Complex::new(term.coeff[0], term.coeff[1]);
                let deg = term.degree as f64;
                for (j, &s) in nodes.iter().enumerate() {
                    let e = Complex::new(0.0, deg * s).exp();
                    gamma[j] += c * e;
                    dgamma[j] += c * Complex::new(0.0, deg) * e;
                    ddgamma[j] += c * -(deg * deg) * e;
                }
            }
            let mut curve = ParametricCurve {
                gamma,
                dgamma,
                ddgamma,
                orientation: Orientation::Counterclockwise,
            };
            if curve.signed_area() < 0.0 {
                curve.orientation = Orientation::Clockwise;
            }
            curve
        }
        CurveSpec::PointList { points } => {
            if points.len() < 16 || !points.len().is_power_of_two() {
                return Err(Error::BadPointList { n: points.len() });
            }
            let samples: Vec<Complex> = points.iter().map(|p| Complex::new(p[0], p[1])).collect();
            let gamma = spectral::resample(&samples, n_nodes)?;
            ParametricCurve::from_samples(gamma)?
        }
    };
    let speed = curve.min_speed();
    if speed <= 1e-12 {
        let j = curve
            .dgamma
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(j, _)| j)
            .unwrap_or(0);
        return Err(Error::DegenerateCurve {
            s: 2.0 * PI * j as f64 / n_nodes as f64,
            speed,
        });
    }
    if let Some((a, b)) = curve.find_self_intersection() {
        return Err(Error::SelfIntersectingCurve { seg_a: a, seg_b: b });
    }
    Ok(curve)
}

/// Which boundary a validation finding refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryId {
    External,
    Internal(usize),
}

impl fmt::Display for BoundaryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryId::External => write!(f, "external boundary"),
            BoundaryId::Internal(i) => write!(f, "internal boundary {i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    WrongOrientation(BoundaryId),
    NotSimple(BoundaryId, usize, usize),
    ZeroSpeed(BoundaryId, f64),
    InternalsIntersect(usize, usize),
    InternalsNested(usize, usize),
    NotInsideExternal(usize),
    ObstacleCenterMisplaced(usize),
    AnchorMisplaced,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongOrientation(id) => write!(
                f,
                "{id} has the wrong orientation (external must be counterclockwise, internal clockwise)"
            ),
            Violation::NotSimple(id, a, b) => {
                write!(f, "{id} self-intersects near segments {a} and {b}")
            }
            Violation::ZeroSpeed(id, v) => {
                write!(f, "{id} has a vanishing tangent (min |gamma'| = {v:.3e})")
            }
            Violation::InternalsIntersect(a, b) => {
                write!(f, "internal boundaries {a} and {b} intersect")
            }
            Violation::InternalsNested(a, b) => {
                write!(f, "internal boundary {a} is nested inside internal boundary {b}")
            }
            Violation::NotInsideExternal(i) => write!(
                f,
                "internal boundary {i} is not strictly inside the external boundary"
            ),
            Violation::ObstacleCenterMisplaced(i) => write!(
                f,
                "obstacle center {i} does not lie strictly inside internal boundary {i}"
            ),
            Violation::AnchorMisplaced => write!(f, "interior anchor is not in the free space"),
        }
    }
}

/// Everything `validate_workspace` found wrong; empty iff the workspace is valid.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "workspace is valid")
        } else {
            for v in &self.violations {
                writeln!(f, "- {v}")?;
            }
            Ok(())
        }
    }
}

/// A bounded workspace: counterclockwise external boundary, clockwise
/// internal obstacle boundaries, one marked point inside each obstacle and
/// one anchor in the free space.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub external: ParametricCurve,
    pub internal: Vec<ParametricCurve>,
    pub obstacle_centers: Vec<Complex>,
    pub interior_anchor: Complex,
    boundary_guards: Vec<f64>,
}

impl Workspace {
    pub fn new(
        external: ParametricCurve,
        internal: Vec<ParametricCurve>,
        obstacle_centers: Vec<Complex>,
        interior_anchor: Complex,
    ) -> Self {
        let mut guards = vec![external.polygon_tolerance()];
        guards.extend(internal.iter().map(|c| c.polygon_tolerance()));
        Workspace {
            external,
            internal,
            obstacle_centers,
            interior_anchor,
            boundary_guards: guards,
        }
    }

    pub fn n_obstacles(&self) -> usize {
        self.internal.len()
    }

    /// All boundaries, external first.
    pub fn curves(&self) -> impl Iterator<Item = &ParametricCurve> {
        std::iter::once(&self.external).chain(self.internal.iter())
    }

    /// Minimum distance from `p` to any boundary's node polygon.
    pub fn clearance(&self, p: Complex) -> f64 {
        self.curves()
            .map(|c| c.distance_to_polygon(p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Reports every violated workspace invariant; an empty report means valid.
pub fn validate_workspace(ws: &Workspace) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut push = |v: Violation| report.violations.push(v);

    let per_curve = |id: BoundaryId, curve: &ParametricCurve, push: &mut dyn FnMut(Violation)| {
        let speed = curve.min_speed();
        if speed <= 1e-12 {
            push(Violation::ZeroSpeed(id, speed));
        }
        if let Some((a, b)) = curve.find_self_intersection() {
            push(Violation::NotSimple(id, a, b));
        }
    };

    per_curve(BoundaryId::External, &ws.external, &mut push);
    if ws.external.signed_area() <= 0.0 {
        push(Violation::WrongOrientation(BoundaryId::External));
    }
    for (i, curve) in ws.internal.iter().enumerate() {
        per_curve(BoundaryId::Internal(i), curve, &mut push);
        if curve.signed_area() >= 0.0 {
            push(Violation::WrongOrientation(BoundaryId::Internal(i)));
        }
    }

    for a in 0..ws.internal.len() {
        for b in (a + 1)..ws.internal.len() {
            if ws.internal[a].intersects_polygon(&ws.internal[b]) {
                push(Violation::InternalsIntersect(a, b));
            } else if ws.internal[b].winding_number(ws.internal[a].gamma[0]) != 0 {
                push(Violation::InternalsNested(a, b));
            } else if ws.internal[a].winding_number(ws.internal[b].gamma[0]) != 0 {
                push(Violation::InternalsNested(b, a));
            }
        }
    }

    for (i, curve) in ws.internal.iter().enumerate() {
        let inside = curve
            .gamma
            .iter()
            .all(|&p| ws.external.winding_number(p) == 1)
            && !curve.intersects_polygon(&ws.external);
        if !inside {
            push(Violation::NotInsideExternal(i));
        }
    }

    for (i, (&center, curve)) in ws.obstacle_centers.iter().zip(&ws.internal).enumerate() {
        // Internal curves are clockwise, so an enclosed point has winding -1.
        if curve.winding_number(center).abs() != 1
            || curve.distance_to_polygon(center) <= ws.boundary_guards[i + 1]
        {
            push(Violation::ObstacleCenterMisplaced(i));
        }
    }
    if ws.obstacle_centers.len() != ws.internal.len() {
        for i in ws.obstacle_centers.len()..ws.internal.len() {
            push(Violation::ObstacleCenterMisplaced(i));
        }
    }

    if !point_in_free_space(ws, ws.interior_anchor) {
        push(Violation::AnchorMisplaced);
    }

    report
}

/// Winding-number membership test with a conservative guard band: points
/// closer to a node polygon than its resolution tolerance are reported as
/// not in the free space.
pub fn point_in_free_space(ws: &Workspace, p: Complex) -> bool {
    if ws.external.distance_to_polygon(p) <= ws.boundary_guards[0] {
        return false;
    }
    if ws.external.winding_number(p) != 1 {
        return false;
    }
    for (i, curve) in ws.internal.iter().enumerate() {
        if curve.distance_to_polygon(p) <= ws.boundary_guards[i + 1] {
            return false;
        }
        if curve.winding_number(p) != 0 {
            return false;
        }
    }
    true
}

/// JSON description of a workspace, the input format of the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorkspaceSpec {
    pub external: CurveSpec,
    pub internal: Vec<CurveSpec>,
    pub centers: Vec<[f64; 2]>,
    pub anchor: [f64; 2],
    pub n_nodes: usize,
}

/// Samples a workspace description. Analytic curve kinds are parametrized
/// counterclockwise and internal ones are reversed to the clockwise
/// convention automatically; `point_list` curves keep their authored
/// orientation and validation reports a mismatch instead of fixing it.
pub fn build_workspace(spec: &WorkspaceSpec, n_nodes: Option<usize>) -> Result<Workspace> {
    let n = n_nodes.unwrap_or(spec.n_nodes);
    let external = sample_curve(&spec.external, n)?;
    let mut internal = Vec::with_capacity(spec.internal.len());
    for cs in &spec.internal {
        let curve = sample_curve(cs, n)?;
        let curve = match (cs, curve.orientation) {
            (CurveSpec::PointList { .. }, _) => curve,
            (_, Orientation::Counterclockwise) => curve.reversed(),
            (_, Orientation::Clockwise) => curve,
        };
        internal.push(curve);
    }
    let centers = spec
        .centers
        .iter()
        .map(|p| Complex::new(p[0], p[1]))
        .collect();
    let anchor = Complex::new(spec.anchor[0], spec.anchor[1]);
    Ok(Workspace::new(external, internal, centers, anchor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(center: Complex, radius: f64) -> CurveSpec {
        CurveSpec::Circle {
            center: [center.re, center.im],
            radius,
        }
    }

    #[test]
    fn unit_circle_samples_exactly() {
        let curve = sample_curve(&circle(Complex::ZERO, 1.0), 64).unwrap();
        for (j, g) in curve.gamma.iter().enumerate() {
            let s = 2.0 * PI * j as f64 / 64.0;
            assert!((g - Complex::new(0.0, s).exp()).norm() < 1e-15);
            assert!((curve.dgamma[j] - Complex::new(0.0, 1.0) * g).norm() < 1e-15);
        }
        assert_eq!(curve.orientation, Orientation::Counterclockwise);
    }

    #[test]
    fn ellipse_second_derivative_is_analytic() {
        let spec = CurveSpec::Ellipse {
            center: [0.0, 0.0],
            semi_axes: [2.0, 1.0],
            rotation: 0.0,
        };
        let curve = sample_curve(&spec, 128).unwrap();
        for (j, dd) in curve.ddgamma.iter().enumerate() {
            let s = 2.0 * PI * j as f64 / 128.0;
            let exact = Complex::new(-2.0 * s.cos(), -s.sin());
            assert!((dd - exact).norm() < 1e-14);
        }
    }

    #[test]
    fn point_list_spectral_derivatives_match_analytic() {
        let n = 64;
        let points: Vec<[f64; 2]> = (0..n)
            .map(|j| {
                let s = 2.0 * PI * j as f64 / n as f64;
                let g = Complex::new(0.0, s).exp() + 0.1 * Complex::new(0.0, 3.0 * s).exp();
                [g.re, g.im]
            })
            .collect();
        let curve = sample_curve(&CurveSpec::PointList { points }, n).unwrap();
        for (j, d) in curve.dgamma.iter().enumerate() {
            let s = 2.0 * PI * j as f64 / n as f64;
            let exact = Complex::new(0.0, 1.0)
                * (Complex::new(0.0, s).exp() + 0.3 * Complex::new(0.0, 3.0 * s).exp());
            assert!((d - exact).norm() <= 1e-10, "node {j}: {}", (d - exact).norm());
        }
    }

    #[test]
    fn degenerate_curve_is_rejected() {
        // gamma(s) = e^{is} + e^{-is} = 2 cos s collapses to a segment.
        let spec = CurveSpec::TrigPolynomial {
            terms: vec![
                TrigTerm { degree: 1, coeff: [1.0, 0.0] },
                TrigTerm { degree: -1, coeff: [1.0, 0.0] },
            ],
        };
        match sample_curve(&spec, 64) {
            Err(Error::DegenerateCurve { .. }) | Err(Error::SelfIntersectingCurve { .. }) => {}
            other => panic!("expected degenerate curve, got {other:?}"),
        }
    }

    #[test]
    fn self_intersecting_point_list_is_rejected() {
        // A figure-eight-ish trig curve.
        let spec = CurveSpec::TrigPolynomial {
            terms: vec![
                TrigTerm { degree: 1, coeff: [1.0, 0.0] },
                TrigTerm { degree: -2, coeff: [0.0, 0.9] },
            ],
        };
        match sample_curve(&spec, 128) {
            Err(Error::SelfIntersectingCurve { .. }) | Err(Error::DegenerateCurve { .. }) => {}
            other => panic!("expected self-intersection, got {other:?}"),
        }
    }

    fn disk_workspace() -> Workspace {
        let spec = WorkspaceSpec {
            external: circle(Complex::ZERO, 1.0),
            internal: vec![circle(Complex::new(0.5, 0.0), 0.2)],
            centers: vec![[0.5, 0.0]],
            anchor: [-0.3, 0.0],
            n_nodes: 64,
        };
        build_workspace(&spec, None).unwrap()
    }

    #[test]
    fn valid_workspace_reports_clean() {
        let ws = disk_workspace();
        let report = validate_workspace(&ws);
        assert!(report.is_valid(), "{report}");
        assert_eq!(ws.internal[0].orientation, Orientation::Clockwise);
    }

    #[test]
    fn overlapping_obstacles_are_reported() {
        let spec = WorkspaceSpec {
            external: circle(Complex::ZERO, 1.0),
            internal: vec![
                circle(Complex::new(0.2, 0.0), 0.3),
                circle(Complex::new(-0.2, 0.0), 0.3),
            ],
            centers: vec![[0.2, 0.0], [-0.2, 0.0]],
            anchor: [0.0, 0.7],
            n_nodes: 64,
        };
        let ws = build_workspace(&spec, None).unwrap();
        let report = validate_workspace(&ws);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::InternalsIntersect(0, 1))));
    }

    #[test]
    fn ccw_internal_curve_is_reported() {
        let ws0 = disk_workspace();
        let ws = Workspace::new(
            ws0.external.clone(),
            vec![ws0.internal[0].reversed()],
            ws0.obstacle_centers.clone(),
            ws0.interior_anchor,
        );
        let report = validate_workspace(&ws);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::WrongOrientation(BoundaryId::Internal(0)))));
    }

    #[test]
    fn free_space_membership() {
        let ws = disk_workspace();
        assert!(point_in_free_space(&ws, Complex::ZERO));
        assert!(!point_in_free_space(&ws, Complex::new(1.5, 0.0)));
        assert!(!point_in_free_space(&ws, Complex::new(0.5, 0.0))); // obstacle center
    }

    #[test]
    fn winding_correctness_near_internal_boundary() {
        let ws = disk_workspace();
        let curve = &ws.internal[0];
        let center = Complex::new(0.5, 0.0);
        let diameter = curve.diameter();
        let n = curve.n_nodes();
        for j in 0..n {
            let mid = (curve.gamma[j] + curve.gamma[(j + 1) % n]) * 0.5;
            let inward = (center - mid) / (center - mid).norm();
            assert!(!point_in_free_space(&ws, mid + inward * (1e-3 * diameter)));
            assert!(point_in_free_space(&ws, mid - inward * (1e-3 * diameter)));
        }
    }

    #[test]
    fn resampling_idempotence() {
        let spec = CurveSpec::TrigPolynomial {
            terms: vec![
                TrigTerm { degree: 1, coeff: [1.0, 0.0] },
                TrigTerm { degree: 3, coeff: [0.1, 0.05] },
            ],
        };
        let curve = sample_curve(&spec, 64).unwrap();
        let round = curve.resampled(128).unwrap().resampled(64).unwrap();
        for j in 0..64 {
            assert!((round.gamma[j] - curve.gamma[j]).norm() <= 1e-12);
        }
    }
}
