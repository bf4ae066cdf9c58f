//! Alternating circularization of a multiply connected workspace.
//!
//! Each iteration runs one exterior stage per internal boundary (mapping the
//! unbounded side of that curve onto the exterior of the unit circle, with
//! the tracked obstacle point going to the origin) followed by one interior
//! stage for the external boundary (anchor to the origin). Every stage pushes
//! all other boundary nodes and all tracked points through it; pushed curves
//! are re-differentiated spectrally. The pushed boundaries become more
//! circular geometrically fast; iteration stops when the sup-node
//! displacement between successive iterations drops below the tolerance.
//!
//! The converged composite is the conformal navigation transformation: a
//! stack of stages evaluated by composition, its complex derivative by the
//! chain rule, and its 2×2 Jacobian the conformal similarity
//! `[[a, −b], [b, a]]` built from the complex derivative `a + ib`.

use crate::error::{Error, Result};
use crate::geometry::{validate_workspace, ParametricCurve, Workspace, WorkspaceSpec};
use crate::simply_connected::{build_exterior_map, build_interior_map, MapStage, StageEval};
use crate::{spectral, Complex};
use nalgebra::{Matrix2, Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

/// Ordered stack of stages forming the composite map, with the current
/// images of all boundaries and tracked points.
#[derive(Debug, Clone)]
pub struct CompositeMap {
    pub stages: Vec<MapStage>,
    /// Images of all boundaries, external first.
    pub image_curves: Vec<ParametricCurve>,
    /// Images of the obstacle centers.
    pub tracked_centers: Vec<Complex>,
    /// Image of the interior anchor (exactly zero after a full iteration).
    pub tracked_anchor: Complex,
    pub n_iterations: usize,
    pub final_delta: f64,
}

/// Per-iteration convergence record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationReport {
    /// Sup-node displacement between successive iterations.
    pub deltas: Vec<f64>,
    pub converged: bool,
    /// `deltas[n+1]/deltas[n]`.
    pub ratio_estimates: Vec<f64>,
}

impl IterationReport {
    pub fn last_delta(&self) -> f64 {
        self.deltas.last().copied().unwrap_or(f64::NAN)
    }
}

/// A fitted circle of the image domain.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Circle {
    pub center: Complex,
    pub radius: f64,
}

/// The circular image domain: unit external circle and fitted obstacle circles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphereWorld {
    pub external_center: Complex,
    pub external_radius: f64,
    pub obstacle_circles: Vec<Circle>,
    pub fit_residuals: Vec<f64>,
}

/// Runs the iteration until the sup-node displacement between successive
/// iterations is at most `tol` or `max_iter` is reached.
pub fn run_koebe(ws: &Workspace, tol: f64, max_iter: usize) -> Result<(CompositeMap, IterationReport)> {
    let report = validate_workspace(ws);
    if !report.is_valid() {
        return Err(Error::InvalidWorkspace(report));
    }

    let m = ws.n_obstacles();
    let mut curves: Vec<ParametricCurve> = std::iter::once(ws.external.clone())
        .chain(ws.internal.iter().cloned())
        .collect();
    let mut centers = ws.obstacle_centers.clone();
    let mut anchor = ws.interior_anchor;

    let mut stages: Vec<MapStage> = Vec::new();
    let mut snapshot: Vec<Vec<Complex>> = curves.iter().map(|c| c.gamma.clone()).collect();
    let mut deltas: Vec<f64> = Vec::new();
    let mut converged = false;

    for iteration in 1..=max_iter {
        for step in 1..=(m + 1) {
            let stage = if step <= m {
                build_exterior_map(&curves[step], centers[step - 1])
            } else {
                build_interior_map(&curves[0], anchor)
            }
            .map_err(|e| Error::StageBuild {
                iteration,
                step,
                source: Box::new(e),
            })?;

            let own_index = if step <= m { step } else { 0 };
            for (i, curve) in curves.iter_mut().enumerate() {
                if i == own_index {
                    *curve = curve_from_boundary_image(&stage, curve);
                } else {
                    *curve = push_curve(&stage, curve).map_err(|e| Error::StageBuild {
                        iteration,
                        step,
                        source: Box::new(e),
                    })?;
                }
            }
            for (i, c) in centers.iter_mut().enumerate() {
                if step <= m && i == step - 1 {
                    *c = Complex::ZERO; // this stage sends its own center to 0
                } else {
                    *c = stage.evaluate(*c).map_err(box_stage_err(iteration, step))?.value;
                }
            }
            anchor = if step == m + 1 {
                Complex::ZERO
            } else {
                stage.evaluate(anchor).map_err(box_stage_err(iteration, step))?.value
            };
            stages.push(stage);
        }

        // Topology must survive every iteration at node-polygon resolution.
        for a in 0..curves.len() {
            if let Some((sa, sb)) = curves[a].find_self_intersection() {
                return Err(Error::StageBuild {
                    iteration,
                    step: m + 1,
                    source: Box::new(Error::SelfIntersectingCurve { seg_a: sa, seg_b: sb }),
                });
            }
            for b in (a + 1)..curves.len() {
                if curves[a].intersects_polygon(&curves[b]) {
                    return Err(Error::TopologyViolation { iteration, a, b });
                }
            }
        }

        let delta = curves
            .iter()
            .zip(&snapshot)
            .flat_map(|(c, old)| c.gamma.iter().zip(old).map(|(g, o)| (g - o).norm()))
            .fold(0.0f64, f64::max);
        snapshot = curves.iter().map(|c| c.gamma.clone()).collect();
        deltas.push(delta);
        if delta <= tol {
            converged = true;
            break;
        }
    }

    let ratio_estimates = deltas.windows(2).map(|w| w[1] / w[0]).collect();
    let report = IterationReport {
        deltas,
        converged,
        ratio_estimates,
    };
    if !converged {
        return Err(Error::NotConverged { tol, report });
    }
    let composite = CompositeMap {
        stages,
        image_curves: curves,
        tracked_centers: centers,
        tracked_anchor: anchor,
        n_iterations: report.deltas.len(),
        final_delta: report.last_delta(),
    };
    Ok((composite, report))
}

fn box_stage_err(iteration: usize, step: usize) -> impl Fn(Error) -> Error {
    move |e| Error::StageBuild {
        iteration,
        step,
        source: Box::new(e),
    }
}

/// Relative level below which Fourier modes of a pushed curve are zeroed.
///
/// Spectral re-differentiation amplifies mode-n roundoff by n², and each
/// iteration feeds the result back through a kernel solve; without the
/// filter that loop grows residual noise by an order of magnitude per
/// iteration and the last few digits of the stopping tolerance are never
/// reached. Analytic content at or above this level is untouched.
const MODE_FILTER_LEVEL: f64 = 1e-14;

/// Curve record from freshly pushed nodes: mild spectral filter, then exact
/// derivatives of the filtered trigonometric polynomial. Conformal stages
/// preserve orientation, so the old tag carries over.
fn filtered_curve(gamma: Vec<Complex>, old: &ParametricCurve) -> ParametricCurve {
    let mut coeffs = spectral::fourier_coeffs(&gamma);
    let peak = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    for c in &mut coeffs {
        if c.norm() <= MODE_FILTER_LEVEL * peak {
            *c = Complex::ZERO;
        }
    }
    ParametricCurve {
        gamma: spectral::from_coeffs(&coeffs),
        dgamma: spectral::from_coeffs(&spectral::derivative_coeffs(&coeffs, 1)),
        ddgamma: spectral::from_coeffs(&spectral::derivative_coeffs(&coeffs, 2)),
        orientation: old.orientation,
    }
}

/// New curve record for the stage's own boundary: the image nodes are the
/// boundary correspondence itself.
fn curve_from_boundary_image(stage: &MapStage, old: &ParametricCurve) -> ParametricCurve {
    filtered_curve(stage.map_boundary.clone(), old)
}

/// Pushes a whole curve through a stage.
fn push_curve(stage: &MapStage, curve: &ParametricCurve) -> Result<ParametricCurve> {
    let mut gamma = Vec::with_capacity(curve.n_nodes());
    for &g in &curve.gamma {
        gamma.push(stage.evaluate(g)?.value);
    }
    Ok(filtered_curve(gamma, curve))
}

/// Composite evaluation: value plus a flag when any stage evaluated inside
/// its accuracy floor.
pub fn evaluate_composite(cm: &CompositeMap, z: Complex) -> Result<StageEval> {
    let mut value = z;
    let mut near = false;
    for stage in &cm.stages {
        let eval = stage.evaluate(value)?;
        value = eval.value;
        near |= eval.near_boundary;
    }
    Ok(StageEval {
        value,
        derivative: None,
        near_boundary: near,
    })
}

/// Composite value and complex derivative (chain rule over the stages).
pub fn composite_with_derivative(cm: &CompositeMap, z: Complex) -> Result<StageEval> {
    let mut value = z;
    let mut derivative = Complex::new(1.0, 0.0);
    let mut near = false;
    for stage in &cm.stages {
        let eval = stage.evaluate_with_derivative(value)?;
        value = eval.value;
        derivative *= eval.derivative.expect("derivative requested");
        near |= eval.near_boundary;
    }
    Ok(StageEval {
        value,
        derivative: Some(derivative),
        near_boundary: near,
    })
}

/// Complex derivative of the composite at `z`.
pub fn composite_derivative(cm: &CompositeMap, z: Complex) -> Result<Complex> {
    Ok(composite_with_derivative(cm, z)?.derivative.unwrap())
}

/// The Cauchy–Riemann similarity built from a complex derivative `a + ib`.
pub fn jacobian_from_derivative(d: Complex) -> Matrix2<f64> {
    Matrix2::new(d.re, -d.im, d.im, d.re)
}

/// 2×2 real Jacobian of the composite at `z`; satisfies `JᵀJ = det(J)·I`.
pub fn jacobian_2x2(cm: &CompositeMap, z: Complex) -> Result<Matrix2<f64>> {
    Ok(jacobian_from_derivative(composite_derivative(cm, z)?))
}

/// Algebraic least-squares circle fit (Kåsa form) over points.
pub fn fit_circle(points: &[Complex]) -> Option<(Circle, f64)> {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut sr, mut sxr, mut syr) = (0.0, 0.0, 0.0);
    for p in points {
        let (x, y) = (p.re, p.im);
        let r2 = x * x + y * y;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        sr += r2;
        sxr += x * r2;
        syr += y * r2;
    }
    let m = Matrix3::new(sxx, sxy, sx, sxy, syy, sy, sx, sy, n);
    let rhs = Vector3::new(-sxr, -syr, -sr);
    let sol = m.lu().solve(&rhs)?;
    let center = Complex::new(-sol[0] / 2.0, -sol[1] / 2.0);
    let rad2 = center.norm_sqr() - sol[2];
    if rad2 <= 0.0 {
        return None;
    }
    let radius = rad2.sqrt();
    let residual = points
        .iter()
        .map(|p| ((p - center).norm() - radius).abs())
        .fold(0.0f64, f64::max);
    Some((Circle { center, radius }, residual))
}

/// Fits circles to the converged image curves and validates the sphere-world
/// structure. The external image must already be the unit circle to 1e-10.
pub fn fit_circles(cm: &CompositeMap) -> Result<SphereWorld> {
    let ext_dev = cm.image_curves[0]
        .gamma
        .iter()
        .map(|g| (g.norm() - 1.0).abs())
        .fold(0.0f64, f64::max);
    if ext_dev > 1e-10 {
        return Err(Error::CircleFitResidual {
            index: 0,
            residual: ext_dev,
            radius: 1.0,
        });
    }

    let mut obstacle_circles = Vec::new();
    let mut fit_residuals = vec![ext_dev];
    for (i, curve) in cm.image_curves.iter().enumerate().skip(1) {
        let (circle, residual) = fit_circle(&curve.gamma).ok_or(Error::CircleFitResidual {
            index: i,
            residual: f64::INFINITY,
            radius: 0.0,
        })?;
        if residual > 1e-6 * circle.radius {
            return Err(Error::CircleFitResidual {
                index: i,
                residual,
                radius: circle.radius,
            });
        }
        obstacle_circles.push(circle);
        fit_residuals.push(residual);
    }

    for (i, c) in obstacle_circles.iter().enumerate() {
        if !(c.radius > 0.0 && c.radius < 1.0 && c.center.norm() + c.radius < 1.0) {
            return Err(Error::SphereWorld(format!(
                "obstacle circle {i} (center {}, radius {}) is not strictly inside the unit disk",
                c.center, c.radius
            )));
        }
        if (cm.tracked_centers[i] - c.center).norm() >= c.radius {
            return Err(Error::SphereWorld(format!(
                "tracked center {i} ({}) lies outside its fitted circle",
                cm.tracked_centers[i]
            )));
        }
        for (j, d) in obstacle_circles.iter().enumerate().take(i) {
            if (c.center - d.center).norm() <= c.radius + d.radius {
                return Err(Error::SphereWorld(format!(
                    "obstacle circles {j} and {i} are not disjoint"
                )));
            }
        }
    }

    Ok(SphereWorld {
        external_center: Complex::ZERO,
        external_radius: 1.0,
        obstacle_circles,
        fit_residuals,
    })
}

/// Identifies the workspace/discretization a cache belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheKey {
    pub workspace_hash: String,
    pub n_nodes: usize,
    pub tol: f64,
}

impl std::fmt::Display for CacheKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}/{:e}", self.workspace_hash, self.n_nodes, self.tol)
    }
}

/// Content hash of the workspace description plus discretization parameters.
pub fn workspace_cache_key(spec: &WorkspaceSpec, n_nodes: usize, tol: f64) -> CacheKey {
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_string(spec).expect("workspace spec serializes").as_bytes());
    hasher.update(n_nodes.to_le_bytes());
    hasher.update(tol.to_bits().to_le_bytes());
    let digest = hasher.finalize();
    let hash = digest.iter().map(|b| format!("{b:02x}")).collect::<String>();
    CacheKey {
        workspace_hash: hash,
        n_nodes,
        tol,
    }
}

const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    workspace_hash: String,
    n_nodes: usize,
    tol: f64,
    n_iterations: usize,
    final_delta: f64,
    stages: Vec<MapStage>,
    image_curves: Vec<ParametricCurve>,
    tracked_centers: Vec<Complex>,
    tracked_anchor: Complex,
    sphere_world: SphereWorld,
}

/// Persists the converged transformation; the JSON float encoding
/// round-trips every finite f64 exactly, so reloads evaluate bit-identically.
pub fn save_cache(
    cm: &CompositeMap,
    sw: &SphereWorld,
    key: &CacheKey,
    path: &Path,
) -> Result<()> {
    let file = CacheFile {
        format_version: CACHE_FORMAT_VERSION,
        workspace_hash: key.workspace_hash.clone(),
        n_nodes: key.n_nodes,
        tol: key.tol,
        n_iterations: cm.n_iterations,
        final_delta: cm.final_delta,
        stages: cm.stages.clone(),
        image_curves: cm.image_curves.clone(),
        tracked_centers: cm.tracked_centers.clone(),
        tracked_anchor: cm.tracked_anchor,
        sphere_world: sw.clone(),
    };
    let json = serde_json::to_string(&file).map_err(|e| Error::CacheFormat(e.to_string()))?;
    std::fs::write(path, json)?;
    Ok(())
}

/// Loads a cached transformation, rejecting stale or corrupt files.
pub fn load_cache(path: &Path, key: &CacheKey) -> Result<(CompositeMap, SphereWorld)> {
    let text = std::fs::read_to_string(path)?;
    let file: CacheFile =
        serde_json::from_str(&text).map_err(|e| Error::CacheFormat(e.to_string()))?;
    if file.format_version != CACHE_FORMAT_VERSION {
        return Err(Error::CacheFormat(format!(
            "unsupported cache format version {}",
            file.format_version
        )));
    }
    let stored = CacheKey {
        workspace_hash: file.workspace_hash.clone(),
        n_nodes: file.n_nodes,
        tol: file.tol,
    };
    if &stored != key {
        return Err(Error::StaleCache {
            stored: stored.to_string(),
            expected: key.to_string(),
        });
    }
    let mut stages = file.stages;
    for s in &mut stages {
        s.rebuild_tables();
    }
    Ok((
        CompositeMap {
            stages,
            image_curves: file.image_curves,
            tracked_centers: file.tracked_centers,
            tracked_anchor: file.tracked_anchor,
            n_iterations: file.n_iterations,
            final_delta: file.final_delta,
        },
        file.sphere_world,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_workspace, CurveSpec, WorkspaceSpec};

    fn circle_spec(cx: f64, cy: f64, r: f64) -> CurveSpec {
        CurveSpec::Circle {
            center: [cx, cy],
            radius: r,
        }
    }

    /// Unit disk with two small circular obstacles; anchor at the origin, so
    /// the workspace is already a normalized sphere world.
    fn sphere_world_workspace(n: usize) -> Workspace {
        build_workspace(
            &WorkspaceSpec {
                external: circle_spec(0.0, 0.0, 1.0),
                internal: vec![circle_spec(0.45, 0.2, 0.15), circle_spec(-0.4, -0.35, 0.2)],
                centers: vec![[0.45, 0.2], [-0.4, -0.35]],
                anchor: [0.0, 0.0],
                n_nodes: n,
            },
            None,
        )
        .unwrap()
    }

    #[test]
    fn normalized_sphere_world_is_a_fixed_point() {
        let ws = sphere_world_workspace(64);
        let (cm, report) = run_koebe(&ws, 1e-12, 5).unwrap();
        assert!(report.converged);
        assert!(report.deltas.len() <= 2, "deltas {:?}", report.deltas);
        // The composite is the identity on the free space.
        for &z in &[Complex::new(0.0, 0.6), Complex::new(-0.1, 0.1), Complex::new(0.7, -0.3)] {
            let v = evaluate_composite(&cm, z).unwrap().value;
            assert!((v - z).norm() <= 1e-10, "at {z}: {}", (v - z).norm());
        }
        let d = composite_derivative(&cm, Complex::new(0.2, 0.3)).unwrap();
        assert!((d - Complex::new(1.0, 0.0)).norm() <= 1e-10);
    }

    #[test]
    fn koebe_stages_on_circles_match_mobius_oracles() {
        // On a circular domain every exterior stage is the affine map
        // (z − q)/ρ of its circle and the interior stage is the disk Möbius
        // automorphism moving the anchor to zero.
        let ws = sphere_world_workspace(64);
        let (cm, _) = run_koebe(&ws, 1e-12, 5).unwrap();
        let st = &cm.stages[0];
        let q = Complex::new(0.45, 0.2);
        for &z in &[Complex::new(0.0, 0.0), Complex::new(-0.5, 0.4)] {
            let v = st.evaluate(z).unwrap().value;
            let exact = (z - q) / 0.15;
            assert!((v - exact).norm() <= 1e-10 * exact.norm().max(1.0));
        }
    }

    #[test]
    fn annulus_image_preserves_conformal_modulus() {
        // Unit circle with a concentric obstacle of radius 0.3: the image is
        // a Möbius-normalized annular domain with the same modulus
        // arccosh((1 + r² − |c|²)/(2r)).
        let ws = build_workspace(
            &WorkspaceSpec {
                external: circle_spec(0.0, 0.0, 1.0),
                internal: vec![circle_spec(0.0, 0.0, 0.3)],
                centers: vec![[0.0, 0.0]],
                anchor: [0.65, 0.0],
                n_nodes: 128,
            },
            None,
        )
        .unwrap();
        let (cm, report) = run_koebe(&ws, 1e-12, 6).unwrap();
        assert!(report.deltas.len() <= 3, "deltas {:?}", report.deltas);
        let sw = fit_circles(&cm).unwrap();
        let c = sw.obstacle_circles[0];
        let inv_dist = (1.0 + c.radius * c.radius - c.center.norm_sqr()) / (2.0 * c.radius);
        let modulus = inv_dist.acosh();
        let expected = ((1.0 + 0.09) / 0.6f64).acosh();
        assert!(
            (modulus - expected).abs() <= 1e-8,
            "modulus {modulus} vs {expected}"
        );
        // Anchor is pinned at the origin by the final interior stage.
        assert_eq!(cm.tracked_anchor, Complex::ZERO);
        assert_eq!(evaluate_composite(&cm, ws.interior_anchor).unwrap().value, Complex::ZERO);
    }

    #[test]
    fn simply_connected_composite_matches_mobius() {
        // Off-center disk with no obstacles: the converged composite is the
        // Möbius automorphism of that disk sending the anchor to zero.
        let a = Complex::new(0.3, 0.0);
        let ws = build_workspace(
            &WorkspaceSpec {
                external: circle_spec(0.3, 0.0, 1.0),
                internal: vec![],
                centers: vec![],
                anchor: [0.0, 0.0],
                n_nodes: 256,
            },
            None,
        )
        .unwrap();
        let (cm, _) = run_koebe(&ws, 1e-13, 6).unwrap();
        let mobius = |z: Complex| {
            let w = z - a;
            let wb = -a;
            (w - wb) / (1.0 - wb.conj() * w)
        };
        let mut checked = 0;
        for i in -5..5 {
            for j in -5..5 {
                let z = Complex::new(0.3 + 0.17 * i as f64, 0.17 * j as f64);
                if (z - a).norm() > 0.85 {
                    continue;
                }
                let v = evaluate_composite(&cm, z).unwrap().value;
                assert!((v - mobius(z)).norm() <= 1e-8, "at {z}: {}", (v - mobius(z)).norm());
                checked += 1;
            }
        }
        assert!(checked >= 50);
    }

    #[test]
    fn jacobian_structure() {
        let j = jacobian_from_derivative(Complex::new(0.0, 2.0));
        assert_eq!(j, Matrix2::new(0.0, -2.0, 2.0, 0.0));
        assert!((j.determinant() - 4.0).abs() < 1e-15);
        let j = jacobian_from_derivative(Complex::new(1.0, 0.0));
        assert_eq!(j, Matrix2::identity());
        // Conformality: JᵀJ = det(J)·I by construction.
        let d = Complex::new(-0.7, 1.3);
        let j = jacobian_from_derivative(d);
        let jtj = j.transpose() * j;
        let det = j.determinant();
        assert!((jtj - Matrix2::identity() * det).norm() <= 1e-10 * det.abs());
        assert!(det > 0.0);
    }

    #[test]
    fn composite_reproduces_image_curve_nodes() {
        let ws = sphere_world_workspace(64);
        let (cm, _) = run_koebe(&ws, 1e-12, 5).unwrap();
        for (ci, (orig, img)) in ws.curves().zip(&cm.image_curves).enumerate() {
            for j in (0..orig.n_nodes()).step_by(16) {
                let v = evaluate_composite(&cm, orig.gamma[j]).unwrap().value;
                assert!(
                    (v - img.gamma[j]).norm() <= 1e-12,
                    "curve {ci} node {j}: {}",
                    (v - img.gamma[j]).norm()
                );
            }
        }
    }

    #[test]
    fn circle_fit_exact_and_perturbed() {
        let n = 64;
        let center = Complex::new(0.3, -0.2);
        let pts: Vec<Complex> = (0..n)
            .map(|j| {
                let s = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                center + Complex::from_polar(0.4, s)
            })
            .collect();
        let (c, res) = fit_circle(&pts).unwrap();
        assert!((c.center - center).norm() < 1e-14);
        assert!((c.radius - 0.4).abs() < 1e-14);
        assert!(res < 1e-13);

        let perturbed: Vec<Complex> = pts
            .iter()
            .enumerate()
            .map(|(j, p)| p + Complex::new(1e-9 * ((j * 37 % 11) as f64 - 5.0), 1e-9 * ((j * 17 % 7) as f64 - 3.0)))
            .collect();
        let (c, _) = fit_circle(&perturbed).unwrap();
        assert!((c.center - center).norm() <= 1e-8);
        assert!((c.radius - 0.4).abs() <= 1e-8);
    }

    #[test]
    fn fit_circles_on_converged_run() {
        let ws = sphere_world_workspace(64);
        let (cm, _) = run_koebe(&ws, 1e-12, 5).unwrap();
        let sw = fit_circles(&cm).unwrap();
        assert_eq!(sw.obstacle_circles.len(), 2);
        for (i, c) in sw.obstacle_circles.iter().enumerate() {
            assert!(sw.fit_residuals[i + 1] <= 1e-8 * c.radius);
            assert!((cm.tracked_centers[i] - c.center).norm() < c.radius);
        }
    }

    #[test]
    fn non_convergence_carries_report() {
        let ws = build_workspace(
            &WorkspaceSpec {
                external: CurveSpec::Ellipse {
                    center: [0.0, 0.0],
                    semi_axes: [1.4, 1.0],
                    rotation: 0.0,
                },
                internal: vec![circle_spec(0.4, 0.0, 0.2)],
                centers: vec![[0.4, 0.0]],
                anchor: [-0.5, 0.0],
                n_nodes: 64,
            },
            None,
        )
        .unwrap();
        match run_koebe(&ws, 1e-13, 1) {
            Err(Error::NotConverged { report, .. }) => {
                assert_eq!(report.deltas.len(), 1);
                assert!(!report.converged);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn cache_round_trip_is_bit_exact() {
        let ws = sphere_world_workspace(64);
        let (cm, _) = run_koebe(&ws, 1e-12, 5).unwrap();
        let sw = fit_circles(&cm).unwrap();
        let spec = WorkspaceSpec {
            external: circle_spec(0.0, 0.0, 1.0),
            internal: vec![circle_spec(0.45, 0.2, 0.15), circle_spec(-0.4, -0.35, 0.2)],
            centers: vec![[0.45, 0.2], [-0.4, -0.35]],
            anchor: [0.0, 0.0],
            n_nodes: 64,
        };
        let key = workspace_cache_key(&spec, 64, 1e-12);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.json");
        save_cache(&cm, &sw, &key, &path).unwrap();
        let (cm2, sw2) = load_cache(&path, &key).unwrap();

        for (a, b) in cm.stages.iter().zip(&cm2.stages) {
            for (x, y) in a.f_boundary.iter().zip(&b.f_boundary) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
            assert_eq!(a.c_const.to_bits(), b.c_const.to_bits());
        }
        assert_eq!(sw.obstacle_circles.len(), sw2.obstacle_circles.len());
        for &z in &[Complex::new(0.1, 0.55), Complex::new(-0.6, 0.2)] {
            let v1 = evaluate_composite(&cm, z).unwrap().value;
            let v2 = evaluate_composite(&cm2, z).unwrap().value;
            assert_eq!(v1.re.to_bits(), v2.re.to_bits());
            assert_eq!(v1.im.to_bits(), v2.im.to_bits());
        }

        // Any workspace edit changes the key and the load is rejected.
        let mut edited = spec.clone();
        edited.anchor = [0.01, 0.0];
        let stale_key = workspace_cache_key(&edited, 64, 1e-12);
        assert!(matches!(
            load_cache(&path, &stale_key),
            Err(Error::StaleCache { .. })
        ));
        // Corrupt file reports a format error.
        std::fs::write(&path, "{not json").unwrap();
        assert!(matches!(
            load_cache(&path, &key),
            Err(Error::CacheFormat(_))
        ));
    }
}
