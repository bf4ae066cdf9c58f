//! Conformal maps of a single Jordan curve's interior or exterior onto the
//! unit disk's interior or exterior.
//!
//! An interior stage maps the bounded side of a counterclockwise curve onto
//! the open unit disk with `T(z_c) = 0` and `T'(z_c) = e^{−c} > 0`, using
//! `T(z) = e^{−c}(z−z_c)·exp((z−z_c)f(z))` with `f` holomorphic inside. An
//! exterior stage maps the unbounded side of a clockwise curve onto the
//! exterior of the unit circle with `T̃(∞) = ∞` and `T̃'(∞) = e^{c̃} > 0`,
//! using `T̃(z) = e^{c̃}(z−z_c)·exp(−f̃(z))` with `f̃(∞) = 0`. Both reduce to
//! the boundary system solved in [`crate::boundary_integral`]; off-curve
//! values of `f` come from Cauchy integrals of its boundary trace, so the
//! normalizations at `z_c` and at infinity are exact by construction.

use crate::boundary_integral::{build_kernels, build_kernels_exterior, solve_riemann_hilbert};
use crate::cauchy::{ccw_weights, weighted_sums};
use crate::error::{Error, Result};
use crate::geometry::{Orientation, ParametricCurve};
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StageKind {
    Interior,
    Exterior,
}

/// One simply connected conformal map, determined by its boundary data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapStage {
    pub kind: StageKind,
    pub curve: ParametricCurve,
    pub center: Complex,
    pub c_const: f64,
    /// Boundary trace of the auxiliary holomorphic function.
    pub f_boundary: Vec<Complex>,
    /// Image of each boundary node, on the unit circle.
    pub map_boundary: Vec<Complex>,
    /// Far-field magnitude of the exterior auxiliary function (diagnostic;
    /// analytically zero for exterior stages, unused for interior ones).
    pub decay_residual: f64,

    // Quadrature tables derived from the fields above; rebuilt after
    // deserialization rather than stored.
    #[serde(skip)]
    weights: Vec<Complex>,
    #[serde(skip)]
    weighted_f: Vec<Complex>,
    #[serde(skip)]
    floors_sq: Vec<f64>,
    #[serde(skip)]
    f_mean: Complex,
}

/// Result of evaluating a stage at one point.
#[derive(Debug, Clone, Copy)]
pub struct StageEval {
    pub value: Complex,
    pub derivative: Option<Complex>,
    /// Set when the point is within five node spacings of the curve, where
    /// the quadrature loses accuracy.
    pub near_boundary: bool,
}

impl MapStage {
    pub fn n_nodes(&self) -> usize {
        self.curve.n_nodes()
    }

    /// Rebuilds the derived quadrature tables; must be called after
    /// constructing the struct from raw (e.g. deserialized) fields.
    pub fn rebuild_tables(&mut self) {
        let n = self.curve.n_nodes() as f64;
        self.weights = ccw_weights(&self.curve);
        self.weighted_f = self
            .weights
            .iter()
            .zip(&self.f_boundary)
            .map(|(w, f)| w * f)
            .collect();
        self.floors_sq = self
            .curve
            .dgamma
            .iter()
            .map(|d| (5.0 * d.norm() * 2.0 * PI / n).powi(2))
            .collect();
        self.f_mean = self.f_boundary.iter().sum::<Complex>() / n;
    }

    fn scale(&self) -> f64 {
        match self.kind {
            StageKind::Interior => (-self.c_const).exp(),
            StageKind::Exterior => self.c_const.exp(),
        }
    }

    /// Map value at `z`; exact boundary data is returned when `z` is exactly
    /// a curve node.
    pub fn evaluate(&self, z: Complex) -> Result<StageEval> {
        self.eval_impl(z, false)
    }

    /// Map value and complex derivative at `z` in one quadrature sweep.
    pub fn evaluate_with_derivative(&self, z: Complex) -> Result<StageEval> {
        self.eval_impl(z, true)
    }

    fn eval_impl(&self, z: Complex, want_derivative: bool) -> Result<StageEval> {
        let sums = weighted_sums(
            &self.curve.gamma,
            &self.weights,
            &self.weighted_f,
            Some(&self.floors_sq),
            z,
            want_derivative,
        );
        if let Some(j) = sums.node_hit {
            if want_derivative {
                return Err(Error::SingularEvaluation { point: z });
            }
            return Ok(StageEval {
                value: self.map_boundary[j],
                derivative: None,
                near_boundary: false,
            });
        }
        if !sums.d.is_finite() {
            return Err(Error::SingularEvaluation { point: z });
        }
        let inside = sums.d.norm() > PI;
        let want_inside = self.kind == StageKind::Interior;
        if inside != want_inside && !sums.near {
            return Err(Error::WrongSide { point: z });
        }

        let two_pi_i = Complex::new(0.0, 2.0 * PI);
        let dz = z - self.center;
        let (value, derivative) = match self.kind {
            StageKind::Interior => {
                let f = sums.s / sums.d;
                let envelope = (dz * f).exp() * self.scale();
                let value = envelope * dz;
                let derivative = want_derivative.then(|| {
                    let fp = (sums.s2 * sums.d - sums.s * sums.d2) / (sums.d * sums.d);
                    envelope * (1.0 + dz * (f + dz * fp))
                });
                (value, derivative)
            }
            StageKind::Exterior => {
                let f = -(sums.s - self.f_mean * sums.d) / two_pi_i;
                let envelope = (-f).exp() * self.scale();
                let value = envelope * dz;
                let derivative = want_derivative.then(|| {
                    let fp = -(sums.s2 - self.f_mean * sums.d2) / two_pi_i;
                    envelope * (1.0 - dz * fp)
                });
                (value, derivative)
            }
        };
        Ok(StageEval {
            value,
            derivative,
            near_boundary: sums.near,
        })
    }
}

fn unit(z: Complex) -> Complex {
    z / z.norm()
}

fn finish_stage(mut stage: MapStage, expected_winding: i32) -> Result<MapStage> {
    stage.rebuild_tables();
    let image = ParametricCurve::from_samples(stage.map_boundary.clone())?;
    let winding = image.winding_number(Complex::ZERO);
    if winding != expected_winding {
        return Err(Error::BranchTracking { winding });
    }
    Ok(stage)
}

/// Builds the map of the bounded side of `curve` onto the unit disk, with
/// `z_c ↦ 0` and positive derivative there.
pub fn build_interior_map(curve: &ParametricCurve, z_c: Complex) -> Result<MapStage> {
    if curve.orientation != Orientation::Counterclockwise {
        return Err(Error::WrongOrientation);
    }
    let ops = build_kernels(curve, z_c)?;
    let mu: Vec<f64> = curve.gamma.iter().map(|g| -(g - z_c).norm().ln()).collect();
    let data = solve_riemann_hilbert(&ops, &mu)?;
    let f_boundary: Vec<Complex> = curve
        .gamma
        .iter()
        .enumerate()
        .map(|(j, g)| Complex::new(mu[j] + data.c_const, data.upsilon[j]) / (g - z_c))
        .collect();
    let map_boundary: Vec<Complex> = curve
        .gamma
        .iter()
        .enumerate()
        .map(|(j, g)| unit(g - z_c) * Complex::from_polar(1.0, data.upsilon[j]))
        .collect();
    finish_stage(
        MapStage {
            kind: StageKind::Interior,
            curve: curve.clone(),
            center: z_c,
            c_const: data.c_const,
            f_boundary,
            map_boundary,
            decay_residual: 0.0,
            weights: Vec::new(),
            weighted_f: Vec::new(),
            floors_sq: Vec::new(),
            f_mean: Complex::ZERO,
        },
        1,
    )
}

/// Builds the map of the unbounded side of `curve` onto the exterior of the
/// unit circle, fixing infinity with positive derivative there.
pub fn build_exterior_map(curve: &ParametricCurve, z_c: Complex) -> Result<MapStage> {
    if curve.orientation != Orientation::Clockwise {
        return Err(Error::WrongOrientation);
    }
    let ops = build_kernels_exterior(curve, z_c)?;
    let mu: Vec<f64> = curve.gamma.iter().map(|g| (g - z_c).norm().ln()).collect();
    let data = solve_riemann_hilbert(&ops, &mu)?;
    let f_boundary: Vec<Complex> = (0..curve.n_nodes())
        .map(|j| Complex::new(mu[j] + data.c_const, data.upsilon[j]))
        .collect();
    let map_boundary: Vec<Complex> = curve
        .gamma
        .iter()
        .enumerate()
        .map(|(j, g)| unit(g - z_c) * Complex::from_polar(1.0, -data.upsilon[j]))
        .collect();
    let mut stage = finish_stage(
        MapStage {
            kind: StageKind::Exterior,
            curve: curve.clone(),
            center: z_c,
            c_const: data.c_const,
            f_boundary,
            map_boundary,
            decay_residual: 0.0,
            weights: Vec::new(),
            weighted_f: Vec::new(),
            floors_sq: Vec::new(),
            f_mean: Complex::ZERO,
        },
        -1,
    )?;
    // f̃ must vanish at infinity; probe the Cauchy tail far from the curve.
    let centroid = stage.curve.gamma.iter().sum::<Complex>() / stage.n_nodes() as f64;
    let far = centroid + Complex::new(10.0 * stage.curve.diameter().max(1.0), 0.0);
    let sums = weighted_sums(
        &stage.curve.gamma,
        &stage.weights,
        &stage.weighted_f,
        None,
        far,
        false,
    );
    stage.decay_residual =
        ((sums.s - stage.f_mean * sums.d) / Complex::new(0.0, 2.0 * PI)).norm();
    Ok(stage)
}
