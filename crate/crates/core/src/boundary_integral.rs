//! Nyström discretization of the Riemann–Hilbert system `υ − Rυ = −Hμ` on a
//! single smooth closed curve, and recovery of the real normalization
//! constant `c`.
//!
//! The complex kernel is `k(s,t) = (1/π)·(A(s)/A(t))·γ'(t)/(γ(t)−γ(s))`,
//! where `A = γ − z_c` for interior disk maps (counterclockwise curve) and
//! `A ≡ 1` for exterior ones (clockwise curve). Its imaginary part `R` — the
//! generalized Neumann kernel — is continuous, with diagonal
//! `(1/π)·Im[γ''/(2γ') − A'/A]`. The real part `H` carries the Cauchy
//! singularity: subtracting the periodic cotangent kernel
//! `(1/2π)·cot((t−s)/2)`, whose principal-value convolution is evaluated
//! spectrally, leaves a smooth remainder with diagonal
//! `(1/π)·Re[γ''/(2γ') − A'/A]`. Both smooth kernels are integrated by the
//! periodic trapezoidal rule with weight `2π/N`.
//!
//! Of the two candidate recovery formulas for the constant,
//! `c = [Hυ − (I−R)μ]/2` is the one confirmed by the scaling-disk oracle
//! (a radius-2 disk about its center must give `c = log 2`); the variant
//! with `μ` and `υ` exchanged fails that check and is not used.

use crate::error::{Error, Result};
use crate::geometry::{Orientation, ParametricCurve};
use crate::{spectral, Complex};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

/// Which Riemann–Hilbert problem the kernels discretize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `A(s) = γ(s) − z_c`; counterclockwise curve, bounded side on the left.
    Interior,
    /// `A ≡ 1`; clockwise curve, unbounded side on the left.
    Exterior,
}

/// Discretized kernels for one (curve, center) pair.
#[derive(Debug, Clone)]
pub struct KernelOperators {
    pub curve: ParametricCurve,
    pub center: Complex,
    pub kind: KernelKind,
    /// N×N values of the continuous kernel `Im k`.
    pub r_matrix: DMatrix<f64>,
    /// N×N values of `Re k − (1/2π)cot((t−s)/2)`.
    pub h_smooth: DMatrix<f64>,
}

/// Solution of the boundary system for one right-hand side.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    pub mu: Vec<f64>,
    pub upsilon: Vec<f64>,
    pub c_const: f64,
    /// Max node deviation of the pointwise constant from its mean; a
    /// quadrature-quality diagnostic (analytically zero).
    pub c_deviation: f64,
    /// `‖υ − Rυ + Hμ‖_∞` of the returned solution.
    pub residual: f64,
}

/// Max condition estimate accepted before the solve is rejected.
const COND_LIMIT: f64 = 1e12;

/// Builds interior-kind kernels, `A(s) = γ(s) − z_c`.
pub fn build_kernels(curve: &ParametricCurve, center: Complex) -> Result<KernelOperators> {
    build_kernels_of_kind(curve, center, KernelKind::Interior)
}

/// Builds exterior-kind kernels, `A ≡ 1`, for the map of the unbounded side.
pub fn build_kernels_exterior(curve: &ParametricCurve, center: Complex) -> Result<KernelOperators> {
    build_kernels_of_kind(curve, center, KernelKind::Exterior)
}

pub fn build_kernels_of_kind(
    curve: &ParametricCurve,
    center: Complex,
    kind: KernelKind,
) -> Result<KernelOperators> {
    let n = curve.n_nodes();
    spectral::check_node_count(n)?;
    match (kind, curve.orientation) {
        (KernelKind::Interior, Orientation::Counterclockwise)
        | (KernelKind::Exterior, Orientation::Clockwise) => {}
        _ => return Err(Error::WrongOrientation),
    }

    let min_dist = curve
        .gamma
        .iter()
        .map(|g| (g - center).norm())
        .fold(f64::INFINITY, f64::min);
    if min_dist <= 1e-13 * (1.0 + curve.diameter()) {
        return Err(Error::CenterOnCurve {
            center,
            dist: min_dist,
        });
    }
    // Solvability: the coefficient G must wind exactly once around zero,
    // i.e. the center sits inside the curve.
    let winding = curve.winding_number(center);
    let expected = match curve.orientation {
        Orientation::Counterclockwise => 1,
        Orientation::Clockwise => -1,
    };
    if winding != expected {
        return Err(Error::CenterMisplaced { center, winding });
    }

    let a: Vec<Complex> = match kind {
        KernelKind::Interior => curve.gamma.iter().map(|g| g - center).collect(),
        KernelKind::Exterior => vec![Complex::new(1.0, 0.0); n],
    };
    // cot((s_j − s_i)/2) depends only on (j − i) mod N.
    let cot_half: Vec<f64> = (0..n)
        .map(|d| {
            if d == 0 {
                0.0
            } else {
                1.0 / (PI * d as f64 / n as f64).tan()
            }
        })
        .collect();

    let mut r_matrix = DMatrix::zeros(n, n);
    let mut h_smooth = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                // Diagonal limit of k − 1/(π(t−s)).
                let ratio = match kind {
                    KernelKind::Interior => curve.dgamma[i] / a[i],
                    KernelKind::Exterior => Complex::ZERO,
                };
                let limit = (curve.ddgamma[i] / (2.0 * curve.dgamma[i]) - ratio) / PI;
                r_matrix[(i, i)] = limit.im;
                h_smooth[(i, i)] = limit.re;
            } else {
                let k = (a[i] / a[j]) * curve.dgamma[j] / (curve.gamma[j] - curve.gamma[i]) / PI;
                r_matrix[(i, j)] = k.im;
                h_smooth[(i, j)] = k.re - cot_half[(j + n - i) % n] / (2.0 * PI);
            }
        }
    }

    Ok(KernelOperators {
        curve: curve.clone(),
        center,
        kind,
        r_matrix,
        h_smooth,
    })
}

impl KernelOperators {
    pub fn n_nodes(&self) -> usize {
        self.curve.n_nodes()
    }

    fn check_len(&self, g: &[f64]) -> Result<()> {
        if g.len() != self.n_nodes() {
            return Err(Error::LengthMismatch {
                expected: self.n_nodes(),
                got: g.len(),
            });
        }
        Ok(())
    }

    /// `(Rg)(s_i)` by the trapezoidal rule.
    pub fn apply_r(&self, g: &[f64]) -> Result<Vec<f64>> {
        self.check_len(g)?;
        let n = self.n_nodes();
        let v = &self.r_matrix * DVector::from_column_slice(g);
        Ok(v.iter().map(|x| x * 2.0 * PI / n as f64).collect())
    }

    /// `(Hg)(s_i)`: spectral cotangent convolution plus the smooth remainder.
    pub fn apply_h(&self, g: &[f64]) -> Result<Vec<f64>> {
        self.check_len(g)?;
        let n = self.n_nodes();
        let mut out = spectral::cotangent_convolution(g);
        let smooth = &self.h_smooth * DVector::from_column_slice(g);
        for (o, s) in out.iter_mut().zip(smooth.iter()) {
            *o += s * 2.0 * PI / n as f64;
        }
        Ok(out)
    }

    /// Raw little-endian dump of both matrices for offline inspection.
    pub fn dump_matrices(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, m) in [("r_matrix.bin", &self.r_matrix), ("h_smooth.bin", &self.h_smooth)] {
            let mut f = std::fs::File::create(dir.join(name))?;
            f.write_all(&(self.n_nodes() as u64).to_le_bytes())?;
            for i in 0..self.n_nodes() {
                for j in 0..self.n_nodes() {
                    f.write_all(&m[(i, j)].to_le_bytes())?;
                }
            }
        }
        Ok(())
    }
}

/// Hager's 1-norm estimate of `‖M⁻¹‖₁` from factorizations of M and Mᵀ.
fn inv_norm1_estimate(
    lu: &nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    lu_t: &nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    n: usize,
) -> Option<f64> {
    let mut x = DVector::from_element(n, 1.0 / n as f64);
    let mut estimate = 0.0f64;
    for _ in 0..5 {
        let y = lu.solve(&x)?;
        estimate = y.iter().map(|v| v.abs()).sum();
        let xi = y.map(|v| if v >= 0.0 { 1.0 } else { -1.0 });
        let z = lu_t.solve(&xi)?;
        let (j, zmax) = z
            .iter()
            .enumerate()
            .fold((0usize, 0.0f64), |acc, (i, v)| {
                if v.abs() > acc.1 {
                    (i, v.abs())
                } else {
                    acc
                }
            });
        if zmax <= z.dot(&x) {
            break;
        }
        x = DVector::zeros(n);
        x[j] = 1.0;
    }
    Some(estimate)
}

/// Solves `(I − R)υ = −Hμ` by dense LU and recovers the constant
/// `c = [Hυ − (I−R)μ]/2` (node mean, with the spread reported).
pub fn solve_riemann_hilbert(ops: &KernelOperators, mu: &[f64]) -> Result<BoundaryData> {
    ops.check_len(mu)?;
    let n = ops.n_nodes();
    let w = 2.0 * PI / n as f64;

    let mut system = DMatrix::identity(n, n);
    system -= ops.r_matrix.scale(w);

    let rhs_vec = ops.apply_h(mu)?;
    let rhs = DVector::from_iterator(n, rhs_vec.iter().map(|v| -v));

    let norm1: f64 = (0..n)
        .map(|j| (0..n).map(|i| system[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let lu = system.clone().lu();
    let lu_t = system.transpose().lu();
    let inv_norm = inv_norm1_estimate(&lu, &lu_t, n).unwrap_or(f64::INFINITY);
    let cond = norm1 * inv_norm;
    if !cond.is_finite() || cond > COND_LIMIT {
        return Err(Error::IllConditioned { cond });
    }

    let upsilon_vec = lu.solve(&rhs).ok_or(Error::IllConditioned { cond })?;
    let upsilon: Vec<f64> = upsilon_vec.iter().copied().collect();

    // Residual of the continuous-form equation with the discrete operators.
    let r_ups = ops.apply_r(&upsilon)?;
    let residual = (0..n)
        .map(|i| (upsilon[i] - r_ups[i] + rhs_vec[i]).abs())
        .fold(0.0, f64::max);

    let h_ups = ops.apply_h(&upsilon)?;
    let r_mu = ops.apply_r(mu)?;
    let c_nodes: Vec<f64> = (0..n)
        .map(|i| 0.5 * (h_ups[i] - (mu[i] - r_mu[i])))
        .collect();
    let c_const = c_nodes.iter().sum::<f64>() / n as f64;
    let c_deviation = c_nodes
        .iter()
        .map(|c| (c - c_const).abs())
        .fold(0.0, f64::max);

    Ok(BoundaryData {
        mu: mu.to_vec(),
        upsilon,
        c_const,
        c_deviation,
        residual,
    })
}
