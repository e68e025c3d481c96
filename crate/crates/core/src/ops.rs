//! Exact spectral differential operators, dealiasing, and mean control.
//!
//! Derivatives act as multipliers (ik₁)^{α₁}(ik₂)^{α₂}(ik₃)^{α₃} on the
//! trigonometric interpolant. The Nyquist mode of any odd-order derivative
//! is zeroed, the standard convention that keeps derivative operators real
//! and skew-symmetric.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Rank, SpectralField};

/// Highest total derivative order the lab needs (fourth: H³ norms of ∇φ).
pub const MAX_DERIVATIVE_ORDER: usize = 4;

/// Multiplier (ik)^order for one axis, with odd-order Nyquist zeroing.
#[inline]
fn axis_multiplier(k: i64, nyquist: i64, order: usize) -> Complex64 {
    if order == 0 {
        return Complex64::ONE;
    }
    if k == nyquist && order % 2 == 1 {
        return Complex64::ZERO;
    }
    Complex64::new(0.0, k as f64).powu(order as u32)
}

/// D^α F for a multi-index α = (α₁, α₂, α₃), |α| ≤ 4.
pub fn differentiate(f: &SpectralField, alpha: [usize; 3]) -> Result<SpectralField> {
    let order: usize = alpha.iter().sum();
    if order > MAX_DERIVATIVE_ORDER {
        return Err(Error::Usage(format!(
            "derivative order {order} exceeds supported maximum {MAX_DERIVATIVE_ORDER}"
        )));
    }
    let grid = f.grid;
    let ny = grid.nyquist();
    let mut out = f.clone();
    let np = grid.point_count();
    for (idx, k) in grid.modes() {
        let m = axis_multiplier(k[0], ny, alpha[0])
            * axis_multiplier(k[1], ny, alpha[1])
            * axis_multiplier(k[2], ny, alpha[2]);
        for c in 0..f.rank.multiplicity() {
            out.data[c * np + idx] *= m;
        }
    }
    Ok(out)
}

/// ∇F for scalar F.
pub fn gradient(f: &SpectralField) -> Result<SpectralField> {
    if f.rank != Rank::Scalar {
        return Err(Error::Usage("gradient expects a scalar field".into()));
    }
    let grid = f.grid;
    let ny = grid.nyquist();
    let np = grid.point_count();
    let mut out = SpectralField::zeros(grid, Rank::Vector3);
    for (idx, k) in grid.modes() {
        let z = f.data[idx];
        for axis in 0..3 {
            out.data[axis * np + idx] = z * axis_multiplier(k[axis], ny, 1);
        }
    }
    Ok(out)
}

/// div F for vector F.
pub fn divergence(f: &SpectralField) -> Result<SpectralField> {
    if f.rank != Rank::Vector3 {
        return Err(Error::Usage("divergence expects a vector field".into()));
    }
    let grid = f.grid;
    let ny = grid.nyquist();
    let np = grid.point_count();
    let mut out = SpectralField::zeros(grid, Rank::Scalar);
    for (idx, k) in grid.modes() {
        let mut s = Complex64::ZERO;
        for axis in 0..3 {
            s += f.data[axis * np + idx] * axis_multiplier(k[axis], ny, 1);
        }
        out.data[idx] = s;
    }
    Ok(out)
}

/// rot F for vector F.
pub fn curl(f: &SpectralField) -> Result<SpectralField> {
    if f.rank != Rank::Vector3 {
        return Err(Error::Usage("curl expects a vector field".into()));
    }
    let grid = f.grid;
    let ny = grid.nyquist();
    let np = grid.point_count();
    let mut out = SpectralField::zeros(grid, Rank::Vector3);
    for (idx, k) in grid.modes() {
        let d = [
            axis_multiplier(k[0], ny, 1),
            axis_multiplier(k[1], ny, 1),
            axis_multiplier(k[2], ny, 1),
        ];
        let v = [f.data[idx], f.data[np + idx], f.data[2 * np + idx]];
        out.data[idx] = d[1] * v[2] - d[2] * v[1];
        out.data[np + idx] = d[2] * v[0] - d[0] * v[2];
        out.data[2 * np + idx] = d[0] * v[1] - d[1] * v[0];
    }
    Ok(out)
}

/// ΔF for scalar or vector F (multiplier −|k|², Nyquist retained).
pub fn laplacian(f: &SpectralField) -> SpectralField {
    let grid = f.grid;
    let np = grid.point_count();
    let mut out = f.clone();
    for (idx, k) in grid.modes() {
        let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        for c in 0..f.rank.multiplicity() {
            out.data[c * np + idx] *= -k2;
        }
    }
    out
}

/// Selector for [`vector_calculus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorCalculus {
    Gradient,
    Divergence,
    Curl,
    Laplacian,
}

pub fn vector_calculus(f: &SpectralField, kind: VectorCalculus) -> Result<SpectralField> {
    match kind {
        VectorCalculus::Gradient => gradient(f),
        VectorCalculus::Divergence => divergence(f),
        VectorCalculus::Curl => curl(f),
        VectorCalculus::Laplacian => Ok(laplacian(f)),
    }
}

/// Unique zero-mean solution of Δu = F. Requires coeff(0) ≈ 0 per component.
pub fn inverse_laplacian(f: &SpectralField) -> Result<SpectralField> {
    let grid = f.grid;
    let np = grid.point_count();
    let tol = 1e-12 * (1.0 + f.max_abs());
    for c in 0..f.rank.multiplicity() {
        if f.mean(c).norm() > tol {
            return Err(Error::Solvability(format!(
                "inverse Laplacian needs zero mean; component {c} has |mean| = {:.3e}",
                f.mean(c).norm()
            )));
        }
    }
    let mut out = f.clone();
    for (idx, k) in grid.modes() {
        let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        for c in 0..f.rank.multiplicity() {
            if k2 == 0.0 {
                out.data[c * np + idx] = Complex64::ZERO;
            } else {
                out.data[c * np + idx] /= -k2;
            }
        }
    }
    Ok(out)
}

/// 2/3-rule truncation: zero every coefficient with any |kⱼ| > n/3.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let grid = f.grid;
    let n = grid.n() as i64;
    let np = grid.point_count();
    let mut out = f.clone();
    for (idx, k) in grid.modes() {
        if 3 * k[0].abs() > n || 3 * k[1].abs() > n || 3 * k[2].abs() > n {
            for c in 0..f.rank.multiplicity() {
                out.data[c * np + idx] = Complex64::ZERO;
            }
        }
    }
    out
}

/// Zero the k = 0 coefficient of every component.
pub fn zero_mean(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    let np = f.grid.point_count();
    for c in 0..f.rank.multiplicity() {
        out.data[c * np] = Complex64::ZERO;
    }
    out
}

/// In-place variant of [`zero_mean`], for the stepping hot path.
pub fn zero_mean_in_place(f: &mut SpectralField) {
    let np = f.grid.point_count();
    for c in 0..f.rank.multiplicity() {
        f.data[c * np] = Complex64::ZERO;
    }
}
