//! Helmholtz decomposition v = ∇φ + rot ψ and the Leray projection.
//!
//! The potentials solve the periodic elliptic problems Δφ = div v and
//! rot²ψ = rot v with zero means. ψ is produced as −Δ⁻¹ rot v, the unique
//! zero-mean representative with div ψ = 0 (via rot² = ∇div − Δ).

use crate::error::{Error, Result};
use crate::field::{Rank, SpectralField};
use crate::ops::{curl, divergence, gradient, inverse_laplacian};

/// Gauge-fixed potentials: φ and every ψ component have zero mean, div ψ = 0.
#[derive(Debug, Clone)]
pub struct PotentialPair {
    pub phi: SpectralField,
    pub psi: SpectralField,
}

fn require_zero_mean_vector(v: &SpectralField, what: &str) -> Result<()> {
    if v.rank != Rank::Vector3 {
        return Err(Error::Usage(format!("{what} expects a vector field")));
    }
    let tol = 1e-12 * (1.0 + v.max_abs());
    for c in 0..3 {
        if v.mean(c).norm() > tol {
            return Err(Error::Model(format!(
                "{what} requires a zero-mean field; component {c} has |mean| = {:.3e}",
                v.mean(c).norm()
            )));
        }
    }
    Ok(())
}

/// Split a zero-mean vector field into its gradient and rotational potentials.
pub fn decompose(v: &SpectralField) -> Result<PotentialPair> {
    require_zero_mean_vector(v, "decompose")?;
    let phi = inverse_laplacian(&divergence(v)?)?;
    let psi = inverse_laplacian(&curl(v)?)?.scaled(-1.0);
    Ok(PotentialPair { phi, psi })
}

/// ∇φ + rot ψ.
pub fn recompose(p: &PotentialPair) -> Result<SpectralField> {
    Ok(gradient(&p.phi)?.add(&curl(&p.psi)?))
}

/// The divergence-free part rot ψ = v − ∇φ; idempotent.
pub fn leray_project(v: &SpectralField) -> Result<SpectralField> {
    require_zero_mean_vector(v, "leray_project")?;
    let phi = inverse_laplacian(&divergence(v)?)?;
    Ok(v.sub(&gradient(&phi)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::to_spectral;
    use crate::field::{l2_inner, l2_norm_sq, RealField};
    use crate::grid::Grid;
    use crate::ops::{dealias, zero_mean};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid16() -> Grid {
        Grid::new(16).unwrap()
    }

    fn taylor_green(grid: Grid) -> SpectralField {
        to_spectral(&RealField::vector_from_fn(grid, |x, y, _| {
            [x.sin() * y.cos(), -(x.cos() * y.sin()), 0.0]
        }))
        .unwrap()
    }

    fn random_zero_mean_vector(grid: Grid, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = RealField::zeros(grid, Rank::Vector3);
        for x in &mut f.data {
            *x = rng.gen_range(-1.0..1.0);
        }
        zero_mean(&dealias(&to_spectral(&f).unwrap()))
    }

    fn max_coeff_diff(a: &SpectralField, b: &SpectralField) -> f64 {
        a.data
            .iter()
            .zip(&b.data)
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).norm()))
    }

    #[test]
    fn pure_gradient_input_yields_phi_only() {
        let grid = grid16();
        let v = to_spectral(&RealField::vector_from_fn(grid, |x, _, _| {
            [x.cos(), 0.0, 0.0]
        }))
        .unwrap();
        let p = decompose(&v).unwrap();
        let sin = to_spectral(&RealField::scalar_from_fn(grid, |x, _, _| x.sin())).unwrap();
        assert!(max_coeff_diff(&p.phi, &sin) <= 1e-12);
        assert!(curl(&p.psi).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn solenoidal_input_yields_psi_only() {
        let grid = grid16();
        let v = taylor_green(grid);
        let p = decompose(&v).unwrap();
        assert!(p.phi.max_abs() <= 1e-12);
        assert!(max_coeff_diff(&curl(&p.psi).unwrap(), &v) <= 1e-12);
    }

    #[test]
    fn potentials_are_gauge_fixed() {
        let grid = grid16();
        let p = decompose(&random_zero_mean_vector(grid, 5)).unwrap();
        assert!(p.phi.mean(0).norm() <= 1e-14);
        for c in 0..3 {
            assert!(p.psi.mean(c).norm() <= 1e-14);
        }
        assert!(divergence(&p.psi).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn split_is_orthogonal_and_pythagorean() {
        let grid = grid16();
        let v = random_zero_mean_vector(grid, 6);
        let p = decompose(&v).unwrap();
        let grad = gradient(&p.phi).unwrap();
        let rot = curl(&p.psi).unwrap();
        let vv = l2_norm_sq(&v);
        let cross = l2_inner(&grad, &rot);
        assert!(cross.abs() / vv <= 1e-12, "cross term {cross}");
        let sum = l2_norm_sq(&grad) + l2_norm_sq(&rot);
        assert!((sum - vv).abs() / vv <= 1e-10);
    }

    #[test]
    fn recompose_closed_forms() {
        let grid = grid16();
        let sin = to_spectral(&RealField::scalar_from_fn(grid, |x, _, _| x.sin())).unwrap();
        let p = PotentialPair {
            phi: sin,
            psi: SpectralField::zeros(grid, Rank::Vector3),
        };
        let v = recompose(&p).unwrap();
        let expect = to_spectral(&RealField::vector_from_fn(grid, |x, _, _| {
            [x.cos(), 0.0, 0.0]
        }))
        .unwrap();
        assert!(max_coeff_diff(&v, &expect) <= 1e-12);

        let zero = PotentialPair {
            phi: SpectralField::zeros(grid, Rank::Scalar),
            psi: SpectralField::zeros(grid, Rank::Vector3),
        };
        assert!(recompose(&zero).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn round_trips_hold() {
        let grid = grid16();
        let v = random_zero_mean_vector(grid, 7);
        let p = decompose(&v).unwrap();
        let back = recompose(&p).unwrap();
        let scale = v.max_abs().max(1e-300);
        assert!(max_coeff_diff(&back, &v) / scale <= 1e-12);

        let p2 = decompose(&back).unwrap();
        assert!(max_coeff_diff(&p2.phi, &p.phi) / scale <= 1e-10);
        assert!(max_coeff_diff(&p2.psi, &p.psi) / scale <= 1e-10);
    }

    #[test]
    fn leray_kills_gradients_fixes_solenoidal_and_is_idempotent() {
        let grid = grid16();
        let grad = to_spectral(&RealField::vector_from_fn(grid, |x, _, _| {
            [x.cos(), 0.0, 0.0]
        }))
        .unwrap();
        assert!(leray_project(&grad).unwrap().max_abs() <= 1e-12);

        let tg = taylor_green(grid);
        assert!(max_coeff_diff(&leray_project(&tg).unwrap(), &tg) <= 1e-12);

        let v = random_zero_mean_vector(grid, 8);
        let once = leray_project(&v).unwrap();
        let twice = leray_project(&once).unwrap();
        assert!(max_coeff_diff(&once, &twice) <= 1e-12);
        assert!(divergence(&once).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn nonzero_mean_input_rejected() {
        let grid = grid16();
        let v = to_spectral(&RealField::vector_from_fn(grid, |_, _, _| [1.0, 0.0, 0.0]))
            .unwrap();
        assert!(decompose(&v).is_err());
        assert!(leray_project(&v).is_err());
    }
}
