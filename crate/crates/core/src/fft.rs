//! Forward/inverse 3-D discrete Fourier transforms built from 1-D passes.
//!
//! Normalization: the forward transform divides by n³ so the k = 0
//! coefficient equals the spatial mean; the inverse applies no scaling.
//! Round trips are identity to machine precision.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::field::{RealField, SpectralField};


struct Plan {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

static PLANS: Lazy<Mutex<HashMap<usize, Arc<Plan>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn plan_for(n: usize) -> Arc<Plan> {
    let mut cache = PLANS.lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(Plan {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
        })
        .clone()
}

/// In-place 3-D transform of one scalar component.
///
/// Each pass batches all its 1-D transforms into a single `process` call on
/// contiguous data, with plane/array transposes in between.
fn transform3(data: &mut [Complex64], n: usize, fft: &Arc<dyn Fft<f64>>) {
    let n2 = n * n;
    let mut scratch = vec![Complex64::ZERO; fft.get_inplace_scratch_len()];
    // axis 3: rows are already contiguous
    fft.process_with_scratch(data, &mut scratch);
    // axis 2: transpose each (i2, i3) plane, transform, transpose back
    let mut plane = vec![Complex64::ZERO; n2];
    for i1 in 0..n {
        let base = i1 * n2;
        for i2 in 0..n {
            for i3 in 0..n {
                plane[i3 * n + i2] = data[base + i2 * n + i3];
            }
        }
        fft.process_with_scratch(&mut plane, &mut scratch);
        for i3 in 0..n {
            for i2 in 0..n {
                data[base + i2 * n + i3] = plane[i3 * n + i2];
            }
        }
    }
    // axis 1: full transpose to (i2, i3, i1) layout, transform, undo
    let mut flipped = vec![Complex64::ZERO; n * n2];
    for i1 in 0..n {
        for rest in 0..n2 {
            flipped[rest * n + i1] = data[i1 * n2 + rest];
        }
    }
    fft.process_with_scratch(&mut flipped, &mut scratch);
    for i1 in 0..n {
        for rest in 0..n2 {
            data[i1 * n2 + rest] = flipped[rest * n + i1];
        }
    }
}

/// Forward DFT of a real field; coeff(0) equals the field mean.
pub fn to_spectral(f: &RealField) -> Result<SpectralField> {
    if !f.is_finite() {
        return Err(Error::Numeric("non-finite values in real field".into()));
    }
    let grid = f.grid;
    let n = grid.n();
    let np = grid.point_count();
    let plan = plan_for(n);
    let mut out = SpectralField::zeros(grid, f.rank);
    let scale = 1.0 / np as f64;
    for c in 0..f.rank.multiplicity() {
        let dst = out.component_mut(c);
        for (z, &x) in dst.iter_mut().zip(f.component(c)) {
            *z = Complex64::new(x, 0.0);
        }
        transform3(dst, n, &plan.forward);
        for z in dst.iter_mut() {
            *z *= scale;
        }
    }
    Ok(out)
}

/// Inverse DFT; the (machine-level) imaginary residue of a conjugate-symmetric
/// input is discarded.
pub fn to_real(f: &SpectralField) -> Result<RealField> {
    if !f.is_finite() {
        return Err(Error::Numeric("non-finite coefficients in spectral field".into()));
    }
    let grid = f.grid;
    let n = grid.n();
    let plan = plan_for(n);
    let mut out = RealField::zeros(grid, f.rank);
    let mut buf = vec![Complex64::ZERO; grid.point_count()];
    for c in 0..f.rank.multiplicity() {
        buf.copy_from_slice(f.component(c));
        transform3(&mut buf, n, &plan.inverse);
        for (x, z) in out.component_mut(c).iter_mut().zip(&buf) {
            *x = z.re;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rank;
    use crate::grid::Grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: Grid, seed: u64) -> RealField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = RealField::zeros(grid, Rank::Scalar);
        for x in &mut f.data {
            *x = rng.gen_range(-1.0..1.0);
        }
        f
    }

    #[test]
    fn round_trip_is_identity() {
        let grid = Grid::new(16).unwrap();
        let f = random_field(grid, 7);
        let back = to_real(&to_spectral(&f).unwrap()).unwrap();
        let err = f
            .data
            .iter()
            .zip(&back.data)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err <= 1e-12, "round-trip error {err}");
    }

    #[test]
    fn constant_field_is_pure_dc() {
        let grid = Grid::new(16).unwrap();
        let f = RealField::scalar_from_fn(grid, |_, _, _| 2.5);
        let hat = to_spectral(&f).unwrap();
        assert!((hat.data[0].re - 2.5).abs() < 1e-13);
        assert!(hat.data[0].im.abs() < 1e-13);
        let rest: f64 = hat.data[1..].iter().map(|z| z.norm()).sum();
        assert!(rest < 1e-12, "non-DC energy {rest}");
    }

    #[test]
    fn sin_x1_has_exactly_two_modes() {
        let grid = Grid::new(16).unwrap();
        let f = RealField::scalar_from_fn(grid, |x, _, _| x.sin());
        let hat = to_spectral(&f).unwrap();
        let mut nonzero = Vec::new();
        for (idx, k) in grid.modes() {
            if hat.data[idx].norm() > 1e-12 {
                nonzero.push((k, hat.data[idx]));
            }
        }
        assert_eq!(nonzero.len(), 2);
        for (k, z) in nonzero {
            assert_eq!(k[1], 0);
            assert_eq!(k[2], 0);
            assert_eq!(k[0].abs(), 1);
            // sin x = (e^{ix} - e^{-ix}) / 2i
            let expect = Complex64::new(0.0, -0.5 * k[0] as f64);
            assert!((z - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn non_finite_input_rejected() {
        let grid = Grid::new(8).unwrap();
        let mut f = RealField::zeros(grid, Rank::Scalar);
        f.data[3] = f64::NAN;
        assert!(to_spectral(&f).is_err());
    }
}
