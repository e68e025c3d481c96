//! Uniform cubic grid on the 2π-periodic torus.
//!
//! The period is fixed at 2π per axis so wavenumbers are integers and the
//! smallest nonzero |k| is 1, which gives the zero-mean Poincaré inequality
//! with constant 1.

use crate::error::{Error, Result};

pub const PERIOD: f64 = 2.0 * std::f64::consts::PI;

/// Points-per-axis bounds accepted by [`Grid::new`].
pub const MIN_N: usize = 8;
pub const MAX_N: usize = 128;

/// Cubic sampling grid for `[0, 2π)³` with `n` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    /// `n` must be even and within `[8, 128]`.
    pub fn new(n: usize) -> Result<Grid> {
        if n % 2 != 0 || !(MIN_N..=MAX_N).contains(&n) {
            return Err(Error::Config {
                key: "grid_n".into(),
                reason: format!("expected an even integer in [{MIN_N}, {MAX_N}], got {n}"),
            });
        }
        Ok(Grid { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of grid points, n³.
    pub fn point_count(&self) -> usize {
        self.n * self.n * self.n
    }

    /// |Ω| = (2π)³.
    pub fn volume(&self) -> f64 {
        PERIOD * PERIOD * PERIOD
    }

    /// Grid spacing 2π/n (identical per axis).
    pub fn spacing(&self) -> f64 {
        PERIOD / self.n as f64
    }

    /// Volume of one cell, used as the quadrature weight.
    pub fn cell_volume(&self) -> f64 {
        let h = self.spacing();
        h * h * h
    }

    /// Signed integer wavenumber for storage index `i` along one axis:
    /// `0, 1, …, n/2−1, −n/2, …, −1`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        debug_assert!(i < self.n);
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// The Nyquist wavenumber −n/2 (the unpaired mode).
    pub fn nyquist(&self) -> i64 {
        -((self.n / 2) as i64)
    }

    /// Row-major linear index over (x₁, x₂, x₃).
    #[inline]
    pub fn index(&self, i1: usize, i2: usize, i3: usize) -> usize {
        (i1 * self.n + i2) * self.n + i3
    }

    /// Physical coordinate of sample index `i` along one axis.
    pub fn coord(&self, i: usize) -> f64 {
        PERIOD * i as f64 / self.n as f64
    }

    /// Iterate `(linear_index, (k1, k2, k3))` over all modes.
    pub fn modes(&self) -> impl Iterator<Item = (usize, [i64; 3])> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i1| {
            (0..n).flat_map(move |i2| {
                (0..n).map(move |i3| {
                    (
                        (i1 * n + i2) * n + i3,
                        [
                            self.wavenumber(i1),
                            self.wavenumber(i2),
                            self.wavenumber(i3),
                        ],
                    )
                })
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_16_has_4096_points_and_wavenumbers_minus8_to_7() {
        let g = Grid::new(16).unwrap();
        assert_eq!(g.point_count(), 4096);
        let ks: Vec<i64> = (0..16).map(|i| g.wavenumber(i)).collect();
        let mut sorted = ks.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (-8..8).collect::<Vec<i64>>());
        assert_eq!(g.nyquist(), -8);
    }

    #[test]
    fn odd_n_rejected() {
        assert!(Grid::new(7).is_err());
    }

    #[test]
    fn out_of_range_n_rejected() {
        assert!(Grid::new(6).is_err());
        assert!(Grid::new(130).is_err());
    }

    #[test]
    fn spacing_is_period_over_n() {
        let g = Grid::new(32).unwrap();
        assert_eq!(g.spacing(), PERIOD / 32.0);
    }

    #[test]
    fn volume_is_period_cubed() {
        let g = Grid::new(8).unwrap();
        assert_eq!(g.volume(), PERIOD.powi(3));
    }

    #[test]
    fn zero_wavenumber_unique() {
        let g = Grid::new(16).unwrap();
        let zeros = (0..16).filter(|&i| g.wavenumber(i) == 0).count();
        assert_eq!(zeros, 1);
    }
}
