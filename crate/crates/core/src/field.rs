//! Scalar and 3-vector fields on the torus, in sample space and in
//! Fourier-coefficient space.
//!
//! Storage is component-major: component `c` occupies the contiguous slice
//! `[c·n³, (c+1)·n³)`, itself row-major over (x₁, x₂, x₃).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Tensorial rank of a field: scalar or 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    Scalar,
    Vector3,
}

impl Rank {
    pub fn multiplicity(&self) -> usize {
        match self {
            Rank::Scalar => 1,
            Rank::Vector3 => 3,
        }
    }
}

/// Real samples at grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    pub grid: Grid,
    pub rank: Rank,
    pub data: Vec<f64>,
}

impl RealField {
    pub fn zeros(grid: Grid, rank: Rank) -> RealField {
        RealField {
            grid,
            rank,
            data: vec![0.0; rank.multiplicity() * grid.point_count()],
        }
    }

    /// Sample a scalar function at the grid points.
    pub fn scalar_from_fn(grid: Grid, f: impl Fn(f64, f64, f64) -> f64) -> RealField {
        let mut out = RealField::zeros(grid, Rank::Scalar);
        let n = grid.n();
        for i1 in 0..n {
            for i2 in 0..n {
                for i3 in 0..n {
                    out.data[grid.index(i1, i2, i3)] =
                        f(grid.coord(i1), grid.coord(i2), grid.coord(i3));
                }
            }
        }
        out
    }

    /// Sample a vector function at the grid points.
    pub fn vector_from_fn(grid: Grid, f: impl Fn(f64, f64, f64) -> [f64; 3]) -> RealField {
        let mut out = RealField::zeros(grid, Rank::Vector3);
        let n = grid.n();
        let np = grid.point_count();
        for i1 in 0..n {
            for i2 in 0..n {
                for i3 in 0..n {
                    let v = f(grid.coord(i1), grid.coord(i2), grid.coord(i3));
                    let idx = grid.index(i1, i2, i3);
                    out.data[idx] = v[0];
                    out.data[np + idx] = v[1];
                    out.data[2 * np + idx] = v[2];
                }
            }
        }
        out
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let np = self.grid.point_count();
        &self.data[c * np..(c + 1) * np]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        let np = self.grid.point_count();
        &mut self.data[c * np..(c + 1) * np]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Pointwise Euclidean magnitude (vector fields) or |value| (scalars).
    pub fn magnitude(&self) -> Vec<f64> {
        let np = self.grid.point_count();
        match self.rank {
            Rank::Scalar => self.data.iter().map(|x| x.abs()).collect(),
            Rank::Vector3 => (0..np)
                .map(|i| {
                    let a = self.data[i];
                    let b = self.data[np + i];
                    let c = self.data[2 * np + i];
                    (a * a + b * b + c * c).sqrt()
                })
                .collect(),
        }
    }
}

/// Complex Fourier coefficients indexed by wavenumber.
///
/// Convention: coefficient at k = 0 equals the spatial mean of the field.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: Grid,
    pub rank: Rank,
    pub data: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid, rank: Rank) -> SpectralField {
        SpectralField {
            grid,
            rank,
            data: vec![Complex64::ZERO; rank.multiplicity() * grid.point_count()],
        }
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let np = self.grid.point_count();
        &self.data[c * np..(c + 1) * np]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let np = self.grid.point_count();
        &mut self.data[c * np..(c + 1) * np]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Mean of component `c` (the k = 0 coefficient).
    pub fn mean(&self, c: usize) -> Complex64 {
        self.component(c)[0]
    }

    pub fn require_same_shape(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid || self.rank != other.rank {
            return Err(Error::Usage("field shape mismatch".into()));
        }
        Ok(())
    }

    pub fn scaled(&self, s: f64) -> SpectralField {
        let mut out = self.clone();
        for z in &mut out.data {
            *z *= s;
        }
        out
    }

    pub fn add(&self, other: &SpectralField) -> SpectralField {
        debug_assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &SpectralField) -> SpectralField {
        debug_assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    /// `self += s · other`, in place.
    pub fn axpy(&mut self, s: f64, other: &SpectralField) {
        debug_assert_eq!(self.rank, other.rank);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }
}

/// L₂(Ω) inner product via Parseval: |Ω| Σ_k Re(a_k · conj(b_k)), summed over
/// components.
pub fn l2_inner(a: &SpectralField, b: &SpectralField) -> f64 {
    debug_assert_eq!(a.rank, b.rank);
    let dot: f64 = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x * y.conj()).re)
        .sum();
    a.grid.volume() * dot
}

/// Squared L₂(Ω) norm via Parseval.
pub fn l2_norm_sq(a: &SpectralField) -> f64 {
    let s: f64 = a.data.iter().map(|z| z.norm_sqr()).sum();
    a.grid.volume() * s
}
