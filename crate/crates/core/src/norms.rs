//! Norm functionals: Lp norms by grid quadrature, integer Sobolev norms as
//! sums of spectral derivative L₂ norms, the Γ_l^k space–time norms, and the
//! term battery of the L_r energy estimate.

use crate::error::{Error, Result};
use crate::estimates::cbar;
use crate::fft::{to_real, to_spectral};
use crate::field::{l2_norm_sq, RealField, Rank, SpectralField};
use crate::grid::Grid;
use crate::ops::differentiate;

/// Lp(Ω) norm by grid quadrature; `p = ∞` returns the max. Vector fields use
/// the pointwise Euclidean magnitude.
pub fn lp_norm(f: &RealField, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Usage(format!("lp_norm requires p >= 1, got {p}")));
    }
    let mags = f.magnitude();
    if p.is_infinite() {
        return Ok(mags.into_iter().fold(0.0, f64::max));
    }
    let h3 = f.grid.cell_volume();
    let sum: f64 = mags.iter().map(|m| m.powf(p)).sum();
    Ok((sum * h3).powf(1.0 / p))
}

/// Lp norm of the pointwise root-sum-of-squares over an arbitrary component
/// list (used for tensor magnitudes such as |∇v| and |∇²φ|).
pub fn lp_norm_multi(grid: Grid, comps: &[&[f64]], p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Usage(format!("lp_norm requires p >= 1, got {p}")));
    }
    let np = grid.point_count();
    let mag = |i: usize| -> f64 {
        comps
            .iter()
            .map(|c| c[i] * c[i])
            .sum::<f64>()
            .sqrt()
    };
    if p.is_infinite() {
        return Ok((0..np).map(mag).fold(0.0, f64::max));
    }
    let h3 = grid.cell_volume();
    let sum: f64 = (0..np).map(|i| mag(i).powf(p)).sum();
    Ok((sum * h3).powf(1.0 / p))
}

/// All multi-indices α with |α| ≤ s (each counted once).
pub fn multi_indices(s: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a1 in 0..=s {
        for a2 in 0..=s - a1 {
            for a3 in 0..=s - a1 - a2 {
                out.push([a1, a2, a3]);
            }
        }
    }
    out
}

/// Squared H^s norm: Σ_{|α| ≤ s} |D^α f|₂², derivatives taken spectrally.
pub fn sobolev_norm_sq(f: &SpectralField, s: usize) -> Result<f64> {
    if s > 3 {
        return Err(Error::Usage(format!("sobolev_norm supports s <= 3, got {s}")));
    }
    let mut total = 0.0;
    for alpha in multi_indices(s) {
        total += l2_norm_sq(&differentiate(f, alpha)?);
    }
    Ok(total)
}

pub fn sobolev_norm(f: &SpectralField, s: usize) -> Result<f64> {
    Ok(sobolev_norm_sq(f, s)?.sqrt())
}

/// Squared Γ_l^k norm: ‖f‖_k² + [l = 1] ‖f_t‖_{k−1}².
pub fn gamma_norm_sq(
    f: &SpectralField,
    f_t: Option<&SpectralField>,
    k: usize,
    l: usize,
) -> Result<f64> {
    if l > 1 || l > k {
        return Err(Error::Usage(format!(
            "gamma_norm supports l in {{0, 1}} with l <= k, got l = {l}, k = {k}"
        )));
    }
    let mut total = sobolev_norm_sq(f, k)?;
    if l == 1 {
        let ft = f_t.ok_or_else(|| {
            Error::Usage("gamma_norm with l = 1 needs the cached time derivative".into())
        })?;
        total += sobolev_norm_sq(ft, k - 1)?;
    }
    Ok(total)
}

pub fn gamma_norm(
    f: &SpectralField,
    f_t: Option<&SpectralField>,
    k: usize,
    l: usize,
) -> Result<f64> {
    Ok(gamma_norm_sq(f, f_t, k, l)?.sqrt())
}

/// Every scalar of the L_r estimate's term structure, evaluated on one field.
#[derive(Debug, Clone)]
pub struct LrTerms {
    /// |v|_r
    pub lr: f64,
    /// |v|_{3r}
    pub l3r: f64,
    /// |∇|v|^{r/2}|₂
    pub grad_mag_pow_l2: f64,
    /// ||v|^{r/2} |∇(v/|v|)||₂, evaluated where |v| > ε_mag
    pub direction_term: f64,
    /// |div v · |v|^{r/2−1}|₂
    pub div_weighted: f64,
    /// c̄(r, μ, c₀) ν^r |div v|^r_{3r/(r+1)}
    pub cbar_nu_div_term: f64,
    /// measure of the excluded set {|v| ≤ ε_mag}
    pub singular_measure: f64,
    pub eps_mag: f64,
}

/// Evaluate the L_r term battery for `r ∈ [2, 6]`.
///
/// The direction field v/|v| is undefined at zeros of v; points with
/// |v| ≤ ε_mag = 1e−8 |v|_∞ are excluded from the singular-sensitive terms
/// and their total measure is reported.
pub fn lr_terms(v: &RealField, r: f64, mu: f64, nu: f64, c0: f64) -> Result<LrTerms> {
    if !(2.0..=6.0).contains(&r) {
        return Err(Error::Usage(format!("lr_terms requires r in [2, 6], got {r}")));
    }
    if v.rank != Rank::Vector3 {
        return Err(Error::Usage("lr_terms expects a vector field".into()));
    }
    let grid = v.grid;
    let np = grid.point_count();
    let h3 = grid.cell_volume();
    let v_hat = to_spectral(v)?;

    // ∂_j v_i as real fields, indexed dv[j][i]
    let mut dv: Vec<[Vec<f64>; 3]> = Vec::with_capacity(3);
    for j in 0..3 {
        let mut alpha = [0usize; 3];
        alpha[j] = 1;
        let d = to_real(&differentiate(&v_hat, alpha)?)?;
        dv.push([
            d.component(0).to_vec(),
            d.component(1).to_vec(),
            d.component(2).to_vec(),
        ]);
    }
    let div: Vec<f64> = (0..np)
        .map(|i| dv[0][0][i] + dv[1][1][i] + dv[2][2][i])
        .collect();

    let mag = v.magnitude();
    let vmax = mag.iter().fold(0.0_f64, |m, &x| m.max(x));
    let eps_mag = 1e-8 * vmax;

    let mut grad_mag_sq_sum = 0.0;
    let mut dir_sq_sum = 0.0;
    let mut divw_sq_sum = 0.0;
    let mut excluded = 0usize;
    for i in 0..np {
        let m = mag[i];
        if m <= eps_mag {
            excluded += 1;
            continue;
        }
        let vi = [v.component(0)[i], v.component(1)[i], v.component(2)[i]];
        // ∇|v| via the chain rule on the interpolant derivatives
        let mut grad_m = [0.0; 3];
        for j in 0..3 {
            grad_m[j] = (vi[0] * dv[j][0][i] + vi[1] * dv[j][1][i] + vi[2] * dv[j][2][i]) / m;
        }
        let grad_m_sq: f64 = grad_m.iter().map(|g| g * g).sum();
        // |∇|v|^{r/2}| = (r/2) |v|^{r/2−1} |∇|v||
        let w = 0.5 * r * m.powf(0.5 * r - 1.0);
        grad_mag_sq_sum += w * w * grad_m_sq;
        // |v|^{r/2} |∇(v/|v|)| with ∂_j(v_i/|v|) = (∂_j v_i − v_i ∂_j|v| / |v|) / |v|
        let mut dir_sq = 0.0;
        for j in 0..3 {
            for c in 0..3 {
                let d = (dv[j][c][i] - vi[c] * grad_m[j] / m) / m;
                dir_sq += d * d;
            }
        }
        dir_sq_sum += m.powf(r) * dir_sq;
        let dw = div[i] * m.powf(0.5 * r - 1.0);
        divw_sq_sum += dw * dw;
    }

    let div_field = RealField {
        grid,
        rank: Rank::Scalar,
        data: div,
    };
    let p_div = 3.0 * r / (r + 1.0);
    let div_norm = lp_norm(&div_field, p_div)?;
    // the div-term coefficient carries a factor (r−2) and vanishes at r = 2
    let cbar_nu_div_term = if r > 2.0 {
        cbar(r, mu, c0)? * nu.powf(r) * div_norm.powf(r)
    } else {
        0.0
    };

    Ok(LrTerms {
        lr: lp_norm(v, r)?,
        l3r: lp_norm(v, 3.0 * r)?,
        grad_mag_pow_l2: (grad_mag_sq_sum * h3).sqrt(),
        direction_term: (dir_sq_sum * h3).sqrt(),
        div_weighted: (divw_sq_sum * h3).sqrt(),
        cbar_nu_div_term,
        singular_measure: excluded as f64 * h3,
        eps_mag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::dealias;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn grid16() -> Grid {
        Grid::new(16).unwrap()
    }

    fn pi3() -> f64 {
        PI.powi(3)
    }

    #[test]
    fn l2_of_sin_matches_closed_form() {
        let f = RealField::scalar_from_fn(grid16(), |x, _, _| x.sin());
        let got = lp_norm(&f, 2.0).unwrap();
        let expect = (4.0 * pi3()).sqrt();
        assert!((got - expect).abs() / expect <= 1e-10, "got {got}, expect {expect}");
    }

    #[test]
    fn linf_of_sin_attained_on_grid() {
        let f = RealField::scalar_from_fn(grid16(), |x, _, _| x.sin());
        assert_eq!(lp_norm(&f, f64::INFINITY).unwrap(), 1.0);
    }

    #[test]
    fn unit_magnitude_vector_has_lp_equal_volume_power() {
        let f = RealField::vector_from_fn(grid16(), |x, _, _| [x.cos(), x.sin(), 0.0]);
        for p in [1.0, 2.0, 3.0, 4.0, 6.0] {
            let got = lp_norm(&f, p).unwrap();
            let expect = (2.0 * PI).powf(3.0 / p);
            assert!((got - expect).abs() / expect <= 1e-12, "p = {p}");
        }
        assert!((lp_norm(&f, f64::INFINITY).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn p_below_one_rejected() {
        let f = RealField::zeros(grid16(), Rank::Scalar);
        assert!(lp_norm(&f, 0.5).is_err());
    }

    #[test]
    fn h1_of_sin_matches_single_mode_count() {
        let f = to_spectral(&RealField::scalar_from_fn(grid16(), |x, _, _| x.sin())).unwrap();
        let got = sobolev_norm_sq(&f, 1).unwrap();
        let expect = 8.0 * pi3();
        assert!((got - expect).abs() / expect <= 1e-10);
    }

    #[test]
    fn sobolev_of_constant_is_l2() {
        let c = 2.5;
        let f = to_spectral(&RealField::scalar_from_fn(grid16(), |_, _, _| c)).unwrap();
        for s in 0..=3 {
            let got = sobolev_norm(&f, s).unwrap();
            let expect = c * (2.0 * PI).powf(1.5);
            assert!((got - expect).abs() / expect <= 1e-12, "s = {s}");
        }
    }

    #[test]
    fn h2_of_taylor_green_matches_multiplier_count() {
        let f = to_spectral(&RealField::vector_from_fn(grid16(), |x, y, _| {
            [x.sin() * y.cos(), -(x.cos() * y.sin()), 0.0]
        }))
        .unwrap();
        let got = sobolev_norm_sq(&f, 2).unwrap();
        let expect = 24.0 * pi3();
        assert!((got - expect).abs() / expect <= 1e-10, "got {got}, expect {expect}");
    }

    #[test]
    fn sobolev_agrees_with_fourier_multiplier_form() {
        let grid = grid16();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut raw = RealField::zeros(grid, Rank::Scalar);
        for x in &mut raw.data {
            *x = rng.gen_range(-1.0..1.0);
        }
        let f = dealias(&to_spectral(&raw).unwrap());
        for s in 0..=3usize {
            let direct = sobolev_norm_sq(&f, s).unwrap();
            // multiplier form: Σ_k (Σ_{|α| ≤ s} Π k_j^{2α_j}) |f̂(k)|²
            let mut mult = 0.0;
            for (idx, k) in grid.modes() {
                let mut w = 0.0;
                for alpha in multi_indices(s) {
                    w += (k[0] as f64).powi(2 * alpha[0] as i32)
                        * (k[1] as f64).powi(2 * alpha[1] as i32)
                        * (k[2] as f64).powi(2 * alpha[2] as i32);
                }
                mult += w * f.data[idx].norm_sqr();
            }
            mult *= grid.volume();
            assert!((direct - mult).abs() / mult <= 1e-12, "s = {s}");
        }
    }

    #[test]
    fn gamma_norm_reduces_to_sobolev_at_l0() {
        let f = to_spectral(&RealField::scalar_from_fn(grid16(), |x, y, _| {
            x.sin() + (2.0 * y).cos()
        }))
        .unwrap();
        for k in 0..=3 {
            assert_eq!(
                gamma_norm(&f, None, k, 0).unwrap(),
                sobolev_norm(&f, k).unwrap()
            );
        }
    }

    #[test]
    fn gamma_norm_of_steady_taylor_green() {
        let grid = grid16();
        let f = to_spectral(&RealField::vector_from_fn(grid, |x, y, _| {
            [x.sin() * y.cos(), -(x.cos() * y.sin()), 0.0]
        }))
        .unwrap();
        let ft = SpectralField::zeros(grid, Rank::Vector3);
        let got = gamma_norm(&f, Some(&ft), 2, 1).unwrap();
        let expect = (24.0 * pi3()).sqrt();
        assert!((got - expect).abs() / expect <= 1e-10);
    }

    #[test]
    fn gamma_norm_time_part_only() {
        let grid = grid16();
        let f = SpectralField::zeros(grid, Rank::Scalar);
        let ft = to_spectral(&RealField::scalar_from_fn(grid, |x, _, _| x.sin())).unwrap();
        let got = gamma_norm(&f, Some(&ft), 2, 1).unwrap();
        let expect = (8.0 * pi3()).sqrt();
        assert!((got - expect).abs() / expect <= 1e-10);
    }

    #[test]
    fn gamma_norm_missing_tendency_errors() {
        let f = SpectralField::zeros(grid16(), Rank::Scalar);
        assert!(gamma_norm(&f, None, 2, 1).is_err());
    }

    #[test]
    fn lp_agrees_with_parseval_at_p2() {
        let grid = grid16();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let mut raw = RealField::zeros(grid, Rank::Vector3);
        for x in &mut raw.data {
            *x = rng.gen_range(-1.0..1.0);
        }
        let spec = dealias(&to_spectral(&raw).unwrap());
        let real = to_real(&spec).unwrap();
        let grid_norm = lp_norm(&real, 2.0).unwrap();
        let parseval = l2_norm_sq(&spec).sqrt();
        assert!((grid_norm - parseval).abs() / parseval <= 1e-10);
    }

    #[test]
    fn holder_monotonicity_of_normalized_lp() {
        let grid = grid16();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut f = RealField::zeros(grid, Rank::Scalar);
        for x in &mut f.data {
            *x = rng.gen_range(-1.0..1.0);
        }
        let vol = 2.0 * PI;
        let mut prev = 0.0;
        for p in [2.0, 3.0, 4.0, 6.0] {
            let val = lp_norm(&f, p).unwrap() / vol.powf(3.0 / p);
            assert!(val + 1e-12 >= prev, "normalized Lp dropped at p = {p}");
            prev = val;
        }
    }

    #[test]
    fn lr_terms_unit_magnitude_field() {
        // |v| ≡ 1: the magnitude gradient vanishes and |∇v|² = |∇(v/|v|)|²
        let grid = grid16();
        let v = RealField::vector_from_fn(grid, |x, _, _| [x.cos(), x.sin(), 0.0]);
        let t = lr_terms(&v, 4.0, 1.0, 1.0, 1.0).unwrap();
        assert!(t.grad_mag_pow_l2 <= 1e-10);
        assert_eq!(t.singular_measure, 0.0);
        // |∇v|₂ for this field: |∂₁ v|² = sin² + cos² = 1 pointwise
        let expect = grid.volume().sqrt();
        assert!((t.direction_term - expect).abs() / expect <= 1e-10);
    }

    #[test]
    fn lr_terms_divergence_free_field_has_zero_div_terms() {
        let grid = grid16();
        let v = RealField::vector_from_fn(grid, |x, y, _| {
            [x.sin() * y.cos(), -(x.cos() * y.sin()), 0.0]
        });
        let t = lr_terms(&v, 3.0, 1.0, 10.0, 1.0).unwrap();
        assert!(t.div_weighted <= 1e-10);
        assert!(t.cbar_nu_div_term <= 1e-10);
    }

    #[test]
    fn lr_terms_pointwise_identity_at_r2() {
        // |∇|v||₂² + ||v|∇(v/|v|)|₂² = |∇v|₂² outside the ε_mag set
        let grid = grid16();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let mut raw = RealField::zeros(grid, Rank::Vector3);
        for x in &mut raw.data {
            *x = rng.gen_range(-1.0..1.0);
        }
        // keep |v| bounded away from zero so the excluded set is empty
        let spec = dealias(&to_spectral(&raw).unwrap());
        let mut v = to_real(&spec).unwrap();
        for x in v.component_mut(2) {
            *x += 4.0;
        }
        let t = lr_terms(&v, 2.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(t.singular_measure, 0.0);

        // independent |∇v|₂² via quadrature of the nine derivative fields
        let v_hat = to_spectral(&v).unwrap();
        let mut grad_sq = 0.0;
        for j in 0..3 {
            let mut alpha = [0usize; 3];
            alpha[j] = 1;
            let d = to_real(&differentiate(&v_hat, alpha).unwrap()).unwrap();
            grad_sq += d.data.iter().map(|x| x * x).sum::<f64>() * grid.cell_volume();
        }
        let lhs = t.grad_mag_pow_l2.powi(2) + t.direction_term.powi(2);
        assert!(
            (lhs - grad_sq).abs() / grad_sq <= 1e-6,
            "identity residual: lhs {lhs} vs |∇v|² {grad_sq}"
        );
    }
}
