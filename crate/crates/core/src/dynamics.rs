//! Right-hand sides and stiff time integration for the incompressible system
//! and its two-viscosity regularization, their coupled co-evolution, scenario
//! initial data, and the residual check of the difference system.
//!
//! The incompressible field V is evolved with the pressure gradient
//! eliminated by Leray projection. The regularized field v is evolved as
//! written, with no projection. Both use an integrating-factor RK4 whose
//! linear part is exponentiated exactly per wavenumber, which removes the
//! stiffness restriction from the ν ∇div term.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimates::EstimateParams;
use crate::fft::{to_real, to_spectral};
use crate::field::{l2_norm_sq, RealField, Rank, SpectralField};
use crate::grid::Grid;
use crate::helmholtz::{decompose, leray_project, PotentialPair};
use crate::ledger::NormLedger;
use crate::norms::{gamma_norm, lp_norm, sobolev_norm};
use crate::ops::{
    dealias, differentiate, divergence, gradient, inverse_laplacian, laplacian, zero_mean,
    zero_mean_in_place,
};

/// Viscosity pair of the regularized momentum system.
#[derive(Debug, Clone, Copy)]
pub struct PhysicalParams {
    pub mu: f64,
    /// Bulk viscosity; the interesting regime is ν large, but any
    /// nonnegative value is accepted.
    pub nu: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0) {
            return Err(Error::Config {
                key: "mu".into(),
                reason: format!("viscosity must be positive, got {}", self.mu),
            });
        }
        if !(self.nu >= 0.0) {
            return Err(Error::Config {
                key: "nu".into(),
                reason: format!("bulk viscosity must be nonnegative, got {}", self.nu),
            });
        }
        Ok(())
    }
}

/// Initial-data scenarios.
#[derive(Debug, Clone)]
pub enum Scenario {
    /// V₀ = v₀ = the classical single-mode solenoidal vortex.
    TaylorGreen,
    /// Random solenoidal V₀ supported on a wavenumber shell; v₀ = V₀ + u₀
    /// with ‖u₀‖_{H¹} = γ (u₀ omitted when γ = 0).
    RandomBand {
        band_lo: usize,
        band_hi: usize,
        amplitude: f64,
        gamma: f64,
    },
    /// Like RandomBand, but the gradient part of v₀ is rescaled so that
    /// |φ(0)|_p = (c₃ + c₄)/(2 ν^κ) exactly, and ‖u₀‖_{H¹} = γ exactly.
    PaperScaling {
        band_lo: usize,
        band_hi: usize,
        amplitude: f64,
        gamma: f64,
        p: f64,
        c3: f64,
        c4: f64,
    },
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::TaylorGreen => "taylor-green",
            Scenario::RandomBand { .. } => "random-band",
            Scenario::PaperScaling { .. } => "paper-scaling",
        }
    }
}

/// Derived checks of the constructed initial data, echoed into the manifest.
#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub phi0_lp: f64,
    pub u0_h1: f64,
    /// ‖∇φ(0)‖₁ — the smallness the theory expects to scale like 1/√ν.
    pub grad_phi0_h1: f64,
}

/// Full description of one coupled run.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub grid_n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub sample_stride: usize,
    pub seed: u64,
    pub dealias: bool,
    /// Evolve v with the projected (ν = ∞ proxy) dynamics instead of the
    /// regularized system.
    pub nu_infinity_proxy: bool,
    pub params: PhysicalParams,
    pub scenario: Scenario,
    pub estimates: EstimateParams,
}

/// One time-stamped sample of the coupled pair, with tendencies evaluated
/// from the right-hand sides (never finite differences) and the Helmholtz
/// potentials of v.
#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    /// Regularized field.
    pub v: SpectralField,
    /// Incompressible field.
    pub big_v: SpectralField,
    pub v_t: SpectralField,
    pub big_v_t: SpectralField,
    pub pots: PotentialPair,
}

impl SimState {
    /// Build a sample from raw fields: validates invariants and caches
    /// tendencies and potentials.
    pub fn from_fields(
        t: f64,
        v: SpectralField,
        big_v: SpectralField,
        params: &PhysicalParams,
        dealias_on: bool,
        projected_proxy: bool,
    ) -> Result<SimState> {
        let big_v_t = rhs_nse(&big_v, params.mu, dealias_on)?;
        let (v_t, pots) = if projected_proxy {
            (rhs_nse(&v, params.mu, dealias_on)?, decompose(&v)?)
        } else {
            rhs_lame(&v, params.mu, params.nu, dealias_on)?
        };
        Ok(SimState {
            t,
            v,
            big_v,
            v_t,
            big_v_t,
            pots,
        })
    }

    /// The difference field u = v − V.
    pub fn u(&self) -> SpectralField {
        self.v.sub(&self.big_v)
    }

    pub fn u_t(&self) -> SpectralField {
        self.v_t.sub(&self.big_v_t)
    }

    /// Pressure diagnostic reconstructed on demand: P = −Δ⁻¹ div(V·∇V).
    pub fn pressure(&self, dealias_on: bool) -> Result<SpectralField> {
        let conv = convection(&self.big_v, &self.big_v, dealias_on)?;
        inverse_laplacian(&divergence(&conv)?)
    }
}

/// Termination status of a coupled run; blow-up keeps the partial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunOutcome {
    Completed,
    BlownUp { step: usize, t: f64 },
}

/// A sampled coupled trajectory plus its accumulated norm ledger.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: Grid,
    pub params: PhysicalParams,
    pub dt: f64,
    pub samples: Vec<SimState>,
    pub ledger: NormLedger,
    pub outcome: RunOutcome,
    /// Whether quadratic products were dealiased during the run.
    pub dealias: bool,
}

/// Pointwise advective product b·∇v, dealiased and mean-zeroed.
pub fn convection(b: &SpectralField, v: &SpectralField, dealias_on: bool) -> Result<SpectralField> {
    let grid = v.grid;
    let np = grid.point_count();
    let b_real = to_real(b)?;
    let mut w = RealField::zeros(grid, Rank::Vector3);
    for j in 0..3 {
        let mut alpha = [0usize; 3];
        alpha[j] = 1;
        let dj = to_real(&differentiate(v, alpha)?)?;
        let bj = b_real.component(j);
        for i in 0..3 {
            let dst = w.component_mut(i);
            let src = dj.component(i);
            for idx in 0..np {
                dst[idx] += bj[idx] * src[idx];
            }
        }
    }
    let mut w_hat = to_spectral(&w)?;
    if dealias_on {
        w_hat = dealias(&w_hat);
    }
    zero_mean_in_place(&mut w_hat);
    Ok(w_hat)
}

fn require_solenoidal(v: &SpectralField, what: &str) -> Result<()> {
    let div_l2 = l2_norm_sq(&divergence(v)?).sqrt();
    let scale = 1.0 + l2_norm_sq(v).sqrt();
    if div_l2 > 1e-6 * scale {
        return Err(Error::Model(format!(
            "{what} requires a solenoidal field; |div|_2 = {div_l2:.3e}"
        )));
    }
    Ok(())
}

/// RHS of the incompressible system with the pressure eliminated:
/// −P_L(V·∇V) + μΔV.
pub fn rhs_nse(big_v: &SpectralField, mu: f64, dealias_on: bool) -> Result<SpectralField> {
    require_solenoidal(big_v, "rhs_nse")?;
    let conv = convection(big_v, big_v, dealias_on)?;
    let projected = leray_project(&conv)?;
    let mut rhs = laplacian(big_v).scaled(mu);
    rhs.axpy(-1.0, &projected);
    Ok(rhs)
}

/// RHS of the regularized system, as written and unprojected:
/// −(rot ψ)·∇v + μΔv + ν∇div v. Also returns the potentials of v.
pub fn rhs_lame(
    v: &SpectralField,
    mu: f64,
    nu: f64,
    dealias_on: bool,
) -> Result<(SpectralField, PotentialPair)> {
    let pots = decompose(v)?;
    let b = crate::ops::curl(&pots.psi)?;
    let conv = convection(&b, v, dealias_on)?;
    let mut rhs = laplacian(v).scaled(mu);
    rhs.axpy(nu, &gradient(&divergence(v)?)?);
    rhs.axpy(-1.0, &conv);
    Ok((rhs, pots))
}

/// Per-mode exact exponential of the linear operator.
#[derive(Debug, Clone, Copy)]
enum LinOp {
    /// −μ|k|² I − ν k kᵀ: rate −(μ+ν)|k|² along k̂, −μ|k|² transverse.
    Lame { mu: f64, nu: f64 },
    /// −μ|k|² I on the projected (solenoidal) subspace.
    Heat { mu: f64 },
}

fn apply_exp(f: &SpectralField, op: LinOp, dt: f64) -> SpectralField {
    let grid = f.grid;
    let np = grid.point_count();
    let mut out = f.clone();
    match op {
        LinOp::Heat { mu } => {
            for (idx, k) in grid.modes() {
                let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
                let e = (-mu * k2 * dt).exp();
                for c in 0..f.rank.multiplicity() {
                    out.data[c * np + idx] *= e;
                }
            }
        }
        LinOp::Lame { mu, nu } => {
            for (idx, k) in grid.modes() {
                let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
                if k2 == 0.0 {
                    continue;
                }
                let e_perp = (-mu * k2 * dt).exp();
                let e_par = (-(mu + nu) * k2 * dt).exp();
                let kv = [k[0] as f64, k[1] as f64, k[2] as f64];
                let dot = kv[0] * out.data[idx]
                    + kv[1] * out.data[np + idx]
                    + kv[2] * out.data[2 * np + idx];
                let coeff = (e_par - e_perp) * dot / k2;
                for c in 0..3 {
                    out.data[c * np + idx] =
                        e_perp * out.data[c * np + idx] + coeff * kv[c];
                }
            }
        }
    }
    out
}

/// Nonlinear stage term of the regularized system: −dealias(rot ψ·∇v).
fn stage_lame(v: &SpectralField, dealias_on: bool) -> Result<SpectralField> {
    let pots = decompose(v)?;
    let b = crate::ops::curl(&pots.psi)?;
    Ok(convection(&b, v, dealias_on)?.scaled(-1.0))
}

/// Nonlinear stage term of the projected system: −P_L dealias(V·∇V).
fn stage_nse(big_v: &SpectralField, dealias_on: bool) -> Result<SpectralField> {
    Ok(leray_project(&convection(big_v, big_v, dealias_on)?)?.scaled(-1.0))
}

/// One integrating-factor RK4 step of u' = L u + N(u).
fn ifrk4<N>(u: &SpectralField, dt: f64, op: LinOp, n: N) -> Result<SpectralField>
where
    N: Fn(&SpectralField) -> Result<SpectralField>,
{
    let e_half = |f: &SpectralField| apply_exp(f, op, 0.5 * dt);
    let e_full = |f: &SpectralField| apply_exp(f, op, dt);

    let k1 = n(u)?;
    let a = e_half(u);
    let mut arg2 = a.clone();
    arg2.axpy(0.5 * dt, &e_half(&k1));
    let k2 = n(&arg2)?;
    let mut arg3 = a;
    arg3.axpy(0.5 * dt, &k2);
    let k3 = n(&arg3)?;
    let eu = e_full(u);
    let mut arg4 = eu.clone();
    arg4.axpy(dt, &e_half(&k3));
    let k4 = n(&arg4)?;

    let mut out = eu;
    out.axpy(dt / 6.0, &e_full(&k1));
    let e_half_k2 = e_half(&k2);
    out.axpy(dt / 3.0, &e_half_k2);
    let e_half_k3 = e_half(&k3);
    out.axpy(dt / 3.0, &e_half_k3);
    out.axpy(dt / 6.0, &k4);
    Ok(out)
}

/// Advance the raw coupled pair one step; no tendency caching.
fn advance(
    v: &SpectralField,
    big_v: &SpectralField,
    dt: f64,
    params: &PhysicalParams,
    dealias_on: bool,
    projected_proxy: bool,
) -> Result<(SpectralField, SpectralField)> {
    let mut v_new = if projected_proxy {
        ifrk4(v, dt, LinOp::Heat { mu: params.mu }, |f| {
            stage_nse(f, dealias_on)
        })?
    } else {
        ifrk4(
            v,
            dt,
            LinOp::Lame {
                mu: params.mu,
                nu: params.nu,
            },
            |f| stage_lame(f, dealias_on),
        )?
    };
    let big_v_new = ifrk4(big_v, dt, LinOp::Heat { mu: params.mu }, |f| {
        stage_nse(f, dealias_on)
    })?;
    zero_mean_in_place(&mut v_new);
    let mut big_v_new = leray_project(&zero_mean(&big_v_new))?;
    zero_mean_in_place(&mut big_v_new);
    Ok((v_new, big_v_new))
}

/// One step of the coupled pair with full state validation and caching.
pub fn step(state: &SimState, dt: f64, params: &PhysicalParams) -> Result<SimState> {
    step_with(state, dt, params, true, false)
}

pub fn step_with(
    state: &SimState,
    dt: f64,
    params: &PhysicalParams,
    dealias_on: bool,
    projected_proxy: bool,
) -> Result<SimState> {
    if !(dt > 0.0) {
        return Err(Error::Usage(format!("step requires dt > 0, got {dt}")));
    }
    let (v, big_v) = advance(&state.v, &state.big_v, dt, params, dealias_on, projected_proxy)?;
    if !v.is_finite() || !big_v.is_finite() {
        return Err(Error::BlowUp {
            step: 1,
            t: state.t + dt,
        });
    }
    SimState::from_fields(state.t + dt, v, big_v, params, dealias_on, projected_proxy)
}

/// The classical solenoidal vortex (sin x₁ cos x₂, −cos x₁ sin x₂, 0).
pub fn taylor_green(grid: Grid) -> Result<SpectralField> {
    let f = RealField::vector_from_fn(grid, |x, y, _| {
        [x.sin() * y.cos(), -(x.cos() * y.sin()), 0.0]
    });
    Ok(zero_mean(&to_spectral(&f)?))
}

fn random_real(grid: Grid, rank: Rank, rng: &mut ChaCha8Rng) -> RealField {
    let mut f = RealField::zeros(grid, rank);
    for x in &mut f.data {
        *x = rng.gen_range(-1.0..1.0);
    }
    f
}

/// Band-pass filter on the Euclidean wavenumber shell `lo ≤ |k| ≤ hi`,
/// intersected with the dealiasing cutoff; mean removed.
fn band_filter(f: &SpectralField, lo: usize, hi: usize) -> SpectralField {
    let grid = f.grid;
    let np = grid.point_count();
    let n = grid.n() as i64;
    let mut out = f.clone();
    for (idx, k) in grid.modes() {
        let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        let kk = k2.sqrt();
        let cut = 3 * k[0].abs() > n || 3 * k[1].abs() > n || 3 * k[2].abs() > n;
        if kk < lo as f64 || kk > hi as f64 || cut {
            for c in 0..f.rank.multiplicity() {
                out.data[c * np + idx] = num_complex::Complex64::ZERO;
            }
        }
    }
    out
}

/// Construct (V₀, v₀) for a scenario; the same seed reproduces the fields
/// bit for bit.
pub fn make_initial_data(
    scenario: &Scenario,
    params: &PhysicalParams,
    grid: Grid,
    seed: u64,
) -> Result<(SpectralField, SpectralField, ScenarioReport)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (big_v0, v0) = match scenario {
        Scenario::TaylorGreen => {
            let tg = taylor_green(grid)?;
            (tg.clone(), tg)
        }
        Scenario::RandomBand {
            band_lo,
            band_hi,
            amplitude,
            gamma,
        } => {
            let big_v0 = random_solenoidal(grid, &mut rng, *band_lo, *band_hi, *amplitude)?;
            let v0 = if *gamma > 0.0 {
                let raw = band_filter(
                    &to_spectral(&random_real(grid, Rank::Vector3, &mut rng))?,
                    *band_lo,
                    *band_hi,
                );
                let h1 = sobolev_norm(&raw, 1)?;
                if h1 <= 0.0 {
                    return Err(Error::Scenario("random band produced an empty field".into()));
                }
                big_v0.add(&raw.scaled(gamma / h1))
            } else {
                big_v0.clone()
            };
            (big_v0, v0)
        }
        Scenario::PaperScaling {
            band_lo,
            band_hi,
            amplitude,
            gamma,
            p,
            c3,
            c4,
        } => {
            let big_v0 = random_solenoidal(grid, &mut rng, *band_lo, *band_hi, *amplitude)?;
            let kappa = 1.5 - 3.0 / p;
            let target_phi = (c3 + c4) / (2.0 * params.nu.powf(kappa));

            // gradient part: χ rescaled in Lp so that φ(0) = χ exactly
            let chi_raw = zero_mean(&band_filter(
                &to_spectral(&random_real(grid, Rank::Scalar, &mut rng))?,
                *band_lo,
                *band_hi,
            ));
            let chi_lp = lp_norm(&to_real(&chi_raw)?, *p)?;
            if chi_lp <= 0.0 {
                return Err(Error::Scenario("random scalar band is empty".into()));
            }
            let chi = chi_raw.scaled(target_phi / chi_lp);
            let grad_chi = gradient(&chi)?;
            let grad_h1_sq = crate::norms::sobolev_norm_sq(&grad_chi, 1)?;

            if !(gamma * gamma >= grad_h1_sq) {
                return Err(Error::Scenario(format!(
                    "gamma = {gamma} cannot accommodate the gradient part: \
                     gamma^2 = {:.6e} < |grad phi(0)|_1^2 = {grad_h1_sq:.6e}",
                    gamma * gamma
                )));
            }
            let w = random_solenoidal(grid, &mut rng, *band_lo, *band_hi, 1.0)?;
            let w_h1_sq = crate::norms::sobolev_norm_sq(&w, 1)?;
            let s = ((gamma * gamma - grad_h1_sq) / w_h1_sq).sqrt();
            let mut u0 = grad_chi;
            u0.axpy(s, &w);
            (big_v0.clone(), big_v0.add(&u0))
        }
    };

    let pots = decompose(&v0)?;
    let report = ScenarioReport {
        phi0_lp: lp_norm(&to_real(&pots.phi)?, scenario_p(scenario))?,
        u0_h1: sobolev_norm(&v0.sub(&big_v0), 1)?,
        grad_phi0_h1: sobolev_norm(&gradient(&pots.phi)?, 1)?,
    };
    Ok((big_v0, v0, report))
}

fn scenario_p(scenario: &Scenario) -> f64 {
    match scenario {
        Scenario::PaperScaling { p, .. } => *p,
        _ => 4.0,
    }
}

fn random_solenoidal(
    grid: Grid,
    rng: &mut ChaCha8Rng,
    lo: usize,
    hi: usize,
    amplitude: f64,
) -> Result<SpectralField> {
    let raw = band_filter(
        &to_spectral(&random_real(grid, Rank::Vector3, rng))?,
        lo,
        hi,
    );
    let sol = leray_project(&zero_mean(&raw))?;
    let l2 = l2_norm_sq(&sol).sqrt();
    if l2 <= 0.0 {
        return Err(Error::Scenario(format!(
            "band [{lo}, {hi}] leaves no solenoidal content on this grid"
        )));
    }
    Ok(sol.scaled(amplitude / l2))
}

/// Residual of the difference system along a sample: R should be a pure
/// pressure gradient, so ‖rot R‖₂ / ‖R‖₂ is the reported defect.
pub fn residual_difference_system(
    sample: &SimState,
    params: &PhysicalParams,
    dealias_on: bool,
) -> Result<(SpectralField, f64)> {
    let u = sample.u();
    let u_t = sample.u_t();
    let b = crate::ops::curl(&sample.pots.psi)?;
    let conv1 = convection(&b, &u, dealias_on)?;
    let adv = u.sub(&gradient(&sample.pots.phi)?);
    // v − u = V
    let conv2 = convection(&adv, &sample.big_v, dealias_on)?;

    let mut r = u_t;
    r.axpy(1.0, &conv1);
    r.axpy(1.0, &conv2);
    r.axpy(-params.mu, &laplacian(&u));
    r.axpy(-params.nu, &gradient(&divergence(&u)?)?);

    let r_norm = l2_norm_sq(&r).sqrt();
    let curl_norm = l2_norm_sq(&crate::ops::curl(&r)?).sqrt();
    let ratio = if r_norm > 0.0 { curl_norm / r_norm } else { 0.0 };
    Ok((r, ratio))
}

/// Co-evolve (V, v) over [0, t_end], sampling every `sample_stride` steps and
/// updating the norm ledger incrementally. Blow-up keeps the partial
/// trajectory and is recorded in the outcome.
pub fn run_coupled(spec: &RunSpec) -> Result<Trajectory> {
    spec.params.validate()?;
    if !(spec.dt > 0.0) || !(spec.t_end > 0.0) || spec.sample_stride == 0 {
        return Err(Error::Config {
            key: "dt/t_end/sample_stride".into(),
            reason: "need dt > 0, t_end > 0, sample_stride >= 1".into(),
        });
    }
    let grid = Grid::new(spec.grid_n)?;
    let (mut big_v, mut v0, _report) =
        make_initial_data(&spec.scenario, &spec.params, grid, spec.seed)?;
    if spec.dealias {
        big_v = dealias(&big_v);
        v0 = dealias(&v0);
    }
    let mut v = v0;

    let n_steps = (spec.t_end / spec.dt).round().max(1.0) as usize;
    let mut ledger = NormLedger::new(&spec.params, &spec.estimates);
    let mut samples = Vec::new();
    let mut outcome = RunOutcome::Completed;

    let state0 = SimState::from_fields(
        0.0,
        v.clone(),
        big_v.clone(),
        &spec.params,
        spec.dealias,
        spec.nu_infinity_proxy,
    )?;
    warn_cfl(&state0, spec.dt, grid)?;
    ledger.update(&state0)?;
    samples.push(state0);

    for step_idx in 1..=n_steps {
        match advance(
            &v,
            &big_v,
            spec.dt,
            &spec.params,
            spec.dealias,
            spec.nu_infinity_proxy,
        ) {
            Ok((v_new, big_v_new)) if v_new.is_finite() && big_v_new.is_finite() => {
                v = v_new;
                big_v = big_v_new;
            }
            _ => {
                outcome = RunOutcome::BlownUp {
                    step: step_idx,
                    t: step_idx as f64 * spec.dt,
                };
                break;
            }
        }
        if step_idx % spec.sample_stride == 0 || step_idx == n_steps {
            let state = SimState::from_fields(
                step_idx as f64 * spec.dt,
                v.clone(),
                big_v.clone(),
                &spec.params,
                spec.dealias,
                spec.nu_infinity_proxy,
            )?;
            ledger.update(&state)?;
            samples.push(state);
        }
    }

    Ok(Trajectory {
        grid,
        params: spec.params,
        dt: spec.dt,
        samples,
        ledger,
        outcome,
        dealias: spec.dealias,
    })
}

fn warn_cfl(state: &SimState, dt: f64, grid: Grid) -> Result<()> {
    let vmax = lp_norm(&to_real(&state.v)?, f64::INFINITY)?
        .max(lp_norm(&to_real(&state.big_v)?, f64::INFINITY)?);
    if vmax > 0.0 && dt > 0.5 * grid.spacing() / vmax {
        eprintln!(
            "warning: dt = {dt} exceeds the advective CFL heuristic {:.3e}",
            0.5 * grid.spacing() / vmax
        );
    }
    Ok(())
}

/// Norms a test needs routinely: sup over samples of ‖u(t)‖₁.
pub fn sup_u_h1(trajectory: &Trajectory) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for s in &trajectory.samples {
        sup = sup.max(sobolev_norm(&s.u(), 1)?);
    }
    Ok(sup)
}

/// Γ₁²-style norm of the initial difference, used for scenario checks.
pub fn u0_gamma_norm(trajectory: &Trajectory) -> Result<f64> {
    let s0 = &trajectory.samples[0];
    gamma_norm(&s0.u(), Some(&s0.u_t()), 2, 1)
}
