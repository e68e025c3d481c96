//! The scalar constant chain as executable formulas: c̄, φ₁, D₁(X), D₂(X),
//! the composite bound, the fixed-point equation for the a-priori constant A
//! solved by successive approximations, and the admissibility predicates.
//!
//! Every unnamed absolute constant of the chain collapses to the single
//! configurable `c_generic` (default 1).

use crate::error::{Error, Result};

/// Which mixed-norm exponent feeds φ₁. The two forms appear in different
/// places of the chain's derivation; `POverPMinus1` is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixedExponent {
    POverPMinus1,
    POverPMinus2,
}

/// Inputs of the constant chain: physical coefficients, exponents, named
/// constants, smallness parameters, and seed data norms.
#[derive(Debug, Clone)]
pub struct EstimateParams {
    pub mu: f64,
    pub nu: f64,
    /// Integrability exponent, strictly inside (3, 6).
    pub p: f64,
    /// Horizon exponent, must satisfy beta < 2(1 − κ).
    pub beta: f64,
    /// Two-step horizon T.
    pub horizon: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// The chain's single generic absolute constant.
    pub c_generic: f64,
    /// Poincaré constant (1 on the unscaled 2π torus).
    pub c_poincare: f64,
    /// Embedding constant c₀ of the L_{3r} estimate.
    pub c0_embed: f64,
    /// Smallness of the initial difference field in H¹.
    pub gamma: f64,
    /// Threshold value γ* of the stability lemma.
    pub gamma_star: f64,
    /// |v(0)|₂ (the quantity A₁).
    pub v0_l2: f64,
    pub v0_l6: f64,
    pub vt0_l2: f64,
    /// |φ(0)|_p seed value.
    pub phi0_lp: f64,
    /// X(0).
    pub x0: f64,
    /// B(0).
    pub b0: f64,
    /// Time frozen inside D₁(X); defaults to ν^{1−κ}.
    pub t_freeze: Option<f64>,
    pub phi1_exponent: MixedExponent,
    /// Use |v(0)|₂ instead of |v(0)|₆ in the fixed-point lower bound.
    pub lower_bound_l2_variant: bool,
}

impl Default for EstimateParams {
    fn default() -> Self {
        let nu = 100.0;
        let (c3, c4) = (1.0, 1.0);
        let kappa = 1.5 - 3.0 / 4.0;
        EstimateParams {
            mu: 1.0,
            nu,
            p: 4.0,
            beta: 1.0 - kappa,
            horizon: 10.0,
            c1: 1.0,
            c2: 1.0,
            c3,
            c4,
            c_generic: 1.0,
            c_poincare: 1.0,
            c0_embed: 1.0,
            gamma: 0.1,
            gamma_star: 0.1,
            v0_l2: 0.2,
            v0_l6: 0.2,
            vt0_l2: 0.2,
            phi0_lp: (c3 + c4) / (2.0 * nu.powf(kappa)),
            x0: 0.02,
            b0: 0.02,
            t_freeze: None,
            phi1_exponent: MixedExponent::POverPMinus1,
            lower_bound_l2_variant: false,
        }
    }
}

impl EstimateParams {
    /// κ = 3/2 − 3/p ∈ (1/2, 1).
    pub fn kappa(&self) -> f64 {
        1.5 - 3.0 / self.p
    }

    /// The (2.25)-style midpoint (c₃ + c₄)/(2 ν^κ), used as the default seed
    /// for |φ(0)|_p; degenerates to the ν = 1 value when ν = 0.
    pub fn default_phi0_lp(&self) -> f64 {
        let scale = if self.nu > 0.0 {
            self.nu.powf(self.kappa())
        } else {
            1.0
        };
        (self.c3 + self.c4) / (2.0 * scale)
    }

    /// Mixed-norm Lp exponent used inside φ₁.
    pub fn phi1_lp(&self) -> f64 {
        match self.phi1_exponent {
            MixedExponent::POverPMinus1 => 2.0 * self.p / (self.p - 1.0),
            MixedExponent::POverPMinus2 => 2.0 * self.p / (self.p - 2.0),
        }
    }

    /// Time frozen inside D₁(X).
    pub fn frozen_time(&self) -> f64 {
        self.t_freeze.unwrap_or_else(|| self.nu.powf(1.0 - self.kappa()))
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |key: &str, reason: String| -> Result<()> {
            Err(Error::Config {
                key: key.into(),
                reason,
            })
        };
        if !(self.mu > 0.0) {
            return fail("mu", format!("viscosity must be positive, got {}", self.mu));
        }
        if !(self.nu >= 0.0) {
            return fail("nu", format!("bulk viscosity must be nonnegative, got {}", self.nu));
        }
        if !(self.p > 3.0 && self.p < 6.0) {
            return fail("p", format!("p must lie strictly inside (3, 6), got {}", self.p));
        }
        let kappa = self.kappa();
        if !(self.beta < 2.0 * (1.0 - kappa)) {
            return fail(
                "beta",
                format!(
                    "beta must satisfy beta < 2(1 - kappa) = {}, got {}",
                    2.0 * (1.0 - kappa),
                    self.beta
                ),
            );
        }
        if !(self.horizon > 0.0) {
            return fail("horizon_t", "horizon must be positive".into());
        }
        for (key, v) in [
            ("c1", self.c1),
            ("c2", self.c2),
            ("c3", self.c3),
            ("c4", self.c4),
            ("c_generic", self.c_generic),
            ("c_poincare", self.c_poincare),
            ("c0_embed", self.c0_embed),
        ] {
            if !(v > 0.0) {
                return fail(key, format!("constant must be positive, got {v}"));
            }
        }
        for (key, v) in [
            ("gamma", self.gamma),
            ("gamma_star", self.gamma_star),
            ("v0_l2", self.v0_l2),
            ("v0_l6", self.v0_l6),
            ("vt0_l2", self.vt0_l2),
            ("phi0_lp", self.phi0_lp),
            ("x0", self.x0),
            ("b0", self.b0),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return fail(key, format!("must be finite and nonnegative, got {v}"));
            }
        }
        Ok(())
    }
}

/// The ν-free factor of the L_r div-term coefficient:
/// (r−2) [(r−2)/((r−1)μ)]^{r−1} r^{r/2−2} / c₀^{r/2−1}.
pub fn cbar(r: f64, mu: f64, c0: f64) -> Result<f64> {
    if !(r > 2.0) {
        return Err(Error::Usage(format!("cbar requires r > 2, got {r}")));
    }
    if !(mu > 0.0) || !(c0 > 0.0) {
        return Err(Error::Usage("cbar requires mu > 0 and c0 > 0".into()));
    }
    Ok((r - 2.0) * ((r - 2.0) / ((r - 1.0) * mu)).powf(r - 1.0) * r.powf(0.5 * r - 2.0)
        / c0.powf(0.5 * r - 1.0))
}

/// φ₁ = exp[c M^{2/(1−κ)} / ((μ+ν)^κ (|φ(0)|_p − (√t/ν) Ψ))^{1/(1−κ)}],
/// with M the configured mixed space-time norm of v.
pub fn eval_phi1(params: &EstimateParams, psi: f64, t: f64, v_mixed_norm: f64) -> Result<f64> {
    let kappa = params.kappa();
    let base = params.phi0_lp - (t.sqrt() / params.nu) * psi;
    if !(base > 0.0) {
        return Err(Error::Regime(format!(
            "|phi(0)|_p - (sqrt(t)/nu) Psi = {base:.6e} is not positive"
        )));
    }
    let denom = ((params.mu + params.nu).powf(kappa) * base).powf(1.0 / (1.0 - kappa));
    Ok((params.c_generic * v_mixed_norm.powf(2.0 / (1.0 - kappa)) / denom).exp())
}

/// D₁ assembled from its parts (shared by the scalar chain and the ledger).
/// When Ψ = 0 the φ₁ factor multiplies zero and is skipped, so ν = ∞ data
/// degenerates cleanly to c₁(|v(0)|₆ + A₁).
pub fn d1_from_parts(
    c1: f64,
    psi: f64,
    phi1: f64,
    nu: f64,
    kappa: f64,
    v0_l6: f64,
    a1: f64,
) -> f64 {
    let tail = c1 * (v0_l6 + a1);
    if psi <= 0.0 {
        return tail;
    }
    c1 * psi.powf(2.0 / 3.0)
        * phi1
        * (psi.powf(1.0 / 3.0) / nu.powf(1.0 / 3.0) + 1.0 / nu.powf((kappa - 0.5) / 3.0))
        + tail
}

/// D₂ = |v_t(0)|₂ exp(D₁² A₁² / 2), the derived-estimate form with the
/// halved exponent.
pub fn d2_from_parts(vt0_l2: f64, d1: f64, a1: f64) -> f64 {
    vt0_l2 * (0.5 * d1 * d1 * a1 * a1).exp()
}

/// D₁(X): the self-referential form with |φ(0)|_p replaced through its lower
/// bound c₃/ν^κ and time frozen at `frozen_time`.
pub fn d1_of_x(params: &EstimateParams, x: f64) -> Result<f64> {
    let kappa = params.kappa();
    let t = params.frozen_time();
    let base = params.c3 - (t.sqrt() / params.nu.powf(1.0 - kappa)) * x;
    if !(base > 0.0) {
        return Err(Error::Regime(format!(
            "c3 - sqrt(t)/nu^(1-kappa) X = {base:.6e} is not positive at X = {x:.6e}"
        )));
    }
    let phi1 = (params.c_generic * x.powf(2.0 / (1.0 - kappa))
        / base.powf(1.0 / (1.0 - kappa)))
    .exp();
    let tail = params.c1 * params.v0_l6 + params.v0_l2;
    if x <= 0.0 {
        return Ok(tail);
    }
    Ok(params.c1
        * phi1
        * (x / params.nu.powf(1.0 / 3.0)
            + x.powf(2.0 / 3.0) / params.nu.powf((kappa - 0.5) / 3.0))
        + tail)
}

pub fn d2_of_x(params: &EstimateParams, x: f64) -> Result<f64> {
    Ok(d2_from_parts(params.vt0_l2, d1_of_x(params, x)?, params.v0_l2))
}

/// φ²(D₁, D₂, Ψ/ν, χ₀/√ν, B(0)): the composite bound's six term groups,
/// multiplied by the generic constant.
pub fn phi_sq(
    params: &EstimateParams,
    d1: f64,
    d2: f64,
    psi_over_nu: f64,
    chi0_over_sqrt_nu: f64,
    b0: f64,
) -> f64 {
    let a1 = params.v0_l2;
    let s = psi_over_nu * psi_over_nu;
    let q = chi0_over_sqrt_nu * chi0_over_sqrt_nu;
    let a1sq = a1 * a1;
    let d1sq = d1 * d1;
    let d2sq = d2 * d2;
    let d1p4 = d1sq * d1sq;
    let d1p8 = d1p4 * d1p4;
    let d1p16 = d1p8 * d1p8;
    let t1 = (a1sq + s) * (d1sq + q).powi(4);
    let t2 = (1.0 + d1p4 + q * q) * (d1sq + q) * (d2sq + s);
    let t3 = a1sq * (1.0 + d2sq + d2sq * d2sq + q) * (d1p4 + d1p8 + q * q);
    let t4 = a1sq.powi(4) * (a1sq + q) * (d1p4 + d1p8 + q * q).powi(4);
    let t5 = (a1sq + q) * (1.0 + d1p16) * b0.powi(4);
    let t6 = (1.0 + d1p4) * (d2sq + d2sq * d2sq + q + d1p4 + q * q) * b0;
    params.c_generic * (t1 + t2 + t3 + t4 + t5 + t6)
}

/// One application of the fixed-point map:
/// X ↦ φ(D₁(X), D₂(X), X/ν, X/√ν, B(0)) + X(0).
pub fn eval_bound_chain(params: &EstimateParams, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Usage(format!("eval_bound_chain requires X >= 0, got {x}")));
    }
    let d1 = d1_of_x(params, x)?;
    let d2 = d2_of_x(params, x)?;
    let sqrt_nu = params.nu.sqrt();
    Ok(phi_sq(params, d1, d2, x / params.nu, x / sqrt_nu, params.b0).sqrt() + params.x0)
}

/// The ν = ∞ value of the map, which is the strict lower bound every
/// admissible A must exceed.
pub fn a_lower_bound(params: &EstimateParams) -> f64 {
    let seed = if params.lower_bound_l2_variant {
        params.v0_l2
    } else {
        params.v0_l6
    };
    let d1_inf = params.c1 * seed + params.v0_l2;
    let d2_inf = d2_from_parts(params.vt0_l2, d1_inf, params.v0_l2);
    phi_sq(params, d1_inf, d2_inf, 0.0, 0.0, params.b0).sqrt() + params.x0
}

/// Terminal state of the successive-approximation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointStatus {
    Converged,
    NonContraction,
    RegimeViolation,
    NonFinite,
}

#[derive(Debug, Clone)]
pub struct FixedPointResult {
    /// Last iterate (the solution when converged).
    pub a: f64,
    pub iterations: usize,
    /// Empirical Lipschitz estimate of the map near the final iterate.
    pub contraction_modulus: f64,
    pub converged: bool,
    /// Whether the final A clears the ν = ∞ lower bound.
    pub lower_bound_ok: bool,
    /// True when the 0.5-averaged relaxation was engaged.
    pub damped: bool,
    pub status: FixedPointStatus,
    pub detail: Option<String>,
}

const MAX_FIXED_POINT_ITER: usize = 200;
const FIXED_POINT_TOL: f64 = 1e-10;

fn modulus_by_quotient(params: &EstimateParams, a: f64, fallback: f64) -> f64 {
    let h = 1e-6 * (1.0 + a.abs());
    match (eval_bound_chain(params, a), eval_bound_chain(params, a + h)) {
        (Ok(f0), Ok(f1)) if f0.is_finite() && f1.is_finite() => ((f1 - f0) / h).abs(),
        _ => fallback,
    }
}

/// Solve A = φ(D₁(A), D₂(A), A/ν, A/√ν, B(0)) + X(0) by successive
/// approximations starting from the lower bound. Non-convergence and regime
/// violations are reported in the result, never thrown.
pub fn solve_a(params: &EstimateParams) -> FixedPointResult {
    let a0 = a_lower_bound(params);
    let mut a = a0;
    let mut damped = false;
    let mut prev_delta: Option<f64> = None;
    let mut flips = 0usize;
    let mut last_ratio = f64::NAN;

    for it in 1..=MAX_FIXED_POINT_ITER {
        let fa = match eval_bound_chain(params, a) {
            Ok(v) if v.is_finite() => v,
            Ok(_) => {
                return FixedPointResult {
                    a,
                    iterations: it,
                    contraction_modulus: f64::INFINITY,
                    converged: false,
                    lower_bound_ok: a >= a0,
                    damped,
                    status: FixedPointStatus::NonFinite,
                    detail: Some(format!("map overflowed at iterate A = {a:.6e}")),
                }
            }
            Err(e) => {
                return FixedPointResult {
                    a,
                    iterations: it,
                    contraction_modulus: f64::INFINITY,
                    converged: false,
                    lower_bound_ok: a >= a0,
                    damped,
                    status: FixedPointStatus::RegimeViolation,
                    detail: Some(format!("{e} (offending iterate A = {a:.6e})")),
                }
            }
        };
        let next = if damped { 0.5 * (a + fa) } else { fa };
        let delta = next - a;
        if let Some(pd) = prev_delta {
            if pd * delta < 0.0 {
                flips += 1;
                if flips >= 2 && !damped {
                    damped = true;
                }
            }
            if pd.abs() > 0.0 {
                last_ratio = (delta / pd).abs();
            }
        }
        prev_delta = Some(delta);

        if delta.abs() <= FIXED_POINT_TOL * (1.0 + next.abs()) {
            let modulus = modulus_by_quotient(params, next, last_ratio);
            let converged = modulus < 1.0;
            return FixedPointResult {
                a: next,
                iterations: it,
                contraction_modulus: modulus,
                converged,
                lower_bound_ok: next >= a0 - 1e-12 * (1.0 + a0),
                damped,
                status: if converged {
                    FixedPointStatus::Converged
                } else {
                    FixedPointStatus::NonContraction
                },
                detail: None,
            };
        }
        a = next;
    }

    let modulus = modulus_by_quotient(params, a, last_ratio);
    FixedPointResult {
        a,
        iterations: MAX_FIXED_POINT_ITER,
        contraction_modulus: modulus,
        converged: false,
        lower_bound_ok: a >= a0 - 1e-12 * (1.0 + a0),
        damped,
        status: FixedPointStatus::NonContraction,
        detail: Some("no convergence within the iteration budget".into()),
    }
}

/// One admissibility predicate with its margin (positive = satisfied slack).
#[derive(Debug, Clone)]
pub struct AdmissibilityCondition {
    pub id: &'static str,
    pub description: String,
    pub pass: bool,
    pub margin: f64,
    /// Informational variants of conditions stated inconsistently across the
    /// chain; excluded from the overall verdict.
    pub informational: bool,
}

#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub conditions: Vec<AdmissibilityCondition>,
    /// Conjunction of all non-informational conditions.
    pub overall: bool,
}

/// Evaluate every smallness/regime predicate of the chain for a given A.
///
/// The exponent conflicts (A⁴ with μT/2, A⁴ with μT, A² with μT/2; γ*⁴
/// against γ*²) are all computed; the quartic μT/2 and γ*⁴ forms are the
/// defaults, the others reported as informational.
pub fn check_admissibility(params: &EstimateParams, a: f64) -> AdmissibilityReport {
    let c = params.c_generic;
    let mu = params.mu;
    let nu = params.nu;
    let t_cap = params.horizon;
    let kappa = params.kappa();
    let mut conditions = Vec::new();

    let mut push = |id: &'static str, description: String, margin: f64, informational: bool| {
        conditions.push(AdmissibilityCondition {
            id,
            description,
            pass: margin >= 0.0,
            margin,
            informational,
        });
    };

    // (2.24) with Psi <- A, evaluated at the horizon where it is tightest
    let base = params.phi0_lp - (t_cap.sqrt() / nu) * a;
    let lhs_224 = (mu + nu).powf(kappa) * base;
    push(
        "regime-2.24",
        format!("(mu+nu)^kappa (|phi(0)|_p - sqrt(T)/nu A) >= c2: {lhs_224:.6e} vs {:.6e}", params.c2),
        lhs_224 - params.c2,
        false,
    );

    let lo = params.c3 / nu.powf(kappa);
    let hi = params.c4 / nu.powf(kappa);
    push(
        "scaling-2.25-lower",
        format!("|phi(0)|_p >= c3/nu^kappa: {:.6e} vs {lo:.6e}", params.phi0_lp),
        params.phi0_lp - lo,
        false,
    );
    push(
        "scaling-2.25-upper",
        format!("|phi(0)|_p <= c4/nu^kappa: {:.6e} vs {hi:.6e}", params.phi0_lp),
        hi - params.phi0_lp,
        false,
    );

    let a2 = a * a;
    let a4 = a2 * a2;
    push(
        "two-step-quartic",
        format!("c A^4 < mu T / 2: {:.6e} vs {:.6e}", c * a4, 0.5 * mu * t_cap),
        0.5 * mu * t_cap - c * a4,
        false,
    );
    push(
        "two-step-quartic-relaxed",
        format!("c A^4 <= mu T: {:.6e} vs {:.6e}", c * a4, mu * t_cap),
        mu * t_cap - c * a4,
        true,
    );
    push(
        "two-step-quadratic",
        format!("c A^2 <= mu T / 2: {:.6e} vs {:.6e}", c * a2, 0.5 * mu * t_cap),
        0.5 * mu * t_cap - c * a2,
        true,
    );

    let nu_beta = nu.powf(params.beta);
    push(
        "horizon-window",
        format!("T < nu^beta: {t_cap:.6e} vs {nu_beta:.6e}"),
        nu_beta - t_cap - f64::EPSILON * nu_beta.abs(),
        false,
    );
    push(
        "beta-window",
        format!("beta < 2(1 - kappa): {} vs {}", params.beta, 2.0 * (1.0 - kappa)),
        2.0 * (1.0 - kappa) - params.beta - f64::EPSILON,
        false,
    );

    let gs = params.gamma_star;
    let damping = c * (2.0 * c * a2).exp();
    push(
        "smallness-quartic",
        format!(
            "mu - c exp(2 c A^2) gamma*^4 >= mu/2: margin of {:.6e} against {:.6e}",
            damping * gs.powi(4),
            0.5 * mu
        ),
        0.5 * mu - damping * gs.powi(4),
        false,
    );
    push(
        "smallness-quadratic",
        format!(
            "mu - c exp(2 c A^2) gamma*^2 >= mu/2: margin of {:.6e} against {:.6e}",
            damping * gs * gs,
            0.5 * mu
        ),
        0.5 * mu - damping * gs * gs,
        true,
    );

    let overall = conditions
        .iter()
        .filter(|c| !c.informational)
        .all(|c| c.pass);
    AdmissibilityReport { conditions, overall }
}
