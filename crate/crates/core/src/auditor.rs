//! Numerical verification of the chain's identities and inequalities along
//! simulated trajectories.
//!
//! Identities are checked at tight tolerances against spectrally evaluated
//! inner products. Inequalities whose absolute constants the theory leaves
//! unnamed are audited in "fitted" mode: the report carries the minimal
//! constant making the bound hold at every sample, and its stability under
//! sample coarsening, rather than a pass/fail against an arbitrary c.

use crate::dynamics::{convection, residual_difference_system, Trajectory};
use crate::error::{Error, Result};
use crate::estimates::{solve_a, EstimateParams};
use crate::fft::to_real;
use crate::field::{l2_inner, l2_norm_sq, SpectralField};
use crate::helmholtz::decompose;
use crate::ledger::LedgerRow;
use crate::ops::{curl, dealias, differentiate, inverse_laplacian, laplacian};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditStatus {
    IdentityPass,
    InequalityPass,
    Fitted,
    Violated,
    NotApplicable,
}

impl AuditStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            AuditStatus::IdentityPass => "identity-pass",
            AuditStatus::InequalityPass => "inequality-pass",
            AuditStatus::Fitted => "fitted",
            AuditStatus::Violated => "violated",
            AuditStatus::NotApplicable => "not-applicable",
        }
    }
}

/// Per-sample margin or residual trace.
#[derive(Debug, Clone, Copy)]
pub struct SampleMargin {
    pub t: f64,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub check_id: String,
    pub status: AuditStatus,
    pub max_relative_residual: f64,
    /// Present exactly when status is Fitted.
    pub fitted_constant: Option<f64>,
    /// Sample time of the worst margin.
    pub worst_time: f64,
    pub details: Vec<SampleMargin>,
    pub notes: Vec<String>,
}

impl AuditReport {
    fn new(check_id: &str, status: AuditStatus) -> AuditReport {
        AuditReport {
            check_id: check_id.into(),
            status,
            max_relative_residual: 0.0,
            fitted_constant: None,
            worst_time: 0.0,
            details: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn is_violated(&self) -> bool {
        self.status == AuditStatus::Violated
    }
}

/// Named scalar extracted from a ledger row.
pub struct Selector {
    pub name: &'static str,
    pub eval: Box<dyn Fn(&LedgerRow) -> f64 + Send + Sync>,
}

impl Selector {
    fn new(
        name: &'static str,
        eval: impl Fn(&LedgerRow) -> f64 + Send + Sync + 'static,
    ) -> Selector {
        Selector {
            name,
            eval: Box::new(eval),
        }
    }
}

/// A differential inequality d/dt(lhs) + dissipation ≤ c · rhs, with every
/// quantity resolved against the norm ledger.
pub struct GronwallSpec {
    pub inequality_id: &'static str,
    pub lhs: Selector,
    pub dissipation: Selector,
    pub rhs: Selector,
}

impl GronwallSpec {
    /// Gradient-potential energy inequality.
    pub fn ineq_3_3(mu: f64, nu: f64) -> GronwallSpec {
        GronwallSpec {
            inequality_id: "gronwall-3.3",
            lhs: Selector::new("l2_grad_phi^2", |r| r.l2_grad_phi.powi(2)),
            dissipation: Selector::new("mu |grad2 phi|^2 + nu |lap phi|^2", move |r| {
                mu * r.l2_grad2_phi.powi(2) + nu * r.l2_lap_phi.powi(2)
            }),
            rhs: Selector::new("(1/nu) |rot psi|_3^2 |v|_6^2", move |r| {
                r.l3_rot_psi.powi(2) * r.l6_v.powi(2) / nu
            }),
        }
    }

    /// Decay inequality for the Γ₁² pair quantity.
    pub fn ineq_4_13(mu: f64) -> GronwallSpec {
        GronwallSpec {
            inequality_id: "gronwall-4.13",
            lhs: Selector::new("Y^2", |r| r.y_sq),
            dissipation: Selector::new("mu Y^2", move |r| mu * r.y_sq),
            rhs: Selector::new("Y^2 (|v|_6^4 + |v_x|_6^4 + |v_t|_6^4 + |rot psi|_6^4)", |r| {
                r.y_sq
                    * (r.l6_v.powi(4)
                        + r.l6_grad_v.powi(4)
                        + r.l6_vt.powi(4)
                        + r.l6_rot_psi.powi(4))
            }),
        }
    }

    /// L₂ stability inequality for the difference field.
    pub fn ineq_5_1(mu: f64) -> GronwallSpec {
        GronwallSpec {
            inequality_id: "gronwall-5.1",
            lhs: Selector::new("|u|_2^2", |r| r.l2_u.powi(2)),
            dissipation: Selector::new("mu ||u||_1^2", move |r| mu * r.h1_u.powi(2)),
            rhs: Selector::new(
                "|u|^2 (|grad v|_6^2 + |grad phi|_6^4) + forcing",
                |r| {
                    r.l2_u.powi(2) * (r.l6_grad_v.powi(2) + r.l6_grad_phi.powi(4))
                        + r.h1_v.powi(2) * r.l6_grad_phi.powi(2)
                        + r.h1_grad_phi.powi(2)
                        + r.l2_grad_phi_t.powi(2)
                },
            ),
        }
    }

    /// H¹-level stability inequality for the difference field.
    pub fn ineq_5_7(mu: f64) -> GronwallSpec {
        GronwallSpec {
            inequality_id: "gronwall-5.7",
            lhs: Selector::new("|u_x|_2^2", |r| r.l2_grad_u.powi(2)),
            dissipation: Selector::new("mu ||grad u||_1^2", move |r| mu * r.h1_grad_u_sq),
            rhs: Selector::new("|u_x|^6 + ||u||_1^2 ||v||_2^2 + forcing", |r| {
                r.l2_grad_u.powi(6)
                    + r.h1_u.powi(2) * r.h2_v.powi(2)
                    + r.h2_v.powi(2) * r.h1_grad_phi.powi(2)
                    + r.l2_grad2_phi_t.powi(2)
                    + r.h2_grad_phi.powi(2)
                    + r.l6_grad_phi.powi(2) * r.l3_grad2_phi.powi(2)
                    + r.l2_grad2_phi.powi(2) * r.l3_grad2_phi.powi(2)
            }),
        }
    }
}

const IDENTITY_TOL: f64 = 1e-6;
const EPS: f64 = 1e-30;

/// Exact per-sample energy balance: ⟨v_t, v⟩ + μ|∇v|₂² + ν|div v|₂² = 0,
/// evaluated from the cached tendencies.
pub fn audit_energy(trajectory: &Trajectory) -> Result<AuditReport> {
    let mu = trajectory.params.mu;
    let nu = trajectory.params.nu;
    let mut report = AuditReport::new("energy-identity", AuditStatus::IdentityPass);
    for s in &trajectory.samples {
        let mut grad_sq = 0.0;
        for j in 0..3 {
            let mut alpha = [0usize; 3];
            alpha[j] = 1;
            grad_sq += l2_norm_sq(&differentiate(&s.v, alpha)?);
        }
        let div_sq = l2_norm_sq(&crate::ops::divergence(&s.v)?);
        let production = l2_inner(&s.v_t, &s.v);
        let dissipation = mu * grad_sq + nu * div_sq;
        let rel = (production + dissipation).abs() / (dissipation + EPS);
        if rel > report.max_relative_residual {
            report.max_relative_residual = rel;
            report.worst_time = s.t;
        }
        report.details.push(SampleMargin { t: s.t, value: rel });
    }
    if report.max_relative_residual > IDENTITY_TOL {
        report.status = AuditStatus::Violated;
    }
    Ok(report)
}

/// Integrated energy inequality: |v(t)|₂² + μ‖v‖²_{1,2,Ω^t} + ν|Δφ|²_{2,Ω^t}
/// ≤ c |v(0)|₂², checked with the configured generic constant.
pub fn audit_energy_inequality(trajectory: &Trajectory, c: f64) -> AuditReport {
    let rows = &trajectory.ledger.rows;
    let mut report = AuditReport::new("energy-inequality-2.1", AuditStatus::InequalityPass);
    if rows.is_empty() {
        report.status = AuditStatus::NotApplicable;
        return report;
    }
    let mu = trajectory.params.mu;
    let nu = trajectory.params.nu;
    let budget = c * rows[0].l2_v.powi(2);
    let mut int_h1 = 0.0;
    let mut int_lap = 0.0;
    let mut worst = f64::NEG_INFINITY;
    for (i, r) in rows.iter().enumerate() {
        if i > 0 {
            let p = &rows[i - 1];
            let dt = r.t - p.t;
            int_h1 += 0.5 * (p.h1_v.powi(2) + r.h1_v.powi(2)) * dt;
            int_lap += 0.5 * (p.l2_lap_phi.powi(2) + r.l2_lap_phi.powi(2)) * dt;
        }
        let lhs = r.l2_v.powi(2) + mu * int_h1 + nu * int_lap;
        let excess = (lhs - budget) / (budget + EPS);
        report.details.push(SampleMargin { t: r.t, value: excess });
        if excess > worst {
            worst = excess;
            report.worst_time = r.t;
        }
    }
    report.max_relative_residual = worst.max(0.0);
    if worst > IDENTITY_TOL {
        report.status = AuditStatus::Violated;
    }
    report
}

/// Pointwise decay envelope |v(t)|₂² ≤ e^{−μt} |v(0)|₂².
pub fn audit_decay(trajectory: &Trajectory) -> AuditReport {
    let rows = &trajectory.ledger.rows;
    let mut report = AuditReport::new("decay-4.20", AuditStatus::InequalityPass);
    if rows.is_empty() {
        report.status = AuditStatus::NotApplicable;
        return report;
    }
    let mu = trajectory.params.mu;
    let e0 = rows[0].l2_v.powi(2);
    let mut worst = f64::NEG_INFINITY;
    for r in rows {
        let bound = (-mu * r.t).exp() * e0;
        let excess = (r.l2_v.powi(2) - bound) / (e0 + EPS);
        report.details.push(SampleMargin { t: r.t, value: excess });
        if excess > worst {
            worst = excess;
            report.worst_time = r.t;
        }
    }
    report.max_relative_residual = worst.max(0.0);
    if worst > IDENTITY_TOL {
        report.status = AuditStatus::Violated;
    }
    report
}

/// Fitted envelope Y²(t) ≤ exp(−μt + cA⁴) Y²(0): smallest c, with A taken
/// from the ledger's running sup of X.
pub fn audit_decay_envelope(trajectory: &Trajectory) -> AuditReport {
    let rows = &trajectory.ledger.rows;
    let mut report = AuditReport::new("decay-4.15", AuditStatus::Fitted);
    let a = trajectory.ledger.sup_x();
    if rows.len() < 2 || rows[0].y_sq <= 0.0 || a <= 0.0 {
        report.status = AuditStatus::NotApplicable;
        return report;
    }
    let mu = trajectory.params.mu;
    let y0 = rows[0].y_sq;
    let a4 = a.powi(4);
    let mut c_fit: f64 = 0.0;
    for r in rows.iter().skip(1) {
        if r.y_sq <= 0.0 {
            continue;
        }
        let need = ((r.y_sq / y0).ln() + mu * r.t) / a4;
        if need > c_fit {
            c_fit = need;
            report.worst_time = r.t;
        }
        report.details.push(SampleMargin { t: r.t, value: need });
    }
    report.fitted_constant = Some(c_fit);
    report.notes.push(format!("A = {a:.6e} from the ledger sup of X"));
    report
}

/// Two-step contraction Y²(T) ≤ e^{−μT/2} Y²(0) at the final sample, with
/// the quartic smallness premise checked first.
pub fn audit_two_step(trajectory: &Trajectory, c_generic: f64) -> AuditReport {
    let rows = &trajectory.ledger.rows;
    let mut report = AuditReport::new("two-step-4.1", AuditStatus::InequalityPass);
    if rows.len() < 2 {
        report.status = AuditStatus::NotApplicable;
        return report;
    }
    let mu = trajectory.params.mu;
    let a = trajectory.ledger.sup_x();
    let horizon = rows.last().unwrap().t;
    if c_generic * a.powi(4) >= 0.5 * mu * horizon {
        report.status = AuditStatus::NotApplicable;
        report.notes.push(format!(
            "premise c A^4 < mu T / 2 fails: {:.6e} vs {:.6e}",
            c_generic * a.powi(4),
            0.5 * mu * horizon
        ));
        return report;
    }
    let y0 = rows[0].y_sq;
    let yt = rows.last().unwrap().y_sq;
    let bound = (-0.5 * mu * horizon).exp() * y0;
    let excess = (yt - bound) / (y0 + EPS);
    report.max_relative_residual = excess.max(0.0);
    report.worst_time = horizon;
    report.details.push(SampleMargin { t: horizon, value: excess });
    if excess > IDENTITY_TOL {
        report.status = AuditStatus::Violated;
    }
    report
}

/// Fit the smallest c with lhs' + dissipation ≤ c · rhs at all interior
/// samples; time derivatives by centered differences over the samples.
pub fn audit_gronwall(trajectory: &Trajectory, spec: &GronwallSpec) -> AuditReport {
    let rows = &trajectory.ledger.rows;
    let mut report = AuditReport::new(spec.inequality_id, AuditStatus::Fitted);
    if rows.len() < 3 {
        report.status = AuditStatus::NotApplicable;
        return report;
    }

    let fit = |step: usize| -> (f64, bool, f64, f64) {
        // returns (c_fit, rhs_active, worst_identity_residual, worst_time)
        let idx: Vec<usize> = (0..rows.len()).step_by(step).collect();
        let mut c_fit: f64 = 0.0;
        let mut rhs_active = false;
        let mut worst_identity: f64 = f64::NEG_INFINITY;
        let mut worst_time = 0.0;
        for w in idx.windows(3) {
            let (im, i0, ip) = (w[0], w[1], w[2]);
            let q_dot = ((spec.lhs.eval)(&rows[ip]) - (spec.lhs.eval)(&rows[im]))
                / (rows[ip].t - rows[im].t);
            let d = (spec.dissipation.eval)(&rows[i0]);
            let rho = (spec.rhs.eval)(&rows[i0]);
            let residual = q_dot + d;
            let scale = q_dot.abs() + d + rho + EPS;
            if rho > 1e-12 * scale {
                rhs_active = true;
                let need = residual / rho;
                if need > c_fit {
                    c_fit = need;
                    worst_time = rows[i0].t;
                }
            } else {
                let rel = residual / scale;
                if rel > worst_identity {
                    worst_identity = rel;
                    if worst_identity > IDENTITY_TOL {
                        worst_time = rows[i0].t;
                    }
                }
            }
        }
        (c_fit, rhs_active, worst_identity, worst_time)
    };

    let (c_fit, rhs_active, worst_identity, worst_time) = fit(1);
    report.worst_time = worst_time;
    if !rhs_active {
        // the right-hand side vanishes along this trajectory: pure decay
        report.max_relative_residual = worst_identity.max(0.0);
        report.status = if worst_identity > IDENTITY_TOL {
            AuditStatus::Violated
        } else {
            AuditStatus::IdentityPass
        };
        return report;
    }
    if worst_identity > IDENTITY_TOL {
        // somewhere the right side is zero but the left does not decay
        report.status = AuditStatus::Violated;
        report.max_relative_residual = worst_identity;
        return report;
    }
    report.fitted_constant = Some(c_fit);
    if rows.len() >= 5 {
        let (c_coarse, active, _, _) = fit(2);
        if active {
            report
                .notes
                .push(format!("fitted constant at doubled sample spacing: {c_coarse:.6e}"));
        }
    }
    report
}

/// Residual of the gradient-part heat equation, evaluated spectrally with
/// φ_t taken from the decomposed tendency.
pub fn audit_phi_heat(trajectory: &Trajectory) -> Result<AuditReport> {
    let mu = trajectory.params.mu;
    let nu = trajectory.params.nu;
    let mut report = AuditReport::new("phi-heat-2.18", AuditStatus::IdentityPass);
    for s in &trajectory.samples {
        let pots_t = decompose(&s.v_t)?;
        let mut lhs = pots_t.phi.clone();
        lhs.axpy(-(mu + nu), &laplacian(&s.pots.phi));

        let rhs = phi_heat_rhs(&s.v, &s.pots.phi, trajectory.dealias)?;
        let diff = lhs.sub(&rhs);
        let scale = l2_norm_sq(&lhs).sqrt() + l2_norm_sq(&rhs).sqrt() + EPS;
        let rel = l2_norm_sq(&diff).sqrt() / scale;
        report.details.push(SampleMargin { t: s.t, value: rel });
        if rel > report.max_relative_residual {
            report.max_relative_residual = rel;
            report.worst_time = s.t;
        }
    }
    if report.max_relative_residual > 1e-8 {
        report.status = AuditStatus::Violated;
    }
    Ok(report)
}

/// −Δ⁻¹ ∂i∂j(v_i v_j) + Δ⁻¹ ∂i∂j(φ_{x_i} v_j), products dealiased.
fn phi_heat_rhs(v: &SpectralField, phi: &SpectralField, dealias_on: bool) -> Result<SpectralField> {
    let grid = v.grid;
    let np = grid.point_count();
    let v_real = to_real(v)?;
    let grad_phi_real = to_real(&crate::ops::gradient(phi)?)?;

    let mut sum = SpectralField::zeros(grid, crate::field::Rank::Scalar);
    for i in 0..3 {
        for j in 0..3 {
            let mut prod = crate::field::RealField::zeros(grid, crate::field::Rank::Scalar);
            for idx in 0..np {
                prod.data[idx] = (grad_phi_real.component(i)[idx] - v_real.component(i)[idx])
                    * v_real.component(j)[idx];
            }
            let mut prod_hat = crate::fft::to_spectral(&prod)?;
            if dealias_on {
                prod_hat = dealias(&prod_hat);
            }
            let mut alpha = [0usize; 3];
            alpha[i] += 1;
            alpha[j] += 1;
            sum.axpy(1.0, &differentiate(&prod_hat, alpha)?);
        }
    }
    inverse_laplacian(&sum)
}

/// Identity form of the rotational-part balance: ½ d/dt |rot ψ|₂² +
/// μ|∇rot ψ|₂² = −∫ rot ψ·∇v·rot ψ, with the time derivative from the
/// decomposed tendency.
pub fn audit_rot_psi_balance(trajectory: &Trajectory) -> Result<AuditReport> {
    let mu = trajectory.params.mu;
    let mut report = AuditReport::new("gronwall-3.5", AuditStatus::IdentityPass);
    for s in &trajectory.samples {
        let rot_psi = curl(&s.pots.psi)?;
        let pots_t = decompose(&s.v_t)?;
        let rot_psi_t = curl(&pots_t.psi)?;
        let mut grad_sq = 0.0;
        for j in 0..3 {
            let mut alpha = [0usize; 3];
            alpha[j] = 1;
            grad_sq += l2_norm_sq(&differentiate(&rot_psi, alpha)?);
        }
        let transport = l2_inner(
            &convection(&rot_psi, &s.v, trajectory.dealias)?,
            &rot_psi,
        );
        let residual = l2_inner(&rot_psi_t, &rot_psi) + mu * grad_sq + transport;
        let scale = l2_inner(&rot_psi_t, &rot_psi).abs() + mu * grad_sq + transport.abs() + EPS;
        let rel = residual.abs() / scale;
        report.details.push(SampleMargin { t: s.t, value: rel });
        if rel > report.max_relative_residual {
            report.max_relative_residual = rel;
            report.worst_time = s.t;
        }
    }
    if report.max_relative_residual > IDENTITY_TOL {
        report.status = AuditStatus::Violated;
    }
    Ok(report)
}

/// Curl-residual of the difference system along the trajectory.
pub fn audit_residual(trajectory: &Trajectory) -> Result<AuditReport> {
    let mut report = AuditReport::new("residual-1.9", AuditStatus::IdentityPass);
    for s in &trajectory.samples {
        let (_, ratio) = residual_difference_system(s, &trajectory.params, trajectory.dealias)?;
        report.details.push(SampleMargin { t: s.t, value: ratio });
        if ratio > report.max_relative_residual {
            report.max_relative_residual = ratio;
            report.worst_time = s.t;
        }
    }
    if report.max_relative_residual > 1e-4 {
        report.status = AuditStatus::Violated;
    }
    Ok(report)
}

fn smallest_c_for_increasing_bound(
    target: f64,
    bound: impl Fn(f64) -> f64,
) -> Option<f64> {
    if bound(0.0) >= target {
        return Some(0.0);
    }
    let mut hi = 1.0;
    let mut tries = 0;
    while bound(hi) < target {
        hi *= 2.0;
        tries += 1;
        if tries > 200 || !bound(hi).is_finite() {
            return None;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bound(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Difference-field stability: fitted c in
/// ‖u(t)‖₁² ≤ [c(A²+1)A²/ν² + γ] exp(cA²), with A from the ledger.
pub fn audit_stability(trajectory: &Trajectory, gamma: f64) -> AuditReport {
    let rows = &trajectory.ledger.rows;
    let mut report = AuditReport::new("stability-5.18", AuditStatus::Fitted);
    if rows.is_empty() {
        report.status = AuditStatus::NotApplicable;
        return report;
    }
    let nu = trajectory.params.nu;
    let a = trajectory.ledger.sup_x();
    let mut sup_usq: f64 = 0.0;
    for r in rows {
        let usq = r.h1_u.powi(2);
        report.details.push(SampleMargin { t: r.t, value: usq });
        if usq > sup_usq {
            sup_usq = usq;
            report.worst_time = r.t;
        }
    }
    report
        .notes
        .push(format!("sup_t ||u||_1^2 / gamma = {:.6e}", sup_usq / (gamma + EPS)));
    let a2 = a * a;
    let bound = |c: f64| (c * (a2 + 1.0) * a2 / (nu * nu) + gamma) * (c * a2).exp();
    match smallest_c_for_increasing_bound(sup_usq, bound) {
        Some(c) => {
            report.fitted_constant = Some(c);
        }
        None => {
            report.status = AuditStatus::Violated;
            report.max_relative_residual = sup_usq / (gamma + EPS);
        }
    }
    report
}

/// Checkpoint recurrence ‖u(kT)‖₁² ≤ γ at multiples of the configured T.
pub fn audit_stability_checkpoints(
    trajectory: &Trajectory,
    gamma: f64,
    t_checkpoint: f64,
) -> AuditReport {
    let rows = &trajectory.ledger.rows;
    let mut report = AuditReport::new("stability-5.17", AuditStatus::InequalityPass);
    if rows.is_empty() || !(t_checkpoint > 0.0) {
        report.status = AuditStatus::NotApplicable;
        return report;
    }
    let t_end = rows.last().unwrap().t;
    let mut worst = f64::NEG_INFINITY;
    let mut k = 0usize;
    loop {
        let target = k as f64 * t_checkpoint;
        if target > t_end + 1e-12 {
            break;
        }
        // nearest sample to the checkpoint
        let r = rows
            .iter()
            .min_by(|x, y| {
                (x.t - target)
                    .abs()
                    .partial_cmp(&(y.t - target).abs())
                    .unwrap()
            })
            .unwrap();
        let excess = (r.h1_u.powi(2) - gamma) / (gamma + EPS);
        report.details.push(SampleMargin { t: r.t, value: excess });
        if excess > worst {
            worst = excess;
            report.worst_time = r.t;
        }
        k += 1;
    }
    report.max_relative_residual = worst.max(0.0);
    if worst > 0.0 {
        report.status = AuditStatus::Violated;
    }
    report
}

/// Exact triangle chain ‖V‖₁ ≤ ‖v‖₁ + ‖u‖₁ at every sample.
pub fn audit_final_bound_triangle(trajectory: &Trajectory) -> AuditReport {
    let rows = &trajectory.ledger.rows;
    let mut report = AuditReport::new("final-bound-triangle", AuditStatus::IdentityPass);
    for r in rows {
        let scale = r.h1_v + r.h1_u + EPS;
        let rel = (r.h1_big_v - r.h1_v - r.h1_u) / scale;
        report.details.push(SampleMargin { t: r.t, value: rel });
        if rel > report.max_relative_residual {
            report.max_relative_residual = rel;
            report.worst_time = r.t;
        }
    }
    if report.max_relative_residual > 1e-12 {
        report.status = AuditStatus::Violated;
    }
    report
}

/// Assembled final bound ‖V(t)‖₁² ≤ A² + [c(A²+1)A²/ν² + γ] exp(cA²) with
/// A preferably from the fixed-point solver (seeded with the measured data
/// norms), falling back to the measured sup of X.
pub fn audit_final_bound(trajectory: &Trajectory, est: &EstimateParams) -> AuditReport {
    let rows = &trajectory.ledger.rows;
    let mut report = AuditReport::new("final-bound-6.1", AuditStatus::Fitted);
    if rows.is_empty() {
        report.status = AuditStatus::NotApplicable;
        return report;
    }
    let ledger = &trajectory.ledger;
    let measured = EstimateParams {
        mu: trajectory.params.mu,
        nu: trajectory.params.nu,
        v0_l2: ledger.a1,
        v0_l6: ledger.v0_l6,
        vt0_l2: ledger.vt0_l2,
        phi0_lp: ledger.phi0_lp,
        x0: ledger.x0_initial,
        b0: ledger.b0,
        ..est.clone()
    };
    let fp = solve_a(&measured);
    let a = if fp.converged && fp.a.is_finite() {
        report
            .notes
            .push(format!("A = {:.6e} from the fixed-point solver", fp.a));
        fp.a
    } else {
        let sup = ledger.sup_x();
        report.notes.push(format!(
            "fixed-point solver unavailable ({:?}); A = {sup:.6e} from the ledger sup of X",
            fp.status
        ));
        sup
    };
    let gamma = est.gamma;
    let nu = trajectory.params.nu;
    let mut target: f64 = 0.0;
    for r in rows {
        let vsq = r.h1_big_v.powi(2);
        report.details.push(SampleMargin { t: r.t, value: vsq });
        if vsq > target {
            target = vsq;
            report.worst_time = r.t;
        }
    }
    let a2 = a * a;
    let bound = |c: f64| a2 + (c * (a2 + 1.0) * a2 / (nu * nu) + gamma) * (c * a2).exp();
    match smallest_c_for_increasing_bound(target, bound) {
        Some(c) => {
            report.fitted_constant = Some(c);
        }
        None => {
            report.status = AuditStatus::Violated;
            report.max_relative_residual = target / (a2 + gamma + EPS);
        }
    }
    report
}

/// Stable identifiers of every check the battery can emit.
pub fn battery_check_ids() -> &'static [&'static str] {
    &[
        "energy-identity",
        "energy-inequality-2.1",
        "decay-4.20",
        "decay-4.15",
        "two-step-4.1",
        "gronwall-3.3",
        "gronwall-3.5",
        "gronwall-4.13",
        "gronwall-5.1",
        "gronwall-5.7",
        "phi-heat-2.18",
        "residual-1.9",
        "stability-5.18",
        "stability-5.17",
        "final-bound-triangle",
        "final-bound-6.1",
    ]
}

/// Run the selected checks (all when `checks` is None) over one trajectory.
pub fn run_battery(
    trajectory: &Trajectory,
    est: &EstimateParams,
    checks: Option<&[String]>,
) -> Result<Vec<AuditReport>> {
    let wanted = |id: &str| -> bool {
        match checks {
            None => true,
            Some(list) => list.iter().any(|c| c == id),
        }
    };
    let mu = trajectory.params.mu;
    let nu = trajectory.params.nu;
    let mut out = Vec::new();
    if wanted("energy-identity") {
        out.push(audit_energy(trajectory)?);
    }
    if wanted("energy-inequality-2.1") {
        out.push(audit_energy_inequality(trajectory, est.c_generic));
    }
    if wanted("decay-4.20") {
        out.push(audit_decay(trajectory));
    }
    if wanted("decay-4.15") {
        out.push(audit_decay_envelope(trajectory));
    }
    if wanted("two-step-4.1") {
        out.push(audit_two_step(trajectory, est.c_generic));
    }
    if wanted("gronwall-3.3") {
        out.push(audit_gronwall(trajectory, &GronwallSpec::ineq_3_3(mu, nu)));
    }
    if wanted("gronwall-3.5") {
        out.push(audit_rot_psi_balance(trajectory)?);
    }
    if wanted("gronwall-4.13") {
        out.push(audit_gronwall(trajectory, &GronwallSpec::ineq_4_13(mu)));
    }
    if wanted("gronwall-5.1") {
        out.push(audit_gronwall(trajectory, &GronwallSpec::ineq_5_1(mu)));
    }
    if wanted("gronwall-5.7") {
        out.push(audit_gronwall(trajectory, &GronwallSpec::ineq_5_7(mu)));
    }
    if wanted("phi-heat-2.18") {
        out.push(audit_phi_heat(trajectory)?);
    }
    if wanted("residual-1.9") {
        out.push(audit_residual(trajectory)?);
    }
    if wanted("stability-5.18") {
        out.push(audit_stability(trajectory, est.gamma));
    }
    if wanted("stability-5.17") {
        out.push(audit_stability_checkpoints(trajectory, est.gamma, est.horizon));
    }
    if wanted("final-bound-triangle") {
        out.push(audit_final_bound_triangle(trajectory));
    }
    if wanted("final-bound-6.1") {
        out.push(audit_final_bound(trajectory, est));
    }
    Ok(out)
}

/// Validate user-selected check identifiers.
pub fn validate_check_ids(checks: &[String]) -> Result<()> {
    for c in checks {
        if !battery_check_ids().contains(&c.as_str()) {
            return Err(Error::Config {
                key: "checks".into(),
                reason: format!(
                    "unknown audit identifier `{c}`; known: {}",
                    battery_check_ids().join(", ")
                ),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{run_coupled, PhysicalParams, RunSpec, Scenario};
    use crate::ledger::NormLedger;

    fn tg_spec(nu: f64, t_end: f64) -> RunSpec {
        RunSpec {
            grid_n: 16,
            dt: 1e-3,
            t_end,
            sample_stride: 20,
            seed: 1,
            dealias: true,
            nu_infinity_proxy: false,
            params: PhysicalParams { mu: 1.0, nu },
            scenario: Scenario::TaylorGreen,
            estimates: EstimateParams {
                mu: 1.0,
                nu,
                ..EstimateParams::default()
            },
        }
    }

    #[test]
    fn zero_trajectory_passes_energy_identity() {
        let grid = crate::grid::Grid::new(16).unwrap();
        let params = PhysicalParams { mu: 1.0, nu: 10.0 };
        let zero = SpectralField::zeros(grid, crate::field::Rank::Vector3);
        let state = crate::dynamics::SimState::from_fields(
            0.0,
            zero.clone(),
            zero,
            &params,
            true,
            false,
        )
        .unwrap();
        let mut later = state.clone();
        later.t = 0.1;
        let est = EstimateParams::default();
        let mut ledger = NormLedger::new(&params, &est);
        ledger.update(&state).unwrap();
        ledger.update(&later).unwrap();
        let traj = Trajectory {
            grid,
            params,
            dt: 0.1,
            samples: vec![state, later],
            ledger,
            outcome: crate::dynamics::RunOutcome::Completed,
            dealias: true,
        };
        let report = audit_energy(&traj).unwrap();
        assert_eq!(report.status, AuditStatus::IdentityPass);
        assert_eq!(report.max_relative_residual, 0.0);
    }

    #[test]
    fn energy_identity_holds_on_short_vortex_run() {
        let traj = run_coupled(&tg_spec(100.0, 0.1)).unwrap();
        let report = audit_energy(&traj).unwrap();
        assert_eq!(report.status, AuditStatus::IdentityPass);
        assert!(report.max_relative_residual <= 1e-10);
    }

    #[test]
    fn perturbed_sample_breaks_energy_identity() {
        let mut traj = run_coupled(&tg_spec(100.0, 0.05)).unwrap();
        let idx = traj.samples.len() / 2;
        let perturbed = traj.samples[idx].v.scaled(1.01);
        traj.samples[idx].v = perturbed;
        let report = audit_energy(&traj).unwrap();
        assert_eq!(report.status, AuditStatus::Violated);
    }

    #[test]
    fn decay_envelope_holds_on_vortex_run() {
        let traj = run_coupled(&tg_spec(100.0, 0.2)).unwrap();
        let report = audit_decay(&traj);
        assert_eq!(report.status, AuditStatus::InequalityPass);
    }

    #[test]
    fn synthetic_pure_decay_fits_zero_constant() {
        // Y(t) = Y(0) e^{-mu t} with vanishing right-hand-side factors
        let params = PhysicalParams { mu: 1.0, nu: 10.0 };
        let est = EstimateParams::default();
        let mut rows = Vec::new();
        for i in 0..=20 {
            let t = i as f64 * 0.05;
            let mut row = crate::ledger::LedgerRow {
                t,
                y_sq: (-t).exp(),
                ..Default::default()
            };
            row.l6_v = 0.0;
            rows.push(row);
        }
        let ledger = NormLedger::from_rows(&params, &est, rows);
        let traj = Trajectory {
            grid: crate::grid::Grid::new(16).unwrap(),
            params,
            dt: 0.05,
            samples: Vec::new(),
            ledger,
            outcome: crate::dynamics::RunOutcome::Completed,
            dealias: true,
        };
        let report = audit_gronwall(&traj, &GronwallSpec::ineq_4_13(1.0));
        assert_eq!(report.status, AuditStatus::IdentityPass);
        assert!(report.max_relative_residual <= 1e-2);
    }

    #[test]
    fn gronwall_3_3_gradient_only_flow_is_identity_level() {
        // pure-gradient initial data stays a pure gradient under the
        // regularized flow (no convection), so the RHS vanishes throughout
        // and the left side is plain decay; gentle viscosities keep the
        // sampled centered differences resolved
        let grid = crate::grid::Grid::new(16).unwrap();
        let params = PhysicalParams { mu: 1.0, nu: 1.0 };
        let est = EstimateParams {
            mu: 1.0,
            nu: 1.0,
            ..EstimateParams::default()
        };
        let chi = crate::fft::to_spectral(&crate::field::RealField::scalar_from_fn(
            grid,
            |x, y, _| 0.1 * x.sin() + 0.05 * (2.0 * y).cos(),
        ))
        .unwrap();
        let v0 = crate::ops::gradient(&crate::ops::zero_mean(&chi)).unwrap();
        let big_v0 = SpectralField::zeros(grid, crate::field::Rank::Vector3);
        let mut state =
            crate::dynamics::SimState::from_fields(0.0, v0, big_v0, &params, true, false)
                .unwrap();
        let mut ledger = NormLedger::new(&params, &est);
        ledger.update(&state).unwrap();
        for i in 1..=100 {
            state = crate::dynamics::step(&state, 1e-3, &params).unwrap();
            if i % 5 == 0 {
                ledger.update(&state).unwrap();
            }
        }
        let traj = Trajectory {
            grid,
            params,
            dt: 1e-3,
            samples: Vec::new(),
            ledger,
            outcome: crate::dynamics::RunOutcome::Completed,
            dealias: true,
        };
        let report = audit_gronwall(&traj, &GronwallSpec::ineq_3_3(1.0, 1.0));
        assert_eq!(
            report.status,
            AuditStatus::IdentityPass,
            "status {:?} residual {:.3e}",
            report.status,
            report.max_relative_residual
        );
    }

    #[test]
    fn phi_heat_residual_small_on_vortex_run() {
        let traj = run_coupled(&tg_spec(1e3, 0.05)).unwrap();
        let report = audit_phi_heat(&traj).unwrap();
        assert_eq!(
            report.status,
            AuditStatus::IdentityPass,
            "residual {:.3e}",
            report.max_relative_residual
        );
        assert!(report.max_relative_residual <= 1e-4);
    }

    #[test]
    fn rot_psi_balance_is_identity_level() {
        let traj = run_coupled(&tg_spec(100.0, 0.05)).unwrap();
        let report = audit_rot_psi_balance(&traj).unwrap();
        assert_eq!(report.status, AuditStatus::IdentityPass);
        assert!(report.max_relative_residual <= 1e-10);
    }

    #[test]
    fn triangle_chain_is_exact() {
        let traj = run_coupled(&tg_spec(100.0, 0.05)).unwrap();
        let report = audit_final_bound_triangle(&traj);
        assert_eq!(report.status, AuditStatus::IdentityPass);
        // u = 0 at t = 0 gives equality there
        assert!(report.details[0].value.abs() <= 1e-12);
    }

    #[test]
    fn stability_zero_difference_fits_zero() {
        let traj = run_coupled(&tg_spec(1e3, 0.05)).unwrap();
        let report = audit_stability(&traj, 0.1);
        assert_eq!(report.status, AuditStatus::Fitted);
        // u stays tiny at large nu, within the gamma budget alone
        assert!(report.fitted_constant.unwrap() <= 1e-6);
    }

    #[test]
    fn unknown_check_identifier_rejected() {
        assert!(validate_check_ids(&["energy-identity".into()]).is_ok());
        assert!(validate_check_ids(&["no-such-check".into()]).is_err());
    }
}
