use nstorus::auditor::{audit_gronwall, GronwallSpec};
use nstorus::dynamics::*;
use nstorus::estimates::EstimateParams;

fn spec(n: usize, dt: f64, stride: usize, amplitude: f64, mu: f64, nu: f64, t_end: f64) -> RunSpec {
    RunSpec {
        grid_n: n,
        dt,
        t_end,
        sample_stride: stride,
        seed: 11,
        dealias: true,
        nu_infinity_proxy: false,
        params: PhysicalParams { mu, nu },
        scenario: Scenario::PaperScaling {
            band_lo: 1,
            band_hi: 2,
            amplitude,
            gamma: 0.2,
            p: 4.0,
            c3: 1.0,
            c4: 1.0,
        },
        estimates: EstimateParams { mu, nu, ..EstimateParams::default() },
    }
}

fn main() {
    for (amplitude, mu, t_end) in [(20.0, 0.05, 0.5), (20.0, 0.1, 0.5)] {
        println!("amp={amplitude} mu={mu} t_end={t_end}");
        let mut f413 = Vec::new();
        let mut f51 = Vec::new();
        for (label, n, dt, stride) in [("base16", 16usize, 1e-3, 10usize), ("n24", 24, 1e-3, 10), ("dt/2", 16, 5e-4, 20)] {
            let traj = run_coupled(&spec(n, dt, stride, amplitude, mu, 200.0, t_end)).unwrap();
            assert_eq!(traj.outcome, RunOutcome::Completed, "{label} blew up");
            let r413 = audit_gronwall(&traj, &GronwallSpec::ineq_4_13(mu));
            let r51 = audit_gronwall(&traj, &GronwallSpec::ineq_5_1(mu));
            println!("  {label}: 4.13 c={:?} (t={:.2}); 5.1 c={:?} (t={:.2})",
                r413.fitted_constant, r413.worst_time, r51.fitted_constant, r51.worst_time);
            f413.push(r413.fitted_constant.unwrap_or(f64::NAN));
            f51.push(r51.fitted_constant.unwrap_or(f64::NAN));
        }
        for (name, f) in [("4.13", &f413), ("5.1", &f51)] {
            println!("  {name}: spread_n={:.3} spread_dt={:.3}",
                (f[1]-f[0]).abs()/f[0], (f[2]-f[0]).abs()/f[0]);
        }
    }
}
