use nstorus::dynamics::*;
use nstorus::estimates::EstimateParams;
use std::time::Instant;

fn main() {
    for n in [16usize, 24] {
        let spec = RunSpec {
            grid_n: n,
            dt: 1e-3,
            t_end: 0.1,
            sample_stride: 20,
            seed: 1,
            dealias: true,
            nu_infinity_proxy: false,
            params: PhysicalParams { mu: 1.0, nu: 100.0 },
            scenario: Scenario::TaylorGreen,
            estimates: EstimateParams::default(),
        };
        let t0 = Instant::now();
        let traj = run_coupled(&spec).unwrap();
        let dt = t0.elapsed().as_secs_f64();
        println!(
            "n={n}: 100 steps + {} ledger samples in {dt:.3}s ({:.2} ms/step)",
            traj.ledger.rows.len(),
            dt * 10.0
        );
    }
}
