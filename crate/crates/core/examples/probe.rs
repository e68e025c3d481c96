use nstorus::estimates::*;

fn main() {
    // spec op-example data (0.1 / 0.01)
    for nu in [1.0, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6] {
        let params = EstimateParams {
            nu,
            v0_l2: 0.1, v0_l6: 0.1, vt0_l2: 0.1, x0: 0.01, b0: 0.01,
            phi0_lp: 1.0 / nu.powf(0.75),
            ..EstimateParams::default()
        };
        let r = solve_a(&params);
        println!("data=0.1 nu={:9.0} A={:.12e} it={} mod={:.4} conv={} status={:?}", nu, r.a, r.iterations, r.contraction_modulus, r.converged, r.status);
    }
    println!();
    // documented default data (0.2 / 0.02)
    for nu in [1.0, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6] {
        let params = EstimateParams {
            nu,
            phi0_lp: 2.0 / (2.0 * nu.powf(0.75)),
            ..EstimateParams::default()
        };
        let r = solve_a(&params);
        println!("default nu={:9.0} A={:.12e} it={} mod={:.4} conv={} status={:?} detail={:?}", nu, r.a, r.iterations, r.contraction_modulus, r.converged, r.status, r.detail);
    }
}
