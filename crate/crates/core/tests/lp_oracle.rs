mod common;

use ammonia_core::lp::{self, LpStatus};
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn simplex_matches_basis_enumeration_on_random_lps() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    for case in 0..200 {
        let lp_prob = common::random_feasible_lp(&mut rng);
        let sol = lp::solve(&lp_prob, lp::DEFAULT_TOL).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal, "case {case}: {lp_prob:?}");
        let expected = common::enumerate_optimum(&lp_prob).expect("feasible by construction");
        let tol = 1e-8 * expected.abs().max(1.0);
        assert!(
            (sol.objective - expected).abs() <= tol,
            "case {case}: simplex {} vs enumeration {expected}",
            sol.objective
        );
        assert!(lp_prob.max_violation(&sol.x) <= 1e-8, "case {case}: infeasible point");
    }
}

#[test]
fn enumeration_oracle_sanity() {
    // min -x - y  s.t. x + y <= 4, x <= 3, y <= 2  -> -4
    let lp_prob = lp::LinearProgram::new(vec![-1.0, -1.0])
        .leq(vec![1.0, 1.0], 4.0)
        .leq(vec![1.0, 0.0], 3.0)
        .leq(vec![0.0, 1.0], 2.0);
    assert!((common::enumerate_optimum(&lp_prob).unwrap() + 4.0).abs() < 1e-12);
}
