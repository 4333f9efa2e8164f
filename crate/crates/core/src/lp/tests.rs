use super::oracle::{enumerate_solve, random_lp};
use super::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn solve_ok(lp: &LinearProgram) -> LpSolution {
    solve(lp).expect("solver error")
}

#[test]
fn dominant_vertex() {
    // min -2x - y  s.t. x + y <= 1, x,y >= 0  ->  -2 at (1, 0)
    let mut lp = LinearProgram::minimize(2);
    lp.set_objective(vec![-2.0, -1.0]);
    lp.add_row(vec![1.0, 1.0], Relation::Le, 1.0);
    let sol = solve_ok(&lp);
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective() - -2.0).abs() < OBJ_TOL);
    assert!((sol.point()[0] - 1.0).abs() < FEAS_TOL);
    assert!(sol.point()[1].abs() < FEAS_TOL);
}

#[test]
fn contradiction_is_infeasible() {
    let mut lp = LinearProgram::minimize(1);
    lp.add_row(vec![1.0], Relation::Ge, 1.0);
    lp.add_row(vec![1.0], Relation::Le, 0.0);
    let sol = solve_ok(&lp);
    assert_eq!(sol.status, LpStatus::Infeasible);
    assert!(sol.point.is_none());
}

#[test]
fn ray_is_unbounded() {
    // min -x  s.t. x >= 0 with no upper bound
    let mut lp = LinearProgram::minimize(1);
    lp.set_objective(vec![-1.0]);
    let sol = solve_ok(&lp);
    assert_eq!(sol.status, LpStatus::Unbounded);
}

#[test]
fn equality_rows_and_free_variables() {
    // min x + y  s.t. x + 2y = 4, x - y >= -1, y free
    let mut lp = LinearProgram::minimize(2);
    lp.set_objective(vec![1.0, 1.0]);
    lp.set_free(1);
    lp.add_row(vec![1.0, 2.0], Relation::Eq, 4.0);
    lp.add_row(vec![1.0, -1.0], Relation::Ge, -1.0);
    let sol = solve_ok(&lp);
    assert_eq!(sol.status, LpStatus::Optimal);
    // Substituting x = 4 - 2y, the objective is 4 - y with y <= 5/3 from the
    // second row, so the optimum sits at (2/3, 5/3) with value 7/3.
    assert!((sol.objective() - 7.0 / 3.0).abs() < OBJ_TOL);
    assert!((sol.point()[0] - 2.0 / 3.0).abs() < FEAS_TOL);
    assert!((sol.point()[1] - 5.0 / 3.0).abs() < FEAS_TOL);
    assert!(check_feasible(&lp, sol.point(), FEAS_TOL));
}

#[test]
fn finite_upper_bounds_are_respected() {
    // max x + y  s.t. x <= 0.6, y <= 0.5 via bounds, x + y <= 1
    let mut lp = LinearProgram::maximize(2);
    lp.set_objective(vec![1.0, 1.0]);
    lp.set_bounds(0, 0.0, 0.6);
    lp.set_bounds(1, 0.0, 0.5);
    lp.add_row(vec![1.0, 1.0], Relation::Le, 1.0);
    let sol = solve_ok(&lp);
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective() - 1.0).abs() < OBJ_TOL);
    assert!(check_feasible(&lp, sol.point(), FEAS_TOL));
}

#[test]
fn check_feasible_tolerance_semantics() {
    let mut lp = LinearProgram::minimize(2);
    lp.add_row(vec![1.0, 1.0], Relation::Le, 1.0);
    assert!(check_feasible(&lp, &[0.5, 0.5], 1e-9));
    assert!(!check_feasible(&lp, &[0.6, 0.6], 1e-9));

    let mut eq = LinearProgram::minimize(1);
    eq.add_row(vec![1.0], Relation::Eq, 1.0);
    assert!(check_feasible(&eq, &[1.0 + 1e-10], 1e-9));
}

#[test]
fn duals_match_finite_differences() {
    // Shadow prices: perturb each rhs and compare the re-solved objective.
    let build = |d0: f64, d1: f64| {
        let mut lp = LinearProgram::maximize(2);
        lp.set_objective(vec![3.0, 2.0]);
        lp.add_row(vec![1.0, 1.0], Relation::Le, 4.0 + d0);
        lp.add_row(vec![1.0, 3.0], Relation::Le, 6.0 + d1);
        lp
    };
    let base = solve_ok(&build(0.0, 0.0));
    assert_eq!(base.status, LpStatus::Optimal);
    let duals = base.duals().to_vec();
    let eps = 1e-4;
    for k in 0..2 {
        let (d0, d1) = if k == 0 { (eps, 0.0) } else { (0.0, eps) };
        let bumped = solve_ok(&build(d0, d1));
        let fd = (bumped.objective() - base.objective()) / eps;
        assert!(
            (fd - duals[k]).abs() < 1e-6,
            "row {k}: dual {} vs finite difference {fd}",
            duals[k]
        );
    }
}

#[test]
fn duals_of_min_problem() {
    // min -2x - y s.t. x + y <= 1: raising the rhs lowers the optimum at
    // rate 2, so the shadow price is -2.
    let mut lp = LinearProgram::minimize(2);
    lp.set_objective(vec![-2.0, -1.0]);
    lp.add_row(vec![1.0, 1.0], Relation::Le, 1.0);
    let sol = solve_ok(&lp);
    assert!((sol.duals()[0] - -2.0).abs() < 1e-9);
}

#[test]
fn deterministic_resolve() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let lp = random_lp(&mut rng, 5, 6);
        let a = solve_ok(&lp);
        let b = solve_ok(&lp);
        assert_eq!(a.status, b.status);
        if a.status == LpStatus::Optimal {
            assert_eq!(a.objective(), b.objective());
            assert_eq!(a.point(), b.point());
        }
    }
}

#[test]
fn agrees_with_enumeration_oracle() {
    // Smaller cousin of the acceptance sweep; the full 200-program run lives
    // in the acceptance suite.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for case in 0..60 {
        let lp = random_lp(&mut rng, 5, 6);
        let got = solve_ok(&lp);
        let want = enumerate_solve(&lp, 1e6);
        assert_eq!(
            got.status,
            want.status,
            "case {case} status mismatch:\n{}",
            lp.dump()
        );
        if got.status == LpStatus::Optimal {
            let diff = (got.objective() - want.objective.unwrap()).abs();
            assert!(
                diff < 1e-6,
                "case {case} objective gap {diff}:\n{}",
                lp.dump()
            );
            assert!(check_feasible(&lp, got.point(), FEAS_TOL));
        }
    }
}

#[test]
fn degenerate_pivoting_terminates() {
    // Classic cycling-prone instance (Beale); Bland's fallback must finish it.
    let mut lp = LinearProgram::minimize(4);
    lp.set_objective(vec![-0.75, 150.0, -0.02, 6.0]);
    lp.add_row(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0);
    lp.add_row(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0);
    lp.add_row(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
    let sol = solve_ok(&lp);
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective() - -0.05).abs() < OBJ_TOL);
}

#[test]
fn dump_round_trips_visually() {
    let mut lp = LinearProgram::maximize(2);
    lp.set_objective(vec![1.0, -2.0]);
    lp.add_row(vec![1.0, 1.0], Relation::Le, 3.0);
    lp.set_bounds(1, 0.0, 5.0);
    let text = lp.dump();
    assert!(text.contains("maximize"));
    assert!(text.contains("row: 1 1 <= 3"));
    assert!(text.contains("bound: x1 0 5"));
}

#[test]
fn validate_rejects_bad_models() {
    let mut lp = LinearProgram::minimize(2);
    lp.add_row(vec![1.0, f64::NAN], Relation::Le, 1.0);
    assert!(matches!(solve(&lp), Err(LpError::Invalid(_))));

    let mut lp = LinearProgram::minimize(1);
    lp.set_bounds(0, 2.0, 1.0);
    assert!(matches!(solve(&lp), Err(LpError::Invalid(_))));
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_lp() -> impl Strategy<Value = LinearProgram> {
        (1usize..=4, 1usize..=5, any::<u64>()).prop_map(|(v, r, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut lp = random_lp(&mut rng, v, r);
            lp.sense = Sense::Minimize;
            lp
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Every point reported optimal satisfies the model within FEAS_TOL.
        #[test]
        fn optimal_points_are_feasible(lp in arb_lp()) {
            if let Ok(sol) = solve(&lp) {
                if sol.status == LpStatus::Optimal {
                    prop_assert!(check_feasible(&lp, sol.point(), FEAS_TOL));
                }
            }
        }
    }
}
