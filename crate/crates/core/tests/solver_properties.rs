use mrdp::chain::{make_chain, make_grading};
use mrdp::independence::independence_problem;
use mrdp::solver::{AffineMap, GradingTemplate, Interval, MrdpProblem, MAX_LINE_ITERATIONS};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn interior(problem: &MrdpProblem, u: f64) -> f64 {
    let b = problem.bounds()[0];
    b.lo + (0.1 + 0.8 * u) * b.width()
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = StdRng::seed_from_u64(11);
    let h = 1e-6;
    for _ in 0..100 {
        let p1 = rng.gen_range(0.01..0.99);
        let p2 = rng.gen_range(0.01..0.99);
        let problem = independence_problem(p1, p2).unwrap();
        let x = interior(&problem, rng.gen());
        let g = problem.gradient(&[x]).unwrap()[0];
        let fd = (problem.objective(&[x + h]).unwrap() - problem.objective(&[x - h]).unwrap())
            / (2.0 * h);
        assert!(
            (g - fd).abs() / (1.0 + g.abs()) <= 1e-6,
            "p1={p1} p2={p2} x={x}: {g} vs {fd}"
        );
    }
}

#[test]
fn solver_agrees_with_grid_oracle() {
    let mut rng = StdRng::seed_from_u64(12);
    let points = 10_001;
    for _ in 0..50 {
        let p1 = rng.gen_range(0.01..0.99);
        let p2 = rng.gen_range(0.01..0.99);
        let problem = independence_problem(p1, p2).unwrap();
        let spacing = problem.bounds()[0].width() / (points - 1) as f64;
        let report = problem.maximize(1e-12).unwrap();
        let grid = problem.grid_oracle(points).unwrap();
        assert!(report.converged);
        assert!(report.iterations <= MAX_LINE_ITERATIONS);
        assert!((report.argmax[0] - grid[0]).abs() <= spacing);
        assert!(report.gradient_norm_at_exit <= 1e-6, "{report:?}");
    }
}

/// Chain `[0, x, y, 1]` against the indexing function plus chain `[0, y, 1]`
/// against `[0, 1, 3]`, over the unit box.
fn two_parameter_problem() -> MrdpProblem {
    let long = make_chain(&["a", "b", "c", "d"]).unwrap();
    let short = make_chain(&["e", "f", "g"]).unwrap();
    let t_long = GradingTemplate::new(
        long.clone(),
        vec![
            AffineMap::constant(0.0, 2),
            AffineMap::new(0.0, vec![1.0, 0.0]),
            AffineMap::new(0.0, vec![0.0, 1.0]),
            AffineMap::constant(1.0, 2),
        ],
    )
    .unwrap();
    let t_short = GradingTemplate::new(
        short.clone(),
        vec![
            AffineMap::constant(0.0, 2),
            AffineMap::new(0.0, vec![0.0, 1.0]),
            AffineMap::constant(1.0, 2),
        ],
    )
    .unwrap();
    MrdpProblem::new(
        vec![
            (t_long, long.indexing_function()),
            (t_short, make_grading(&short, &[0.0, 1.0, 3.0]).unwrap()),
        ],
        vec![Interval::new(0.0, 1.0), Interval::new(0.0, 1.0)],
    )
    .unwrap()
}

#[test]
fn coordinate_ascent_agrees_with_grid_oracle() {
    let problem = two_parameter_problem();
    let points = 801;
    let spacing = 1.0 / (points - 1) as f64;
    let report = problem.maximize(1e-12).unwrap();
    assert!(report.converged, "{report:?}");
    let grid = problem.grid_oracle(points).unwrap();
    for (a, b) in report.argmax.iter().zip(&grid) {
        assert!((a - b).abs() <= spacing, "{:?} vs {grid:?}", report.argmax);
    }
    // interior optimum: gradient vanishes
    let g = problem.gradient(&report.argmax).unwrap();
    assert!(g.iter().all(|gj| gj.abs() < 1e-8), "{g:?}");
    // no grid point beats the solver
    assert!(
        problem.objective(&report.argmax).unwrap() >= problem.objective(&grid).unwrap() - 1e-12
    );
}

#[test]
fn two_parameter_region_with_fixed_coordinate() {
    // y pinned to 0.5: only x moves, x ∈ [0, 0.5]; optimum splits [0, .5] evenly
    let base = two_parameter_problem();
    let templates: Vec<_> = base
        .templates()
        .map(|(t, g)| (t.clone(), g.clone()))
        .collect();
    let problem = MrdpProblem::new(
        templates,
        vec![Interval::new(0.0, 1.0), Interval::point(0.5)],
    )
    .unwrap();
    let report = problem.maximize(1e-12).unwrap();
    assert!(report.converged);
    assert!((report.argmax[0] - 0.25).abs() < 1e-11, "{report:?}");
    assert_eq!(report.argmax[1], 0.5);
}

#[test]
fn grid_oracle_rejects_three_parameters() {
    let chain = make_chain(&["a", "b"]).unwrap();
    let template = GradingTemplate::new(
        chain.clone(),
        vec![
            AffineMap::constant(0.0, 3),
            AffineMap::new(1.0, vec![0.1, 0.1, 0.1]),
        ],
    )
    .unwrap();
    let problem = MrdpProblem::new(
        vec![(template, chain.indexing_function())],
        vec![Interval::new(0.0, 1.0); 3],
    )
    .unwrap();
    assert!(problem.grid_oracle(5).is_err());
}

proptest! {
    #[test]
    fn objective_is_concave_on_segments(
        p1 in 0.01..0.99f64,
        p2 in 0.01..0.99f64,
        u in 0.0..=1.0f64,
        v in 0.0..=1.0f64,
        lambda in 0.0..1.0f64,
    ) {
        let problem = independence_problem(p1, p2).unwrap();
        let b = problem.bounds()[0];
        let x = b.lo + u * b.width();
        let y = b.lo + v * b.width();
        let mid = (lambda * x + (1.0 - lambda) * y).clamp(b.lo, b.hi);
        let lhs = problem.objective(&[mid]).unwrap();
        let rhs = lambda * problem.objective(&[x]).unwrap() + (1.0 - lambda) * problem.objective(&[y]).unwrap();
        prop_assert!(lhs >= rhs - 1e-10);
    }

    #[test]
    fn report_invariants(p1 in 0.01..0.99f64, p2 in 0.01..0.99f64) {
        let report = independence_problem(p1, p2).unwrap().maximize(1e-12).unwrap();
        prop_assert!(report.converged);
        prop_assert!(report.iterations <= MAX_LINE_ITERATIONS);
        prop_assert!((report.argmax[0] - p1 * p2).abs() <= 1e-9);
        let value = independence_problem(p1, p2).unwrap().objective(&report.argmax).unwrap();
        prop_assert_eq!(value, report.objective_at_argmax);
    }
}
