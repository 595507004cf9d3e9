//! Online-solve properties: path lengths equal the projected objective,
//! shortest path matches brute force, telescoped recovery agrees with an
//! independent banded re-solve, and one diagram serves arbitrary cost data.

mod common;

use common::{random_costs, random_filter_instance, random_pd_banded, rng};
use miqodd_core::{
    arc_lengths, brute_force, build_diagram, enumerate_paths, evaluate_objective,
    recover_solution, shortest_path, BuildConfig, BuildMode, ConstraintFilter, FilterKind,
    PathSolver,
};
use rand::Rng;

#[test]
fn every_path_length_matches_projected_objective() {
    let mut r = rng(0x91);
    for _ in 0..6 {
        let n = r.gen_range(4..=9);
        let k = r.gen_range(1..=3.min(n - 1));
        let q = random_pd_banded(&mut r, n, k);
        let d = build_diagram(&q, &BuildConfig::new(BuildMode::Exact), None).unwrap();
        let inst = random_costs(&mut r, n);
        let lengths = arc_lengths(&d, &inst);
        for bits in enumerate_paths(&d).unwrap() {
            let path = d.trace_arcs(&bits).unwrap();
            let sum: f64 = path.iter().map(|&a| lengths[a as usize]).sum();
            let h = evaluate_objective(&q, &inst, &bits).unwrap();
            assert!((sum - h).abs() < 1e-8, "n={n} bits={bits:?} sum={sum} h={h}");
        }
    }
}

#[test]
fn shortest_path_is_optimal_against_brute_force() {
    let mut r = rng(0x92);
    for case in 0..20 {
        let n = r.gen_range(4..=12);
        let kind = if case % 2 == 0 { FilterKind::KthDiff } else { FilterKind::MovingAverage };
        let k = r.gen_range(1..=3.min(n - 1));
        let lambda = [0.25, 1.0, 5.0][case % 3];
        let mu = [0.001, 0.01, 0.1][case % 3];
        let (q, inst) = random_filter_instance(&mut r, n, kind, k, lambda, mu);
        let d = build_diagram(&q, &BuildConfig::new(BuildMode::Exact), None).unwrap();
        let (path, h) = shortest_path(&d, &arc_lengths(&d, &inst));
        let sol = recover_solution(&d, &path, &inst, Some(&q)).unwrap();
        let reference = brute_force(&q, &inst, &ConstraintFilter::None, 20).unwrap();
        let scale = 1.0 + reference.objective.abs();
        assert!(
            ((h + inst.constant) - reference.objective).abs() < 1e-6 * scale,
            "n={n} case={case}"
        );
        assert_eq!(sol.z, reference.z, "n={n} case={case}");
        assert!(sol.verify_discrepancy.unwrap() < 1e-8);
    }
}

#[test]
fn constrained_shortest_path_matches_filtered_brute_force() {
    let mut r = rng(0x93);
    for case in 0..10 {
        let n = r.gen_range(4..=10);
        let tau = r.gen_range(2..=3u32);
        let (q, inst) =
            random_filter_instance(&mut r, n, FilterKind::KthDiff, 1, 1.0, 0.01);
        let d = build_diagram(
            &q,
            &BuildConfig::new(BuildMode::Exact),
            Some(&miqodd_core::Contiguity::new(tau)),
        )
        .unwrap();
        let (path, h) = shortest_path(&d, &arc_lengths(&d, &inst));
        let sol = recover_solution(&d, &path, &inst, None).unwrap();
        let reference = brute_force(&q, &inst, &ConstraintFilter::Contiguity(tau), 20).unwrap();
        assert!(
            ((h + inst.constant) - reference.objective).abs() < 1e-8,
            "case={case} n={n} tau={tau}"
        );
        assert_eq!(sol.z, reference.z);
    }
}

#[test]
fn telescoped_recovery_agrees_with_banded_resolve() {
    let mut r = rng(0x94);
    for _ in 0..30 {
        let n = r.gen_range(4..=12);
        let k = r.gen_range(1..=3.min(n - 1));
        let q = random_pd_banded(&mut r, n, k);
        let d = build_diagram(&q, &BuildConfig::new(BuildMode::Exact), None).unwrap();
        let inst = random_costs(&mut r, n);
        let (path, _) = shortest_path(&d, &arc_lengths(&d, &inst));
        let sol = recover_solution(&d, &path, &inst, Some(&q)).unwrap();
        assert!(sol.verify_discrepancy.unwrap() < 1e-8);
        // x vanishes off support and the objective identity holds.
        for (zi, xi) in sol.z.iter().zip(&sol.x) {
            if !zi {
                assert_eq!(*xi, 0.0);
            }
        }
        let cz: f64 =
            sol.z.iter().zip(&inst.c).map(|(&b, &c)| if b { c } else { 0.0 }).sum();
        let dx: f64 = inst.d.iter().zip(&sol.x).map(|(a, b)| a * b).sum();
        let direct = cz + dx + 0.5 * sol.x0 + inst.constant;
        assert!((direct - sol.objective).abs() <= 1e-9 * (1.0 + sol.objective.abs()));
    }
}

/// Dual-route objective evaluation: the banded-solve route must agree with
/// an evaluation through the dense pseudoinverse reference.
#[test]
fn objective_routes_agree() {
    let mut r = rng(0x96);
    for _ in 0..30 {
        let n = r.gen_range(3..=10);
        let k = r.gen_range(1..=3.min(n - 1));
        let q = random_pd_banded(&mut r, n, k);
        let inst = random_costs(&mut r, n);
        for bits in enumerate_paths(
            &build_diagram(&q, &BuildConfig::new(BuildMode::Exact), None).unwrap(),
        )
        .unwrap()
        .into_iter()
        .step_by(7)
        {
            let via_banded = evaluate_objective(&q, &inst, &bits).unwrap();
            let w = miqodd_core::pseudoinverse_oracle(&q, &bits).unwrap();
            let mut quad = 0.0;
            for i in 0..n {
                for j in 0..n {
                    quad += inst.d[i] * w[i][j] * inst.d[j];
                }
            }
            let cz: f64 =
                bits.iter().zip(&inst.c).map(|(&b, &c)| if b { c } else { 0.0 }).sum();
            let via_dense = cz - 0.5 * quad + inst.constant;
            assert!((via_banded - via_dense).abs() <= 1e-10 * (1.0 + via_dense.abs()));
        }
    }
}

#[test]
fn one_diagram_serves_a_hundred_cost_vectors() {
    let mut r = rng(0x95);
    let n = 10;
    let (q, _) = random_filter_instance(&mut r, n, FilterKind::MovingAverage, 2, 1.0, 0.01);
    let d = build_diagram(&q, &BuildConfig::new(BuildMode::Exact), None).unwrap();
    let mut solver = PathSolver::new(&d);
    let mut lengths = Vec::new();
    for trial in 0..100 {
        let inst = random_costs(&mut r, n);
        miqodd_core::arc_lengths_into(&d, &inst, &mut lengths);
        let h = solver.run(&d, &lengths);
        let path = solver.extract_path(&d);
        let sol = recover_solution(&d, &path, &inst, None).unwrap();
        let reference = brute_force(&q, &inst, &ConstraintFilter::None, 20).unwrap();
        let scale = 1.0 + reference.objective.abs();
        assert!(
            ((h + inst.constant) - reference.objective).abs() < 1e-6 * scale,
            "trial={trial}"
        );
        assert_eq!(sol.z, reference.z, "trial={trial}");
    }
}
