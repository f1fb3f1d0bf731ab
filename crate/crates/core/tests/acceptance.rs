//! Acceptance criteria. Run with `cargo test -p koopman-rkhs --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

mod common;

use std::f64::consts::TAU;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use koopman_rkhs::experiments::{
    run_convergence_sweep, theoretical_rate, SmoothnessParams, SweepConfig,
};
use koopman_rkhs::{
    eval_kernel, fill_distance, fit_data_driven_koopman, fit_interpolant, gram, Error, FnMap,
    HolmesParams, IdentityMap, MaternNu, RotationParams, SamplePairs, System,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Tolerances and thresholds, one per criterion.
const PSD_TOL_PER_N: f64 = 1e-8;
const INTERP_TOL: f64 = 1e-6;
const INVERSE_REL_TOL: f64 = 1e-9;
const COLLAPSE_REL_TOL: f64 = 1e-6;
const COMPOSITE_TOL: f64 = 1e-6;
const LINEARITY_REL_TOL: f64 = 1e-8;
const MIN_SLOPE: f64 = 2.0;
const REPORTED_BOUND: f64 = 2.5;
const MONOTONE_FACTOR: f64 = 1.5;
const FAR_FROM_CENTERS: f64 = 0.5;

fn ac1_kernel_gram() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let spec = m52();
    for trial in 0..100 {
        let dim = 1 + trial % 3;
        let n = rng.gen_range(1..=64);
        let pts = random_points(&mut rng, n, dim);
        let sys = gram(&spec, &pts).unwrap();
        for i in 0..n {
            let xi = pts.point(i);
            assert_eq!(eval_kernel(&spec, xi, xi).unwrap(), 1.0);
            assert_eq!(sys.entry(i, i), 1.0);
            for j in 0..n {
                let xj = pts.point(j);
                let kij = eval_kernel(&spec, xi, xj).unwrap();
                assert_eq!(kij.to_bits(), eval_kernel(&spec, xj, xi).unwrap().to_bits());
                assert_eq!(sys.entry(i, j).to_bits(), sys.entry(j, i).to_bits());
            }
        }
        let min_eig = min_eigenvalue(&sys);
        assert!(
            min_eig >= -PSD_TOL_PER_N * n as f64,
            "trial {trial}: min eigenvalue {min_eig}"
        );
    }
}

fn ac2_interpolation() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for n in [1usize, 2, 16, 256] {
        let centers = separated_points(&mut rng, n, 2, 1e-3);
        let y = random_values(&mut rng, n, 5.0);
        let interp = fit_interpolant(&gram(&m52(), &centers).unwrap(), &y).unwrap();
        let tol = INTERP_TOL * (1.0 + sup_norm(&y));
        for (c, yi) in centers.iter().zip(&y) {
            let r = (interp.eval(c).unwrap() - yi).abs();
            assert!(r <= tol, "n={n}: residual {r} > {tol}");
        }
    }
    for n in 1..=8 {
        let centers = separated_points(&mut rng, n, 2, 1e-3);
        let sys = gram(&m52(), &centers).unwrap();
        let y = random_values(&mut rng, n, 1.0);
        let c = fit_interpolant(&sys, &y).unwrap();
        let d = rel_diff(c.coeffs(), &inverse_solve(&sys, &y));
        assert!(d <= INVERSE_REL_TOL, "n={n}: solver vs inverse {d}");
    }
}

fn ac3_fill_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for trial in 0..50 {
        let dim = 1 + trial % 3;
        let m = rng.gen_range(1..=20);
        let r = rng.gen_range(1..=512);
        let samples = random_points(&mut rng, m, dim);
        let reference = random_points(&mut rng, r, dim);
        assert_eq!(
            fill_distance(&samples, &reference).unwrap(),
            brute_fill_distance(&samples, &reference),
            "trial {trial}"
        );
    }
}

fn ac4_koopman_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let xs = separated_points(&mut rng, 60, 2, 0.02);
    let sys = gram(&m52(), &xs).unwrap();
    let g1 = random_values(&mut rng, 60, 2.0);
    let g2 = random_values(&mut rng, 60, 2.0);

    let id_pairs = SamplePairs::from_map(xs.clone(), &IdentityMap { dim: 2 }).unwrap();
    let collapsed = fit_data_driven_koopman(&sys, &id_pairs, &g1).unwrap();
    let proj = fit_interpolant(&sys, &g1).unwrap();
    let d = rel_diff(collapsed.model().coeffs(), proj.coeffs());
    assert!(d <= COLLAPSE_REL_TOL, "identity collapse {d}");

    let f = FnMap::new(2, |x: &[f64]| {
        vec![x[0] + 0.03 * x[1].cos(), 0.95 * x[1] + 0.02]
    });
    let pairs = SamplePairs::from_map(xs.clone(), &f).unwrap();
    let model = fit_data_driven_koopman(&sys, &pairs, &g1).unwrap();
    let h: Vec<f64> = pairs
        .outputs()
        .iter()
        .map(|y| proj.eval(y).unwrap())
        .collect();
    let tol = COMPOSITE_TOL * (1.0 + sup_norm(&h));
    for (xi, hi) in xs.iter().zip(&h) {
        let r = (model.eval(xi).unwrap() - hi).abs();
        assert!(r <= tol, "composite identity residual {r}");
    }

    let (a, b) = (1.75, -0.6);
    let mix: Vec<f64> = g1.iter().zip(&g2).map(|(x, y)| a * x + b * y).collect();
    let m2 = fit_data_driven_koopman(&sys, &pairs, &g2).unwrap();
    let mm = fit_data_driven_koopman(&sys, &pairs, &mix).unwrap();
    let want: Vec<f64> = model
        .model()
        .coeffs()
        .iter()
        .zip(m2.model().coeffs())
        .map(|(x, y)| a * x + b * y)
        .collect();
    let d = rel_diff(mm.model().coeffs(), &want);
    assert!(d <= LINEARITY_REL_TOL, "linearity {d}");
}

fn rotation_sweep_config() -> SweepConfig {
    let mut cfg = SweepConfig::defaults(System::Rotation(RotationParams::default()));
    cfg.kernel = koopman_rkhs::KernelSpec::matern(MaternNu::FiveHalves, 0.1).unwrap();
    cfg.sample_counts = vec![32, 64, 128, 256, 512];
    cfg.eval_tail = 1024;
    cfg.s = 1;
    cfg.manifold_dim = 1;
    cfg
}

fn ac5_rotation_rates() {
    let cfg = rotation_sweep_config();
    let traj = cfg.trajectory().unwrap();
    let outcome = run_convergence_sweep(&cfg.problem(&traj).unwrap()).unwrap();
    assert_eq!(outcome.failures().count(), 0);
    let recs: Vec<_> = outcome.records().copied().collect();
    for r in &recs {
        println!(
            "      n={:4} h={:.4e} err_proj={:.4e} err_data={:.4e} jitter={:e}",
            r.n, r.h, r.err_proj, r.err_data, r.jitter_used
        );
    }
    for w in recs.windows(2) {
        assert!(
            w[1].err_proj <= MONOTONE_FACTOR * w[0].err_proj,
            "proj n={}",
            w[1].n
        );
        assert!(
            w[1].err_data <= MONOTONE_FACTOR * w[0].err_data,
            "data n={}",
            w[1].n
        );
    }
    let report = outcome.report.expect("rate report");
    println!(
        "      slope_proj={:.3} slope_data={:.3} bound={:?}",
        report.slope_proj, report.slope_data, report.theoretical_bound
    );
    assert_eq!(report.theoretical_bound, Some(REPORTED_BOUND));
    assert!(
        report.slope_proj >= MIN_SLOPE,
        "slope_proj {}",
        report.slope_proj
    );
    assert!(
        report.slope_data >= MIN_SLOPE,
        "slope_data {}",
        report.slope_data
    );
}

fn ac6_holmes() {
    let mut cfg =
        SweepConfig::defaults(System::Holmes(HolmesParams::new(1.0, 0.45, true).unwrap()));
    cfg.x0 = vec![0.1, 0.0];
    cfg.sample_counts = vec![768];
    cfg.eval_tail = 16;
    cfg.steps = Some(1024);
    let traj = cfg.trajectory().unwrap();
    assert_eq!(traj.len(), 1025);
    let mut v_max = 0.0f64;
    for x in traj.states().iter() {
        assert!((0.0..TAU).contains(&x[0]) && x[1].is_finite());
        v_max = v_max.max(x[1].abs());
    }
    assert!(v_max < 10.0, "velocity escapes: {v_max}");

    let n = 768;
    let problem = cfg.problem(&traj).unwrap();
    let cell = problem.fit_cell(n).unwrap();
    let centers = traj.states().slice(0..n);
    let (mut c_proj, mut c_data) = (0.0, 0.0);
    for x in centers.iter() {
        let (ep, ed) = cell.pointwise_errors(&problem, x);
        c_proj += ep / n as f64;
        c_data += ed / n as f64;
    }

    let grid = cfg.grid_for(&traj);
    let (mut f_proj, mut f_data, mut far) = (0.0, 0.0, 0usize);
    for node in grid.nodes() {
        let nearest = centers
            .iter()
            .map(|c| dist(c, &node))
            .fold(f64::INFINITY, f64::min);
        if nearest > FAR_FROM_CENTERS {
            let (ep, ed) = cell.pointwise_errors(&problem, &node);
            f_proj += ep;
            f_data += ed;
            far += 1;
        }
    }
    assert!(far > 0, "no grid node is far from the centers");
    f_proj /= far as f64;
    f_data /= far as f64;
    println!(
        "      jitter={:e} centers: proj={c_proj:.3e} data={c_data:.3e}; {far} far nodes: proj={f_proj:.3e} data={f_data:.3e}",
        cell.system.jitter()
    );
    assert!(c_proj < f_proj);
    assert!(c_data < f_data);
}

fn ac7_theoretical_rate() {
    let sp = SmoothnessParams {
        nu: MaternNu::FiveHalves,
        p: 2,
        d: 1,
        s: 1,
    };
    assert_eq!(theoretical_rate(&sp).unwrap(), 2.5);
    let bad = [
        SmoothnessParams { s: 4, ..sp },
        SmoothnessParams { s: 0, ..sp },
        SmoothnessParams { d: 3, ..sp },
        SmoothnessParams { d: 0, ..sp },
    ];
    for b in bad {
        assert!(
            matches!(theoretical_rate(&b), Err(Error::Config(_))),
            "{b:?} accepted"
        );
    }
}

fn ac8_determinism() {
    let cfg = rotation_sweep_config();
    let render = || {
        let traj = cfg.trajectory().unwrap();
        let outcome = run_convergence_sweep(&cfg.problem(&traj).unwrap()).unwrap();
        let mut buf = Vec::new();
        outcome.write_csv(&mut buf).unwrap();
        buf
    };
    let first = render();
    let second = render();
    assert!(!first.is_empty());
    assert_eq!(first, second);
}

type Criterion = (&'static str, fn(), Duration);

#[test]
fn acceptance_suite() {
    let criteria: [Criterion; 8] = [
        (
            "AC1 kernel and Gram invariants",
            ac1_kernel_gram,
            Duration::from_secs(10),
        ),
        (
            "AC2 interpolation exactness",
            ac2_interpolation,
            Duration::from_secs(10),
        ),
        (
            "AC3 fill distance vs double loop",
            ac3_fill_distance,
            Duration::from_secs(5),
        ),
        (
            "AC4 Koopman identities",
            ac4_koopman_identities,
            Duration::from_secs(10),
        ),
        (
            "AC5 rotation benchmark rates",
            ac5_rotation_rates,
            Duration::from_secs(60),
        ),
        (
            "AC6 Holmes reproduction",
            ac6_holmes,
            Duration::from_secs(120),
        ),
        (
            "AC7 theoretical rate",
            ac7_theoretical_rate,
            Duration::from_secs(1),
        ),
        (
            "AC8 sweep determinism",
            ac8_determinism,
            Duration::from_secs(120),
        ),
    ];
    let mut failed = Vec::new();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(()) if elapsed <= budget => "PASS",
            Ok(()) => "FAIL (over time budget)",
            Err(_) => "FAIL",
        };
        println!(
            "[{verdict}] {name} ({:.2}s, budget {}s)",
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if verdict != "PASS" {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
