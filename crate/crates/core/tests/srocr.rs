use nalgebra::{DMatrix, SymmetricEigen};
use nfisac::config::ScenarioConfig;
use nfisac::geometry::{CMatrix, CVector};
use nfisac::metrics::{nominal_cu_sinr, nominal_eve_sinr, BeamformingSolution};
use nfisac::robust::{assemble_p2, complex_to_real, is_feasible_outcome};
use nfisac::scenario::Scenario;
use nfisac::srocr::{build_p3, ACCEPT_FEAS_TOL, concentration, init_relaxed, leading_eigvec, run, step, SrocrSettings};
use nfisac::verifier::{rank_ratio, validate, worst_case_beampattern, ValidationOptions};
use nfisac::Error;
use nfisac_sdp::{ConicSolver, InteriorPointSolver};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn desk(seed: u64) -> Scenario {
    ScenarioConfig::default().instantiate(seed).unwrap()
}

fn rel_le(a: f64, b: f64, tol: f64) -> bool {
    a <= b + tol * a.abs().max(b.abs())
}

#[test]
fn unreachable_sinr_is_terminal() {
    let cfg = ScenarioConfig {
        sinr_threshold_db: 60.0,
        ..Default::default()
    };
    let s = cfg.instantiate(0).unwrap();
    let settings = SrocrSettings::default();
    assert!(matches!(init_relaxed(&s, &InteriorPointSolver, &settings), Err(Error::Infeasible(_))));
    assert!(matches!(run(&s, &InteriorPointSolver, &settings), Err(Error::Infeasible(_))));
}

#[test]
fn single_user_without_eavesdroppers() {
    let cfg = ScenarioConfig {
        cu_count: 1,
        eve_count: 0,
        ..Default::default()
    };
    let s = cfg.instantiate(0).unwrap();
    let state = init_relaxed(&s, &InteriorPointSolver, &SrocrSettings::default()).unwrap();
    assert!(state.relaxed_bound() > 0.0);
    assert_eq!(state.v, vec![0.0]);
    assert_eq!(state.delta, vec![0.1]);
}

#[test]
fn vacuous_cuts_reproduce_the_relaxed_value() {
    let s = desk(1);
    let settings = SrocrSettings::default();
    let state = init_relaxed(&s, &InteriorPointSolver, &settings).unwrap();
    let p3 = build_p3(&s, &state).unwrap();
    let base = assemble_p2(&s, None).unwrap();
    assert_eq!(p3.problem.linear_rows.len(), base.problem.linear_rows.len() + s.num_users());
    assert_eq!(p3.layout.cut_rows.len(), s.num_users());

    let result = InteriorPointSolver.solve(&p3.problem, &settings.solver).unwrap();
    let t = p3.solution(&result).objective;
    assert!((t - state.relaxed_bound()).abs() <= 1e-6 * t.abs(), "{t} vs {}", state.relaxed_bound());
}

#[test]
fn level_one_cut_forces_rank_one() {
    let s = desk(1);
    let settings = SrocrSettings::default();
    let mut state = init_relaxed(&s, &InteriorPointSolver, &settings).unwrap();
    state.v = vec![1.0; s.num_users()];
    let p3 = build_p3(&s, &state).unwrap();
    let result = InteriorPointSolver.solve(&p3.problem, &settings.solver).unwrap();
    let sol = p3.solution(&result);
    for (w, u) in sol.comm.iter().zip(&state.u) {
        let tr = w.trace().re;
        let along = u.dotc(&(w * u)).re;
        assert!((along - tr).abs() <= 1e-9 * tr.abs().max(1e-30));
    }
}

#[test]
fn step_halves_delta_on_an_infeasible_subproblem() {
    // Feasible when relaxed; a forced cut along a fixed direction that no
    // feasible covariance can concentrate on makes the step infeasible.
    let s = desk(1);
    let settings = SrocrSettings::default();
    let mut state = init_relaxed(&s, &InteriorPointSolver, &settings).unwrap();
    let eve = s.eavesdroppers[0].csi.estimate.normalize();
    state.u = vec![eve; s.num_users()];
    state.v = vec![0.999; s.num_users()];
    let before = state.solution.clone();
    let t_before = state.objective();
    step(&s, &mut state, &InteriorPointSolver, &settings).unwrap();
    assert_eq!(state.delta, vec![0.05; s.num_users()]);
    assert_eq!(state.objective(), t_before);
    for (k, w) in before.comm.iter().enumerate() {
        assert_eq!(&state.solution.comm[k], w);
        assert!((state.v[k] - (concentration(w) + 0.05).min(1.0)).abs() < 1e-15);
    }
}

#[test]
fn desk_run_converges_to_a_certified_rank_one_point() {
    let s = desk(0);
    let settings = SrocrSettings::default();
    let (sol, state) = run(&s, &InteriorPointSolver, &settings).unwrap();

    assert!(state.v.iter().all(|&v| v == 1.0));
    assert!(sol.comm.iter().all(|w| rank_ratio(w) <= 1e-3));
    for (i, rec) in state.trace.iter().enumerate() {
        assert!(rel_le(rec.objective, state.relaxed_bound(), 1e-6));
        for k in 0..s.num_users() {
            assert!((0.0..=1.0).contains(&rec.v[k]));
            if i > 0 {
                assert!(rec.v[k] >= rec.concentration[k].min(1.0) - 1e-15);
            }
        }
    }
    for u in &state.u {
        assert!((u.norm() - 1.0).abs() < 1e-12);
    }

    let report = validate(&sol, &s, &ValidationOptions { mc_samples: 2000, seed: 0 }).unwrap();
    assert!(report.pass, "{}", report.to_text());
    assert!(report.power <= s.power_budget + 1e-9);
    assert!(!report.lmi_margins.is_empty());
    for (tag, m) in &report.lmi_margins {
        assert!(*m >= -1e-7, "{tag}: {m}");
    }
    for t in &s.targets {
        assert!(worst_case_beampattern(&sol, &t.csi) >= sol.objective * (1.0 - 1e-7));
    }

    // Extracted beamformers meet the nominal constraints on their own.
    let vectors = sol.vectors.clone().unwrap();
    let rebuilt = BeamformingSolution {
        comm: vectors.iter().map(|w| w * w.adjoint()).collect(),
        ..sol.clone()
    };
    for (k, u) in s.users.iter().enumerate() {
        let sinr = nominal_cu_sinr(&rebuilt, &u.csi.estimate, k, u.noise_power).unwrap();
        assert!(sinr >= u.sinr_threshold * (1.0 - 1e-6));
    }
    for e in &s.eavesdroppers {
        for (k, &g) in e.leakage_thresholds.iter().enumerate() {
            assert!(nominal_eve_sinr(&rebuilt, &e.csi.estimate, k, e.noise_power).unwrap() <= g * (1.0 + 1e-6));
        }
    }
}

/// Stationarity proxy: tilting every beam direction by 1e-3 and re-solving
/// for powers and sensing (level-one cuts along the tilted directions, so
/// every re-solve is a feasible design) must not improve the objective.
#[test]
fn no_small_feasible_step_improves_the_final_point() {
    let s = desk(0);
    let settings = SrocrSettings::default();
    let (sol, state) = run(&s, &InteriorPointSolver, &settings).unwrap();
    let n = s.antenna_count();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut feasible_steps = 0;
    for _ in 0..20 {
        let mut tilted = state.clone();
        for u in &mut tilted.u {
            let d = CVector::from_fn(n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let f = 1e-3 / d.norm();
            *u = (&*u + d * Complex64::new(f, 0.0)).normalize();
        }
        tilted.v = vec![1.0; s.num_users()];
        let p3 = build_p3(&s, &tilted).unwrap();
        let result = InteriorPointSolver.solve(&p3.problem, &settings.solver).unwrap();
        if !is_feasible_outcome(&result, ACCEPT_FEAS_TOL) {
            continue;
        }
        feasible_steps += 1;
        let t = p3.solution(&result).objective;
        assert!(t <= sol.objective * (1.0 + 1e-6), "tilt improves {:e} to {t:e}", sol.objective);
    }
    assert!(feasible_steps >= 10, "only {feasible_steps} tilted designs were feasible");
}

#[test]
fn perfect_csi_converges_quickly() {
    let s = desk(0).with_perfect_csi();
    let (_, state) = run(&s, &InteriorPointSolver, &SrocrSettings::default()).unwrap();
    assert!(state.iteration <= 10, "{} iterations", state.iteration);
}

fn hermitian_psd(seed: u64, n: usize) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    &a * a.adjoint()
}

proptest! {
    #[test]
    fn leading_pair_matches_real_embedding(seed in any::<u64>(), n in 1usize..7) {
        let w = hermitian_psd(seed, n);
        let (l, u) = leading_eigvec(&w);
        prop_assert!((u.norm() - 1.0).abs() < 1e-12);

        // The real embedding doubles every eigenvalue's multiplicity; its
        // top eigenvector stacks real and imaginary parts of a complex one.
        let real: DMatrix<f64> = complex_to_real(&w).unwrap();
        let eig = SymmetricEigen::new(real);
        let top = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((l - top).abs() <= 1e-10 * top.abs().max(1.0));
        let wu = &w * &u;
        prop_assert!((wu - &u * Complex64::new(l, 0.0)).norm() <= 1e-10 * top.max(1.0));

        let max_mod = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let anchor = u.iter().find(|z| z.norm() >= max_mod * (1.0 - 1e-12)).unwrap();
        prop_assert!(anchor.im.abs() < 1e-12 && anchor.re > 0.0);
    }
}
