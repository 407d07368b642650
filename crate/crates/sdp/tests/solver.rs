use nalgebra::{DMatrix, DVector};
use nfisac_sdp::kkt::residuals;
use nfisac_sdp::{
    check_kkt, solve, AffineHermitian, Certificate, ConicProblem, RowOp, Sense, SolveStatus, SolverSettings,
    SparseHermitian,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn init() {
    let _ = env_logger::builder().is_test(true).try_init();
}

fn capped() -> ConicProblem {
    let mut p = ConicProblem::new(Sense::Maximize);
    p.add_free("t", 1);
    p.set_objective(vec![(0, 1.0)]);
    p.add_linear_row("cap", vec![(0, 1.0)], RowOp::Le, 1.0);
    p
}

#[test]
fn maximize_t_below_one() {
    init();
    let r = solve(&capped(), &SolverSettings::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.x[0] - 1.0).abs() < 1e-7);
    assert!((r.objective - 1.0).abs() < 1e-7);
}

#[test]
fn min_trace_with_fixed_corner() {
    init();
    let mut p = ConicProblem::new(Sense::Minimize);
    let b = p.add_symmetric_psd("X", 2);
    let off = p.block(b).offset;
    // params: X11, X22, X12
    p.set_objective(vec![(off, 1.0), (off + 1, 1.0)]);
    p.add_linear_row("corner", vec![(off, 1.0)], RowOp::Eq, 1.0);
    let r = solve(&p, &SolverSettings::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.objective - 1.0).abs() < 1e-7);
    let x = r.block_matrix(&p, b).unwrap();
    let e1 = DMatrix::from_fn(2, 2, |i, j| if i == 0 && j == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) });
    assert!((x - e1).norm() < 1e-6);
}

fn random_sym(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    (&a + a.transpose()) * 0.5
}

fn random_herm(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&a + a.adjoint()) * c(0.5, 0.0)
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    a.qr().q()
}

/// Builds `min <C, X>  s.t. <A_i, X> = b_i, X >= 0` over Hermitian `X` with a
/// prescribed strictly complementary optimal pair, so the optimal value is
/// known in closed form.
fn constructed_hermitian(seed: u64, n: usize, rank: usize, m: usize) -> (ConicProblem, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_unitary(&mut rng, n);
    let xd = DMatrix::from_fn(n, n, |i, j| {
        if i == j && i < rank {
            c(rng.random_range(0.5..2.0), 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    let sd = DMatrix::from_fn(n, n, |i, j| {
        if i == j && i >= rank {
            c(rng.random_range(0.5..2.0), 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    let x_star = &q * xd * q.adjoint();
    let s_star = &q * sd * q.adjoint();
    let ys: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    let a: Vec<DMatrix<Complex64>> = (0..m).map(|_| random_herm(&mut rng, n)).collect();
    let mut cmat = s_star.clone();
    for (ai, &yi) in a.iter().zip(&ys) {
        cmat += ai * c(yi, 0.0);
    }
    let mut p = ConicProblem::new(Sense::Minimize);
    let blk = p.add_hermitian_psd("X", n);
    let expr = p.block(blk).matrix_expr().unwrap();
    p.set_objective(expr.terms().map(|(v, f)| (v, f.inner(&cmat))).collect());
    for (i, ai) in a.iter().enumerate() {
        let bi = (ai * &x_star).trace().re;
        p.add_linear_row(format!("eq{i}"), expr.terms().map(|(v, f)| (v, f.inner(ai))).collect(), RowOp::Eq, bi);
    }
    let opt = (&cmat * &x_star).trace().re;
    (p, opt)
}

#[test]
fn constructed_hermitian_instances_recover_known_optimum() {
    init();
    for seed in 0..6 {
        let (p, opt) = constructed_hermitian(seed, 4, 1 + (seed as usize % 3), 5);
        let r = solve(&p, &SolverSettings::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal, "seed {seed}");
        let rel = (r.objective - opt).abs() / opt.abs().max(1.0);
        assert!(rel < 1e-6, "seed {seed}: {} vs {opt}", r.objective);
    }
}

/// Dual (LMI) form of a constructed real instance:
/// `max b^T y  s.t.  C - sum y_i A_i >= 0`, with known optimal value.
fn constructed_lmi(seed: u64) -> (ConicProblem, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 5;
    let m = 4;
    let q = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0)).qr().q();
    let xd = DMatrix::from_diagonal(&DVector::from_fn(n, |i, _| if i < 2 { 1.0 + i as f64 } else { 0.0 }));
    let sd = DMatrix::from_diagonal(&DVector::from_fn(n, |i, _| if i >= 2 { 0.5 + i as f64 } else { 0.0 }));
    let x_star = &q * xd * q.transpose();
    let s_star = &q * sd * q.transpose();
    let a: Vec<DMatrix<f64>> = (0..m).map(|_| random_sym(&mut rng, n)).collect();
    let ys: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut cm = s_star.clone();
    for (ai, &yi) in a.iter().zip(&ys) {
        cm += ai * yi;
    }
    let b: Vec<f64> = a.iter().map(|ai| (ai * &x_star).trace()).collect();
    let to_c = |m: &DMatrix<f64>| m.map(|v| c(v, 0.0));
    let mut p = ConicProblem::new(Sense::Maximize);
    p.add_free("y", m);
    p.set_objective(b.iter().copied().enumerate().collect());
    let mut lmi = AffineHermitian::from_dense_constant(&to_c(&cm));
    for (i, ai) in a.iter().enumerate() {
        lmi.add_term(i, &SparseHermitian::from_dense(&to_c(ai)), -1.0);
    }
    p.add_lmi("slack", lmi);
    let opt: f64 = b.iter().zip(&ys).map(|(bi, yi)| bi * yi).sum();
    (p, opt)
}

#[test]
fn constructed_lmi_form_matches_known_optimum() {
    init();
    for seed in 10..14 {
        let (p, opt) = constructed_lmi(seed);
        let r = solve(&p, &SolverSettings::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.objective - opt).abs() / opt.abs().max(1.0) < 1e-6);
    }
}

#[test]
fn complex_lmi_with_imaginary_coupling() {
    init();
    // max t s.t. [[1, t j], [-t j, 1]] >= 0  ->  |t| <= 1
    let mut p = ConicProblem::new(Sense::Maximize);
    p.add_free("t", 1);
    p.set_objective(vec![(0, 1.0)]);
    let mut lmi = AffineHermitian::constant(SparseHermitian::identity(2));
    lmi.add_term(0, &SparseHermitian::from_triplets(2, [(0, 1, c(0.0, 1.0))]), 1.0);
    p.add_lmi("disk", lmi);
    let r = solve(&p, &SolverSettings::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.x[0] - 1.0).abs() < 1e-7);
    // The dual multiplier is a Hermitian PSD matrix with the complementary direction.
    let z = &r.duals.lmi[0];
    assert!((z - z.adjoint()).norm() < 1e-12);
}

#[test]
fn infeasible_problem_yields_certificate() {
    init();
    // X >= 0 (real 2x2), X11 = -1
    let mut p = ConicProblem::new(Sense::Minimize);
    let b = p.add_symmetric_psd("X", 2);
    let off = p.block(b).offset;
    p.set_objective(vec![(off + 1, 1.0)]);
    p.add_linear_row("neg", vec![(off, 1.0)], RowOp::Eq, -1.0);
    let settings = SolverSettings::default();
    let r = solve(&p, &settings).unwrap();
    assert_eq!(r.status, SolveStatus::Infeasible);
    let Some(Certificate::PrimalInfeasible(ray)) = &r.certificate else {
        panic!("missing certificate");
    };
    // Independently verify: sum y_r a_r + G(Z) ~ 0 with unit dual improvement.
    let improvement: f64 = p.linear_rows.iter().zip(&ray.linear).map(|(row, y)| y * row.rhs).sum();
    assert!((improvement - 1.0).abs() < 1e-9);
    let z = ray.blocks[b].as_ref().unwrap();
    let expr = p.block(b).matrix_expr().unwrap();
    let mut stat = vec![0.0; p.num_vars];
    for (row, y) in p.linear_rows.iter().zip(&ray.linear) {
        for &(i, a) in &row.coeffs {
            stat[i] += y * a;
        }
    }
    for (v, f) in expr.terms() {
        stat[v] += f.inner(z);
    }
    assert!(stat.iter().all(|s| s.abs() <= settings.infeasibility_certificate_tol));
}

#[test]
fn conflicting_rows_are_infeasible() {
    init();
    let mut p = ConicProblem::new(Sense::Maximize);
    p.add_free("t", 1);
    p.set_objective(vec![(0, 1.0)]);
    p.add_linear_row("lo", vec![(0, 1.0)], RowOp::Ge, 2.0);
    p.add_linear_row("hi", vec![(0, 1.0)], RowOp::Le, 1.0);
    let r = solve(&p, &SolverSettings::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Infeasible);
}

#[test]
fn unbounded_problem_is_detected() {
    init();
    let mut p = ConicProblem::new(Sense::Maximize);
    p.add_free("t", 1);
    p.set_objective(vec![(0, 1.0)]);
    p.add_linear_row("lo", vec![(0, 1.0)], RowOp::Ge, 0.0);
    let r = solve(&p, &SolverSettings::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Unbounded);
    assert!(matches!(r.certificate, Some(Certificate::DualInfeasible(_))));
}

#[test]
fn optimal_results_satisfy_weak_duality_and_kkt() {
    init();
    let settings = SolverSettings::default();
    for seed in 20..24 {
        let (p, _) = constructed_hermitian(seed, 3, 1, 3);
        let r = solve(&p, &settings).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        // Minimization form: primal >= dual - gap.
        assert!(r.dual_objective <= r.objective + settings.gap_tol * (1.0 + r.objective.abs()));
        let k = check_kkt(&p, &r);
        assert!((k.primal_feas - r.residuals.primal_feas).abs() < 1e-9);
        assert!((k.dual_feas - r.residuals.dual_feas).abs() < 1e-9);
        assert!((k.duality_gap - r.residuals.duality_gap).abs() < 1e-9);
        assert!(k.primal_feas <= settings.feas_tol && k.dual_feas <= settings.feas_tol);
        assert!(k.duality_gap <= settings.gap_tol);
    }
}

#[test]
fn hand_built_feasible_point_has_zero_primal_residual() {
    init();
    let p = capped();
    let r = solve(&p, &SolverSettings::default()).unwrap();
    let res = residuals(&p, &[0.5], &r.duals);
    assert_eq!(res.primal_feas, 0.0);
}

#[test]
fn perturbation_grows_residual_linearly() {
    init();
    let (p, _) = constructed_hermitian(3, 3, 2, 3);
    let r = solve(&p, &SolverSettings::default()).unwrap();
    let dir: Vec<f64> = (0..p.num_vars).map(|i| ((i * 37 % 11) as f64 - 5.0) / 5.0).collect();
    let at = |h: f64| {
        let x: Vec<f64> = r.x.iter().zip(&dir).map(|(x, d)| x + h * d).collect();
        residuals(&p, &x, &r.duals).primal_feas
    };
    let (r1, r2) = (at(1e-3), at(2e-3));
    assert!(r1 > 1e-5);
    assert!((r2 / r1 - 2.0).abs() < 0.05, "ratio {}", r2 / r1);
}

fn scaled_objective(p: &ConicProblem, f: f64) -> ConicProblem {
    let mut q = p.clone();
    for (_, v) in q.objective.iter_mut() {
        *v *= f;
    }
    q
}

fn disk() -> ConicProblem {
    // max t + 0.3 u s.t. [[1, t + j u], [t - j u, 1]] >= 0, i.e. t^2 + u^2 <= 1.
    let mut p = ConicProblem::new(Sense::Maximize);
    p.add_free("tu", 2);
    p.set_objective(vec![(0, 1.0), (1, 0.3)]);
    let mut lmi = AffineHermitian::constant(SparseHermitian::identity(2));
    lmi.add_term(0, &SparseHermitian::from_triplets(2, [(0, 1, c(1.0, 0.0))]), 1.0);
    lmi.add_term(1, &SparseHermitian::from_triplets(2, [(0, 1, c(0.0, 1.0))]), 1.0);
    p.add_lmi("disk", lmi);
    p
}

#[test]
fn objective_scaling_preserves_status_and_argmax() {
    init();
    let s = SolverSettings::default();
    for p in [capped(), disk()] {
        let a = solve(&p, &s).unwrap();
        let b = solve(&scaled_objective(&p, 10.0), &s).unwrap();
        assert_eq!(a.status, SolveStatus::Optimal);
        assert_eq!(a.status, b.status);
        assert!((b.objective - 10.0 * a.objective).abs() <= 1e-6 * (1.0 + b.objective.abs()));
        let diff = a.x.iter().zip(&b.x).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-6, "{diff}");
    }
    let (t, u) = {
        let r = solve(&disk(), &s).unwrap();
        (r.x[0], r.x[1])
    };
    let norm = (1.0f64 + 0.09).sqrt();
    assert!((t - 1.0 / norm).abs() < 1e-6 && (u - 0.3 / norm).abs() < 1e-6);
}

/// On rank-deficient SDP optima the components orthogonal to the objective
/// are pinned only to about the square root of the stopping tolerance, so
/// the argmax comparison is looser there.
#[test]
fn objective_scaling_on_constructed_sdps() {
    init();
    let s = SolverSettings::default();
    for seed in [10, 11, 12] {
        let (p, _) = constructed_lmi(seed);
        let a = solve(&p, &s).unwrap();
        let b = solve(&scaled_objective(&p, 10.0), &s).unwrap();
        assert_eq!(a.status, b.status);
        assert!((b.objective - 10.0 * a.objective).abs() <= 1e-6 * (1.0 + b.objective.abs()));
        let diff = a.x.iter().zip(&b.x).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-4, "seed {seed}: {diff}");
    }
}

#[test]
fn duplicated_row_leaves_optimum_unchanged() {
    init();
    let s = SolverSettings::default();
    let (p, _) = constructed_hermitian(9, 3, 1, 3);
    let mut q = p.clone();
    let dup = q.linear_rows[0].clone();
    q.linear_rows.push(dup);
    let a = solve(&p, &s).unwrap();
    let b = solve(&q, &s).unwrap();
    assert_eq!(b.status, SolveStatus::Optimal);
    assert!((a.objective - b.objective).abs() < 1e-7);

    let mut lp = capped();
    lp.add_linear_row("cap again", vec![(0, 1.0)], RowOp::Le, 1.0);
    let c2 = solve(&lp, &s).unwrap();
    assert!((c2.objective - 1.0).abs() < 1e-7);
}

#[test]
fn solving_is_deterministic() {
    init();
    let (p, _) = constructed_hermitian(11, 4, 2, 5);
    let s = SolverSettings::default();
    let a = solve(&p, &s).unwrap();
    let b = solve(&p, &s).unwrap();
    assert_eq!(a.x, b.x);
    assert_eq!(a.iterations, b.iterations);
}

#[test]
fn nonneg_and_symmetric_blocks_mix() {
    init();
    // min x0 + x1 + tr(X) s.t. x0 + X11 >= 1, x1 - X12 = 0.5, X in S^2_+
    let mut p = ConicProblem::new(Sense::Minimize);
    let nb = p.add_nonneg("x", 2);
    let xb = p.add_symmetric_psd("X", 2);
    let n0 = p.block(nb).offset;
    let xo = p.block(xb).offset;
    p.set_objective(vec![(n0, 1.0), (n0 + 1, 1.0), (xo, 1.0), (xo + 1, 1.0)]);
    p.add_linear_row("a", vec![(n0, 1.0), (xo, 1.0)], RowOp::Ge, 1.0);
    p.add_linear_row("b", vec![(n0 + 1, 1.0), (xo + 2, -1.0)], RowOp::Eq, 0.5);
    let r = solve(&p, &SolverSettings::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    // X11 = 1, X22 = 1/4, X12 = -1/2, x = (0, 0) gives 1.25.
    assert!((r.objective - 1.25).abs() < 1e-6, "{}", r.objective);
}
