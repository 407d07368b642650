use nfisac_sdp::export::{from_text, to_text};
use nfisac_sdp::{solve, AffineHermitian, ConicProblem, RowOp, Sense, SolveStatus, SolverSettings, SparseHermitian};
use num_complex::Complex64;
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, -1e-6..1e-6f64, Just(0.5), Just(-3.0)]
}

prop_compose! {
    fn arb_problem()(
        maximize in any::<bool>(),
        nfree in 1usize..3,
        nnon in 0usize..3,
        herm in 1usize..4,
        seed_vals in proptest::collection::vec(finite(), 40),
        nrows in 0usize..4,
        lmi_dim in 1usize..4,
    ) -> ConicProblem {
        let mut p = ConicProblem::new(if maximize { Sense::Maximize } else { Sense::Minimize });
        p.add_free("t", nfree);
        p.add_nonneg("mu k", nnon);
        p.add_hermitian_psd("W", herm);
        let n = p.num_vars;
        let mut vals = seed_vals.into_iter().cycle();
        let mut next = move || vals.next().unwrap();
        p.set_objective((0..n).step_by(2).map(|i| (i, next())).collect());
        for r in 0..nrows {
            let op = [RowOp::Eq, RowOp::Le, RowOp::Ge][r % 3];
            p.add_linear_row(format!("row {r}"), vec![(r % n, next()), ((r + 1) % n, next())], op, next());
        }
        let mut m = AffineHermitian::constant(SparseHermitian::from_triplets(
            lmi_dim,
            (0..lmi_dim).map(|i| (i, (i + 1) % lmi_dim, Complex64::new(next(), next()))),
        ));
        for v in 0..n.min(3) {
            m.add_term(v, &SparseHermitian::from_triplets(lmi_dim, [(0, lmi_dim - 1, Complex64::new(next(), next()))]), 1.0);
        }
        p.add_lmi("lmi", m);
        p
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_export_round_trips(p in arb_problem()) {
        let text = to_text(&p);
        let back = from_text(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(to_text(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Random box-constrained LMI: max c^T y s.t. I - sum y_i A_i >= 0,
    /// |y_i| <= 1. Always feasible (y = 0 strictly) and bounded.
    #[test]
    fn weak_duality_holds_on_random_feasible_problems(
        coeffs in proptest::collection::vec(-1.0..1.0f64, 3 * 9 + 3),
    ) {
        let mut p = ConicProblem::new(Sense::Maximize);
        p.add_free("y", 3);
        p.set_objective(vec![(0, coeffs[0]), (1, coeffs[1]), (2, coeffs[2])]);
        let mut lmi = AffineHermitian::constant(SparseHermitian::identity(3));
        for v in 0..3 {
            let k = 3 + 9 * v;
            let trip: Vec<_> = (0..3)
                .flat_map(|i| (i..3).map(move |j| (i, j)))
                .enumerate()
                .map(|(e, (i, j))| (i, j, Complex64::new(coeffs[k + e], if i == j { 0.0 } else { coeffs[k + e + 3] })))
                .collect();
            lmi.add_term(v, &SparseHermitian::from_triplets(3, trip), -1.0);
            p.add_linear_row(format!("box{v}+"), vec![(v, 1.0)], RowOp::Le, 1.0);
            p.add_linear_row(format!("box{v}-"), vec![(v, 1.0)], RowOp::Ge, -1.0);
        }
        p.add_lmi("slack", lmi);
        let s = SolverSettings::default();
        let r = solve(&p, &s).unwrap();
        prop_assert_eq!(r.status, SolveStatus::Optimal);
        // Maximization form: primal <= dual + gap.
        prop_assert!(r.objective <= r.dual_objective + s.gap_tol * (1.0 + r.objective.abs() + r.dual_objective.abs()));
        prop_assert!(r.residuals.max() <= s.feas_tol.max(s.gap_tol));
    }
}
