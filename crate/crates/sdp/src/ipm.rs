//! Homogeneous self-dual interior-point iteration on the lowered standard form.
//!
//! The embedding solved is
//!
//! ```text
//! 0     = A^T y - F^T z + c tau
//! 0     = -A x + b tau
//! s     = F x + h tau
//! kappa = -c^T x - b^T y - h^T z
//! s, z in K,  tau, kappa >= 0,  s o z = 0,  tau kappa = 0
//! ```
//!
//! Each iteration takes a Mehrotra predictor-corrector step under
//! Nesterov-Todd scaling. Termination is decided on the problem-level KKT
//! residuals of the normalized iterate, or on an infeasibility/unboundedness
//! ray once `tau` has collapsed.

use log::{debug, warn};
use nalgebra::{DMatrix, DVector};

use crate::kkt::{kkt_report, DualValues};
use crate::problem::ConicProblem;
use crate::standard::{dual_to_hermitian, lower, LpOrigin, PsdOrigin, StandardForm};
use crate::{Certificate, SolveStatus, SolverResult, SolverSettings};

const STEP_FRACTION: f64 = 0.99;
const STALL_LIMIT: usize = 8;
const REFINEMENT_STEPS: usize = 2;

#[derive(Debug, Clone)]
struct ConeVec {
    lp: DVector<f64>,
    psd: Vec<DMatrix<f64>>,
}

impl ConeVec {
    fn identity(sf: &StandardForm) -> Self {
        Self {
            lp: DVector::from_element(sf.lp.len(), 1.0),
            psd: sf.psd.iter().map(|b| DMatrix::identity(b.dim, b.dim)).collect(),
        }
    }

    fn dot(&self, o: &Self) -> f64 {
        self.lp.dot(&o.lp) + self.psd.iter().zip(&o.psd).map(|(a, b)| a.component_mul(b).sum()).sum::<f64>()
    }

    fn axpy(&mut self, a: f64, o: &Self) {
        self.lp.axpy(a, &o.lp, 1.0);
        for (m, om) in self.psd.iter_mut().zip(&o.psd) {
            *m += om * a;
        }
    }

    fn scaled(&self, a: f64) -> Self {
        Self {
            lp: &self.lp * a,
            psd: self.psd.iter().map(|m| m * a).collect(),
        }
    }

    fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(-1.0, o);
        out
    }

    fn is_finite(&self) -> bool {
        self.lp.iter().all(|v| v.is_finite()) && self.psd.iter().all(|m| m.iter().all(|v| v.is_finite()))
    }
}

fn sym_triplet_inner(t: &[(usize, usize, f64)], y: &DMatrix<f64>) -> f64 {
    t.iter()
        .map(|&(p, q, v)| if p == q { v * y[(p, q)] } else { v * (y[(p, q)] + y[(q, p)]) })
        .sum()
}

impl StandardForm {
    fn h_vec(&self) -> ConeVec {
        ConeVec {
            lp: DVector::from_iterator(self.lp.len(), self.lp.iter().map(|r| r.h)),
            psd: self.psd.iter().map(|b| b.h.clone()).collect(),
        }
    }

    fn f_mul(&self, x: &DVector<f64>) -> ConeVec {
        let lp = DVector::from_iterator(self.lp.len(), self.lp.iter().map(|r| r.f.iter().map(|&(i, a)| a * x[i]).sum()));
        let psd = self
            .psd
            .iter()
            .map(|b| {
                let mut m = DMatrix::zeros(b.dim, b.dim);
                for (v, t) in &b.terms {
                    let xv = x[*v];
                    if xv == 0.0 {
                        continue;
                    }
                    for &(p, q, a) in t {
                        m[(p, q)] += a * xv;
                        if p != q {
                            m[(q, p)] += a * xv;
                        }
                    }
                }
                m
            })
            .collect();
        ConeVec { lp, psd }
    }

    fn ft_mul(&self, z: &ConeVec) -> DVector<f64> {
        let mut out = DVector::zeros(self.n);
        for (r, &zi) in self.lp.iter().zip(z.lp.iter()) {
            for &(i, a) in &r.f {
                out[i] += a * zi;
            }
        }
        for (b, zm) in self.psd.iter().zip(&z.psd) {
            for (v, t) in &b.terms {
                out[*v] += sym_triplet_inner(t, zm);
            }
        }
        out
    }

    fn a_mul(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.eq_rows.len(), self.eq_rows.iter().map(|r| r.iter().map(|&(i, a)| a * x[i]).sum()))
    }

    fn at_mul(&self, y: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.n);
        for (r, &yi) in self.eq_rows.iter().zip(y.iter()) {
            for &(i, a) in r {
                out[i] += a * yi;
            }
        }
        out
    }

    fn degree(&self) -> usize {
        self.lp.len() + self.psd.iter().map(|b| b.dim).sum::<usize>()
    }
}

struct PsdScale {
    r: DMatrix<f64>,
    rinv: DMatrix<f64>,
    t: DMatrix<f64>,
    lam: DVector<f64>,
    ls: DMatrix<f64>,
    lz: DMatrix<f64>,
}

/// Nesterov-Todd scaling `W` with `W z = W^{-T} s = lambda`.
struct Scaling {
    w: DVector<f64>,
    lam: DVector<f64>,
    psd: Vec<PsdScale>,
}

impl Scaling {
    fn new(s: &ConeVec, z: &ConeVec) -> Option<Self> {
        let w = s.lp.zip_map(&z.lp, |a, b| (a / b).sqrt());
        let lam = s.lp.zip_map(&z.lp, |a, b| (a * b).sqrt());
        let mut psd = Vec::with_capacity(s.psd.len());
        for (sm, zm) in s.psd.iter().zip(&z.psd) {
            let ls = sm.clone().cholesky()?.l();
            let lz = zm.clone().cholesky()?.l();
            let svd = (lz.transpose() * &ls).svd(true, true);
            let u = svd.u?;
            let v = svd.v_t?.transpose();
            let lam = svd.singular_values;
            if lam.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
                return None;
            }
            let isq = lam.map(|l| 1.0 / l.sqrt());
            let r = &ls * &v * DMatrix::from_diagonal(&isq);
            let rinv_t = &lz * &u * DMatrix::from_diagonal(&isq);
            let rinv = rinv_t.transpose();
            let t = &rinv_t * &rinv;
            psd.push(PsdScale {
                r,
                rinv,
                t,
                lam,
                ls,
                lz,
            });
        }
        if w.iter().chain(lam.iter()).any(|v| !(v.is_finite() && *v > 0.0)) {
            return None;
        }
        Some(Self { w, lam, psd })
    }

    /// `W dz`
    fn apply(&self, dz: &ConeVec) -> ConeVec {
        ConeVec {
            lp: self.w.component_mul(&dz.lp),
            psd: self.psd.iter().zip(&dz.psd).map(|(p, m)| p.r.transpose() * m * &p.r).collect(),
        }
    }

    /// `W^{-T} ds`
    fn apply_inv_t(&self, ds: &ConeVec) -> ConeVec {
        ConeVec {
            lp: ds.lp.component_div(&self.w),
            psd: self.psd.iter().zip(&ds.psd).map(|(p, m)| &p.rinv * m * p.rinv.transpose()).collect(),
        }
    }

    /// `W^T y`
    fn apply_t(&self, y: &ConeVec) -> ConeVec {
        ConeVec {
            lp: self.w.component_mul(&y.lp),
            psd: self.psd.iter().zip(&y.psd).map(|(p, m)| &p.r * m * p.r.transpose()).collect(),
        }
    }

    /// `(W^T W)^{-1} x`
    fn apply_wtw_inv(&self, x: &ConeVec) -> ConeVec {
        ConeVec {
            lp: x.lp.zip_map(&self.w, |a, w| a / (w * w)),
            psd: self.psd.iter().zip(&x.psd).map(|(p, m)| &p.t * m * &p.t).collect(),
        }
    }

    /// Solves `lambda o u = r` for `u`.
    fn lambda_solve(&self, r: &ConeVec) -> ConeVec {
        ConeVec {
            lp: r.lp.component_div(&self.lam),
            psd: self
                .psd
                .iter()
                .zip(&r.psd)
                .map(|(p, m)| DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| 2.0 * m[(i, j)] / (p.lam[i] + p.lam[j])))
                .collect(),
        }
    }

    fn lambda_sq(&self) -> ConeVec {
        ConeVec {
            lp: self.lam.map(|l| l * l),
            psd: self.psd.iter().map(|p| DMatrix::from_diagonal(&p.lam.map(|l| l * l))).collect(),
        }
    }
}

/// Jordan product `x o y`.
fn circ(x: &ConeVec, y: &ConeVec) -> ConeVec {
    ConeVec {
        lp: x.lp.component_mul(&y.lp),
        psd: x.psd.iter().zip(&y.psd).map(|(a, b)| (a * b + b * a) * 0.5).collect(),
    }
}

/// Largest step keeping `x + alpha dx` in the cone, given Cholesky factors of
/// the PSD parts of `x`. Returns infinity for a recession direction.
fn max_step(x: &ConeVec, dx: &ConeVec, factors: &[&DMatrix<f64>]) -> f64 {
    let mut alpha = f64::INFINITY;
    for (&xi, &di) in x.lp.iter().zip(dx.lp.iter()) {
        if di < 0.0 {
            alpha = alpha.min(-xi / di);
        }
    }
    for (l, d) in factors.iter().zip(&dx.psd) {
        let Some(m) = l.solve_lower_triangular(d) else {
            return 0.0;
        };
        let Some(m) = l.solve_lower_triangular(&m.transpose()) else {
            return 0.0;
        };
        let m = (&m + m.transpose()) * 0.5;
        let lmin = m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if lmin < 0.0 {
            alpha = alpha.min(-1.0 / lmin);
        }
    }
    alpha
}

struct Newton<'a> {
    sf: &'a StandardForm,
    scaling: &'a Scaling,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    exact: DMatrix<f64>,
}

impl<'a> Newton<'a> {
    fn build(sf: &'a StandardForm, scaling: &'a Scaling) -> Option<Self> {
        let n = sf.n;
        let p = sf.eq_rows.len();
        let mut h = DMatrix::<f64>::zeros(n, n);
        for (row, &w) in sf.lp.iter().zip(scaling.w.iter()) {
            let wt = 1.0 / (w * w);
            for &(a, fa) in &row.f {
                for &(b, fb) in &row.f {
                    h[(a, b)] += wt * fa * fb;
                }
            }
        }
        for (blk, sc) in sf.psd.iter().zip(&scaling.psd) {
            let t = &sc.t;
            let mut m = DMatrix::<f64>::zeros(blk.dim, blk.dim);
            for (j, (vj, fj)) in blk.terms.iter().enumerate() {
                m.fill(0.0);
                for &(p, q, v) in fj {
                    let tp = t.column(p);
                    if p == q {
                        m.ger(v, &tp, &tp, 1.0);
                    } else {
                        let tq = t.column(q);
                        m.ger(v, &tp, &tq, 1.0);
                        m.ger(v, &tq, &tp, 1.0);
                    }
                }
                for (vi, fi) in &blk.terms[j..] {
                    let val = sym_triplet_inner(fi, &m);
                    h[(*vi, *vj)] += val;
                    if vi != vj {
                        h[(*vj, *vi)] += val;
                    }
                }
            }
        }
        let mut exact = DMatrix::<f64>::zeros(n + p, n + p);
        exact.view_mut((0, 0), (n, n)).copy_from(&h);
        for (r, row) in sf.eq_rows.iter().enumerate() {
            for &(i, a) in row {
                exact[(n + r, i)] += a;
                exact[(i, n + r)] += a;
            }
        }
        let hmax = h.diagonal().iter().copied().fold(1.0, f64::max);
        let delta = 1e-13 * hmax;
        let mut reg = exact.clone();
        for i in 0..n {
            reg[(i, i)] += delta;
        }
        for i in n..n + p {
            reg[(i, i)] -= delta;
        }
        if reg.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let lu = reg.lu();
        Some(Self { sf, scaling, lu, exact })
    }

    fn solve_reduced(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        let mut sol = self.lu.solve(rhs)?;
        for _ in 0..3 {
            let res = rhs - &self.exact * &sol;
            let corr = self.lu.solve(&res)?;
            sol += corr;
        }
        sol.iter().all(|v| v.is_finite()).then_some(sol)
    }

    /// Solves `A^T dy - F^T dz = rx`, `-A dx = ry`, `F dx + W^T W dz = rz`.
    fn solve_once(&self, rx: &DVector<f64>, ry: &DVector<f64>, rz: &ConeVec) -> Option<(DVector<f64>, DVector<f64>, ConeVec)> {
        let n = self.sf.n;
        let p = self.sf.eq_rows.len();
        let top = rx + self.sf.ft_mul(&self.scaling.apply_wtw_inv(rz));
        let mut rhs = DVector::zeros(n + p);
        rhs.rows_mut(0, n).copy_from(&top);
        rhs.rows_mut(n, p).copy_from(&(-ry));
        let sol = self.solve_reduced(&rhs)?;
        let dx = sol.rows(0, n).into_owned();
        let dy = sol.rows(n, p).into_owned();
        let dz = self.scaling.apply_wtw_inv(&rz.sub(&self.sf.f_mul(&dx)));
        dz.is_finite().then_some((dx, dy, dz))
    }

    /// Solves `A^T dy - F^T dz = rx`, `-A dx = ry`, `F dx + W^T W dz = rz`,
    /// refining against the unreduced system.
    fn solve(&self, rx: &DVector<f64>, ry: &DVector<f64>, rz: &ConeVec) -> Option<(DVector<f64>, DVector<f64>, ConeVec)> {
        let (mut dx, mut dy, mut dz) = self.solve_once(rx, ry, rz)?;
        for _ in 0..REFINEMENT_STEPS {
            let ex = rx - (self.sf.at_mul(&dy) - self.sf.ft_mul(&dz));
            let ey = ry + self.sf.a_mul(&dx);
            let ez = rz.sub(&self.sf.f_mul(&dx)).sub(&self.scaling.apply_t(&self.scaling.apply(&dz)));
            let (cx, cy, cz) = self.solve_once(&ex, &ey, &ez)?;
            dx += cx;
            dy += cy;
            dz.axpy(1.0, &cz);
        }
        Some((dx, dy, dz))
    }
}

struct Direction {
    dx: DVector<f64>,
    dy: DVector<f64>,
    dz: ConeVec,
    ds: ConeVec,
    dtau: f64,
    dkappa: f64,
}

struct Residual {
    rx: DVector<f64>,
    ry: DVector<f64>,
    rz: ConeVec,
    rtau: f64,
}

struct Iterate {
    x: DVector<f64>,
    y: DVector<f64>,
    s: ConeVec,
    z: ConeVec,
    tau: f64,
    kappa: f64,
}

#[allow(clippy::too_many_arguments)]
fn direction(
    newton: &Newton,
    scaling: &Scaling,
    it: &Iterate,
    res: &Residual,
    u1: &(DVector<f64>, DVector<f64>, ConeVec),
    wz1: &ConeVec,
    c_u1: f64,
    eta: f64,
    rs: &ConeVec,
    rk: f64,
) -> Option<Direction> {
    let ls = scaling.lambda_solve(rs);
    let mut rz = scaling.apply_t(&ls);
    rz.axpy(-eta, &res.rz);
    let r1 = &res.rx * -eta;
    let r2 = &res.ry * -eta;
    let (dx2, dy2, dz2) = newton.solve(&r1, &r2, &rz)?;
    // c.x2 + b.y2 + h.z2 expressed through u1 to avoid cancellation.
    let c_u2 = u1.0.dot(&r1) + u1.1.dot(&r2) + u1.2.dot(&rz) - 2.0 * wz1.dot(&scaling.apply(&dz2));
    let denom = it.kappa / it.tau - c_u1;
    if !(denom.is_finite() && denom > 0.0) {
        debug!("tau equation degenerate: kappa/tau {:e} c_u1 {:e}", it.kappa / it.tau, c_u1);
        return None;
    }
    let dtau = (-eta * res.rtau + rk / it.tau + c_u2) / denom;
    let dx = dx2 + &u1.0 * dtau;
    let dy = dy2 + &u1.1 * dtau;
    let mut dz = dz2;
    dz.axpy(dtau, &u1.2);
    let dkappa = (rk - it.kappa * dtau) / it.tau;
    let ds = scaling.apply_t(&ls.sub(&scaling.apply(&dz)));
    let ok = dtau.is_finite() && dkappa.is_finite() && ds.is_finite();
    ok.then_some(Direction {
        dx,
        dy,
        dz,
        ds,
        dtau,
        dkappa,
    })
}

fn step_length(it: &Iterate, d: &Direction, scaling: &Scaling) -> f64 {
    let ls: Vec<&DMatrix<f64>> = scaling.psd.iter().map(|p| &p.ls).collect();
    let lz: Vec<&DMatrix<f64>> = scaling.psd.iter().map(|p| &p.lz).collect();
    let mut alpha = max_step(&it.s, &d.ds, &ls).min(max_step(&it.z, &d.dz, &lz));
    if d.dtau < 0.0 {
        alpha = alpha.min(-it.tau / d.dtau);
    }
    if d.dkappa < 0.0 {
        alpha = alpha.min(-it.kappa / d.dkappa);
    }
    alpha
}

fn problem_duals(problem: &ConicProblem, sf: &StandardForm, y: &DVector<f64>, z: &ConeVec, scale: f64) -> DualValues {
    let mut duals = DualValues {
        linear: vec![0.0; problem.linear_rows.len()],
        nonneg: vec![0.0; problem.num_vars],
        lmi: vec![DMatrix::zeros(0, 0); problem.lmi_rows.len()],
        blocks: vec![None; problem.blocks.len()],
    };
    for (k, &row) in sf.eq_origin.iter().enumerate() {
        duals.linear[row] = -y[k] * scale;
    }
    for (r, &zi) in sf.lp.iter().zip(z.lp.iter()) {
        match r.origin {
            LpOrigin::Row { index, sign } => duals.linear[index] = sign * zi * scale,
            LpOrigin::NonnegVar(v) => duals.nonneg[v] = zi * scale,
        }
    }
    for (b, zm) in sf.psd.iter().zip(&z.psd) {
        let zh = dual_to_hermitian(&(zm * scale), b.complex);
        match b.origin {
            PsdOrigin::Lmi(li) => duals.lmi[li] = zh,
            PsdOrigin::VarBlock(bi) => duals.blocks[bi] = Some(zh),
        }
    }
    duals
}

fn cone_violation(v: &ConeVec) -> f64 {
    let mut viol: f64 = v.lp.iter().map(|&a| -a).fold(0.0, f64::max);
    for m in &v.psd {
        let lmin = m.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        viol = viol.max(-lmin);
    }
    viol
}

fn finish(
    problem: &ConicProblem,
    sf: &StandardForm,
    it: &Iterate,
    status: SolveStatus,
    iterations: usize,
    certificate: Option<Certificate>,
) -> SolverResult {
    let scale = 1.0 / it.tau;
    let x: Vec<f64> = it.x.iter().map(|v| v * scale).collect();
    let duals = problem_duals(problem, sf, &it.y, &it.z, scale);
    let report = kkt_report(problem, &x, &duals);
    let sign = match problem.sense {
        crate::Sense::Minimize => 1.0,
        crate::Sense::Maximize => -1.0,
    };
    SolverResult {
        status,
        objective: problem.objective_value(&x),
        dual_objective: sign * report.dual_min,
        x,
        duals,
        residuals: report.residuals,
        iterations,
        certificate,
    }
}

pub(crate) fn run(problem: &ConicProblem, settings: &SolverSettings) -> SolverResult {
    let sf = lower(problem);
    let h = sf.h_vec();
    let nu = sf.degree() as f64;
    let mut it = Iterate {
        x: DVector::zeros(sf.n),
        y: DVector::zeros(sf.eq_rows.len()),
        s: ConeVec::identity(&sf),
        z: ConeVec::identity(&sf),
        tau: 1.0,
        kappa: 1.0,
    };
    let e = ConeVec::identity(&sf);
    let mut stalls = 0;

    for iter in 0..settings.max_iterations {
        let fx = sf.f_mul(&it.x);
        let mut rz = fx.clone();
        rz.axpy(it.tau, &h);
        let rz = rz.sub(&it.s);
        let res = Residual {
            rx: sf.at_mul(&it.y) - sf.ft_mul(&it.z) + &sf.c * it.tau,
            ry: -sf.a_mul(&it.x) + &sf.b * it.tau,
            rz,
            rtau: -sf.c.dot(&it.x) - sf.b.dot(&it.y) - h.dot(&it.z) - it.kappa,
        };
        let mu = (it.s.dot(&it.z) + it.tau * it.kappa) / (nu + 1.0);

        // Termination on the normalized iterate.
        let scale = 1.0 / it.tau;
        let x: Vec<f64> = it.x.iter().map(|v| v * scale).collect();
        let duals = problem_duals(problem, &sf, &it.y, &it.z, scale);
        let report = kkt_report(problem, &x, &duals);
        let r = report.residuals;
        debug!(
            "iter {iter:3} pobj {:+.6e} dobj {:+.6e} pres {:.2e} dres {:.2e} gap {:.2e} tau {:.2e} kappa {:.2e} mu {:.2e}",
            report.primal_min, report.dual_min, r.primal_feas, r.dual_feas, r.duality_gap, it.tau, it.kappa, mu
        );
        if r.primal_feas <= settings.feas_tol && r.dual_feas <= settings.feas_tol && r.duality_gap <= settings.gap_tol {
            return finish(problem, &sf, &it, SolveStatus::Optimal, iter, None);
        }
        let by_hz = sf.b.dot(&it.y) + h.dot(&it.z);
        if by_hz < 0.0 {
            let ray = (sf.at_mul(&it.y) - sf.ft_mul(&it.z)).amax();
            if ray / -by_hz <= settings.infeasibility_certificate_tol {
                let cert = problem_duals(problem, &sf, &it.y, &it.z, 1.0 / -by_hz);
                return finish(problem, &sf, &it, SolveStatus::Infeasible, iter, Some(Certificate::PrimalInfeasible(cert)));
            }
        }
        let cx = sf.c.dot(&it.x);
        if cx < 0.0 {
            let ray = sf.a_mul(&it.x).amax().max(cone_violation(&fx));
            if ray / -cx <= settings.infeasibility_certificate_tol {
                let xr: Vec<f64> = it.x.iter().map(|v| v / -cx).collect();
                return finish(problem, &sf, &it, SolveStatus::Unbounded, iter, Some(Certificate::DualInfeasible(xr)));
            }
        }

        let Some(scaling) = Scaling::new(&it.s, &it.z) else {
            warn!("scaling breakdown at iteration {iter}");
            return finish(problem, &sf, &it, SolveStatus::NumericalFailure, iter, None);
        };
        let Some(newton) = Newton::build(&sf, &scaling) else {
            warn!("Newton system breakdown at iteration {iter}");
            return finish(problem, &sf, &it, SolveStatus::NumericalFailure, iter, None);
        };
        let neg_h = h.scaled(-1.0);
        let Some(u1) = newton.solve(&-&sf.c, &-&sf.b, &neg_h) else {
            warn!("linear solve breakdown at iteration {iter}");
            return finish(problem, &sf, &it, SolveStatus::NumericalFailure, iter, None);
        };
        // c.x1 + b.y1 + h.z1 = -|W z1|^2 exactly.
        let wz1 = scaling.apply(&u1.2);
        let c_u1 = -wz1.dot(&wz1);

        let lam_sq = scaling.lambda_sq();
        let rs_aff = lam_sq.scaled(-1.0);
        let rk_aff = -it.tau * it.kappa;
        let Some(aff) = direction(&newton, &scaling, &it, &res, &u1, &wz1, c_u1, 1.0, &rs_aff, rk_aff) else {
            warn!("predictor breakdown at iteration {iter}");
            return finish(problem, &sf, &it, SolveStatus::NumericalFailure, iter, None);
        };
        let alpha_aff = step_length(&it, &aff, &scaling).min(1.0);
        let sigma = (1.0 - alpha_aff).powi(3);

        let mut rs = rs_aff.clone();
        rs.axpy(sigma * mu, &e);
        let corr = circ(&scaling.apply_inv_t(&aff.ds), &scaling.apply(&aff.dz));
        rs.axpy(-1.0, &corr);
        let rk = rk_aff + sigma * mu - aff.dtau * aff.dkappa;
        let Some(d) = direction(&newton, &scaling, &it, &res, &u1, &wz1, c_u1, 1.0 - sigma, &rs, rk) else {
            warn!("corrector breakdown at iteration {iter}");
            return finish(problem, &sf, &it, SolveStatus::NumericalFailure, iter, None);
        };
        let alpha = (STEP_FRACTION * step_length(&it, &d, &scaling)).min(1.0);
        if alpha < 1e-8 {
            stalls += 1;
            if stalls >= STALL_LIMIT {
                warn!("step length stalled at iteration {iter}");
                return finish(problem, &sf, &it, SolveStatus::NumericalFailure, iter, None);
            }
        } else {
            stalls = 0;
        }

        it.x.axpy(alpha, &d.dx, 1.0);
        it.y.axpy(alpha, &d.dy, 1.0);
        it.s.axpy(alpha, &d.ds);
        it.z.axpy(alpha, &d.dz);
        for m in it.s.psd.iter_mut().chain(it.z.psd.iter_mut()) {
            let sym = (&*m + m.transpose()) * 0.5;
            *m = sym;
        }
        it.tau += alpha * d.dtau;
        it.kappa += alpha * d.dkappa;

        // Rescale the homogeneous iterate to keep magnitudes bounded.
        let norm = it.tau + it.kappa;
        if !(1e-6..=1e6).contains(&norm) {
            let f = 1.0 / norm;
            it.x *= f;
            it.y *= f;
            it.s = it.s.scaled(f);
            it.z = it.z.scaled(f);
            it.tau *= f;
            it.kappa *= f;
        }
    }
    finish(problem, &sf, &it, SolveStatus::MaxIter, settings.max_iterations, None)
}

