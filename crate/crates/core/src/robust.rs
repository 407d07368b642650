//! S-procedure machinery: the `Psi` aggregates, the LMI blocks that make
//! each robust constraint tractable, and assembly of the rank-relaxed
//! robust design problem handed to the SDP solver.
//!
//! Every robust constraint has the shape
//! `q(D) = D^H A D + 2 Re(h^H A D) + h^H A h + c >= 0` for all `|D| <= eps`,
//! which holds iff some `mu >= 0` makes
//!
//! ```text
//! [ mu I + A     A h              ]
//! [ h^H A        h^H A h + c - mu eps^2 ]  >= 0.
//! ```
//!
//! Solver scaling: matrix variables are stored divided by the power budget
//! `P0`, each LMI is congruence-scaled by `diag(I, 1/|h|)`, and the
//! objective variable is divided by `P0 min_m |h_T,m|^2`, so all data the
//! solver sees is O(1) regardless of pathloss.

use nalgebra::DMatrix;
use nfisac_sdp::{AffineHermitian, ConicProblem, RowOp, Sense, SolveStatus, SolverResult, SparseHermitian};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{CMatrix, CVector};
use crate::metrics::{hermitian_part, quad_form, BeamformingSolution};
use crate::scenario::Scenario;

/// Linear combinations shared by numeric matrices and affine expressions,
/// so the `Psi` definitions are written once.
pub trait MatrixLike: Clone {
    fn zeros_like(&self) -> Self;
    fn add_scaled_from(&mut self, other: &Self, c: f64);
    fn size(&self) -> usize;
}

impl MatrixLike for CMatrix {
    fn zeros_like(&self) -> Self {
        CMatrix::zeros(self.nrows(), self.ncols())
    }

    fn add_scaled_from(&mut self, other: &Self, c: f64) {
        *self += other * Complex64::new(c, 0.0);
    }

    fn size(&self) -> usize {
        self.nrows()
    }
}

impl MatrixLike for AffineHermitian {
    fn zeros_like(&self) -> Self {
        AffineHermitian::zeros(self.dim())
    }

    fn add_scaled_from(&mut self, other: &Self, c: f64) {
        self.add_scaled(other, c);
    }

    fn size(&self) -> usize {
        self.dim()
    }
}

fn check_dims<M: MatrixLike>(comm: &[M], sensing: &M) -> Result<()> {
    let n = sensing.size();
    if comm.iter().any(|w| w.size() != n) {
        return Err(Error::invalid("covariance dimension mismatch"));
    }
    Ok(())
}

/// `Psi = sum_k W_k + R0`.
pub fn psi_total<M: MatrixLike>(comm: &[M], sensing: &M) -> Result<M> {
    check_dims(comm, sensing)?;
    let mut out = sensing.clone();
    for w in comm {
        out.add_scaled_from(w, 1.0);
    }
    Ok(out)
}

/// `W_k / gamma - sum_{i != k} W_i - R0`; used for both the user SINR
/// constraint and the eavesdropper leakage constraint on stream `k`.
pub fn psi_stream<M: MatrixLike>(comm: &[M], sensing: &M, k: usize, threshold: f64) -> Result<M> {
    check_dims(comm, sensing)?;
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::invalid(format!("SINR threshold must be positive, got {threshold}")));
    }
    if k >= comm.len() {
        return Err(Error::invalid(format!("user index {k} out of range")));
    }
    let mut out = sensing.zeros_like();
    out.add_scaled_from(sensing, -1.0);
    for (i, w) in comm.iter().enumerate() {
        out.add_scaled_from(w, if i == k { 1.0 / threshold } else { -1.0 });
    }
    Ok(out)
}

pub fn psi_cu<M: MatrixLike>(comm: &[M], sensing: &M, k: usize, threshold: f64) -> Result<M> {
    psi_stream(comm, sensing, k, threshold)
}

pub fn psi_eve<M: MatrixLike>(comm: &[M], sensing: &M, k: usize, threshold: f64) -> Result<M> {
    psi_stream(comm, sensing, k, threshold)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiSet {
    pub total: CMatrix,
    pub cu: Vec<CMatrix>,
    /// Indexed `[l][k]`.
    pub eve: Vec<Vec<CMatrix>>,
}

impl PsiSet {
    pub fn new(sol: &BeamformingSolution, scenario: &Scenario) -> Result<Self> {
        let comm: Vec<CMatrix> = sol.comm.iter().map(hermitian_part).collect();
        let sensing = hermitian_part(&sol.sensing);
        let cu = scenario
            .users
            .iter()
            .enumerate()
            .map(|(k, u)| psi_cu(&comm, &sensing, k, u.sinr_threshold))
            .collect::<Result<_>>()?;
        let eve = scenario
            .eavesdroppers
            .iter()
            .map(|e| {
                e.leakage_thresholds
                    .iter()
                    .enumerate()
                    .map(|(k, &g)| psi_eve(&comm, &sensing, k, g))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            total: psi_total(&comm, &sensing)?,
            cu,
            eve,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LmiTag {
    Target(usize),
    User(usize),
    Eavesdropper { l: usize, k: usize },
}

impl std::fmt::Display for LmiTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LmiTag::Target(m) => write!(f, "target {m}"),
            LmiTag::User(k) => write!(f, "user {k}"),
            LmiTag::Eavesdropper { l, k } => write!(f, "eavesdropper {l} on user {k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmiBlock {
    pub tag: LmiTag,
    pub matrix: AffineHermitian,
}

/// Real affine scalar `constant + sum coef * x_var`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScalarAffine {
    pub constant: f64,
    pub terms: Vec<(usize, f64)>,
}

impl ScalarAffine {
    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            terms: Vec::new(),
        }
    }

    pub fn variable(var: usize, coef: f64) -> Self {
        Self {
            constant: 0.0,
            terms: vec![(var, coef)],
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(v, c)| c * x[v]).sum::<f64>()
    }
}

/// `h^H A h` as an affine scalar of the variables of `A`.
pub fn quadratic_affine(a: &AffineHermitian, h: &CVector) -> ScalarAffine {
    let q = |m: &SparseHermitian| m.inner(&(h * h.adjoint()));
    ScalarAffine {
        constant: q(a.constant_part()),
        terms: a.terms().map(|(v, m)| (v, q(m))).filter(|&(_, c)| c != 0.0).collect(),
    }
}

/// `tr(A)` as an affine scalar.
pub fn trace_affine(a: &AffineHermitian) -> ScalarAffine {
    let tr = |m: &SparseHermitian| m.entries().iter().filter(|(i, j, _)| i == j).map(|e| e.2.re).sum::<f64>();
    ScalarAffine {
        constant: tr(a.constant_part()),
        terms: a.terms().map(|(v, m)| (v, tr(m))).filter(|&(_, c)| c != 0.0).collect(),
    }
}

/// `[[mu I + A, A h], [h^H A, h^H A h + offset - mu eps^2]]`.
pub fn s_procedure_block(a: &AffineHermitian, h: &CVector, eps: f64, mu: usize, offset: &ScalarAffine) -> AffineHermitian {
    let n = a.dim();
    assert_eq!(h.len(), n, "channel length does not match the matrix");
    let mut t = CMatrix::zeros(n, n + 1);
    for i in 0..n {
        t[(i, i)] = Complex64::new(1.0, 0.0);
        t[(i, n)] = h[i];
    }
    let mut out = a.congruence(&t);
    let mut mu_part: Vec<(usize, usize, Complex64)> = (0..n).map(|i| (i, i, Complex64::new(1.0, 0.0))).collect();
    if eps != 0.0 {
        mu_part.push((n, n, Complex64::new(-eps * eps, 0.0)));
    }
    out.add_term(mu, &SparseHermitian::from_triplets(n + 1, mu_part), 1.0);
    let corner = |c: f64| SparseHermitian::from_triplets(n + 1, [(n, n, Complex64::new(c, 0.0))]);
    if offset.constant != 0.0 {
        out.add_constant(&corner(offset.constant), 1.0);
    }
    for &(v, c) in &offset.terms {
        out.add_term(v, &corner(c), 1.0);
    }
    out
}

/// Target LMI: `q_T(D) - t >= 0` on the ball, with `t` the variable `t_var`.
pub fn lmi_target(psi: &AffineHermitian, h: &CVector, eps: f64, t_var: usize, mu: usize) -> LmiBlock {
    LmiBlock {
        tag: LmiTag::Target(0),
        matrix: s_procedure_block(psi, h, eps, mu, &ScalarAffine::variable(t_var, -1.0)),
    }
}

/// User LMI: `q_k(D) - sigma^2 >= 0` on the ball.
pub fn lmi_cu(psi_k: &AffineHermitian, h: &CVector, eps: f64, noise: f64, mu: usize) -> LmiBlock {
    LmiBlock {
        tag: LmiTag::User(0),
        matrix: s_procedure_block(psi_k, h, eps, mu, &ScalarAffine::constant(-noise)),
    }
}

/// Eavesdropper LMI: `sigma^2 - q_lk(D) >= 0` on the ball; the user block
/// with `Psi -> -Psi` and `sigma^2 -> -sigma^2`.
pub fn lmi_eve(psi_lk: &AffineHermitian, h: &CVector, eps: f64, noise: f64, mu: usize) -> LmiBlock {
    LmiBlock {
        tag: LmiTag::Eavesdropper { l: 0, k: 0 },
        matrix: s_procedure_block(&psi_lk.scaled(-1.0), h, eps, mu, &ScalarAffine::constant(noise)),
    }
}

/// Real symmetric embedding `[[Re H, -Im H], [Im H, Re H]]`.
pub fn complex_to_real(h: &CMatrix) -> Result<DMatrix<f64>> {
    let m = h.nrows();
    if h.ncols() != m {
        return Err(Error::invalid("matrix must be square"));
    }
    let asym = (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if asym > 1e-8 {
        return Err(Error::invalid(format!("matrix is not Hermitian (asymmetry {asym:e})")));
    }
    Ok(DMatrix::from_fn(2 * m, 2 * m, |i, j| {
        let z = h[(i % m, j % m)];
        match (i < m, j < m) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    }))
}

/// SROCR eigenvector cut `u^H W_k u >= v tr(W_k)` for user `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankCut {
    pub direction: CVector,
    pub level: f64,
}

#[derive(Debug, Clone, Default)]
pub struct AssemblyOptions {
    /// One cut per user, or none for the plain relaxation.
    pub cuts: Option<Vec<RankCut>>,
    /// Fix the sensing covariance to zero (information-only design).
    pub without_sensing: bool,
    /// Watts per unit of the matrix variables; the power budget when absent.
    /// Designs using a tiny fraction of the budget are better conditioned
    /// with a scale near their actual power.
    pub power_scale: Option<f64>,
}

/// How a communication covariance enters the problem.
#[derive(Debug, Clone, PartialEq)]
pub enum CommVariable {
    /// Hermitian PSD block.
    Matrix(usize),
    /// `W = c u u^H` with a nonnegative scalar block `c`. A cut at level one
    /// admits exactly these matrices; writing them this way keeps the
    /// problem strictly feasible, which the interior-point method needs.
    RankOne { block: usize, direction: CVector },
}

/// Variable layout and unit scales of an assembled problem.
#[derive(Debug, Clone, PartialEq)]
pub struct P2Layout {
    pub comm_blocks: Vec<CommVariable>,
    pub sensing_block: Option<usize>,
    pub multiplier_block: usize,
    pub objective_block: usize,
    /// Watts per unit of a matrix variable (the power budget).
    pub power_scale: f64,
    /// Watts of beampattern gain per unit of the objective variable.
    pub gain_scale: f64,
    /// Row indices of the eigenvector cuts below level one.
    pub cut_rows: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct RobustProblem {
    pub problem: ConicProblem,
    pub layout: P2Layout,
}

fn channel_scale(h: &CVector) -> f64 {
    let g = h.norm();
    if g > 0.0 {
        g
    } else {
        1.0
    }
}

/// Index of a multiplier inside the multiplier block.
pub fn multiplier_index(scenario: &Scenario, tag: LmiTag) -> usize {
    let k = scenario.num_users();
    let l = scenario.num_eavesdroppers();
    match tag {
        LmiTag::User(i) => i,
        LmiTag::Eavesdropper { l: li, k: ki } => k + li * k + ki,
        LmiTag::Target(m) => k + l * k + m,
    }
}

/// Rank-relaxed robust problem with optional SROCR cuts.
pub fn assemble_p2(scenario: &Scenario, cuts: Option<&[RankCut]>) -> Result<RobustProblem> {
    assemble_p2_with(
        scenario,
        &AssemblyOptions {
            cuts: cuts.map(<[RankCut]>::to_vec),
            ..Default::default()
        },
    )
}

pub fn assemble_p2_with(scenario: &Scenario, options: &AssemblyOptions) -> Result<RobustProblem> {
    scenario.validate()?;
    let n = scenario.antenna_count();
    let k_users = scenario.num_users();
    let p0 = scenario.power_budget;
    let scale = options.power_scale.unwrap_or(p0);
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::invalid(format!("power scale must be positive, got {scale}")));
    }
    if let Some(cuts) = &options.cuts {
        if cuts.len() != k_users {
            return Err(Error::invalid(format!("{} cuts for {k_users} users", cuts.len())));
        }
        for c in cuts {
            if c.direction.len() != n || !(0.0..=1.0).contains(&c.level) {
                return Err(Error::invalid("cut direction length or level out of range"));
            }
        }
    }

    let mut p = ConicProblem::new(Sense::Maximize);
    let full_cut = |k: usize| {
        options
            .cuts
            .as_ref()
            .map(|c| &c[k])
            .filter(|c| c.level >= 1.0)
            .map(|c| c.direction.unscale(c.direction.norm()))
    };
    let comm_blocks: Vec<CommVariable> = (0..k_users)
        .map(|k| match full_cut(k) {
            Some(direction) => CommVariable::RankOne {
                block: p.add_nonneg(&format!("c{k}"), 1),
                direction,
            },
            None => CommVariable::Matrix(p.add_hermitian_psd(&format!("W{k}"), n)),
        })
        .collect();
    let sensing_block = (!options.without_sensing).then(|| p.add_hermitian_psd("R0", n));
    let n_mu = k_users + scenario.num_eavesdroppers() * k_users + scenario.num_targets();
    let multiplier_block = p.add_nonneg("mu", n_mu);
    let objective_block = p.add_free("t", 1);
    let mu0 = p.block(multiplier_block).offset;
    let t_var = p.block(objective_block).offset;
    p.set_objective(vec![(t_var, 1.0)]);

    let comm: Vec<AffineHermitian> = comm_blocks
        .iter()
        .map(|c| match c {
            CommVariable::Matrix(b) => p.block(*b).matrix_expr().expect("matrix block"),
            CommVariable::RankOne { block, direction } => {
                let mut e = AffineHermitian::zeros(n);
                e.add_term(p.block(*block).offset, &SparseHermitian::from_dense(&(direction * direction.adjoint())), 1.0);
                e
            }
        })
        .collect();
    let sensing = match sensing_block {
        Some(b) => p.block(b).matrix_expr().expect("matrix block"),
        None => AffineHermitian::zeros(n),
    };

    let mut power = trace_affine(&sensing);
    for w in &comm {
        power.terms.extend(trace_affine(w).terms);
    }
    p.add_linear_row("power", power.terms, RowOp::Le, p0 / scale);

    let g_ref = scenario
        .targets
        .iter()
        .map(|t| channel_scale(&t.csi.estimate))
        .fold(f64::INFINITY, f64::min);
    let gain_scale = scale * g_ref * g_ref;

    let psi = psi_total(&comm, &sensing)?;
    for (m, target) in scenario.targets.iter().enumerate() {
        let g = channel_scale(&target.csi.estimate);
        let hn = target.csi.estimate.unscale(g);
        let offset = ScalarAffine::variable(t_var, -(g_ref / g).powi(2));
        let mu = mu0 + multiplier_index(scenario, LmiTag::Target(m));
        add_robust_row(&mut p, LmiTag::Target(m), &psi, &hn, target.csi.error_bound / g, mu, &offset);
    }
    for (k, user) in scenario.users.iter().enumerate() {
        let g = channel_scale(&user.csi.estimate);
        let hn = user.csi.estimate.unscale(g);
        let psi_k = psi_cu(&comm, &sensing, k, user.sinr_threshold)?;
        let offset = ScalarAffine::constant(-user.noise_power / (scale * g * g));
        let mu = mu0 + multiplier_index(scenario, LmiTag::User(k));
        add_robust_row(&mut p, LmiTag::User(k), &psi_k, &hn, user.csi.error_bound / g, mu, &offset);
    }
    for (l, eve) in scenario.eavesdroppers.iter().enumerate() {
        let g = channel_scale(&eve.csi.estimate);
        let hn = eve.csi.estimate.unscale(g);
        for (k, &gamma) in eve.leakage_thresholds.iter().enumerate() {
            let psi_lk = psi_eve(&comm, &sensing, k, gamma)?;
            let offset = ScalarAffine::constant(eve.noise_power / (scale * g * g));
            let tag = LmiTag::Eavesdropper { l, k };
            let mu = mu0 + multiplier_index(scenario, tag);
            add_robust_row(&mut p, tag, &psi_lk.scaled(-1.0), &hn, eve.csi.error_bound / g, mu, &offset);
        }
    }

    let mut cut_rows = Vec::new();
    if let Some(cuts) = &options.cuts {
        for (k, cut) in cuts.iter().enumerate() {
            if matches!(comm_blocks[k], CommVariable::RankOne { .. }) {
                continue;
            }
            let mut row = quadratic_affine(&comm[k], &cut.direction);
            for (v, c) in trace_affine(&comm[k]).terms {
                row.terms.push((v, -cut.level * c));
            }
            cut_rows.push(p.linear_rows.len());
            p.add_linear_row(format!("rank cut {k}"), merge_terms(row.terms), RowOp::Ge, 0.0);
        }
    }

    Ok(RobustProblem {
        problem: p,
        layout: P2Layout {
            comm_blocks,
            sensing_block,
            multiplier_block,
            objective_block,
            power_scale: scale,
            gain_scale,
            cut_rows,
        },
    })
}

fn merge_terms(mut terms: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    terms.sort_by_key(|t| t.0);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
    for (v, c) in terms {
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 += c,
            _ => out.push((v, c)),
        }
    }
    out.retain(|t| t.1 != 0.0);
    out
}

/// Adds one robust constraint `q(D) + offset >= 0` (with `A` already
/// carrying the sign). With a zero error bound the S-procedure block is
/// replaced by the exact nominal row `h^H A h + offset >= 0`, because the
/// block would only approach it as `mu -> infinity`.
fn add_robust_row(
    p: &mut ConicProblem,
    tag: LmiTag,
    a: &AffineHermitian,
    hn: &CVector,
    eps: f64,
    mu: usize,
    offset: &ScalarAffine,
) {
    if eps == 0.0 {
        let mut q = quadratic_affine(a, hn);
        q.terms.extend(offset.terms.iter().copied());
        p.add_linear_row(tag.to_string(), merge_terms(q.terms), RowOp::Ge, -(q.constant + offset.constant));
    } else {
        p.add_lmi(tag.to_string(), s_procedure_block(a, hn, eps, mu, offset));
    }
}

impl RobustProblem {
    /// Unscaled design from a solver result.
    pub fn solution(&self, result: &SolverResult) -> BeamformingSolution {
        let l = &self.layout;
        let scale = Complex64::new(l.power_scale, 0.0);
        let matrix = |b: usize| hermitian_part(&result.block_matrix(&self.problem, b).expect("matrix block")) * scale;
        let comm: Vec<CMatrix> = l
            .comm_blocks
            .iter()
            .map(|c| match c {
                CommVariable::Matrix(b) => matrix(*b),
                CommVariable::RankOne { block, direction } => {
                    direction * direction.adjoint() * Complex64::new(result.scalar(&self.problem, *block) * l.power_scale, 0.0)
                }
            })
            .collect();
        let n = comm.first().map_or(0, |w| w.nrows());
        let sensing = l.sensing_block.map_or_else(|| CMatrix::zeros(n, n), matrix);
        let mu = self.problem.block(l.multiplier_block);
        BeamformingSolution {
            comm,
            vectors: None,
            sensing,
            objective: result.scalar(&self.problem, l.objective_block) * l.gain_scale,
            multipliers: result.x[mu.range()].iter().map(|v| v * l.power_scale).collect(),
        }
    }

    /// Solver variable vector representing `sol` (inverse of [`Self::solution`]).
    pub fn variables_for(&self, sol: &BeamformingSolution) -> Vec<f64> {
        let l = &self.layout;
        let mut x = vec![0.0; self.problem.num_vars];
        let put = |x: &mut Vec<f64>, b: usize, m: &CMatrix| {
            let off = self.problem.block(b).offset;
            let packed = nfisac_sdp::expr::pack_hermitian(&(m / Complex64::new(l.power_scale, 0.0)));
            x[off..off + packed.len()].copy_from_slice(&packed);
        };
        for (c, w) in l.comm_blocks.iter().zip(&sol.comm) {
            match c {
                CommVariable::Matrix(b) => put(&mut x, *b, w),
                CommVariable::RankOne { block, direction } => {
                    x[self.problem.block(*block).offset] = quad_form(w, direction) / l.power_scale;
                }
            }
        }
        if let Some(b) = l.sensing_block {
            put(&mut x, b, &sol.sensing);
        }
        let mu = self.problem.block(l.multiplier_block);
        for (i, v) in sol.multipliers.iter().enumerate().take(mu.len) {
            x[mu.offset + i] = v / l.power_scale;
        }
        x[self.problem.block(l.objective_block).offset] = sol.objective / l.gain_scale;
        x
    }

    /// Minimum eigenvalue of every LMI (and slack of every linear row) of
    /// the scaled problem at `sol`, tagged by constraint.
    pub fn constraint_margins(&self, sol: &BeamformingSolution) -> Vec<(String, f64)> {
        let x = self.variables_for(sol);
        let mut out = Vec::new();
        for row in &self.problem.linear_rows {
            let v = row.eval(&x);
            let slack = match row.op {
                RowOp::Ge => v - row.rhs,
                RowOp::Le => row.rhs - v,
                RowOp::Eq => -(v - row.rhs).abs(),
            };
            out.push((row.tag.clone(), slack));
        }
        for lmi in &self.problem.lmi_rows {
            let m = lmi.matrix.eval(&x);
            let eig = nalgebra::SymmetricEigen::new(hermitian_part(&m)).eigenvalues;
            out.push((lmi.tag.clone(), eig.iter().copied().fold(f64::INFINITY, f64::min)));
        }
        out
    }
}

/// Largest duality gap accepted from a solve stopped by the iteration cap.
pub const MAX_ITER_GAP_TOL: f64 = 1e-4;

/// Classifies a solve for the SROCR loop: optimal, or stopped by the
/// iteration cap at a primal feasible point with a nearly closed gap. The
/// gap test rejects runaway iterates whose scaled residuals look small.
pub fn is_feasible_outcome(result: &SolverResult, feas_tol: f64) -> bool {
    match result.status {
        SolveStatus::Optimal => true,
        // A stalled or truncated run still yields a usable design when its
        // last iterate is primal feasible and nearly optimal.
        SolveStatus::MaxIter | SolveStatus::NumericalFailure => {
            result.is_primal_feasible(feas_tol)
                && result.residuals.duality_gap <= MAX_ITER_GAP_TOL
                && result.x.iter().all(|v| v.is_finite())
        }
        _ => false,
    }
}
