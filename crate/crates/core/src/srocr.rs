//! Sequential rank-one constraint relaxation.
//!
//! Starting from the rank-relaxed robust problem, each outer iteration adds
//! the cut `u_k^H W_k u_k >= v_k tr(W_k)` along the current leading
//! eigenvector of every `W_k` and pushes `v_k` towards one. A feasible
//! solve keeps the step `delta`; an infeasible one halves it for all users
//! and retries from the previous point.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use nfisac_sdp::{ConicSolver, SolveStatus, SolverSettings};

use crate::error::{Error, Result};
use crate::geometry::{CMatrix, CVector};
use crate::metrics::{format_sci, hermitian_part, total_power, BeamformingSolution};
use crate::robust::{assemble_p2_with, is_feasible_outcome, AssemblyOptions, RankCut, RobustProblem};
use crate::scenario::Scenario;
use crate::verifier::rank_ratio;

/// Primal residual accepted from a solve that stopped on the iteration cap.
pub const ACCEPT_FEAS_TOL: f64 = 1e-6;

/// Designs drawing less than this fraction of the current power unit are
/// re-solved in a smaller unit.
const UNDERUSE: f64 = 1e-3;

/// Unit for the next solve given the power a design actually used: the
/// budget, or ten times the usage when that is far below it.
fn power_unit(budget: f64, used: f64) -> f64 {
    if used >= UNDERUSE * budget {
        budget
    } else {
        (10.0 * used).max(1e-15 * budget)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SrocrSettings {
    pub v_init: f64,
    pub delta_init: f64,
    /// Relative change of the objective that counts as converged.
    pub objective_tol: f64,
    /// Largest accepted `lambda_2 / lambda_1` of a final covariance.
    pub rank_one_tol: f64,
    pub delta_floor: f64,
    pub max_outer_iterations: usize,
    pub solver: SolverSettings,
}

/// Signal and noise terms sit many orders below the power budget, so the
/// conic solves need more digits than the solver's own default.
pub const DEFAULT_SOLVER_TOL: f64 = 1e-10;

impl Default for SrocrSettings {
    fn default() -> Self {
        Self {
            v_init: 0.0,
            delta_init: 0.1,
            objective_tol: 1e-4,
            rank_one_tol: 1e-3,
            delta_floor: 1e-6,
            max_outer_iterations: 100,
            solver: SolverSettings {
                feas_tol: DEFAULT_SOLVER_TOL,
                gap_tol: DEFAULT_SOLVER_TOL,
                ..SolverSettings::default()
            },
        }
    }
}

impl SrocrSettings {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.v_init) {
            return Err(Error::Config(format!("v_init must lie in [0, 1), got {}", self.v_init)));
        }
        for (name, v) in [
            ("delta_init", self.delta_init),
            ("objective_tol", self.objective_tol),
            ("rank_one_tol", self.rank_one_tol),
            ("delta_floor", self.delta_floor),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_outer_iterations == 0 {
            return Err(Error::Config("max_outer_iterations must be positive".into()));
        }
        self.solver.validate()?;
        Ok(())
    }
}

/// One row of the convergence trace.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub v: Vec<f64>,
    pub delta: Vec<f64>,
    /// `lambda_max / tr` of each adopted `W_k`.
    pub concentration: Vec<f64>,
    pub objective: f64,
    pub status: SolveStatus,
    pub solve_time: Duration,
}

#[derive(Debug, Clone)]
pub struct SrocrState {
    pub iteration: usize,
    pub v: Vec<f64>,
    pub delta: Vec<f64>,
    /// Unit leading eigenvectors of the adopted `W_k`.
    pub u: Vec<CVector>,
    pub solution: BeamformingSolution,
    /// Adopted objective per iteration, watts; entry 0 is the relaxed bound.
    pub history: Vec<f64>,
    pub without_sensing: bool,
    pub trace: Vec<IterationRecord>,
    /// `lambda_2 / lambda_1` of each relaxed `W_k`.
    pub relaxed_rank_ratios: Vec<f64>,
    /// Unit of the matrix variables in the next solve, watts.
    pub power_scale: f64,
}

impl SrocrState {
    pub fn cuts(&self) -> Vec<RankCut> {
        self.u
            .iter()
            .zip(&self.v)
            .map(|(u, &v)| RankCut {
                direction: u.clone(),
                level: v,
            })
            .collect()
    }

    pub fn relaxed_bound(&self) -> f64 {
        self.history[0]
    }

    pub fn objective(&self) -> f64 {
        *self.history.last().expect("history starts with the relaxed bound")
    }
}

/// Largest eigenpair of a Hermitian matrix. Among equal top eigenvalues the
/// solver's first is taken; the vector's largest-modulus entry (lowest
/// index on ties) is made real and positive.
pub fn leading_eigvec(w: &CMatrix) -> (f64, CVector) {
    let eig = SymmetricEigen::new(hermitian_part(w));
    let mut best = 0;
    for i in 1..eig.eigenvalues.len() {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    let mut u: CVector = eig.eigenvectors.column(best).into_owned();
    u /= Complex64::new(u.norm(), 0.0);
    let max_mod = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(anchor) = u.iter().find(|z| z.norm() >= max_mod * (1.0 - 1e-12)).copied() {
        u *= anchor.conj() / anchor.norm();
    }
    (eig.eigenvalues[best], u)
}

/// `lambda_max / tr`, one when the matrix vanishes.
pub fn concentration(w: &CMatrix) -> f64 {
    let tr = w.trace().re;
    if tr <= 0.0 {
        return 1.0;
    }
    (leading_eigvec(w).0 / tr).clamp(0.0, 1.0)
}

/// `w = sqrt(lambda_1) u_1` under the [`leading_eigvec`] phase convention.
/// Refused when `lambda_2 / lambda_1 > tol` or `|W - w w^H|_F > tol tr(W)`.
pub fn extract_rank_one(w: &CMatrix, tol: f64) -> Result<CVector> {
    let w = hermitian_part(w);
    let n = w.nrows();
    let (l1, u) = leading_eigvec(&w);
    if l1 <= 0.0 {
        return if w.norm() == 0.0 {
            Ok(CVector::zeros(n))
        } else {
            Err(Error::NotRankOne { ratio: f64::INFINITY, tol })
        };
    }
    let mut eig: Vec<f64> = SymmetricEigen::new(w.clone()).eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    let ratio = eig.get(1).copied().unwrap_or(0.0).max(0.0) / l1;
    if ratio > tol {
        return Err(Error::NotRankOne { ratio, tol });
    }
    let v = u * Complex64::new(l1.sqrt(), 0.0);
    let residual = (&w - &v * v.adjoint()).norm();
    let tr = w.trace().re;
    if residual > tol * tr {
        return Err(Error::NotRankOne {
            ratio: residual / tr,
            tol,
        });
    }
    Ok(v)
}

/// Rank-relaxed problem plus one eigenvector cut per user at the state's
/// levels.
pub fn build_p3(scenario: &Scenario, state: &SrocrState) -> Result<RobustProblem> {
    assemble_p2_with(
        scenario,
        &AssemblyOptions {
            cuts: Some(state.cuts()),
            without_sensing: state.without_sensing,
            power_scale: Some(state.power_scale),
        },
    )
}

const MAX_RESCALES: usize = 4;

/// Solves at `scale`, re-solving in a better-matched power unit while the
/// design's power is off by more than a factor of ten. Far below the unit,
/// the solver's absolute tolerances swamp the noise terms and a returned
/// point cannot be trusted. Returns the attempt and the unit it was solved in.
fn solve_rescaled(
    scenario: &Scenario,
    cuts: Option<Vec<RankCut>>,
    without_sensing: bool,
    mut scale: f64,
    solver: &dyn ConicSolver,
    settings: &SolverSettings,
) -> Result<(Attempt, f64)> {
    let budget = scenario.power_budget;
    for _ in 0..MAX_RESCALES {
        let problem = assemble_p2_with(
            scenario,
            &AssemblyOptions {
                cuts: cuts.clone(),
                without_sensing,
                power_scale: Some(scale),
            },
        )?;
        let a = attempt(&problem, solver, settings)?;
        let Some(sol) = &a.solution else {
            return Ok((a, scale));
        };
        let used = total_power(sol);
        let next = power_unit(budget, used);
        if next >= scale / 10.0 && next <= scale * 10.0 {
            return Ok((a, scale));
        }
        log::debug!("design uses {used:.3e} W of {budget:.3e} W; re-solving in units of {next:.3e} W");
        scale = next;
    }
    let problem = assemble_p2_with(
        scenario,
        &AssemblyOptions {
            cuts,
            without_sensing,
            power_scale: Some(scale),
        },
    )?;
    Ok((attempt(&problem, solver, settings)?, scale))
}

#[derive(Clone)]
struct Attempt {
    solution: Option<BeamformingSolution>,
    status: SolveStatus,
    solve_time: Duration,
}

fn attempt(problem: &RobustProblem, solver: &dyn ConicSolver, settings: &SolverSettings) -> Result<Attempt> {
    let start = Instant::now();
    let result = solver.solve(&problem.problem, settings)?;
    let solve_time = start.elapsed();
    let feasible = is_feasible_outcome(&result, ACCEPT_FEAS_TOL);
    if matches!(result.status, SolveStatus::NumericalFailure | SolveStatus::MaxIter) {
        log::warn!(
            "solver stopped with status {} (primal residual {:.2e}, gap {:.2e}); {}",
            result.status,
            result.residuals.primal_feas,
            result.residuals.duality_gap,
            if feasible { "accepting the iterate" } else { "treating as infeasible" }
        );
    }
    Ok(Attempt {
        solution: feasible.then(|| problem.solution(&result)),
        status: result.status,
        solve_time,
    })
}

fn refresh(state: &mut SrocrState, record_status: SolveStatus, solve_time: Duration, update_v: bool) {
    let mut conc = Vec::with_capacity(state.u.len());
    for k in 0..state.solution.comm.len() {
        let w = &state.solution.comm[k];
        let c = concentration(w);
        if update_v {
            state.v[k] = (c + state.delta[k]).min(1.0);
        }
        state.u[k] = leading_eigvec(w).1;
        conc.push(c);
    }
    state.trace.push(IterationRecord {
        iteration: state.iteration,
        v: state.v.clone(),
        delta: state.delta.clone(),
        concentration: conc,
        objective: state.objective(),
        status: record_status,
        solve_time,
    });
}

/// Solves the rank-relaxed problem and seeds the iteration from it.
pub fn init_relaxed(scenario: &Scenario, solver: &dyn ConicSolver, settings: &SrocrSettings) -> Result<SrocrState> {
    init_relaxed_with(scenario, solver, settings, false)
}

/// [`init_relaxed`], optionally with the sensing covariance fixed to zero.
pub fn init_relaxed_with(
    scenario: &Scenario,
    solver: &dyn ConicSolver,
    settings: &SrocrSettings,
    without_sensing: bool,
) -> Result<SrocrState> {
    settings.validate()?;
    let (a, scale) = solve_rescaled(scenario, None, without_sensing, scenario.power_budget, solver, &settings.solver)?;
    let Some(solution) = a.solution.clone() else {
        return Err(Error::Infeasible(format!("rank-relaxed problem: solver status {}", a.status)));
    };
    let k = scenario.num_users();
    let n = scenario.antenna_count();
    let mut state = SrocrState {
        iteration: 0,
        v: vec![settings.v_init; k],
        delta: vec![settings.delta_init; k],
        u: vec![CVector::zeros(n); k],
        power_scale: scale,
        relaxed_rank_ratios: solution.comm.iter().map(rank_ratio).collect(),
        history: vec![solution.objective],
        solution,
        without_sensing,
        trace: Vec::new(),
    };
    refresh(&mut state, a.status, a.solve_time, false);
    Ok(state)
}

/// One outer iteration. Fails with [`Error::Stall`] once a step size drops
/// below the floor before every level reached one.
pub fn step(scenario: &Scenario, state: &mut SrocrState, solver: &dyn ConicSolver, settings: &SrocrSettings) -> Result<()> {
    let (a, scale) = solve_rescaled(
        scenario,
        Some(state.cuts()),
        state.without_sensing,
        state.power_scale,
        solver,
        &settings.solver,
    )?;
    match a.solution {
        Some(sol) => {
            state.history.push(sol.objective);
            state.power_scale = scale;
            state.solution = sol;
        }
        None => {
            for d in &mut state.delta {
                *d /= 2.0;
            }
            let t = state.objective();
            state.history.push(t);
        }
    }
    state.iteration += 1;
    refresh(state, a.status, a.solve_time, true);
    let min_delta = state.delta.iter().copied().fold(f64::INFINITY, f64::min);
    if min_delta < settings.delta_floor && state.v.iter().any(|&v| v < 1.0) {
        return Err(Error::Stall {
            iteration: state.iteration,
            delta: min_delta,
            v: state.v.clone(),
        });
    }
    Ok(())
}

fn rank_ratio_ok(state: &SrocrState, tol: f64) -> bool {
    state.solution.comm.iter().all(|w| extract_rank_one(w, tol).is_ok())
}

/// Converged once every level equals one, the adopted objective moved by at
/// most `objective_tol` relative, and every `W_k` passes the rank-one test.
pub fn is_converged(state: &SrocrState, settings: &SrocrSettings) -> bool {
    let h = &state.history;
    if h.len() < 2 || state.v.iter().any(|&v| v < 1.0) {
        return false;
    }
    let (prev, cur) = (h[h.len() - 2], h[h.len() - 1]);
    (cur - prev).abs() <= settings.objective_tol * prev.abs().max(cur.abs()) && rank_ratio_ok(state, settings.rank_one_tol)
}

/// Full loop; on success the solution carries the extracted beamformers.
pub fn run(scenario: &Scenario, solver: &dyn ConicSolver, settings: &SrocrSettings) -> Result<(BeamformingSolution, SrocrState)> {
    run_with(scenario, solver, settings, false)
}

pub fn run_with(
    scenario: &Scenario,
    solver: &dyn ConicSolver,
    settings: &SrocrSettings,
    without_sensing: bool,
) -> Result<(BeamformingSolution, SrocrState)> {
    let mut state = init_relaxed_with(scenario, solver, settings, without_sensing)?;
    while state.iteration < settings.max_outer_iterations {
        step(scenario, &mut state, solver, settings)?;
        log::debug!(
            "iteration {}: t = {:.6e}, v = {:?}, status {}",
            state.iteration,
            state.objective(),
            state.v,
            state.trace.last().map_or(SolveStatus::Optimal, |r| r.status)
        );
        if is_converged(&state, settings) {
            let mut sol = state.solution.clone();
            let vectors = sol
                .comm
                .iter()
                .map(|w| extract_rank_one(w, settings.rank_one_tol))
                .collect::<Result<Vec<_>>>()?;
            sol.vectors = Some(vectors);
            return Ok((sol, state));
        }
    }
    Err(Error::MaxIterations {
        iterations: state.iteration,
        v: state.v.clone(),
    })
}

/// Trace as CSV, one row per iteration with per-user columns. Solve times
/// are written as zero unless `walltime` is set, so output is reproducible.
pub fn trace_csv(trace: &[IterationRecord], walltime: bool) -> String {
    let k = trace.first().map_or(0, |r| r.v.len());
    let mut s = String::from("iteration,objective_w,status,solve_s");
    for i in 0..k {
        let _ = write!(s, ",v_{i},delta_{i},concentration_{i}");
    }
    s.push('\n');
    for r in trace {
        let secs = if walltime { r.solve_time.as_secs_f64() } else { 0.0 };
        let _ = write!(s, "{},{},{},{}", r.iteration, format_sci(r.objective), r.status, format_sci(secs));
        for i in 0..k {
            let _ = write!(
                s,
                ",{},{},{}",
                format_sci(r.v[i]),
                format_sci(r.delta[i]),
                format_sci(r.concentration[i])
            );
        }
        s.push('\n');
    }
    s
}
