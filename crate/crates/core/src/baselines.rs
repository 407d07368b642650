//! Comparison designs: plain semidefinite relaxation with eigenvector
//! recovery, information-only beamforming, a planar-wavefront design and
//! the perfect-CSI design, next to the full rank-one relaxation loop.

use std::fmt;
use std::str::FromStr;

use nfisac_sdp::ConicSolver;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{channel, far_field_channel, CVector, CsiEstimate};
use crate::metrics::BeamformingSolution;
use crate::scenario::Scenario;
use crate::srocr::{init_relaxed, leading_eigvec, run_with, IterationRecord, SrocrSettings};
use crate::verifier::{validate, worst_case_beampattern, RobustnessReport, ValidationOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    Sdr,
    InfoOnly,
    FarField,
    PerfectCsi,
    Srocr,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 5] = [
        BaselineKind::Sdr,
        BaselineKind::InfoOnly,
        BaselineKind::FarField,
        BaselineKind::PerfectCsi,
        BaselineKind::Srocr,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BaselineKind::Sdr => "sdr",
            BaselineKind::InfoOnly => "info_only",
            BaselineKind::FarField => "far_field",
            BaselineKind::PerfectCsi => "perfect_csi",
            BaselineKind::Srocr => "srocr",
        }
    }
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BaselineKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme `{s}` (expected one of sdr, info_only, far_field, perfect_csi, srocr)")))
    }
}

#[derive(Debug, Clone)]
pub struct BaselineOutcome {
    pub kind: BaselineKind,
    /// Returned design; its `objective` is the achieved value.
    pub solution: BeamformingSolution,
    /// Objective of the problem that was solved, watts.
    pub design_objective: f64,
    /// Rank-relaxed objective of the design problem.
    pub relaxed_bound: f64,
    pub iterations: usize,
    pub trace: Vec<IterationRecord>,
    /// `lambda_2 / lambda_1` of the relaxed communication covariances.
    pub relaxed_rank_ratios: Vec<f64>,
    /// Scenario the design is judged against.
    pub evaluation: Scenario,
}

impl BaselineOutcome {
    pub fn achieved_objective(&self) -> f64 {
        self.solution.objective
    }

    pub fn report(&self, options: &ValidationOptions) -> Result<RobustnessReport> {
        validate(&self.solution, &self.evaluation, options)
    }
}

pub fn run_baseline(
    kind: BaselineKind,
    scenario: &Scenario,
    solver: &dyn ConicSolver,
    settings: &SrocrSettings,
) -> Result<BaselineOutcome> {
    match kind {
        BaselineKind::Sdr => sdr_solve(scenario, solver, settings),
        BaselineKind::InfoOnly => info_only_solve(scenario, solver, settings),
        BaselineKind::FarField => far_field_solve(scenario, solver, settings),
        BaselineKind::PerfectCsi => perfect_csi_solve(scenario, solver, settings),
        BaselineKind::Srocr => srocr_solve(scenario, solver, settings),
    }
}

fn looped(kind: BaselineKind, design: &Scenario, solver: &dyn ConicSolver, settings: &SrocrSettings, without_sensing: bool) -> Result<BaselineOutcome> {
    let (solution, state) = run_with(design, solver, settings, without_sensing)?;
    Ok(BaselineOutcome {
        kind,
        design_objective: solution.objective,
        relaxed_bound: state.relaxed_bound(),
        iterations: state.iteration,
        relaxed_rank_ratios: state.relaxed_rank_ratios.clone(),
        trace: state.trace,
        solution,
        evaluation: design.clone(),
    })
}

pub fn srocr_solve(scenario: &Scenario, solver: &dyn ConicSolver, settings: &SrocrSettings) -> Result<BaselineOutcome> {
    looped(BaselineKind::Srocr, scenario, solver, settings, false)
}

/// Rank-relaxed design; covariances failing the rank-one test are replaced
/// by their leading rank-one part and the objective is lowered to the
/// certified worst-case gain of the recovered design.
pub fn sdr_solve(scenario: &Scenario, solver: &dyn ConicSolver, settings: &SrocrSettings) -> Result<BaselineOutcome> {
    let state = init_relaxed(scenario, solver, settings)?;
    let relaxed = state.solution.clone();
    let ratios = state.relaxed_rank_ratios.clone();
    let mut sol = relaxed.clone();
    let mut vectors = Vec::with_capacity(sol.comm.len());
    let mut recovered = false;
    for (w, &ratio) in sol.comm.iter_mut().zip(&ratios) {
        let (l1, u) = leading_eigvec(w);
        let v = u * Complex64::new(l1.max(0.0).sqrt(), 0.0);
        if ratio > settings.rank_one_tol {
            *w = &v * v.adjoint();
            recovered = true;
        }
        vectors.push(v);
    }
    sol.vectors = Some(vectors);
    if recovered {
        sol.multipliers.clear();
        let worst = scenario
            .targets
            .iter()
            .map(|t| worst_case_beampattern(&sol, &t.csi))
            .fold(f64::INFINITY, f64::min);
        sol.objective = sol.objective.min(worst);
    }
    Ok(BaselineOutcome {
        kind: BaselineKind::Sdr,
        design_objective: relaxed.objective,
        relaxed_bound: relaxed.objective,
        iterations: 0,
        trace: state.trace,
        relaxed_rank_ratios: ratios,
        solution: sol,
        evaluation: scenario.clone(),
    })
}

/// Full loop with the sensing covariance fixed to zero.
pub fn info_only_solve(scenario: &Scenario, solver: &dyn ConicSolver, settings: &SrocrSettings) -> Result<BaselineOutcome> {
    looped(BaselineKind::InfoOnly, scenario, solver, settings, true)
}

/// Full loop with every error bound set to zero.
pub fn perfect_csi_solve(scenario: &Scenario, solver: &dyn ConicSolver, settings: &SrocrSettings) -> Result<BaselineOutcome> {
    looped(BaselineKind::PerfectCsi, &scenario.with_perfect_csi(), solver, settings, false)
}

/// Planar-wavefront model of a near-field channel: far-field phases with the
/// same pathloss and the same reference phase at the array centre.
fn planar_model(scenario: &Scenario, est: &CsiEstimate, position: crate::geometry::PolarPoint) -> CsiEstimate {
    let g = &scenario.geometry;
    let centre_phase = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * position.range / g.wavelength());
    let offset = &est.estimate - channel(g, position);
    CsiEstimate {
        estimate: far_field_channel(g, position) * centre_phase + offset,
        error_bound: est.error_bound,
    }
}

fn truth_or_model(scenario: &Scenario, truth: &Option<CVector>, position: crate::geometry::PolarPoint) -> CsiEstimate {
    CsiEstimate::exact(truth.clone().unwrap_or_else(|| channel(&scenario.geometry, position)))
}

/// Scenario whose estimates are the true channels (or the noiseless model
/// channels when no truth is recorded) with zero error bounds.
pub fn truth_scenario(scenario: &Scenario) -> Scenario {
    let mut s = scenario.clone();
    for u in &mut s.users {
        u.csi = truth_or_model(scenario, &u.truth, u.position);
    }
    for e in &mut s.eavesdroppers {
        e.csi = truth_or_model(scenario, &e.truth, e.position);
    }
    for t in &mut s.targets {
        t.csi = truth_or_model(scenario, &t.truth, t.position);
    }
    s
}

/// Designs on planar-wavefront estimates (same error offsets and bounds)
/// and is judged on the near-field estimates and error bounds, the same
/// uncertainty model the other schemes are certified against. The returned
/// objective is the worst-case target gain under that model; the
/// design-time value is kept separately.
pub fn far_field_solve(scenario: &Scenario, solver: &dyn ConicSolver, settings: &SrocrSettings) -> Result<BaselineOutcome> {
    let mut design = scenario.clone();
    for u in &mut design.users {
        u.csi = planar_model(scenario, &u.csi, u.position);
    }
    for e in &mut design.eavesdroppers {
        e.csi = planar_model(scenario, &e.csi, e.position);
    }
    for t in &mut design.targets {
        t.csi = planar_model(scenario, &t.csi, t.position);
    }
    let mut out = looped(BaselineKind::FarField, &design, solver, settings, false)?;
    out.solution.multipliers.clear();
    out.solution.objective = scenario
        .targets
        .iter()
        .map(|t| worst_case_beampattern(&out.solution, &t.csi))
        .fold(f64::INFINITY, f64::min);
    out.evaluation = scenario.clone();
    Ok(out)
}
