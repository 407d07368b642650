//! Independent certification of the robust constraints.
//!
//! The core is an exact trust-region solver for
//! `min q(D) = D^H A D + 2 Re(b^H D) + c` over `|D| <= eps` with `A`
//! Hermitian and possibly indefinite. Worst-case SINRs are found by
//! bisection on the SINR level, each level tested with the trust-region
//! oracle, and a seeded Monte Carlo pass tries to falsify the result.

use std::fmt::Write as _;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{sample_error, sample_error_in_ball, CMatrix, CVector, CsiEstimate};
use crate::metrics::{
    beampattern_gain, hermitian_part, nominal_cu_sinr, nominal_eve_sinr, quad_form, total_power, BeamformingSolution,
};
use crate::robust::{assemble_p2_with, AssemblyOptions};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq)]
pub struct TrustRegionResult {
    pub min_value: f64,
    pub argmin: CVector,
    pub multiplier: f64,
    pub boundary_active: bool,
}

/// Relative threshold below which the gradient component on the minimal
/// eigenspace counts as zero (hard case).
const HARD_CASE_TOL: f64 = 1e-10;

pub fn quadratic_value(a: &CMatrix, b: &CVector, c: f64, d: &CVector) -> f64 {
    quad_form(a, d) + 2.0 * b.dotc(d).re + c
}

/// Global minimizer of `D^H A D + 2 Re(b^H D) + c` over `|D| <= eps`.
pub fn trust_region_min(a: &CMatrix, b: &CVector, c: f64, eps: f64) -> TrustRegionResult {
    let n = b.len();
    assert!(eps >= 0.0, "radius must be nonnegative");
    if eps == 0.0 || n == 0 {
        return TrustRegionResult {
            min_value: c,
            argmin: CVector::zeros(n),
            multiplier: 0.0,
            boundary_active: false,
        };
    }
    let eig = SymmetricEigen::new(hermitian_part(a));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let lam: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs: Vec<CVector> = order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
    let beta: Vec<Complex64> = vecs.iter().map(|v| v.dotc(b)).collect();
    let beta2: Vec<f64> = beta.iter().map(|z| z.norm_sqr()).collect();

    let lam_scale = lam.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let lam_min = lam[0];
    let cluster: Vec<usize> = (0..n).filter(|&i| lam[i] <= lam_min + 1e-12 * lam_scale.max(1e-300)).collect();
    let b_norm = b.norm();

    let norm_at = |nu: f64, skip: &[usize]| -> f64 {
        (0..n)
            .filter(|i| !skip.contains(i))
            .map(|i| {
                let den = lam[i] + nu;
                if beta2[i] == 0.0 {
                    0.0
                } else {
                    beta2[i] / (den * den)
                }
            })
            .sum::<f64>()
            .sqrt()
    };
    let build = |nu: f64, skip: &[usize]| -> Vec<Complex64> {
        (0..n)
            .map(|i| {
                if skip.contains(&i) || beta[i] == Complex64::new(0.0, 0.0) {
                    Complex64::new(0.0, 0.0)
                } else {
                    -beta[i] / (lam[i] + nu)
                }
            })
            .collect()
    };
    let finish = |z: Vec<Complex64>, nu: f64, active: bool| -> TrustRegionResult {
        let mut value = c;
        let mut d = CVector::zeros(n);
        for i in 0..n {
            value += lam[i] * z[i].norm_sqr() + 2.0 * (beta[i].conj() * z[i]).re;
            d += &vecs[i] * z[i];
        }
        TrustRegionResult {
            min_value: value,
            argmin: d,
            multiplier: nu,
            boundary_active: active,
        }
    };

    // Interior solution when A is positive definite and the Newton point fits.
    if lam_min > 0.0 && norm_at(0.0, &[]) <= eps {
        return finish(build(0.0, &[]), 0.0, false);
    }

    let nu_low = (-lam_min).max(0.0);
    let cluster_grad: f64 = cluster.iter().map(|&i| beta2[i]).sum::<f64>().sqrt();
    let hard = cluster_grad <= HARD_CASE_TOL * (b_norm + lam_scale * eps).max(f64::MIN_POSITIVE);
    if hard {
        let rest = norm_at(nu_low, &cluster);
        if rest <= eps {
            // Hard case: pad the stationary point with a minimal-eigenspace
            // component to reach the boundary.
            let mut z = build(nu_low, &cluster);
            let tau = (eps * eps - rest * rest).max(0.0).sqrt();
            z[cluster[0]] = Complex64::new(tau, 0.0);
            let active = tau > 0.0 || lam_min < 0.0 || rest > 0.0;
            return finish(z, nu_low, active || nu_low > 0.0);
        }
    }

    // Secular equation |z(nu)| = eps on (nu_low, nu_high]; 1/|z| - 1/eps is
    // nearly linear in nu, so Newton on it converges fast.
    let skip: &[usize] = if hard { &cluster } else { &[] };
    let mut lo = nu_low;
    let mut hi = nu_low.max(b_norm / eps - lam_min) + f64::EPSILON * (1.0 + lam_scale);
    while norm_at(hi, skip) > eps {
        hi = 2.0 * hi + 1.0;
    }
    let mut nu = hi;
    for _ in 0..200 {
        let s = norm_at(nu, skip);
        let phi = 1.0 / s - 1.0 / eps;
        if phi.abs() <= 1e-15 / eps {
            break;
        }
        if phi < 0.0 {
            lo = nu;
        } else {
            hi = nu;
        }
        // d|z|/dnu = -sum beta^2/(lam+nu)^3 / |z|.
        let ds = -(0..n)
            .filter(|i| !skip.contains(i))
            .map(|i| beta2[i] / (lam[i] + nu).powi(3))
            .sum::<f64>()
            / s;
        let dphi = -ds / (s * s);
        let mut next = nu - phi / dphi;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - nu).abs() <= 1e-16 * nu.abs().max(1e-300) {
            nu = next;
            break;
        }
        nu = next;
    }
    finish(build(nu, skip), nu, true)
}

/// `min over the error ball of h^H Psi h`.
pub fn worst_case_beampattern(sol: &BeamformingSolution, est: &CsiEstimate) -> f64 {
    let psi = sol.total_covariance();
    let h = &est.estimate;
    let b = &psi * h;
    let c = h.dotc(&b).re;
    trust_region_min(&psi, &b, c, est.error_bound).min_value.max(0.0)
}

/// Largest `gamma` in `[lo, hi]` with `pass(gamma)`, given `pass(lo)` and
/// `!pass(hi)`. Geometric midpoints once `lo > 0`; stops at relative width
/// `1e-10` and returns the certified end (`lo`) together with `hi`.
fn bisect(mut lo: f64, mut hi: f64, pass: impl Fn(f64) -> bool) -> (f64, f64) {
    for _ in 0..300 {
        if hi - lo <= 1e-10 * hi {
            break;
        }
        let mid = if lo > 0.0 { (lo * hi).sqrt() } else { 0.5 * hi };
        if mid <= lo || mid >= hi {
            break;
        }
        if pass(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// `h^H (W_k - gamma I_k) h - gamma sigma^2` as a trust-region instance in
/// the error, with `I_k` the interference-plus-sensing covariance.
fn sinr_margin_instance(sol: &BeamformingSolution, h: &CVector, k: usize, noise: f64, gamma: f64, sign: f64) -> (CMatrix, CVector, f64) {
    let a = (hermitian_part(&sol.comm[k]) - sol.interference_covariance(k) * Complex64::new(gamma, 0.0)) * Complex64::new(sign, 0.0);
    let b = &a * h;
    let c = h.dotc(&b).re - sign * gamma * noise;
    (a, b, c)
}

/// Worst-case SINR of user `k` over the error ball (certified lower bound,
/// bisection width 1e-10 relative). Zero when the signal can vanish.
pub fn worst_case_cu_sinr(sol: &BeamformingSolution, est: &CsiEstimate, k: usize, noise: f64) -> crate::Result<f64> {
    let nominal = nominal_cu_sinr(sol, &est.estimate, k, noise)?;
    if est.error_bound == 0.0 || nominal == 0.0 {
        return Ok(nominal);
    }
    let pass = |gamma: f64| {
        let (a, b, c) = sinr_margin_instance(sol, &est.estimate, k, noise, gamma, 1.0);
        trust_region_min(&a, &b, c, est.error_bound).min_value >= 0.0
    };
    Ok(bisect(0.0, nominal, pass).0)
}

/// Best-case SINR an eavesdropper achieves on stream `k` over its error
/// ball (certified upper bound). The bracket's upper end
/// `lambda_max(W_k) (|h| + eps)^2 / sigma^2` bounds the numerator over the
/// ball and the denominator below by the noise.
pub fn best_case_eve_sinr(sol: &BeamformingSolution, est: &CsiEstimate, k: usize, noise: f64) -> crate::Result<f64> {
    let nominal = nominal_eve_sinr(sol, &est.estimate, k, noise)?;
    if est.error_bound == 0.0 {
        return Ok(nominal);
    }
    let lmax = SymmetricEigen::new(hermitian_part(&sol.comm[k]))
        .eigenvalues
        .iter()
        .copied()
        .fold(0.0, f64::max);
    let upper = lmax * (est.estimate.norm() + est.error_bound).powi(2) / noise;
    if upper <= nominal {
        return Ok(nominal);
    }
    // Level gamma is exceeded somewhere iff min of the negated margin < 0.
    let exceeded = |gamma: f64| {
        let (a, b, c) = sinr_margin_instance(sol, &est.estimate, k, noise, gamma, -1.0);
        trust_region_min(&a, &b, c, est.error_bound).min_value < 0.0
    };
    Ok(bisect(nominal, upper, exceeded).1)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MonteCarloReport {
    pub samples: usize,
    pub user_violations: Vec<usize>,
    /// Indexed `[l][k]`.
    pub eavesdropper_violations: Vec<Vec<usize>>,
    pub target_violations: Vec<usize>,
}

impl MonteCarloReport {
    pub fn total(&self) -> usize {
        self.user_violations.iter().sum::<usize>()
            + self.eavesdropper_violations.iter().flatten().sum::<usize>()
            + self.target_violations.iter().sum::<usize>()
    }
}

/// Relative tolerance of the Monte Carlo comparisons.
pub const MC_TOLERANCE: f64 = 1e-6;

fn entity_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Three of every four draws lie on the sphere, the rest uniformly in the ball.
fn draw(est: &CsiEstimate, i: usize, rng: &mut ChaCha8Rng) -> CVector {
    let n = est.len();
    let d = if i % 4 == 3 {
        sample_error_in_ball(n, est.error_bound, rng)
    } else {
        sample_error(n, est.error_bound, 1.0, rng)
    };
    &est.estimate + d
}

/// Boundary-biased samples of every entity's error ball; counts samples
/// where a constraint fails by more than [`MC_TOLERANCE`] relative.
pub fn monte_carlo_check(sol: &BeamformingSolution, scenario: &Scenario, samples: usize, seed: u64) -> MonteCarloReport {
    assert!(samples >= 1, "at least one sample is required");
    let mut report = MonteCarloReport {
        samples,
        ..Default::default()
    };
    for (k, u) in scenario.users.iter().enumerate() {
        let mut rng = entity_rng(seed, k as u64);
        let limit = u.sinr_threshold * (1.0 - MC_TOLERANCE);
        let count = (0..samples)
            .filter(|&i| {
                let h = draw(&u.csi, i, &mut rng);
                nominal_cu_sinr(sol, &h, k, u.noise_power).expect("validated scenario") < limit
            })
            .count();
        report.user_violations.push(count);
    }
    for (l, e) in scenario.eavesdroppers.iter().enumerate() {
        let mut rng = entity_rng(seed, 1000 + l as u64);
        let mut counts = vec![0; e.leakage_thresholds.len()];
        for i in 0..samples {
            let h = draw(&e.csi, i, &mut rng);
            for (k, &g) in e.leakage_thresholds.iter().enumerate() {
                if nominal_eve_sinr(sol, &h, k, e.noise_power).expect("validated scenario") > g * (1.0 + MC_TOLERANCE) {
                    counts[k] += 1;
                }
            }
        }
        report.eavesdropper_violations.push(counts);
    }
    let limit = sol.objective * (1.0 - MC_TOLERANCE);
    for (m, t) in scenario.targets.iter().enumerate() {
        let mut rng = entity_rng(seed, 2000 + m as u64);
        let count = (0..samples)
            .filter(|&i| {
                let h = draw(&t.csi, i, &mut rng);
                beampattern_gain(sol, &h) < limit
            })
            .count();
        report.target_violations.push(count);
    }
    report
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessReport {
    pub power: f64,
    pub power_budget: f64,
    /// `P0 - power`, watts.
    pub power_slack: f64,
    /// `lambda_2 / lambda_1` of every communication covariance.
    pub rank_ratios: Vec<f64>,
    pub objective: f64,
    pub target_worst_gain: Vec<f64>,
    /// `worst / t - 1`.
    pub target_slack: Vec<f64>,
    pub user_worst_sinr: Vec<f64>,
    /// `worst / threshold - 1`.
    pub user_slack: Vec<f64>,
    /// Indexed `[l][k]`.
    pub eavesdropper_best_sinr: Vec<Vec<f64>>,
    /// `1 - best / threshold`.
    pub eavesdropper_slack: Vec<Vec<f64>>,
    /// Minimum eigenvalue (or row slack) of each constraint of the scaled
    /// robust problem at the returned multipliers; empty without multipliers.
    pub lmi_margins: Vec<(String, f64)>,
    pub monte_carlo: MonteCarloReport,
    pub pass: bool,
}

/// Slack tolerance for the pass flag.
pub const SLACK_TOLERANCE: f64 = 1e-6;
/// Absolute power tolerance, watts.
pub const POWER_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationOptions {
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            mc_samples: 10_000,
            seed: 0,
        }
    }
}

pub fn rank_ratio(w: &CMatrix) -> f64 {
    let mut e: Vec<f64> = SymmetricEigen::new(hermitian_part(w)).eigenvalues.iter().copied().collect();
    e.sort_by(|a, b| b.total_cmp(a));
    if e.is_empty() || e[0] <= 0.0 {
        return 0.0;
    }
    (e.get(1).copied().unwrap_or(0.0).max(0.0) / e[0]).clamp(0.0, 1.0)
}

pub fn validate(sol: &BeamformingSolution, scenario: &Scenario, options: &ValidationOptions) -> crate::Result<RobustnessReport> {
    let power = total_power(sol);
    let rel = |value: f64, reference: f64| {
        if reference != 0.0 {
            value / reference - 1.0
        } else {
            0.0
        }
    };
    let target_worst_gain: Vec<f64> = scenario.targets.iter().map(|t| worst_case_beampattern(sol, &t.csi)).collect();
    let target_slack = target_worst_gain.iter().map(|&g| rel(g, sol.objective)).collect();
    let user_worst_sinr = scenario
        .users
        .iter()
        .enumerate()
        .map(|(k, u)| worst_case_cu_sinr(sol, &u.csi, k, u.noise_power))
        .collect::<crate::Result<Vec<_>>>()?;
    let user_slack = user_worst_sinr
        .iter()
        .zip(&scenario.users)
        .map(|(&g, u)| rel(g, u.sinr_threshold))
        .collect();
    let eavesdropper_best_sinr = scenario
        .eavesdroppers
        .iter()
        .map(|e| {
            (0..e.leakage_thresholds.len())
                .map(|k| best_case_eve_sinr(sol, &e.csi, k, e.noise_power))
                .collect::<crate::Result<Vec<_>>>()
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let eavesdropper_slack = eavesdropper_best_sinr
        .iter()
        .zip(&scenario.eavesdroppers)
        .map(|(row, e)| row.iter().zip(&e.leakage_thresholds).map(|(&b, &g)| -rel(b, g)).collect())
        .collect();
    let lmi_margins = if sol.multipliers.is_empty() {
        Vec::new()
    } else {
        assemble_p2_with(scenario, &AssemblyOptions::default())?.constraint_margins(sol)
    };
    let monte_carlo = monte_carlo_check(sol, scenario, options.mc_samples.max(1), options.seed);
    let mut report = RobustnessReport {
        power,
        power_budget: scenario.power_budget,
        power_slack: scenario.power_budget - power,
        rank_ratios: sol.comm.iter().map(rank_ratio).collect(),
        objective: sol.objective,
        target_worst_gain,
        target_slack,
        user_worst_sinr,
        user_slack,
        eavesdropper_best_sinr,
        eavesdropper_slack,
        lmi_margins,
        monte_carlo,
        pass: false,
    };
    report.pass = report.power_slack >= -POWER_TOLERANCE
        && report.min_slack() >= -SLACK_TOLERANCE
        && report.monte_carlo.total() == 0;
    Ok(report)
}

impl RobustnessReport {
    /// Smallest relative slack over targets, users and eavesdroppers.
    pub fn min_slack(&self) -> f64 {
        self.target_slack
            .iter()
            .chain(&self.user_slack)
            .chain(self.eavesdropper_slack.iter().flatten())
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_user_slack(&self) -> f64 {
        self.user_slack.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest `best / threshold - 1` over eavesdropper/user pairs; NaN when
    /// there are no eavesdroppers.
    pub fn max_leakage_excess(&self) -> f64 {
        self.eavesdropper_slack
            .iter()
            .flatten()
            .map(|s| -s)
            .fold(f64::NAN, f64::max)
    }

    /// `key = value` lines with fixed field names.
    pub fn to_text(&self) -> String {
        use crate::metrics::format_sci as f;
        let mut s = String::new();
        let _ = writeln!(s, "pass = {}", self.pass);
        let _ = writeln!(s, "power_w = {}", f(self.power));
        let _ = writeln!(s, "power_budget_w = {}", f(self.power_budget));
        let _ = writeln!(s, "power_slack_w = {}", f(self.power_slack));
        let _ = writeln!(s, "objective_w = {}", f(self.objective));
        for (k, r) in self.rank_ratios.iter().enumerate() {
            let _ = writeln!(s, "user.{k}.rank_ratio = {}", f(*r));
        }
        for (m, (g, sl)) in self.target_worst_gain.iter().zip(&self.target_slack).enumerate() {
            let _ = writeln!(s, "target.{m}.worst_gain_w = {}", f(*g));
            let _ = writeln!(s, "target.{m}.slack = {}", f(*sl));
        }
        for (k, (g, sl)) in self.user_worst_sinr.iter().zip(&self.user_slack).enumerate() {
            let _ = writeln!(s, "user.{k}.worst_sinr = {}", f(*g));
            let _ = writeln!(s, "user.{k}.slack = {}", f(*sl));
        }
        for (l, (row, slack)) in self.eavesdropper_best_sinr.iter().zip(&self.eavesdropper_slack).enumerate() {
            for (k, (b, sl)) in row.iter().zip(slack).enumerate() {
                let _ = writeln!(s, "eavesdropper.{l}.user.{k}.best_sinr = {}", f(*b));
                let _ = writeln!(s, "eavesdropper.{l}.user.{k}.slack = {}", f(*sl));
            }
        }
        for (tag, v) in &self.lmi_margins {
            let _ = writeln!(s, "constraint.{}.margin = {}", tag.replace(' ', "_"), f(*v));
        }
        let mc = &self.monte_carlo;
        let _ = writeln!(s, "monte_carlo.samples = {}", mc.samples);
        for (k, v) in mc.user_violations.iter().enumerate() {
            let _ = writeln!(s, "monte_carlo.user.{k}.violations = {v}");
        }
        for (l, row) in mc.eavesdropper_violations.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                let _ = writeln!(s, "monte_carlo.eavesdropper.{l}.user.{k}.violations = {v}");
            }
        }
        for (m, v) in mc.target_violations.iter().enumerate() {
            let _ = writeln!(s, "monte_carlo.target.{m}.violations = {v}");
        }
        s
    }
}
