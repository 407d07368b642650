//! Experiment configuration (TOML) and scenario instantiation.
//!
//! Entity positions may be given explicitly or left to seeded random
//! placement. Channel estimates are generated from the true channels so that
//! the truth always lies inside the uncertainty ball.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::baselines::BaselineKind;
use crate::error::{Error, Result};
use crate::geometry::{channel, region_bounds, sample_error_in_ball, ArrayGeometry, CVector, CsiEstimate, PolarPoint};
use crate::scenario::{CommUser, Eavesdropper, Scenario, Target};
use crate::srocr::SrocrSettings;
use crate::units::{db_to_linear, dbm_to_watts};

/// Optional coordinates of one entity; a missing coordinate is drawn at
/// random.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntityConfig {
    pub range_m: Option<f64>,
    pub angle_rad: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementConfig {
    /// Defaults to the Fresnel distance.
    pub range_min_m: Option<f64>,
    /// Defaults to half the Rayleigh distance.
    pub range_max_m: Option<f64>,
    #[serde(default = "default_angle_max")]
    pub angle_max_rad: f64,
    /// Randomly placed users and eavesdroppers are redrawn until the
    /// normalized correlation of their channel with every earlier user or
    /// eavesdropper is at most this value. 1 disables the check.
    #[serde(default = "default_max_correlation")]
    pub max_correlation: f64,
}

fn default_max_correlation() -> f64 {
    0.5
}

fn default_angle_max() -> f64 {
    PI / 3.0
}

impl Default for PlacementConfig {
    fn default() -> Self {
        Self {
            range_min_m: None,
            range_max_m: None,
            angle_max_rad: default_angle_max(),
            max_correlation: default_max_correlation(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub antennas: usize,
    pub frequency_hz: f64,
    /// Defaults to half a wavelength.
    pub spacing_m: Option<f64>,
    pub pathloss_exponent: f64,
    /// Defaults to `lambda / (4 pi)`.
    pub reference_pathloss: Option<f64>,
    pub power_dbm: f64,
    pub noise_dbm: f64,
    /// Defaults to `noise_dbm`.
    pub eve_noise_dbm: Option<f64>,
    pub sinr_threshold_db: f64,
    pub leakage_threshold_db: f64,
    pub cu_count: usize,
    pub eve_count: usize,
    pub target_count: usize,
    /// Normalized error bounds `eps = eta |h_est|` per entity class.
    pub eta_c: f64,
    pub eta_e: f64,
    pub eta_t: f64,
    pub placement: PlacementConfig,
    /// Leading entries fix positions of the first entities of each class.
    pub cu: Vec<EntityConfig>,
    pub eve: Vec<EntityConfig>,
    pub target: Vec<EntityConfig>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            antennas: 8,
            frequency_hz: 28e9,
            spacing_m: None,
            pathloss_exponent: 2.0,
            reference_pathloss: None,
            power_dbm: 30.0,
            noise_dbm: -80.0,
            eve_noise_dbm: None,
            sinr_threshold_db: 5.0,
            leakage_threshold_db: -3.0,
            cu_count: 2,
            eve_count: 1,
            target_count: 1,
            eta_c: 0.1,
            eta_e: 0.1,
            eta_t: 0.1,
            placement: PlacementConfig::default(),
            cu: Vec::new(),
            eve: Vec::new(),
            target: vec![
                EntityConfig {
                    range_m: Some(10.0),
                    angle_rad: Some(-PI / 4.0),
                },
                EntityConfig {
                    range_m: Some(10.0),
                    angle_rad: Some(PI / 5.0),
                },
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepVariable {
    #[serde(rename = "P0_dbm")]
    PowerDbm,
    #[serde(rename = "N")]
    Antennas,
    #[serde(rename = "K")]
    Users,
    #[serde(rename = "M")]
    Targets,
    #[serde(rename = "target_distance_m")]
    TargetDistance,
    #[serde(rename = "eta_c")]
    EtaUsers,
    #[serde(rename = "eta_e")]
    EtaEavesdroppers,
    #[serde(rename = "eta_t")]
    EtaTargets,
    #[serde(rename = "eta_all")]
    EtaAll,
}

impl SweepVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVariable::PowerDbm => "P0_dbm",
            SweepVariable::Antennas => "N",
            SweepVariable::Users => "K",
            SweepVariable::Targets => "M",
            SweepVariable::TargetDistance => "target_distance_m",
            SweepVariable::EtaUsers => "eta_c",
            SweepVariable::EtaEavesdroppers => "eta_e",
            SweepVariable::EtaTargets => "eta_t",
            SweepVariable::EtaAll => "eta_all",
        }
    }

    fn is_count(&self) -> bool {
        matches!(self, SweepVariable::Antennas | SweepVariable::Users | SweepVariable::Targets)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub schemes: Vec<BaselineKind>,
    pub seeds: Vec<u64>,
    pub mc_samples: usize,
    /// Feasibility and gap tolerance of each conic solve.
    pub solver_tol: Option<f64>,
    /// Write measured solve times; zero otherwise so output is reproducible.
    pub record_walltime: bool,
    /// Worker threads for sweeps; all cores when absent.
    pub threads: Option<usize>,
    pub delta_init: Option<f64>,
    pub objective_tol: Option<f64>,
    pub rank_one_tol: Option<f64>,
    pub max_outer_iterations: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schemes: vec![BaselineKind::Srocr],
            seeds: vec![0],
            mc_samples: 10_000,
            solver_tol: None,
            record_walltime: false,
            threads: None,
            delta_init: None,
            objective_tol: None,
            rank_one_tol: None,
            max_outer_iterations: None,
        }
    }
}

impl RunConfig {
    pub fn srocr_settings(&self) -> SrocrSettings {
        let mut s = SrocrSettings::default();
        if let Some(tol) = self.solver_tol {
            s.solver.feas_tol = tol;
            s.solver.gap_tol = tol;
        }
        if let Some(v) = self.delta_init {
            s.delta_init = v;
        }
        if let Some(v) = self.objective_tol {
            s.objective_tol = v;
        }
        if let Some(v) = self.rank_one_tol {
            s.rank_one_tol = v;
        }
        if let Some(v) = self.max_outer_iterations {
            s.max_outer_iterations = v;
        }
        s
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub scenario: ScenarioConfig,
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub run: RunConfig,
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

impl ExperimentConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.run.schemes.is_empty() {
            return fail("run.schemes must not be empty".into());
        }
        if self.run.seeds.is_empty() {
            return fail("run.seeds must not be empty".into());
        }
        let mut seeds = self.run.seeds.clone();
        seeds.sort_unstable();
        if seeds.windows(2).any(|w| w[0] == w[1]) {
            return fail("run.seeds must be distinct".into());
        }
        if self.run.mc_samples == 0 {
            return fail("run.mc_samples must be positive".into());
        }
        if self.run.threads == Some(0) {
            return fail("run.threads must be positive".into());
        }
        self.run.srocr_settings().validate()?;
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return fail("sweep.values must not be empty".into());
            }
            for &v in &sweep.values {
                if !v.is_finite() {
                    return fail(format!("sweep value {v} is not finite"));
                }
                if sweep.variable.is_count() && (v < 1.0 || v.fract() != 0.0) {
                    return fail(format!("sweep value {v} for {} must be a positive integer", sweep.variable.as_str()));
                }
            }
            for &v in &sweep.values {
                self.scenario.with_sweep(sweep.variable, v).validate()?;
            }
        } else {
            self.scenario.validate()?;
        }
        Ok(())
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.antennas == 0 {
            return fail("scenario.antennas must be positive".into());
        }
        if self.cu_count == 0 {
            return fail("scenario.cu_count must be positive".into());
        }
        if self.target_count == 0 {
            return fail("scenario.target_count must be positive".into());
        }
        for (name, v) in [
            ("frequency_hz", self.frequency_hz),
            ("pathloss_exponent", self.pathloss_exponent),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return fail(format!("scenario.{name} must be positive"));
            }
        }
        for (name, v) in [("eta_c", self.eta_c), ("eta_e", self.eta_e), ("eta_t", self.eta_t)] {
            if !(v.is_finite() && v >= 0.0) {
                return fail(format!("scenario.{name} must be nonnegative"));
            }
        }
        if !(self.placement.angle_max_rad > 0.0 && self.placement.angle_max_rad < PI / 2.0) {
            return fail("scenario.placement.angle_max_rad must lie in (0, pi/2)".into());
        }
        if !(self.placement.max_correlation > 0.0 && self.placement.max_correlation <= 1.0) {
            return fail("scenario.placement.max_correlation must lie in (0, 1]".into());
        }
        for (class, list) in [("cu", &self.cu), ("eve", &self.eve), ("target", &self.target)] {
            for (i, e) in list.iter().enumerate() {
                if let Some(r) = e.range_m {
                    if !(r.is_finite() && r > 0.0) {
                        return fail(format!("scenario.{class}[{i}].range_m must be positive"));
                    }
                }
                if let Some(a) = e.angle_rad {
                    if !(a.is_finite() && a.abs() <= PI / 2.0) {
                        return fail(format!("scenario.{class}[{i}].angle_rad must lie in [-pi/2, pi/2]"));
                    }
                }
            }
        }
        self.geometry()?;
        Ok(())
    }

    /// Copy with one sweep variable set.
    pub fn with_sweep(&self, variable: SweepVariable, value: f64) -> Self {
        let mut s = self.clone();
        match variable {
            SweepVariable::PowerDbm => s.power_dbm = value,
            SweepVariable::Antennas => s.antennas = value as usize,
            SweepVariable::Users => s.cu_count = value as usize,
            SweepVariable::Targets => s.target_count = value as usize,
            SweepVariable::TargetDistance => {
                s.target.resize(s.target_count.max(s.target.len()), EntityConfig::default());
                for t in &mut s.target {
                    t.range_m = Some(value);
                }
            }
            SweepVariable::EtaUsers => s.eta_c = value,
            SweepVariable::EtaEavesdroppers => s.eta_e = value,
            SweepVariable::EtaTargets => s.eta_t = value,
            SweepVariable::EtaAll => {
                s.eta_c = value;
                s.eta_e = value;
                s.eta_t = value;
            }
        }
        s
    }

    pub fn geometry(&self) -> Result<ArrayGeometry> {
        let mut g = ArrayGeometry::from_frequency(self.antennas, self.frequency_hz)?.with_pathloss_exponent(self.pathloss_exponent)?;
        if let Some(d) = self.spacing_m {
            g = g.with_spacing(d)?;
        }
        if let Some(r) = self.reference_pathloss {
            g = g.with_reference_pathloss(r)?;
        }
        Ok(g)
    }

    /// Scenario for `seed`. Each random quantity has its own stream keyed by
    /// entity class, index and purpose, so changing one count or one
    /// coordinate leaves unrelated draws unchanged. A user or eavesdropper
    /// redrawn by the correlation check depends on the entities placed
    /// before it.
    pub fn instantiate(&self, seed: u64) -> Result<Scenario> {
        self.validate()?;
        let geom = self.geometry()?;
        let bounds = region_bounds(&geom);
        let r_min = self.placement.range_min_m.unwrap_or(bounds.fresnel);
        let r_max = self.placement.range_max_m.unwrap_or(0.5 * bounds.rayleigh);
        if !(r_min > 0.0 && r_max >= r_min) {
            return Err(Error::Config(format!("empty placement range [{r_min}, {r_max}] m")));
        }
        let a_max = self.placement.angle_max_rad;
        let n = geom.antenna_count();

        let rho_max = self.placement.max_correlation;
        let draw = |class: u64, index: usize, given: Option<&EntityConfig>, avoid: &[CVector]| -> Result<PolarPoint> {
            let given = given.copied().unwrap_or_default();
            let mut ranges = stream(seed, class, index, 0);
            let mut angles = stream(seed, class, index, 1);
            for _ in 0..MAX_PLACEMENT_DRAWS {
                let range = given.range_m.unwrap_or_else(|| ranges.random_range(r_min..=r_max));
                let angle = given.angle_rad.unwrap_or_else(|| angles.random_range(-a_max..=a_max));
                let p = PolarPoint::new(range, angle)?;
                let fixed = given.range_m.is_some() && given.angle_rad.is_some();
                if fixed || rho_max >= 1.0 {
                    return Ok(p);
                }
                let h = channel(&geom, p);
                if avoid.iter().all(|g| correlation(&h, g) <= rho_max) {
                    return Ok(p);
                }
            }
            Err(Error::Config(format!(
                "could not place entity {index} of class {class} below correlation {rho_max} after {MAX_PLACEMENT_DRAWS} draws"
            )))
        };
        let mut placed: Vec<CVector> = Vec::new();
        let mut place = |class: u64, index: usize, given: Option<&EntityConfig>| -> Result<PolarPoint> {
            let p = draw(class, index, given, &placed)?;
            if class != CLASS_TARGET {
                placed.push(channel(&geom, p));
            }
            Ok(p)
        };
        let estimate = |class: u64, index: usize, p: PolarPoint, eta: f64| -> Result<(CsiEstimate, CVector)> {
            let truth = channel(&geom, p);
            let radius = eta * truth.norm() / (1.0 + eta);
            let est = &truth - sample_error_in_ball(n, radius, &mut stream(seed, class, index, 2));
            let bound = eta * est.norm();
            Ok((CsiEstimate::new(est, bound)?, truth))
        };

        let sinr = db_to_linear(self.sinr_threshold_db);
        let leak = db_to_linear(self.leakage_threshold_db);
        let noise = dbm_to_watts(self.noise_dbm);
        let eve_noise = dbm_to_watts(self.eve_noise_dbm.unwrap_or(self.noise_dbm));

        let mut users = Vec::with_capacity(self.cu_count);
        for k in 0..self.cu_count {
            let p = place(CLASS_USER, k, self.cu.get(k))?;
            let (csi, truth) = estimate(CLASS_USER, k, p, self.eta_c)?;
            users.push(CommUser {
                position: p,
                csi,
                noise_power: noise,
                sinr_threshold: sinr,
                truth: Some(truth),
            });
        }
        let mut eavesdroppers = Vec::with_capacity(self.eve_count);
        for l in 0..self.eve_count {
            let p = place(CLASS_EVE, l, self.eve.get(l))?;
            let (csi, truth) = estimate(CLASS_EVE, l, p, self.eta_e)?;
            eavesdroppers.push(Eavesdropper {
                position: p,
                csi,
                noise_power: eve_noise,
                leakage_thresholds: vec![leak; self.cu_count],
                truth: Some(truth),
            });
        }
        let mut targets = Vec::with_capacity(self.target_count);
        for m in 0..self.target_count {
            let p = place(CLASS_TARGET, m, self.target.get(m))?;
            let (csi, truth) = estimate(CLASS_TARGET, m, p, self.eta_t)?;
            targets.push(Target {
                position: p,
                csi,
                truth: Some(truth),
            });
        }
        Scenario::new(geom, users, eavesdroppers, targets, dbm_to_watts(self.power_dbm))
    }
}

const CLASS_USER: u64 = 1;
const MAX_PLACEMENT_DRAWS: usize = 10_000;
const CLASS_EVE: u64 = 2;
const CLASS_TARGET: u64 = 3;

fn correlation(a: &CVector, b: &CVector) -> f64 {
    a.dotc(b).norm() / (a.norm() * b.norm())
}

fn stream(seed: u64, class: u64, index: usize, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((class << 48) | ((index as u64) << 8) | purpose);
    rng
}
