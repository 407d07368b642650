//! Sweep runner and file outputs.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use nfisac_sdp::InteriorPointSolver;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{run_baseline, BaselineKind};
use crate::config::{ExperimentConfig, ScenarioConfig};
use crate::error::{Error, Result};
use crate::geometry::{ArrayGeometry, CMatrix, CVector};
use crate::metrics::{beampattern_csv, beampattern_map, format_sci, BeamformingSolution};
use crate::units::linear_to_db;
use crate::verifier::ValidationOptions;

pub const CSV_HEADER: &str =
    "seed,scheme,sweep_var,sweep_value,objective_w,objective_db,iterations,walltime_ms,pass,min_cu_slack,max_eve_slack";

/// Label used in the `sweep_var` column when the config has no sweep.
pub const NO_SWEEP: &str = "none";

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub seed: u64,
    pub scheme: BaselineKind,
    pub sweep_var: String,
    pub sweep_value: f64,
    /// Achieved objective, watts; NaN when the run failed.
    pub objective_w: f64,
    pub iterations: usize,
    pub walltime_ms: f64,
    pub pass: bool,
    /// Smallest `worst / threshold - 1` over users.
    pub min_cu_slack: f64,
    /// Largest `best / threshold - 1` over eavesdropper/user pairs; NaN
    /// without eavesdroppers.
    pub max_eve_slack: f64,
    /// `ok` or the error that ended the run.
    pub status: String,
}

impl ResultRow {
    pub fn objective_db(&self) -> f64 {
        linear_to_db(self.objective_w)
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.scheme,
            self.sweep_var,
            format_sci(self.sweep_value),
            format_sci(self.objective_w),
            format_sci(self.objective_db()),
            self.iterations,
            format_sci(self.walltime_ms),
            self.pass,
            format_sci(self.min_cu_slack),
            format_sci(self.max_eve_slack),
        )
    }
}

/// Runs one scheme on one instantiated scenario and summarizes it.
pub fn run_point(
    scenario_cfg: &ScenarioConfig,
    cfg: &ExperimentConfig,
    seed: u64,
    scheme: BaselineKind,
    sweep_var: &str,
    sweep_value: f64,
) -> ResultRow {
    let start = Instant::now();
    let mut row = ResultRow {
        seed,
        scheme,
        sweep_var: sweep_var.to_string(),
        sweep_value,
        objective_w: f64::NAN,
        iterations: 0,
        walltime_ms: 0.0,
        pass: false,
        min_cu_slack: f64::NAN,
        max_eve_slack: f64::NAN,
        status: "ok".into(),
    };
    let settings = cfg.run.srocr_settings();
    let options = ValidationOptions {
        mc_samples: cfg.run.mc_samples,
        seed,
    };
    let result = scenario_cfg
        .instantiate(seed)
        .and_then(|s| run_baseline(scheme, &s, &InteriorPointSolver, &settings))
        .and_then(|out| out.report(&options).map(|r| (out, r)));
    match result {
        Ok((out, report)) => {
            row.objective_w = out.achieved_objective();
            row.iterations = out.iterations;
            row.pass = report.pass;
            row.min_cu_slack = report.min_user_slack();
            row.max_eve_slack = report.max_leakage_excess();
        }
        Err(e) => {
            log::warn!("seed {seed}, scheme {scheme}, {sweep_var} = {sweep_value}: {e}");
            row.status = e.to_string();
        }
    }
    if cfg.run.record_walltime {
        row.walltime_ms = start.elapsed().as_secs_f64() * 1e3;
    }
    row
}

/// Every (value, seed, scheme) combination in config order. Points run in
/// parallel; failures become rows with a status and never abort the sweep.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let (var, values) = match &cfg.sweep {
        Some(s) => (s.variable.as_str(), s.values.clone()),
        None => (NO_SWEEP, vec![0.0]),
    };
    let mut points = Vec::new();
    for &value in &values {
        let scenario = match &cfg.sweep {
            Some(s) => cfg.scenario.with_sweep(s.variable, value),
            None => cfg.scenario.clone(),
        };
        for &seed in &cfg.run.seeds {
            for &scheme in &cfg.run.schemes {
                points.push((scenario.clone(), seed, scheme, value));
            }
        }
    }
    let work = || -> Vec<ResultRow> {
        points
            .par_iter()
            .map(|(s, seed, scheme, value)| run_point(s, cfg, *seed, *scheme, var, *value))
            .collect()
    };
    match cfg.run.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

pub fn csv_text(rows: &[ResultRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_csv_line());
        s.push('\n');
    }
    s
}

/// `seed,scheme,sweep_value,status` per row; the main CSV has no status column.
pub fn status_text(rows: &[ResultRow]) -> String {
    let mut s = String::from("seed,scheme,sweep_value,status\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},\"{}\"", r.seed, r.scheme, format_sci(r.sweep_value), r.status.replace('"', "'"));
    }
    s
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::invalid("no rows to write"));
    }
    write_file(path, &csv_text(rows))
}

/// Inclusive, evenly spaced polar grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub range_min: f64,
    pub range_max: f64,
    pub range_count: usize,
    pub angle_min: f64,
    pub angle_max: f64,
    pub angle_count: usize,
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

impl GridSpec {
    pub fn ranges(&self) -> Vec<f64> {
        linspace(self.range_min, self.range_max, self.range_count)
    }

    pub fn angles(&self) -> Vec<f64> {
        linspace(self.angle_min, self.angle_max, self.angle_count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub range: f64,
    pub angle: f64,
    pub gain: f64,
}

/// Beampattern CSV plus its peak (first maximum in row-major order).
pub fn beampattern_with_peak(sol: &BeamformingSolution, geom: &ArrayGeometry, grid: &GridSpec) -> Result<(String, Peak)> {
    if grid.range_count == 0 || grid.angle_count == 0 {
        return Err(Error::invalid("beampattern grid must be nonempty"));
    }
    let (ranges, angles) = (grid.ranges(), grid.angles());
    let map = beampattern_map(sol, geom, &ranges, &angles)?;
    let mut peak = Peak {
        range: ranges[0],
        angle: angles[0],
        gain: map[(0, 0)],
    };
    for (i, &r) in ranges.iter().enumerate() {
        for (j, &a) in angles.iter().enumerate() {
            if map[(i, j)] > peak.gain {
                peak = Peak {
                    range: r,
                    angle: a,
                    gain: map[(i, j)],
                };
            }
        }
    }
    Ok((beampattern_csv(&map, &ranges, &angles), peak))
}

pub fn peak_line(p: &Peak) -> String {
    format!(
        "peak range_m = {} angle_rad = {} gain_w = {}\n",
        format_sci(p.range),
        format_sci(p.angle),
        format_sci(p.gain)
    )
}

/// Writes the grid to `path` and the peak line to `path` with `.peak`
/// appended.
pub fn emit_beampattern(sol: &BeamformingSolution, geom: &ArrayGeometry, grid: &GridSpec, path: &Path) -> Result<Peak> {
    let (csv, peak) = beampattern_with_peak(sol, geom, grid)?;
    write_file(path, &csv)?;
    let mut side = path.as_os_str().to_owned();
    side.push(".peak");
    write_file(Path::new(&side), &peak_line(&peak))?;
    Ok(peak)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexMatrixFile {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl ComplexMatrixFile {
    fn from_matrix(m: &CMatrix) -> Self {
        let rows = |f: fn(&Complex64) -> f64| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect();
        Self {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.re.len();
        if self.im.len() != n || self.re.iter().chain(&self.im).any(|r| r.len() != n) {
            return Err(Error::Config("matrix must be square with matching re/im parts".into()));
        }
        Ok(CMatrix::from_fn(n, n, |i, j| Complex64::new(self.re[i][j], self.im[i][j])))
    }
}

/// Stored design with the scenario seed it was computed for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub scheme: BaselineKind,
    pub seed: u64,
    pub objective_w: f64,
    pub multipliers: Vec<f64>,
    pub comm: Vec<ComplexMatrixFile>,
    pub sensing: ComplexMatrixFile,
    /// Beamformers as `[re, im]` rows, when extracted.
    pub vectors: Option<Vec<ComplexMatrixFile>>,
}

impl SolutionFile {
    pub fn new(scheme: BaselineKind, seed: u64, sol: &BeamformingSolution) -> Self {
        let as_column = |v: &CVector| ComplexMatrixFile {
            re: vec![v.iter().map(|z| z.re).collect()],
            im: vec![v.iter().map(|z| z.im).collect()],
        };
        Self {
            scheme,
            seed,
            objective_w: sol.objective,
            multipliers: sol.multipliers.clone(),
            comm: sol.comm.iter().map(ComplexMatrixFile::from_matrix).collect(),
            sensing: ComplexMatrixFile::from_matrix(&sol.sensing),
            vectors: sol.vectors.as_ref().map(|vs| vs.iter().map(as_column).collect()),
        }
    }

    pub fn to_solution(&self) -> Result<BeamformingSolution> {
        let comm = self.comm.iter().map(ComplexMatrixFile::to_matrix).collect::<Result<Vec<_>>>()?;
        let sensing = self.sensing.to_matrix()?;
        let n = sensing.nrows();
        if comm.iter().any(|w| w.nrows() != n) {
            return Err(Error::Config("covariance sizes differ".into()));
        }
        let vectors = match &self.vectors {
            None => None,
            Some(vs) => Some(
                vs.iter()
                    .map(|v| {
                        if v.re.len() != 1 || v.im.len() != 1 || v.re[0].len() != n || v.im[0].len() != n {
                            return Err(Error::Config("beamformer length does not match the array".into()));
                        }
                        Ok(CVector::from_iterator(n, v.re[0].iter().zip(&v.im[0]).map(|(&a, &b)| Complex64::new(a, b))))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        Ok(BeamformingSolution {
            comm,
            vectors,
            sensing,
            objective: self.objective_w,
            multipliers: self.multipliers.clone(),
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("solution serializes")
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}
