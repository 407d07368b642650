use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nfisac::baselines::{run_baseline, BaselineKind};
use nfisac::config::{parse_config, ExperimentConfig};
use nfisac::experiments::{emit_beampattern, emit_csv, read_file, run_sweep, status_text, write_file, GridSpec, SolutionFile};
use nfisac::geometry::region_bounds;
use nfisac::srocr::trace_csv;
use nfisac::verifier::{validate, ValidationOptions};
use nfisac::Error;
use nfisac_sdp::InteriorPointSolver;

#[derive(Parser)]
#[command(name = "nfisac", version, about = "Robust near-field ISAC beamforming experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design beamformers for one seeded scenario with one scheme.
    Solve(Common),
    /// Run every (sweep value, seed, scheme) point of a config.
    Sweep(Common),
    /// Re-check a stored solution against its scenario.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        solution: PathBuf,
    },
    /// Evaluate the beampattern of a stored solution on a polar grid.
    Beampattern {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        solution: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML); built-in defaults when absent.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, value_name = "NAME")]
    scheme: Option<BaselineKind>,
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    #[arg(long, value_name = "COUNT")]
    mc_samples: Option<usize>,
    #[arg(long, value_name = "FLOAT")]
    solver_tol: Option<f64>,
}

#[derive(Args)]
struct GridArgs {
    /// Defaults to the Fresnel distance.
    #[arg(long)]
    range_min: Option<f64>,
    /// Defaults to 1.25 times the farthest entity.
    #[arg(long)]
    range_max: Option<f64>,
    #[arg(long, default_value_t = 100)]
    range_count: usize,
    #[arg(long, default_value_t = -std::f64::consts::FRAC_PI_2)]
    angle_min: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    angle_max: f64,
    #[arg(long, default_value_t = 181)]
    angle_count: usize,
}

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;
const EXIT_CONFIG: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) | Error::Solver(_) => EXIT_INFEASIBLE,
        Error::Stall { .. } | Error::MaxIterations { .. } | Error::NotRankOne { .. } => EXIT_NOT_CONVERGED,
        Error::Config(_) | Error::InvalidInput(_) | Error::Io { .. } => EXIT_CONFIG,
    }
}

impl Common {
    fn load(&self) -> nfisac::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => parse_config(&read_file(p)?)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.scheme {
            cfg.run.schemes = vec![s];
        }
        if let Some(s) = self.seed {
            cfg.run.seeds = vec![s];
        }
        if let Some(n) = self.mc_samples {
            cfg.run.mc_samples = n;
        }
        if let Some(t) = self.solver_tol {
            cfg.run.solver_tol = Some(t);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn out_dir(&self) -> nfisac::Result<&Path> {
        std::fs::create_dir_all(&self.out).map_err(|e| Error::io(&self.out, e))?;
        Ok(&self.out)
    }
}

fn solve(common: &Common) -> nfisac::Result<u8> {
    let cfg = common.load()?;
    let (scheme, seed) = (cfg.run.schemes[0], cfg.run.seeds[0]);
    let scenario = cfg.scenario.instantiate(seed)?;
    let out = run_baseline(scheme, &scenario, &InteriorPointSolver, &cfg.run.srocr_settings())?;
    let report = out.report(&ValidationOptions {
        mc_samples: cfg.run.mc_samples,
        seed,
    })?;
    let dir = common.out_dir()?;
    write_file(&dir.join("solution.toml"), &SolutionFile::new(scheme, seed, &out.solution).to_toml())?;
    write_file(&dir.join("trace.csv"), &trace_csv(&out.trace, cfg.run.record_walltime))?;
    let text = format!(
        "scheme = {scheme}\nseed = {seed}\niterations = {}\ndesign_objective_w = {:e}\nrelaxed_bound_w = {:e}\n{}",
        out.iterations,
        out.design_objective,
        out.relaxed_bound,
        report.to_text()
    );
    write_file(&dir.join("report.txt"), &text)?;
    print!("{text}");
    Ok(0)
}

fn sweep(common: &Common) -> nfisac::Result<u8> {
    if common.config.is_none() {
        return Err(Error::Config("sweep needs --config".into()));
    }
    let cfg = common.load()?;
    let rows = run_sweep(&cfg)?;
    let dir = common.out_dir()?;
    emit_csv(&rows, &dir.join("results.csv"))?;
    write_file(&dir.join("status.csv"), &status_text(&rows))?;
    let failed = rows.iter().filter(|r| r.status != "ok").count();
    println!("{} points written to {}, {failed} without a design", rows.len(), dir.join("results.csv").display());
    Ok(0)
}

fn load_solution(common: &Common, path: &Path) -> nfisac::Result<(ExperimentConfig, SolutionFile, u64)> {
    let cfg = common.load()?;
    let file = SolutionFile::parse(&read_file(path)?)?;
    let seed = common.seed.unwrap_or(file.seed);
    Ok((cfg, file, seed))
}

fn verify(common: &Common, path: &Path) -> nfisac::Result<u8> {
    let (cfg, file, seed) = load_solution(common, path)?;
    let scenario = cfg.scenario.instantiate(seed)?;
    let sol = file.to_solution()?;
    if sol.comm.len() != scenario.num_users() || sol.sensing.nrows() != scenario.antenna_count() {
        return Err(Error::Config("solution does not match the scenario dimensions".into()));
    }
    let report = validate(
        &sol,
        &scenario,
        &ValidationOptions {
            mc_samples: cfg.run.mc_samples,
            seed,
        },
    )?;
    let text = report.to_text();
    if common.out != Path::new(".") {
        write_file(&common.out_dir()?.join("report.txt"), &text)?;
    }
    print!("{text}");
    Ok(if report.pass { 0 } else { EXIT_VERIFY_FAILED })
}

fn beampattern(common: &Common, path: &Path, grid: &GridArgs) -> nfisac::Result<u8> {
    let (cfg, file, seed) = load_solution(common, path)?;
    let scenario = cfg.scenario.instantiate(seed)?;
    let sol = file.to_solution()?;
    if sol.sensing.nrows() != scenario.antenna_count() {
        return Err(Error::Config("solution does not match the array size".into()));
    }
    let farthest = scenario
        .users
        .iter()
        .map(|u| u.position.range)
        .chain(scenario.eavesdroppers.iter().map(|e| e.position.range))
        .chain(scenario.targets.iter().map(|t| t.position.range))
        .fold(0.0, f64::max);
    let spec = GridSpec {
        range_min: grid.range_min.unwrap_or_else(|| region_bounds(&scenario.geometry).fresnel),
        range_max: grid.range_max.unwrap_or(1.25 * farthest),
        range_count: grid.range_count,
        angle_min: grid.angle_min,
        angle_max: grid.angle_max,
        angle_count: grid.angle_count,
    };
    let target = common.out_dir()?.join("beampattern.csv");
    let peak = emit_beampattern(&sol, &scenario.geometry, &spec, &target)?;
    println!(
        "wrote {}; peak {:e} W at range {:.4} m, angle {:.4} rad",
        target.display(),
        peak.gain,
        peak.range,
        peak.angle
    );
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Solve(c) => solve(c),
        Command::Sweep(c) => sweep(c),
        Command::Verify { common, solution } => verify(common, solution),
        Command::Beampattern { common, solution, grid } => beampattern(common, solution, grid),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
