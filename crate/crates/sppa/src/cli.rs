//! Command implementations behind the `sppa` binary.
//!
//! Exit codes: 0 success, 1 verification violation, 2 invalid configuration
//! or usage, 3 model-assumption violation in the scenario set.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{ExperimentConfig, ScheduleKind, SweepConfig};
use crate::rates::RateCertificate;
use crate::schedule::Schedule;
use crate::sim::{monte_carlo, McConfig};
use crate::stochastic::ScenarioDistribution;
use crate::verify::{self, SuiteConfig};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "sppa",
    version,
    about = "Stochastic proximal point iteration on Hadamard spaces: experiments, rate certificates, verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a seeded Monte Carlo experiment; writes a stats CSV plus a
    /// certificate sidecar JSON.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config's output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the certified convergence rates in exact log-space.
    Rates {
        #[arg(long)]
        config: PathBuf,
        /// Target accuracies ε.
        #[arg(long = "eps", value_delimiter = ',', default_values_t = [1.0, 0.1, 0.01])]
        eps: Vec<f64>,
        /// Confidence levels λ for the almost-sure rate ρ'(λ, ε).
        #[arg(long, value_delimiter = ',', default_values_t = [0.05])]
        confidence: Vec<f64>,
    },
    /// Run the verification suites; nonzero exit on any violation.
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
        /// Also validate this scenario/experiment config and run the pathwise
        /// checks on it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides every slack tolerance (negative forces failures; useful
        /// as a negative control).
        #[arg(long)]
        slack_tol: Option<f64>,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the cross product of schedules and seeds from a sweep config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output directory for per-cell CSVs and the summary.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

/// Runs a parsed command, mapping errors to the documented exit codes.
pub fn run(cli: Cli) -> u8 {
    let outcome = match cli.command {
        Command::Run { config, seed, out } => cmd_run(&config, seed, out),
        Command::Rates {
            config,
            eps,
            confidence,
        } => cmd_rates(&config, &eps, &confidence),
        Command::Verify {
            level,
            config,
            slack_tol,
            out,
        } => cmd_verify(level, config.as_deref(), slack_tol, out.as_deref()),
        Command::Sweep { config, out } => cmd_sweep(&config, &out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// 2 for configuration/usage problems, 3 for model-assumption violations.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Model(_) => 3,
        _ => 2,
    }
}

#[derive(Serialize)]
struct RunSidecar<'a> {
    schema: u32,
    config: &'a ExperimentConfig,
    schedule: Schedule,
    certificate: &'a RateCertificate,
    sigma_measured: f64,
    x_star: &'a crate::geometry::Point,
    logged_n: &'a [u64],
}

fn cmd_run(config_path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<u8> {
    let (mut cfg, dist) = ExperimentConfig::load(config_path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(o) = out {
        cfg.out = Some(o);
    }
    let out_path = cfg.out.clone().ok_or_else(|| {
        Error::Config("no output path: set \"out\" in the config or pass --out".into())
    })?;

    let schedule = cfg.schedule.resolve(&dist);
    let x_star = dist.zero_of_mean()?;
    let stats = monte_carlo(
        &dist,
        schedule,
        &cfg.x0,
        &McConfig {
            n_steps: cfg.n_steps,
            replications: cfg.replications,
            seed: cfg.seed,
            eps_grid: cfg.eps_grid.clone(),
        },
    )?;
    let cert = RateCertificate::pinned(&dist, &cfg.x0, schedule, Some(stats.sigma_measured))?;

    if let Some(dir) = out_path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut csv = std::io::BufWriter::new(std::fs::File::create(&out_path)?);
    stats.write_csv(&mut csv, &cert)?;
    csv.flush()?;

    let sidecar_path = out_path.with_extension("cert.json");
    let sidecar = RunSidecar {
        schema: crate::config::SCHEMA_VERSION,
        config: &cfg,
        schedule,
        certificate: &cert,
        sigma_measured: stats.sigma_measured,
        x_star: &x_star,
        logged_n: &stats.logged_n,
    };
    std::fs::write(&sidecar_path, serde_json::to_string_pretty(&sidecar)?)?;

    println!(
        "wrote {} ({} logged steps, R={}) and {}",
        out_path.display(),
        stats.logged_n.len(),
        stats.replications,
        sidecar_path.display()
    );
    Ok(0)
}

fn cmd_rates(config_path: &Path, eps: &[f64], confidence: &[f64]) -> Result<u8> {
    let (cfg, dist) = ExperimentConfig::load(config_path)?;
    if cfg.schedule != ScheduleKind::Harmonic {
        return Err(Error::Config(
            "rate tables apply to the harmonic schedule; the fast schedule's guarantee is u/(n+2)"
                .into(),
        ));
    }
    if eps.iter().any(|&e| e.is_nan() || e <= 0.0)
        || confidence.iter().any(|&l| l.is_nan() || l <= 0.0)
    {
        return Err(Error::Config(
            "eps and confidence values must be positive".into(),
        ));
    }
    let schedule = Schedule::Harmonic;
    let cert = RateCertificate::pinned(&dist, &cfg.x0, schedule, None)?;
    println!(
        "b={} c={} alpha_bar={} Lambda={} C={} D={}",
        cert.b, cert.c, cert.alpha_bar, cert.lambda_sq_bound, cert.big_c, cert.big_d
    );
    print!(
        "{:>12} {:>12} {:>16} {:>16} {:>14}",
        "eps", "chi(eps/2c)", "ln_rho", "log10_rho", "rho"
    );
    for l in confidence {
        print!(" {:>20}", format!("ln_rho'({l})"));
    }
    println!();
    for &e in eps {
        let chi = schedule.chi(e / (2.0 * cert.c));
        let rho = cert.rho(schedule, e);
        let rho_str = rho
            .exact
            .map(|v| v.to_string())
            .unwrap_or_else(|| "saturated".into());
        print!(
            "{:>12} {:>12} {:>16.6e} {:>16.6e} {:>14}",
            e,
            chi,
            rho.ln,
            rho.log10(),
            rho_str
        );
        for &l in confidence {
            print!(" {:>20.6e}", cert.rho_prime(schedule, l, e).ln);
        }
        println!();
    }
    Ok(0)
}

fn cmd_verify(
    level: Level,
    config: Option<&Path>,
    slack_tol: Option<f64>,
    out: Option<&Path>,
) -> Result<u8> {
    let mut suite = match level {
        Level::Quick => SuiteConfig::quick(),
        Level::Full => SuiteConfig::full(),
    };
    suite.tol_override = slack_tol;

    let mut reports = verify::verify_all(&suite);

    // A user-supplied config is validated and its distribution gets the
    // pathwise treatment too.
    if let Some(path) = config {
        let dist = load_any_config(path)?;
        dist.zero_of_mean()?;
        let x0 = crate::verify::sample_point(
            &dist.space(),
            &mut crate::stochastic::RngStream::new(suite.seed),
        );
        let tol = slack_tol.unwrap_or_else(|| verify::slack_tol(&dist.space()));
        let started = std::time::Instant::now();
        let mut rng = crate::stochastic::RngStream::new(suite.seed ^ 0xcf6);
        let traj = crate::sim::run_trajectory(
            &dist,
            Schedule::Harmonic,
            &x0,
            suite.pathwise_steps.min(2_000),
            &mut rng,
        )?;
        for beta in [0.25, 0.5] {
            let mut c =
                verify::check_quasi_fejer_step(&dist, Schedule::Harmonic, &traj, beta, tol)?
                    .into_check(started);
            c.name = format!("pathwise/quasi_fejer_beta{beta}/user_config");
            reports.push(c);
        }
        let mut c = verify::check_monotonicity_step(&dist, Schedule::Harmonic, &traj, tol)?
            .into_check(started);
        c.name = "pathwise/monotonicity_step/user_config".into();
        reports.push(c);
    }

    let mut failures = 0u64;
    for r in &reports {
        let status = if r.passed() { "pass" } else { "FAIL" };
        println!(
            "[{status}] {:<55} cases={:<8} min_slack={:<13.3e} violations={}",
            r.name, r.cases, r.min_slack, r.violations
        );
        if !r.passed() {
            failures += 1;
        }
    }
    let json = serde_json::to_string_pretty(&reports)?;
    if let Some(path) = out {
        std::fs::write(path, &json)?;
        println!("report written to {}", path.display());
    }
    if failures > 0 {
        eprintln!("{failures} check(s) failed");
        return Ok(1);
    }
    println!("all {} checks passed", reports.len());
    Ok(0)
}

/// Accepts either a bare scenario file or a full experiment config.
fn load_any_config(path: &Path) -> Result<ScenarioDistribution> {
    match ExperimentConfig::load(path) {
        Ok((_, dist)) => Ok(dist),
        Err(_) => crate::config::load_scenarios(path),
    }
}

fn cmd_sweep(config_path: &Path, out_dir: &Path) -> Result<u8> {
    let (cfg, dist) = SweepConfig::load(config_path)?;
    std::fs::create_dir_all(out_dir)?;
    let mut summary =
        String::from("schedule,seed,final_mean_sq_dist,final_stderr,sigma_measured\n");
    for &kind in &cfg.schedules {
        let schedule = kind.resolve(&dist);
        for &seed in &cfg.seeds {
            let stats = monte_carlo(
                &dist,
                schedule,
                &cfg.x0,
                &McConfig {
                    n_steps: cfg.n_steps,
                    replications: cfg.replications,
                    seed,
                    eps_grid: cfg.eps_grid.clone(),
                },
            )?;
            let cert =
                RateCertificate::pinned(&dist, &cfg.x0, schedule, Some(stats.sigma_measured))?;
            let tag = match kind {
                ScheduleKind::Harmonic => "harmonic",
                ScheduleKind::FastHarmonic => "fast_harmonic",
            };
            let path = out_dir.join(format!("{tag}_seed{seed}.csv"));
            let mut w = std::io::BufWriter::new(std::fs::File::create(&path)?);
            stats.write_csv(&mut w, &cert)?;
            w.flush()?;
            let last = stats.logged_n.len() - 1;
            summary.push_str(&format!(
                "{tag},{seed},{},{},{}\n",
                stats.mean_sq_dist[last], stats.stderr[last], stats.sigma_measured
            ));
        }
    }
    let summary_path = out_dir.join("summary.csv");
    std::fs::write(&summary_path, summary)?;
    println!(
        "swept {} schedule(s) x {} seed(s) into {}",
        cfg.schedules.len(),
        cfg.seeds.len(),
        out_dir.display()
    );
    Ok(0)
}

/// Applies `SPPA_THREADS` to the global worker pool. Called once by the
/// binary before dispatch.
pub fn init_threads() {
    if let Ok(v) = std::env::var("SPPA_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_exit_codes() {
        assert_eq!(exit_code(&Error::Config("bad".into())), 2);
        assert_eq!(exit_code(&Error::Model("violated".into())), 3);
        assert_eq!(exit_code(&Error::Io(std::io::Error::other("disk"))), 2);
    }
}
