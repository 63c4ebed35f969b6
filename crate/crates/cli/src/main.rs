use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nsp2d_cli::config::ScenarioConfig;
use nsp2d_cli::{commands, exit_code_for, threads_from_env, verify};

/// Pseudospectral laboratory for the scaled 2-D Navier-Stokes-Poisson system.
#[derive(Parser)]
#[command(name = "nsp2d", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate the configured scenario, writing norms.csv and snapshots.
    Run { config: PathBuf },
    /// Lifespan sweep over sweep.epsilons with one worker process each.
    Sweep { config: PathBuf },
    /// One lifespan probe (worker mode used by sweep).
    Probe {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Linear-theory verification battery (oracle, semigroup, decay fits).
    VerifyLinear {
        /// Reduced grid (N = 256) for the dispersive fit.
        #[arg(long)]
        quick: bool,
        /// Where to write the rates CSV (default: verify_linear.csv).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Phase-symbol sweep; prints a JSON report.
    VerifyPhase {
        #[arg(long)]
        epsilon: f64,
        /// Sign case: ++, +-, -+ or --.
        #[arg(long, default_value = "++", allow_hyphen_values = true)]
        case: String,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Optional path for the JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the decay exponent of a (t, value) CSV series.
    FitDecay {
        series: PathBuf,
        /// Fit window "a,b" in time.
        #[arg(long)]
        window: String,
    },
    /// Generate calibrated initial data and write it as a snapshot.
    GenInit {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}

fn dispatch(cli: Cli) -> nsp2d_core::Result<ExitCode> {
    let threads = threads_from_env();
    match cli.command {
        Cmd::Run { config } => {
            let cfg = ScenarioConfig::load(&config)?;
            let summary = commands::run(&cfg, threads)?;
            println!(
                "run complete: {} samples, {} snapshots, norms at {}",
                summary.samples,
                summary.snapshots,
                summary.norms_csv.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sweep { config } => {
            let cfg = ScenarioConfig::load(&config)?;
            let path = commands::sweep(&cfg, &config, threads)?;
            println!("sweep complete: {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Probe { config, epsilon, theta, out } => {
            let cfg = ScenarioConfig::load(&config)?;
            let res = commands::probe(&cfg, epsilon, theta, &out, threads)?;
            println!(
                "probe epsilon = {epsilon}: t_star = {}, crossed = {}",
                res.t_star, res.crossed
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::VerifyLinear { quick, out } => {
            let report = verify::verify_linear(quick, threads)?;
            for c in &report.criteria {
                println!("{}", c.line());
            }
            let path = out.unwrap_or_else(|| PathBuf::from("verify_linear.csv"));
            report.write_csv(&path)?;
            println!("rates CSV: {}", path.display());
            if report.all_pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
        Cmd::VerifyPhase { epsilon, case, samples, seed, out } => {
            let report = verify::verify_phase(epsilon, &case, samples, seed)?;
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| nsp2d_core::Error::Config(e.to_string()))?;
            if let Some(path) = out {
                nsp2d_core::io::atomic_write(&path, json.as_bytes())?;
            }
            println!("{json}");
            let pass = report.min_a >= 0.9 && report.min_abs_phi >= 0.5;
            println!(
                "{} phase-bounds (min_A {:.4}, min |phi| {:.4})",
                if pass { "PASS" } else { "FAIL" },
                report.min_a,
                report.min_abs_phi
            );
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Cmd::FitDecay { series, window } => {
            let (a, b) = window
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse::<f64>().ok()?, b.trim().parse::<f64>().ok()?)))
                .ok_or_else(|| {
                    nsp2d_core::Error::Config(format!(
                        "--window: expected 'a,b', got '{window}'"
                    ))
                })?;
            let fit = commands::fit_decay_file(&series, (a, b))?;
            println!("{}", commands::decay_fit_json(&fit));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::GenInit { config, out } => {
            let cfg = ScenarioConfig::load(&config)?;
            let json = commands::gen_init(&cfg, out.as_deref(), threads)?;
            println!("{json}");
            Ok(ExitCode::SUCCESS)
        }
    }
}
