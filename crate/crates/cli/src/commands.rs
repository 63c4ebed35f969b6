//! Scenario orchestration: run, sweep, probe workers, initial-data
//! generation and decay fitting.

use std::path::{Path, PathBuf};
use std::process::Command;

use nsp2d_core::grid::Grid2D;
use nsp2d_core::init::{generate_initial, InitProfile};
use nsp2d_core::io::{read_series_csv, write_snapshot, Csv};
use nsp2d_core::norms::{fit_decay, DecayFit};
use nsp2d_core::solver::{run_trajectory, PrimitiveState, SystemForm};
use nsp2d_core::split::{lifespan_probe, LifespanResult, ProbeConfig};
use nsp2d_core::{Error, Result};

use crate::config::ScenarioConfig;

/// Summary of a completed `run`.
#[derive(Debug)]
pub struct RunSummary {
    pub samples: usize,
    pub norms_csv: PathBuf,
    pub snapshots: usize,
}

/// Integrates the configured scenario, streaming `norms.csv` rows and
/// periodic snapshots into the output directory. Partial outputs survive a
/// numerical abort (each sample rewrites the CSV atomically); on abort the
/// last sampled state is saved as `abort.nsp` before the error propagates.
pub fn run(cfg: &ScenarioConfig, threads: usize) -> Result<RunSummary> {
    std::fs::create_dir_all(&cfg.output_dir)?;
    let grid = Grid2D::with_options(cfg.grid_n, cfg.grid_length, cfg.grid_dealias, threads)?;
    let params = cfg.simulation_params()?;
    let init = generate_initial(&grid, &params, cfg.profile, cfg.seed)?;
    let (state, form) = match cfg.profile {
        InitProfile::GaussianIrrotational => (init.main, SystemForm::MainIrrotational),
        InitProfile::GaussianVortex | InitProfile::Combined => (
            PrimitiveState {
                time: 0.0,
                rho_pert: init.main.rho_pert.clone(),
                u: init.main.u.add(&init.vortex),
            },
            SystemForm::FullNsp,
        ),
    };

    let mut samples = Vec::new();
    let mut t = 0.0;
    while t <= cfg.t_end + 1e-12 {
        samples.push(t.min(cfg.t_end));
        t += cfg.sample_every;
    }

    let norms_csv = cfg.output_dir.join("norms.csv");
    let mut csv = Csv::new(nsp2d_core::norms::NormReport::CSV_HEADER);
    let mut snapshots = 0usize;
    let mut next_snapshot = 0.0;
    let mut last_state: Option<PrimitiveState> = None;
    let out_dir = cfg.output_dir.clone();
    let snapshot_every = cfg.snapshot_every;

    let result = run_trajectory(&state, &params, form, &samples, |st, rep| {
        csv.push_row(&rep.csv_row());
        csv.write(&norms_csv)?;
        if snapshot_every > 0.0 && st.time >= next_snapshot - 1e-9 {
            let path = out_dir.join(format!("snapshot_t{:.3}.nsp", st.time));
            let fields = st.fields_with_grad_phi();
            let refs: Vec<&nsp2d_core::grid::SpectralField> = fields.iter().collect();
            write_snapshot(&path, st.time, &refs)?;
            snapshots += 1;
            while next_snapshot <= st.time + 1e-9 {
                next_snapshot += snapshot_every;
            }
        }
        last_state = Some(st.clone());
        Ok(())
    });

    match result {
        Ok(reports) => Ok(RunSummary {
            samples: reports.len(),
            norms_csv,
            snapshots,
        }),
        Err(e) => {
            if let Some(st) = &last_state {
                let fields = st.fields_with_grad_phi();
                let refs: Vec<&nsp2d_core::grid::SpectralField> = fields.iter().collect();
                let _ = write_snapshot(&out_dir.join("abort.nsp"), st.time, &refs);
            }
            Err(e)
        }
    }
}

const PROBE_CSV_HEADER: &str = "epsilon,theta,threshold,t_star,t_cap,crossed";

fn probe_config(cfg: &ScenarioConfig, threads: usize) -> ProbeConfig {
    ProbeConfig {
        grid_n: cfg.grid_n,
        box_length: cfg.grid_length,
        dt: cfg.dt,
        sample_every: cfg.sample_every,
        seed: cfg.seed,
        cap_factor: cfg.sweep_cap_factor,
        threads,
    }
}

/// One lifespan probe; writes its result row and the sampled energy series.
pub fn probe(
    cfg: &ScenarioConfig,
    epsilon: f64,
    theta: f64,
    out: &Path,
    threads: usize,
) -> Result<LifespanResult> {
    let pc = probe_config(cfg, threads);
    let res = lifespan_probe(epsilon, theta, &pc)?;
    let mut csv = Csv::new(PROBE_CSV_HEADER);
    csv.push_row(&probe_row(&res));
    if res.aborted {
        csv.push_comment("aborted=1");
    }
    csv.write(out)?;

    let mut energy = Csv::new("t,e3");
    for (t, e) in &res.energy_series {
        energy.push_row(&format!("{t},{e}"));
    }
    energy.write(&out.with_extension("energy.csv"))?;
    Ok(res)
}

fn probe_row(r: &LifespanResult) -> String {
    format!(
        "{},{},{},{},{},{}",
        r.epsilon,
        r.theta,
        r.threshold,
        r.t_star,
        r.t_cap,
        u8::from(r.crossed)
    )
}

/// Slope of `log t_star` against `log(1/eps)` over the sweep.
pub fn lifespan_slope(rows: &[(f64, f64)]) -> f64 {
    let n = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|(e, _)| (1.0 / e).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|(_, t)| t.ln()).collect();
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    sxy / sxx
}

/// Runs one worker process per sweep point and aggregates `lifespan.csv`.
pub fn sweep(cfg: &ScenarioConfig, config_path: &Path, threads: usize) -> Result<PathBuf> {
    std::fs::create_dir_all(&cfg.output_dir)?;
    let exe = std::env::current_exe()?;
    let mut children = Vec::new();
    let mut outs = Vec::new();
    for (i, &eps) in cfg.sweep_epsilons.iter().enumerate() {
        let out = cfg.output_dir.join(format!("probe_{i}.csv"));
        let child = Command::new(&exe)
            .arg("probe")
            .arg("--config")
            .arg(config_path)
            .arg("--epsilon")
            .arg(format!("{eps}"))
            .arg("--theta")
            .arg(format!("{}", cfg.sweep_theta))
            .arg("--out")
            .arg(&out)
            .env("NSP2D_THREADS", threads.to_string())
            .spawn()?;
        children.push((eps, child));
        outs.push(out);
    }
    for (eps, child) in &mut children {
        let status = child.wait()?;
        if !status.success() {
            let msg = format!("probe worker for epsilon = {eps} failed with {status}");
            return Err(if status.code() == Some(2) {
                Error::WorkerNumerical(msg)
            } else {
                Error::Config(msg)
            });
        }
    }

    let mut csv = Csv::new(PROBE_CSV_HEADER);
    let mut slope_rows = Vec::new();
    for out in &outs {
        let text = std::fs::read_to_string(out)?;
        for line in text.lines() {
            if line.starts_with('#') || line.starts_with("epsilon") || line.is_empty() {
                continue;
            }
            csv.push_row(line);
            let cols: Vec<&str> = line.split(',').collect();
            let eps: f64 = cols[0].parse().unwrap_or(f64::NAN);
            let t_star: f64 = cols[3].parse().unwrap_or(f64::NAN);
            slope_rows.push((eps, t_star));
        }
    }
    let slope = lifespan_slope(&slope_rows);
    csv.push_comment(&format!("fitted_slope={slope}"));
    let path = cfg.output_dir.join("lifespan.csv");
    csv.write(&path)?;
    Ok(path)
}

/// Initial-data generation: snapshot of `(rho - 1, u1, u2)` for the combined
/// state plus the measured calibration norms.
pub fn gen_init(cfg: &ScenarioConfig, out: Option<&Path>, threads: usize) -> Result<String> {
    std::fs::create_dir_all(&cfg.output_dir)?;
    let grid = Grid2D::with_options(cfg.grid_n, cfg.grid_length, cfg.grid_dealias, threads)?;
    let params = cfg.simulation_params()?;
    let init = generate_initial(&grid, &params, cfg.profile, cfg.seed)?;
    let u = init.main.u.add(&init.vortex);
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| cfg.output_dir.join("init.nsp"));
    write_snapshot(&path, 0.0, &[&init.main.rho_pert, &u.x1, &u.x2])?;
    Ok(format!(
        "{{\"path\":\"{}\",\"measured_y4\":{},\"measured_h3\":{}}}",
        path.display(),
        init.measured_y4,
        init.measured_h3
    ))
}

/// Fits the decay exponent of a `(t, value)` series file.
pub fn fit_decay_file(path: &Path, window: (f64, f64)) -> Result<DecayFit> {
    let series = read_series_csv(path)?;
    fit_decay(&series, window)
}

/// JSON-lines rendering of a fit.
pub fn decay_fit_json(fit: &DecayFit) -> String {
    format!(
        "{{\"exponent\":{:.6},\"intercept\":{:.6},\"r_squared\":{:.6},\"window\":[{},{}],\"samples\":{}}}",
        fit.exponent, fit.intercept, fit.r_squared, fit.window.0, fit.window.1, fit.samples
    )
}
