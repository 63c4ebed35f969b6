//! Decomposition of the full system into the irrotational main flow and the
//! perturbation it drives.
//!
//! The main state solves the irrotational system with constant-coefficient
//! viscosity; the perturbation `(n, v, grad psi)` solves
//!
//! ```text
//!   d/dt n + div(rho v + n u + n v) = 0
//!   d/dt v + u.grad v + v.(grad u + grad v) - eps L v + grad n - grad psi
//!       = eps (1/(rho + n) - 1) (L v + L u)
//!   Laplace psi = n
//! ```
//!
//! so that main + perturbation solves the full system exactly in the
//! continuum. The module also measures the perturbation energy against the
//! bootstrap threshold and runs the eps-sweep lifespan probe.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{poisson_solve, Grid2D, SpectralField, VectorField};
use crate::init::{generate_initial, InitProfile};
use crate::solver::{
    interpolate_states, propagate_linear_primitive, step_strang, PrimitiveState, SimulationParams,
    SystemForm,
};

/// Perturbation state `(n, v)`; `psi` is always the Poisson solve of `n`.
#[derive(Debug, Clone)]
pub struct PerturbationState {
    pub time: f64,
    pub n: SpectralField,
    pub v: VectorField,
}

impl PerturbationState {
    pub fn zero(grid: &Arc<Grid2D>) -> Self {
        Self {
            time: 0.0,
            n: SpectralField::zero(grid),
            v: VectorField::zero(grid),
        }
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        self.n.grid()
    }

    pub fn psi(&self) -> SpectralField {
        poisson_solve(&self.n)
    }

    pub fn dealias_mut(&mut self) {
        self.n.dealias();
        self.v.dealias();
    }
}

/// Main flow plus perturbation, advanced synchronously.
#[derive(Debug, Clone)]
pub struct SplitState {
    pub main: PrimitiveState,
    pub pert: PerturbationState,
}

impl SplitState {
    /// Combined primitive state `(rho' + n, u + v)` solving the full system.
    pub fn combined(&self) -> PrimitiveState {
        PrimitiveState {
            time: self.main.time,
            rho_pert: self.main.rho_pert.add(&self.pert.n),
            u: self.main.u.add(&self.pert.v),
        }
    }
}

/// `L = Laplace + grad div`.
fn lame(u: &VectorField) -> VectorField {
    let div = u.divergence();
    VectorField {
        x1: u.x1.laplacian().add(&div.derivative(0)),
        x2: u.x2.laplacian().add(&div.derivative(1)),
    }
}

/// Nonlinear remainder of the perturbation system (everything beyond the
/// constant-coefficient part `(-div v, eps L v - grad n + grad psi)`),
/// with the main state frozen at `main`.
fn perturbation_remainder(
    pert: &PerturbationState,
    main: &PrimitiveState,
    epsilon: f64,
    floor: f64,
) -> Result<(SpectralField, VectorField)> {
    let g = pert.grid().clone();
    let rho_phys = main.rho_pert.to_physical();
    let n_phys = pert.n.to_physical();
    let min_rho = rho_phys
        .iter()
        .zip(n_phys.iter())
        .map(|(r, n)| 1.0 + r.re + n.re)
        .fold(f64::INFINITY, f64::min);
    if min_rho < floor {
        return Err(Error::DensityFloor(min_rho, floor, pert.time));
    }

    let u1 = main.u.x1.to_physical();
    let u2 = main.u.x2.to_physical();
    let v1 = pert.v.x1.to_physical();
    let v2 = pert.v.x2.to_physical();

    // -div(rho' v + n u + n v); the leading -div v is in the linear part
    let m1 = &rho_phys * &v1 + &n_phys * &u1 + &n_phys * &v1;
    let m2 = &rho_phys * &v2 + &n_phys * &u2 + &n_phys * &v2;
    let mut m1 = SpectralField::from_physical(&g, m1);
    let mut m2 = SpectralField::from_physical(&g, m2);
    m1.dealias();
    m2.dealias();
    let n_tend = m1.derivative(0).add(&m2.derivative(1)).scale(-1.0);

    // -(u.grad)v - (v.grad)(u + v)
    let dv11 = pert.v.x1.derivative(0).to_physical();
    let dv21 = pert.v.x1.derivative(1).to_physical();
    let dv12 = pert.v.x2.derivative(0).to_physical();
    let dv22 = pert.v.x2.derivative(1).to_physical();
    let du11 = main.u.x1.derivative(0).to_physical();
    let du21 = main.u.x1.derivative(1).to_physical();
    let du12 = main.u.x2.derivative(0).to_physical();
    let du22 = main.u.x2.derivative(1).to_physical();

    let adv1 = &u1 * &dv11 + &u2 * &dv21 + &v1 * (&du11 + &dv11) + &v2 * (&du21 + &dv21);
    let adv2 = &u1 * &dv12 + &u2 * &dv22 + &v1 * (&du12 + &dv12) + &v2 * (&du22 + &dv22);

    // eps (1/(rho + n) - 1)(L v + L u)
    let lu = lame(&main.u);
    let lv = lame(&pert.v);
    let ls1 = lu.x1.add(&lv.x1).to_physical();
    let ls2 = lu.x2.add(&lv.x2).to_physical();
    let factor = ndarray::Zip::from(&rho_phys)
        .and(&n_phys)
        .map_collect(|r, n| {
            let rho = 1.0 + r.re + n.re;
            Complex64::new(epsilon * (1.0 / rho - 1.0), 0.0)
        });

    let t1 = &factor * &ls1 - adv1;
    let t2 = &factor * &ls2 - adv2;
    let mut t1 = SpectralField::from_physical(&g, t1);
    let mut t2 = SpectralField::from_physical(&g, t2);
    t1.dealias();
    t2.dealias();
    Ok((n_tend, VectorField { x1: t1, x2: t2 }))
}

/// Full tendency of the perturbation system at the frozen main state.
pub fn rhs_perturbation(
    pert: &PerturbationState,
    main: &PrimitiveState,
    epsilon: f64,
    floor: f64,
) -> Result<(SpectralField, VectorField)> {
    let (n_non, v_non) = perturbation_remainder(pert, main, epsilon, floor)?;
    let n_lin = pert.v.divergence().scale(-1.0);
    let psi = pert.psi();
    let v_lin = lame(&pert.v).scale(epsilon).add(&VectorField {
        x1: psi.derivative(0).sub(&pert.n.derivative(0)),
        x2: psi.derivative(1).sub(&pert.n.derivative(1)),
    });
    Ok((n_lin.add(&n_non), v_lin.add(&v_non)))
}

const MAX_CFL_HALVINGS: usize = 10;

/// Advances main and perturbation by `dt`: the main state takes its own
/// Strang step, then the perturbation takes a Strang step whose nonlinear
/// substep sees the main state linearly interpolated to the half step.
pub fn evolve_split(split: &SplitState, dt: f64, params: &SimulationParams) -> Result<SplitState> {
    evolve_split_depth(split, dt, params, 0)
}

fn evolve_split_depth(
    split: &SplitState,
    dt: f64,
    params: &SimulationParams,
    depth: usize,
) -> Result<SplitState> {
    let speed = split.combined().max_speed();
    let limit = params.cfl_safety * split.main.grid().dx() / speed.max(1e-300);
    if dt > limit {
        if depth >= MAX_CFL_HALVINGS {
            return Err(Error::CflExhausted(depth, dt, speed));
        }
        let half = evolve_split_depth(split, dt / 2.0, params, depth + 1)?;
        return evolve_split_depth(&half, dt / 2.0, params, depth + 1);
    }

    let main_new = step_strang(&split.main, dt, params, SystemForm::MainIrrotational)?;
    let main_half = interpolate_states(&split.main, &main_new, split.main.time + dt / 2.0);

    let eps = params.epsilon;
    let (n, v) =
        propagate_linear_primitive(&split.pert.n, &split.pert.v, dt / 2.0, eps, SystemForm::FullNsp);
    let mut mid = PerturbationState { time: split.pert.time, n, v };
    if params.nonlinear_enabled {
        let (k1n, k1v) = perturbation_remainder(&mid, &main_half, eps, params.vacuum_floor)?;
        let mut probe = mid.clone();
        probe.n.axpy(dt / 2.0, &k1n);
        probe.v.axpy(dt / 2.0, &k1v);
        probe.time += dt / 2.0;
        let (k2n, k2v) = perturbation_remainder(&probe, &main_half, eps, params.vacuum_floor)?;
        mid.n.axpy(dt, &k2n);
        mid.v.axpy(dt, &k2v);
    }
    let (n, v) = propagate_linear_primitive(&mid.n, &mid.v, dt / 2.0, eps, SystemForm::FullNsp);
    let mut pert = PerturbationState { time: split.pert.time + dt, n, v };
    pert.dealias_mut();
    Ok(SplitState { main: main_new, pert })
}

/// Perturbation energy
/// `E3 = sum_{|a| <= 3} 1/2 int (1 + rho' + n) |d^a v|^2 + |d^a n|^2 + |d^a grad psi|^2`.
pub fn energy_e3(pert: &PerturbationState, main: &PrimitiveState) -> f64 {
    let g = pert.grid().clone();
    let n_ord = 3usize;
    let gpsi = pert.psi().gradient();
    let l2sq = g.length() * g.length();

    let mut unweighted = 0.0;
    for ((i, j), _) in pert.n.coefficients().indexed_iter() {
        let (k1, k2) = (g.freq(i), g.freq(j));
        let (p, q) = (k1 * k1, k2 * k2);
        let mut wsum = 0.0;
        let mut pa = 1.0;
        for a in 0..=n_ord {
            let mut qb = 1.0;
            for _b in 0..=(n_ord - a) {
                wsum += pa * qb;
                qb *= q;
            }
            pa *= p;
        }
        let m = pert.n.coefficients()[[i, j]].norm_sqr()
            + gpsi.x1.coefficients()[[i, j]].norm_sqr()
            + gpsi.x2.coefficients()[[i, j]].norm_sqr();
        unweighted += wsum * m;
    }
    unweighted *= l2sq;

    let weight = {
        let r = main.rho_pert.to_physical();
        let n = pert.n.to_physical();
        ndarray::Zip::from(&r).and(&n).map_collect(|a, b| 1.0 + a.re + b.re)
    };
    let mut weighted = 0.0;
    for a1 in 0..=n_ord as u32 {
        for a2 in 0..=(n_ord as u32 - a1) {
            for comp in [&pert.v.x1, &pert.v.x2] {
                let d = comp.derivative_multi(a1, a2).to_physical();
                weighted += d
                    .iter()
                    .zip(weight.iter())
                    .map(|(dv, w)| w * dv.norm_sqr())
                    .sum::<f64>()
                    * g.cell_weight();
            }
        }
    }
    0.5 * (unweighted + weighted)
}

/// Outcome of one lifespan probe.
#[derive(Debug, Clone)]
pub struct LifespanResult {
    pub epsilon: f64,
    pub theta: f64,
    /// Bootstrap threshold `4 theta^2 eps^{2 - theta}`.
    pub threshold: f64,
    /// First sampled threshold crossing, or `t_cap` when none occurred.
    pub t_star: f64,
    pub t_cap: f64,
    pub crossed: bool,
    /// Set when the solver aborted; `t_star` is then the abort time.
    pub aborted: bool,
    pub energy_series: Vec<(f64, f64)>,
}

/// Bootstrap threshold `4 theta^2 eps^{2 - theta}`.
pub fn bootstrap_threshold(epsilon: f64, theta: f64) -> f64 {
    4.0 * theta * theta * epsilon.powf(2.0 - theta)
}

/// Configuration of a lifespan probe at one `(eps, theta)` point.
#[derive(Debug, Clone, Copy)]
pub struct ProbeConfig {
    pub grid_n: usize,
    pub box_length: f64,
    pub dt: f64,
    pub sample_every: f64,
    pub seed: u64,
    /// `t_cap = cap_factor * eps^{-(1 - theta)}`.
    pub cap_factor: f64,
    pub threads: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            grid_n: 256,
            box_length: 64.0 * std::f64::consts::PI,
            dt: 0.05,
            sample_every: 0.5,
            seed: 1,
            cap_factor: 4.0,
            threads: 1,
        }
    }
}

/// Integrates the split system until the perturbation energy crosses the
/// bootstrap threshold or the capped horizon is reached.
pub fn lifespan_probe(epsilon: f64, theta: f64, cfg: &ProbeConfig) -> Result<LifespanResult> {
    let grid = Grid2D::with_options(cfg.grid_n, cfg.box_length, 2.0 / 3.0, cfg.threads)?;
    let mut params = SimulationParams::new(epsilon)?;
    params.theta = theta;
    params.dt = cfg.dt;

    let threshold = bootstrap_threshold(epsilon, theta);
    let t_cap = cfg.cap_factor * epsilon.powf(-(1.0 - theta));

    let init = generate_initial(&grid, &params, InitProfile::Combined, cfg.seed)?;
    let mut split = SplitState {
        main: init.main,
        pert: PerturbationState {
            time: 0.0,
            n: SpectralField::zero(&grid),
            v: init.vortex,
        },
    };

    let mut energy_series = Vec::new();
    let mut crossed = false;
    let mut aborted = false;
    let mut t_star = t_cap;

    let e0 = energy_e3(&split.pert, &split.main);
    energy_series.push((0.0, e0));
    if e0 > threshold {
        return Ok(LifespanResult {
            epsilon,
            theta,
            threshold,
            t_star: 0.0,
            t_cap,
            crossed: true,
            aborted: false,
            energy_series,
        });
    }

    let mut next_sample = cfg.sample_every;
    'outer: while split.main.time < t_cap - 1e-9 {
        let target = next_sample.min(t_cap);
        while split.main.time < target - 1e-9 {
            let dt = cfg.dt.min(target - split.main.time);
            match evolve_split(&split, dt, &params) {
                Ok(s) => split = s,
                Err(e) => {
                    // abort counts as the end of the observed lifespan
                    t_star = split.main.time;
                    crossed = true;
                    aborted = true;
                    energy_series.push((split.main.time, f64::NAN));
                    drop(e);
                    break 'outer;
                }
            }
        }
        let e = energy_e3(&split.pert, &split.main);
        energy_series.push((split.main.time, e));
        if e > threshold {
            t_star = split.main.time;
            crossed = true;
            break;
        }
        next_sample += cfg.sample_every;
    }

    Ok(LifespanResult {
        epsilon,
        theta,
        threshold,
        t_star,
        t_cap,
        crossed,
        aborted,
        energy_series,
    })
}
