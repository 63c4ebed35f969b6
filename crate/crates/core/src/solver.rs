//! Time integration of the primitive and symmetrised systems.
//!
//! The stepper is Strang splitting around the constant-coefficient linear
//! part: a half step of the exact per-mode propagator, an explicit-midpoint
//! substep for the nonlinear remainder, and another exact half step. The
//! stiff linear dynamics are removed exactly, so the step size is limited by
//! the advective CFL condition only.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{poisson_solve, Grid2D, SpectralField, VectorField};
use crate::linear::{green_matrix, LinearSymbol};
use crate::norms::{norm_report, NormReport};

/// Fixed physical constants of the model: `gamma`-law pressure exponent,
/// shear and second viscosity.
pub const GAMMA: f64 = 2.0;
pub const MU: f64 = 1.0;
pub const LAMBDA_LAME: f64 = 0.0;

/// Run parameters shared by the solvers and diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct SimulationParams {
    pub epsilon: f64,
    pub kappa0: f64,
    pub dt: f64,
    pub t_end: f64,
    /// Perturbation size used by the initial-data generators.
    pub theta: f64,
    pub delta: f64,
    pub sigma: f64,
    pub n_prime: usize,
    pub n_reg: usize,
    /// Advective CFL safety factor: `dt <= cfl_safety * dx / max |u|`.
    pub cfl_safety: f64,
    /// Pointwise lower bound enforced on the density.
    pub vacuum_floor: f64,
    /// When false the nonlinear substep is skipped (linear runs).
    pub nonlinear_enabled: bool,
}

impl SimulationParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::BadEpsilon(epsilon));
        }
        Ok(Self {
            epsilon,
            kappa0: crate::cutoffs::KAPPA0_DEFAULT,
            dt: 0.05,
            t_end: 1.0,
            theta: 0.1,
            delta: 1e-3,
            sigma: 0.0,
            n_prime: 7,
            n_reg: 11,
            cfl_safety: 0.5,
            vacuum_floor: 0.25,
            nonlinear_enabled: true,
        })
    }

    /// Decay weight exponent `alpha = 2 - 5 delta`.
    pub fn alpha(&self) -> f64 {
        2.0 - 5.0 * self.delta
    }

    pub fn cutoffs(&self) -> crate::cutoffs::CutoffFamily {
        crate::cutoffs::CutoffFamily::new(self.epsilon, self.kappa0).expect("validated")
    }
}

/// Which momentum equation drives the primitive solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemForm {
    /// Irrotational system: constant-coefficient viscosity `2 eps Laplace u`.
    MainIrrotational,
    /// Full system: viscosity `(eps / rho) (Laplace u + grad div u)`.
    FullNsp,
}

impl SystemForm {
    /// Heat-factor exponent multiplier of the rotational sector in the
    /// constant-coefficient linear part.
    fn rotational_visc(self) -> f64 {
        match self {
            SystemForm::MainIrrotational => 2.0,
            SystemForm::FullNsp => 1.0,
        }
    }
}

/// Primitive perturbation state `(rho - 1, u)`; the potential is always the
/// Poisson solve of the density perturbation, never integrated.
#[derive(Debug, Clone)]
pub struct PrimitiveState {
    pub time: f64,
    pub rho_pert: SpectralField,
    pub u: VectorField,
}

impl PrimitiveState {
    pub fn equilibrium(grid: &Arc<Grid2D>) -> Self {
        Self {
            time: 0.0,
            rho_pert: SpectralField::zero(grid),
            u: VectorField::zero(grid),
        }
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        self.rho_pert.grid()
    }

    pub fn phi(&self) -> SpectralField {
        poisson_solve(&self.rho_pert)
    }

    /// The diagnostic tuple `(rho', u1, u2, d1 phi, d2 phi)`.
    pub fn fields_with_grad_phi(&self) -> [SpectralField; 5] {
        let gphi = self.phi().gradient();
        [
            self.rho_pert.clone(),
            self.u.x1.clone(),
            self.u.x2.clone(),
            gphi.x1,
            gphi.x2,
        ]
    }

    /// Mean of the density perturbation (conserved by the continuity equation).
    pub fn mean_density_pert(&self) -> Complex64 {
        self.rho_pert.mean()
    }

    pub fn min_density(&self) -> f64 {
        1.0 + self
            .rho_pert
            .to_physical()
            .iter()
            .map(|z| z.re)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_speed(&self) -> f64 {
        let u1 = self.u.x1.to_physical();
        let u2 = self.u.x2.to_physical();
        u1.iter()
            .zip(u2.iter())
            .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()).sqrt())
            .fold(0.0, f64::max)
    }

    pub fn dealias_mut(&mut self) {
        self.rho_pert.dealias();
        self.u.dealias();
    }

    fn linear_combination(&self, other: &Self, w_self: f64, w_other: f64, time: f64) -> Self {
        Self {
            time,
            rho_pert: self.rho_pert.scale(w_self).add(&other.rho_pert.scale(w_other)),
            u: self.u.scale(w_self).add(&other.u.scale(w_other)),
        }
    }
}

/// Symmetrised pair `a = (<grad>/|grad|) rho'`, `c = (div/|grad|) u`.
#[derive(Debug, Clone)]
pub struct SymmetrizedState {
    pub time: f64,
    pub a: SpectralField,
    pub c: SpectralField,
}

impl SymmetrizedState {
    /// Change of variables from the potential sector of a primitive state.
    /// The zero mode carries no symmetrised content and is set to zero; any
    /// rotational part of `u` is dropped.
    pub fn from_primitive_potential(state: &PrimitiveState) -> Self {
        let g = state.grid().clone();
        let n = g.n();
        let mut a = ndarray::Array2::zeros((n, n));
        let mut c = ndarray::Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let (k1, k2) = (g.freq(i), g.freq(j));
                let m = k1.hypot(k2);
                if m == 0.0 {
                    continue;
                }
                let br = (1.0 + m * m).sqrt();
                a[[i, j]] = state.rho_pert.coefficients()[[i, j]] * (br / m);
                let kdotu = k1 * state.u.x1.coefficients()[[i, j]]
                    + k2 * state.u.x2.coefficients()[[i, j]];
                c[[i, j]] = Complex64::new(0.0, 1.0) * kdotu / m;
            }
        }
        Self {
            time: state.time,
            a: SpectralField::from_coefficients(&g, a),
            c: SpectralField::from_coefficients(&g, c),
        }
    }

    /// Inverse change of variables; produces mean-zero irrotational data.
    pub fn to_primitive(&self) -> PrimitiveState {
        let rho = self.a.multiplier(|k1, k2| {
            let m = k1.hypot(k2);
            if m == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(m / (1.0 + m * m).sqrt(), 0.0)
            }
        });
        // u = -R c (irrotational reconstruction)
        let u = VectorField {
            x1: self.c.riesz(0).scale(-1.0),
            x2: self.c.riesz(1).scale(-1.0),
        };
        PrimitiveState { time: self.time, rho_pert: rho, u }
    }

    /// Requires the primitive data to be mean-zero in density.
    pub fn try_from_primitive(state: &PrimitiveState) -> Result<Self> {
        let mean = state.mean_density_pert().norm();
        if mean > 1e-12 {
            return Err(Error::NonZeroMean(mean));
        }
        Ok(Self::from_primitive_potential(state))
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        self.a.grid()
    }

    pub fn dealias_mut(&mut self) {
        self.a.dealias();
        self.c.dealias();
    }
}

/// Homogeneous solve of `d/dt U + A U = 0`: per-mode Green matrix.
pub fn propagate_linear(state: &SymmetrizedState, t: f64, epsilon: f64) -> SymmetrizedState {
    let (a, c) = crate::linear::propagate_pair(&state.a, &state.c, t, epsilon);
    SymmetrizedState { time: state.time + t, a, c }
}

/// Exact constant-coefficient linear propagator in primitive variables:
/// Green matrix on the potential sector, heat factor on the rotational
/// sector, identity on the zero mode.
pub fn propagate_linear_primitive(
    rho: &SpectralField,
    u: &VectorField,
    t: f64,
    epsilon: f64,
    form: SystemForm,
) -> (SpectralField, VectorField) {
    let g = rho.grid().clone();
    let n = g.n();
    let nu = form.rotational_visc();
    let mut ro = rho.coefficients().clone();
    let mut u1 = u.x1.coefficients().clone();
    let mut u2 = u.x2.coefficients().clone();
    for i in 0..n {
        for j in 0..n {
            let (k1, k2) = (g.freq(i), g.freq(j));
            let ksq = k1 * k1 + k2 * k2;
            if ksq == 0.0 {
                continue;
            }
            let m = ksq.sqrt();
            let br = (1.0 + ksq).sqrt();
            let (v1, v2) = (u1[[i, j]], u2[[i, j]]);
            let kdotu = k1 * v1 + k2 * v2;
            let p1 = k1 * kdotu / ksq;
            let p2 = k2 * kdotu / ksq;
            let (r1, r2) = (v1 - p1, v2 - p2);

            let a = ro[[i, j]] * (br / m);
            let c = Complex64::new(0.0, 1.0) * kdotu / m;
            let sym = LinearSymbol::new([k1, k2], epsilon);
            let out = green_matrix(t, &sym).apply([a, c]);

            let heat = (-nu * epsilon * ksq * t).exp();
            // c' back to the potential sector: u_pot' = -i c' k / |k|
            let f = Complex64::new(0.0, -1.0) * out[1] / m;
            ro[[i, j]] = out[0] * (m / br);
            u1[[i, j]] = f * k1 + r1 * heat;
            u2[[i, j]] = f * k2 + r2 * heat;
        }
    }
    (
        SpectralField::from_coefficients(&g, ro),
        VectorField {
            x1: SpectralField::from_coefficients(&g, u1),
            x2: SpectralField::from_coefficients(&g, u2),
        },
    )
}

/// Tendency pair for the primitive system.
#[derive(Debug, Clone)]
pub struct PrimitiveTendency {
    pub rho: SpectralField,
    pub u: VectorField,
}

/// Pressure-plus-field gradient: `-(grad rho' - grad phi)` has per-mode
/// symbol `-i k (1 + 1/|k|^2)` acting on the density perturbation.
fn pressure_field_tendency(rho: &SpectralField, axis: usize) -> SpectralField {
    rho.multiplier(|k1, k2| {
        let m2 = k1 * k1 + k2 * k2;
        if m2 == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -(if axis == 0 { k1 } else { k2 }) * (1.0 + 1.0 / m2))
        }
    })
}

/// `L u = Laplace u + grad div u` (mu = 1, lambda = 0).
fn lame_operator(u: &VectorField) -> VectorField {
    let div = u.divergence();
    VectorField {
        x1: u.x1.laplacian().add(&div.derivative(0)),
        x2: u.x2.laplacian().add(&div.derivative(1)),
    }
}

/// Constant-coefficient linear tendency of the chosen form.
fn linear_tendency(state: &PrimitiveState, epsilon: f64, form: SystemForm) -> PrimitiveTendency {
    let rho_t = state.u.divergence().scale(-1.0);
    let visc = match form {
        SystemForm::MainIrrotational => VectorField {
            x1: state.u.x1.laplacian().scale(2.0 * epsilon),
            x2: state.u.x2.laplacian().scale(2.0 * epsilon),
        },
        SystemForm::FullNsp => lame_operator(&state.u).scale(epsilon),
    };
    PrimitiveTendency {
        rho: rho_t,
        u: VectorField {
            x1: visc.x1.add(&pressure_field_tendency(&state.rho_pert, 0)),
            x2: visc.x2.add(&pressure_field_tendency(&state.rho_pert, 1)),
        },
    }
}

/// Nonlinear remainder (everything the exact linear propagator does not carry).
fn nonlinear_remainder(
    state: &PrimitiveState,
    epsilon: f64,
    form: SystemForm,
    vacuum_floor: f64,
) -> Result<PrimitiveTendency> {
    let g = state.grid().clone();
    let rho_phys = state.rho_pert.to_physical();
    let min_rho = 1.0 + rho_phys.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    if min_rho < vacuum_floor {
        return Err(Error::VacuumGuard(min_rho, vacuum_floor, state.time));
    }
    let u1 = state.u.x1.to_physical();
    let u2 = state.u.x2.to_physical();

    // -div(rho' u)
    let mut m1 = SpectralField::from_physical(&g, &rho_phys * &u1);
    let mut m2 = SpectralField::from_physical(&g, &rho_phys * &u2);
    m1.dealias();
    m2.dealias();
    let rho_n = m1.derivative(0).add(&m2.derivative(1)).scale(-1.0);

    // -(u . grad) u
    let d11 = state.u.x1.derivative(0).to_physical();
    let d21 = state.u.x1.derivative(1).to_physical();
    let d12 = state.u.x2.derivative(0).to_physical();
    let d22 = state.u.x2.derivative(1).to_physical();
    let mut a1 = SpectralField::from_physical(&g, &u1 * &d11 + &u2 * &d21);
    let mut a2 = SpectralField::from_physical(&g, &u1 * &d12 + &u2 * &d22);
    a1.dealias();
    a2.dealias();
    let mut u_n = VectorField { x1: a1.scale(-1.0), x2: a2.scale(-1.0) };

    if form == SystemForm::FullNsp {
        // eps (1/rho - 1) L u, the variable-coefficient part of the viscosity
        let lu = lame_operator(&state.u);
        let l1 = lu.x1.to_physical();
        let l2 = lu.x2.to_physical();
        let factor = rho_phys.mapv(|r| {
            let rho = 1.0 + r.re;
            Complex64::new(epsilon * (1.0 / rho - 1.0), 0.0)
        });
        let mut c1 = SpectralField::from_physical(&g, &factor * &l1);
        let mut c2 = SpectralField::from_physical(&g, &factor * &l2);
        c1.dealias();
        c2.dealias();
        u_n.x1 = u_n.x1.add(&c1);
        u_n.x2 = u_n.x2.add(&c2);
    }
    Ok(PrimitiveTendency { rho: rho_n, u: u_n })
}

/// Full tendency of the primitive system (linear part plus remainder).
pub fn rhs_primitive(
    state: &PrimitiveState,
    epsilon: f64,
    form: SystemForm,
    vacuum_floor: f64,
) -> Result<PrimitiveTendency> {
    let lin = linear_tendency(state, epsilon, form);
    let non = nonlinear_remainder(state, epsilon, form, vacuum_floor)?;
    Ok(PrimitiveTendency {
        rho: lin.rho.add(&non.rho),
        u: lin.u.add(&non.u),
    })
}

/// Nonlinear tendency `F(a, c) = (F1, F2)` of the symmetrised system.
///
/// With the concrete Riesz convention `R = grad / |grad|` (symbol
/// `i xi / |xi|`) and the irrotational reconstruction `u = -R c`,
/// consistency with the primitive system gives
/// `F1 = -<grad> R.(rho' u)` with `rho' = (|grad|/<grad>) a` and
/// `F2 = +1/2 |grad| |u|^2`.
pub fn symmetrized_nonlinearity(state: &SymmetrizedState) -> (SpectralField, SpectralField) {
    let rho = state.a.multiplier(|k1, k2| {
        let m = k1.hypot(k2);
        if m == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(m / (1.0 + m * m).sqrt(), 0.0)
        }
    });
    let u = VectorField {
        x1: state.c.riesz(0).scale(-1.0),
        x2: state.c.riesz(1).scale(-1.0),
    };
    let m1 = rho.product(&u.x1).expect("same grid");
    let m2 = rho.product(&u.x2).expect("same grid");
    let f1 = VectorField { x1: m1, x2: m2 }
        .riesz_div()
        .bessel(1.0)
        .scale(-1.0);
    let speed_sq = u.x1.square().add(&u.x2.square());
    let f2 = speed_sq.modulus().scale(0.5);
    (f1, f2)
}

const MAX_CFL_HALVINGS: usize = 10;

fn cfl_ok(state: &PrimitiveState, dt: f64, params: &SimulationParams) -> (bool, f64) {
    let speed = state.max_speed();
    let limit = params.cfl_safety * state.grid().dx() / speed.max(1e-300);
    (dt <= limit, speed)
}

/// One Strang step of the primitive system. A CFL violation rejects the step
/// and retries with two half steps, up to ten levels deep.
pub fn step_strang(
    state: &PrimitiveState,
    dt: f64,
    params: &SimulationParams,
    form: SystemForm,
) -> Result<PrimitiveState> {
    step_strang_depth(state, dt, params, form, 0)
}

fn step_strang_depth(
    state: &PrimitiveState,
    dt: f64,
    params: &SimulationParams,
    form: SystemForm,
    depth: usize,
) -> Result<PrimitiveState> {
    let (ok, speed) = cfl_ok(state, dt, params);
    if !ok {
        if depth >= MAX_CFL_HALVINGS {
            return Err(Error::CflExhausted(depth, dt, speed));
        }
        let half = step_strang_depth(state, dt / 2.0, params, form, depth + 1)?;
        return step_strang_depth(&half, dt / 2.0, params, form, depth + 1);
    }
    let eps = params.epsilon;
    let (rho, u) = propagate_linear_primitive(&state.rho_pert, &state.u, dt / 2.0, eps, form);
    let mut mid = PrimitiveState { time: state.time, rho_pert: rho, u };
    if params.nonlinear_enabled {
        let k1 = nonlinear_remainder(&mid, eps, form, params.vacuum_floor)?;
        let mut probe = mid.clone();
        probe.rho_pert.axpy(dt / 2.0, &k1.rho);
        probe.u.axpy(dt / 2.0, &k1.u);
        probe.time += dt / 2.0;
        let k2 = nonlinear_remainder(&probe, eps, form, params.vacuum_floor)?;
        mid.rho_pert.axpy(dt, &k2.rho);
        mid.u.axpy(dt, &k2.u);
    }
    let (rho, u) = propagate_linear_primitive(&mid.rho_pert, &mid.u, dt / 2.0, eps, form);
    let mut out = PrimitiveState { time: state.time + dt, rho_pert: rho, u };
    out.dealias_mut();
    Ok(out)
}

/// One Strang step of the symmetrised system.
pub fn step_strang_symmetrized(
    state: &SymmetrizedState,
    dt: f64,
    params: &SimulationParams,
) -> Result<SymmetrizedState> {
    let eps = params.epsilon;
    let mut mid = propagate_linear(state, dt / 2.0, eps);
    mid.time = state.time;
    if params.nonlinear_enabled {
        let (f1, f2) = symmetrized_nonlinearity(&mid);
        let mut probe = mid.clone();
        probe.a.axpy(dt / 2.0, &f1);
        probe.c.axpy(dt / 2.0, &f2);
        let (g1, g2) = symmetrized_nonlinearity(&probe);
        mid.a.axpy(dt, &g1);
        mid.c.axpy(dt, &g2);
    }
    let mut out = propagate_linear(&mid, dt / 2.0, eps);
    out.time = state.time + dt;
    out.dealias_mut();
    Ok(out)
}

/// Integrates the primitive system, invoking `sink` with a state snapshot and
/// its [`NormReport`] at every requested sample time (sorted internally).
/// Outputs already handed to the sink survive an abort.
pub fn run_trajectory(
    initial: &PrimitiveState,
    params: &SimulationParams,
    form: SystemForm,
    sample_times: &[f64],
    mut sink: impl FnMut(&PrimitiveState, &NormReport) -> Result<()>,
) -> Result<Vec<NormReport>> {
    let cutoffs = params.cutoffs();
    let mut samples: Vec<f64> = sample_times
        .iter()
        .copied()
        .filter(|&t| t >= initial.time)
        .collect();
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut reports = Vec::new();
    let mut state = initial.clone();

    let mut emit = |state: &PrimitiveState, reports: &mut Vec<NormReport>| -> Result<()> {
        let report = norm_report(state, params, &cutoffs);
        sink(state, &report)?;
        reports.push(report);
        Ok(())
    };

    for target in samples {
        while state.time < target - 1e-12 {
            let dt = params.dt.min(target - state.time);
            state = step_strang(&state, dt, params, form)?;
        }
        emit(&state, &mut reports)?;
    }
    while state.time < params.t_end - 1e-12 {
        let dt = params.dt.min(params.t_end - state.time);
        state = step_strang(&state, dt, params, form)?;
    }
    Ok(reports)
}

/// Time-linear interpolation of two primitive states (used to freeze the
/// main state at the half step of the coupled stepper).
pub fn interpolate_states(a: &PrimitiveState, b: &PrimitiveState, time: f64) -> PrimitiveState {
    let span = b.time - a.time;
    let w = if span.abs() < 1e-300 { 0.5 } else { (time - a.time) / span };
    a.linear_combination(b, 1.0 - w, w, time)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2D;
    use std::f64::consts::PI;

    fn small_irrotational(grid: &Arc<Grid2D>, amp: f64) -> PrimitiveState {
        let chi = SpectralField::from_physical_fn(grid, |x, y| {
            amp * (-0.08 * (x * x + y * y)).exp()
        });
        let mut rho = SpectralField::from_physical_fn(grid, |x, y| {
            let r2 = 0.08 * (x * x + y * y);
            amp * (1.0 - r2) * (-r2).exp()
        });
        rho.coefficients_mut()[[0, 0]] = Complex64::new(0.0, 0.0);
        rho.dealias();
        let mut u = chi.gradient();
        u.dealias();
        PrimitiveState { time: 0.0, rho_pert: rho, u }
    }

    #[test]
    fn zero_state_has_zero_tendency() {
        let g = Grid2D::new(32, 16.0).unwrap();
        let s = PrimitiveState::equilibrium(&g);
        let t = rhs_primitive(&s, 0.3, SystemForm::MainIrrotational, 0.25).unwrap();
        assert_eq!(t.rho.l2_norm(), 0.0);
        assert_eq!(t.u.l2_norm(), 0.0);
    }

    #[test]
    fn single_mode_density_linear_tendency() {
        // rho single mode, u = 0: u-tendency is -(i k)(1 + 1/|k|^2) rho_hat
        let l = 2.0 * PI;
        let g = Grid2D::new(32, l).unwrap();
        let rho = SpectralField::from_physical_fn(&g, |x, _| 1e-3 * (2.0 * x).cos());
        let s = PrimitiveState {
            time: 0.0,
            rho_pert: rho.clone(),
            u: VectorField::zero(&g),
        };
        let t = rhs_primitive(&s, 0.5, SystemForm::MainIrrotational, 0.25).unwrap();
        let expect = rho.multiplier(|k1, k2| {
            let m2 = k1 * k1 + k2 * k2;
            if m2 == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -k1 * (1.0 + 1.0 / m2))
            }
        });
        assert!(t.u.x1.sub(&expect).l2_norm() < 1e-12 * expect.l2_norm());
        assert!(t.u.x2.l2_norm() < 1e-14);
        assert!(t.rho.l2_norm() < 1e-14);
    }

    #[test]
    fn generator_matches_symmetrized_linearization() {
        // the linear part of the primitive tendency, mapped to (a, c), equals -A U
        let g = Grid2D::new(48, 24.0).unwrap();
        let s = small_irrotational(&g, 1e-4);
        let eps = 0.4;
        let t = linear_tendency(&s, eps, SystemForm::MainIrrotational);
        let tstate = PrimitiveState { time: 0.0, rho_pert: t.rho, u: t.u };
        let tu = SymmetrizedState::from_primitive_potential(&tstate);
        let u_sym = SymmetrizedState::from_primitive_potential(&s);

        let mut defect = 0.0f64;
        let mut scale = 0.0f64;
        let n = g.n();
        for i in 0..n {
            for j in 0..n {
                let (k1, k2) = (g.freq(i), g.freq(j));
                if k1 == 0.0 && k2 == 0.0 {
                    continue;
                }
                let sym = LinearSymbol::new([k1, k2], eps);
                let a = sym.a_hat();
                let v = [u_sym.a.coefficients()[[i, j]], u_sym.c.coefficients()[[i, j]]];
                let minus_au = a.apply(v);
                let got = [tu.a.coefficients()[[i, j]], tu.c.coefficients()[[i, j]]];
                defect = defect
                    .max((got[0] + minus_au[0]).norm())
                    .max((got[1] + minus_au[1]).norm());
                scale = scale.max(v[0].norm()).max(v[1].norm());
            }
        }
        assert!(defect <= 1e-10 * scale, "defect {defect}, scale {scale}");
    }

    #[test]
    fn symmetrized_nonlinearity_vanishes_without_velocity() {
        let g = Grid2D::new(32, 16.0).unwrap();
        let a = SpectralField::from_physical_fn(&g, |x, y| (-0.2 * (x * x + y * y)).exp());
        let s = SymmetrizedState { time: 0.0, a, c: SpectralField::zero(&g) };
        let (f1, f2) = symmetrized_nonlinearity(&s);
        assert_eq!(f1.l2_norm(), 0.0);
        assert_eq!(f2.l2_norm(), 0.0);
    }

    #[test]
    fn symmetrized_matches_primitive_nonlinearity() {
        let g = Grid2D::new(48, 24.0).unwrap();
        let prim = small_irrotational(&g, 1e-3);
        let sym = SymmetrizedState::from_primitive_potential(&prim);
        // round trip sanity first
        let back = sym.to_primitive();
        assert!(back.rho_pert.sub(&prim.rho_pert).l2_norm() <= 1e-10 * prim.rho_pert.l2_norm());
        assert!(back.u.sub(&prim.u).l2_norm() <= 1e-10 * prim.u.l2_norm());

        let (f1, f2) = symmetrized_nonlinearity(&sym);
        // primitive nonlinear part mapped to symmetrised variables
        let non = nonlinear_remainder(&prim, 0.3, SystemForm::MainIrrotational, 0.25).unwrap();
        let nstate = PrimitiveState { time: 0.0, rho_pert: non.rho, u: non.u };
        let nsym = SymmetrizedState::from_primitive_potential(&nstate);
        let scale = f1.l2_norm().max(f2.l2_norm()).max(1e-300);
        assert!(nsym.a.sub(&f1).l2_norm() <= 1e-9 * scale.max(nsym.a.l2_norm()));
        assert!(nsym.c.sub(&f2).l2_norm() <= 1e-9 * scale.max(nsym.c.l2_norm()));
    }

    #[test]
    fn strang_degenerates_to_linear_propagator() {
        let g = Grid2D::new(32, 16.0).unwrap();
        let s = small_irrotational(&g, 0.01);
        let mut params = SimulationParams::new(0.3).unwrap();
        params.nonlinear_enabled = false;
        let dt = 0.2;
        let stepped = step_strang(&s, dt, &params, SystemForm::MainIrrotational).unwrap();
        let (rho, u) = propagate_linear_primitive(
            &s.rho_pert,
            &s.u,
            dt,
            params.epsilon,
            SystemForm::MainIrrotational,
        );
        let mut direct = PrimitiveState { time: dt, rho_pert: rho, u };
        direct.dealias_mut();
        assert!(
            stepped.rho_pert.sub(&direct.rho_pert).l2_norm()
                <= 1e-12 * direct.rho_pert.l2_norm().max(1e-300)
        );
        assert!(stepped.u.sub(&direct.u).l2_norm() <= 1e-12 * direct.u.l2_norm().max(1e-300));
    }

    #[test]
    fn strang_single_mode_matches_green_matrix() {
        // linear data integrated to t = 1 against the closed-form solution
        let l = 2.0 * PI;
        let g = Grid2D::new(32, l).unwrap();
        let rho = SpectralField::from_physical_fn(&g, |x, _| 1e-9 * (3.0 * x).cos());
        let s = PrimitiveState { time: 0.0, rho_pert: rho, u: VectorField::zero(&g) };
        let mut params = SimulationParams::new(0.7).unwrap();
        params.dt = 0.05;
        let mut state = s.clone();
        while state.time < 1.0 - 1e-12 {
            state = step_strang(&state, 0.05_f64.min(1.0 - state.time), &params,
                SystemForm::MainIrrotational).unwrap();
        }
        let (rho_exact, _) = propagate_linear_primitive(
            &s.rho_pert,
            &s.u,
            1.0,
            params.epsilon,
            SystemForm::MainIrrotational,
        );
        // amplitude 1e-9 makes the quadratic terms ~1e-18: pure linear check
        let d = state.rho_pert.sub(&rho_exact).l2_norm() / rho_exact.l2_norm();
        assert!(d < 1e-8, "deviation {d}");
    }

    #[test]
    fn self_convergence_is_second_order() {
        let g = Grid2D::new(48, 24.0).unwrap();
        let s = small_irrotational(&g, 0.05);
        let params = SimulationParams::new(0.2).unwrap();
        let run = |dt: f64| -> PrimitiveState {
            let mut st = s.clone();
            while st.time < 0.5 - 1e-12 {
                st = step_strang(&st, dt.min(0.5 - st.time), &params, SystemForm::MainIrrotational)
                    .unwrap();
            }
            st
        };
        let c = run(0.05);
        let f = run(0.025);
        let ff = run(0.0125);
        let e1 = c.rho_pert.sub(&f.rho_pert).l2_norm() + c.u.sub(&f.u).l2_norm();
        let e2 = f.rho_pert.sub(&ff.rho_pert).l2_norm() + f.u.sub(&ff.u).l2_norm();
        let order = (e1 / e2).log2();
        assert!((1.8..=2.2).contains(&order), "observed order {order}");
    }

    #[test]
    fn trajectory_mass_is_conserved_and_deterministic() {
        let g = Grid2D::new(32, 16.0).unwrap();
        let s = small_irrotational(&g, 0.05);
        let mut params = SimulationParams::new(0.5).unwrap();
        params.dt = 0.1;
        params.t_end = 1.0;
        let samples = [0.0, 0.5, 1.0];
        let run = || {
            let mut rows = Vec::new();
            run_trajectory(&s, &params, SystemForm::MainIrrotational, &samples, |st, rep| {
                rows.push((st.mean_density_pert(), rep.csv_row()));
                Ok(())
            })
            .unwrap();
            rows
        };
        let a = run();
        let b = run();
        for ((ma, ra), (mb, rb)) in a.iter().zip(b.iter()) {
            assert_eq!(ra, rb);
            assert_eq!(ma, mb);
            assert!(ma.norm() <= 1e-10);
        }
    }

    #[test]
    fn trajectory_t_end_zero_is_identity() {
        let g = Grid2D::new(32, 16.0).unwrap();
        let s = small_irrotational(&g, 0.02);
        let mut params = SimulationParams::new(0.5).unwrap();
        params.t_end = 0.0;
        let mut count = 0;
        run_trajectory(&s, &params, SystemForm::MainIrrotational, &[0.0], |st, _| {
            count += 1;
            assert_eq!(st.time, 0.0);
            assert!(st.rho_pert.sub(&s.rho_pert).l2_norm() == 0.0);
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 1);
    }

    #[test]
    fn vacuum_guard_aborts() {
        let g = Grid2D::new(32, 16.0).unwrap();
        let rho = SpectralField::from_physical_fn(&g, |x, y| {
            -0.9 * (-0.1 * (x * x + y * y)).exp()
        });
        let s = PrimitiveState { time: 0.0, rho_pert: rho, u: VectorField::zero(&g) };
        let err = nonlinear_remainder(&s, 0.3, SystemForm::FullNsp, 0.25).unwrap_err();
        assert!(matches!(err, Error::VacuumGuard(..)));
    }
}
