//! Norms and fitted rates.
//!
//! Sobolev/Lebesgue norms with the Bessel-potential realisation
//! `||f||_{W^{s,p}} = ||<grad>^s f||_{L^p}` (uniform convention for
//! non-integer `s`), the composite time-weighted norm of the symmetrised
//! state, the initial-data norm, the weighted high-frequency diagnostic,
//! decay-exponent regression and the commutator probe.
//!
//! Norms of field tuples combine component norms in quadrature
//! (`sqrt(sum of squares)`), which keeps every entry 1-homogeneous in the
//! state.

use num_complex::Complex64;

use crate::cutoffs::CutoffFamily;
use crate::error::{Error, Result};
use crate::grid::SpectralField;
use crate::linear::{half_wave_full, LinearSymbol};
use crate::solver::{PrimitiveState, SimulationParams, SymmetrizedState};

/// `<t> = sqrt(1 + t^2)`.
pub fn time_bracket(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}

/// Discrete `L^p` norm of the physical samples with cell weight `(L/N)^2`;
/// `p = inf` is the max norm.
pub fn lp_norm(f: &SpectralField, p: f64) -> f64 {
    let phys = f.to_physical();
    if p.is_infinite() {
        return phys.iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    let w = f.grid().cell_weight();
    let s: f64 = phys.iter().map(|z| z.norm().powf(p)).sum();
    (w * s).powf(1.0 / p)
}

/// `||<grad>^s f||_{L^p}` evaluated on the physical grid.
pub fn sobolev_norm(f: &SpectralField, s: f64, p: f64) -> Result<f64> {
    f.check_finite()?;
    if s == 0.0 {
        return Ok(lp_norm(f, p));
    }
    Ok(lp_norm(&f.bessel(s), p))
}

/// `H^s` norm through Parseval (spectral route).
pub fn h_norm(f: &SpectralField, s: f64) -> f64 {
    let sum: f64 = {
        let g = f.grid();
        f.coefficients()
            .indexed_iter()
            .map(|((i, j), v)| {
                let (k1, k2) = (g.freq(i), g.freq(j));
                (1.0 + k1 * k1 + k2 * k2).powf(s) * v.norm_sqr()
            })
            .sum()
    };
    f.grid().length() * sum.sqrt()
}

pub fn tuple_h_norm(fields: &[&SpectralField], s: f64) -> f64 {
    fields.iter().map(|f| h_norm(f, s).powi(2)).sum::<f64>().sqrt()
}

pub fn tuple_sobolev(fields: &[&SpectralField], s: f64, p: f64) -> Result<f64> {
    let mut acc = 0.0;
    for f in fields {
        acc += sobolev_norm(f, s, p)?.powi(2);
    }
    Ok(acc.sqrt())
}

/// Multiplies by the centred coordinate `x_axis` in physical space.
pub fn weight_by_coordinate(f: &SpectralField, axis: usize) -> SpectralField {
    let g = f.grid().clone();
    let mut phys = f.to_physical();
    for ((i, j), v) in phys.indexed_iter_mut() {
        let x = g.coord(if axis == 0 { i } else { j });
        *v *= x;
    }
    SpectralField::from_physical(&g, phys)
}

/// `|| <x> (f_1, .., f_k) ||_{L^2}` with `<x> = sqrt(1 + |x|^2)` centred,
/// by direct quadrature.
pub fn japanese_weighted_l2(fields: &[&SpectralField]) -> f64 {
    let g = fields[0].grid().clone();
    let mut sum = 0.0;
    for f in fields {
        let phys = f.to_physical();
        for ((i, j), v) in phys.indexed_iter() {
            let (x1, x2) = (g.coord(i), g.coord(j));
            sum += (1.0 + x1 * x1 + x2 * x2) * v.norm_sqr();
        }
    }
    (sum * g.cell_weight()).sqrt()
}

/// `|| x (f_1, .., f_k) ||_{L^2}` (both weight components) by quadrature.
pub fn coordinate_weighted_l2(fields: &[&SpectralField]) -> f64 {
    let g = fields[0].grid().clone();
    let mut sum = 0.0;
    for f in fields {
        let phys = f.to_physical();
        for ((i, j), v) in phys.indexed_iter() {
            let (x1, x2) = (g.coord(i), g.coord(j));
            sum += (x1 * x1 + x2 * x2) * v.norm_sqr();
        }
    }
    (sum * g.cell_weight()).sqrt()
}

/// Fraction of the tuple's `L^2` mass inside the central quarter-box
/// `[-L/4, L/4)^2`. Whole-space decay diagnostics are trusted only while
/// this exceeds 0.99.
pub fn mass_fraction_central(fields: &[&SpectralField]) -> f64 {
    let g = fields[0].grid().clone();
    let quarter = g.length() / 4.0;
    let (mut inside, mut total) = (0.0, 0.0);
    for f in fields {
        let phys = f.to_physical();
        for ((i, j), v) in phys.indexed_iter() {
            let m = v.norm_sqr();
            total += m;
            if g.coord(i).abs() <= quarter && g.coord(j).abs() <= quarter {
                inside += m;
            }
        }
    }
    if total == 0.0 {
        1.0
    } else {
        inside / total
    }
}

/// Least-squares decay fit.
#[derive(Debug, Clone, Copy)]
pub struct DecayFit {
    /// Slope of `log(value)` against the regressor.
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

const MIN_FIT_SAMPLES: usize = 8;

fn fit_log(series: &[(f64, f64)], window: (f64, f64), regressor: impl Fn(f64) -> f64) -> Result<DecayFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(t, v) in series {
        if t < window.0 || t > window.1 {
            continue;
        }
        if !(v > 0.0) {
            return Err(Error::NonPositiveSample(v));
        }
        xs.push(regressor(t));
        ys.push(v.ln());
    }
    if xs.len() < MIN_FIT_SAMPLES {
        return Err(Error::TooFewSamples { min: MIN_FIT_SAMPLES, got: xs.len() });
    }
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let ss_tot: f64 = ys.iter().map(|y| (y - ym) * (y - ym)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(DecayFit {
        exponent: slope,
        intercept,
        r_squared,
        window,
        samples: xs.len(),
    })
}

/// Power-law fit: slope of `log(value)` against `log(1 + t)` over the window.
pub fn fit_decay(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit> {
    fit_log(series, window, |t| (1.0 + t).ln())
}

/// Exponential fit: slope of `log(value)` against `t` over the window.
pub fn fit_exponential(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit> {
    fit_log(series, window, |t| t)
}

/// Smooth compactly supported radial ramp: 1 on a short plateau near 0,
/// then a constant-slope descent to 0 at `s = 2`, with C^2 corner blends.
///
/// The constant slope matters for the scaling probe: `grad zeta_R` then has
/// magnitude `~ 1/R` uniformly across the test data's support for every
/// tested `R`, so the commutator norm exhibits the clean `1/R` law. A
/// profile whose gradient region excludes the data (e.g. a plateau out to
/// `s = 1` against data concentrated near 0) makes the commutator decay
/// superpolynomially in `R` instead.
pub fn default_zeta(s: f64) -> f64 {
    const A: f64 = 0.02; // plateau end
    const B: f64 = 2.0; // support end
    const C: f64 = 0.05; // corner blend width
    let s = s.abs();
    if s <= A {
        return 1.0;
    }
    if s >= B {
        return 0.0;
    }
    // integral of the quintic smoothstep 6t^5 - 15t^4 + 10t^3
    let pint = |t: f64| t.powi(6) - 3.0 * t.powi(5) + 2.5 * t.powi(4);
    let m = 1.0 / (B - A - C); // slope magnitude, total descent 1
    let fall = if s <= A + C {
        m * C * pint((s - A) / C)
    } else if s <= B - C {
        m * (0.5 * C + (s - A - C))
    } else {
        m * (0.5 * C + (B - A - 2.0 * C) + C * (0.5 - pint((B - s) / C)))
    };
    1.0 - fall
}

/// `|| [zeta_R, Theta(D)] f ||_{L^2}` with `zeta_R = zeta(|x| / R)`.
pub fn commutator_probe(
    f: &SpectralField,
    r_scale: f64,
    theta: impl Fn(f64, f64) -> Complex64,
    zeta: impl Fn(f64) -> f64,
    zeta_support: f64,
) -> Result<f64> {
    let g = f.grid().clone();
    if r_scale * zeta_support > g.length() / 2.0 {
        return Err(Error::WeightExceedsBox(
            r_scale,
            r_scale * zeta_support,
            g.length() / 2.0,
        ));
    }
    let cut = |h: &SpectralField| -> SpectralField {
        let mut phys = h.to_physical();
        for ((i, j), v) in phys.indexed_iter_mut() {
            let r = g.coord(i).hypot(g.coord(j));
            *v *= zeta(r / r_scale);
        }
        SpectralField::from_physical(&g, phys)
    };
    let a = cut(&f.apply_multiplier(&theta)?);
    let b = cut(f).apply_multiplier(&theta)?;
    Ok(a.sub(&b).l2_norm())
}

/// Default commutator symbol `Theta(xi) = <xi>^{-1}`.
pub fn bessel_inverse_symbol(k1: f64, k2: f64) -> Complex64 {
    Complex64::new(1.0 / (1.0 + k1 * k1 + k2 * k2).sqrt(), 0.0)
}

/// Initial-data norm: low-band `W^{sigma+4,1}`, weighted low-band
/// `H^{sigma+4+delta}`, weighted high-band `L^2` and top Sobolev pieces.
pub fn y_norm(state: &PrimitiveState, sigma: f64, delta: f64, cutoffs: &CutoffFamily) -> f64 {
    let fields = state.fields_with_grad_phi();
    let refs: Vec<&SpectralField> = fields.iter().collect();
    let low: Vec<SpectralField> = fields.iter().map(|f| cutoffs.project_low(f)).collect();
    let high: Vec<SpectralField> = fields.iter().map(|f| cutoffs.project_high(f)).collect();

    let p1 = {
        let r: Vec<&SpectralField> = low.iter().collect();
        tuple_sobolev(&r, sigma + 4.0, 1.0).expect("finite")
    };
    let p2 = {
        let mut acc = 0.0;
        for f in &low {
            for axis in 0..2 {
                acc += h_norm(&weight_by_coordinate(f, axis), sigma + 4.0 + delta).powi(2);
            }
        }
        acc.sqrt()
    };
    let p3 = {
        let r: Vec<&SpectralField> = high.iter().collect();
        coordinate_weighted_l2(&r)
    };
    let p4 = tuple_h_norm(&refs, 11.0 + 2.0 * sigma);
    p1 + p2 + p3 + p4
}

/// `|| <x> (rho, u, grad phi)^h ||_{L^2}`.
pub fn weighted_high_norm(state: &PrimitiveState, cutoffs: &CutoffFamily) -> f64 {
    let fields = state.fields_with_grad_phi();
    let high: Vec<SpectralField> = fields.iter().map(|f| cutoffs.project_high(f)).collect();
    let refs: Vec<&SpectralField> = high.iter().collect();
    japanese_weighted_l2(&refs)
}

/// Energy functional `E_N = sum_{|a| <= N} 1/2 int rho |d^a u|^2 + |d^a rho'|^2
/// + |d^a grad phi|^2`.
pub fn energy_en(state: &PrimitiveState, n_reg: usize) -> f64 {
    let g = state.rho_pert.grid().clone();
    let phi = crate::grid::poisson_solve(&state.rho_pert);
    let gphi = phi.gradient();
    let l2sq = g.length() * g.length();

    // unweighted pieces by Parseval, all multi-indices at once
    let mut unweighted = 0.0;
    let fields = [
        &state.u.x1,
        &state.u.x2,
        &state.rho_pert,
        &gphi.x1,
        &gphi.x2,
    ];
    for ((i, j), _) in state.rho_pert.coefficients().indexed_iter() {
        let (k1, k2) = (g.freq(i), g.freq(j));
        let (p, q) = (k1 * k1, k2 * k2);
        let mut wsum = 0.0;
        let mut pa = 1.0;
        for a in 0..=n_reg {
            let mut qb = 1.0;
            for _b in 0..=(n_reg - a) {
                wsum += pa * qb;
                qb *= q;
            }
            pa *= p;
        }
        let m: f64 = fields.iter().map(|f| f.coefficients()[[i, j]].norm_sqr()).sum();
        unweighted += wsum * m;
    }
    unweighted *= l2sq;

    // rho' |d^a u|^2 needs physical derivatives per multi-index
    let rho_phys = state.rho_pert.to_physical();
    let mut weighted = 0.0;
    for a1 in 0..=n_reg as u32 {
        for a2 in 0..=(n_reg as u32 - a1) {
            for comp in [&state.u.x1, &state.u.x2] {
                let d = comp.derivative_multi(a1, a2).to_physical();
                weighted += d
                    .iter()
                    .zip(rho_phys.iter())
                    .map(|(du, r)| r.re * du.norm_sqr())
                    .sum::<f64>()
                    * g.cell_weight();
            }
        }
    }
    0.5 * (unweighted + weighted)
}

/// Components of the composite time-weighted norm at one instant.
#[derive(Debug, Clone, Copy, Default)]
pub struct XtComponents {
    /// `<t> || |grad|^{1/2} <grad> Q^{-1} U^L ||_{W^{sigma,inf}}`
    pub low_disp: f64,
    /// `|| x e^{i t b(D)} w ||_{W^{sigma+4, 2/(1-delta)}}`
    pub weighted: f64,
    /// `|| U^L ||_{H^{sigma+N'}}`
    pub low_sob: f64,
    /// `<t>^{1-3delta} || U^m ||_{H^{2sigma+N-1}}`
    pub mid_sob: f64,
    /// `<t>^{3/2} || U^m ||_{W^{1,4}}`
    pub mid_w14: f64,
    /// `<t>^{alpha} || U^h ||_{H^{2sigma+N-2}}`
    pub high_sob: f64,
    /// `<t>^{-delta} || U ||_{H^{2sigma+N}}`
    pub top_sob: f64,
}

impl XtComponents {
    pub fn total(&self) -> f64 {
        self.low_disp
            + self.weighted
            + self.low_sob
            + self.mid_sob
            + self.mid_w14
            + self.high_sob
            + self.top_sob
    }
}

/// Profile `w`: first component of `Q^{-1} chi^L U` mode-wise; the second
/// component is returned alongside.
pub fn w_profile(
    state: &SymmetrizedState,
    cutoffs: &CutoffFamily,
) -> (SpectralField, SpectralField) {
    let g = state.a.grid().clone();
    let n = g.n();
    let mut w = ndarray::Array2::zeros((n, n));
    let mut wbar = ndarray::Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let (k1, k2) = (g.freq(i), g.freq(j));
            let chi = cutoffs.chi_low(k1, k2);
            if chi == 0.0 {
                continue;
            }
            let sym = LinearSymbol::new([k1, k2], cutoffs.epsilon);
            let qi = sym.q_inv();
            let v = qi.apply([
                state.a.coefficients()[[i, j]] * chi,
                state.c.coefficients()[[i, j]] * chi,
            ]);
            w[[i, j]] = v[0];
            wbar[[i, j]] = v[1];
        }
    }
    (
        SpectralField::from_coefficients(&g, w),
        SpectralField::from_coefficients(&g, wbar),
    )
}

/// Sup-norm of the pointwise Euclidean magnitude of a pair of fields after
/// applying `<grad>^sigma` to each.
fn pair_w_inf(f1: &SpectralField, f2: &SpectralField, sigma: f64) -> f64 {
    let a = if sigma == 0.0 { f1.clone() } else { f1.bessel(sigma) };
    let b = if sigma == 0.0 { f2.clone() } else { f2.bessel(sigma) };
    let (pa, pb) = (a.to_physical(), b.to_physical());
    pa.iter()
        .zip(pb.iter())
        .map(|(x, y)| (x.norm_sqr() + y.norm_sqr()).sqrt())
        .fold(0.0, f64::max)
}

/// Evaluates every component of the composite norm at time `t`.
pub fn xt_components(
    state: &SymmetrizedState,
    t: f64,
    params: &SimulationParams,
    cutoffs: &CutoffFamily,
) -> XtComponents {
    let sigma = params.sigma;
    let delta = params.delta;
    let np = params.n_prime as f64;
    let nn = params.n_reg as f64;
    let tb = time_bracket(t);

    let (w, wbar) = w_profile(state, cutoffs);
    let half = |f: &SpectralField| f.modulus_pow(0.5).bessel(1.0);
    let low_disp = tb * pair_w_inf(&half(&w), &half(&wbar), sigma);

    let weighted = {
        let f = half_wave_full(&w, t, params.epsilon);
        let p = 2.0 / (1.0 - delta);
        let mut acc = 0.0;
        for axis in 0..2 {
            let z = weight_by_coordinate(&f, axis);
            acc += sobolev_norm(&z, sigma + 4.0, p).expect("finite").powi(2);
        }
        acc.sqrt()
    };

    let al = cutoffs.project_low(&state.a);
    let cl = cutoffs.project_low(&state.c);
    let low_sob = tuple_h_norm(&[&al, &cl], sigma + np);

    let am = cutoffs.project_mid(&state.a);
    let cm = cutoffs.project_mid(&state.c);
    let mid_sob = tb.powf(1.0 - 3.0 * delta) * tuple_h_norm(&[&am, &cm], 2.0 * sigma + nn - 1.0);
    let mid_w14 = tb.powf(1.5) * tuple_sobolev(&[&am, &cm], 1.0, 4.0).expect("finite");

    let ah = cutoffs.project_high(&state.a);
    let ch = cutoffs.project_high(&state.c);
    let high_sob = tb.powf(params.alpha()) * tuple_h_norm(&[&ah, &ch], 2.0 * sigma + nn - 2.0);

    let top_sob = tb.powf(-delta) * tuple_h_norm(&[&state.a, &state.c], 2.0 * sigma + nn);

    XtComponents {
        low_disp,
        weighted,
        low_sob,
        mid_sob,
        mid_w14,
        high_sob,
        top_sob,
    }
}

/// One sampling instant's diagnostics.
#[derive(Debug, Clone)]
pub struct NormReport {
    pub time: f64,
    pub l2: f64,
    pub linf: f64,
    pub w1inf: f64,
    pub xt: XtComponents,
    pub e_n: f64,
    pub weighted_high: f64,
    pub mass_fraction: f64,
    /// Set when the mass-containment window is violated; whole-space decay
    /// components are then untrustworthy (wrap-around pollution).
    pub stale: bool,
}

impl NormReport {
    pub const CSV_HEADER: &'static str = "time,l2,linf,w1inf,xt_low_disp,xt_weighted,xt_low_sob,xt_mid_sob,xt_mid_w14,xt_high_sob,xt_top_sob,e_n,weighted_high,mass_fraction,stale";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.time,
            self.l2,
            self.linf,
            self.w1inf,
            self.xt.low_disp,
            self.xt.weighted,
            self.xt.low_sob,
            self.xt.mid_sob,
            self.xt.mid_w14,
            self.xt.high_sob,
            self.xt.top_sob,
            self.e_n,
            self.weighted_high,
            self.mass_fraction,
            u8::from(self.stale),
        )
    }
}

/// Full diagnostic record for a primitive state.
pub fn norm_report(
    state: &PrimitiveState,
    params: &SimulationParams,
    cutoffs: &CutoffFamily,
) -> NormReport {
    let fields = state.fields_with_grad_phi();
    let refs: Vec<&SpectralField> = fields.iter().collect();
    let l2 = refs.iter().map(|f| f.l2_norm().powi(2)).sum::<f64>().sqrt();
    let linf = refs
        .iter()
        .map(|f| lp_norm(f, f64::INFINITY).powi(2))
        .sum::<f64>()
        .sqrt();
    let w1inf = tuple_sobolev(&refs, 1.0, f64::INFINITY).unwrap_or(f64::NAN);
    let mass_fraction = mass_fraction_central(&refs);
    let sym = SymmetrizedState::from_primitive_potential(state);
    let xt = xt_components(&sym, state.time, params, cutoffs);
    NormReport {
        time: state.time,
        l2,
        linf,
        w1inf,
        xt,
        e_n: energy_en(state, params.n_reg),
        weighted_high: weighted_high_norm(state, cutoffs),
        mass_fraction,
        stale: mass_fraction < 0.99,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2D;
    use std::f64::consts::PI;

    #[test]
    fn constant_field_l2() {
        let l = 9.0;
        let g = Grid2D::new(32, l).unwrap();
        let f = SpectralField::from_physical_fn(&g, |_, _| 3.0);
        // s = 0, p = 2 on a constant c: c * L
        assert!((sobolev_norm(&f, 0.0, 2.0).unwrap() - 3.0 * l).abs() < 1e-10);
    }

    #[test]
    fn single_mode_h2() {
        let l = 2.0 * PI;
        let g = Grid2D::new(32, l).unwrap();
        let f = SpectralField::from_physical_fn(&g, |x, _| (3.0 * x).cos());
        let expect = (1.0f64 + 9.0).powf(1.0) * f.l2_norm();
        assert!((sobolev_norm(&f, 2.0, 2.0).unwrap() - expect).abs() < 1e-9 * expect);
        assert!((h_norm(&f, 2.0) - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn fit_decay_synthetic() {
        let series: Vec<(f64, f64)> = (0..40)
            .map(|i| {
                let t = i as f64;
                (t, 1.0 / (1.0 + t))
            })
            .collect();
        let fit = fit_decay(&series, (0.0, 40.0)).unwrap();
        assert!((fit.exponent + 1.0).abs() < 1e-10);
        assert!(fit.r_squared > 1.0 - 1e-12);

        let series: Vec<(f64, f64)> = (0..40)
            .map(|i| {
                let t = i as f64;
                (t, 2.5 * (1.0 + t).powf(-1.5))
            })
            .collect();
        let fit = fit_decay(&series, (0.0, 40.0)).unwrap();
        assert!((fit.exponent + 1.5).abs() < 1e-10);
    }

    #[test]
    fn fit_decay_needs_samples() {
        let series = vec![(0.0, 1.0), (1.0, 0.5)];
        assert!(matches!(
            fit_decay(&series, (0.0, 2.0)),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn commutator_vanishes_for_scalar() {
        let g = Grid2D::new(64, 40.0).unwrap();
        let f = SpectralField::from_physical_fn(&g, |x, y| (-0.3 * (x * x + y * y)).exp());
        let v = commutator_probe(
            &f,
            4.0,
            |_, _| Complex64::new(1.0, 0.0),
            default_zeta,
            2.0,
        )
        .unwrap();
        assert!(v < 1e-12 * f.l2_norm());
    }

    #[test]
    fn commutator_rejects_big_r() {
        let g = Grid2D::new(32, 10.0).unwrap();
        let f = SpectralField::from_physical_fn(&g, |_, _| 1.0);
        assert!(matches!(
            commutator_probe(&f, 4.0, bessel_inverse_symbol, default_zeta, 2.0),
            Err(Error::WeightExceedsBox(..))
        ));
    }

    #[test]
    fn mass_fraction_of_tight_gaussian_is_one() {
        let g = Grid2D::new(64, 64.0).unwrap();
        let f = SpectralField::from_physical_fn(&g, |x, y| (-(x * x + y * y)).exp());
        assert!(mass_fraction_central(&[&f]) > 0.999999);
    }
}
