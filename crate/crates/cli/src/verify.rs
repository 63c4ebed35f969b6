//! Verification drivers behind `verify-linear` and `verify-phase`; each
//! criterion reports PASS/FAIL with its measured value.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use nsp2d_core::cutoffs::{CutoffFamily, KAPPA0_DEFAULT};
use nsp2d_core::grid::{Grid2D, SpectralField};
use nsp2d_core::num_complex::Complex64;
use nsp2d_core::io::Csv;
use nsp2d_core::linear::{band_decay_series, green_matrix, half_wave, Band, LinearSymbol, Mat2};
use nsp2d_core::norms::{fit_decay, fit_exponential, lp_norm};
use nsp2d_core::phase::{symbol_bound_sweep, PhaseSymbol, Sign};
use nsp2d_core::rng::CounterRng;
use nsp2d_core::Result;

/// Scaling-and-squaring matrix exponential, the oracle the Green matrix is
/// measured against (independent of the closed-form implementation).
pub fn mat_exp_oracle(m: &Mat2, t: f64) -> Mat2 {
    let mut a = *m;
    for i in 0..2 {
        for j in 0..2 {
            a.0[i][j] *= t;
        }
    }
    let norm: f64 = a.0.iter().flatten().map(|z| z.norm()).sum();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    for i in 0..2 {
        for j in 0..2 {
            a.0[i][j] *= scale;
        }
    }
    let mut sum = Mat2::identity();
    let mut term = Mat2::identity();
    for k in 1..30 {
        term = term.mul(&a);
        for i in 0..2 {
            for j in 0..2 {
                term.0[i][j] /= k as f64;
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                sum.0[i][j] += term.0[i][j];
            }
        }
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

fn neg_a_hat(sym: &LinearSymbol) -> Mat2 {
    let mut m = sym.a_hat();
    for i in 0..2 {
        for j in 0..2 {
            m.0[i][j] = -m.0[i][j];
        }
    }
    m
}

/// One verified criterion.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Criterion {
    pub fn line(&self) -> String {
        format!(
            "{} {} ({})",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

#[derive(Debug)]
pub struct LinearReport {
    pub criteria: Vec<Criterion>,
    /// `(epsilon, band, fitted_rate, max_residual_vs_oracle)` rows.
    pub band_rows: Vec<(f64, &'static str, f64, f64)>,
}

impl LinearReport {
    pub fn all_pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut csv = Csv::new("epsilon,band,fitted_rate,max_residual_vs_oracle");
        for (eps, band, rate, resid) in &self.band_rows {
            csv.push_row(&format!("{eps},{band},{rate},{resid}"));
        }
        csv.write(path)
    }
}

/// Largest relative Green-matrix residual against the oracle over random
/// `(t, xi)` samples at one `eps`.
fn oracle_residual(eps: f64, samples: usize, seed: u64) -> f64 {
    let mut rng = CounterRng::new(seed, 9);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let xi = [rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0)];
        let t = rng.uniform(0.0, 5.0);
        let sym = LinearSymbol::new(xi, eps);
        let got = green_matrix(t, &sym);
        let want = mat_exp_oracle(&neg_a_hat(&sym), t);
        let scale = want.norm().max(1e-30);
        worst = worst.max(got.sub(&want).norm() / scale);
    }
    worst
}

/// The `verify-linear` battery: propagator oracle, semigroup and
/// diagonalisation identities, dispersive decay fit, band decay rates.
pub fn verify_linear(quick: bool, threads: usize) -> Result<LinearReport> {
    let mut criteria = Vec::new();

    // 1. propagator against the matrix-exponential oracle
    let started = Instant::now();
    let mut rng = CounterRng::new(500, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let xi = [rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0)];
        let eps = rng.uniform(1e-3, 1.0);
        let t = rng.uniform(0.0, 5.0);
        let sym = LinearSymbol::new(xi, eps);
        let got = green_matrix(t, &sym);
        let want = mat_exp_oracle(&neg_a_hat(&sym), t);
        worst = worst.max(got.sub(&want).norm() / want.norm().max(1e-30));
    }
    // near-confluent modes: radicand ~ 0
    for _ in 0..100 {
        let k = rng.uniform(1.0, 12.0);
        let eps0 = (1.0 + k * k).sqrt() / (k * k);
        if !(0.0..=1.0).contains(&eps0) {
            continue;
        }
        let eps = eps0 * (1.0 + rng.uniform(-1e-9, 1e-9));
        let t = rng.uniform(0.0, 3.0);
        let sym = LinearSymbol::new([k, 0.0], eps);
        let got = green_matrix(t, &sym);
        let want = mat_exp_oracle(&neg_a_hat(&sym), t);
        worst = worst.max(got.sub(&want).norm() / want.norm().max(1e-30));
    }
    let elapsed = started.elapsed().as_secs_f64();
    criteria.push(Criterion {
        name: "propagator-oracle".into(),
        pass: worst <= 1e-10 && elapsed < 5.0,
        detail: format!("max residual {worst:.3e}, {elapsed:.2} s"),
    });

    // 2. semigroup law and diagonalisation on the low band
    let started = Instant::now();
    let fam = CutoffFamily::new(0.2, KAPPA0_DEFAULT)?;
    let mut worst_semi: f64 = 0.0;
    let mut worst_diag: f64 = 0.0;
    let mut rng = CounterRng::new(501, 0);
    for _ in 0..10_000 {
        let eps = rng.uniform(1e-3, 1.0);
        let xi = [rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)];
        let sym = LinearSymbol::new(xi, eps);
        let (t, s) = (rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0));
        let lhs = green_matrix(t + s, &sym);
        let rhs = green_matrix(t, &sym).mul(&green_matrix(s, &sym));
        worst_semi = worst_semi.max(lhs.sub(&rhs).norm() / lhs.norm().max(1e-30));
    }
    let radius = fam.low_band_radius();
    let mut rng = CounterRng::new(502, 0);
    for _ in 0..10_000 {
        let xi = [rng.uniform(-radius, radius), rng.uniform(-radius, radius)];
        if fam.chi_low(xi[0], xi[1]) <= 0.0 {
            continue;
        }
        let sym = LinearSymbol::new(xi, fam.epsilon);
        let d = Mat2([
            [-sym.lambda_minus, Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), -sym.lambda_plus],
        ]);
        let rec = sym.q().mul(&d).mul(&sym.q_inv());
        let a = sym.a_hat();
        worst_diag = worst_diag.max(rec.sub(&a).norm() / a.norm());
    }
    let elapsed = started.elapsed().as_secs_f64();
    criteria.push(Criterion {
        name: "semigroup-diagonalization".into(),
        pass: worst_semi <= 1e-10 && worst_diag <= 1e-10 && elapsed < 5.0,
        detail: format!("semigroup {worst_semi:.3e}, diagonalization {worst_diag:.3e}, {elapsed:.2} s"),
    });

    // 3. dispersive sup-norm decay of e^{i t b(D)} chi^L
    let n = if quick { 256 } else { 512 };
    let grid = Grid2D::with_options(n, 64.0 * std::f64::consts::PI, 2.0 / 3.0, threads)?;
    let eps = 0.01;
    let fam = CutoffFamily::new(eps, KAPPA0_DEFAULT)?;
    let f = SpectralField::from_physical_fn(&grid, |x, y| {
        (-(x * x + y * y) / 8.0).exp()
    });
    let series: Vec<(f64, f64)> = (0..40)
        .map(|i| {
            let t = 1.0 + i as f64;
            (t, lp_norm(&half_wave(&f, t, &fam), f64::INFINITY))
        })
        .collect();
    let fit = fit_decay(&series, (2.0, 40.0))?;
    criteria.push(Criterion {
        name: "dispersive-decay".into(),
        pass: (-1.25..=-0.75).contains(&fit.exponent) && fit.r_squared >= 0.95,
        detail: format!("exponent {:.3}, r2 {:.4}, N = {n}", fit.exponent, fit.r_squared),
    });

    // 4. band semigroup decay, rates per (eps, band)
    let scan_grid = Grid2D::with_options(128, 64.0 * std::f64::consts::PI, 2.0 / 3.0, 1)?;
    let times: Vec<f64> = (0..=40).map(|i| i as f64 * 100.0).collect();
    let mut band_rows = Vec::new();
    let mut high_rates = Vec::new();
    let mut mid_ok = true;
    for eps in [1.0, 0.1, 0.01] {
        let fam = CutoffFamily::new(eps, KAPPA0_DEFAULT)?;
        let resid = oracle_residual(eps, 1000, 600 + (eps * 1000.0) as u64);
        for (band, tag) in [(Band::High, "high"), (Band::Mid, "mid")] {
            let series: Vec<(f64, f64)> = times
                .iter()
                .zip(band_decay_series(&scan_grid, &fam, band, &times))
                .map(|(&t, v)| (t, v))
                .collect();
            let window = (series[series.len() / 10].0, series.last().unwrap().0);
            let fit = fit_exponential(&series, window)?;
            let rate = -fit.exponent;
            band_rows.push((eps, tag, rate, resid));
            match band {
                Band::High => high_rates.push(rate),
                Band::Mid => mid_ok &= rate >= 0.8 * KAPPA0_DEFAULT / 5.0,
            }
        }
    }
    let lo = high_rates.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = high_rates.iter().cloned().fold(0.0f64, f64::max);
    criteria.push(Criterion {
        name: "band-decay".into(),
        pass: lo > 0.0 && hi / lo < 4.0 && mid_ok,
        detail: format!("high rates {high_rates:?} (spread {:.2}), mid ok {mid_ok}", hi / lo),
    });

    Ok(LinearReport { criteria, band_rows })
}

/// JSON report of a phase sweep.
#[derive(Debug, Serialize)]
pub struct PhaseReport {
    pub epsilon: f64,
    pub kappa0: f64,
    pub case: String,
    pub samples: usize,
    pub skipped: usize,
    pub min_a: f64,
    pub min_abs_phi: f64,
    pub overall_max_ratio: f64,
    pub max_ratio_by_order: std::collections::BTreeMap<String, f64>,
    pub two_plus: f64,
    pub three_plus: f64,
}

pub fn verify_phase(
    epsilon: f64,
    case: &str,
    samples: usize,
    seed: u64,
) -> Result<PhaseReport> {
    let (mu, nu) = Sign::parse_pair(case)?;
    let fam = CutoffFamily::new(epsilon, KAPPA0_DEFAULT)?;
    let sym = PhaseSymbol::new(fam, mu, nu);
    let rep = symbol_bound_sweep(&sym, samples, seed, 1e-4);
    let mut by_order = std::collections::BTreeMap::new();
    for ((a1, a2, b1, b2), v) in &rep.max_ratio_by_order {
        by_order.insert(format!("d{a1}{a2}d{b1}{b2}"), *v);
    }
    Ok(PhaseReport {
        epsilon,
        kappa0: rep.kappa0,
        case: case.to_string(),
        samples: rep.samples,
        skipped: rep.skipped,
        min_a: rep.min_a,
        min_abs_phi: rep.min_abs_phi,
        overall_max_ratio: rep.overall_max_ratio(),
        max_ratio_by_order: by_order,
        two_plus: rep.two_plus,
        three_plus: rep.three_plus,
    })
}
