//! Numerical laboratory for the normal-form machinery: phase functions,
//! the lower-bounded quantity `A`, symbol-bound sweeps for `m / phi`, the
//! brute-force bilinear operator, and the S-matrix identity.

use num_complex::Complex64;

use crate::cutoffs::CutoffFamily;
use crate::error::{Error, Result};
use crate::grid::SpectralField;
use crate::linear::LinearSymbol;
use crate::rng::CounterRng;

/// Regularity indices "slightly above" 2 and 3 used by the bilinear-bound
/// probes; fixed values recorded in every report.
pub const TWO_PLUS: f64 = 2.25;
pub const THREE_PLUS: f64 = 3.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn parse_pair(s: &str) -> Result<(Sign, Sign)> {
        let mut it = s.chars();
        let one = |c: Option<char>| match c {
            Some('+') => Ok(Sign::Plus),
            Some('-') => Ok(Sign::Minus),
            other => Err(Error::Config(format!(
                "bad sign case '{s}' (expected one of ++, +-, -+, --), got {other:?}"
            ))),
        };
        let a = one(it.next())?;
        let b = one(it.next())?;
        if it.next().is_some() {
            return Err(Error::Config(format!("bad sign case '{s}'")));
        }
        Ok((a, b))
    }
}

fn norm_sq(v: [f64; 2]) -> f64 {
    v[0] * v[0] + v[1] * v[1]
}

fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

/// Real dispersion value; callers stay on the set where the radicand is
/// positive (it is on `supp chi^L` for `kappa0 <= 1/200`).
pub fn b_real(v: [f64; 2], epsilon: f64) -> f64 {
    let k2 = norm_sq(v);
    (1.0 + k2 - epsilon * epsilon * k2 * k2).sqrt()
}

/// `Z(xi, eta) = eps (|xi + eta|^2 - |xi|^2 - |eta|^2) = 2 eps xi.eta`.
pub fn quantity_z(xi: [f64; 2], eta: [f64; 2], epsilon: f64) -> f64 {
    epsilon * (norm_sq(add(xi, eta)) - norm_sq(xi) - norm_sq(eta))
}

/// `A = 1 + 2 b(xi) b(eta) - 2 xi.eta + eps^2 (|xi|^4 + |eta|^4 - |xi+eta|^4)`.
pub fn quantity_a(xi: [f64; 2], eta: [f64; 2], epsilon: f64) -> f64 {
    let dot = xi[0] * eta[0] + xi[1] * eta[1];
    let e2 = epsilon * epsilon;
    1.0 + 2.0 * b_real(xi, epsilon) * b_real(eta, epsilon) - 2.0 * dot
        + e2 * (norm_sq(xi).powi(2) + norm_sq(eta).powi(2) - norm_sq(add(xi, eta)).powi(2))
}

/// Per-case bundle of the phase function `phi_{mu nu}` and multiplier
/// `m_{mu nu}`; inputs are the two convolution frequencies `(xi, eta)`,
/// the output frequency being `xi + eta`.
#[derive(Debug, Clone, Copy)]
pub struct PhaseSymbol {
    pub cutoffs: CutoffFamily,
    pub mu: Sign,
    pub nu: Sign,
    /// Replace `n_+ = -lambda_- / <xi>` by the constant 1.
    pub n_plus_unit: bool,
    /// Replace `n_- = -lambda_+ / <xi>` by the constant 1.
    pub n_minus_unit: bool,
}

impl PhaseSymbol {
    pub fn new(cutoffs: CutoffFamily, mu: Sign, nu: Sign) -> Self {
        Self { cutoffs, mu, nu, n_plus_unit: false, n_minus_unit: false }
    }

    /// `phi_{mu nu}(xi + eta, eta) = i (b(xi+eta) - mu b(xi) - nu b(eta)) + Z`.
    pub fn phi(&self, xi: [f64; 2], eta: [f64; 2]) -> Complex64 {
        let eps = self.cutoffs.epsilon;
        let osc = b_real(add(xi, eta), eps)
            - self.mu.value() * b_real(xi, eps)
            - self.nu.value() * b_real(eta, eps);
        Complex64::new(quantity_z(xi, eta, eps), osc)
    }

    fn n_factor(&self, sign: Sign, unit: bool, v: [f64; 2]) -> Complex64 {
        if unit {
            return Complex64::new(1.0, 0.0);
        }
        let sym = LinearSymbol::new(v, self.cutoffs.epsilon);
        let lambda = match sign {
            Sign::Plus => sym.lambda_minus,
            Sign::Minus => sym.lambda_plus,
        };
        -lambda / sym.bracket
    }

    /// `m = <xi+eta> chi^L(xi) chi^L(eta) chi^L(xi+eta) n_mu(xi) n_nu(eta)`.
    pub fn m(&self, xi: [f64; 2], eta: [f64; 2]) -> Complex64 {
        let s = add(xi, eta);
        let chi = self.cutoffs.chi_low(xi[0], xi[1])
            * self.cutoffs.chi_low(eta[0], eta[1])
            * self.cutoffs.chi_low(s[0], s[1]);
        if chi == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let bracket = (1.0 + norm_sq(s)).sqrt();
        self.n_factor(self.mu, self.n_plus_unit, xi)
            * self.n_factor(self.nu, self.n_minus_unit, eta)
            * (bracket * chi)
    }

    /// The ratio `m / phi`.
    pub fn ratio(&self, xi: [f64; 2], eta: [f64; 2]) -> Complex64 {
        self.m(xi, eta) / self.phi(xi, eta)
    }

    /// Admissibility: all three frequencies inside `supp chi^L`.
    pub fn admissible(&self, xi: [f64; 2], eta: [f64; 2]) -> bool {
        let s = add(xi, eta);
        self.cutoffs.chi_low(xi[0], xi[1]) > 0.0
            && self.cutoffs.chi_low(eta[0], eta[1]) > 0.0
            && self.cutoffs.chi_low(s[0], s[1]) > 0.0
    }
}

/// Central-difference stencil (offsets in units of the step, weights in
/// units of `1/h^order`) for one scalar axis.
fn axis_stencil(order: u8, h: f64) -> Vec<(f64, f64)> {
    match order {
        0 => vec![(0.0, 1.0)],
        1 => vec![(-h, -0.5 / h), (h, 0.5 / h)],
        2 => vec![(-h, 1.0 / (h * h)), (0.0, -2.0 / (h * h)), (h, 1.0 / (h * h))],
        _ => unreachable!("orders above 2 are not sampled"),
    }
}

/// Multi-indices in N^2 with total order at most 2.
const MULTI2: [(u8, u8); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

/// Report of a symbol-bound sweep for one `(mu, nu, eps)` case.
///
/// Derivatives are measured in the band-rescaled frequency variable
/// `sqrt(eps/kappa0) xi`: each raw derivative of the eps-scaled cutoffs
/// carries a factor `sqrt(eps/kappa0)` by the chain rule, so the raw
/// maxima scale like `(eps/kappa0)^{(|alpha|+|beta|)/2}` (largest at
/// `eps = 1`, vanishing as `eps -> 0`). The rescaled ratios are the
/// quantity that is actually uniform across `eps`.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub epsilon: f64,
    pub kappa0: f64,
    pub case: (Sign, Sign),
    pub samples: usize,
    pub skipped: usize,
    pub min_a: f64,
    pub min_abs_phi: f64,
    /// `((alpha, beta), max over samples of |d^alpha d^beta (m/phi)| /
    /// (<xi+eta> min b))` for every pair of multi-indices of order <= 2.
    pub max_ratio_by_order: Vec<((u8, u8, u8, u8), f64)>,
    pub two_plus: f64,
    pub three_plus: f64,
}

impl SweepReport {
    pub fn overall_max_ratio(&self) -> f64 {
        self.max_ratio_by_order
            .iter()
            .map(|&(_, v)| v)
            .fold(0.0, f64::max)
    }
}

/// Sweeps random admissible `(xi, eta)` pairs, measuring the phase lower
/// bounds and the derivative bounds of `m / phi` by central differences.
pub fn symbol_bound_sweep(
    sym: &PhaseSymbol,
    sample_count: usize,
    seed: u64,
    fd_step: f64,
) -> SweepReport {
    let eps = sym.cutoffs.epsilon;
    let radius = sym.cutoffs.low_band_radius();
    let mut rng = CounterRng::new(seed, 4);
    let mut samples = 0usize;
    let mut skipped = 0usize;
    let mut min_a = f64::INFINITY;
    let mut min_abs_phi = f64::INFINITY;
    let mut combos: Vec<(u8, u8, u8, u8)> = Vec::new();
    for &(a1, a2) in &MULTI2 {
        for &(b1, b2) in &MULTI2 {
            combos.push((a1, a2, b1, b2));
        }
    }
    let mut max_ratio: Vec<((u8, u8, u8, u8), f64)> =
        combos.iter().map(|&c| (c, 0.0)).collect();

    while samples < sample_count {
        let xi = [rng.uniform(-radius, radius), rng.uniform(-radius, radius)];
        let eta = [rng.uniform(-radius, radius), rng.uniform(-radius, radius)];
        if !sym.admissible(xi, eta) {
            skipped += 1;
            if skipped > 100 * sample_count.max(100) {
                break;
            }
            continue;
        }
        samples += 1;
        min_a = min_a.min(quantity_a(xi, eta, eps));
        min_abs_phi = min_abs_phi.min(sym.phi(xi, eta).norm());

        let denom = {
            let s = add(xi, eta);
            let bracket = (1.0 + norm_sq(s)).sqrt();
            bracket
                * b_real(xi, eps)
                    .min(b_real(eta, eps))
                    .min(b_real(s, eps))
        };

        let band_scale = sym.cutoffs.scale();
        for (slot, &(a1, a2, b1, b2)) in combos.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (dx1, w1) in axis_stencil(a1, fd_step) {
                for (dx2, w2) in axis_stencil(a2, fd_step) {
                    for (dy1, w3) in axis_stencil(b1, fd_step) {
                        for (dy2, w4) in axis_stencil(b2, fd_step) {
                            let p = [xi[0] + dx1, xi[1] + dx2];
                            let q = [eta[0] + dy1, eta[1] + dy2];
                            acc += sym.ratio(p, q) * (w1 * w2 * w3 * w4);
                        }
                    }
                }
            }
            let order = (a1 + a2 + b1 + b2) as i32;
            let r = acc.norm() / (denom * band_scale.powi(order));
            if r > max_ratio[slot].1 {
                max_ratio[slot].1 = r;
            }
        }
    }

    SweepReport {
        epsilon: eps,
        kappa0: sym.cutoffs.kappa0,
        case: (sym.mu, sym.nu),
        samples,
        skipped,
        min_a,
        min_abs_phi,
        max_ratio_by_order: max_ratio,
        two_plus: TWO_PLUS,
        three_plus: THREE_PLUS,
    }
}

/// Grid-size cap of the brute-force bilinear operator (the double sum costs
/// `O(N^4)`).
pub const BILINEAR_N_CAP: usize = 64;

/// Brute-force bilinear operator
/// `T_m(f, g) = F^{-1}( sum_eta m(xi, eta) fhat(xi - eta) ghat(eta) )`
/// with the plain lattice sum; frequencies outside the lattice contribute
/// nothing.
pub fn bilinear_t(
    m: impl Fn([f64; 2], [f64; 2]) -> Complex64,
    f: &SpectralField,
    g: &SpectralField,
) -> Result<SpectralField> {
    let grid = f.grid().clone();
    let n = grid.n();
    if n > BILINEAR_N_CAP {
        return Err(Error::BilinearTooLarge(n, BILINEAR_N_CAP, (n as f64).powi(4)));
    }
    let half = (n / 2) as i64;

    // gather the nonzero modes of g once
    let mut g_modes = Vec::new();
    for ((p, q), v) in g.coefficients().indexed_iter() {
        if v.norm_sqr() > 0.0 {
            g_modes.push((grid.signed_index(p), grid.signed_index(q), *v));
        }
    }
    let fc = f.coefficients();
    let mut out = ndarray::Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let (m1, m2) = (grid.signed_index(i), grid.signed_index(j));
            let xi = [grid.freq(i), grid.freq(j)];
            let mut acc = Complex64::new(0.0, 0.0);
            for &(p1, p2, gv) in &g_modes {
                let (d1, d2) = (m1 - p1, m2 - p2);
                if d1 < -half || d1 >= half || d2 < -half || d2 >= half {
                    continue;
                }
                let fi = ((d1 + n as i64) % n as i64) as usize;
                let fj = ((d2 + n as i64) % n as i64) as usize;
                let fv = fc[[fi, fj]];
                if fv.norm_sqr() == 0.0 {
                    continue;
                }
                let scale = 2.0 * std::f64::consts::PI / grid.length();
                let eta = [p1 as f64 * scale, p2 as f64 * scale];
                acc += m(xi, eta) * fv * gv;
            }
            out[[i, j]] = acc;
        }
    }
    Ok(SpectralField::from_coefficients(&grid, out))
}

/// Closed-form S-matrix of the appendix identity together with its measured
/// residual, determinant, and inverse norm.
#[derive(Debug, Clone, Copy)]
pub struct SMatrixResult {
    pub s: [[f64; 2]; 2],
    pub residual: f64,
    pub det: f64,
    pub inv_norm: f64,
}

/// `S(x, y)` with `(1 - 2 eps^2 |x|^2) x / b(x) - (same at y) = S (x - y)`;
/// requires `eps |x|^2 <= 3 kappa0` and `eps |y|^2 <= 3 kappa0`.
pub fn s_matrix(x: [f64; 2], y: [f64; 2], epsilon: f64, kappa0: f64) -> Result<SMatrixResult> {
    let bound = 3.0 * kappa0;
    for v in [x, y] {
        let e = epsilon * norm_sq(v);
        if e > bound {
            return Err(Error::SMatrixSupport(e, bound));
        }
    }
    let e2 = epsilon * epsilon;
    let (x2, y2) = (norm_sq(x), norm_sq(y));
    let (bx, by) = (b_real(x, epsilon), b_real(y, epsilon));
    let pref = (1.0 - 2.0 * e2 * x2) / by;
    let c1 = (1.0 - e2 * (x2 + y2)) / (bx * (bx + by));
    let c2 = 2.0 * e2 / (1.0 - 2.0 * e2 * x2);
    let sum = add(x, y);
    let mut s = [[0.0f64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { 1.0 } else { 0.0 };
            s[i][j] = pref * (id - c1 * x[i] * sum[j] - c2 * y[i] * sum[j]);
        }
    }
    let lhs = [
        (1.0 - 2.0 * e2 * x2) * x[0] / bx - (1.0 - 2.0 * e2 * y2) * y[0] / by,
        (1.0 - 2.0 * e2 * x2) * x[1] / bx - (1.0 - 2.0 * e2 * y2) * y[1] / by,
    ];
    let d = [x[0] - y[0], x[1] - y[1]];
    let sv = [
        s[0][0] * d[0] + s[0][1] * d[1],
        s[1][0] * d[0] + s[1][1] * d[1],
    ];
    let residual = (lhs[0] - sv[0]).hypot(lhs[1] - sv[1]);
    let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    let frob2 = s.iter().flatten().map(|v| v * v).sum::<f64>();
    let sigma_min_sq = 0.5 * (frob2 - (frob2 * frob2 - 4.0 * det * det).max(0.0).sqrt());
    let inv_norm = if sigma_min_sq > 0.0 {
        1.0 / sigma_min_sq.sqrt()
    } else {
        f64::INFINITY
    };
    Ok(SMatrixResult { s, residual, det, inv_norm })
}
