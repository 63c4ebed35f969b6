//! Exact per-mode linear theory of the symmetrised system.
//!
//! The linearisation of the coupled (density, potential-velocity) pair reads
//! `d/dt U + A U = 0` with per-mode matrix
//! `A(xi) = [[0, <xi>], [-<xi>, 2 eps |xi|^2]]`. Its Green matrix
//! `e^{-t A(xi)}` is known in closed form through the eigenvalues
//! `lambda_pm = -eps |xi|^2 +- i b(xi)`, `b = sqrt(1 + |xi|^2 - eps^2 |xi|^4)`.

use num_complex::Complex64;

use crate::cutoffs::CutoffFamily;
use crate::grid::SpectralField;

/// 2 x 2 complex matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ])
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &o.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        let mut m = *self;
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] -= o.0[i][j];
            }
        }
        m
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Spectral (operator 2-) norm from the singular values of a 2 x 2 matrix.
    pub fn norm(&self) -> f64 {
        let t: f64 = self.0.iter().flatten().map(|z| z.norm_sqr()).sum();
        let d = self.det().norm_sqr();
        (0.5 * (t + (t * t - 4.0 * d).max(0.0).sqrt())).sqrt()
    }
}

/// Dispersion relation `b(xi)`.
///
/// For a negative radicand the branch is `b = +i sqrt(-r)`, the reading of
/// the lower-half-axis cut that keeps `Re lambda_pm <= 0`.
pub fn dispersion_b(ksq: f64, epsilon: f64) -> Complex64 {
    let r = 1.0 + ksq - epsilon * epsilon * ksq * ksq;
    if r >= 0.0 {
        Complex64::new(r.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-r).sqrt())
    }
}

/// Per-mode bundle of the linear theory at frequency `xi`.
#[derive(Debug, Clone, Copy)]
pub struct LinearSymbol {
    pub xi: [f64; 2],
    pub epsilon: f64,
    /// `|xi|^2`
    pub ksq: f64,
    /// `<xi> = sqrt(1 + |xi|^2)`
    pub bracket: f64,
    pub b: Complex64,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
}

impl LinearSymbol {
    pub fn new(xi: [f64; 2], epsilon: f64) -> Self {
        let ksq = xi[0] * xi[0] + xi[1] * xi[1];
        let b = dispersion_b(ksq, epsilon);
        let ib = Complex64::new(0.0, 1.0) * b;
        let sigma = Complex64::new(-epsilon * ksq, 0.0);
        Self {
            xi,
            epsilon,
            ksq,
            bracket: (1.0 + ksq).sqrt(),
            b,
            lambda_plus: sigma + ib,
            lambda_minus: sigma - ib,
        }
    }

    /// `A(xi) = [[0, <xi>], [-<xi>, 2 eps |xi|^2]]`.
    pub fn a_hat(&self) -> Mat2 {
        let z = Complex64::new(0.0, 0.0);
        Mat2([
            [z, Complex64::new(self.bracket, 0.0)],
            [
                Complex64::new(-self.bracket, 0.0),
                Complex64::new(2.0 * self.epsilon * self.ksq, 0.0),
            ],
        ])
    }

    /// Eigenvector matrix `Q` of the low-frequency diagonalisation
    /// `A = Q diag(-lambda_-, -lambda_+) Q^{-1}`; meaningful where
    /// `chi^L(xi) > 0` (there `b` is real and bounded away from 0).
    pub fn q(&self) -> Mat2 {
        let one = Complex64::new(1.0, 0.0);
        let br = Complex64::new(self.bracket, 0.0);
        Mat2([
            [one, one],
            [-self.lambda_minus / br, -self.lambda_plus / br],
        ])
    }

    /// `Q^{-1} = [[lambda_+, <xi>], [-lambda_-, -<xi>]] / (2 i b)`.
    pub fn q_inv(&self) -> Mat2 {
        let d = Complex64::new(0.0, 2.0) * self.b;
        let br = Complex64::new(self.bracket, 0.0);
        Mat2([
            [self.lambda_plus / d, br / d],
            [-self.lambda_minus / d, -br / d],
        ])
    }
}

/// `sin(z)/z`, series near the origin.
fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-6 {
        let z2 = z * z;
        Complex64::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Green matrix `e^{-t A(xi)}` with entries `[[G1, -G2], [G2, G3]]`.
///
/// The eigenvalue form `(lambda_+ e^{lambda_- t} - lambda_- e^{lambda_+ t})
/// / (lambda_+ - lambda_-)` loses digits when `lambda_+ - lambda_- = 2 i b`
/// is small against the eigenvalues; for `|b t| < 1/2` the matrix is
/// evaluated instead through `cos(b t)` and `t sinc(b t)`, which is exact in
/// the confluent limit `b -> 0` and free of cancellation. The switch keeps
/// both branches within 1e-10 of a scaling-and-squaring oracle.
pub fn green_matrix(t: f64, sym: &LinearSymbol) -> Mat2 {
    debug_assert!(t >= 0.0);
    let br = Complex64::new(sym.bracket, 0.0);
    let z = sym.b * t;
    if z.norm() < 0.5 {
        let decay = (-sym.epsilon * sym.ksq * t).exp();
        let c = z.cos() * decay;
        let s = sinc(z) * t * decay;
        let g1 = c + s * (sym.epsilon * sym.ksq);
        let g2 = br * s;
        let g3 = c - s * (sym.epsilon * sym.ksq);
        Mat2([[g1, -g2], [g2, g3]])
    } else {
        let d = sym.lambda_plus - sym.lambda_minus;
        let ep = (sym.lambda_plus * t).exp();
        let em = (sym.lambda_minus * t).exp();
        let g1 = (sym.lambda_plus * em - sym.lambda_minus * ep) / d;
        let g2 = (ep - em) * br / d;
        let g3 = (sym.lambda_plus * ep - sym.lambda_minus * em) / d;
        Mat2([[g1, -g2], [g2, g3]])
    }
}

/// Applies the Green matrix mode-wise to the symmetrised pair `(a, c)`.
pub fn propagate_pair(
    a: &SpectralField,
    c: &SpectralField,
    t: f64,
    epsilon: f64,
) -> (SpectralField, SpectralField) {
    let grid = a.grid().clone();
    let n = grid.n();
    let mut ao = a.coefficients().clone();
    let mut co = c.coefficients().clone();
    for i in 0..n {
        for j in 0..n {
            let sym = LinearSymbol::new([grid.freq(i), grid.freq(j)], epsilon);
            let g = green_matrix(t, &sym);
            let v = g.apply([ao[[i, j]], co[[i, j]]]);
            ao[[i, j]] = v[0];
            co[[i, j]] = v[1];
        }
    }
    (
        SpectralField::from_coefficients(&grid, ao),
        SpectralField::from_coefficients(&grid, co),
    )
}

/// Half-wave group with low-band projection: multiplier `e^{i t b(xi)} chi^L(xi)`.
pub fn half_wave(w: &SpectralField, t: f64, cutoffs: &CutoffFamily) -> SpectralField {
    w.multiplier(|k1, k2| {
        let chi = cutoffs.chi_low(k1, k2);
        if chi == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let b = dispersion_b(k1 * k1 + k2 * k2, cutoffs.epsilon);
        (Complex64::new(0.0, t) * b).exp() * chi
    })
}

/// Plain half-wave group `e^{i t b(D)}` on the whole lattice.
pub fn half_wave_full(w: &SpectralField, t: f64, epsilon: f64) -> SpectralField {
    w.multiplier(|k1, k2| {
        let b = dispersion_b(k1 * k1 + k2 * k2, epsilon);
        (Complex64::new(0.0, t) * b).exp()
    })
}

/// Frequency band selector for semigroup-decay scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Mid,
    High,
}

/// `sup` over lattice modes in the band support of the Green-matrix spectral
/// norm, one value per requested time.
pub fn band_decay_series(
    grid: &crate::grid::Grid2D,
    cutoffs: &CutoffFamily,
    band: Band,
    times: &[f64],
) -> Vec<f64> {
    let n = grid.n();
    let mut modes = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (k1, k2) = (grid.freq(i), grid.freq(j));
            let chi = match band {
                Band::Mid => cutoffs.chi_m(k1, k2),
                Band::High => cutoffs.chi_h(k1, k2),
            };
            if chi > 0.0 {
                modes.push(LinearSymbol::new([k1, k2], cutoffs.epsilon));
            }
        }
    }
    times
        .iter()
        .map(|&t| {
            modes
                .iter()
                .map(|s| green_matrix(t, s).norm())
                .fold(0.0f64, f64::max)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_at_origin_and_unit() {
        let s = LinearSymbol::new([0.0, 0.0], 0.7);
        assert_eq!(s.b, Complex64::new(1.0, 0.0));
        assert_eq!(s.lambda_plus, Complex64::new(0.0, 1.0));
        assert_eq!(s.lambda_minus, Complex64::new(0.0, -1.0));

        // eps = 1, |xi| = 1: b = 1, lambda_pm = -1 +- i
        let s = LinearSymbol::new([1.0, 0.0], 1.0);
        assert!((s.b - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((s.lambda_plus - Complex64::new(-1.0, 1.0)).norm() < 1e-15);
        assert!((s.lambda_minus - Complex64::new(-1.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn characteristic_identities() {
        let mut rng = crate::rng::CounterRng::new(3, 1);
        for _ in 0..1000 {
            let xi = [rng.uniform(-30.0, 30.0), rng.uniform(-30.0, 30.0)];
            let eps = rng.uniform(1e-3, 1.0);
            let s = LinearSymbol::new(xi, eps);
            let sum = s.lambda_plus + s.lambda_minus;
            let prod = s.lambda_plus * s.lambda_minus;
            assert!((sum.re + 2.0 * eps * s.ksq).abs() < 1e-12 * (1.0 + s.ksq));
            assert!(sum.im.abs() < 1e-12 * (1.0 + s.ksq));
            let brsq = 1.0 + s.ksq;
            assert!((prod - Complex64::new(brsq, 0.0)).norm() < 1e-12 * brsq.max(1.0));
            assert!(s.lambda_plus.re <= 1e-14 && s.lambda_minus.re <= 1e-14);
        }
    }

    #[test]
    fn branch_keeps_decay_for_negative_radicand() {
        // strongly overdamped mode
        let s = LinearSymbol::new([40.0, 0.0], 1.0);
        assert!(s.b.re == 0.0 && s.b.im > 0.0);
        assert!(s.lambda_plus.re < 0.0);
        assert!(s.lambda_minus.re < 0.0);
    }

    #[test]
    fn green_at_zero_is_identity() {
        for (xi, eps) in [([0.3, -1.2], 0.5), ([8.0, 3.0], 1.0), ([0.0, 0.0], 0.01)] {
            let g = green_matrix(0.0, &LinearSymbol::new(xi, eps));
            assert!(g.sub(&Mat2::identity()).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_mode_is_rotation() {
        let s = LinearSymbol::new([0.0, 0.0], 0.4);
        for t in [0.2, 1.0, 2.7] {
            let g = green_matrix(t, &s);
            let expect = Mat2([
                [
                    Complex64::new(t.cos(), 0.0),
                    Complex64::new(-t.sin(), 0.0),
                ],
                [Complex64::new(t.sin(), 0.0), Complex64::new(t.cos(), 0.0)],
            ]);
            assert!(g.sub(&expect).norm() < 1e-12);
        }
    }

    #[test]
    fn semigroup_law() {
        let mut rng = crate::rng::CounterRng::new(8, 0);
        for _ in 0..400 {
            let xi = [rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)];
            let eps = rng.uniform(1e-2, 1.0);
            let s = LinearSymbol::new(xi, eps);
            let (t, u) = (rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0));
            let lhs = green_matrix(t + u, &s);
            let rhs = green_matrix(t, &s).mul(&green_matrix(u, &s));
            let scale = lhs.norm().max(1e-30);
            assert!(lhs.sub(&rhs).norm() / scale < 1e-10);
        }
    }

    #[test]
    fn diagonalization_reconstructs_a_hat() {
        let fam = CutoffFamily::new(0.3, crate::cutoffs::KAPPA0_DEFAULT).unwrap();
        let mut rng = crate::rng::CounterRng::new(21, 0);
        let r = fam.low_band_radius();
        for _ in 0..500 {
            let xi = [rng.uniform(-r, r), rng.uniform(-r, r)];
            if fam.chi_low(xi[0], xi[1]) <= 0.0 {
                continue;
            }
            let s = LinearSymbol::new(xi, fam.epsilon);
            let d = Mat2([
                [-s.lambda_minus, Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), -s.lambda_plus],
            ]);
            let rec = s.q().mul(&d).mul(&s.q_inv());
            let a = s.a_hat();
            assert!(rec.sub(&a).norm() <= 1e-10 * a.norm());
        }
    }

    #[test]
    fn half_wave_is_isometry_on_low_band() {
        let grid = crate::grid::Grid2D::new(64, 16.0).unwrap();
        let fam = CutoffFamily::new(0.05, crate::cutoffs::KAPPA0_DEFAULT).unwrap();
        let mut f = SpectralField::from_physical_fn(&grid, |x, y| {
            (-0.5 * (x * x + y * y)).exp()
        });
        f = fam.project_low(&f);
        let g = half_wave_full(&f, 2.3, fam.epsilon);
        assert!((g.l2_norm() - f.l2_norm()).abs() <= 1e-12 * f.l2_norm());
        // t = 0 with the projecting variant is just the chi^L filter
        let h = half_wave(&f, 0.0, &fam);
        assert!(h.sub(&fam.project_low(&f)).l2_norm() <= 1e-14 * f.l2_norm());
    }
}
