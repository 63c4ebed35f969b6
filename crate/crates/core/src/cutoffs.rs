//! Smooth radial cutoffs, the eps-scaled three-band family and
//! Littlewood-Paley blocks.
//!
//! `chi1 + chi2 + chi3 = 1` with supports `{|xi| <= 1}`, `{1/2 <= |xi| <= 3}`
//! and `{|xi| >= 5/2}`; the band family rescales the argument by
//! `sqrt(eps / kappa0)`, so the low band ends where `eps |xi|^2 ~ kappa0`.

use crate::error::{Error, Result};
use crate::grid::SpectralField;
use num_complex::Complex64;

/// Default threshold constant; fixed to 1/200 unless overridden.
pub const KAPPA0_DEFAULT: f64 = 1.0 / 200.0;

/// `exp(-1/t)` mollifier piece.
fn bump(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Smooth transition: 0 for `t <= 0`, 1 for `t >= 1`, monotone in between.
pub fn smooth_step(t: f64) -> f64 {
    let a = bump(t);
    let b = bump(1.0 - t);
    a / (a + b)
}

/// `chi1`: 1 on `|r| <= 1/2`, supported in `|r| <= 1`.
pub fn chi1(r: f64) -> f64 {
    1.0 - smooth_step(2.0 * (r.abs() - 0.5))
}

/// `chi3`: 1 on `|r| >= 3`, supported in `|r| >= 5/2`.
pub fn chi3(r: f64) -> f64 {
    smooth_step(2.0 * (r.abs() - 2.5))
}

/// `chi2 = 1 - chi1 - chi3`, supported in `1/2 <= |r| <= 3`.
pub fn chi2(r: f64) -> f64 {
    1.0 - chi1(r) - chi3(r)
}

/// Littlewood-Paley base cutoff: 1 on `B_{3/2}`, vanishing outside `B_{5/3}`.
pub fn lp_psi(r: f64) -> f64 {
    1.0 - smooth_step((r.abs() - 1.5) / (5.0 / 3.0 - 1.5))
}

/// `Phi = Psi - Psi(2 .)`, supported on the annulus `3/4 <= |r| <= 5/3`.
pub fn lp_phi(r: f64) -> f64 {
    lp_psi(r) - lp_psi(2.0 * r)
}

/// `Phi_j(r) = Phi(r / 2^j)`.
pub fn lp_phi_j(r: f64, j: i32) -> f64 {
    lp_phi(r / (2.0f64).powi(j))
}

/// The eps-scaled three-band cutoff family of a run.
#[derive(Debug, Clone, Copy)]
pub struct CutoffFamily {
    pub epsilon: f64,
    pub kappa0: f64,
}

impl CutoffFamily {
    pub fn new(epsilon: f64, kappa0: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::BadEpsilon(epsilon));
        }
        Ok(Self { epsilon, kappa0 })
    }

    /// Rescaling factor `sqrt(eps / kappa0)` applied to the frequency.
    pub fn scale(&self) -> f64 {
        (self.epsilon / self.kappa0).sqrt()
    }

    /// Outer radius of `supp chi^L` (where `chi2` support ends).
    pub fn low_band_radius(&self) -> f64 {
        3.0 / self.scale()
    }

    pub fn chi_l(&self, k1: f64, k2: f64) -> f64 {
        chi1(self.scale() * k1.hypot(k2))
    }

    pub fn chi_m(&self, k1: f64, k2: f64) -> f64 {
        chi2(self.scale() * k1.hypot(k2))
    }

    pub fn chi_h(&self, k1: f64, k2: f64) -> f64 {
        chi3(self.scale() * k1.hypot(k2))
    }

    pub fn chi_low(&self, k1: f64, k2: f64) -> f64 {
        self.chi_l(k1, k2) + self.chi_m(k1, k2)
    }

    pub fn chi_high(&self, k1: f64, k2: f64) -> f64 {
        self.chi_m(k1, k2) + self.chi_h(k1, k2)
    }

    /// Splits a field into the `(l, m, h)` bands; the three parts sum back
    /// to the field up to rounding (partition of unity on the lattice).
    pub fn band_split(&self, f: &SpectralField) -> (SpectralField, SpectralField, SpectralField) {
        let low = f.multiplier(|k1, k2| Complex64::new(self.chi_l(k1, k2), 0.0));
        let mid = f.multiplier(|k1, k2| Complex64::new(self.chi_m(k1, k2), 0.0));
        let high = f.multiplier(|k1, k2| Complex64::new(self.chi_h(k1, k2), 0.0));
        (low, mid, high)
    }

    /// `f^L = (chi^l + chi^m)(D) f`.
    pub fn project_low(&self, f: &SpectralField) -> SpectralField {
        f.multiplier(|k1, k2| Complex64::new(self.chi_low(k1, k2), 0.0))
    }

    /// `f^m = chi^m(D) f`.
    pub fn project_mid(&self, f: &SpectralField) -> SpectralField {
        f.multiplier(|k1, k2| Complex64::new(self.chi_m(k1, k2), 0.0))
    }

    /// `f^h = chi^h(D) f`.
    pub fn project_high(&self, f: &SpectralField) -> SpectralField {
        f.multiplier(|k1, k2| Complex64::new(self.chi_h(k1, k2), 0.0))
    }
}

/// Inhomogeneous dyadic block: `j = -1` is `Psi(D)`, `j >= 0` is `Phi_j(D)`.
pub fn dyadic_block(f: &SpectralField, j: i32) -> SpectralField {
    f.multiplier(|k1, k2| {
        let r = k1.hypot(k2);
        let v = if j == -1 { lp_psi(r) } else { lp_phi_j(r, j) };
        Complex64::new(v, 0.0)
    })
}

/// Smallest `J` with `Psi(xi / 2^J) = 1` on the whole lattice, so that
/// `Psi + sum_{1 <= j <= J} Phi_j = 1` there.
pub fn dyadic_top(max_freq: f64) -> i32 {
    let mut j = 1;
    while max_freq * 2.0 / (2.0f64).powi(j) > 3.0 / 2.0 {
        j += 1;
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    #[test]
    fn chi_partition_and_ranges() {
        for i in 0..2000 {
            let r = i as f64 * 0.004;
            let (a, b, c) = (chi1(r), chi2(r), chi3(r));
            assert!((a + b + c - 1.0).abs() < 1e-12);
            for v in [a, b, c] {
                assert!((-1e-15..=1.0 + 1e-15).contains(&v));
            }
        }
        // stated supports
        assert_eq!(chi1(1.0 + 1e-9), 0.0);
        assert_eq!(chi3(2.5 - 1e-9), 0.0);
        assert!(chi2(0.5 - 1e-9).abs() < 1e-300);
        assert!(chi2(3.0 + 1e-9).abs() < 1e-300);
        assert!((chi1(0.3) - 1.0).abs() < 1e-15);
        assert!((chi3(3.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn low_low_high_support_separation() {
        // chi^l(xi - eta) chi^l(eta) chi^h(xi) = 0 on random triples
        let fam = CutoffFamily::new(0.37, KAPPA0_DEFAULT).unwrap();
        let mut rng = CounterRng::new(17, 0);
        let r = 4.0 / fam.scale();
        for _ in 0..10_000 {
            let xi = [rng.uniform(-r, r), rng.uniform(-r, r)];
            let eta = [rng.uniform(-r, r), rng.uniform(-r, r)];
            let p = fam.chi_l(xi[0] - eta[0], xi[1] - eta[1])
                * fam.chi_l(eta[0], eta[1])
                * fam.chi_h(xi[0], xi[1]);
            assert_eq!(p, 0.0);
        }
    }

    #[test]
    fn dyadic_partition_of_unity() {
        let max = 40.0;
        let top = dyadic_top(max);
        for i in 0..400 {
            let r = i as f64 * 0.1;
            let mut s = lp_psi(r);
            for j in 1..=top {
                s += lp_phi_j(r, j);
            }
            assert!((s - 1.0).abs() < 1e-12, "r = {r}, sum = {s}");
        }
    }

    #[test]
    fn lp_phi_support() {
        assert_eq!(lp_phi(0.74), 0.0);
        assert_eq!(lp_phi(5.0 / 3.0 + 1e-9), 0.0);
        assert!(lp_phi(1.0) > 0.9);
    }

    #[test]
    fn band_split_reconstructs_field() {
        use crate::grid::{Grid2D, SpectralField};
        let g = Grid2D::new(64, 32.0).unwrap();
        let mut rng = CounterRng::new(23, 0);
        let phys = ndarray::Array2::from_shape_fn((64, 64), |_| {
            num_complex::Complex64::new(rng.normal(), 0.0)
        });
        let f = SpectralField::from_physical(&g, phys);
        let fam = CutoffFamily::new(0.15, KAPPA0_DEFAULT).unwrap();
        let (l, m, h) = fam.band_split(&f);
        let sum = l.add(&m).add(&h);
        assert!(sum.sub(&f).l2_norm() <= 1e-12 * f.l2_norm());
    }

    #[test]
    fn support_arithmetic_eps_one() {
        // eps = 1, kappa0 = 1/200: |xi| = 10 has sqrt(eps/kappa0) |xi| >= 5/2,
        // so the mode lies entirely in the high band
        let fam = CutoffFamily::new(1.0, KAPPA0_DEFAULT).unwrap();
        assert_eq!(fam.chi_l(10.0, 0.0), 0.0);
        assert_eq!(fam.chi_m(10.0, 0.0), 0.0);
        assert!((fam.chi_h(10.0, 0.0) - 1.0).abs() < 1e-15);
    }
}
