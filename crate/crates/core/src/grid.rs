//! Periodic-box discretisation of the plane and spectral transforms.
//!
//! The box is `[-L/2, L/2)^2` sampled on an `N x N` grid; the frequency
//! lattice is `(2 pi / L) * {-N/2, ..., N/2 - 1}^2`. Fields are stored by
//! their Fourier coefficients with the series convention
//! `f(x) = sum_k fhat(k) e^{i k.x}`, so the coefficients of a pointwise
//! product are the plain discrete convolution of the factors.

use std::fmt;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::threads::for_each_chunk;

/// Shared, immutable description of the periodic grid.
///
/// The physical coordinate of index `(i, j)` is
/// `(-L/2 + i L/N, -L/2 + j L/N)`; the first index is `x1`.
pub struct Grid2D {
    n: usize,
    length: f64,
    dealias_fraction: f64,
    threads: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid2D")
            .field("n", &self.n)
            .field("length", &self.length)
            .field("dealias_fraction", &self.dealias_fraction)
            .field("threads", &self.threads)
            .finish()
    }
}

impl Grid2D {
    pub fn new(n: usize, length: f64) -> Result<Arc<Self>> {
        Self::with_options(n, length, 2.0 / 3.0, 1)
    }

    pub fn with_options(
        n: usize,
        length: f64,
        dealias_fraction: f64,
        threads: usize,
    ) -> Result<Arc<Self>> {
        if n == 0 || n % 2 != 0 {
            return Err(Error::BadGridSize(n));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::BadBoxLength(length));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(Error::BadDealiasFraction(dealias_fraction));
        }
        let mut planner = FftPlanner::new();
        Ok(Arc::new(Self {
            n,
            length,
            dealias_fraction,
            threads: threads.max(1),
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    /// Grid spacing `L / N`.
    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Quadrature weight of one physical cell, `(L/N)^2`.
    pub fn cell_weight(&self) -> f64 {
        self.dx() * self.dx()
    }

    /// Signed lattice index of storage index `i`, in `{-N/2, ..., N/2 - 1}`.
    #[inline]
    pub fn signed_index(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Frequency of storage index `i`: `(2 pi / L) * signed_index(i)`.
    #[inline]
    pub fn freq(&self, i: usize) -> f64 {
        2.0 * std::f64::consts::PI / self.length * self.signed_index(i) as f64
    }

    /// Physical coordinate of storage index `i`: `-L/2 + i L/N`.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.dx()
    }

    /// Largest frequency magnitude representable per axis.
    pub fn max_freq(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.length * (self.n as f64 / 2.0)
    }

    /// Signed index cutoff of the dealias mask.
    fn dealias_cut(&self) -> i64 {
        (self.dealias_fraction * (self.n as f64 / 2.0)).floor() as i64
    }

    /// True when the mode survives dealiasing; the Nyquist row/column never does.
    #[inline]
    pub fn retained(&self, i: usize, j: usize) -> bool {
        let (mi, mj) = (self.signed_index(i), self.signed_index(j));
        let nyq = -(self.n as i64) / 2;
        if mi == nyq || mj == nyq {
            return false;
        }
        let c = self.dealias_cut();
        mi.abs() <= c && mj.abs() <= c
    }

    /// Unnormalised forward DFT along both axes, in place.
    fn dft2(&self, data: &mut Array2<Complex64>, forward: bool) {
        let plan = if forward { &self.fwd } else { &self.inv };
        let n = self.n;
        let pass = |buf: &mut [Complex64]| {
            let scratch_len = plan.get_inplace_scratch_len();
            for_each_chunk(buf, n, self.threads, |_, row| {
                let mut scratch = vec![Complex64::default(); scratch_len];
                plan.process_with_scratch(row, &mut scratch);
            });
        };
        pass(data.as_slice_mut().expect("standard layout"));
        let mut t = Array2::zeros((n, n));
        t.assign(&data.t());
        pass(t.as_slice_mut().expect("standard layout"));
        data.assign(&t.t());
    }
}

/// Complex Fourier coefficients of a scalar field on the truncated lattice.
#[derive(Clone)]
pub struct SpectralField {
    grid: Arc<Grid2D>,
    /// `coeff[[i, j]]` multiplies `e^{i (k_i x1 + k_j x2)}`.
    coeff: Array2<Complex64>,
}

impl fmt::Debug for SpectralField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpectralField(n = {}, l2 = {:.6e})", self.grid.n(), self.l2_norm())
    }
}

impl SpectralField {
    pub fn zero(grid: &Arc<Grid2D>) -> Self {
        Self {
            grid: grid.clone(),
            coeff: Array2::zeros((grid.n(), grid.n())),
        }
    }

    pub fn from_coefficients(grid: &Arc<Grid2D>, coeff: Array2<Complex64>) -> Self {
        assert_eq!(coeff.dim(), (grid.n(), grid.n()));
        Self { grid: grid.clone(), coeff }
    }

    /// Builds a field from physical samples `f(x1, x2)` at the grid points.
    pub fn from_physical_fn(grid: &Arc<Grid2D>, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let phys = Array2::from_shape_fn((n, n), |(i, j)| {
            Complex64::new(f(grid.coord(i), grid.coord(j)), 0.0)
        });
        Self::from_physical(grid, phys)
    }

    /// Forward transform of a physical sample array.
    pub fn from_physical(grid: &Arc<Grid2D>, mut phys: Array2<Complex64>) -> Self {
        let n = grid.n();
        assert_eq!(phys.dim(), (n, n));
        grid.dft2(&mut phys, true);
        // The centred box shows up as the exact phase (-1)^{i+j} on the
        // standard DFT, together with the 1/N^2 normalisation.
        let scale = 1.0 / (n * n) as f64;
        for ((i, j), v) in phys.indexed_iter_mut() {
            let sign = if (i + j) % 2 == 0 { scale } else { -scale };
            *v *= sign;
        }
        Self { grid: grid.clone(), coeff: phys }
    }

    /// Inverse transform to physical samples (complex; imaginary part is
    /// rounding noise for real-symmetric coefficients).
    pub fn to_physical(&self) -> Array2<Complex64> {
        let mut out = self.coeff.clone();
        for ((i, j), v) in out.indexed_iter_mut() {
            if (i + j) % 2 == 1 {
                *v = -*v;
            }
        }
        self.grid.dft2(&mut out, false);
        out
    }

    /// Real parts of the physical samples.
    pub fn to_physical_real(&self) -> Array2<f64> {
        self.to_physical().mapv(|z| z.re)
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        &self.grid
    }

    pub fn coefficients(&self) -> &Array2<Complex64> {
        &self.coeff
    }

    pub fn coefficients_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.coeff
    }

    /// Coefficient of the mean (`k = 0`) mode.
    pub fn mean(&self) -> Complex64 {
        self.coeff[[0, 0]]
    }

    /// Applies a pointwise Fourier multiplier `symbol(k1, k2)`.
    ///
    /// The caller fixes the value at `k = 0`; any non-finite value is a hard
    /// error naming the offending mode.
    pub fn apply_multiplier(&self, symbol: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let g = &self.grid;
        let mut out = self.coeff.clone();
        for ((i, j), v) in out.indexed_iter_mut() {
            let s = symbol(g.freq(i), g.freq(j));
            if !s.re.is_finite() || !s.im.is_finite() {
                return Err(Error::NonFiniteSymbol(
                    g.signed_index(i),
                    g.signed_index(j),
                    s.re,
                    s.im,
                ));
            }
            *v *= s;
        }
        Ok(Self { grid: g.clone(), coeff: out })
    }

    /// Infallible multiplier application for symbols known finite on the lattice.
    pub fn multiplier(&self, symbol: impl Fn(f64, f64) -> Complex64) -> Self {
        self.apply_multiplier(symbol).expect("finite symbol")
    }

    /// Zeroes every mode outside the dealias band (and the Nyquist modes).
    pub fn dealias(&mut self) {
        let g = self.grid.clone();
        for ((i, j), v) in self.coeff.indexed_iter_mut() {
            if !g.retained(i, j) {
                *v = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Dealiased pointwise product.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        let a = self.to_physical();
        let b = other.to_physical();
        let mut f = Self::from_physical(&self.grid, a * b);
        f.dealias();
        Ok(f)
    }

    /// Dealiased pointwise square.
    pub fn square(&self) -> Self {
        self.product(self).expect("same grid")
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid.n() == other.grid.n() {
            Ok(())
        } else {
            Err(Error::GridMismatch(self.grid.n(), other.grid.n()))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            grid: self.grid.clone(),
            coeff: &self.coeff + &other.coeff,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            grid: self.grid.clone(),
            coeff: &self.coeff - &other.coeff,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            coeff: self.coeff.mapv(|z| z * s),
        }
    }

    pub fn axpy(&mut self, s: f64, other: &Self) {
        self.coeff.zip_mut_with(&other.coeff, |a, b| *a += s * b);
    }

    /// `L^2` norm via Parseval: `L * sqrt(sum |fhat|^2)`.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.coeff.iter().map(|z| z.norm_sqr()).sum();
        self.grid.length() * s.sqrt()
    }

    /// Largest coefficient magnitude deviation from Hermitian symmetry,
    /// relative to the largest coefficient. Nyquist modes are ignored.
    pub fn real_symmetry_defect(&self) -> f64 {
        let n = self.grid.n();
        let nyq = n / 2;
        let mut max = 0.0f64;
        let mut defect = 0.0f64;
        for ((i, j), v) in self.coeff.indexed_iter() {
            max = max.max(v.norm());
            if i == nyq || j == nyq {
                continue;
            }
            let (ni, nj) = ((n - i) % n, (n - j) % n);
            let d = (v - self.coeff[[ni, nj]].conj()).norm();
            defect = defect.max(d);
        }
        if max == 0.0 {
            0.0
        } else {
            defect / max
        }
    }

    /// Hard error when any physical sample is non-finite.
    pub fn check_finite(&self) -> Result<()> {
        for ((i, j), v) in self.coeff.indexed_iter() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteField(i, j));
            }
        }
        Ok(())
    }

    // ----- standard multipliers -----

    /// `|grad| f` (symbol `|k|`).
    pub fn modulus(&self) -> Self {
        self.multiplier(|k1, k2| Complex64::new(k1.hypot(k2), 0.0))
    }

    /// `|grad|^s f`; the zero mode is set to 0 (for `s < 0` this is the
    /// mean-zero gauge of the inverse).
    pub fn modulus_pow(&self, s: f64) -> Self {
        self.multiplier(|k1, k2| {
            let m = k1.hypot(k2);
            if m == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(m.powf(s), 0.0)
            }
        })
    }

    /// Bessel potential `<grad>^s f` (symbol `(1 + |k|^2)^{s/2}`).
    pub fn bessel(&self, s: f64) -> Self {
        self.multiplier(|k1, k2| Complex64::new((1.0 + k1 * k1 + k2 * k2).powf(s * 0.5), 0.0))
    }

    /// Partial derivative along `axis` (0 or 1).
    pub fn derivative(&self, axis: usize) -> Self {
        self.multiplier(|k1, k2| Complex64::new(0.0, if axis == 0 { k1 } else { k2 }))
    }

    /// Mixed derivative `d^{a1}_{x1} d^{a2}_{x2} f`.
    pub fn derivative_multi(&self, a1: u32, a2: u32) -> Self {
        self.multiplier(|k1, k2| {
            (Complex64::new(0.0, k1)).powu(a1) * (Complex64::new(0.0, k2)).powu(a2)
        })
    }

    /// Laplacian (symbol `-|k|^2`).
    pub fn laplacian(&self) -> Self {
        self.multiplier(|k1, k2| Complex64::new(-(k1 * k1 + k2 * k2), 0.0))
    }

    /// Riesz component `R_axis f` (symbol `i k_axis / |k|`, 0 at the origin).
    pub fn riesz(&self, axis: usize) -> Self {
        self.multiplier(|k1, k2| {
            let m = k1.hypot(k2);
            if m == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, if axis == 0 { k1 } else { k2 } / m)
            }
        })
    }

    pub fn gradient(&self) -> VectorField {
        VectorField {
            x1: self.derivative(0),
            x2: self.derivative(1),
        }
    }

    /// Vector Riesz transform `R f = (grad / |grad|) f`.
    pub fn riesz_vec(&self) -> VectorField {
        VectorField {
            x1: self.riesz(0),
            x2: self.riesz(1),
        }
    }
}

/// Solves `Laplace phi = rho` with the gauge `phihat(0) = 0`.
pub fn poisson_solve(rho: &SpectralField) -> SpectralField {
    rho.multiplier(|k1, k2| {
        let m2 = k1 * k1 + k2 * k2;
        if m2 == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(-1.0 / m2, 0.0)
        }
    })
}

/// Two-component vector field on the shared grid.
#[derive(Clone, Debug)]
pub struct VectorField {
    pub x1: SpectralField,
    pub x2: SpectralField,
}

impl VectorField {
    pub fn zero(grid: &Arc<Grid2D>) -> Self {
        Self {
            x1: SpectralField::zero(grid),
            x2: SpectralField::zero(grid),
        }
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        self.x1.grid()
    }

    pub fn divergence(&self) -> SpectralField {
        self.x1.derivative(0).add(&self.x2.derivative(1))
    }

    /// Scalar curl `d1 u2 - d2 u1`.
    pub fn curl(&self) -> SpectralField {
        self.x2.derivative(0).sub(&self.x1.derivative(1))
    }

    /// `R . u = (div / |grad|) u`, 0 at the origin.
    pub fn riesz_div(&self) -> SpectralField {
        self.x1.riesz(0).add(&self.x2.riesz(1))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            x1: self.x1.add(&other.x1),
            x2: self.x2.add(&other.x2),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            x1: self.x1.sub(&other.x1),
            x2: self.x2.sub(&other.x2),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            x1: self.x1.scale(s),
            x2: self.x2.scale(s),
        }
    }

    pub fn axpy(&mut self, s: f64, other: &Self) {
        self.x1.axpy(s, &other.x1);
        self.x2.axpy(s, &other.x2);
    }

    pub fn multiplier(&self, symbol: impl Fn(f64, f64) -> Complex64 + Copy) -> Self {
        Self {
            x1: self.x1.multiplier(symbol),
            x2: self.x2.multiplier(symbol),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.x1.l2_norm().hypot(self.x2.l2_norm())
    }

    pub fn dealias(&mut self) {
        self.x1.dealias();
        self.x2.dealias();
    }
}

/// Leray decomposition `u = rotational + potential` with `div rot = 0`,
/// `curl pot = 0`; the zero mode is assigned to the potential part.
pub fn leray_split(u: &VectorField) -> (VectorField, VectorField) {
    let g = u.grid().clone();
    let n = g.n();
    let mut p1 = Array2::zeros((n, n));
    let mut p2 = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let (k1, k2) = (g.freq(i), g.freq(j));
            let m2 = k1 * k1 + k2 * k2;
            let (a, b) = (u.x1.coefficients()[[i, j]], u.x2.coefficients()[[i, j]]);
            if m2 == 0.0 {
                p1[[i, j]] = a;
                p2[[i, j]] = b;
            } else {
                let kdotu = (k1 * a + k2 * b) / m2;
                p1[[i, j]] = k1 * kdotu;
                p2[[i, j]] = k2 * kdotu;
            }
        }
    }
    let potential = VectorField {
        x1: SpectralField::from_coefficients(&g, p1),
        x2: SpectralField::from_coefficients(&g, p2),
    };
    let rotational = u.sub(&potential);
    (rotational, potential)
}
