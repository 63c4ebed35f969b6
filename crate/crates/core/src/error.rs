use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size must be a positive even integer, got {0}")]
    BadGridSize(usize),

    #[error("box length must be positive, got {0}")]
    BadBoxLength(f64),

    #[error("dealias fraction must lie in (0, 1], got {0}")]
    BadDealiasFraction(f64),

    #[error("non-finite multiplier symbol at lattice mode ({0}, {1}) = ({2}, {3})")]
    NonFiniteSymbol(i64, i64, f64, f64),

    #[error("field is non-finite at physical index ({0}, {1})")]
    NonFiniteField(usize, usize),

    #[error("fields live on different grids (n = {0} vs n = {1})")]
    GridMismatch(usize, usize),

    #[error("epsilon must lie in (0, 1], got {0}")]
    BadEpsilon(f64),

    #[error("vacuum guard violated: min(1 + rho) = {0} < {1} at t = {2}")]
    VacuumGuard(f64, f64, f64),

    #[error("density floor violated in perturbation system: min(rho + n) = {0} < {1} at t = {2}")]
    DensityFloor(f64, f64, f64),

    #[error("CFL violation could not be resolved after {0} halvings (dt = {1}, max |u| = {2})")]
    CflExhausted(usize, f64, f64),

    #[error("decay fit needs at least {min} samples in window, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("decay fit window requires positive values, got {0}")]
    NonPositiveSample(f64),

    #[error("cutoff scale R = {0} exceeds the box (support radius {1} > L/2 = {2})")]
    WeightExceedsBox(f64, f64, f64),

    #[error("bilinear operator refused: n = {0} exceeds cap {1} (about {2:.1e} terms)")]
    BilinearTooLarge(usize, usize, f64),

    #[error("s-matrix precondition violated: eps |x|^2 = {0} > {1}")]
    SMatrixSupport(f64, f64),

    #[error("symmetrised variables require mean-zero density, got mean {0:e}")]
    NonZeroMean(f64),

    #[error("initial-data calibration failed: target {target}, measured {measured}")]
    Calibration { target: f64, measured: f64 },

    #[error("worker aborted numerically: {0}")]
    WorkerNumerical(String),

    #[error("{0}")]
    Config(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("bad snapshot: {0}")]
    Snapshot(String),
}

pub type Result<T> = std::result::Result<T, Error>;
