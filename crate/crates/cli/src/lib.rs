//! Library surface of the `nsp2d` command-line tool: configuration,
//! scenario orchestration and the verification drivers. The binary in
//! `main.rs` is a thin dispatcher over these functions.

pub mod commands;
pub mod config;
pub mod verify;

use nsp2d_core::Error;

/// Exit code policy: 0 success, 1 validation failure, 2 numerical abort.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::VacuumGuard(..)
        | Error::DensityFloor(..)
        | Error::CflExhausted(..)
        | Error::NonFiniteField(..)
        | Error::NonFiniteSymbol(..)
        | Error::Calibration { .. }
        | Error::WorkerNumerical(..) => 2,
        _ => 1,
    }
}

/// Intra-run thread cap from `NSP2D_THREADS` (default 1).
pub fn threads_from_env() -> usize {
    std::env::var("NSP2D_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}
