//! Exact desk-scale simulation of quantum period finding for the irrational
//! period S = N·R.
//!
//! The quantum state after measuring the second register is an indicator of
//! a preimage set P_v ⊂ [0, q), so the Fourier output distribution is the
//! DFT of that indicator. [`build_run`] groups every m in [0, q) by the value
//! of h̃_N, [`decode_two_samples`] turns two measured j's into candidates for
//! S, and [`qsolve`] drives the whole pipeline and validates candidates with
//! the distance machinery.
//!
//! The reference regulator from the full cycle walk is used only to size
//! runs in the instrumented entry points and to score trials; the decoder
//! never sees it.

mod decode;
mod htilde;
mod run;
mod solve;

use thiserror::Error;

use crate::cycle::CycleError;
use crate::navigator::NavError;
use crate::numerics::NumericsError;

pub use decode::{decode_two_samples, lemma_holds, rounding_sound};
pub use htilde::{audit_weak_periodicity, weak_periodicity_fraction, DiscretizedH, HTildeValue, WeakAudit};
pub use run::{build_run, build_run_from_values, good_js, min_q_exponent, GoodJ, QRun, MAX_Q_EXPONENT};
pub use solve::{count_reduced_forms, default_grid, qsolve, regulator_upper_bound, QSolveConfig, QSolveReport, TrialStats};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("⌊N·gap⌋ at k = {k} stays ambiguous after refining precision")]
    UnresolvedFloor { k: u64 },
    #[error("q = 2^{exp} is below 3S² = {need}")]
    QTooSmall { exp: u32, need: f64 },
    #[error("q = 2^{0} exceeds the memory guard 2^24")]
    MemoryGuard(u32),
    #[error("sample c = 0 carries no period information; retry")]
    ZeroSample,
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("no trial out of {} recovered a regulator", .0.trials)]
    TrialsExhausted(TrialStats),
    #[error(transparent)]
    Nav(#[from] NavError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
