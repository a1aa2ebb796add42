//! Mach-Zehnder probing of a target anyon pair and the resulting decoherence
//! of its charge superposition.

mod channels;
mod density;
mod evolve;
mod factor;
mod state;

use thiserror::Error;

use crate::model::Charge;

pub use channels::{decompose_initial, ChannelKey, DifferenceChannelMatrix};
pub use density::{PairBasisMatrix, PairState};
pub use evolve::{
    asymptotic, asymptotic_with_tolerance, classify_factor, evolve, stray_anyon_pass, stray_splitter,
    ChannelConvergence, ChannelLimit, ConvergenceReport,
};
pub use factor::{channel_factor, probe_factor, ProbeSequence};
pub use state::{BeamSplitter, Direction, InterferometerConfig, Placement, ProbeSpec, TargetState};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterferometryError {
    #[error("{what} amplitudes are not normalized (sum of |amplitude|^2 = {norm})")]
    NotNormalized { what: &'static str, norm: f64 },
    #[error("beam splitter is not lossless (|t|^2 + |r|^2 = {total})")]
    Lossy { total: f64 },
    #[error("charge {0} is not part of the model")]
    InvalidCharge(Charge),
    #[error("missing or singular F-move block for target charges ({a}, {a_prime})")]
    MissingFBlock { a: String, a_prime: String },
    #[error("{needed} probes requested but only {given} given")]
    TooFewProbes { needed: usize, given: usize },
}
