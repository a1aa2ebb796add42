//! Anyon model data and the decoherence of anyonic charge superpositions
//! under Mach-Zehnder interferometric probing.
//!
//! * [`model`]: fusion rules, F/R/S data, monodromy, verification.
//! * [`interferometry`]: target and probe states, beam splitters, and the
//!   closed-form evolution of the target pair's density matrix.
//! * [`oracle`]: brute-force recomputation of the closed forms and density
//!   matrix property checks.

pub mod interferometry;
pub mod model;
pub mod oracle;
