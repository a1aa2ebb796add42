use num_complex::Complex64;
use serde::Serialize;

use super::{
    decompose_initial, factor::probe_factor, BeamSplitter, InterferometerConfig, InterferometryError, PairBasisMatrix,
    ProbeSequence, ProbeSpec, TargetState,
};
use crate::model::{Charge, DEFAULT_TOLERANCE};

/// Reduced density matrix of the target pair after `n` probes, with the
/// detector outcomes averaged over.
///
/// Only the first beam splitter and the antiparticle placement enter; the
/// second splitter and both path phases drop out of the reduced state.
pub fn evolve<'m>(
    target: &TargetState<'m>,
    probes: &ProbeSequence,
    config: &InterferometerConfig,
    n: usize,
) -> Result<PairBasisMatrix<'m>, InterferometryError> {
    let model = target.model();
    probes.validate(model, n)?;
    let dcm = decompose_initial(target)?;
    let mut failure = None;
    let rho = dcm.recompose(|e| {
        probes.factor(model, e, config, n).unwrap_or_else(|err| {
            failure = Some(err);
            Complex64::default()
        })
    });
    match failure {
        Some(err) => Err(err),
        None => Ok(rho),
    }
}

/// `n` stray anyons of the given state crossing between the target and its
/// antiparticle with certainty.
pub fn stray_anyon_pass<'m>(
    target: &TargetState<'m>,
    probe: &ProbeSpec,
    passes: usize,
) -> Result<PairBasisMatrix<'m>, InterferometryError> {
    let config = InterferometerConfig::new(stray_splitter());
    evolve(target, &ProbeSequence::Repeated(probe.clone()), &config, passes)
}

/// Fully transmitting first splitter: every probe passes between.
pub fn stray_splitter() -> BeamSplitter {
    BeamSplitter::with_transmission_probability(1.0).expect("unit transmission is lossless")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelLimit {
    /// Factor equals one; the channel survives unchanged.
    Retained,
    /// `|factor| < 1`; the channel vanishes exponentially.
    Decays,
    /// `|factor| = 1` but `factor != 1`: the channel oscillates forever and
    /// has no limit. The returned matrix holds its long-run average, zero.
    NonConvergent,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChannelConvergence {
    pub a: Charge,
    pub a_prime: Charge,
    pub e: Charge,
    pub factor: Complex64,
    pub limit: ChannelLimit,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConvergenceReport {
    pub channels: Vec<ChannelConvergence>,
}

impl ConvergenceReport {
    pub fn converged(&self) -> bool {
        self.channels.iter().all(|c| c.limit != ChannelLimit::NonConvergent)
    }

    pub fn non_convergent(&self) -> impl Iterator<Item = &ChannelConvergence> {
        self.channels.iter().filter(|c| c.limit == ChannelLimit::NonConvergent)
    }
}

pub fn classify_factor(factor: Complex64, tol: f64) -> ChannelLimit {
    if (factor - 1.0).norm() <= tol {
        ChannelLimit::Retained
    } else if factor.norm() < 1.0 - tol {
        ChannelLimit::Decays
    } else {
        ChannelLimit::NonConvergent
    }
}

/// Limit of [`evolve`] as the number of identical probes grows without bound.
pub fn asymptotic<'m>(
    target: &TargetState<'m>,
    probe: &ProbeSpec,
    config: &InterferometerConfig,
) -> Result<(PairBasisMatrix<'m>, ConvergenceReport), InterferometryError> {
    asymptotic_with_tolerance(target, probe, config, DEFAULT_TOLERANCE)
}

pub fn asymptotic_with_tolerance<'m>(
    target: &TargetState<'m>,
    probe: &ProbeSpec,
    config: &InterferometerConfig,
    tol: f64,
) -> Result<(PairBasisMatrix<'m>, ConvergenceReport), InterferometryError> {
    let model = target.model();
    probe.validate(model)?;
    let dcm = decompose_initial(target)?;
    let kappa = |e: Charge| probe_factor(model, e, probe, config);
    let report = ConvergenceReport {
        channels: dcm
            .channels()
            .into_iter()
            .map(|(a, a_prime, e)| {
                let factor = kappa(e);
                ChannelConvergence {
                    a,
                    a_prime,
                    e,
                    factor,
                    limit: classify_factor(factor, tol),
                }
            })
            .collect(),
    };
    let rho = dcm.recompose(|e| match classify_factor(kappa(e), tol) {
        ChannelLimit::Retained => Complex64::new(1.0, 0.0),
        ChannelLimit::Decays | ChannelLimit::NonConvergent => Complex64::default(),
    });
    Ok((rho, report))
}
