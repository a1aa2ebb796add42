//! Per-channel suppression factors.
//!
//! A probe whose charge component `b` passes between the target and its
//! antiparticle with probability `p_b` multiplies the difference channel `e`
//! by `1 - sum_b p_b (1 - M_be)`. Probes are unentangled, so `N` probes give
//! the product of their individual factors.

use num_complex::Complex64;

use super::{Direction, InterferometerConfig, InterferometryError, Placement, ProbeSpec};
use crate::model::{AnyonModel, Charge};

/// The probes sent through the interferometer, in order.
#[derive(Clone, Debug, PartialEq)]
pub enum ProbeSequence {
    /// The same probe state for every pass.
    Repeated(ProbeSpec),
    /// Explicit per-probe states; evolving `N` steps needs at least `N`.
    Each(Vec<ProbeSpec>),
}

impl ProbeSequence {
    pub fn probe(&self, k: usize) -> Option<&ProbeSpec> {
        match self {
            ProbeSequence::Repeated(p) => Some(p),
            ProbeSequence::Each(ps) => ps.get(k),
        }
    }

    pub(crate) fn validate(&self, model: &AnyonModel, n: usize) -> Result<(), InterferometryError> {
        match self {
            ProbeSequence::Repeated(p) => p.validate(model),
            ProbeSequence::Each(ps) => {
                if ps.len() < n {
                    return Err(InterferometryError::TooFewProbes {
                        needed: n,
                        given: ps.len(),
                    });
                }
                ps.iter().try_for_each(|p| p.validate(model))
            }
        }
    }

    /// Product of the first `n` per-probe factors of channel `e`. Repeated
    /// probes raise the single-probe factor to the `n`-th power.
    pub fn factor(
        &self,
        model: &AnyonModel,
        e: Charge,
        config: &InterferometerConfig,
        n: usize,
    ) -> Result<Complex64, InterferometryError> {
        self.validate(model, n)?;
        Ok(match self {
            ProbeSequence::Repeated(p) => {
                let kappa = probe_factor(model, e, p, config);
                kappa.powu(n as u32)
            }
            ProbeSequence::Each(ps) => channel_factor(model, e, &ps[..n], config),
        })
    }
}

/// Monodromy seen by a probe passing between the pair; the antiparticle
/// above the central region reverses the braid.
fn effective_monodromy(model: &AnyonModel, b: Charge, e: Charge, placement: Placement) -> Complex64 {
    let m = model.monodromy(b, e);
    match placement {
        Placement::Below => m,
        Placement::Above => m.conj(),
    }
}

/// Single-probe factor `1 - sum_b |between amplitude of b|^2 (1 - M_be)`.
pub fn probe_factor(model: &AnyonModel, e: Charge, probe: &ProbeSpec, config: &InterferometerConfig) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let mut kappa = one;
    for b in probe.charges() {
        let h = probe.amplitude(b, Direction::Horizontal);
        let v = probe.amplitude(b, Direction::Vertical);
        let p = config.between_amplitude(h, v).norm_sqr();
        kappa -= (one - effective_monodromy(model, b, e, config.placement)) * p;
    }
    kappa
}

/// Suppression factor of channel `e` after the given probes, one factor per
/// probe in order.
pub fn channel_factor(model: &AnyonModel, e: Charge, probes: &[ProbeSpec], config: &InterferometerConfig) -> Complex64 {
    probes
        .iter()
        .map(|p| probe_factor(model, e, p, config))
        .fold(Complex64::new(1.0, 0.0), |acc, k| acc * k)
}
