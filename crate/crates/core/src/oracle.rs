//! Independent recomputation of the closed-form results.
//!
//! The closed forms collapse each probe to a single factor per difference
//! channel. Here every probe history is enumerated explicitly: each probe
//! picks a charge component and a path after the first beam splitter, the
//! history is weighted by its probability and by the monodromy picked up on
//! every pass between the target and its antiparticle, and the weights are
//! summed.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::interferometry::{
    decompose_initial, evolve, BeamSplitter, Direction, InterferometerConfig, InterferometryError, PairBasisMatrix,
    Placement, ProbeSequence, ProbeSpec, TargetState,
};
use crate::model::{AnyonModel, Charge};

pub const MAX_BINOMIAL_N: usize = 30;
pub const MAX_ENUMERATION_N: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("oracle supports at most {max} probes, got {n}")]
    TooManyProbes { n: usize, max: usize },
    #[error(transparent)]
    Interferometry(#[from] InterferometryError),
}

fn check_n(n: usize, max: usize) -> Result<(), OracleError> {
    if n > max {
        Err(OracleError::TooManyProbes { n, max })
    } else {
        Ok(())
    }
}

/// Channel factor of `n` identical probes of definite charge `b`, entering
/// horizontally, summed as a binomial over the number of passes between.
pub fn binomial_channel_factor(
    model: &AnyonModel,
    e: Charge,
    b: Charge,
    splitter: &BeamSplitter,
    n: usize,
) -> Result<Complex64, OracleError> {
    check_n(n, MAX_BINOMIAL_N)?;
    let p_between = splitter.t().norm_sqr();
    let p_around = splitter.r().norm_sqr();
    let m = model.monodromy(b, e);
    let mut total = Complex64::default();
    let mut binom = 1.0f64;
    for k in 0..=n {
        let term = m.powu(k as u32) * (p_between.powi(k as i32) * p_around.powi((n - k) as i32));
        total += term * binom;
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    Ok(total)
}

/// One probe's histories: probability and accumulated phase for each
/// `(charge, path)` pair with nonzero amplitude.
fn probe_histories(
    model: &AnyonModel,
    e: Charge,
    probe: &ProbeSpec,
    splitter: &BeamSplitter,
    placement: Placement,
) -> Vec<(f64, Complex64)> {
    let (t, r) = (splitter.t(), splitter.r());
    // rows: lower output, upper output; columns: horizontal, vertical input
    let t1 = [[t, r.conj()], [r, -t.conj()]];
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::new();
    for b in probe.charges() {
        let input = [
            probe.amplitude(b, Direction::Horizontal),
            probe.amplitude(b, Direction::Vertical),
        ];
        for (row, path) in t1.iter().enumerate() {
            let amp = path[0] * input[0] + path[1] * input[1];
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let between = matches!((row, placement), (0, Placement::Below) | (1, Placement::Above));
            let phase = if !between {
                one
            } else {
                let s = model.s_matrix();
                let (i, j, v) = (b.index(), e.index(), model.vacuum().index());
                let m = s[(i, j)] * s[(v, v)] / (s[(v, i)] * s[(v, j)]);
                match placement {
                    Placement::Below => m,
                    Placement::Above => m.conj(),
                }
            };
            out.push((p, phase));
        }
    }
    out
}

/// Channel factor of the first `n` probes obtained by summing over every
/// joint history of charges and paths.
pub fn path_enumeration_factor(
    model: &AnyonModel,
    e: Charge,
    probes: &[ProbeSpec],
    splitter: &BeamSplitter,
    placement: Placement,
    n: usize,
) -> Result<Complex64, OracleError> {
    check_n(n, MAX_ENUMERATION_N)?;
    if probes.len() < n {
        return Err(InterferometryError::TooFewProbes {
            needed: n,
            given: probes.len(),
        }
        .into());
    }
    let per_probe: Vec<_> = probes[..n]
        .iter()
        .map(|p| probe_histories(model, e, p, splitter, placement))
        .collect();

    fn walk(levels: &[Vec<(f64, Complex64)>], weight: f64, phase: Complex64, acc: &mut Complex64) {
        match levels.split_first() {
            None => *acc += phase * weight,
            Some((first, rest)) => {
                for &(p, ph) in first {
                    walk(rest, weight * p, phase * ph, acc);
                }
            }
        }
    }
    let mut total = Complex64::default();
    walk(&per_probe, 1.0, Complex64::new(1.0, 0.0), &mut total);
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockWeight {
    pub charge: String,
    pub weight: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub hermiticity_deviation: f64,
    pub trace_re: f64,
    pub trace_im: f64,
    pub min_eigenvalue: f64,
    pub block_weights: Vec<BlockWeight>,
}

impl DensityReport {
    pub fn trace_deviation(&self) -> f64 {
        Complex64::new(self.trace_re - 1.0, self.trace_im).norm()
    }

    /// Hermitian, unit trace and positive semidefinite, each within `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.hermiticity_deviation <= tol && self.trace_deviation() <= tol && self.min_eigenvalue >= -tol
    }

    /// Largest distance between the block weights and `|A_a|^2`.
    pub fn populations_deviation(&self, target: &TargetState<'_>) -> f64 {
        let model = target.model();
        self.block_weights
            .iter()
            .map(|w| {
                let a = model.charge(&w.charge).expect("report charges come from the model");
                (w.weight - target.amplitude(a).norm_sqr()).abs()
            })
            .fold(0.0, f64::max)
    }
}

pub fn check_density_matrix(rho: &PairBasisMatrix<'_>) -> DensityReport {
    let model = rho.model();
    let mut charges: Vec<Charge> = rho.basis().iter().map(|s| s.a).collect();
    charges.dedup();
    let trace = rho.trace();
    DensityReport {
        hermiticity_deviation: rho.hermiticity_deviation(),
        trace_re: trace.re,
        trace_im: trace.im,
        min_eigenvalue: rho.min_eigenvalue(),
        block_weights: charges
            .into_iter()
            .map(|a| BlockWeight {
                charge: model.name_of(a).to_string(),
                weight: rho.block_weight(a).re,
            })
            .collect(),
    }
}

/// A finite-`N` run to be recomputed by the oracle.
#[derive(Clone, Debug)]
pub struct Scenario<'m> {
    pub target: TargetState<'m>,
    pub probes: Vec<ProbeSpec>,
    pub config: InterferometerConfig,
    pub n: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorComparison {
    pub e: String,
    pub closed_form: Complex64,
    pub oracle: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub n: usize,
    pub factors: Vec<FactorComparison>,
    /// Largest entrywise distance between the two density matrices.
    pub max_deviation: f64,
}

impl ComparisonReport {
    pub fn max_factor_deviation(&self) -> f64 {
        self.factors
            .iter()
            .map(|f| (f.closed_form - f.oracle).norm())
            .fold(0.0, f64::max)
    }
}

pub fn closed_form_vs_oracle(scenario: &Scenario<'_>) -> Result<ComparisonReport, OracleError> {
    let Scenario {
        target,
        probes,
        config,
        n,
    } = scenario;
    let n = *n;
    check_n(n, MAX_ENUMERATION_N)?;
    let model = target.model();
    let sequence = ProbeSequence::Each(probes.clone());
    let closed = evolve(target, &sequence, config, n)?;

    let dcm = decompose_initial(target)?;
    let mut factors = Vec::new();
    for e in dcm.difference_charges() {
        factors.push(FactorComparison {
            e: model.name_of(e).to_string(),
            closed_form: sequence.factor(model, e, config, n)?,
            oracle: path_enumeration_factor(model, e, probes, &config.t1, config.placement, n)?,
        });
    }
    let oracle = dcm.recompose(|e| {
        factors
            .iter()
            .find(|f| f.e == model.name_of(e))
            .map(|f| f.oracle)
            .expect("factor computed for every difference charge")
    });
    Ok(ComparisonReport {
        n,
        max_deviation: closed.max_abs_diff(&oracle),
        factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin_model;

    #[test]
    fn binomial_sum_matches_power() {
        let m = builtin_model("fibonacci").unwrap();
        let eps = m.charge("eps").unwrap();
        let bs = BeamSplitter::with_transmission_probability(0.3).unwrap();
        for n in [0, 1, 5, 30] {
            let x = binomial_channel_factor(&m, eps, eps, &bs, n).unwrap();
            let y = (bs.r().norm_sqr() + bs.t().norm_sqr() * m.monodromy(eps, eps)).powu(n as u32);
            assert!((x - y).norm() < 1e-13, "{n}");
        }
        assert!(binomial_channel_factor(&m, eps, eps, &bs, 31).is_err());
    }

    #[test]
    fn ising_sigma_sigma_keeps_only_around_paths() {
        let m = builtin_model("ising").unwrap();
        let sigma = m.charge("sigma").unwrap();
        let x = binomial_channel_factor(&m, sigma, sigma, &BeamSplitter::balanced(), 4).unwrap();
        assert!((x - 0.0625).norm() < 1e-15);
        let one = binomial_channel_factor(&m, m.vacuum(), sigma, &BeamSplitter::balanced(), 17).unwrap();
        assert!((one - 1.0).norm() < 1e-14);
    }

    #[test]
    fn heterogeneous_probes_multiply_brackets() {
        let m = builtin_model("ising").unwrap();
        let (sigma, psi) = (m.charge("sigma").unwrap(), m.charge("psi").unwrap());
        let bs = BeamSplitter::with_transmission_probability(0.3).unwrap();
        let probes = [ProbeSpec::definite(sigma), ProbeSpec::definite(psi)];
        let x = path_enumeration_factor(&m, sigma, &probes, &bs, Placement::Below, 2).unwrap();
        // M = 0 for the sigma probe, M = -1 for the psi probe
        let expected = 0.7 * (0.7 - 0.3);
        assert!((x - expected).norm() < 1e-15);
        let cfg = InterferometerConfig::new(bs);
        let closed = crate::interferometry::channel_factor(&m, sigma, &probes, &cfg);
        assert!((x - closed).norm() < 1e-15);
    }

    #[test]
    fn non_hermitian_input_is_reported() {
        let m = builtin_model("semion").unwrap();
        let rho = evolve(
            &TargetState::definite(&m, m.vacuum()),
            &ProbeSequence::Each(vec![]),
            &InterferometerConfig::new(BeamSplitter::balanced()),
            0,
        )
        .unwrap();
        let mut matrix = rho.matrix().clone();
        assert_eq!(matrix.nrows(), 1);
        matrix[(0, 0)] = Complex64::new(1.0, 0.25);
        let broken = PairBasisMatrix::from_parts(&m, rho.basis().to_vec(), matrix);
        let report = check_density_matrix(&broken);
        assert!(report.hermiticity_deviation > 0.4);
        assert!(!report.is_physical(1e-9));
    }

    #[test]
    fn enumeration_limits() {
        let m = builtin_model("semion").unwrap();
        let s = m.charge("s").unwrap();
        let bs = BeamSplitter::balanced();
        let probes = vec![ProbeSpec::definite(s); 13];
        assert!(matches!(
            path_enumeration_factor(&m, s, &probes, &bs, Placement::Below, 13),
            Err(OracleError::TooManyProbes { n: 13, max: 12 })
        ));
        let x = path_enumeration_factor(&m, s, &probes, &bs, Placement::Below, 12).unwrap();
        // M_ss = -1 for semions, so each probe gives 1/2 - 1/2 = 0
        assert!(x.norm() < 1e-15);
        assert!(path_enumeration_factor(&m, s, &probes[..2], &bs, Placement::Below, 3).is_err());
    }

    #[test]
    fn zero_probes_compare_exactly() {
        let m = builtin_model("ising").unwrap();
        let amps: Vec<_> = m
            .charges()
            .map(|q| (q, Complex64::new(1.0, q.index() as f64)))
            .collect();
        let scenario = Scenario {
            target: TargetState::normalized(&m, amps).unwrap(),
            probes: vec![],
            config: InterferometerConfig::new(BeamSplitter::balanced()),
            n: 0,
        };
        let report = closed_form_vs_oracle(&scenario).unwrap();
        assert_eq!(report.max_deviation, 0.0);
    }

    #[test]
    fn density_report_of_pure_state() {
        let m = builtin_model("fibonacci").unwrap();
        let eps = m.charge("eps").unwrap();
        let t = TargetState::new(
            &m,
            [(m.vacuum(), Complex64::new(0.6, 0.0)), (eps, Complex64::new(0.0, 0.8))],
        )
        .unwrap();
        let cfg = InterferometerConfig::new(BeamSplitter::balanced());
        let rho = evolve(&t, &ProbeSequence::Repeated(ProbeSpec::definite(eps)), &cfg, 3).unwrap();
        let report = check_density_matrix(&rho);
        assert!(report.is_physical(1e-12));
        assert!(report.populations_deviation(&t) < 1e-14);
        let names: Vec<_> = report.block_weights.iter().map(|w| w.charge.as_str()).collect();
        assert_eq!(names, ["1", "eps"]);
    }
}
