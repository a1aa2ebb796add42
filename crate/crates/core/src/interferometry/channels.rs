//! Expansion of the target pair density matrix in difference channels.
//!
//! Each coherence `|a, abar; 1><a', abar'; 1|` is rewritten with the inverse
//! pair F-move as a sum over charges `e` that fuse with `a'` to give `a`.
//! Probes act diagonally in `e`, so evolution is a per-channel rescaling
//! followed by the forward F-move back to overall pair charges `f`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{InterferometryError, PairBasisMatrix, TargetState};
use crate::model::{AnyonModel, Charge, FBlock};

/// Label of one difference-channel coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelKey {
    pub a: Charge,
    pub a_prime: Charge,
    pub e: Charge,
    pub alpha: usize,
    pub beta: usize,
}

/// Inverse-F entries below this magnitude are treated as structural zeros.
const STRUCTURAL_ZERO: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct DifferenceChannelMatrix<'m> {
    model: &'m AnyonModel,
    support: Vec<Charge>,
    entries: BTreeMap<ChannelKey, Complex64>,
    moves: BTreeMap<(Charge, Charge), FBlock>,
}

/// Decompose the initial pure state of the target into difference channels:
/// `A_a A*_a' / sqrt(d_a d_a') [(F^{a abar}_{a' abar'})^{-1}]_{1,(e,alpha,beta)}`.
pub fn decompose_initial<'m>(target: &TargetState<'m>) -> Result<DifferenceChannelMatrix<'m>, InterferometryError> {
    let model = target.model();
    let one = model.vacuum();
    let support: Vec<(Charge, Complex64)> = target.support().collect();
    let mut entries = BTreeMap::new();
    let mut moves = BTreeMap::new();
    for &(a, amp_a) in &support {
        for &(ap, amp_ap) in &support {
            let missing = || InterferometryError::MissingFBlock {
                a: model.name_of(a).to_string(),
                a_prime: model.name_of(ap).to_string(),
            };
            let block = model.pair_f_move(a, ap);
            if block.rows.is_empty() || !block.is_square() {
                return Err(missing());
            }
            let inverse = block.matrix.clone().try_inverse().ok_or_else(missing)?;
            let vac_col = block
                .cols
                .iter()
                .position(|c| c.charge == one && c.first == 0 && c.second == 0)
                .ok_or_else(missing)?;
            let prefactor = amp_a * amp_ap.conj() / (model.qdim(a) * model.qdim(ap)).sqrt();
            for (i, row) in block.rows.iter().enumerate() {
                let g = inverse[(vac_col, i)];
                if g.norm() < STRUCTURAL_ZERO {
                    continue;
                }
                let key = ChannelKey {
                    a,
                    a_prime: ap,
                    e: row.charge,
                    alpha: row.first,
                    beta: row.second,
                };
                entries.insert(key, prefactor * g);
            }
            moves.insert((a, ap), block);
        }
    }
    Ok(DifferenceChannelMatrix {
        model,
        support: support.into_iter().map(|(c, _)| c).collect(),
        entries,
        moves,
    })
}

impl<'m> DifferenceChannelMatrix<'m> {
    pub fn model(&self) -> &'m AnyonModel {
        self.model
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ChannelKey, &Complex64)> {
        self.entries.iter()
    }

    pub fn coefficient(&self, key: &ChannelKey) -> Complex64 {
        self.entries.get(key).copied().unwrap_or_default()
    }

    /// Distinct difference charges present in any block, ascending.
    pub fn difference_charges(&self) -> Vec<Charge> {
        let mut es: Vec<Charge> = self.entries.keys().map(|k| k.e).collect();
        es.sort();
        es.dedup();
        es
    }

    /// Distinct `(a, a', e)` triples, ascending.
    pub fn channels(&self) -> Vec<(Charge, Charge, Charge)> {
        let mut out: Vec<_> = self.entries.keys().map(|k| (k.a, k.a_prime, k.e)).collect();
        out.dedup();
        out
    }

    /// Contribution of each difference charge to the ordinary trace of the
    /// recomposed matrix (with every channel factor set to one).
    pub fn trace_contributions(&self) -> BTreeMap<Charge, Complex64> {
        let mut out = BTreeMap::new();
        for (key, &coeff) in &self.entries {
            if key.a != key.a_prime {
                continue;
            }
            let block = &self.moves[&(key.a, key.a)];
            let row = block
                .rows
                .iter()
                .position(|r| r.charge == key.e && r.first == key.alpha && r.second == key.beta)
                .expect("channel rows come from the same block");
            let mut t = Complex64::default();
            for (j, col) in block.cols.iter().enumerate() {
                if col.first == col.second {
                    t += block.matrix[(row, j)] * self.pair_weight(key.a, key.a, col.charge);
                }
            }
            *out.entry(key.e).or_default() += coeff * t;
        }
        out
    }

    /// `sqrt(d_a d_a' d_f)`: diagrammatic normalization of the pair states
    /// together with the ordinary-trace weighting of sector `f`.
    fn pair_weight(&self, a: Charge, ap: Charge, f: Charge) -> f64 {
        let m = self.model;
        (m.qdim(a) * m.qdim(ap) * m.qdim(f)).sqrt()
    }

    /// Scale every channel by `factor(e)` and apply the forward F-move,
    /// producing the pair-basis density matrix.
    pub fn recompose(&self, mut factor: impl FnMut(Charge) -> Complex64) -> PairBasisMatrix<'m> {
        let factors: BTreeMap<Charge, Complex64> =
            self.difference_charges().into_iter().map(|e| (e, factor(e))).collect();
        let mut rho = PairBasisMatrix::zeros(self.model, &self.support);
        for (&(a, ap), block) in &self.moves {
            for (j, col) in block.cols.iter().enumerate() {
                let mut z = Complex64::default();
                for (i, row) in block.rows.iter().enumerate() {
                    let key = ChannelKey {
                        a,
                        a_prime: ap,
                        e: row.charge,
                        alpha: row.first,
                        beta: row.second,
                    };
                    if let Some(&c) = self.entries.get(&key) {
                        z += c * factors[&row.charge] * block.matrix[(i, j)];
                    }
                }
                z *= self.pair_weight(a, ap, col.charge);
                rho.set(a, ap, col.charge, col.first, col.second, z);
            }
        }
        rho
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin_model;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn ising_sigma_block_splits_over_one_and_psi() {
        let m = builtin_model("ising").unwrap();
        let (one, sigma, psi) = (m.vacuum(), m.charge("sigma").unwrap(), m.charge("psi").unwrap());
        let s = 1.0 / 3f64.sqrt();
        let t = TargetState::new(&m, [(one, c(s)), (psi, c(s)), (sigma, c(s))]).unwrap();
        let dcm = decompose_initial(&t).unwrap();
        let es: Vec<_> = dcm
            .entries()
            .filter(|(k, _)| k.a == sigma && k.a_prime == sigma)
            .map(|(k, _)| k.e)
            .collect();
        assert_eq!(es, vec![one, psi]);
        let es: Vec<_> = dcm
            .entries()
            .filter(|(k, _)| k.a == one && k.a_prime == sigma)
            .map(|(k, _)| k.e)
            .collect();
        assert_eq!(es, vec![sigma]);
    }

    #[test]
    fn definite_charge_has_only_diagonal_block() {
        let m = builtin_model("fibonacci").unwrap();
        let eps = m.charge("eps").unwrap();
        let dcm = decompose_initial(&TargetState::definite(&m, eps)).unwrap();
        assert!(dcm.entries().all(|(k, _)| k.a == eps && k.a_prime == eps));
        let tr = dcm.trace_contributions();
        assert!((tr[&m.vacuum()] - 1.0).norm() < 1e-14);
        assert!(tr[&eps].norm() < 1e-14);
    }

    #[test]
    fn fibonacci_blocks() {
        let m = builtin_model("fibonacci").unwrap();
        let (one, eps) = (m.vacuum(), m.charge("eps").unwrap());
        let t = TargetState::new(&m, [(one, c(0.6)), (eps, c(0.8))]).unwrap();
        let dcm = decompose_initial(&t).unwrap();
        let triples = dcm.channels();
        assert_eq!(
            triples,
            vec![
                (one, one, one),
                (one, eps, eps),
                (eps, one, eps),
                (eps, eps, one),
                (eps, eps, eps)
            ]
        );
    }

    #[test]
    fn conjugate_symmetry() {
        for name in crate::model::BUILTIN_NAMES {
            let m = builtin_model(name).unwrap();
            let amps: Vec<_> = m
                .charges()
                .enumerate()
                .map(|(i, q)| (q, Complex64::new(1.0 + i as f64, 0.5 - i as f64)))
                .collect();
            let t = TargetState::normalized(&m, amps).unwrap();
            let dcm = decompose_initial(&t).unwrap();
            for (k, v) in dcm.entries() {
                let mirror = ChannelKey {
                    a: k.a_prime,
                    a_prime: k.a,
                    e: m.dual(k.e),
                    alpha: k.beta,
                    beta: k.alpha,
                };
                assert!((dcm.coefficient(&mirror) - v.conj()).norm() < 1e-14, "{name} {k:?}");
            }
        }
    }

    #[test]
    fn trace_lives_in_vacuum_channel() {
        let m = builtin_model("ising").unwrap();
        let amps: Vec<_> = m.charges().map(|q| (q, c(1.0))).collect();
        let t = TargetState::normalized(&m, amps).unwrap();
        let tr = decompose_initial(&t).unwrap().trace_contributions();
        for (e, v) in tr {
            let expected = if e == m.vacuum() { 1.0 } else { 0.0 };
            assert!((v - expected).norm() < 1e-14);
        }
    }
}
