use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::InterferometryError;
use crate::model::{AnyonModel, Charge, DEFAULT_TOLERANCE};

/// Superposition `sum_a A_a |a, abar; 1>` of the target pair.
#[derive(Clone, Debug)]
pub struct TargetState<'m> {
    model: &'m AnyonModel,
    amplitudes: BTreeMap<Charge, Complex64>,
}

impl<'m> TargetState<'m> {
    /// Build a target from `(charge, amplitude)` pairs. Amplitudes must be
    /// normalized within the default tolerance; zero amplitudes are dropped.
    pub fn new(
        model: &'m AnyonModel,
        amplitudes: impl IntoIterator<Item = (Charge, Complex64)>,
    ) -> Result<Self, InterferometryError> {
        Self::with_tolerance(model, amplitudes, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(
        model: &'m AnyonModel,
        amplitudes: impl IntoIterator<Item = (Charge, Complex64)>,
        tol: f64,
    ) -> Result<Self, InterferometryError> {
        let amplitudes = collect_amplitudes(model, amplitudes)?;
        let norm: f64 = amplitudes.values().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > tol {
            return Err(InterferometryError::NotNormalized { what: "target", norm });
        }
        Ok(TargetState { model, amplitudes })
    }

    /// Build a target, rescaling the amplitudes to unit norm.
    pub fn normalized(
        model: &'m AnyonModel,
        amplitudes: impl IntoIterator<Item = (Charge, Complex64)>,
    ) -> Result<Self, InterferometryError> {
        let mut amplitudes = collect_amplitudes(model, amplitudes)?;
        let norm: f64 = amplitudes.values().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(InterferometryError::NotNormalized { what: "target", norm });
        }
        amplitudes.values_mut().for_each(|z| *z /= norm);
        Ok(TargetState { model, amplitudes })
    }

    /// Target in a single definite charge.
    pub fn definite(model: &'m AnyonModel, a: Charge) -> Self {
        TargetState {
            model,
            amplitudes: BTreeMap::from([(a, Complex64::new(1.0, 0.0))]),
        }
    }

    pub fn model(&self) -> &'m AnyonModel {
        self.model
    }

    pub fn amplitude(&self, a: Charge) -> Complex64 {
        self.amplitudes.get(&a).copied().unwrap_or_default()
    }

    /// Charges with nonzero amplitude, in model order.
    pub fn support(&self) -> impl Iterator<Item = (Charge, Complex64)> + '_ {
        self.amplitudes.iter().map(|(&c, &z)| (c, z))
    }
}

fn collect_amplitudes(
    model: &AnyonModel,
    amplitudes: impl IntoIterator<Item = (Charge, Complex64)>,
) -> Result<BTreeMap<Charge, Complex64>, InterferometryError> {
    let mut out = BTreeMap::new();
    for (c, z) in amplitudes {
        if c.index() >= model.rank() {
            return Err(InterferometryError::InvalidCharge(c));
        }
        if z != Complex64::default() {
            *out.entry(c).or_default() += z;
        }
    }
    Ok(out)
}

/// Direction in which a probe enters the first beam splitter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
}

/// State `sum_{b,s} B_{b,s} |bbar, b; 1; s>` of one probe pair.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSpec {
    amplitudes: BTreeMap<(Charge, Direction), Complex64>,
}

impl ProbeSpec {
    pub fn new(
        amplitudes: impl IntoIterator<Item = ((Charge, Direction), Complex64)>,
    ) -> Result<Self, InterferometryError> {
        Self::with_tolerance(amplitudes, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(
        amplitudes: impl IntoIterator<Item = ((Charge, Direction), Complex64)>,
        tol: f64,
    ) -> Result<Self, InterferometryError> {
        let probe = Self::collect(amplitudes);
        let norm = probe.norm_sqr();
        if (norm - 1.0).abs() > tol {
            return Err(InterferometryError::NotNormalized { what: "probe", norm });
        }
        Ok(probe)
    }

    pub fn normalized(
        amplitudes: impl IntoIterator<Item = ((Charge, Direction), Complex64)>,
    ) -> Result<Self, InterferometryError> {
        let mut probe = Self::collect(amplitudes);
        let norm = probe.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(InterferometryError::NotNormalized { what: "probe", norm });
        }
        probe.amplitudes.values_mut().for_each(|z| *z /= norm);
        Ok(probe)
    }

    /// Probe of definite charge `b` entering horizontally.
    pub fn definite(b: Charge) -> Self {
        ProbeSpec {
            amplitudes: BTreeMap::from([((b, Direction::Horizontal), Complex64::new(1.0, 0.0))]),
        }
    }

    fn collect(amplitudes: impl IntoIterator<Item = ((Charge, Direction), Complex64)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, z) in amplitudes {
            if z != Complex64::default() {
                *map.entry(k).or_default() += z;
            }
        }
        ProbeSpec { amplitudes: map }
    }

    fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|z| z.norm_sqr()).sum()
    }

    pub fn amplitude(&self, b: Charge, s: Direction) -> Complex64 {
        self.amplitudes.get(&(b, s)).copied().unwrap_or_default()
    }

    /// Charges with any nonzero component, ascending.
    pub fn charges(&self) -> Vec<Charge> {
        let mut out: Vec<Charge> = self.amplitudes.keys().map(|&(b, _)| b).collect();
        out.dedup();
        out
    }

    pub fn components(&self) -> impl Iterator<Item = ((Charge, Direction), Complex64)> + '_ {
        self.amplitudes.iter().map(|(&k, &z)| (k, z))
    }

    pub(crate) fn validate(&self, model: &AnyonModel) -> Result<(), InterferometryError> {
        match self.charges().into_iter().find(|b| b.index() >= model.rank()) {
            Some(b) => Err(InterferometryError::InvalidCharge(b)),
            None => Ok(()),
        }
    }
}

/// Lossless beam splitter `T = [[t, r*], [r, -t*]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamSplitter {
    t: Complex64,
    r: Complex64,
}

impl BeamSplitter {
    pub fn new(t: Complex64, r: Complex64) -> Result<Self, InterferometryError> {
        Self::with_tolerance(t, r, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(t: Complex64, r: Complex64, tol: f64) -> Result<Self, InterferometryError> {
        let total = t.norm_sqr() + r.norm_sqr();
        if (total - 1.0).abs() > tol {
            return Err(InterferometryError::Lossy { total });
        }
        Ok(BeamSplitter { t, r })
    }

    /// 50/50 splitter with real amplitudes.
    pub fn balanced() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        BeamSplitter {
            t: Complex64::new(h, 0.0),
            r: Complex64::new(h, 0.0),
        }
    }

    /// Real splitter with transmission probability `p`.
    pub fn with_transmission_probability(p: f64) -> Result<Self, InterferometryError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(InterferometryError::Lossy { total: p });
        }
        Ok(BeamSplitter {
            t: Complex64::new(p.sqrt(), 0.0),
            r: Complex64::new((1.0 - p).sqrt(), 0.0),
        })
    }

    pub fn t(&self) -> Complex64 {
        self.t
    }

    pub fn r(&self) -> Complex64 {
        self.r
    }

    /// The splitter with transmission and reflection exchanged.
    pub fn swapped(&self) -> Self {
        BeamSplitter { t: self.r, r: self.t }
    }

    /// Output amplitudes `(T (h, v))` for input components `h`, `v`.
    pub fn apply(&self, h: Complex64, v: Complex64) -> (Complex64, Complex64) {
        (self.t * h + self.r.conj() * v, self.r * h - self.t.conj() * v)
    }
}

/// Where the target's antiparticle sits relative to the central region.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    #[default]
    Below,
    Above,
}

/// Interferometer geometry. `t2`, `theta_i` and `theta_ii` describe the
/// apparatus but do not enter the target's reduced density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterferometerConfig {
    pub t1: BeamSplitter,
    pub t2: BeamSplitter,
    pub theta_i: f64,
    pub theta_ii: f64,
    pub placement: Placement,
}

impl InterferometerConfig {
    /// Config with the given first splitter, a balanced second splitter,
    /// zero phases and the antiparticle below.
    pub fn new(t1: BeamSplitter) -> Self {
        InterferometerConfig {
            t1,
            t2: BeamSplitter::balanced(),
            theta_i: 0.0,
            theta_ii: 0.0,
            placement: Placement::Below,
        }
    }

    pub fn with_placement(mut self, placement: Placement) -> Self {
        self.placement = placement;
        self
    }

    /// Probability amplitude that a probe component passes between the
    /// target and its antiparticle, given its horizontal and vertical input
    /// amplitudes.
    pub fn between_amplitude(&self, h: Complex64, v: Complex64) -> Complex64 {
        let (lower, upper) = self.t1.apply(h, v);
        match self.placement {
            Placement::Below => lower,
            Placement::Above => upper,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin_model;

    #[test]
    fn target_normalization_enforced() {
        let m = builtin_model("ising").unwrap();
        let one = m.vacuum();
        let err = TargetState::new(&m, [(one, Complex64::new(0.5, 0.0))]).unwrap_err();
        assert!(matches!(err, InterferometryError::NotNormalized { .. }));
        let t = TargetState::normalized(&m, [(one, Complex64::new(0.5, 0.0))]).unwrap();
        assert_eq!(t.amplitude(one), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn invalid_charge_rejected() {
        let m = builtin_model("semion").unwrap();
        let err = TargetState::new(&m, [(Charge(7), Complex64::new(1.0, 0.0))]).unwrap_err();
        assert!(matches!(err, InterferometryError::InvalidCharge(_)));
    }

    #[test]
    fn lossy_splitter_rejected() {
        let err = BeamSplitter::new(Complex64::new(0.7, 0.0), Complex64::new(0.7, 0.0)).unwrap_err();
        assert!(matches!(err, InterferometryError::Lossy { .. }));
        assert!(BeamSplitter::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).is_ok());
    }

    #[test]
    fn splitter_is_unitary() {
        let bs = BeamSplitter::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap();
        let h = Complex64::new(0.3, -0.2);
        let v = Complex64::new(-0.5, 0.1);
        let (x, y) = bs.apply(h, v);
        let before = h.norm_sqr() + v.norm_sqr();
        assert!((x.norm_sqr() + y.norm_sqr() - before).abs() < 1e-15);
    }

    #[test]
    fn probe_normalization() {
        let b = Charge(1);
        assert!(ProbeSpec::new([((b, Direction::Horizontal), Complex64::new(0.6, 0.0))]).is_err());
        let p = ProbeSpec::new([
            ((b, Direction::Horizontal), Complex64::new(0.6, 0.0)),
            ((b, Direction::Vertical), Complex64::new(0.0, 0.8)),
        ])
        .unwrap();
        assert_eq!(p.charges(), vec![b]);
    }
}
