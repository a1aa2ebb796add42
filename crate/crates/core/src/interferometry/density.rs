use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::model::{AnyonModel, Charge};

/// Basis state `|a, abar; f, mu>` of the target pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairState {
    pub a: Charge,
    pub f: Charge,
    pub mu: usize,
}

/// Density matrix of the target pair in the fusion basis, normalized for
/// the ordinary trace. Only entries with equal overall charge `f` on both
/// sides can be nonzero.
#[derive(Clone, Debug)]
pub struct PairBasisMatrix<'m> {
    model: &'m AnyonModel,
    basis: Vec<PairState>,
    matrix: DMatrix<Complex64>,
}

impl<'m> PairBasisMatrix<'m> {
    /// Zero matrix over all pair states of the given target charges.
    pub fn zeros(model: &'m AnyonModel, support: &[Charge]) -> Self {
        let mut basis = Vec::new();
        for &a in support {
            for (f, n) in model.fusion_products(a, model.dual(a)) {
                basis.extend((0..n as usize).map(|mu| PairState { a, f, mu }));
            }
        }
        let n = basis.len();
        PairBasisMatrix {
            model,
            basis,
            matrix: DMatrix::zeros(n, n),
        }
    }

    pub fn model(&self) -> &'m AnyonModel {
        self.model
    }

    pub fn basis(&self) -> &[PairState] {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    fn index(&self, s: PairState) -> Option<usize> {
        self.basis.iter().position(|&b| b == s)
    }

    /// Coefficient of `|a, abar; f, mu><a', abar'; f, nu|`.
    pub fn entry(&self, a: Charge, a_prime: Charge, f: Charge, mu: usize, nu: usize) -> Complex64 {
        match (
            self.index(PairState { a, f, mu }),
            self.index(PairState { a: a_prime, f, mu: nu }),
        ) {
            (Some(i), Some(j)) => self.matrix[(i, j)],
            _ => Complex64::default(),
        }
    }

    pub(crate) fn set(&mut self, a: Charge, a_prime: Charge, f: Charge, mu: usize, nu: usize, z: Complex64) {
        let i = self.index(PairState { a, f, mu }).expect("row in basis");
        let j = self
            .index(PairState { a: a_prime, f, mu: nu })
            .expect("column in basis");
        self.matrix[(i, j)] = z;
    }

    /// Pairs of basis states sharing the same overall charge, i.e. every
    /// entry that can be nonzero, in row-major order.
    pub fn structural_entries(&self) -> impl Iterator<Item = (PairState, PairState, Complex64)> + '_ {
        let n = self.basis.len();
        (0..n).flat_map(move |i| {
            (0..n).filter_map(move |j| {
                let (r, c) = (self.basis[i], self.basis[j]);
                (r.f == c.f).then(|| (r, c, self.matrix[(i, j)]))
            })
        })
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Sum of the diagonal entries belonging to target charge `a`.
    pub fn block_weight(&self, a: Charge) -> Complex64 {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, s)| s.a == a)
            .map(|(i, _)| self.matrix[(i, i)])
            .sum()
    }

    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.basis.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        if self.basis.is_empty() {
            return 0.0;
        }
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Max elementwise distance to another matrix over the union of bases.
    pub fn max_abs_diff(&self, other: &PairBasisMatrix<'_>) -> f64 {
        let mut states: Vec<PairState> = self.basis.iter().chain(&other.basis).copied().collect();
        states.sort();
        states.dedup();
        let get = |m: &PairBasisMatrix<'_>, r: PairState, c: PairState| {
            if r.f != c.f {
                return Complex64::default();
            }
            m.entry(r.a, c.a, r.f, r.mu, c.mu)
        };
        let mut worst = 0.0f64;
        for &r in &states {
            for &c in &states {
                worst = worst.max((get(self, r, c) - get(other, r, c)).norm());
            }
        }
        worst
    }

    /// Direct constructor from a dense matrix; used for hand-built inputs.
    pub fn from_parts(model: &'m AnyonModel, basis: Vec<PairState>, matrix: DMatrix<Complex64>) -> Self {
        assert_eq!(matrix.shape(), (basis.len(), basis.len()));
        PairBasisMatrix { model, basis, matrix }
    }
}
