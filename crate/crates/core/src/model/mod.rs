//! Algebraic data of a unitary braided tensor category ("anyon model").
//!
//! A model is a finite list of charges together with their duals, fusion
//! multiplicities `N_ab^c`, quantum dimensions, F-symbols, R-symbols and the
//! modular S-matrix. Models are immutable once built; all derived quantities
//! (monodromy, difference channels, pair-basis F-moves) are pure lookups.

mod builder;
mod builtin;
mod file;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use builder::ModelBuilder;
pub use builtin::{builtin_model, BUILTIN_NAMES};
pub use file::{load_model, serialize_model};
pub use verify::{verify_model, CheckResult, VerificationReport};

/// Absolute tolerance used by consistency checks unless overridden.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Name of the vacuum charge in every model.
pub const VACUUM_NAME: &str = "1";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("unknown built-in model '{0}' (expected one of: trivial, semion, ising, fibonacci)")]
    UnknownBuiltin(String),
    #[error("unknown charge '{0}'")]
    UnknownCharge(String),
    #[error("no vacuum charge (a charge named \"1\" is required)")]
    NoVacuum,
    #[error("duplicate charge name '{0}'")]
    DuplicateCharge(String),
    #[error("missing mandatory section '{0}'")]
    MissingSection(&'static str),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

impl ModelError {
    pub(crate) fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ModelError::Field {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Index of a charge within its model's charge list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Charge(pub(crate) usize);

impl Charge {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Per-charge data: name, antiparticle and quantum dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct ChargeInfo {
    pub name: String,
    pub dual: Charge,
    pub qdim: f64,
}

/// A basis vector `mu` of the splitting space `V^{ab}_c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FusionVertex {
    pub a: Charge,
    pub b: Charge,
    pub c: Charge,
    pub mu: usize,
}

impl FusionVertex {
    /// Returns the vertex if `mu < N_ab^c`, `None` otherwise.
    pub fn new(model: &AnyonModel, a: Charge, b: Charge, c: Charge, mu: usize) -> Option<Self> {
        (mu < model.fusion(a, b, c) as usize).then_some(FusionVertex { a, b, c, mu })
    }
}

/// Key of an F-symbol `[F^{abc}_d]_{(e,alpha,beta),(f,mu,nu)}`.
///
/// Vertex roles: `alpha` in `V^{ab}_e`, `beta` in `V^{ec}_d`, `mu` in
/// `V^{bc}_f`, `nu` in `V^{af}_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FKey {
    pub a: Charge,
    pub b: Charge,
    pub c: Charge,
    pub d: Charge,
    pub e: Charge,
    pub alpha: usize,
    pub beta: usize,
    pub f: Charge,
    pub mu: usize,
    pub nu: usize,
}

impl FKey {
    /// Multiplicity-free key (all vertex indices zero).
    pub fn simple(a: Charge, b: Charge, c: Charge, d: Charge, e: Charge, f: Charge) -> Self {
        FKey {
            a,
            b,
            c,
            d,
            e,
            alpha: 0,
            beta: 0,
            f,
            mu: 0,
            nu: 0,
        }
    }

    /// The four vertices this entry refers to, in role order.
    pub(crate) fn vertices(&self) -> [(Charge, Charge, Charge, usize); 4] {
        [
            (self.a, self.b, self.e, self.alpha),
            (self.e, self.c, self.d, self.beta),
            (self.b, self.c, self.f, self.mu),
            (self.a, self.f, self.d, self.nu),
        ]
    }
}

/// Key of an R-symbol `[R^{ab}_c]_{mu,nu}` with `mu` in `V^{ab}_c` and `nu`
/// in `V^{ba}_c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RKey {
    pub a: Charge,
    pub b: Charge,
    pub c: Charge,
    pub mu: usize,
    pub nu: usize,
}

/// Row/column label of an F-move block: intermediate charge plus the two
/// vertex indices attached to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Channel {
    pub charge: Charge,
    pub first: usize,
    pub second: usize,
}

/// A dense F-move at fixed external charges, mapping row channels to column
/// channels.
#[derive(Clone, Debug)]
pub struct FBlock {
    pub rows: Vec<Channel>,
    pub cols: Vec<Channel>,
    pub matrix: DMatrix<Complex64>,
}

impl FBlock {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() && self.cols.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols.len()
    }

    /// Max-abs deviation of `M M^dagger` and `M^dagger M` from the identity.
    /// Non-square blocks report infinity.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows.len();
        let id = DMatrix::<Complex64>::identity(n, n);
        let adj = self.matrix.adjoint();
        let left = &self.matrix * &adj - &id;
        let right = &adj * &self.matrix - &id;
        left.iter().chain(right.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct AnyonModel {
    name: String,
    charges: Vec<ChargeInfo>,
    vacuum: Charge,
    fusion: Vec<u32>,
    f_symbols: BTreeMap<FKey, Complex64>,
    r_symbols: BTreeMap<RKey, Complex64>,
    s_matrix: DMatrix<Complex64>,
    total_qdim: f64,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl AnyonModel {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Number of charges.
    pub fn rank(&self) -> usize {
        self.charges.len()
    }

    pub fn charges(&self) -> impl ExactSizeIterator<Item = Charge> + Clone {
        (0..self.charges.len()).map(Charge)
    }

    pub fn charge_info(&self, c: Charge) -> &ChargeInfo {
        &self.charges[c.0]
    }

    pub fn vacuum(&self) -> Charge {
        self.vacuum
    }

    /// Look up a charge by name. Common ASCII and Greek aliases of the
    /// built-in charge names are accepted as well.
    pub fn charge(&self, name: &str) -> Result<Charge, ModelError> {
        if let Some(i) = self.charges.iter().position(|c| c.name == name) {
            return Ok(Charge(i));
        }
        let canonical = match name {
            "σ" => "sigma",
            "ψ" => "psi",
            "ε" | "epsilon" | "tau" | "τ" => "eps",
            "vac" | "vacuum" | "I" => VACUUM_NAME,
            _ => return Err(ModelError::UnknownCharge(name.to_string())),
        };
        self.charges
            .iter()
            .position(|c| c.name == canonical)
            .map(Charge)
            .ok_or_else(|| ModelError::UnknownCharge(name.to_string()))
    }

    pub fn name_of(&self, c: Charge) -> &str {
        &self.charges[c.0].name
    }

    pub fn dual(&self, c: Charge) -> Charge {
        self.charges[c.0].dual
    }

    pub fn qdim(&self, c: Charge) -> f64 {
        self.charges[c.0].qdim
    }

    /// Total quantum dimension `D = sqrt(sum_a d_a^2)`.
    pub fn total_qdim(&self) -> f64 {
        self.total_qdim
    }

    /// Fusion multiplicity `N_ab^c`.
    pub fn fusion(&self, a: Charge, b: Charge, c: Charge) -> u32 {
        let n = self.rank();
        self.fusion[(a.0 * n + b.0) * n + c.0]
    }

    /// Nonzero fusion channels of `a x b` with their multiplicities.
    pub fn fusion_products(&self, a: Charge, b: Charge) -> Vec<(Charge, u32)> {
        self.charges()
            .map(|c| (c, self.fusion(a, b, c)))
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    /// F-symbol lookup; entries absent from the model are zero.
    pub fn f_symbol(&self, key: &FKey) -> Complex64 {
        self.f_symbols.get(key).copied().unwrap_or(ZERO)
    }

    pub fn f_symbols(&self) -> impl Iterator<Item = (&FKey, &Complex64)> {
        self.f_symbols.iter()
    }

    pub fn r_symbol(&self, a: Charge, b: Charge, c: Charge, mu: usize, nu: usize) -> Complex64 {
        self.r_symbols.get(&RKey { a, b, c, mu, nu }).copied().unwrap_or(ZERO)
    }

    pub fn r_symbols(&self) -> impl Iterator<Item = (&RKey, &Complex64)> {
        self.r_symbols.iter()
    }

    /// `[R^{ab}_c]` as an `N_ab^c x N_ba^c` matrix.
    pub fn r_matrix(&self, a: Charge, b: Charge, c: Charge) -> DMatrix<Complex64> {
        let rows = self.fusion(a, b, c) as usize;
        let cols = self.fusion(b, a, c) as usize;
        DMatrix::from_fn(rows, cols, |mu, nu| self.r_symbol(a, b, c, mu, nu))
    }

    pub fn s(&self, a: Charge, b: Charge) -> Complex64 {
        self.s_matrix[(a.0, b.0)]
    }

    pub fn s_matrix(&self) -> &DMatrix<Complex64> {
        &self.s_matrix
    }

    /// Monodromy scalar `M_ab = S_ab S_11 / (S_1a S_1b)`.
    pub fn monodromy(&self, a: Charge, b: Charge) -> Complex64 {
        let one = self.vacuum;
        self.s(a, b) * self.s(one, one) / (self.s(one, a) * self.s(one, b))
    }

    /// Charges `e` that fuse with `a_prime` to give `a`, i.e. `N_{e a'}^a >= 1`,
    /// paired with that multiplicity.
    pub fn difference_channels(&self, a: Charge, a_prime: Charge) -> Vec<(Charge, u32)> {
        self.charges()
            .map(|e| (e, self.fusion(e, a_prime, a)))
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    /// The F-move `[F^{abc}_d]` at fixed external charges.
    pub fn f_block(&self, a: Charge, b: Charge, c: Charge, d: Charge) -> FBlock {
        let mut rows = Vec::new();
        for e in self.charges() {
            for alpha in 0..self.fusion(a, b, e) as usize {
                for beta in 0..self.fusion(e, c, d) as usize {
                    rows.push(Channel {
                        charge: e,
                        first: alpha,
                        second: beta,
                    });
                }
            }
        }
        let mut cols = Vec::new();
        for f in self.charges() {
            for mu in 0..self.fusion(b, c, f) as usize {
                for nu in 0..self.fusion(a, f, d) as usize {
                    cols.push(Channel {
                        charge: f,
                        first: mu,
                        second: nu,
                    });
                }
            }
        }
        let matrix = DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            let (r, k) = (rows[i], cols[j]);
            self.f_symbol(&FKey {
                a,
                b,
                c,
                d,
                e: r.charge,
                alpha: r.first,
                beta: r.second,
                f: k.charge,
                mu: k.first,
                nu: k.second,
            })
        });
        FBlock { rows, cols, matrix }
    }

    /// Four-leg F-move acting on the target pair density matrix
    /// `|a, abar; f><a', abar'; f|`.
    ///
    /// Rows are difference channels `(e, alpha, beta)` with `alpha` in
    /// `V^{a' e}_a` and `beta` in `V^{e abar}_{abar'}`; columns are overall
    /// pair charges `(f, mu, nu)` with `mu` in `V^{a abar}_f` and `nu` in
    /// `V^{a' abar'}_f`. The entries follow from the six-index F-symbols as
    ///
    /// `[F^{a abar}_{a' abar'}]_{(e,α,β),(f,μ,ν)}
    ///     = sqrt(d_e d_f / (d_a d_a')) conj([F^{a' e abar}_f]_{(a,α,μ),(abar',β,ν)})`.
    pub fn pair_f_move(&self, a: Charge, a_prime: Charge) -> FBlock {
        let a_bar = self.dual(a);
        let ap_bar = self.dual(a_prime);
        let mut rows = Vec::new();
        for e in self.charges() {
            for alpha in 0..self.fusion(a_prime, e, a) as usize {
                for beta in 0..self.fusion(e, a_bar, ap_bar) as usize {
                    rows.push(Channel {
                        charge: e,
                        first: alpha,
                        second: beta,
                    });
                }
            }
        }
        let mut cols = Vec::new();
        for f in self.charges() {
            for mu in 0..self.fusion(a, a_bar, f) as usize {
                for nu in 0..self.fusion(a_prime, ap_bar, f) as usize {
                    cols.push(Channel {
                        charge: f,
                        first: mu,
                        second: nu,
                    });
                }
            }
        }
        let norm = self.qdim(a) * self.qdim(a_prime);
        let matrix = DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            let (r, k) = (rows[i], cols[j]);
            let six_j = self.f_symbol(&FKey {
                a: a_prime,
                b: r.charge,
                c: a_bar,
                d: k.charge,
                e: a,
                alpha: r.first,
                beta: k.first,
                f: ap_bar,
                mu: r.second,
                nu: k.second,
            });
            let weight = (self.qdim(r.charge) * self.qdim(k.charge) / norm).sqrt();
            six_j.conj() * weight
        });
        FBlock { rows, cols, matrix }
    }

    /// The parity-reversed model: F, R and S complex conjugated.
    ///
    /// Its monodromy is the conjugate of this model's monodromy.
    pub fn mirror(&self) -> AnyonModel {
        let mut m = self.clone();
        m.name = format!("{}-mirror", self.name);
        m.f_symbols.values_mut().for_each(|z| *z = z.conj());
        m.r_symbols.values_mut().for_each(|z| *z = z.conj());
        m.s_matrix = m.s_matrix.map(|z| z.conj());
        m
    }

    /// Field-by-field comparison with complex and real entries compared
    /// within `tol`.
    pub fn approx_eq(&self, other: &AnyonModel, tol: f64) -> bool {
        let close = |x: Complex64, y: Complex64| (x - y).norm() <= tol;
        self.name == other.name
            && self.vacuum == other.vacuum
            && self.charges.len() == other.charges.len()
            && self
                .charges
                .iter()
                .zip(&other.charges)
                .all(|(x, y)| x.name == y.name && x.dual == y.dual && (x.qdim - y.qdim).abs() <= tol)
            && self.fusion == other.fusion
            && (self.total_qdim - other.total_qdim).abs() <= tol
            && self.f_symbols.len() == other.f_symbols.len()
            && self
                .f_symbols
                .iter()
                .all(|(k, v)| other.f_symbols.get(k).is_some_and(|w| close(*v, *w)))
            && self.r_symbols.len() == other.r_symbols.len()
            && self
                .r_symbols
                .iter()
                .all(|(k, v)| other.r_symbols.get(k).is_some_and(|w| close(*v, *w)))
            && self.s_matrix.shape() == other.s_matrix.shape()
            && self
                .s_matrix
                .iter()
                .zip(other.s_matrix.iter())
                .all(|(x, y)| close(*x, *y))
    }

    /// Copy of the model with one F-symbol replaced. Useful for probing the
    /// consistency checks with deliberately broken data.
    pub fn with_f_symbol(&self, key: FKey, value: Complex64) -> Result<AnyonModel, ModelError> {
        for (a, b, c, mu) in key.vertices() {
            if mu >= self.fusion(a, b, c) as usize {
                return Err(ModelError::field(
                    "f_symbols",
                    format!(
                        "inadmissible vertex ({}, {} -> {}, index {mu})",
                        self.name_of(a),
                        self.name_of(b),
                        self.name_of(c)
                    ),
                ));
            }
        }
        let mut out = self.clone();
        out.f_symbols.insert(key, value);
        Ok(out)
    }
}
