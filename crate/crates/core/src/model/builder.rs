use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{AnyonModel, Charge, ChargeInfo, FKey, ModelError, RKey, VACUUM_NAME};

/// Incremental construction of an [`AnyonModel`].
///
/// Charges are fixed up front; fusion entries must be added before the F- and
/// R-symbols that depend on them, since every symbol is checked against the
/// fusion rules when it is inserted.
#[derive(Clone, Debug)]
pub struct ModelBuilder {
    name: String,
    charges: Vec<ChargeInfo>,
    vacuum: Charge,
    fusion: Vec<u32>,
    f_symbols: BTreeMap<FKey, Complex64>,
    r_symbols: BTreeMap<RKey, Complex64>,
    s_matrix: Option<DMatrix<Complex64>>,
}

impl ModelBuilder {
    /// Declare the model's charges as `(name, dual name, quantum dimension)`.
    pub fn new<S: AsRef<str>>(name: impl Into<String>, charges: &[(S, S, f64)]) -> Result<Self, ModelError> {
        let names: Vec<&str> = charges.iter().map(|(n, _, _)| n.as_ref()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(ModelError::DuplicateCharge(n.to_string()));
            }
        }
        let vacuum = names
            .iter()
            .position(|n| *n == VACUUM_NAME)
            .map(Charge)
            .ok_or(ModelError::NoVacuum)?;
        let infos = charges
            .iter()
            .enumerate()
            .map(|(i, (n, dual, qdim))| {
                let d = names.iter().position(|m| *m == dual.as_ref()).ok_or_else(|| {
                    ModelError::field(
                        format!("charges[{i}].dual"),
                        format!("unknown charge '{}'", dual.as_ref()),
                    )
                })?;
                Ok(ChargeInfo {
                    name: n.as_ref().to_string(),
                    dual: Charge(d),
                    qdim: *qdim,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        let n = infos.len();
        Ok(ModelBuilder {
            name: name.into(),
            charges: infos,
            vacuum,
            fusion: vec![0; n * n * n],
            f_symbols: BTreeMap::new(),
            r_symbols: BTreeMap::new(),
            s_matrix: None,
        })
    }

    pub fn charge(&self, name: &str) -> Result<Charge, ModelError> {
        self.charges
            .iter()
            .position(|c| c.name == name)
            .map(Charge)
            .ok_or_else(|| ModelError::UnknownCharge(name.to_string()))
    }

    pub fn charges(&self) -> impl Iterator<Item = Charge> {
        (0..self.charges.len()).map(Charge)
    }

    pub fn vacuum(&self) -> Charge {
        self.vacuum
    }

    pub fn fusion(&self, a: Charge, b: Charge, c: Charge) -> u32 {
        let n = self.charges.len();
        self.fusion[(a.0 * n + b.0) * n + c.0]
    }

    pub fn set_fusion(&mut self, a: Charge, b: Charge, c: Charge, n: u32) -> &mut Self {
        let r = self.charges.len();
        self.fusion[(a.0 * r + b.0) * r + c.0] = n;
        self
    }

    /// Insert an F-symbol, rejecting entries whose vertices are not allowed
    /// by the fusion rules.
    pub fn set_f(&mut self, key: FKey, value: Complex64) -> Result<&mut Self, ModelError> {
        for (a, b, c, mu) in key.vertices() {
            if mu >= self.fusion(a, b, c) as usize {
                return Err(ModelError::field(
                    "f_symbols",
                    format!(
                        "inadmissible vertex ({}, {} -> {}, index {mu})",
                        self.charges[a.0].name, self.charges[b.0].name, self.charges[c.0].name
                    ),
                ));
            }
        }
        self.f_symbols.insert(key, value);
        Ok(self)
    }

    pub fn set_r(&mut self, key: RKey, value: Complex64) -> Result<&mut Self, ModelError> {
        let (a, b, c) = (key.a, key.b, key.c);
        if key.mu >= self.fusion(a, b, c) as usize || key.nu >= self.fusion(b, a, c) as usize {
            return Err(ModelError::field(
                "r_symbols",
                format!(
                    "inadmissible vertex ({}, {} -> {}, indices {}, {})",
                    self.charges[a.0].name, self.charges[b.0].name, self.charges[c.0].name, key.mu, key.nu
                ),
            ));
        }
        self.r_symbols.insert(key, value);
        Ok(self)
    }

    pub fn set_s_matrix(&mut self, s: DMatrix<Complex64>) -> Result<&mut Self, ModelError> {
        let n = self.charges.len();
        if s.shape() != (n, n) {
            return Err(ModelError::field(
                "s_matrix",
                format!("expected {n}x{n} entries, found {}x{}", s.nrows(), s.ncols()),
            ));
        }
        self.s_matrix = Some(s);
        Ok(self)
    }

    pub fn build(self) -> Result<AnyonModel, ModelError> {
        let s_matrix = self.s_matrix.ok_or(ModelError::MissingSection("s_matrix"))?;
        let total_qdim = self.charges.iter().map(|c| c.qdim * c.qdim).sum::<f64>().sqrt();
        Ok(AnyonModel {
            name: self.name,
            charges: self.charges,
            vacuum: self.vacuum,
            fusion: self.fusion,
            f_symbols: self.f_symbols,
            r_symbols: self.r_symbols,
            s_matrix,
            total_qdim,
        })
    }
}
