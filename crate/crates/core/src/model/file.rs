//! JSON model file format.
//!
//! ```json
//! {
//!   "name": "semion",
//!   "charges": [{"name": "1", "dual": "1", "qdim": 1.0}, ...],
//!   "fusion": [{"a": "s", "b": "s", "c": "1", "n": 1}, ...],
//!   "f_symbols": [{"a": .., "b": .., "c": .., "d": .., "e": .., "alpha": 0, "beta": 0,
//!                  "f": .., "mu": 0, "nu": 0, "re": -1.0, "im": 0.0}, ...],
//!   "r_symbols": [{"a": .., "b": .., "c": .., "mu": 0, "nu": 0, "re": 0.0, "im": 1.0}, ...],
//!   "s_matrix": [[[re, im], ...], ...]
//! }
//! ```
//!
//! Omitted fusion, F and R entries are zero. The S-matrix is row-major and may
//! be given either as nested rows or as one flat list of `[re, im]` pairs.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AnyonModel, Charge, FKey, ModelBuilder, ModelError, RKey};

#[derive(Serialize, Deserialize)]
struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    charges: Option<Vec<ChargeEntry>>,
    fusion: Option<Vec<FusionEntry>>,
    f_symbols: Option<Vec<FEntry>>,
    r_symbols: Option<Vec<REntry>>,
    s_matrix: Option<SMatrix>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChargeEntry {
    name: String,
    dual: String,
    qdim: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FusionEntry {
    a: String,
    b: String,
    c: String,
    n: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FEntry {
    a: String,
    b: String,
    c: String,
    d: String,
    e: String,
    #[serde(default)]
    alpha: usize,
    #[serde(default)]
    beta: usize,
    f: String,
    #[serde(default)]
    mu: usize,
    #[serde(default)]
    nu: usize,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct REntry {
    a: String,
    b: String,
    c: String,
    #[serde(default)]
    mu: usize,
    #[serde(default)]
    nu: usize,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SMatrix {
    Rows(Vec<Vec<[f64; 2]>>),
    Flat(Vec<[f64; 2]>),
}

/// Parse a model file. Referential integrity and fusion admissibility of
/// every entry are checked here; the algebraic consistency conditions are
/// left to [`super::verify_model`].
pub fn load_model(text: &str) -> Result<AnyonModel, ModelError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let charges = file.charges.ok_or(ModelError::MissingSection("charges"))?;
    let fusion = file.fusion.ok_or(ModelError::MissingSection("fusion"))?;
    let f_symbols = file.f_symbols.ok_or(ModelError::MissingSection("f_symbols"))?;
    let r_symbols = file.r_symbols.ok_or(ModelError::MissingSection("r_symbols"))?;
    let s_matrix = file.s_matrix.ok_or(ModelError::MissingSection("s_matrix"))?;

    let decl: Vec<(&str, &str, f64)> = charges
        .iter()
        .map(|c| (c.name.as_str(), c.dual.as_str(), c.qdim))
        .collect();
    let mut b = ModelBuilder::new(file.name.unwrap_or_else(|| "custom".into()), &decl)?;

    let lookup = |b: &ModelBuilder, section: &str, i: usize, field: &str, name: &str| {
        b.charge(name)
            .map_err(|_| ModelError::field(format!("{section}[{i}].{field}"), format!("unknown charge '{name}'")))
    };

    for (i, entry) in fusion.iter().enumerate() {
        let a = lookup(&b, "fusion", i, "a", &entry.a)?;
        let bb = lookup(&b, "fusion", i, "b", &entry.b)?;
        let c = lookup(&b, "fusion", i, "c", &entry.c)?;
        b.set_fusion(a, bb, c, entry.n);
    }

    for (i, entry) in f_symbols.iter().enumerate() {
        let key = FKey {
            a: lookup(&b, "f_symbols", i, "a", &entry.a)?,
            b: lookup(&b, "f_symbols", i, "b", &entry.b)?,
            c: lookup(&b, "f_symbols", i, "c", &entry.c)?,
            d: lookup(&b, "f_symbols", i, "d", &entry.d)?,
            e: lookup(&b, "f_symbols", i, "e", &entry.e)?,
            alpha: entry.alpha,
            beta: entry.beta,
            f: lookup(&b, "f_symbols", i, "f", &entry.f)?,
            mu: entry.mu,
            nu: entry.nu,
        };
        b.set_f(key, Complex64::new(entry.re, entry.im))
            .map_err(|e| relabel(e, format!("f_symbols[{i}]")))?;
    }

    for (i, entry) in r_symbols.iter().enumerate() {
        let key = RKey {
            a: lookup(&b, "r_symbols", i, "a", &entry.a)?,
            b: lookup(&b, "r_symbols", i, "b", &entry.b)?,
            c: lookup(&b, "r_symbols", i, "c", &entry.c)?,
            mu: entry.mu,
            nu: entry.nu,
        };
        b.set_r(key, Complex64::new(entry.re, entry.im))
            .map_err(|e| relabel(e, format!("r_symbols[{i}]")))?;
    }

    let n = decl.len();
    let entries: Vec<[f64; 2]> = match s_matrix {
        SMatrix::Rows(rows) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(ModelError::field(
                    "s_matrix",
                    format!("expected {n} rows of {n} entries"),
                ));
            }
            rows.into_iter().flatten().collect()
        }
        SMatrix::Flat(flat) => {
            if flat.len() != n * n {
                return Err(ModelError::field(
                    "s_matrix",
                    format!("expected {} entries, found {}", n * n, flat.len()),
                ));
            }
            flat
        }
    };
    let s = DMatrix::from_row_iterator(n, n, entries.into_iter().map(|[re, im]| Complex64::new(re, im)));
    b.set_s_matrix(s)?;
    b.build()
}

fn relabel(err: ModelError, field: String) -> ModelError {
    match err {
        ModelError::Field { message, .. } => ModelError::Field { field, message },
        other => other,
    }
}

/// Serialize a model to the file format accepted by [`load_model`].
pub fn serialize_model(model: &AnyonModel) -> String {
    let nm = |c: Charge| model.name_of(c).to_string();
    let charges = model
        .charges()
        .map(|c| ChargeEntry {
            name: nm(c),
            dual: nm(model.dual(c)),
            qdim: model.qdim(c),
        })
        .collect();
    let mut fusion = Vec::new();
    for a in model.charges() {
        for b in model.charges() {
            for (c, n) in model.fusion_products(a, b) {
                fusion.push(FusionEntry {
                    a: nm(a),
                    b: nm(b),
                    c: nm(c),
                    n,
                });
            }
        }
    }
    let f_symbols = model
        .f_symbols()
        .map(|(k, v)| FEntry {
            a: nm(k.a),
            b: nm(k.b),
            c: nm(k.c),
            d: nm(k.d),
            e: nm(k.e),
            alpha: k.alpha,
            beta: k.beta,
            f: nm(k.f),
            mu: k.mu,
            nu: k.nu,
            re: v.re,
            im: v.im,
        })
        .collect();
    let r_symbols = model
        .r_symbols()
        .map(|(k, v)| REntry {
            a: nm(k.a),
            b: nm(k.b),
            c: nm(k.c),
            mu: k.mu,
            nu: k.nu,
            re: v.re,
            im: v.im,
        })
        .collect();
    let s = model.s_matrix();
    let rows = (0..s.nrows())
        .map(|i| (0..s.ncols()).map(|j| [s[(i, j)].re, s[(i, j)].im]).collect())
        .collect();
    let file = ModelFile {
        name: Some(model.name().to_string()),
        charges: Some(charges),
        fusion: Some(fusion),
        f_symbols: Some(f_symbols),
        r_symbols: Some(r_symbols),
        s_matrix: Some(SMatrix::Rows(rows)),
    };
    serde_json::to_string_pretty(&file).expect("model serialization cannot fail")
}
