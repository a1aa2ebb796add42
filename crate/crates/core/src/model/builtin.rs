//! The four shipped models, in the standard gauge where every F-symbol with
//! a vacuum leg equals one.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{AnyonModel, Charge, FKey, ModelBuilder, ModelError, RKey};

pub const BUILTIN_NAMES: [&str; 4] = ["trivial", "semion", "ising", "fibonacci"];

pub fn builtin_model(name: &str) -> Result<AnyonModel, ModelError> {
    match name {
        "trivial" => trivial(),
        "semion" => semion(),
        "ising" => ising(),
        "fibonacci" | "fib" => fibonacci(),
        _ => Err(ModelError::UnknownBuiltin(name.to_string())),
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn expi(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Multiplicity-free model assembly. `fuse` lists the fusion channels of a
/// pair by name, `f_override` supplies F-symbols that differ from one, `r`
/// supplies every admissible R-symbol.
fn assemble(
    name: &str,
    charges: &[(&str, &str, f64)],
    fuse: impl Fn(&str, &str) -> Vec<&'static str>,
    f_override: impl Fn([&str; 6]) -> Option<Complex64>,
    r: impl Fn(&str, &str, &str) -> Complex64,
    s: DMatrix<Complex64>,
) -> Result<AnyonModel, ModelError> {
    let mut b = ModelBuilder::new(name, charges)?;
    let all: Vec<Charge> = b.charges().collect();
    let nm = |c: Charge| charges[c.0].0;
    for &x in &all {
        for &y in &all {
            for z in fuse(nm(x), nm(y)) {
                let z = b.charge(z)?;
                b.set_fusion(x, y, z, 1);
            }
        }
    }
    for &a in &all {
        for &bb in &all {
            for &c in &all {
                for &d in &all {
                    for &e in &all {
                        if b.fusion(a, bb, e) == 0 || b.fusion(e, c, d) == 0 {
                            continue;
                        }
                        for &f in &all {
                            if b.fusion(bb, c, f) == 0 || b.fusion(a, f, d) == 0 {
                                continue;
                            }
                            let v = f_override([nm(a), nm(bb), nm(c), nm(d), nm(e), nm(f)]).unwrap_or(real(1.0));
                            b.set_f(FKey::simple(a, bb, c, d, e, f), v)?;
                        }
                    }
                }
            }
        }
    }
    for &x in &all {
        for &y in &all {
            for &z in &all {
                if b.fusion(x, y, z) > 0 {
                    b.set_r(
                        RKey {
                            a: x,
                            b: y,
                            c: z,
                            mu: 0,
                            nu: 0,
                        },
                        r(nm(x), nm(y), nm(z)),
                    )?;
                }
            }
        }
    }
    b.set_s_matrix(s)?;
    b.build()
}

fn trivial() -> Result<AnyonModel, ModelError> {
    assemble(
        "trivial",
        &[("1", "1", 1.0)],
        |_, _| vec!["1"],
        |_| None,
        |_, _, _| real(1.0),
        DMatrix::from_element(1, 1, real(1.0)),
    )
}

fn semion() -> Result<AnyonModel, ModelError> {
    let h = FRAC_1_SQRT_2;
    assemble(
        "semion",
        &[("1", "1", 1.0), ("s", "s", 1.0)],
        |x, y| match (x, y) {
            ("1", z) | (z, "1") => vec![if z == "s" { "s" } else { "1" }],
            _ => vec!["1"],
        },
        |k| (k[..4] == ["s", "s", "s", "s"]).then(|| real(-1.0)),
        |a, b, _| {
            if a == "s" && b == "s" {
                Complex64::i()
            } else {
                real(1.0)
            }
        },
        DMatrix::from_row_slice(2, 2, &[real(h), real(h), real(h), real(-h)]),
    )
}

fn ising() -> Result<AnyonModel, ModelError> {
    let h = FRAC_1_SQRT_2;
    assemble(
        "ising",
        &[("1", "1", 1.0), ("sigma", "sigma", SQRT_2), ("psi", "psi", 1.0)],
        |x, y| match (x, y) {
            ("1", z) | (z, "1") => vec![match z {
                "sigma" => "sigma",
                "psi" => "psi",
                _ => "1",
            }],
            ("sigma", "sigma") => vec!["1", "psi"],
            ("psi", "psi") => vec!["1"],
            _ => vec!["sigma"],
        },
        |k| match k {
            ["sigma", "sigma", "sigma", "sigma", "psi", "psi"] => Some(real(-h)),
            ["sigma", "sigma", "sigma", "sigma", _, _] => Some(real(h)),
            ["sigma", "psi", "sigma", "psi", _, _] | ["psi", "sigma", "psi", "sigma", _, _] => Some(real(-1.0)),
            _ => None,
        },
        |a, b, c| match (a, b, c) {
            ("sigma", "sigma", "1") => expi(-PI / 8.0),
            ("sigma", "sigma", "psi") => expi(3.0 * PI / 8.0),
            ("sigma", "psi", _) | ("psi", "sigma", _) => -Complex64::i(),
            ("psi", "psi", _) => real(-1.0),
            _ => real(1.0),
        },
        DMatrix::from_row_slice(
            3,
            3,
            &[
                real(0.5),
                real(h),
                real(0.5),
                real(h),
                real(0.0),
                real(-h),
                real(0.5),
                real(-h),
                real(0.5),
            ],
        ),
    )
}

fn fibonacci() -> Result<AnyonModel, ModelError> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let inv_d = 1.0 / (2.0 + phi).sqrt();
    assemble(
        "fibonacci",
        &[("1", "1", 1.0), ("eps", "eps", phi)],
        |x, y| match (x, y) {
            ("1", "1") => vec!["1"],
            ("1", _) | (_, "1") => vec!["eps"],
            _ => vec!["1", "eps"],
        },
        |k| match k {
            ["eps", "eps", "eps", "eps", "1", "1"] => Some(real(1.0 / phi)),
            ["eps", "eps", "eps", "eps", "eps", "eps"] => Some(real(-1.0 / phi)),
            ["eps", "eps", "eps", "eps", _, _] => Some(real(phi.sqrt().recip())),
            _ => None,
        },
        |a, b, c| match (a, b, c) {
            ("eps", "eps", "1") => expi(-4.0 * PI / 5.0),
            ("eps", "eps", "eps") => expi(3.0 * PI / 5.0),
            _ => real(1.0),
        },
        DMatrix::from_row_slice(2, 2, &[real(inv_d), real(phi * inv_d), real(phi * inv_d), real(-inv_d)]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_name_is_an_error() {
        assert_eq!(
            builtin_model("toric").unwrap_err(),
            ModelError::UnknownBuiltin("toric".into())
        );
    }

    #[test]
    fn trivial_has_one_charge() {
        let m = builtin_model("trivial").unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.total_qdim(), 1.0);
    }

    #[test]
    fn ising_fusion_and_dimensions() {
        let m = builtin_model("ising").unwrap();
        let names: Vec<_> = m.charges().map(|c| m.name_of(c).to_string()).collect();
        assert_eq!(names, ["1", "sigma", "psi"]);
        let sigma = m.charge("sigma").unwrap();
        let prod: Vec<_> = m
            .fusion_products(sigma, sigma)
            .into_iter()
            .map(|(c, _)| m.name_of(c))
            .collect();
        assert_eq!(prod, ["1", "psi"]);
        assert!((m.qdim(sigma) - SQRT_2).abs() < 1e-15);
        assert!((m.total_qdim() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn fibonacci_golden_dimension() {
        let m = builtin_model("fibonacci").unwrap();
        let eps = m.charge("eps").unwrap();
        assert!((m.qdim(eps) - 1.6180339887).abs() < 1e-10);
        let prod: Vec<_> = m.fusion_products(eps, eps).into_iter().map(|(c, _)| c).collect();
        assert_eq!(prod, [m.vacuum(), eps]);
    }

    #[test]
    fn semion_data() {
        let m = builtin_model("semion").unwrap();
        let s = m.charge("s").unwrap();
        assert_eq!(m.fusion_products(s, s), vec![(m.vacuum(), 1)]);
        assert_eq!(m.r_symbol(s, s, m.vacuum(), 0, 0), Complex64::i());
    }
}
