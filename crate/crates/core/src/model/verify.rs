//! Consistency checks on model data.
//!
//! Every check reports the largest deviation it observed; a check passes when
//! that deviation is within the tolerance. Integer-valued fusion checks report
//! the number of violated identities as their deviation.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{AnyonModel, Charge, FKey};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub max_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub model: String,
    pub tolerance: f64,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.max_deviation).fold(0.0, f64::max)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub const CHECK_FUSION: &str = "fusion rules";
pub const CHECK_DIMENSIONS: &str = "quantum dimensions";
pub const CHECK_S_UNITARY: &str = "S unitary and symmetric";
pub const CHECK_LOOP_VALUE: &str = "d = D S_1a";
pub const CHECK_F_UNITARY: &str = "F unitarity";
pub const CHECK_PAIR_F_UNITARY: &str = "pair F-move unitarity";
pub const CHECK_R_UNITARY: &str = "R unitarity";
pub const CHECK_PENTAGON: &str = "pentagon";
pub const CHECK_HEXAGON: &str = "hexagon";
pub const CHECK_HEXAGON_INVERSE: &str = "hexagon (inverse braiding)";
pub const CHECK_MONODROMY: &str = "|M| <= 1";

struct Worst {
    deviation: f64,
    detail: Option<String>,
}

impl Worst {
    fn new() -> Self {
        Worst {
            deviation: 0.0,
            detail: None,
        }
    }

    fn record(&mut self, deviation: f64, detail: impl FnOnce() -> String) {
        // NaN must register as a failure
        if deviation > self.deviation || deviation.is_nan() {
            self.deviation = deviation;
            self.detail = Some(detail());
        }
    }

    fn into_check(self, name: &str, tol: f64) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            passed: self.deviation <= tol,
            max_deviation: self.deviation,
            detail: self.detail,
        }
    }
}

pub fn verify_model(model: &AnyonModel, tol: f64) -> VerificationReport {
    let checks = vec![
        fusion_rules(model).into_check(CHECK_FUSION, tol),
        dimensions(model).into_check(CHECK_DIMENSIONS, tol),
        s_unitary(model).into_check(CHECK_S_UNITARY, tol),
        loop_value(model).into_check(CHECK_LOOP_VALUE, tol),
        f_unitarity(model).into_check(CHECK_F_UNITARY, tol),
        pair_f_unitarity(model).into_check(CHECK_PAIR_F_UNITARY, tol),
        r_unitarity(model).into_check(CHECK_R_UNITARY, tol),
        pentagon(model).into_check(CHECK_PENTAGON, tol),
        hexagon(model, false).into_check(CHECK_HEXAGON, tol),
        hexagon(model, true).into_check(CHECK_HEXAGON_INVERSE, tol),
        monodromy_bound(model).into_check(CHECK_MONODROMY, tol),
    ];
    VerificationReport {
        model: model.name().to_string(),
        tolerance: tol,
        checks,
    }
}

fn fusion_rules(m: &AnyonModel) -> Worst {
    let one = m.vacuum();
    let nm = |c: Charge| m.name_of(c).to_string();
    let mut violations = Vec::new();
    if m.dual(one) != one {
        violations.push("dual(1) != 1".to_string());
    }
    for a in m.charges() {
        if m.dual(m.dual(a)) != a {
            violations.push(format!("dual is not an involution at {}", nm(a)));
        }
        for b in m.charges() {
            let delta = u32::from(a == b);
            if m.fusion(one, a, b) != delta || m.fusion(a, one, b) != delta {
                violations.push(format!("N_1{}^{} != delta", nm(a), nm(b)));
            }
            if m.fusion(a, b, one) != u32::from(b == m.dual(a)) {
                violations.push(format!("N_{}{}^1 != delta(b, abar)", nm(a), nm(b)));
            }
            for c in m.charges() {
                if m.fusion(a, b, c) != m.fusion(b, a, c) {
                    violations.push(format!("N_{}{}^{} not symmetric", nm(a), nm(b), nm(c)));
                }
            }
        }
    }
    Worst {
        deviation: violations.len() as f64,
        detail: violations.into_iter().next(),
    }
}

fn dimensions(m: &AnyonModel) -> Worst {
    let mut w = Worst::new();
    w.record((m.qdim(m.vacuum()) - 1.0).abs(), || "d_1 != 1".into());
    for a in m.charges() {
        w.record(1.0 - m.qdim(a), || format!("d_{} < 1", m.name_of(a)));
        w.record((m.qdim(a) - m.qdim(m.dual(a))).abs(), || {
            format!("d_{} vs d_bar", m.name_of(a))
        });
        for b in m.charges() {
            let rhs: f64 = m.charges().map(|c| m.fusion(a, b, c) as f64 * m.qdim(c)).sum();
            w.record((m.qdim(a) * m.qdim(b) - rhs).abs(), || {
                format!("d_{} d_{} vs sum_c N d_c", m.name_of(a), m.name_of(b))
            });
        }
    }
    w
}

fn s_unitary(m: &AnyonModel) -> Worst {
    let s = m.s_matrix();
    let n = s.nrows();
    let mut w = Worst::new();
    let gram = s * s.adjoint();
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            w.record((gram[(i, j)] - target).norm(), || format!("(S S^dagger)[{i},{j}]"));
            w.record((s[(i, j)] - s[(j, i)]).norm(), || format!("S[{i},{j}] vs S[{j},{i}]"));
        }
    }
    w
}

fn loop_value(m: &AnyonModel) -> Worst {
    let mut w = Worst::new();
    let d = m.total_qdim();
    for a in m.charges() {
        let dev = (Complex64::from(m.qdim(a)) - m.s(m.vacuum(), a) * d).norm();
        w.record(dev, || format!("d_{} vs D S_1{}", m.name_of(a), m.name_of(a)));
    }
    w
}

fn f_unitarity(m: &AnyonModel) -> Worst {
    let mut w = Worst::new();
    for a in m.charges() {
        for b in m.charges() {
            for c in m.charges() {
                for d in m.charges() {
                    let block = m.f_block(a, b, c, d);
                    if block.is_empty() {
                        continue;
                    }
                    w.record(block.unitarity_deviation(), || {
                        format!(
                            "F^{{{},{},{}}}_{}",
                            m.name_of(a),
                            m.name_of(b),
                            m.name_of(c),
                            m.name_of(d)
                        )
                    });
                }
            }
        }
    }
    w
}

fn pair_f_unitarity(m: &AnyonModel) -> Worst {
    let mut w = Worst::new();
    for a in m.charges() {
        for ap in m.charges() {
            let block = m.pair_f_move(a, ap);
            if block.is_empty() {
                continue;
            }
            w.record(block.unitarity_deviation(), || {
                format!("pair move ({}, {})", m.name_of(a), m.name_of(ap))
            });
        }
    }
    w
}

fn r_unitarity(m: &AnyonModel) -> Worst {
    let mut w = Worst::new();
    for a in m.charges() {
        for b in m.charges() {
            for c in m.charges() {
                let r = m.r_matrix(a, b, c);
                if r.is_empty() {
                    continue;
                }
                let id = DMatrix::<Complex64>::identity(r.nrows(), r.nrows());
                let dev = if r.is_square() {
                    (&r * r.adjoint() - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
                } else {
                    f64::INFINITY
                };
                w.record(dev, || {
                    format!("R^{{{},{}}}_{}", m.name_of(a), m.name_of(b), m.name_of(c))
                });
            }
        }
    }
    w
}

/// `F(a,b,c,d; e,alpha,beta; f,mu,nu)` by vertex role.
#[allow(clippy::too_many_arguments)]
fn fs(
    m: &AnyonModel,
    a: Charge,
    b: Charge,
    c: Charge,
    d: Charge,
    e: Charge,
    alpha: usize,
    beta: usize,
    f: Charge,
    mu: usize,
    nu: usize,
) -> Complex64 {
    m.f_symbol(&FKey {
        a,
        b,
        c,
        d,
        e,
        alpha,
        beta,
        f,
        mu,
        nu,
    })
}

fn pentagon(m: &AnyonModel) -> Worst {
    let n = |x, y, z| m.fusion(x, y, z) as usize;
    let q = m.charges();
    let mut w = Worst::new();
    for a in q.clone() {
        for b in q.clone() {
            for c in q.clone() {
                for d in q.clone() {
                    for e in q.clone() {
                        for f in q.clone().filter(|&f| n(a, b, f) > 0) {
                            for g in q.clone().filter(|&g| n(f, c, g) > 0 && n(g, d, e) > 0) {
                                for l in q.clone().filter(|&l| n(c, d, l) > 0 && n(f, l, e) > 0) {
                                    for k in q.clone().filter(|&k| n(b, l, k) > 0 && n(a, k, e) > 0) {
                                        pentagon_entry(m, &mut w, [a, b, c, d, e, f, g, l, k]);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    w
}

fn pentagon_entry(m: &AnyonModel, w: &mut Worst, labels: [Charge; 9]) {
    let [a, b, c, d, e, f, g, l, k] = labels;
    let n = |x, y, z| m.fusion(x, y, z) as usize;
    for x_abf in 0..n(a, b, f) {
        for x_fcg in 0..n(f, c, g) {
            for x_gde in 0..n(g, d, e) {
                for x_cdl in 0..n(c, d, l) {
                    for x_blk in 0..n(b, l, k) {
                        for x_ake in 0..n(a, k, e) {
                            let lhs: Complex64 = (0..n(f, l, e))
                                .map(|x_fle| {
                                    fs(m, f, c, d, e, g, x_fcg, x_gde, l, x_cdl, x_fle)
                                        * fs(m, a, b, l, e, f, x_abf, x_fle, k, x_blk, x_ake)
                                })
                                .sum();
                            let mut rhs = Complex64::new(0.0, 0.0);
                            for h in m.charges() {
                                for x_ahg in 0..n(a, h, g) {
                                    for x_bch in 0..n(b, c, h) {
                                        for x_hdk in 0..n(h, d, k) {
                                            rhs += fs(m, a, b, c, g, f, x_abf, x_fcg, h, x_bch, x_ahg)
                                                * fs(m, a, h, d, e, g, x_ahg, x_gde, k, x_hdk, x_ake)
                                                * fs(m, b, c, d, k, h, x_bch, x_hdk, l, x_cdl, x_blk);
                                        }
                                    }
                                }
                            }
                            w.record((lhs - rhs).norm(), || {
                                let nm = |x: Charge| m.name_of(x);
                                format!(
                                    "a={} b={} c={} d={} e={} f={} g={} l={} k={}",
                                    nm(a),
                                    nm(b),
                                    nm(c),
                                    nm(d),
                                    nm(e),
                                    nm(f),
                                    nm(g),
                                    nm(l),
                                    nm(k)
                                )
                            });
                        }
                    }
                }
            }
        }
    }
}

/// Braiding matrices in the orientation the hexagon consumes: for the direct
/// hexagon `[R^{xy}_z]`, for the inverse one `[(R^{yx}_z)^{-1}]`. Both are
/// indexed `(V^{xy}_z, V^{yx}_z)`.
fn braid_table(m: &AnyonModel, inverse: bool) -> HashMap<(Charge, Charge, Charge), DMatrix<Complex64>> {
    let mut table = HashMap::new();
    for x in m.charges() {
        for y in m.charges() {
            for z in m.charges() {
                if m.fusion(x, y, z) == 0 {
                    continue;
                }
                let r = if inverse {
                    m.r_matrix(y, x, z).try_inverse().unwrap_or_else(|| {
                        DMatrix::from_element(
                            m.fusion(x, y, z) as usize,
                            m.fusion(y, x, z) as usize,
                            Complex64::new(f64::NAN, 0.0),
                        )
                    })
                } else {
                    m.r_matrix(x, y, z)
                };
                table.insert((x, y, z), r);
            }
        }
    }
    table
}

fn hexagon(m: &AnyonModel, inverse: bool) -> Worst {
    let n = |x, y, z| m.fusion(x, y, z) as usize;
    let braid = braid_table(m, inverse);
    let q = m.charges();
    let mut w = Worst::new();
    for a in q.clone() {
        for b in q.clone() {
            for c in q.clone() {
                for d in q.clone() {
                    for e in q.clone().filter(|&e| n(c, a, e) > 0 && n(e, b, d) > 0) {
                        for g in q.clone().filter(|&g| n(b, c, g) > 0 && n(a, g, d) > 0) {
                            let r_cae = &braid[&(c, a, e)];
                            let r_cbg = &braid[&(c, b, g)];
                            for x_cae in 0..n(c, a, e) {
                                for x_ebd in 0..n(e, b, d) {
                                    for x_bcg in 0..n(b, c, g) {
                                        for x_agd in 0..n(a, g, d) {
                                            let mut lhs = Complex64::new(0.0, 0.0);
                                            for x_ace in 0..n(a, c, e) {
                                                for x_cbg in 0..n(c, b, g) {
                                                    lhs += r_cae[(x_cae, x_ace)]
                                                        * fs(m, a, c, b, d, e, x_ace, x_ebd, g, x_cbg, x_agd)
                                                        * r_cbg[(x_cbg, x_bcg)];
                                                }
                                            }
                                            let mut rhs = Complex64::new(0.0, 0.0);
                                            for f in q.clone() {
                                                let Some(r_cfd) = braid.get(&(c, f, d)) else {
                                                    continue;
                                                };
                                                for x_abf in 0..n(a, b, f) {
                                                    for x_cfd in 0..n(c, f, d) {
                                                        for x_fcd in 0..n(f, c, d) {
                                                            rhs += fs(m, c, a, b, d, e, x_cae, x_ebd, f, x_abf, x_cfd)
                                                                * r_cfd[(x_cfd, x_fcd)]
                                                                * fs(m, a, b, c, d, f, x_abf, x_fcd, g, x_bcg, x_agd);
                                                        }
                                                    }
                                                }
                                            }
                                            w.record((lhs - rhs).norm(), || {
                                                let nm = |x: Charge| m.name_of(x);
                                                format!(
                                                    "a={} b={} c={} d={} e={} g={}",
                                                    nm(a),
                                                    nm(b),
                                                    nm(c),
                                                    nm(d),
                                                    nm(e),
                                                    nm(g)
                                                )
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    w
}

fn monodromy_bound(m: &AnyonModel) -> Worst {
    let mut w = Worst::new();
    for a in m.charges() {
        for b in m.charges() {
            let dev = (m.monodromy(a, b).norm() - 1.0).max(0.0);
            w.record(dev, || format!("M_{}{}", m.name_of(a), m.name_of(b)));
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin_model, BUILTIN_NAMES, DEFAULT_TOLERANCE};

    #[test]
    fn builtins_pass_every_check() {
        for name in BUILTIN_NAMES {
            let m = builtin_model(name).unwrap();
            let report = verify_model(&m, DEFAULT_TOLERANCE);
            for c in &report.checks {
                assert!(
                    c.passed && c.max_deviation < 1e-12,
                    "{name}: {} deviates by {} ({:?})",
                    c.name,
                    c.max_deviation,
                    c.detail
                );
            }
        }
    }

    #[test]
    fn flipped_f_sign_breaks_pentagon() {
        let ising = builtin_model("ising").unwrap();
        let sigma = ising.charge("sigma").unwrap();
        let psi = ising.charge("psi").unwrap();
        for key in [
            FKey::simple(sigma, psi, sigma, psi, sigma, sigma),
            FKey::simple(sigma, sigma, sigma, sigma, psi, psi),
            FKey::simple(psi, sigma, sigma, psi, sigma, ising.vacuum()),
        ] {
            let broken = ising.with_f_symbol(key, -ising.f_symbol(&key)).unwrap();
            let report = verify_model(&broken, DEFAULT_TOLERANCE);
            assert!(!report.check(CHECK_PENTAGON).unwrap().passed, "{key:?}");
            assert!(!report.all_passed());
        }
    }

    #[test]
    fn wrong_s_matrix_is_caught() {
        let fib = builtin_model("fibonacci").unwrap();
        let mut text = crate::model::serialize_model(&fib);
        // transpose-breaking perturbation of one off-diagonal entry
        let needle = format!("{}", fib.s_matrix()[(0, 1)].re);
        text = text.replacen(&needle, "0.5", 1);
        let broken = crate::model::load_model(&text).unwrap();
        let report = verify_model(&broken, DEFAULT_TOLERANCE);
        assert!(!report.check(CHECK_S_UNITARY).unwrap().passed);
    }

    #[test]
    fn trivial_model_passes_vacuously() {
        let report = verify_model(&builtin_model("trivial").unwrap(), DEFAULT_TOLERANCE);
        assert!(report.all_passed());
        assert_eq!(report.max_deviation(), 0.0);
    }
}
