//! Flag value syntax: complex numbers, target and probe amplitude lists,
//! beam splitters.

use anyon_core::interferometry::{BeamSplitter, Direction, ProbeSpec, TargetState};
use anyon_core::model::{AnyonModel, Charge};
use num_complex::Complex64;

use crate::CliError;

/// Typed-in amplitudes and splitters within this distance of unit norm are
/// accepted and rescaled exactly; anything further off is an error unless
/// `--normalize` is given. Four printed digits of 1/sqrt(2) or 1/sqrt(3)
/// fall well inside.
pub const INPUT_TOLERANCE: f64 = 5e-3;

/// `re`, `imi`, `re+imi` or `re-imi`; `j` is accepted for `i`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let bad = || format!("invalid complex number '{s}' (expected re, re+imi or re-imi)");
    let num = |t: &str| -> Result<f64, String> {
        let x: f64 = t.parse().map_err(|_| bad())?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(bad())
        }
    };
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return Ok(Complex64::new(num(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (num(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => num(t)?,
    };
    Ok(Complex64::new(re, im))
}

fn charge(model: &AnyonModel, name: &str) -> Result<Charge, CliError> {
    model
        .charge(name)
        .map_err(|_| CliError::Usage(format!("unknown charge '{name}' in model {}", model.name())))
}

fn settle<K: Copy>(amps: Vec<(K, Complex64)>, normalize: bool, what: &str) -> Result<Vec<(K, Complex64)>, CliError> {
    let norm2: f64 = amps.iter().map(|(_, z)| z.norm_sqr()).sum();
    if norm2 == 0.0 {
        return Err(CliError::Usage(format!("{what} amplitudes are all zero")));
    }
    if !normalize && (norm2 - 1.0).abs() > INPUT_TOLERANCE {
        return Err(CliError::Usage(format!(
            "{what} amplitudes are not normalized (sum of |amplitude|^2 = {norm2}); pass --normalize to rescale"
        )));
    }
    let scale = 1.0 / norm2.sqrt();
    Ok(amps.into_iter().map(|(k, z)| (k, z * scale)).collect())
}

/// `charge:amplitude` pairs separated by commas.
pub fn parse_target<'m>(model: &'m AnyonModel, s: &str, normalize: bool) -> Result<TargetState<'m>, CliError> {
    let mut amps: Vec<(Charge, Complex64)> = Vec::new();
    for item in s.split(',') {
        let (name, amp) = item
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("target entry '{item}' is not charge:amplitude")))?;
        let a = charge(model, name)?;
        if amps.iter().any(|(b, _)| *b == a) {
            return Err(CliError::Usage(format!("charge '{name}' appears twice in --target")));
        }
        amps.push((a, parse_complex(amp).map_err(CliError::Usage)?));
    }
    Ok(TargetState::new(model, settle(amps, normalize, "target")?)?)
}

fn direction(s: &str) -> Result<Direction, CliError> {
    match s {
        "h" | "H" | "horizontal" => Ok(Direction::Horizontal),
        "v" | "V" | "vertical" => Ok(Direction::Vertical),
        _ => Err(CliError::Usage(format!("unknown direction '{s}' (expected h or v)"))),
    }
}

/// Either a bare charge name (definite charge, horizontal entry) or
/// `charge:dir:amplitude` entries separated by commas.
pub fn parse_probe(model: &AnyonModel, s: &str, normalize: bool) -> Result<ProbeSpec, CliError> {
    if !s.contains(':') {
        return Ok(ProbeSpec::definite(charge(model, s)?));
    }
    let mut amps: Vec<((Charge, Direction), Complex64)> = Vec::new();
    for item in s.split(',') {
        let parts: Vec<&str> = item.splitn(3, ':').collect();
        let [name, dir, amp] = parts[..] else {
            return Err(CliError::Usage(format!(
                "probe entry '{item}' is not charge:dir:amplitude"
            )));
        };
        let key = (charge(model, name)?, direction(dir)?);
        if amps.iter().any(|(k, _)| *k == key) {
            return Err(CliError::Usage(format!("probe component '{name}:{dir}' appears twice")));
        }
        amps.push((key, parse_complex(amp).map_err(CliError::Usage)?));
    }
    Ok(ProbeSpec::new(settle(amps, normalize, "probe")?)?)
}

/// Splitter from optional `t` and `r`. Missing values default to a balanced
/// splitter, or to the real complement of the one given.
pub fn splitter(t: Option<Complex64>, r: Option<Complex64>, flag: &str) -> Result<BeamSplitter, CliError> {
    let complement = |z: Complex64| -> Result<Complex64, CliError> {
        let rest = 1.0 - z.norm_sqr();
        if rest < -INPUT_TOLERANCE {
            return Err(CliError::Usage(format!("{flag}: |amplitude| = {} exceeds 1", z.norm())));
        }
        Ok(Complex64::new(rest.max(0.0).sqrt(), 0.0))
    };
    let (t, r) = match (t, r) {
        (None, None) => return Ok(BeamSplitter::balanced()),
        (Some(t), None) => (t, complement(t)?),
        (None, Some(r)) => (complement(r)?, r),
        (Some(t), Some(r)) => (t, r),
    };
    let total = t.norm_sqr() + r.norm_sqr();
    if (total - 1.0).abs() > INPUT_TOLERANCE {
        return Err(CliError::Usage(format!(
            "{flag}: beam splitter is not lossless (|t|^2 + |r|^2 = {total})"
        )));
    }
    let scale = 1.0 / total.sqrt();
    Ok(BeamSplitter::new(t * scale, r * scale)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use anyon_core::model::builtin_model;

    #[test]
    fn complex_syntax() {
        let c = Complex64::new;
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("-0.5").unwrap(), c(-0.5, 0.0));
        assert_eq!(parse_complex("0.6+0.8i").unwrap(), c(0.6, 0.8));
        assert_eq!(parse_complex("0.6-0.8i").unwrap(), c(0.6, -0.8));
        assert_eq!(parse_complex("-1e-3-2.5e+2i").unwrap(), c(-1e-3, -250.0));
        assert_eq!(parse_complex("0.3i").unwrap(), c(0.0, 0.3));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1+i").unwrap(), c(1.0, 1.0));
        assert_eq!(parse_complex("2j").unwrap(), c(0.0, 2.0));
        for bad in ["", "x", "1+2", "1 + 2i", "nan", "1+xi", "inf"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn target_list() {
        let m = builtin_model("ising").unwrap();
        let t = parse_target(&m, "1:0.577,psi:0.577,sigma:0.577", false).unwrap();
        let s = 1.0 / 3f64.sqrt();
        for a in m.charges() {
            assert!((t.amplitude(a).re - s).abs() < 1e-15);
        }
        assert!(parse_target(&m, "1:0.5,psi:0.5", false).is_err());
        assert!(parse_target(&m, "1:0.5,psi:0.5", true).is_ok());
        assert!(parse_target(&m, "1:1,1:0", false).is_err());
        assert!(parse_target(&m, "1:1,tau:0", false).is_err());
        assert!(parse_target(&m, "1=1", false).is_err());
        assert!(parse_target(&m, "1:0,psi:0", true).is_err());
    }

    #[test]
    fn probe_forms() {
        let m = builtin_model("ising").unwrap();
        let sigma = m.charge("sigma").unwrap();
        assert_eq!(parse_probe(&m, "sigma", false).unwrap(), ProbeSpec::definite(sigma));
        assert_eq!(parse_probe(&m, "σ", false).unwrap(), ProbeSpec::definite(sigma));
        let p = parse_probe(&m, "sigma:h:0.6,psi:v:0.8i", false).unwrap();
        let psi = m.charge("psi").unwrap();
        assert_eq!(p.amplitude(psi, Direction::Vertical), Complex64::new(0.0, 0.8));
        assert!(parse_probe(&m, "sigma:x:1", false).is_err());
        assert!(parse_probe(&m, "sigma:1", false).is_err());
        assert!(parse_probe(&m, "sigma:h:0.6,psi:v:0.6", false).is_err());
    }

    #[test]
    fn splitter_defaults_and_checks() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bs = splitter(None, None, "t1").unwrap();
        assert!((bs.t().re - h).abs() < 1e-15);
        let bs = splitter(Some(Complex64::new(0.8, 0.0)), None, "t1").unwrap();
        assert!((bs.r().re - 0.6).abs() < 1e-15);
        let typed = parse_complex("0.7071").ok();
        let bs = splitter(typed, typed, "t1").unwrap();
        assert!((bs.t().re - h).abs() < 1e-15);
        assert!(splitter(Some(Complex64::new(0.5, 0.0)), Some(Complex64::new(0.5, 0.0)), "t1").is_err());
        assert!(splitter(Some(Complex64::new(1.5, 0.0)), None, "t1").is_err());
    }
}
