use std::io::Write;

use anyon_core::interferometry::{
    asymptotic_with_tolerance, decompose_initial, evolve, stray_splitter, ChannelLimit, InterferometerConfig,
    PairBasisMatrix, Placement, ProbeSequence, ProbeSpec, TargetState,
};
use anyon_core::model::{verify_model, AnyonModel, Charge};
use anyon_core::oracle::{
    check_density_matrix, closed_form_vs_oracle, ComparisonReport, DensityReport, Scenario, MAX_ENUMERATION_N,
};
use num_complex::Complex64;
use serde::Serialize;

use crate::args::{OutFormat, PlacementArg, RunArgs, SetupArgs, SweepArgs, VerifyArgs, VerifyFormat};
use crate::parse::{parse_probe, parse_target, splitter};
use crate::{load_model_source, CliError};

pub fn cmd_verify(args: &VerifyArgs, tol: f64, out: &mut impl Write) -> Result<(), CliError> {
    let model = load_model_source(&args.model)?;
    let report = verify_model(&model, tol);
    match args.out {
        VerifyFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &report).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
        VerifyFormat::Text => {
            writeln!(out, "model {} (tolerance {:e})", report.model, report.tolerance)?;
            for c in &report.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                write!(out, "{status}  {:<28} max deviation {:.3e}", c.name, c.max_deviation)?;
                match &c.detail {
                    Some(d) => writeln!(out, "  (worst at {d})")?,
                    None => writeln!(out)?,
                }
            }
        }
    }
    if report.all_passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.failed().map(|c| c.name.as_str()).collect();
        Err(CliError::CheckFailed(format!("failed checks: {}", failed.join(", "))))
    }
}

/// Everything `run` and `sweep` need, parsed and validated.
struct Setup<'m> {
    target: TargetState<'m>,
    probes: ProbeSequence,
    config: InterferometerConfig,
}

impl<'m> Setup<'m> {
    fn parse(model: &'m AnyonModel, args: &SetupArgs) -> Result<Self, CliError> {
        let target = parse_target(model, &args.target, args.normalize)?;
        let mut specs = args
            .probe
            .iter()
            .map(|p| parse_probe(model, p, args.normalize))
            .collect::<Result<Vec<_>, _>>()?;
        let probes = if specs.len() == 1 {
            ProbeSequence::Repeated(specs.remove(0))
        } else {
            ProbeSequence::Each(specs)
        };
        let config = InterferometerConfig {
            t1: splitter(args.t1, args.r1, "--t1/--r1")?,
            t2: splitter(args.t2, None, "--t2")?,
            theta_i: args.theta1,
            theta_ii: args.theta2,
            placement: match args.placement {
                PlacementArg::Below => Placement::Below,
                PlacementArg::Above => Placement::Above,
            },
        };
        Ok(Setup { target, probes, config })
    }

    fn stray(mut self) -> Self {
        self.config = InterferometerConfig {
            t1: stray_splitter(),
            placement: Placement::Below,
            ..self.config
        };
        self
    }

    fn channels(&self) -> Result<Vec<(Charge, Charge, Charge)>, CliError> {
        Ok(decompose_initial(&self.target)?.channels())
    }

    /// The first `n` probes as an explicit list.
    fn probe_list(&self, n: usize) -> Vec<ProbeSpec> {
        (0..n).filter_map(|k| self.probes.probe(k).cloned()).collect()
    }
}

#[derive(Serialize)]
struct ChannelRow {
    a: String,
    a_prime: String,
    e: String,
    factor: Complex64,
}

#[derive(Serialize)]
struct RhoEntry {
    a: String,
    f: String,
    mu: usize,
    a_prime: String,
    nu: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct ConvergenceRow {
    a: String,
    a_prime: String,
    e: String,
    factor: Complex64,
    limit: ChannelLimit,
}

#[derive(Serialize)]
struct CheckSection {
    passed: bool,
    physical: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<ComparisonReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize)]
struct RunReport {
    model: String,
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    placement: Placement,
    tolerance: f64,
    channels: Vec<ChannelRow>,
    rho: Vec<RhoEntry>,
    convergence: Vec<ConvergenceRow>,
    density: DensityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<CheckSection>,
}

fn rho_entries(rho: &PairBasisMatrix<'_>) -> Vec<RhoEntry> {
    let m = rho.model();
    rho.structural_entries()
        .map(|(r, c, z)| RhoEntry {
            a: m.name_of(r.a).to_string(),
            f: m.name_of(r.f).to_string(),
            mu: r.mu,
            a_prime: m.name_of(c.a).to_string(),
            nu: c.mu,
            re: z.re,
            im: z.im,
        })
        .collect()
}

pub fn cmd_run(args: &RunArgs, tol: f64, out: &mut impl Write) -> Result<(), CliError> {
    let model = load_model_source(&args.setup.model)?;
    let mut setup = Setup::parse(&model, &args.setup)?;
    let name = |q: Charge| model.name_of(q).to_string();

    let (mode, n, rho, channels, convergence) = if args.mode.asymptotic {
        let ProbeSequence::Repeated(probe) = &setup.probes else {
            return Err(CliError::Usage("--asymptotic needs a single --probe".into()));
        };
        let (rho, report) = asymptotic_with_tolerance(&setup.target, probe, &setup.config, tol)?;
        let channels = report
            .channels
            .iter()
            .map(|c| ChannelRow {
                a: name(c.a),
                a_prime: name(c.a_prime),
                e: name(c.e),
                factor: match c.limit {
                    ChannelLimit::Retained => Complex64::new(1.0, 0.0),
                    _ => Complex64::default(),
                },
            })
            .collect();
        let convergence = report
            .channels
            .iter()
            .map(|c| ConvergenceRow {
                a: name(c.a),
                a_prime: name(c.a_prime),
                e: name(c.e),
                factor: c.factor,
                limit: c.limit,
            })
            .collect();
        ("asymptotic", None, rho, channels, convergence)
    } else {
        let (mode, n) = match (args.mode.n, args.mode.stray) {
            (Some(n), _) => ("finite", n),
            (None, Some(k)) => {
                setup = setup.stray();
                ("stray", k)
            }
            (None, None) => unreachable!("clap requires one mode flag"),
        };
        let rho = evolve(&setup.target, &setup.probes, &setup.config, n)?;
        let mut channels = Vec::new();
        for (a, ap, e) in setup.channels()? {
            channels.push(ChannelRow {
                a: name(a),
                a_prime: name(ap),
                e: name(e),
                factor: setup.probes.factor(&model, e, &setup.config, n)?,
            });
        }
        (mode, Some(n), rho, channels, Vec::new())
    };

    let density = check_density_matrix(&rho);
    let check = if args.check {
        let physical = density.is_physical(tol);
        let (oracle, note) = match n {
            Some(n) if n <= MAX_ENUMERATION_N => {
                let scenario = Scenario {
                    target: setup.target.clone(),
                    probes: setup.probe_list(n),
                    config: setup.config,
                    n,
                };
                (Some(closed_form_vs_oracle(&scenario)?), None)
            }
            Some(n) => (
                None,
                Some(format!("oracle comparison skipped: N = {n} > {MAX_ENUMERATION_N}")),
            ),
            None => (None, Some("oracle comparison skipped: asymptotic mode".to_string())),
        };
        let agrees = oracle.as_ref().is_none_or(|o| o.max_deviation <= tol);
        Some(CheckSection {
            passed: physical && agrees,
            physical,
            oracle,
            note,
        })
    } else {
        None
    };
    let failure = check.as_ref().filter(|c| !c.passed).map(|c| {
        let mut why = Vec::new();
        if !c.physical {
            why.push("density matrix is not physical".to_string());
        }
        if let Some(o) = c.oracle.as_ref().filter(|o| o.max_deviation > tol) {
            why.push(format!(
                "oracle deviation {:e} exceeds tolerance {:e}",
                o.max_deviation, tol
            ));
        }
        CliError::CheckFailed(why.join("; "))
    });

    match args.out {
        OutFormat::Json => {
            let report = RunReport {
                model: model.name().to_string(),
                mode,
                n,
                placement: setup.config.placement,
                tolerance: tol,
                channels,
                rho: rho_entries(&rho),
                convergence,
                density,
                check,
            };
            serde_json::to_writer_pretty(&mut *out, &report).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
        OutFormat::Csv => {
            let n_label = n.map_or_else(|| "inf".to_string(), |n| n.to_string());
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(SWEEP_HEADER)?;
            for c in &channels {
                w.write_record(channel_record(&n_label, c))?;
            }
            w.flush()?;
            if let Some(c) = &check {
                eprintln!("check: {}", if c.passed { "passed" } else { "failed" });
            }
        }
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

pub const SWEEP_HEADER: [&str; 7] = ["N", "a", "a_prime", "e", "factor_re", "factor_im", "factor_abs"];

fn channel_record(n: &str, c: &ChannelRow) -> [String; 7] {
    [
        n.to_string(),
        c.a.clone(),
        c.a_prime.clone(),
        c.e.clone(),
        format!("{:?}", c.factor.re),
        format!("{:?}", c.factor.im),
        format!("{:?}", c.factor.norm()),
    ]
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut impl Write) -> Result<(), CliError> {
    let model = load_model_source(&args.setup.model)?;
    let mut setup = Setup::parse(&model, &args.setup)?;
    if args.stray {
        setup = setup.stray();
    }
    setup.probes.factor(&model, model.vacuum(), &setup.config, args.n_max)?;
    let channels = setup.channels()?;
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(SWEEP_HEADER)?;
    for n in 0..=args.n_max {
        let label = n.to_string();
        for &(a, ap, e) in &channels {
            let row = ChannelRow {
                a: model.name_of(a).to_string(),
                a_prime: model.name_of(ap).to_string(),
                e: model.name_of(e).to_string(),
                factor: setup.probes.factor(&model, e, &setup.config, n)?,
            };
            w.write_record(channel_record(&label, &row))?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{Cli, Command};
    use clap::Parser;

    fn run(argv: &[&str]) -> (Result<(), CliError>, String) {
        let cli = Cli::try_parse_from(std::iter::once("anyonic").chain(argv.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let res = match cli.command {
            Command::Verify(a) => cmd_verify(&a, 1e-9, &mut buf),
            Command::Run(a) => cmd_run(&a, 1e-9, &mut buf),
            Command::Sweep(a) => cmd_sweep(&a, &mut buf),
        };
        (res, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn verify_builtin_text() {
        let (res, text) = run(&["verify", "--model", "fibonacci"]);
        assert!(res.is_ok());
        assert!(text.starts_with("model fibonacci"));
        assert!(text.lines().skip(1).all(|l| l.starts_with("PASS")));
    }

    #[test]
    fn run_zero_probes_echoes_initial_state() {
        let (res, text) = run(&[
            "run",
            "--model",
            "fibonacci",
            "--target",
            "1:0.6,eps:0.8",
            "--probe",
            "eps",
            "--N",
            "0",
        ]);
        res.unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["mode"], "finite");
        let rho = v["rho"].as_array().unwrap();
        let get = |a: &str, ap: &str, f: &str| {
            rho.iter()
                .find(|x| x["a"] == a && x["a_prime"] == ap && x["f"] == f)
                .map(|x| x["re"].as_f64().unwrap())
                .unwrap()
        };
        assert!((get("1", "eps", "1") - 0.48).abs() < 1e-15);
        assert!((get("eps", "eps", "1") - 0.64).abs() < 1e-15);
        assert!(get("eps", "eps", "eps").abs() < 1e-15);
    }

    #[test]
    fn asymptotic_rejects_probe_lists() {
        let (res, _) = run(&[
            "run",
            "--model",
            "semion",
            "--target",
            "1:1",
            "--probe",
            "s",
            "--probe",
            "s",
            "--asymptotic",
        ]);
        assert_eq!(res.unwrap_err().exit_code(), 2);
    }

    #[test]
    fn sweep_needs_enough_probes() {
        let (res, _) = run(&[
            "sweep", "--model", "semion", "--target", "1:1", "--probe", "s", "--probe", "s", "--N-max", "3",
        ]);
        assert!(matches!(res.unwrap_err(), CliError::Interferometry(_)));
    }
}
