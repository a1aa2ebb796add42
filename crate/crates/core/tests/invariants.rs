use anyon_core::interferometry::{
    channel_factor, evolve, probe_factor, BeamSplitter, Direction, InterferometerConfig, Placement, ProbeSequence,
    ProbeSpec, TargetState,
};
use anyon_core::model::{builtin_model, AnyonModel, BUILTIN_NAMES};
use anyon_core::oracle::{check_density_matrix, closed_form_vs_oracle, path_enumeration_factor, Scenario};
use num_complex::Complex64;
use proptest::prelude::*;

#[derive(Clone, Debug)]
struct Setup {
    model: usize,
    target: Vec<(f64, f64)>,
    probes: Vec<Vec<(f64, f64)>>,
    transmission: f64,
    phases: (f64, f64),
    placement: bool,
}

fn setup(max_probes: usize) -> impl Strategy<Value = Setup> {
    let pair = (-1.0f64..1.0, -1.0f64..1.0);
    (
        0usize..BUILTIN_NAMES.len(),
        prop::collection::vec(pair.clone(), 3),
        prop::collection::vec(prop::collection::vec(pair, 6), 1..=max_probes),
        0.0f64..=1.0,
        (0.0f64..6.3, 0.0f64..6.3),
        any::<bool>(),
    )
        .prop_map(|(model, target, probes, transmission, phases, placement)| Setup {
            model,
            target,
            probes,
            transmission,
            phases,
            placement,
        })
}

impl Setup {
    fn model(&self) -> AnyonModel {
        builtin_model(BUILTIN_NAMES[self.model]).unwrap()
    }

    fn target<'m>(&self, m: &'m AnyonModel) -> Option<TargetState<'m>> {
        let amps: Vec<_> = m
            .charges()
            .zip(&self.target)
            .map(|(a, &(x, y))| (a, Complex64::new(x, y)))
            .collect();
        TargetState::normalized(m, amps).ok()
    }

    fn probes(&self, m: &AnyonModel) -> Vec<ProbeSpec> {
        self.probes
            .iter()
            .filter_map(|raw| {
                let comps = m
                    .charges()
                    .flat_map(|b| [(b, Direction::Horizontal), (b, Direction::Vertical)]);
                ProbeSpec::normalized(comps.zip(raw).map(|(k, &(x, y))| (k, Complex64::new(x, y)))).ok()
            })
            .collect()
    }

    fn config(&self) -> InterferometerConfig {
        let t = Complex64::from_polar(self.transmission.sqrt(), self.phases.0);
        let r = Complex64::from_polar((1.0 - self.transmission).sqrt(), self.phases.1);
        let placement = if self.placement {
            Placement::Above
        } else {
            Placement::Below
        };
        InterferometerConfig::new(BeamSplitter::new(t, r).unwrap()).with_placement(placement)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_matrix_stays_physical(s in setup(8)) {
        let m = s.model();
        let Some(target) = s.target(&m) else { return Ok(()) };
        let probes = s.probes(&m);
        let n = probes.len();
        let rho = evolve(&target, &ProbeSequence::Each(probes), &s.config(), n).unwrap();
        let report = check_density_matrix(&rho);
        prop_assert!(report.hermiticity_deviation < 1e-12);
        prop_assert!(report.trace_deviation() < 1e-12);
        prop_assert!(report.min_eigenvalue >= -1e-9, "{}", report.min_eigenvalue);
        prop_assert!(report.populations_deviation(&target) < 1e-12);
    }

    #[test]
    fn closed_form_agrees_with_enumeration(s in setup(6)) {
        let m = s.model();
        let Some(target) = s.target(&m) else { return Ok(()) };
        let probes = s.probes(&m);
        let n = probes.len();
        let report = closed_form_vs_oracle(&Scenario { target, probes, config: s.config(), n }).unwrap();
        prop_assert!(report.max_deviation < 1e-10, "{}", report.max_deviation);
        prop_assert!(report.max_factor_deviation() < 1e-10);
    }

    #[test]
    fn enumerated_factor_equals_product(s in setup(8)) {
        let m = s.model();
        let probes = s.probes(&m);
        let cfg = s.config();
        for e in m.charges() {
            let x = path_enumeration_factor(&m, e, &probes, &cfg.t1, cfg.placement, probes.len()).unwrap();
            let y = channel_factor(&m, e, &probes, &cfg);
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn channel_factors_never_grow(s in setup(8)) {
        let m = s.model();
        let cfg = s.config();
        for probe in s.probes(&m) {
            for e in m.charges() {
                prop_assert!(probe_factor(&m, e, &probe, &cfg).norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn second_splitter_and_phases_do_not_matter(s in setup(5), p2 in 0.0f64..=1.0, th in (-7.0f64..7.0, -7.0f64..7.0)) {
        let m = s.model();
        let Some(target) = s.target(&m) else { return Ok(()) };
        let probes = ProbeSequence::Each(s.probes(&m));
        let n = s.probes(&m).len();
        let base = s.config();
        let mut other = base;
        other.t2 = BeamSplitter::with_transmission_probability(p2).unwrap();
        other.theta_i = th.0;
        other.theta_ii = th.1;
        let x = evolve(&target, &probes, &base, n).unwrap();
        let y = evolve(&target, &probes, &other, n).unwrap();
        prop_assert_eq!(x.matrix(), y.matrix());
    }

    #[test]
    fn repeated_probe_equals_explicit_list(s in setup(1), n in 0usize..10) {
        let m = s.model();
        let Some(target) = s.target(&m) else { return Ok(()) };
        let Some(probe) = s.probes(&m).pop() else { return Ok(()) };
        let cfg = s.config();
        let x = evolve(&target, &ProbeSequence::Repeated(probe.clone()), &cfg, n).unwrap();
        let y = evolve(&target, &ProbeSequence::Each(vec![probe; n]), &cfg, n).unwrap();
        prop_assert!(x.max_abs_diff(&y) < 1e-13);
    }

    #[test]
    fn placement_mirrors_for_horizontal_probes(s in setup(1)) {
        let m = s.model();
        let mirror = m.mirror();
        let above = s.config().with_placement(Placement::Above);
        let below = InterferometerConfig::new(above.t1.swapped());
        for b in m.charges() {
            for e in m.charges() {
                let p = ProbeSpec::definite(b);
                let x = probe_factor(&m, e, &p, &above);
                let y = probe_factor(&mirror, e, &p, &below);
                prop_assert!((x - y).norm() < 1e-14);
            }
        }
    }
}
