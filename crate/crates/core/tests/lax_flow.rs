use operad_core::dynamics::{conjugation_oracle, integrate, trace_power, LaxSystem, ObserverRegistry};
use operad_core::oscillator::{self, OscillatorParams};
use operad_core::{AlgebraSpec, MultiOp, Variance};

fn generator() -> MultiOp<f64> {
    MultiOp::new(2, 1, Variance::Endo, vec![0.25, -1.0, 0.5, -0.25]).unwrap()
}

fn endpoint_error(l0: &MultiOp<f64>, dt: f64) -> f64 {
    let sys = LaxSystem::new(generator(), l0.clone(), dt, 1.0).unwrap();
    let end = integrate(&sys, &[], |_| Ok(())).unwrap();
    end.l.sub(&conjugation_oracle(&generator(), l0, 1.0).unwrap()).unwrap().norm()
}

#[test]
fn isospectral_drift_over_ten_time_units() {
    let l0 = MultiOp::new(2, 1, Variance::Endo, vec![1.0, 2.0, 2.0, -1.0]).unwrap();
    let sys = LaxSystem::new(generator(), l0.clone(), 1e-3, 10.0).unwrap();
    let obs = ObserverRegistry::standard(&sys)
        .select(&["trace1".into(), "trace2".into(), "trace3".into()])
        .unwrap();
    let start: Vec<f64> = (1..=3).map(|k| trace_power(&l0, k).unwrap()).collect();
    let mut worst = 0.0f64;
    integrate(&sys, &obs, |s| {
        for (k, (_, v)) in s.invariants.iter().enumerate() {
            worst = worst.max((v - start[k]).abs());
        }
        Ok(())
    })
    .unwrap();
    assert!(worst <= 1e-8, "drift {worst}");
}

#[test]
fn degree_two_matches_oracle_with_fourth_order_convergence() {
    let l0 = MultiOp::<f64>::random(2, 2, Variance::Endo, 17).unwrap();
    assert!(endpoint_error(&l0, 1e-3) <= 1e-6);
    let ratio = endpoint_error(&l0, 0.1) / endpoint_error(&l0, 0.05);
    assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn associativity_is_preserved() {
    let l0 = AlgebraSpec::upper_triangular().op().map(|x| x.to_f64());
    let l0 = MultiOp::new(3, 2, Variance::Endo, l0.coeffs().to_vec()).unwrap();
    let m = MultiOp::<f64>::random(3, 1, Variance::Endo, 3).unwrap();
    let sys = LaxSystem::new(m, l0, 1e-3, 1.0).unwrap();
    let obs = ObserverRegistry::standard(&sys).select(&["assoc_defect".into()]).unwrap();
    integrate(&sys, &obs, |s| {
        assert!(s.invariants[0].1 <= 1e-8, "t={} defect {}", s.t, s.invariants[0].1);
        Ok(())
    })
    .unwrap();
}

#[test]
fn oscillator_conserves_energy_and_trace() {
    let prm = OscillatorParams::new(2.0, 1.0, 0.0, 1, None).unwrap();
    let sys = oscillator::oscillator_system(&prm, 1e-3, 10.0).unwrap();
    let obs = oscillator::observer_registry(&sys, 2.0).select(&oscillator::default_columns(1)).unwrap();
    let end = integrate(&sys, &obs, |s| {
        assert!((s.invariant("H").unwrap() - 2.0).abs() <= 1e-8);
        assert!((s.invariant("trace2").unwrap() - 8.0).abs() <= 1e-8);
        Ok(())
    })
    .unwrap();
    assert_eq!(end.step, 10_000);
}
