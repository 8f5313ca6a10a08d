use operad_core::verify::{case_seed, standard_registry, VerifyConfig};
use operad_core::{OperadError, Rational, Variance};

fn config(cases: usize) -> VerifyConfig {
    VerifyConfig { max_dim: 2, max_degree: 2, cases, ..Default::default() }
}

#[test]
fn every_suite_passes_exact() {
    let report = standard_registry::<Rational>().run(&config(15)).unwrap();
    assert!(report.all_passed(), "{}", report.to_text());
    assert!(report.suites.len() >= 25);
    for s in &report.suites {
        assert_eq!(s.passed + s.skipped, s.cases, "{}", s.name);
        assert!(s.passed > 0, "{} never ran", s.name);
    }
}

#[test]
fn every_suite_passes_float() {
    let report = standard_registry::<f64>().run(&config(15)).unwrap();
    assert!(report.all_passed(), "{}", report.to_text());
}

#[test]
fn reports_are_reproducible() {
    let reg = standard_registry::<Rational>();
    let cfg = VerifyConfig { only: vec!["brace.jacobi".into(), "operad.composition".into()], ..config(10) };
    assert_eq!(reg.run(&cfg).unwrap().to_json(), reg.run(&cfg).unwrap().to_json());
    let other = VerifyConfig { seed: 1, ..cfg.clone() };
    assert_ne!(case_seed(0, "x", 1, Variance::Endo, 0, 0), case_seed(1, "x", 1, Variance::Endo, 0, 0));
    assert!(reg.run(&other).unwrap().all_passed());
}

#[test]
fn corrupted_bracket_sign_breaks_jacobi() {
    let cfg = VerifyConfig { corrupt_sign: true, only: vec!["brace.jacobi".into()], ..config(30) };
    let report = standard_registry::<Rational>().run(&cfg).unwrap();
    let jacobi = report.suite("brace.jacobi").unwrap();
    assert!(jacobi.failed > 0);
    let cx = jacobi.first_failure.as_ref().unwrap();
    assert!(cx.detail.contains("f: deg="), "{}", cx.detail);
    assert!(report.to_text().contains("first counterexample"));
}

#[test]
fn zero_cases_pass_with_warning() {
    let report = standard_registry::<Rational>().run(&config(0)).unwrap();
    assert!(report.all_passed());
    assert!(report.to_text().contains("warning: cases=0"));
}

#[test]
fn config_errors() {
    let reg = standard_registry::<Rational>();
    let bad = VerifyConfig { only: vec!["nope".into()], ..config(1) };
    assert!(matches!(reg.run(&bad), Err(OperadError::Config(_))));
    let zero_dim = VerifyConfig { max_dim: 0, ..config(1) };
    assert!(matches!(reg.run(&zero_dim), Err(OperadError::Config(_))));
}
