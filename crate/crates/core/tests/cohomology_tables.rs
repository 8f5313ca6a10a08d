use operad_core::cohomology::{betti_table, is_coboundary, CochainComplex};
use operad_core::coboundary::cup_commutator;
use operad_core::{total_compose, AlgebraSpec, MultiOp, OperadError, Rational, Sign, Variance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn ground_field() {
    let t = betti_table(&AlgebraSpec::ground_field(), 3).unwrap();
    assert_eq!(t.cohomology_dims(), vec![1, 0, 0, 0]);
}

#[test]
fn dual_numbers() {
    let t = betti_table(&AlgebraSpec::dual_numbers(), 2).unwrap();
    assert_eq!(&t.cohomology_dims()[..2], &[2, 1]);
    // 4x2 and 8x4 matrices: ranks 0 and 3.
    assert_eq!(t.rows[0].rank, 0);
    assert_eq!(t.rows[1].rank, 3);
}

#[test]
fn matrix_algebra_is_rigid() {
    let t = betti_table(&AlgebraSpec::matrix_algebra(2), 2).unwrap();
    assert_eq!(t.cohomology_dims(), vec![1, 0, 0]);
}

#[test]
fn base_change_does_not_change_cohomology() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for spec in [AlgebraSpec::dual_numbers(), AlgebraSpec::coordinatewise(2), AlgebraSpec::upper_triangular()] {
        let plain = betti_table(&spec, 2).unwrap().cohomology_dims();
        let scrambled = betti_table(&spec.scrambled(&mut rng).unwrap(), 2).unwrap().cohomology_dims();
        assert_eq!(plain, scrambled, "{}", spec.name);
    }
}

#[test]
fn non_associative_input_is_rejected() {
    let mut mu = AlgebraSpec::dual_numbers().mu;
    // ε·1 gains a component along 1.
    mu[2] = Rational::ONE;
    let spec = AlgebraSpec::new("bent", 2, mu).unwrap();
    assert!(!spec.is_associative());
    assert!(matches!(betti_table(&spec, 2), Err(OperadError::NotAssociative { .. })));
}

#[test]
fn cup_commutator_of_cocycles_has_explicit_preimage() {
    let spec = AlgebraSpec::upper_triangular();
    let mut cx = CochainComplex::from_spec(&spec).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (df, dg) in [(1, 1), (0, 2), (2, 1), (1, 0)] {
        let f = cx.random_cocycle(df, &mut rng).unwrap();
        let g = cx.random_cocycle(dg, &mut rng).unwrap();
        let comm = cup_commutator(cx.context().mu(), &f, &g).unwrap();
        let pre = total_compose(&f, &g).unwrap().signed(Sign::pow(dg as i64));
        assert_eq!(cx.context().coboundary(&pre).unwrap(), comm);
        assert!(is_coboundary(&spec, &comm).unwrap().is_some());
    }
}

#[test]
fn outer_derivation_of_dual_numbers() {
    // D(1) = 0, D(ε) = ε: a cocycle in C¹ that is not a coboundary.
    let d = MultiOp::new(2, 1, Variance::Endo, [0, 0, 0, 1].map(Rational::from_integer).to_vec()).unwrap();
    let spec = AlgebraSpec::dual_numbers();
    let cx = CochainComplex::from_spec(&spec).unwrap();
    assert!(cx.context().coboundary(&d).unwrap().is_zero());
    assert!(is_coboundary(&spec, &d).unwrap().is_none());
}
