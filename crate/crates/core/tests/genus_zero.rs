use vlike_core::genus_zero::{
    check_all_constraints, check_calibration_homogeneity, check_orthogonality, check_principal_hierarchy,
    euler_lagrange_residual, FrobeniusPotential, GenusZeroData, POTENTIAL_NAMES,
};
use vlike_core::report::{Status, Verified};

#[test]
fn constraints_hold_for_shipped_potentials() {
    for name in POTENTIAL_NAMES {
        let p = FrobeniusPotential::builtin(name).unwrap();
        let data = GenusZeroData::build(p, 8, 8).unwrap();
        assert!(data.verified_degree() >= 6);
        for r in check_all_constraints(&data, 3) {
            assert_eq!(r.status, Status::Pass, "{name}: {r:?}");
            assert!(matches!(r.verified, Verified::Degree(d) if d >= 6));
        }
    }
}

#[test]
fn calibration_properties() {
    for name in POTENTIAL_NAMES {
        let p = FrobeniusPotential::builtin(name).unwrap();
        assert!(p.check_wdvv().passed());
        assert!(p.check_quasi_homogeneity().passed());
        let data = GenusZeroData::build(p, 5, 6).unwrap();
        let cal = &data.calibration;
        assert!(check_orthogonality(&data.potential, cal, cal.k_max() - 1).passed());
        assert!(check_calibration_homogeneity(&data.potential, cal, 4).passed());
        for r in euler_lagrange_residual(cal, &data.v_top, 5, 6) {
            assert!(r.is_zero(), "{name}: {:?}", r.nonzero_terms_up_to(6));
        }
        let ph = check_principal_hierarchy(&data.potential, cal, &data.v_top, 5, 6);
        assert!(ph.passed(), "{name}: {ph:?}");
    }
}

#[test]
fn perturbed_operator_violates_constraint() {
    use vlike_core::exact::{HalfInt, RationalMatrix};
    use vlike_core::genus_zero::check_genus_zero_constraint;
    use vlike_core::lie::Family;

    let p = FrobeniusPotential::builtin("dim1").unwrap();
    let data = GenusZeroData::build(p, 6, 6).unwrap();
    let fam = Family::new(data.spectrum.clone(), 6);
    let mut op = fam.l(1, 0).unwrap().op;
    op.add_term(HalfInt::from_twice(-3), HalfInt::from_twice(-1), &RationalMatrix::identity(1))
        .unwrap();
    let r = check_genus_zero_constraint(&data, &op, "perturbed L_(1,0)");
    assert_eq!(r.status, Status::Fail);
}
