use std::time::Instant;

use vlike_core::hodge::{
    dim1_closed_form, hodge_operator_explicit, verify_dim1_closed_form, verify_hodge_virasoro, verify_two_paths,
    SigmaMonomial,
};
use vlike_core::lie::Family;
use vlike_core::report::CheckRecord;
use vlike_core::spectrum::catalog;

fn assert_all(records: &[CheckRecord]) {
    assert!(!records.is_empty());
    for r in records {
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn hodge_virasoro_relations_dim1() {
    let fam = Family::new(catalog("dim1").unwrap(), 12);
    let start = Instant::now();
    for m in -1..=2 {
        for n in m + 1..=2 {
            assert_all(&verify_hodge_virasoro(&fam, m, n, 2, 2));
        }
    }
    eprintln!("hodge virasoro dim1: {:?}", start.elapsed());
}

#[test]
fn hodge_virasoro_relations_a2() {
    let fam = Family::new(catalog("a2").unwrap(), 12);
    for (m, n) in [(-1, 0), (-1, 1), (0, 1), (1, 2)] {
        assert_all(&verify_hodge_virasoro(&fam, m, n, 2, 2));
    }
}

#[test]
fn explicit_agrees_with_conjugation() {
    for name in ["dim1", "a2", "p1"] {
        let fam = Family::new(catalog(name).unwrap(), 12);
        for n in -1..=2 {
            assert_all(&verify_two_paths(&fam, n, 2, 2));
        }
    }
}

#[test]
fn closed_form_on_dim1() {
    let fam = Family::new(catalog("dim1").unwrap(), 12);
    for n in 0..=2 {
        assert_all(&verify_dim1_closed_form(&fam, n, 2, 2));
    }
}

#[test]
fn closed_form_degree_bound() {
    // no σ-monomial of degree above n + 1 survives
    let c = dim1_closed_form(0, 3, 2, 8).unwrap();
    assert!(c.keys().all(|m| m.degree() <= 1));
    assert!(c.contains_key(&SigmaMonomial(vec![2])));
}

#[test]
fn explicit_a2_has_sigma1_part() {
    let fam = Family::new(catalog("a2").unwrap(), 10);
    let e = hodge_operator_explicit(&fam, 0, 2, 2).unwrap();
    assert!(e.part(&SigmaMonomial(vec![1])).is_some());
}
