use vlike_core::boson::OperatorWithValidity;
use vlike_core::exact::{int, rat};
use vlike_core::spectrum::catalog;
use vlike_core::stress_tensor::virasoro_like;

#[test]
fn classical_bracket_dim1() {
    let s = catalog("dim1").unwrap();
    let w = 8;
    let l1 = OperatorWithValidity::exact(virasoro_like(&s, 1, 0, w).unwrap());
    let lm1 = OperatorWithValidity::exact(virasoro_like(&s, -1, 0, w).unwrap());
    let l0 = OperatorWithValidity::exact(virasoro_like(&s, 0, 0, w).unwrap());
    let c = l1.commutator(&lm1).unwrap();
    let rhs = l0.scale(&int(2));
    let radius = c.exact_radius;
    assert!(radius >= 6);
    assert_eq!(c.equal_within(&rhs, radius).unwrap(), None);
}

#[test]
fn central_term_of_l12() {
    for name in ["dim1", "a2", "p1"] {
        let s = catalog(name).unwrap();
        let l = s.dim() as i64;
        let a = OperatorWithValidity::exact(virasoro_like(&s, 1, 1, 8).unwrap());
        let b = OperatorWithValidity::exact(virasoro_like(&s, -1, 0, 8).unwrap());
        let c = a.commutator(&b).unwrap();
        assert!(c.op.restrict(c.exact_radius).is_empty(), "{name}");
        assert_eq!(c.op.constant(), &(rat(-1, 2) * int(l)), "{name}");
    }
}

use num_traits::Zero;
use proptest::prelude::*;
use vlike_core::boson::{DiffOperator, QuadraticOperator, TimeVar};
use vlike_core::exact::Rational;

fn two_block_form(l: usize, eta_inv: &vlike_core::exact::RationalMatrix, k: u32, cap: u32) -> DiffOperator {
    let mut d = DiffOperator::default();
    for a in 0..l {
        for m in 0..=cap {
            if m + 2 * k - 1 <= cap {
                d.add_first_order(TimeVar::new(a, m), TimeVar::new(a, m + 2 * k - 1), int(1));
            }
        }
    }
    for a in 0..l {
        for g in 0..l {
            for m in 0..=(2 * k - 2) {
                let sign = if m % 2 == 0 { rat(-1, 2) } else { rat(1, 2) };
                let c = sign * eta_inv.get(a, g);
                d.add_second_order(TimeVar::new(a, m), TimeVar::new(g, 2 * k - 2 - m), c);
            }
        }
    }
    d
}

#[test]
fn commuting_generators_in_differential_form() {
    for name in ["dim1", "a2", "p1"] {
        let s = catalog(name).unwrap();
        let w = 9;
        for k in 1..=2u32 {
            let built = virasoro_like(&s, 2 * k as i64 - 1, k as usize, w).unwrap().to_diff().unwrap();
            let expected = two_block_form(s.dim(), s.eta_inv().unwrap(), k, w);
            assert_eq!(built.restrict(w).first_difference(&expected), None, "{name} k={k}");
        }
    }
}

#[test]
fn string_operator_dictionary() {
    for name in ["dim1", "a2"] {
        let s = catalog(name).unwrap();
        let w = 6;
        let d = virasoro_like(&s, -1, 0, w).unwrap().to_diff().unwrap();
        let mut expected = DiffOperator::default();
        for a in 0..s.dim() {
            for k in 0..w {
                expected.add_first_order(TimeVar::new(a, k + 1), TimeVar::new(a, k), int(1));
            }
            for b in 0..s.dim() {
                let c = s.eta().get(a, b) * rat(1, 2);
                expected.add_multiplication(TimeVar::new(a, 0), TimeVar::new(b, 0), c);
            }
        }
        assert_eq!(d.first_difference(&expected), None, "{name}");
        assert!(d.constant.is_zero());
    }
}

fn generator(name: &str, idx: usize, w: u32) -> QuadraticOperator {
    let pairs = [(-1, 0), (0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)];
    let (m, k) = pairs[idx % pairs.len()];
    virasoro_like(&catalog(name).unwrap(), m, k, w).unwrap()
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| rat(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn jacobi_identity(which in 0usize..3, i in 0usize..9, j in 0usize..9, k in 0usize..9) {
        let name = ["dim1", "a2", "p1"][which];
        let w = 10;
        let [a, b, c] = [i, j, k].map(|x| OperatorWithValidity::exact(generator(name, x, w)));
        let t1 = a.commutator(&b).unwrap().commutator(&c).unwrap();
        let t2 = b.commutator(&c).unwrap().commutator(&a).unwrap();
        let t3 = c.commutator(&a).unwrap().commutator(&b).unwrap();
        let sum = t1.add(&t2).unwrap().add(&t3).unwrap();
        let zero = OperatorWithValidity::exact(QuadraticOperator::zero(catalog(name).unwrap(), w));
        let r = sum.exact_radius;
        prop_assert!(r >= 2);
        prop_assert_eq!(sum.equal_within(&zero, r).unwrap(), None);
    }

    #[test]
    fn bilinear_and_antisymmetric(i in 0usize..9, j in 0usize..9, x in small_rational(), y in small_rational()) {
        let w = 8;
        let a = OperatorWithValidity::exact(generator("a2", i, w));
        let b = OperatorWithValidity::exact(generator("a2", j, w));
        let ab = a.commutator(&b).unwrap();
        let ba = b.commutator(&a).unwrap();
        let r = ab.exact_radius;
        prop_assert_eq!(ab.add(&ba).unwrap().equal_within(&ab.scale(&int(0)), r).unwrap(), None);
        let lhs = a.scale(&x).commutator(&b.scale(&y)).unwrap();
        prop_assert_eq!(lhs.equal_within(&ab.scale(&(&x * &y)), r).unwrap(), None);
    }

    #[test]
    fn central_term_only_at_opposite_levels(i in 0usize..9, j in 0usize..9) {
        let w = 8;
        let pairs = [-1i64, 0, 1, 1, 2, 2, 3, 3, 3];
        let a = OperatorWithValidity::exact(generator("dim1", i, w));
        let b = OperatorWithValidity::exact(generator("dim1", j, w));
        let c = a.commutator(&b).unwrap();
        if pairs[i] + pairs[j] != 0 {
            prop_assert!(c.op.constant().is_zero());
        }
    }
}
