use num_traits::{One, Zero};
use proptest::prelude::*;

use vlike_core::exact::{
    binomial, format_rational, parse_rational, rat, solve_linear_exact, HalfInt, Poly, Rational, RationalMatrix,
};
use vlike_core::hodge::SigmaMonomial;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rational(), 0..6).prop_map(Poly::from_coeffs)
}

fn matrix(n: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(small_rational(), n * n).prop_map(move |v| RationalMatrix::new(n, n, v).unwrap())
}

proptest! {
    #[test]
    fn rational_strings_round_trip(r in small_rational(), big in any::<i64>()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r.clone());
        let b = Rational::from_integer(big.into()) / rat(7, 3);
        prop_assert_eq!(parse_rational(&format_rational(&b)).unwrap(), b);
    }

    #[test]
    fn half_integers_round_trip(t in -200i64..200) {
        let h = HalfInt::from_twice(t);
        prop_assert_eq!(HalfInt::parse(&h.to_string()).unwrap(), h);
        prop_assert_eq!(h.to_rational(), rat(t, 2));
        prop_assert_eq!((h + HalfInt::from_twice(1)) - HalfInt::from_twice(1), h);
    }

    #[test]
    fn polynomial_evaluation_is_a_ring_map(p in poly(), q in poly(), x in small_rational()) {
        prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
        prop_assert_eq!((&p + &q).eval(&x), p.eval(&x) + q.eval(&x));
        prop_assert_eq!(p.compose(&q).eval(&x), p.eval(&q.eval(&x)));
    }

    #[test]
    fn product_rule(p in poly(), q in poly()) {
        let lhs = (&p * &q).derivative();
        let rhs = &(&p.derivative() * &q) + &(&p * &q.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn even_and_odd_parts(p in poly(), x in small_rational()) {
        prop_assert!(p.even_part().is_even());
        prop_assert_eq!(&p.even_part() + &p.odd_part(), p.clone());
        prop_assert_eq!(p.reflect().eval(&x), p.eval(&-x));
    }

    #[test]
    fn binomial_polynomial_at_integers(m in -12i64..12, n in 0usize..8) {
        prop_assert_eq!(Poly::x().binom(n).eval(&rat(m, 1)), Rational::from_integer(binomial(m, n as i64)));
    }

    #[test]
    fn pascal_rule(n in -20i64..20, k in 1i64..15) {
        prop_assert_eq!(binomial(n, k), binomial(n - 1, k) + binomial(n - 1, k - 1));
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix(3), b in matrix(3)) {
        let ab = &a * &b;
        prop_assert_eq!(ab.determinant().unwrap(), a.determinant().unwrap() * b.determinant().unwrap());
    }

    #[test]
    fn inverse_and_exact_solve(a in matrix(3), x in prop::collection::vec(small_rational(), 3)) {
        prop_assume!(!a.determinant().unwrap().is_zero());
        let inv = a.inverse().unwrap();
        prop_assert_eq!(&a * &inv, RationalMatrix::identity(3));
        let b: Vec<Rational> = (0..3)
            .map(|i| (0..3).map(|j| a.get(i, j) * &x[j]).sum())
            .collect();
        prop_assert_eq!(solve_linear_exact(&a, &b).unwrap(), x);
    }

    #[test]
    fn overdetermined_systems_checked_for_consistency(a in matrix(2), extra in small_rational()) {
        prop_assume!(!a.determinant().unwrap().is_zero());
        // third row duplicates the first with a shifted right-hand side
        let mut entries: Vec<Rational> = a.entries().to_vec();
        entries.extend([a.get(0, 0).clone(), a.get(0, 1).clone()]);
        let tall = RationalMatrix::new(3, 2, entries).unwrap();
        let shifted = extra + Rational::one();
        let consistent = shifted.is_zero();
        let b = vec![Rational::zero(), Rational::one(), shifted];
        prop_assert_eq!(solve_linear_exact(&tall, &b).is_ok(), consistent);
    }

    #[test]
    fn sigma_monomials_multiply_commutatively(a in prop::collection::vec(1u32..4, 0..3), b in prop::collection::vec(1u32..4, 0..3)) {
        let (mut a, mut b) = (a, b);
        a.sort_unstable();
        b.sort_unstable();
        let (x, y) = (SigmaMonomial(a), SigmaMonomial(b));
        prop_assert_eq!(x.times(&y), y.times(&x));
        prop_assert_eq!(x.times(&y).shift(), x.shift() + y.shift());
    }
}
