mod common;

use common::{gaussian, tripoly};
use moutard_core::exactpoly::{poly, RationalField, TriPoly, UniPoly, Var};
use num_complex::Complex64;
use proptest::prelude::*;

fn var() -> impl Strategy<Value = Var> {
    prop_oneof![Just(Var::Z), Just(Var::W), Just(Var::T)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in tripoly(), b in tripoly(), c in tripoly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &TriPoly::one(), a.clone());
    }

    #[test]
    fn leibniz(a in tripoly(), b in tripoly(), v in var()) {
        let lhs = (&a * &b).derive(v);
        let rhs = &(&a.derive(v) * &b) + &(&a * &b.derive(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn antiderivative_inverts_derivative(a in tripoly(), v in var()) {
        prop_assert_eq!(a.antiderive(v).derive(v), a);
    }

    #[test]
    fn conjugation_matches_evaluation(
        a in tripoly(),
        x in -2.0f64..2.0, y in -2.0f64..2.0, t in -2.0f64..2.0,
    ) {
        let z = Complex64::new(x, y);
        let direct = a.eval(z, t).conj();
        let via = a.conj_involution().eval(z, t);
        prop_assert!((direct - via).norm() <= 1e-12 * direct.norm().max(1.0));
        prop_assert_eq!(a.conj_involution().conj_involution(), a);
    }

    #[test]
    fn text_roundtrip(a in tripoly()) {
        prop_assert_eq!(TriPoly::from_text(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn rational_equivalence_is_an_equivalence(
        n in tripoly(),
        d in tripoly().prop_filter("nonzero", |p| !p.is_zero()),
        k1 in tripoly().prop_filter("nonzero", |p| !p.is_zero()),
        k2 in tripoly().prop_filter("nonzero", |p| !p.is_zero()),
    ) {
        let a = RationalField::new(n.clone(), d.clone()).unwrap();
        let b = RationalField::new(&n * &k1, &d * &k1).unwrap();
        let c = RationalField::new(&n * &k2, &d * &k2).unwrap();
        prop_assert!(a.equivalent(&a));
        prop_assert_eq!(a.equivalent(&b), b.equivalent(&a));
        prop_assert!(a.equivalent(&b) && b.equivalent(&c) && a.equivalent(&c));
        let shifted = RationalField::new(&n + &d, d.clone()).unwrap();
        prop_assert!(!a.equivalent(&shifted));
    }

    #[test]
    fn univariate_division(a in tripoly(), b in tripoly(), c in gaussian()) {
        let pa = UniPoly::from_tripoly(&a.substitute(Var::W, &c).substitute(Var::T, &c), Var::Z).unwrap();
        let pb = UniPoly::from_tripoly(&b.substitute(Var::W, &c).substitute(Var::T, &c), Var::Z).unwrap();
        prop_assume!(!pb.is_zero());
        let (q, r) = pa.div_rem(&pb);
        prop_assert_eq!(&(&q * &pb) + &r, pa);
        prop_assert!(r.is_zero() || r.degree() < pb.degree());
    }
}

#[test]
fn parser_agrees_with_constructors() {
    let p = poly("(z + i w)^2 - 3/2 t");
    let manual = &(&(&TriPoly::z() * &TriPoly::z())
        + &TriPoly::monomial(moutard_core::exactpoly::GaussianRational::from_ratios(0, 1, 2, 1), 1, 1, 0))
        - &(&TriPoly::w() * &TriPoly::w());
    let manual = &manual - &TriPoly::monomial(moutard_core::exactpoly::GaussianRational::from_ratios(3, 2, 0, 1), 0, 0, 1);
    assert_eq!(p, manual);
}
