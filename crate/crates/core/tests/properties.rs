use num_rational::BigRational;
use proptest::prelude::*;

use g2re_core::qboson::{Flavor, Op};
use g2re_core::scalar::{sc, Point, Scalar, Var};

fn term() -> impl Strategy<Value = Scalar> {
    (-3i64..=3, -2i32..=3, 0i64..=2).prop_map(|(c, e, f)| {
        Scalar::from_i64(c).mul(&Scalar::v_pow(e)).mul(&Scalar::var(Var::Z).powi(f).unwrap())
    })
}

fn poly() -> impl Strategy<Value = Scalar> {
    prop::collection::vec(term(), 1..4).prop_map(|ts| ts.iter().fold(Scalar::zero(), |a, t| a.add(t)))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (poly(), poly()).prop_filter_map("zero denominator", |(n, d)| n.div(&d).ok())
}

fn word(fl: Flavor) -> impl Strategy<Value = Op> {
    (prop::collection::vec(0usize..3, 0..5), -3i64..=3).prop_map(move |(ls, c)| {
        let letters = [Op::a_plus(fl), Op::a_minus(fl), Op::k(fl)];
        ls.iter().fold(Op::scalar(fl, Scalar::from_i64(c)), |w, &i| w.compose(&letters[i]).unwrap())
    })
}

fn op(fl: Flavor) -> impl Strategy<Value = Op> {
    prop::collection::vec(word(fl), 1..3).prop_map(move |ws| ws.iter().fold(Op::zero(fl), |a, w| a.add(w).unwrap()))
}

fn point() -> impl Strategy<Value = Point> {
    (2i64..40, 2i64..40, 1i64..30, 1i64..30).prop_map(|(a, b, c, d)| {
        Point::new().with(Var::V, BigRational::new(a.into(), b.into())).with(Var::Z, BigRational::new(c.into(), d.into()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn canonical_text_round_trip(a in scalar()) {
        prop_assert_eq!(sc(&a.to_string()), a);
    }

    #[test]
    fn evaluation_is_a_ring_map(a in scalar(), b in scalar(), p in point()) {
        if let (Ok(x), Ok(y)) = (a.eval(&p), b.eval(&p)) {
            prop_assert_eq!(a.add(&b).eval(&p).unwrap(), &x + &y);
            prop_assert_eq!(a.mul(&b).eval(&p).unwrap(), &x * &y);
        }
    }

    #[test]
    fn composition_is_associative(a in op(Flavor::One), b in op(Flavor::One), c in op(Flavor::One)) {
        let l = a.compose(&b).unwrap().compose(&c).unwrap();
        let r = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn composition_matches_fock_action(a in op(Flavor::Three), b in op(Flavor::Three), n in 0u32..6) {
        // (ab)|n> = a(b|n>)
        let direct = a.compose(&b).unwrap().apply_to_state(n);
        let mut nested = std::collections::BTreeMap::new();
        for (m, c) in b.apply_to_state(n) {
            for (k, d) in a.apply_to_state(m) {
                let e: &mut Scalar = nested.entry(k).or_insert_with(Scalar::zero);
                *e = e.add(&c.mul(&d));
            }
        }
        nested.retain(|_, c: &mut Scalar| !c.is_zero());
        prop_assert_eq!(direct, nested);
    }
}
