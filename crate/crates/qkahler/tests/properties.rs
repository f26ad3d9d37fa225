//! Randomized algebraic properties.

use num_complex::Complex;
use proptest::prelude::*;

use qkahler::hopf::{QuantumGroup, UElem, UGen};
use qkahler::qarith::gauss::{gauss_rat, rat};
use qkahler::qarith::{evaluate, qbinom, qint, Ctx, EvalPoint, EvalValue, Gauss, QScalar, QuadExact};
use qkahler::rewrite::{NCPoly, Word};

fn gauss(re: (i64, i64), im: (i64, i64)) -> Gauss {
    Complex::new(rat(re.0, re.1), rat(im.0, im.1))
}

fn scalar_strategy(max_exp: i64) -> impl Strategy<Value = QScalar> {
    prop::collection::vec(((-4i64..=4, 1i64..=3), (-2i64..=2, 1i64..=2), -max_exp..=max_exp), 0..4).prop_map(|terms| {
        let mut x = QScalar::zero();
        for (re, im, e) in terms {
            x += &QScalar::monomial(gauss(re, im), e);
        }
        x
    })
}

fn exact(v: EvalValue) -> Gauss {
    match v {
        EvalValue::Exact(g) => g,
        EvalValue::Float(_) => panic!("expected an exact value"),
    }
}

fn words() -> Vec<Word> {
    QuantumGroup::suq2().algebra().normal_words_up_to(3)
}

fn poly_strategy() -> impl Strategy<Value = NCPoly> {
    let n = words().len();
    prop::collection::vec((0..n, -3i64..=3, -2i64..=2), 1..4).prop_map(|terms| {
        let ws = words();
        let mut p = NCPoly::zero();
        for (i, c, e) in terms {
            p.add_term(ws[i].clone(), QScalar::monomial(gauss_rat(rat(c, 1)), 2 * e));
        }
        p
    })
}

fn u_strategy() -> impl Strategy<Value = UElem> {
    prop::collection::vec(prop::sample::select(UGen::ALL.to_vec()), 0..3).prop_map(UElem::word)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn qbinom_symmetry_and_pascal(n in 1i64..=12, r in 0i64..=12) {
        prop_assume!(r <= n);
        let b = qbinom(n, r).unwrap();
        prop_assert_eq!(&b, &qbinom(n, n - r).unwrap());
        if r >= 1 && r < n {
            let pascal = &(&QScalar::q_pow(-r) * &qbinom(n - 1, r).unwrap())
                + &(&QScalar::q_pow(n - r) * &qbinom(n - 1, r - 1).unwrap());
            prop_assert_eq!(b, pascal);
        }
    }

    #[test]
    fn qint_invariant_under_inversion(m in 0i64..=12) {
        let x = qint(m).unwrap();
        prop_assert_eq!(x.invert_variable(), x.clone());
        prop_assert_eq!(x.at_one(), gauss_rat(rat(m, 1)));
    }

    #[test]
    fn star_is_an_involution(x in scalar_strategy(6), y in scalar_strategy(6)) {
        prop_assert_eq!(x.star().star(), x.clone());
        prop_assert_eq!((&x * &y).star(), &y.star() * &x.star());
    }

    #[test]
    fn evaluate_is_a_ring_homomorphism(x in scalar_strategy(6), y in scalar_strategy(6), k in 1i64..=4) {
        // odd s-exponents need a square q0
        let at = EvalPoint::exact(rat(k * k, 9));
        let ex = exact(evaluate(&x, &at).unwrap());
        let ey = exact(evaluate(&y, &at).unwrap());
        prop_assert_eq!(exact(evaluate(&(&x * &y), &at).unwrap()), &ex * &ey);
        prop_assert_eq!(exact(evaluate(&(&x + &y), &at).unwrap()), &ex + &ey);
    }

    #[test]
    fn coproduct_is_multiplicative(x in poly_strategy(), y in poly_strategy()) {
        let qg = QuantumGroup::suq2();
        let lhs = qg.coproduct(&qg.mul(&x, &y).unwrap()).unwrap();
        let rhs = qg.tensor_mul(&qg.coproduct(&x).unwrap(), &qg.coproduct(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn counit_and_antipode_respect_products(x in poly_strategy(), y in poly_strategy()) {
        let qg = QuantumGroup::suq2();
        let xy = qg.mul(&x, &y).unwrap();
        prop_assert_eq!(qg.counit(&xy), &qg.counit(&x) * &qg.counit(&y));
        let s = qg.mul(&qg.antipode(&y).unwrap(), &qg.antipode(&x).unwrap()).unwrap();
        prop_assert_eq!(qg.antipode(&xy).unwrap(), s);
        let st = qg.mul(&qg.star(&y).unwrap(), &qg.star(&x).unwrap()).unwrap();
        prop_assert_eq!(qg.star(&xy).unwrap(), st);
    }

    #[test]
    fn actions_compose(x in poly_strategy(), u in u_strategy(), v in u_strategy()) {
        let qg = QuantumGroup::suq2();
        let uv = u.mul(&v);
        let nested = qg.right_action(&u, &qg.right_action(&v, &x).unwrap()).unwrap();
        prop_assert_eq!(nested, qg.right_action(&uv, &x).unwrap());
        let nested = qg.left_leg_action(&v, &qg.left_leg_action(&u, &x).unwrap()).unwrap();
        prop_assert_eq!(nested, qg.left_leg_action(&uv, &x).unwrap());
    }

    #[test]
    fn action_is_a_module_algebra(x in poly_strategy(), y in poly_strategy(), g in prop::sample::select(UGen::ALL.to_vec())) {
        let qg = QuantumGroup::suq2();
        let lhs = qg.act(g, &qg.mul(&x, &y).unwrap()).unwrap();
        let mut rhs = NCPoly::zero();
        for (g1, g2) in g.coproduct() {
            let part = qg.mul(&qg.act(g1, &x).unwrap(), &qg.act(g2, &y).unwrap()).unwrap();
            rhs.add_scaled(&part, &QScalar::one());
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn haar_is_positive(x in poly_strategy(), q in prop::sample::select(vec![(1i64, 2i64), (4, 5)])) {
        prop_assume!(!x.is_zero());
        let qg = QuantumGroup::suq2();
        let ctx = Ctx::exact_at(&rat(q.0, q.1));
        let xx = qg.mul(&qg.star(&x).unwrap(), &x).unwrap();
        let h: QuadExact = qg.haar_in(&ctx, &xx).unwrap();
        prop_assert_eq!(h.real_sign(), 1);
    }
}
