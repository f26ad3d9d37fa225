//! Values checked against formulas computed independently of the engine.

use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use qkahler::dirac::{self, build_complex, build_twisted, Operator};
use qkahler::exterior;
use qkahler::hopf::QuantumGroup;
use qkahler::qarith::gauss::{gauss_rat, rat};
use qkahler::qarith::{evaluate, qbinom, qint, Ctx, EvalPoint, EvalValue, QuadExact};
use qkahler::rewrite::NCPoly;

fn pow(q: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

/// `(q^m - q^-m) / (q - q^-1)`.
fn qint_oracle(m: i64, q: &BigRational) -> BigRational {
    if q.is_one() {
        return BigRational::from_integer(m.into());
    }
    (pow(q, m) - pow(q, -m)) / (q - q.recip())
}

fn exact_value(x: EvalValue) -> BigRational {
    match x {
        EvalValue::Exact(g) => {
            assert!(g.im.is_zero());
            g.re
        }
        EvalValue::Float(_) => panic!("expected exact"),
    }
}

fn as_quad(r: &BigRational) -> QuadExact {
    QuadExact::from_gauss(gauss_rat(r.clone()))
}

#[test]
fn quantum_integers_match_closed_form() {
    for q in [rat(1, 2), rat(4, 5), rat(3, 1), rat(1, 1)] {
        let at = EvalPoint::exact(q.clone());
        for m in 0..10 {
            assert_eq!(
                exact_value(evaluate(&qint(m).unwrap(), &at).unwrap()),
                qint_oracle(m, &q)
            );
        }
        for n in 0..8 {
            for r in 0..=n {
                let mut expect = BigRational::one();
                for i in 0..r {
                    expect = expect * qint_oracle(n - i, &q) / qint_oracle(i + 1, &q);
                }
                assert_eq!(
                    exact_value(evaluate(&qbinom(n, r).unwrap(), &at).unwrap()),
                    expect,
                    "[{n} {r}]"
                );
            }
        }
    }
}

#[test]
fn quantum_determinant_is_one() {
    let qg = QuantumGroup::suq2();
    let det = qg.parse("a*d - q*b*c").unwrap();
    assert_eq!(qg.algebra().nf(&det).unwrap(), NCPoly::one());
    let det2 = qg.parse("d*a - q^-1*b*c").unwrap();
    assert_eq!(qg.algebra().nf(&det2).unwrap(), NCPoly::one());
}

#[test]
fn haar_state_on_powers_of_bc() {
    // h((bc)^n) = (-q)^n (1 - q^2) / (1 - q^(2n+2))
    let qg = QuantumGroup::suq2();
    let bc = qg.parse("b*c").unwrap();
    for q in [rat(1, 2), rat(4, 5)] {
        let ctx = Ctx::exact_at(&q);
        let mut p = NCPoly::one();
        for n in 0..=4i64 {
            let expect =
                pow(&-q.clone(), n) * (BigRational::one() - pow(&q, 2)) / (BigRational::one() - pow(&q, 2 * n + 2));
            let h: QuadExact = qg.haar_in(&ctx, &p).unwrap();
            assert!(h.sub(&as_quad(&expect)).is_zero(), "n = {n} at q = {q}");
            p = qg.mul(&p, &bc).unwrap();
        }
    }
}

#[test]
fn exterior_dimensions_are_binomial() {
    for n in 1..=4usize {
        let t = exterior::dims(n).unwrap();
        for a in 0..=n {
            for b in 0..=n {
                assert_eq!(t.by_bidegree[a][b], binomial(n, a) * binomial(n, b));
            }
        }
        assert_eq!(t.by_degree.iter().sum::<usize>(), 1 << (2 * n));
    }
}

#[test]
fn podles_spectrum_in_floating_point() {
    for q0 in [0.5f64, 0.8] {
        let qi = |m: i64| (q0.powi(m as i32) - q0.powi(-(m as i32))) / (q0 - 1.0 / q0);
        let cx = build_complex(&Ctx::float_at(q0), 3).unwrap();
        let table = cx.spectrum(Operator::Dbar, false, q0);
        for row in table.rows.iter().filter(|r| r.value != 0.0) {
            let j = (row.label / 2) as i64;
            let expect = q0 * qi(j) * qi(j + 1);
            assert!(
                (row.value - expect).abs() < 1e-9 * expect,
                "j = {j}: {} vs {expect}",
                row.value
            );
            assert_eq!(row.multiplicity, (4 * j + 2) as usize);
        }
        assert_eq!(table.kernel_dim(), 1);
    }
}

#[test]
fn twisted_euler_characteristic_is_riemann_roch() {
    // On CP^1 the line bundle of degree k has χ = k + 1.
    let ctx = Ctx::exact_at(&rat(1, 2));
    for k in -4..=4i64 {
        let r = dirac::index(&ctx, 3, k).unwrap();
        assert_eq!(r.index_dbar, k + 1, "k = {k}");
    }
}

#[test]
fn curvature_scale_matches_closed_form() {
    let q = rat(4, 5);
    let ctx = Ctx::exact_at(&q);
    for k in -3..=3i64 {
        let theta = build_twisted(&ctx, 2, k).unwrap().curvature_check(0.8).unwrap().theta;
        let expect = pow(&q, 1 - k) * qint_oracle(k, &q);
        assert!(theta.sub(&as_quad(&expect)).is_zero(), "k = {k}");
    }
}
