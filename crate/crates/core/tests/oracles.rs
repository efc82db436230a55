//! Generated conditions checked against independently computed references.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use ocgen_core::expansion::lyndon_coefficients_by_expansion;
use ocgen_core::numeric::{
    eval_ncpoly, lie_residual, local_error_norm, matrix_exp, random_operators, scheme_step,
    Coefficient, LIE_PRECONDITION_TOL,
};
use ocgen_core::poly::Family;
use ocgen_core::{
    derivative_term, leading_error, order_conditions, CoeffPoly, Rational, SchemeCoefficients,
    SchemeSpec, Unknown, VerifyError,
};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[test]
fn map_reduce_matches_full_expansion() {
    for (s, m, max_q) in [
        (1, 2, 5),
        (2, 2, 5),
        (3, 2, 5),
        (4, 2, 4),
        (2, 3, 3),
        (3, 3, 3),
    ] {
        let spec = SchemeSpec::new(s, m).unwrap();
        let system = order_conditions(&spec, max_q).unwrap();
        for q in 1..=max_q {
            let block = system.block(q).unwrap();
            let reference = lyndon_coefficients_by_expansion(&spec, q).unwrap();
            assert_eq!(block.len(), reference.len(), "s={s} m={m} q={q}");
            for (cond, (word, poly)) in block.conditions.iter().zip(&reference) {
                assert_eq!(cond.word, *word);
                assert_eq!(cond.poly, *poly, "s={s} m={m} q={q} word={word}");
            }
        }
    }
}

/// With commuting scalar operators every symbol evaluates to 1 and the
/// derivative collapses to `(Σ coefficients)^q − m^q`.
#[test]
fn commuting_image_of_derivative() {
    for (s, m) in [(1, 2), (2, 2), (3, 2), (2, 3)] {
        let spec = SchemeSpec::new(s, m).unwrap();
        let mut total = CoeffPoly::zero();
        for u in spec.unknowns() {
            total = &total + &CoeffPoly::var(u);
        }
        for q in 1..=4 {
            let mut expected = CoeffPoly::one();
            for _ in 0..q {
                expected = &expected * &total;
            }
            let expected = &expected - &CoeffPoly::from_int((m as i64).pow(q as u32));
            assert_eq!(
                derivative_term(&spec, q).unwrap().commutative_image(),
                expected,
                "s={s} m={m} q={q}"
            );
        }
    }
}

/// `S(h) − e^{h(A+B)} = Σ_q h^q/q! · D_q + O(h^{Q+1})` for arbitrary coefficients.
#[test]
fn taylor_series_of_local_error() {
    let spec2 = SchemeSpec::new(3, 2).unwrap();
    let spec3 = SchemeSpec::new(2, 3).unwrap();
    let c2 = SchemeCoefficients::from_f64(&[0.3, -0.45, 0.8], &[0.7, 0.25, -0.1]);
    let c3 = SchemeCoefficients::new(
        vec![Coefficient::Real(0.4), Coefficient::Real(0.35)],
        vec![Coefficient::Real(-0.2), Coefficient::Real(0.9)],
        Some(vec![Coefficient::Real(0.6), Coefficient::Real(0.15)]),
    )
    .unwrap();
    for (spec, coeffs, seed) in [(spec2, c2, 4u64), (spec3, c3, 9)] {
        let ops = random_operators(spec.operators(), 4, seed);
        let h = 0.02;
        let d = ops[0].nrows();
        let sum = ops.iter().fold(DMatrix::zeros(d, d), |acc, o| acc + o);
        let local = scheme_step(&coeffs, &ops, h).unwrap() - matrix_exp(&(sum * h)).unwrap();

        let mut series = DMatrix::<f64>::zeros(d, d);
        let mut factor = 1.0;
        for q in 1..=6 {
            factor *= h / q as f64;
            let (dq, _) = eval_ncpoly(&derivative_term(&spec, q).unwrap(), &coeffs, &ops).unwrap();
            series += dq * factor;
        }
        let gap = (local - series).norm();
        assert!(gap < 1e-13, "m={} gap {gap:e}", spec.operators());
    }
}

fn forest_ruth() -> SchemeCoefficients {
    let theta = 1.0 / (2.0 - 2f64.cbrt());
    SchemeCoefficients::from_f64(
        &[
            theta / 2.0,
            (1.0 - theta) / 2.0,
            (1.0 - theta) / 2.0,
            theta / 2.0,
        ],
        &[theta, 1.0 - 2.0 * theta, theta, 0.0],
    )
}

#[test]
fn fourth_order_scheme_satisfies_generated_conditions() {
    let system = order_conditions(&SchemeSpec::plain(4), 4).unwrap();
    let report = ocgen_core::numeric::check_conditions(&system, &forest_ruth(), 1e-12).unwrap();
    assert!(report.passed(), "max residual {:e}", report.max_residual());

    // and it is not fifth order
    let lead = leading_error(&SchemeSpec::plain(4), 4).unwrap();
    let worst = lead
        .block
        .polys()
        .map(|p| {
            p.eval_with(
                |u| forest_ruth().get(u).map(|c| c.as_complex().re),
                ocgen_core::poly::rational_to_f64,
            )
            .unwrap()
            .abs()
        })
        .fold(0.0, f64::max);
    assert!(worst > 1e-3);

    let ops = random_operators(2, 4, 21);
    let ratio = local_error_norm(&forest_ruth(), &ops, 0.02).unwrap()
        / local_error_norm(&forest_ruth(), &ops, 0.01).unwrap();
    assert!((ratio - 32.0).abs() < 1.5, "{ratio}");
}

#[test]
fn lie_element_identity() {
    let cases = [
        (SchemeSpec::plain(1), SchemeCoefficients::lie_trotter(), 2),
        (SchemeSpec::plain(2), SchemeCoefficients::strang(), 3),
        (SchemeSpec::plain(4), forest_ruth(), 5),
    ];
    for (spec, coeffs, q) in cases {
        for seed in 0..5 {
            let ops = random_operators(2, 4, seed);
            let r = lie_residual(&spec, &coeffs, q, &ops).unwrap();
            assert!(r.relative <= 1e-10, "q={q} seed={seed}: {r:?}");
            assert!(r.lhs_norm > 1e-6, "the leading term should not vanish");
        }
    }
}

#[test]
fn lie_identity_holds_for_three_operators() {
    // e^{A/2} e^{B/2} e^{C} e^{B/2} e^{A/2}; each stage applies A, then B, then C
    let e = |n: i64, d: i64| Coefficient::Exact(rat(n, d));
    let coeffs = SchemeCoefficients::new(
        vec![e(1, 2), e(0, 1), e(1, 2)],
        vec![e(1, 2), e(1, 2), e(0, 1)],
        Some(vec![e(1, 1), e(0, 1), e(0, 1)]),
    )
    .unwrap();
    let spec = SchemeSpec::new(3, 3).unwrap();
    let exact = coeffs.exact_assignment().unwrap();
    for (_, cond) in order_conditions(&spec, 2).unwrap().conditions() {
        assert_eq!(cond.poly.eval(&exact).unwrap(), rat(0, 1), "{}", cond.word);
    }
    for seed in 0..3 {
        let ops = random_operators(3, 4, seed);
        let r = lie_residual(&spec, &coeffs, 3, &ops).unwrap();
        assert!(r.relative <= 1e-10, "{r:?}");
    }
}

/// From degree 5 on, standard brackets contain other Lyndon words, so the
/// condition values are not the bracket coordinates themselves.
#[test]
fn brackets_overlap_from_degree_five() {
    use ocgen_core::words::bracket_expansion;
    let w: ocgen_core::Word = "AAABB".parse().unwrap();
    assert_eq!(
        bracket_expansion(&w)
            .unwrap()
            .coeff(&"AABAB".parse().unwrap()),
        -2
    );
    for q in 2..=4 {
        let words = ocgen_core::words::lyndon_words(ocgen_core::Alphabet::two(), q).unwrap();
        for u in &words {
            let e = bracket_expansion(u).unwrap();
            for v in words.iter().filter(|v| *v != u) {
                assert_eq!(e.coeff(v), 0, "[{u}] contains {v}");
            }
        }
    }
}

#[test]
fn lie_identity_refuses_unmet_preconditions() {
    let ops = random_operators(2, 4, 1);
    let err = lie_residual(
        &SchemeSpec::plain(1),
        &SchemeCoefficients::lie_trotter(),
        3,
        &ops,
    )
    .unwrap_err();
    match err {
        VerifyError::PreconditionViolated { q, residual, .. } => {
            assert_eq!(q, 2);
            assert!(residual > LIE_PRECONDITION_TOL);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn lie_identity_works_over_complex_entries() {
    let ops: Vec<DMatrix<ocgen_core::numeric::Complex64>> = random_operators(2, 3, 8)
        .into_iter()
        .map(|m| m.map(|x| ocgen_core::numeric::Complex64::new(x, 0.5 * x)))
        .collect();
    let r = lie_residual(
        &SchemeSpec::plain(2),
        &SchemeCoefficients::strang(),
        3,
        &ops,
    )
    .unwrap();
    assert!(r.relative <= 1e-10, "{r:?}");
}

/// Two-stage, order-2 schemes: the conditions pin down a one-parameter
/// family `a = (1 − 1/(2β), 1/(2β))`, `b = (β, 1 − β)`.
#[test]
fn second_order_family_solves_the_system() {
    let system = order_conditions(&SchemeSpec::plain(2), 2).unwrap();
    for beta in [rat(1, 1), rat(1, 3), rat(-2, 5), rat(7, 4)] {
        let two = rat(2, 1);
        let one = rat(1, 1);
        let values: BTreeMap<Unknown, Rational> = [
            (Unknown::a(1), &one - &one / (&two * &beta)),
            (Unknown::a(2), &one / (&two * &beta)),
            (Unknown::b(1), beta.clone()),
            (Unknown::b(2), &one - &beta),
        ]
        .into_iter()
        .collect();
        for (_, cond) in system.conditions() {
            assert_eq!(cond.poly.eval(&values).unwrap(), rat(0, 1));
        }
        let coeffs = SchemeCoefficients::from_assignment(2, 2, &values).unwrap();
        assert_eq!(
            coeffs.family(Family::B).unwrap()[0],
            Coefficient::Exact(beta)
        );
    }
}
