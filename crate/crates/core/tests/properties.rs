use proptest::prelude::*;

use smms_compare::expr::Expr;
use smms_compare::modelspace::{ball_volume_model, volume_constant_i};
use smms_compare::norms::curvature_norm_pow;
use smms_compare::scenarios::{Family, ScenarioSpec};
use smms_compare::theorems::{check_mc_i, CheckContext};
use smms_compare::{parse, ModelParams, NormSpec, QuadratureSpec};

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("r".to_string()),
        (-3.0..3.0f64).prop_map(|c| format!("({c:.3})")),
        Just("pi".to_string()),
    ]
}

// Expressions that stay finite and smooth for r in [0.2, 2].
fn smooth_expr() -> impl Strategy<Value = String> {
    leaf().prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) * ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) / (2 + sin({b}))")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("tanh({a})")),
            inner.clone().prop_map(|a| format!("exp(tanh({a}))")),
            inner.clone().prop_map(|a| format!("sqrt(1 + ({a})^2)")),
            inner.clone().prop_map(|a| format!("log(2 + cos({a}))")),
            inner.clone().prop_map(|a| format!("sinh(tanh({a}))")),
            inner.clone().prop_map(|a| format!("cosh(sin({a}))")),
            inner.clone().prop_map(|a| format!("-({a})^3")),
            inner.prop_map(|a| format!("(1 + ({a})^2)^0.5")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn jets_match_finite_differences(text in smooth_expr(), r in 0.2..2.0f64) {
        let e = parse(&text).unwrap();
        let j = e.eval_jet2(r).unwrap();
        let h = 1e-5;
        let (fp, fm) = (e.eval(r + h).unwrap(), e.eval(r - h).unwrap());
        let d1 = (fp - fm) / (2.0 * h);
        let d2 = (fp - 2.0 * j.value + fm) / (h * h);
        let scale = 1.0 + j.value.abs();
        prop_assert!((j.d1 - d1).abs() <= 1e-6 * (scale + j.d1.abs()), "{text}: d1 {} vs {d1}", j.d1);
        prop_assert!((j.d2 - d2).abs() <= 1e-4 * (scale + j.d2.abs()), "{text}: d2 {} vs {d2}", j.d2);
    }

    #[test]
    fn printing_round_trips(text in smooth_expr()) {
        let e: Expr = parse(&text).unwrap();
        let again = parse(&e.to_string()).unwrap();
        prop_assert_eq!(&again, &e);
        prop_assert_eq!(again.to_string(), e.to_string());
    }

    #[test]
    fn sum_of_equal_terms_doubles_exactly(text in smooth_expr(), r in 0.2..2.0f64) {
        let e = parse(&text).unwrap();
        let twice = parse(&format!("({text}) + ({text})")).unwrap();
        let (a, b) = (e.eval_jet2(r).unwrap(), twice.eval_jet2(r).unwrap());
        prop_assert_eq!((b.value, b.d1, b.d2), (2.0 * a.value, 2.0 * a.d1, 2.0 * a.d2));
    }

    #[test]
    fn scenario_specs_round_trip(n in 2u32..=6, fam in 0usize..7, v in -2.0..2.0f64) {
        let family = Family::ALL[fam];
        let key = family.defaults().last().unwrap().0;
        let spec = ScenarioSpec::new(family, n).with(key, v);
        prop_assert_eq!(ScenarioSpec::parse(&spec.to_string(), 3).unwrap(), spec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn volumes_are_additive(fam in 0usize..7, n in 2u32..=4, r1 in 0.1..1.2f64, dr in 0.05..1.0f64) {
        let space = ScenarioSpec::new(Family::ALL[fam], n).build().unwrap();
        let quad = QuadratureSpec::default();
        let r2 = (r1 + dr).min(space.r_max());
        let whole = space.ball_volume(r2, &quad).unwrap();
        let parts = space.ball_volume(r1, &quad).unwrap() + space.annulus_volume(r1, r2, &quad).unwrap();
        prop_assert!((whole - parts).abs() <= 1e-9 * whole, "{whole} vs {parts}");
    }

    #[test]
    fn excess_grows_with_h(fam in 0usize..7, n in 2u32..=4, r in 0.05..2.5f64, h1 in -2.0..2.0f64, dh in 0.0..1.0f64) {
        let space = ScenarioSpec::new(Family::ALL[fam], n).build().unwrap();
        let r = r.min(space.r_max());
        let lo = space.curvature(h1, r).unwrap().excess;
        let hi = space.curvature(h1 + dh, r).unwrap().excess;
        prop_assert!(lo <= hi, "{lo} > {hi}");
    }

    #[test]
    fn norm_grows_with_radius(fam in 0usize..7, r1 in 0.2..1.4f64, dr in 0.0..0.6f64, h in -1.0..1.0f64) {
        let space = ScenarioSpec::new(Family::ALL[fam], 3).build().unwrap();
        let quad = QuadratureSpec::default();
        let norm = |r: f64| curvature_norm_pow(&space, &NormSpec::new(2.0, h, 0.0, r), &quad).unwrap();
        let (a, b) = (norm(r1), norm(r1 + dr));
        // Each side carries the quadrature error bound.
        let slack = 2.0 * 4.0 * std::f64::consts::PI * (quad.abs_tol + quad.rel_tol * b);
        prop_assert!(a <= b + slack, "{a} > {b}");
    }

    #[test]
    fn weighted_model_volume_is_sandwiched(n in 2u32..=4, h in -1.0..1.0f64, a in 0.0..1.0f64, r in 0.05..1.5f64) {
        let quad = QuadratureSpec::default();
        let v = ball_volume_model(&ModelParams::new(n, h, 0.0).unwrap(), r, &quad).unwrap();
        let va = ball_volume_model(&ModelParams::new(n, h, a).unwrap(), r, &quad).unwrap();
        prop_assert!(v <= va * (1.0 + 1e-12) && va <= (a * r).exp() * v * (1.0 + 1e-12));
    }

    #[test]
    fn volume_constant_grows_with_radius(n in 2u32..=4, dp in 0.2..2.0f64, a in 0.0..1.0f64, r1 in 0.2..1.2f64, dr in 0.0..0.3f64) {
        let quad = QuadratureSpec::default();
        let p = 0.5 * n as f64 + dp;
        let c1 = volume_constant_i(n, p, 0.0, a, r1, &quad).unwrap();
        let c2 = volume_constant_i(n, p, 0.0, a, r1 + dr, &quad).unwrap();
        prop_assert!(c1 <= c2 * (1.0 + 1e-12));
    }

    #[test]
    fn satisfied_iff_margin_within_tolerance(eps in 0.0..0.3f64, p in 1.6..3.0f64, h in -1.0..1.0f64, r in 0.3..1.5f64) {
        let space = ScenarioSpec::new(Family::Wobble, 3).with("eps", eps).build().unwrap();
        let ctx = CheckContext::default();
        for rep in check_mc_i(&ctx, &space, p, h, eps, r).unwrap() {
            prop_assert_eq!(rep.satisfied, rep.margin >= -rep.check_tol);
            prop_assert!(rep.satisfied, "{:?}", rep);
        }
    }
}
