//! Property tests for the surrogate score functions.

use proptest::prelude::*;
use surmax::{LossKind, LossSpec};

fn any_spec() -> impl Strategy<Value = LossSpec> {
    (
        prop_oneof![
            Just(LossKind::Logistic),
            Just(LossKind::PseudoHuber),
            Just(LossKind::Probit)
        ],
        0.2f64..4.0,
    )
        .prop_map(|(kind, a)| LossSpec::new(kind, a).unwrap())
}

/// The probit tail decays like exp(-(a u)^2 / 2); past |a u| ~ 38 its value
/// and derivatives fall below the representable f64 range, so strictness can
/// only be asserted where the outputs are representable.
fn representable(spec: &LossSpec, us: &[f64]) -> bool {
    spec.kind != LossKind::Probit || us.iter().all(|u| (spec.scale() * u).abs() <= 35.0)
}

proptest! {
    /// Strict monotonicity: u1 < u2 implies phi(u1) < phi(u2).
    #[test]
    fn phi_is_strictly_increasing(spec in any_spec(), u1 in -100.0f64..100.0, gap in 1e-6f64..50.0) {
        let u2 = u1 + gap;
        prop_assume!(representable(&spec, &[u1, u2]));
        prop_assert!(spec.eval(u1).value < spec.eval(u2).value);
    }

    /// Strict concavity through the chord inequality. Strictness is asserted
    /// where the curvature gap is resolvable in f64; in the asymptotically
    /// linear tails (gap below value roundoff) the weak inequality is checked
    /// up to floating-point noise.
    #[test]
    fn phi_is_strictly_concave(
        spec in any_spec(),
        u1 in -80.0f64..80.0,
        gap in 1e-3f64..40.0,
        lam in 0.05f64..0.95,
    ) {
        let u2 = u1 + gap;
        prop_assume!(representable(&spec, &[u1, u2]));
        let mid = lam * u1 + (1.0 - lam) * u2;
        let e1 = spec.eval(u1);
        let e2 = spec.eval(u2);
        let em = spec.eval(mid);
        let chord = lam * e1.value + (1.0 - lam) * e2.value;
        let scale = e1.value.abs().max(e2.value.abs()).max(1.0);
        let min_curv = e1.d2.abs().min(e2.d2.abs()).min(em.d2.abs());
        let predicted_gap = 0.5 * min_curv * lam * (1.0 - lam) * gap * gap;
        if predicted_gap > 1e-13 * scale {
            prop_assert!(em.value > chord, "at {u1}..{u2}: {} vs {chord}", em.value);
        } else {
            prop_assert!(em.value >= chord - 1e-13 * scale);
        }
    }

    /// First derivative positive, second negative over the sampled range.
    #[test]
    fn derivative_signs(spec in any_spec(), u in -100.0f64..100.0) {
        prop_assume!(representable(&spec, &[u]));
        let e = spec.eval(u);
        prop_assert!(e.d1 > 0.0, "d1 = {} at {u}", e.d1);
        prop_assert!(e.d2 < 0.0, "d2 = {} at {u}", e.d2);
    }

    /// Growth envelopes: logistic bounded by C(1+|u|) with C covering the
    /// linear tail, pseudo-Huber by C(1+|u|), probit by C(1+u^2).
    #[test]
    fn growth_envelopes(u in -100.0f64..100.0) {
        let logistic = LossSpec::with_default_scale(LossKind::Logistic).eval(u).value;
        prop_assert!(logistic.abs() <= 2.0 * (1.0 + u.abs()));
        let huber = LossSpec::with_default_scale(LossKind::PseudoHuber).eval(u).value;
        prop_assert!(huber.abs() <= 4.0 * (1.0 + u.abs()));
        let probit = LossSpec::with_default_scale(LossKind::Probit).eval(u).value;
        prop_assert!(probit.abs() <= 2.0 * (1.0 + u * u));
    }

    /// y = 0 at x equals y = 1 at -x in all outputs.
    #[test]
    fn obs_loss_reflection(spec in any_spec(), x1 in -3.0f64..3.0, x2 in -3.0f64..3.0,
                           b1 in -3.0f64..3.0, b2 in -3.0f64..3.0) {
        let x = [x1, x2];
        let neg_x = [-x1, -x2];
        let b = [b1, b2];
        let a = surmax::eval_obs_loss(&spec, 0, &x, &b).unwrap();
        let c = surmax::eval_obs_loss(&spec, 1, &neg_x, &b).unwrap();
        prop_assert_eq!(a, c);
    }
}

/// The logistic envelope is genuinely constant-bounded after removing the
/// linear part: |phi(u) - min(0, u)| stays bounded.
#[test]
fn logistic_deviation_from_linear_tail_is_bounded() {
    let spec = LossSpec::with_default_scale(LossKind::Logistic);
    for k in -1000..=1000 {
        let u = k as f64 / 10.0;
        let linear_part = if u < 0.0 { u } else { 0.0 };
        assert!((spec.eval(u).value - linear_part).abs() <= std::f64::consts::LN_2 + 1e-12);
    }
}
