use num_complex::Complex64;
use quadrature::{
    integrate, integrate_semi_infinite, sum_until_converged, EndpointRule, QuadraturePolicy,
    QuadratureError, TailRule,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pol() -> QuadraturePolicy {
    QuadraturePolicy::default()
}

#[test]
fn cubic_monomial_exact() {
    let est = integrate(|x| x * x, 0.0, 1.0, &pol().with_rel_tol(1e-9)).unwrap();
    assert!((est.value - 1.0 / 3.0).abs() <= 1e-12, "got {}", est.value);
}

#[test]
fn single_panel_is_exact_for_low_degree() {
    // Both the embedded Gauss rule and the full rule integrate degree-9
    // polynomials exactly, so the first panel must already satisfy the
    // tolerance. Any typo in the node or weight tables breaks this.
    let est = integrate(|x| x.powi(9), 0.0, 1.0, &pol()).unwrap();
    assert_eq!(est.subdivisions, 0);
    assert!((est.value - 0.1).abs() <= 1e-15, "got {}", est.value);
}

#[test]
fn high_degree_polynomial_stays_exact() {
    // Degree 22 is the exactness limit of the 15-point rule, so panel values
    // carry no truncation error even when the error estimator forces splits.
    let est = integrate(|x| x.powi(22), 0.0, 1.0, &pol()).unwrap();
    assert!((est.value - 1.0 / 23.0).abs() <= 1e-14, "got {}", est.value);
}

#[test]
fn oscillatory_integrand() {
    let est = integrate(|x| (50.0 * x).cos(), 0.0, 1.0, &pol()).unwrap();
    let exact = 50.0_f64.sin() / 50.0;
    assert!((est.value - exact).abs() <= 1e-10, "got {}", est.value);
}

#[test]
fn inverse_sqrt_left_endpoint() {
    let policy = pol().with_endpoint(EndpointRule::InverseSqrtLeft);
    let est = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &policy).unwrap();
    assert!((est.value - 2.0).abs() <= 1e-10, "got {}", est.value);
}

#[test]
fn inverse_sqrt_right_endpoint() {
    let policy = pol().with_endpoint(EndpointRule::InverseSqrtRight);
    let est = integrate(|x| 1.0 / (1.0 - x).sqrt(), 0.0, 1.0, &policy).unwrap();
    assert!((est.value - 2.0).abs() <= 1e-10, "got {}", est.value);
}

#[test]
fn breakpoint_shortens_kink_refinement() {
    let f = |x: f64| (x - 0.3).abs();
    let exact = 0.3_f64.powi(2) / 2.0 + 0.7_f64.powi(2) / 2.0;

    let with_bp = integrate(f, 0.0, 1.0, &pol().with_breakpoints(vec![0.3])).unwrap();
    assert!((with_bp.value - exact).abs() <= 1e-13);
    assert_eq!(with_bp.subdivisions, 0);

    let without = integrate(f, 0.0, 1.0, &pol()).unwrap();
    assert!((without.value - exact).abs() <= 1e-9);
    assert!(without.subdivisions > with_bp.subdivisions);
}

#[test]
fn complex_valued_integrand() {
    let est = integrate(
        |x| Complex64::new(0.0, x).exp(),
        0.0,
        1.0,
        &pol().with_rel_tol(1e-10),
    )
    .unwrap();
    let exact = Complex64::new(1.0_f64.sin(), 1.0 - 1.0_f64.cos());
    assert!((est.value - exact).norm() <= 1e-12, "got {}", est.value);
}

#[test]
fn semi_infinite_exponential() {
    let policy = pol().with_tail(TailRule::Exponential(1.0));
    let est = integrate_semi_infinite(|x| (-x).exp(), 0.0, &policy).unwrap();
    assert!((est.value - 1.0).abs() <= 1e-10, "got {}", est.value);
}

#[test]
fn semi_infinite_planck_moment() {
    let policy = pol().with_tail(TailRule::Exponential(1.0));
    let est = integrate_semi_infinite(|x| x.powi(3) / x.exp_m1(), 0.0, &policy).unwrap();
    let exact = std::f64::consts::PI.powi(4) / 15.0;
    assert!((est.value - exact).abs() <= 1e-8 * exact, "got {}", est.value);
}

#[test]
fn semi_infinite_fermi_occupation() {
    let t = 4.0;
    let policy = pol().with_tail(TailRule::Exponential(1.0 / t));
    let est = integrate_semi_infinite(|x| 1.0 / ((x / t).exp() + 1.0), 0.0, &policy).unwrap();
    let exact = t * 2.0_f64.ln();
    assert!((est.value - exact).abs() <= 1e-9 * exact, "got {}", est.value);
}

#[test]
fn semi_infinite_power_tail() {
    let policy = pol().with_tail(TailRule::Power(3.0));
    let est = integrate_semi_infinite(|x| x.powi(-3), 1.0, &policy).unwrap();
    assert!((est.value - 0.5).abs() <= 1e-8, "got {}", est.value);
}

#[test]
fn geometric_series() {
    let (sum, n) = sum_until_converged(|l| 0.5_f64.powi(l as i32), &pol(), 1, 1e-12).unwrap();
    assert!((sum - 2.0).abs() <= 1e-11, "got {sum}");
    assert!(n < 60);

    let (sum, _) = sum_until_converged(|l| (-(l as f64)).exp(), &pol(), 1, 1e-12).unwrap();
    let exact = 1.0 / (1.0 - (-1.0_f64).exp());
    assert!((sum - exact).abs() <= 1e-11 * exact, "got {sum}");
}

#[test]
fn series_respects_min_terms() {
    let term = |l: usize| match l {
        0 => 1.0,
        4 => 5.0,
        _ => 0.0,
    };
    let (sum, _) = sum_until_converged(term, &pol(), 6, 1e-12).unwrap();
    assert_eq!(sum, 6.0);
    let (sum_early, _) = sum_until_converged(term, &pol(), 1, 1e-12).unwrap();
    assert_eq!(sum_early, 1.0);
}

#[test]
fn budget_exhaustion_reports_best_value() {
    // Unresolved endpoint singularity under a small budget cannot converge.
    let policy = pol().with_rel_tol(1e-10).with_max_subdivisions(8);
    let err = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &policy).unwrap_err();
    match err {
        QuadratureError::BudgetExhausted { value_norm, err_est } => {
            assert!(value_norm > 1.0 && value_norm < 2.5);
            assert!(err_est > 0.0);
        }
        other => panic!("expected BudgetExhausted, got {other:?}"),
    }
}

#[test]
fn plateau_acceptance_keeps_best_effort_on_exhaustion() {
    // A tiny high-frequency ripple stalls the error estimate near the ripple
    // amplitude, far above an aggressive relative target.
    let noisy = |x: f64| 1.0 + 1e-9 * (1.0e7 * x).sin();
    let strict = pol().with_rel_tol(1e-14).with_max_subdivisions(8);
    assert!(matches!(
        integrate(noisy, 0.0, 1.0, &strict),
        Err(QuadratureError::BudgetExhausted { .. })
    ));
    let est = integrate(noisy, 0.0, 1.0, &strict.with_plateau(1e-6, 0.0)).unwrap();
    assert!((est.value - 1.0).abs() <= 1e-7, "got {}", est.value);
    assert!(est.err_est <= 1e-6);
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(matches!(
        integrate(|x| x, 0.0, 1.0, &pol().with_rel_tol(0.5)),
        Err(QuadratureError::InvalidPolicy(_))
    ));
    assert!(matches!(
        integrate(|x| x, 0.0, 1.0, &pol().with_rel_tol(0.0)),
        Err(QuadratureError::InvalidPolicy(_))
    ));
    assert!(matches!(
        integrate(|x| x, 0.0, 1.0, &pol().with_max_subdivisions(4)),
        Err(QuadratureError::InvalidPolicy(_))
    ));
    assert!(matches!(
        integrate(|x| x, 1.0, 1.0, &pol()),
        Err(QuadratureError::InvalidInterval { .. })
    ));
    assert!(matches!(
        integrate(|x| x, 2.0, 1.0, &pol()),
        Err(QuadratureError::InvalidInterval { .. })
    ));
    assert!(matches!(
        integrate_semi_infinite(|x| x, 0.0, &pol()),
        Err(QuadratureError::InvalidPolicy(_))
    ));
    assert!(matches!(
        integrate_semi_infinite(
            |x| x,
            0.0,
            &pol()
                .with_tail(TailRule::Exponential(1.0))
                .with_endpoint(EndpointRule::InverseSqrtRight)
        ),
        Err(QuadratureError::InvalidPolicy(_))
    ));
    assert!(matches!(
        integrate(|x| x, 0.0, 1.0, &pol().with_tail(TailRule::Exponential(-1.0))),
        Err(QuadratureError::InvalidPolicy(_))
    ));
    assert!(matches!(
        sum_until_converged(|_| 1.0, &pol(), 1, 2.0),
        Err(QuadratureError::InvalidPolicy(_))
    ));
}

#[test]
fn non_finite_evaluation_is_an_error() {
    let err = integrate(
        |x| if x > 0.7 { f64::INFINITY } else { x },
        0.0,
        1.0,
        &pol(),
    )
    .unwrap_err();
    assert!(matches!(err, QuadratureError::NonFinite { x } if x > 0.7));
}

#[test]
fn results_are_bitwise_deterministic() {
    let run = || {
        integrate(
            |x| (37.0 * x).sin() / (1.0 + x * x),
            0.0,
            3.0,
            &pol().with_rel_tol(1e-10),
        )
        .unwrap()
        .value
    };
    assert_eq!(run().to_bits(), run().to_bits());

    let zrun = || {
        integrate(
            |x| Complex64::new((11.0 * x).cos(), (7.0 * x).sin()),
            0.0,
            2.0,
            &pol().with_rel_tol(1e-10),
        )
        .unwrap()
        .value
    };
    let (a, b) = (zrun(), zrun());
    assert_eq!(a.re.to_bits(), b.re.to_bits());
    assert_eq!(a.im.to_bits(), b.im.to_bits());
}

#[test]
fn error_estimates_are_conservative_on_random_smooth_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut ok = 0;
    let total = 40;
    for _ in 0..total {
        let a: f64 = rng.gen_range(0.2..3.0);
        let b: f64 = rng.gen_range(1.0..20.0);
        let c: f64 = rng.gen_range(-2.0..2.0);
        let lo = 0.0;
        let hi: f64 = rng.gen_range(0.5..2.5);
        let exact = a * ((b * lo).cos() - (b * hi).cos()) / b + c * (hi.powi(4) - lo.powi(4)) / 4.0;
        let est = integrate(
            |x| a * (b * x).sin() + c * x.powi(3),
            lo,
            hi,
            &pol().with_rel_tol(1e-6),
        )
        .unwrap();
        let true_err = (est.value - exact).abs();
        if est.err_est >= true_err || true_err < 1e-14 {
            ok += 1;
        }
    }
    assert!(ok * 100 >= total * 95, "only {ok}/{total} conservative");
}
