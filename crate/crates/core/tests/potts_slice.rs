use lambda_tree::solver::{count_ti_roots, thresholds, weights_from, Regime, CRITICAL_B};
use lambda_tree::LambdaParams;

// On a = b = 0, b_can = x̄ (x̄ + 1) / 2, which equals 9 at x̄ = (√73 − 1) / 2.
#[test]
fn regime_boundary_sits_where_b_can_crosses_nine() {
    let x_star = (73f64.sqrt() - 1.0) / 2.0;
    let c_star = x_star.ln();
    for (c, above) in [(c_star - 1e-6, false), (c_star + 1e-6, true)] {
        let w = weights_from(&LambdaParams::couplings(0.0, 0.0, c).unwrap());
        let report = count_ti_roots(&w);
        assert_eq!(report.canonical.b_can > CRITICAL_B, above);
        assert_eq!(report.thresholds.is_some(), above);
    }
    let w = weights_from(&LambdaParams::couplings(0.0, 0.0, c_star).unwrap());
    assert!((count_ti_roots(&w).canonical.b_can - 9.0).abs() < 1e-12);
}

#[test]
fn ferromagnetic_slice_orders_at_strong_coupling() {
    let x_star = (73f64.sqrt() - 1.0) / 2.0;
    for i in 0..400 {
        let c = -3.0 + 0.015 * i as f64;
        let w = weights_from(&LambdaParams::couplings(0.0, 0.0, c).unwrap());
        let r = count_ti_roots(&w);
        assert_eq!(r.ti_roots.len(), r.regime.root_count(), "c={c}");
        if c.exp() <= x_star {
            assert_eq!(r.regime, Regime::Unique, "c={c}");
        }
    }
    // a_can = 2/x̄³ sits inside (ε₁, ε₂) once x̄ is large
    let w = weights_from(&LambdaParams::couplings(0.0, 0.0, 20f64.ln()).unwrap());
    let r = count_ti_roots(&w);
    let t = thresholds(r.canonical.b_can).unwrap();
    assert!(t.eps1 < r.canonical.a_can && r.canonical.a_can < t.eps2);
    assert_eq!(r.regime, Regime::Three);
    assert!(r.phase_transition);
}
