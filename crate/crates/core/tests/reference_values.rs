use anosov_core::acceptance::default_perturbation;
use anosov_core::conjugacy::SeriesContext;
use anosov_core::oracle::{stable_direction, DEFAULT_ITERS};
use anosov_core::slope::{slope, val_qn0};
use anosov_core::torus::{HyperbolicAuto, PerturbedMap, TorusPoint};
use anosov_core::trees::RestrictMode;
use anosov_core::{Error, Sign};
use proptest::prelude::*;

fn ctx() -> SeriesContext {
    SeriesContext::new(HyperbolicAuto::fibonacci(), default_perturbation(), 40).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300)
}

/// `h^(1)_+ = sum_{p >= 0} lambda+^{-(p+1)} f+(S^p psi)`,
/// `h^(1)_- = -sum_{p <= -1} lambda-^{-p-1} f-(S^p psi)`.
fn direct_first_order(psi: TorusPoint, pmax: i64) -> [f64; 2] {
    let a = HyperbolicAuto::fibonacci();
    let f = default_perturbation();
    let mut plus = 0.0;
    for p in 0..=pmax {
        let fe = a.to_eigen(f.eval(a.pow_apply(p, psi).unwrap()));
        plus += a.lambda_plus.powi(-(p as i32 + 1)) * fe[0];
    }
    let mut minus = 0.0;
    for p in (-pmax..=-1).rev() {
        let fe = a.to_eigen(f.eval(a.pow_apply(p, psi).unwrap()));
        minus -= a.lambda_minus.powi((-p - 1) as i32) * fe[1];
    }
    [plus, minus]
}

#[test]
fn first_order_matches_direct_sum() {
    let c = ctx();
    let psi = TorusPoint::new(1.0, 2.0);
    let want = direct_first_order(psi, 40);
    for (i, alpha) in Sign::BOTH.into_iter().enumerate() {
        let h = c.h_k(psi, 1, alpha).unwrap();
        assert!((h.value - want[i]).abs() < 1e-13, "{alpha}: {} vs {}", h.value, want[i]);
    }
    assert!((want[1] - -2.46132145209599695e-1).abs() < 1e-13);
}

#[test]
fn frozen_series_values() {
    let c = ctx();
    let psi = TorusPoint::new(1.0, 2.0);
    let h2 = c.h_k(psi, 2, Sign::Plus).unwrap().value;
    let h3 = c.h_k(psi, 3, Sign::Minus).unwrap().value;
    assert!(close(h2, -3.18530969751318616e-2, 1e-12), "{h2:e}");
    assert!(close(h3, -3.32675950124763434e-2, 1e-12), "{h3:e}");
    let want = [-9.81491601917757056e-2, 7.65293196899521633e-2, -2.61718868284370500e-2];
    for (n, w) in (1..=3).zip(want) {
        let v = val_qn0(&c, psi, n, RestrictMode::StemMinusOnly).unwrap().value;
        assert!(close(v, w, 1e-12), "n={n}: {v:e}");
    }
    let s = slope(&c, psi, 0.01, 3, RestrictMode::StemMinusOnly, true).unwrap();
    assert!(close(s.slope, -9.73864841835590236e-4, 1e-12));
    assert!(s.forced);
}

#[test]
fn slope_needs_force_beyond_radius() {
    let c = ctx();
    let err = slope(&c, TorusPoint::origin(), 0.02, 3, RestrictMode::StemMinusOnly, false).unwrap_err();
    assert!(matches!(err, Error::RadiusExceeded { .. }));
}

#[test]
fn slope_tracks_oracle_at_third_order() {
    let c = ctx();
    let psi = TorusPoint::new(4.0, 0.7);
    let mut errs = Vec::new();
    for eps in [0.005, 0.01, 0.02] {
        let s = slope(&c, psi, eps, 3, RestrictMode::StemMinusOnly, true).unwrap().slope;
        let map = PerturbedMap::new(c.auto().clone(), c.f().clone(), eps);
        let o = stable_direction(&map, c.conjugate(psi, eps, 5).unwrap(), DEFAULT_ITERS).unwrap();
        errs.push((s - o.slope).abs());
    }
    // each halving of eps should cut the error by roughly 2^4
    assert!(errs[1] / errs[0] > 8.0 && errs[2] / errs[1] > 8.0, "{errs:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn first_order_identity_everywhere(x in 0.0..std::f64::consts::TAU, y in 0.0..std::f64::consts::TAU) {
        let c = ctx();
        let a = c.auto().clone();
        let psi = TorusPoint::new(x, y);
        let fe = a.to_eigen(c.f().eval(psi));
        for (i, alpha) in Sign::BOTH.into_iter().enumerate() {
            let h0 = c.h_k(psi, 1, alpha).unwrap();
            let h1 = c.h_k(a.apply(psi), 1, alpha).unwrap();
            let defect = h1.value - a.lambda(alpha) * h0.value + fe[i];
            prop_assert!(defect.abs() <= 2.0 * h0.tail_bound.max(h1.tail_bound));
        }
    }

    #[test]
    fn oracle_direction_is_unit_and_contracting(x in 0.0..6.28f64, y in 0.0..6.28f64, eps in -0.03..0.03f64) {
        let map = PerturbedMap::new(HyperbolicAuto::fibonacci(), default_perturbation(), eps);
        let o = stable_direction(&map, TorusPoint::new(x, y), DEFAULT_ITERS).unwrap();
        prop_assert!((o.direction[0].hypot(o.direction[1]) - 1.0).abs() < 1e-14);
        prop_assert!(o.multiplier.abs() < 1.0);
        prop_assert!(o.residual < 1e-8);
    }
}
