use nilfold_core::families::michelson_rhs;
use nilfold_core::hamiltonian::first_integral_4d_eta;
use nilfold_core::orbits::homoclinic::{slowest_decay, P_WINDOW};
use nilfold_core::orbits::*;
use nilfold_core::{Error, ToleranceConfig};
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::new(1e-10, 1e-10, 0.1, 50).unwrap()
}

#[test]
fn constants_are_consistent() {
    let o = KuramotoOrbit::new();
    assert!((o.c_k * o.c_k - 2.0 * o.alpha * o.alpha).abs() < 1e-14);
    assert!((o.alpha / o.beta - 30.0 / 19.0).abs() < 1e-14);
    assert!((o.c_k - 15.0 * (22.0f64 / 6859.0).sqrt()).abs() < 1e-14);
}

#[test]
fn value_at_zero() {
    let o = KuramotoOrbit::new();
    let p = kuramoto_p(0.0);
    assert_eq!(p[0], 0.0);
    assert_eq!(p[2], 0.0);
    assert!((p[1] + 9.0 * o.alpha * o.beta).abs() < 1e-15);
    assert!((p[1] + 2.056_786_7).abs() < 1e-7);
}

#[test]
fn limits_are_the_equilibria() {
    let o = KuramotoOrbit::new();
    for sign in [1.0, -1.0] {
        let lim = o.limit(sign);
        assert!((lim[0] - sign * 2f64.sqrt() * o.c_k).abs() < 1e-14);
        let far = o.state(sign * 60.0);
        for i in 0..3 {
            assert!((far[i] - lim[i]).abs() < 1e-12);
        }
    }
}

#[test]
fn michelson_residual_on_grid() {
    let o = KuramotoOrbit::new();
    let params = o.params();
    for k in -100..=100 {
        let t = k as f64 / 10.0;
        let f = michelson_rhs(&o.state(t), &params);
        let v = o.velocity(t);
        let r = (0..3).map(|i| (f[i] - v[i]).abs()).fold(0.0, f64::max);
        assert!(r <= 1e-12, "t = {t}: {r}");
    }
}

#[test]
fn homoclinic_at_double_root() {
    let prof = shoot_homoclinic_4d(-2.0, 25.0, &tol()).unwrap();
    let x0 = prof.trajectory.first();
    assert_eq!((x0[1], x0[3]), (0.0, 0.0));
    assert!(prof.sign_properties().all());
    assert!(prof.boundary_residual <= 10.0 * tol().abs_tol);
    assert!(prof.max_first_integral() <= 1e-6);
    assert!((prof.u0 - 1.454_367_46).abs() < 1e-6);
}

#[test]
fn homoclinic_is_even_after_reflection() {
    let prof = shoot_homoclinic_4d(-2.0, 25.0, &tol()).unwrap();
    for t in [0.5, 3.0, 7.25] {
        let (a, b) = (prof.state(t).unwrap(), prof.state(-t).unwrap());
        assert_eq!((a[0], a[2]), (b[0], b[2]));
        assert_eq!((a[1], a[3]), (-b[1], -b[3]));
    }
    let full = prof.full_orbit();
    assert_eq!(full.t_start(), -25.0);
    assert_eq!(full.t_end(), 25.0);
}

#[test]
fn homoclinic_conserves_first_integral_off_double_root() {
    let prof = shoot_homoclinic_4d(-2.5, 25.0, &tol()).unwrap();
    let eta3 = prof.eta3();
    let worst = prof
        .trajectory
        .states()
        .map(|x| first_integral_4d_eta(&[x[0], x[1], x[2], x[3]], eta3).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-6);
    assert!(prof.sign_properties().u_positive);
}

#[test]
fn residual_stable_under_tighter_integration() {
    let t = tol();
    let prof = shoot_homoclinic_4d(-2.0, 25.0, &t).unwrap();
    let tight = prof.residual_with(&t.with_tol(0.5 * t.abs_tol)).unwrap();
    assert!((tight - prof.boundary_residual).abs() < 10.0 * t.abs_tol);
}

#[test]
fn continuation_to_double_root_is_monotone() {
    let c = continuation_in_p(-3.0, -2.0, 10, 25.0, &tol()).unwrap();
    assert!(c.diagnostic.is_none());
    assert_eq!(c.profiles.len(), 11);
    let u0: Vec<f64> = c.profiles.iter().map(|p| p.u0).collect();
    let inc = u0.windows(2).all(|w| w[1] > w[0]);
    let dec = u0.windows(2).all(|w| w[1] < w[0]);
    assert!(inc || dec, "{u0:?}");
}

#[test]
fn trivial_continuation_matches_shooting() {
    let c = continuation_in_p(-2.0, -2.0, 5, 25.0, &tol()).unwrap();
    assert_eq!(c.profiles.len(), 1);
    assert_eq!(c.profiles[0], shoot_homoclinic_4d(-2.0, 25.0, &tol()).unwrap());
}

#[test]
fn persists_past_double_root() {
    let c = continuation_in_p(-2.0, -1.9, 1, 25.0, &tol()).unwrap();
    assert!(c.diagnostic.is_none());
    let last = c.profiles.last().unwrap();
    assert_eq!(last.p, -1.9);
    // The tail oscillates once the linearization has complex roots.
    assert!(last.boundary_residual <= 10.0 * tol().abs_tol);
    assert!(last.state(0.0).unwrap()[0] > 0.0);
}

#[test]
fn rejects_inputs_outside_window() {
    assert!(matches!(shoot_homoclinic_4d(P_WINDOW.0 - 0.5, 25.0, &tol()), Err(Error::Precondition(_))));
    assert!(shoot_homoclinic_4d(-2.0, 6.0, &tol()).is_err());
    assert!(slowest_decay(-2.0) > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kuramoto_parities(t in -40.0f64..40.0) {
        let (a, b) = (kuramoto_p(t), kuramoto_p(-t));
        prop_assert_eq!(a[0], -b[0]);
        prop_assert_eq!(a[1], b[1]);
        prop_assert_eq!(a[2], -b[2]);
    }
}
