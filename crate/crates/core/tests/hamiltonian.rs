use nilfold_core::hamiltonian::*;
use nilfold_core::numerics::linalg::{inverse, Matrix};
use nilfold_core::numerics::{finite_difference_jacobian, ToleranceConfig};
use proptest::prelude::*;

/// Full ν with the even-from-the-end entries zero; ν₁ fixed by |ν| = 1.
fn nu_full(n: usize, free: &[f64]) -> Vec<f64> {
    let m = n / 2;
    let mut nu = vec![0.0; n];
    let mut sq = 0.0;
    for k in 1..m {
        nu[2 * k] = free[k - 1];
        sq += free[k - 1] * free[k - 1];
    }
    nu[0] = -(1.0 - sq).max(0.0).sqrt();
    nu
}

fn divergence_2m(sys: &CanonicalSystem, q: &[f64], p: &[f64]) -> f64 {
    let m = sys.m;
    let mut z: Vec<f64> = q.iter().chain(p).copied().collect();
    let h = 1e-6;
    let mut div = 0.0;
    for i in 0..2 * m {
        let orig = z[i];
        let mut eval = |v: f64| {
            z[i] = v;
            let (qd, pd) = sys.transformed_field(&z[..m], &z[m..]).unwrap();
            if i < m { qd[i] } else { pd[i - m] }
        };
        div += (eval(orig + h) - eval(orig - h)) / (2.0 * h);
        z[i] = orig;
    }
    div
}

#[test]
fn four_dimensional_coordinates() {
    let sys = build_canonical(4, &[-0.8, 0.0, 0.6, 0.0]).unwrap();
    assert_eq!(sys.s, Matrix::from_rows(&[[-0.6, 1.0], [1.0, 0.0]]));
    assert_eq!(sys.b, vec![1.0, 0.6]);
    assert!(sys.s.matmul(&sys.s_inv).unwrap().max_abs_diff(&Matrix::identity(2)) < 1e-15);
    let (q, p) = sys.to_canonical(&[1.0, 2.0, 3.0, 4.0]).unwrap();
    assert_eq!(q, vec![-0.6 + 3.0, 1.0]);
    assert_eq!(p, vec![2.0, 4.0]);
}

#[test]
fn nu3_zero_gives_swapped_coordinates() {
    let sys = build_canonical(4, &[-1.0, 0.0, 0.0, 0.0]).unwrap();
    let (q, _) = sys.to_canonical(&[0.7, 0.1, -0.3, 0.2]).unwrap();
    assert_eq!(q, vec![-0.3, 0.7]);
}

#[test]
fn six_dimensional_zero_parameters() {
    let sys = build_canonical(6, &[-1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let anti = Matrix::from_rows(&[[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]);
    assert_eq!(sys.s, anti);
    assert_eq!(sys.s_inv, anti);
    assert_eq!(sys.b, vec![1.0, 0.0, 0.0]);
}

#[test]
fn ten_dimensional_inverse_matches_lu() {
    let nu = nu_full(10, &[0.3, -0.2, 0.4, 0.1]);
    let sys = build_canonical(10, &nu).unwrap();
    let lu = inverse(&sys.s).unwrap();
    assert!(sys.s_inv.max_abs_diff(&lu) < 1e-12);
}

#[test]
fn rejects_odd_dimension_and_nonreversible_parameters() {
    assert!(build_canonical(5, &[-1.0, 0.0, 0.0, 0.0, 0.0]).is_err());
    assert!(build_canonical(4, &[-0.8, 0.0, 0.6, 0.1]).is_err());
}

#[test]
fn hamiltonian_vanishes_at_origin() {
    for n in [4, 6, 8] {
        let sys = build_canonical(n, &nu_full(n, &[0.2, -0.1, 0.3])).unwrap();
        assert_eq!(sys.hamiltonian(&vec![0.0; n / 2], &vec![0.0; n / 2]).unwrap(), 0.0);
    }
}

#[test]
fn conserved_along_four_dimensional_orbit() {
    let nu3: f64 = -0.99;
    let sys = build_canonical(4, &[-(1.0 - nu3 * nu3).sqrt(), 0.0, nu3, 0.0]).unwrap();
    let tol = ToleranceConfig::new(1e-10, 1e-10, 0.1, 100).unwrap();
    let run = conservation_run(&sys, &[0.3, 0.1, -0.2, 0.05], 10.0, 10.0, &tol).unwrap();
    assert!(!run.escaped);
    assert_eq!(run.t_reached, 10.0);
    assert!(run.max_delta_h <= 1e-8, "{}", run.max_delta_h);
}

#[test]
fn escaping_orbit_stops_early() {
    let sys = build_canonical(4, &[-0.75f64.sqrt(), 0.0, 0.5, 0.0]).unwrap();
    let run = conservation_run(&sys, &[0.3, 0.1, -0.2, 0.05], 10.0, 10.0, &ToleranceConfig::default()).unwrap();
    assert!(run.escaped && run.t_reached < 10.0);
    assert!(run.max_delta_h <= 1e-8);
}

#[test]
fn four_d_first_integral_is_conserved() {
    use nilfold_core::families::{four_d_translated_rhs, FourDParams};
    let p = FourDParams::origin(1.0);
    for x in [[0.3, -0.2, 0.1, 0.4], [1.2, 0.5, -0.7, 0.0], [-0.4, 0.9, 0.2, -1.1]] {
        let f = four_d_translated_rhs(&x, &p);
        let g = first_integral_4d_gradient(&x, 2.0);
        let dot: f64 = f.iter().zip(&g).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-14);
    }
    assert_eq!(first_integral_4d(&[0.0; 4]), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transformed_field_is_hamiltonian(
        m in 2usize..=4,
        free in proptest::collection::vec(-0.5f64..0.5, 3),
        z in proptest::collection::vec(-1.5f64..1.5, 8),
    ) {
        let n = 2 * m;
        let sys = build_canonical(n, &nu_full(n, &free)).unwrap();
        let (q, p) = (&z[..m], &z[m..2 * m]);
        let (qd, pd) = sys.transformed_field(q, p).unwrap();
        let (hq, hp) = sys.hamiltonian_field(q, p).unwrap();
        for i in 0..m {
            prop_assert!((qd[i] - hq[i]).abs() < 1e-12);
            prop_assert!((pd[i] - hp[i]).abs() < 1e-12);
        }
        // Hamilton's equations against finite differences of H.
        let zz: Vec<f64> = z[..2 * m].to_vec();
        let grad = finite_difference_jacobian(
            |v: &[f64]| vec![sys.hamiltonian(&v[..m], &v[m..]).unwrap()],
            &zz,
            None,
        ).unwrap();
        for i in 0..m {
            prop_assert!((qd[i] - grad[(0, m + i)]).abs() < 1e-6);
            prop_assert!((pd[i] + grad[(0, i)]).abs() < 1e-6);
        }
    }

    #[test]
    fn canonical_round_trip(
        m in 2usize..=4,
        free in proptest::collection::vec(-0.5f64..0.5, 3),
        y in proptest::collection::vec(-2.0f64..2.0, 8),
    ) {
        let n = 2 * m;
        let sys = build_canonical(n, &nu_full(n, &free)).unwrap();
        let (q, p) = sys.to_canonical(&y[..n]).unwrap();
        let back = sys.from_canonical(&q, &p).unwrap();
        for i in 0..n {
            prop_assert!((back[i] - y[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn transformed_field_is_divergence_free(
        m in 2usize..=4,
        free in proptest::collection::vec(-0.5f64..0.5, 3),
        z in proptest::collection::vec(-1.0f64..1.0, 8),
    ) {
        let sys = build_canonical(2 * m, &nu_full(2 * m, &free)).unwrap();
        prop_assert!(divergence_2m(&sys, &z[..m], &z[m..2 * m]).abs() < 1e-6);
    }

    #[test]
    fn energy_is_conserved_until_escape(
        m in 2usize..=4,
        free in proptest::collection::vec(-0.6f64..0.6, 3),
        y in proptest::collection::vec(-0.3f64..0.3, 8),
    ) {
        let n = 2 * m;
        let sys = build_canonical(n, &nu_full(n, &free)).unwrap();
        let tol = ToleranceConfig::new(1e-10, 1e-10, 0.1, 100).unwrap();
        let run = conservation_run(&sys, &y[..n], 10.0, 5.0, &tol).unwrap();
        prop_assert!(run.max_delta_h <= 1e3 * tol.abs_tol, "{}", run.max_delta_h);
    }

    #[test]
    fn s_inverse_matches_lu(m in 2usize..=5, free in proptest::collection::vec(-0.5f64..0.5, 4)) {
        let sys = build_canonical(2 * m, &nu_full(2 * m, &free)).unwrap();
        let lu = inverse(&sys.s).unwrap();
        prop_assert!(sys.s_inv.max_abs_diff(&lu) < 1e-10);
    }
}
