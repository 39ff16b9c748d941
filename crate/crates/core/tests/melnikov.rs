use std::sync::OnceLock;

use nilfold_core::dichotomy::{adjoint_basis_michelson, dae_build, AdjointBasis};
use nilfold_core::melnikov::*;
use nilfold_core::orbits::shoot_homoclinic_4d;
use nilfold_core::{Error, ToleranceConfig};

fn tight() -> ToleranceConfig {
    ToleranceConfig::new(1e-13, 1e-13, 0.01, 50).unwrap()
}

fn basis() -> &'static AdjointBasis {
    static B: OnceLock<AdjointBasis> = OnceLock::new();
    B.get_or_init(|| adjoint_basis_michelson(40.0, &tight()).unwrap())
}

fn report() -> &'static SplittingReport3D {
    static R: OnceLock<SplittingReport3D> = OnceLock::new();
    R.get_or_init(|| xi_matrix_3d(basis(), 20.0, 1.0).unwrap())
}

fn reduced_at(b: &AdjointBasis, t: f64) -> ([f64; 2], [f64; 2]) {
    let (psi, phi) = (b.psi().eval(t).unwrap(), b.phi().eval(t).unwrap());
    ([psi[2], -psi[1]], [phi[2], -phi[1]])
}

#[test]
fn half_line_integrals_match_reference() {
    let r = report();
    let reference = [-2.655_965_40, 3.424_248_92, 2.191_906_41];
    for k in 0..3 {
        assert!((r.half_line[k] - reference[k]).abs() <= 1e-4, "{k}: {}", r.half_line[k]);
    }
    assert!(r.quadrature_errors.iter().all(|e| *e <= MAX_RICHARDSON));
}

#[test]
fn kappa_prefactor() {
    let r = report();
    assert!((r.xi[0][2] + 8.767_625_6).abs() <= 4e-4);
    let r2 = xi_matrix_3d(basis(), 20.0, -0.5).unwrap();
    assert!((r2.xi[0][2] + 0.5 * r.xi[0][2]).abs() < 1e-12);
    assert_eq!(r.xi[1][0], 2.0 * r.half_line[0]);
    assert_eq!(r.xi[0][1], 2.0 * r.half_line[1]);
}

#[test]
fn parity_zeros_are_exact_and_cross_checked() {
    let r = report();
    for i in 0..2 {
        for j in 0..3 {
            if r.parity_zeros[i][j] {
                assert_eq!(r.xi[i][j], 0.0);
            }
        }
    }
    assert!(r.parity_residuals.iter().all(|v| v.abs() <= 1e-6), "{:?}", r.parity_residuals);
}

#[test]
fn tail_bounds_match_reference() {
    let r = report();
    let reference = [4.219_110e-2, 2.103_834e-7, 3.321_829e-7];
    for k in 0..3 {
        let rel = (r.tails.bounds[k] - reference[k]).abs() / reference[k];
        assert!(rel <= 0.01, "{k}: {}", r.tails.bounds[k]);
    }
    assert!(r.tails.bounds.iter().all(|b| *b >= 0.0));
    let (np, npi) = (r.tails.norm_p, r.tails.norm_p_inv);
    assert_eq!(np, 2.0);
    assert!((npi - ((30.0f64 / 109.0).sqrt() + 30.0 / 2071.0f64.sqrt())).abs() < 1e-12);
}

#[test]
fn tail_bounds_shrink_with_t0() {
    let dae = dae_build();
    let b = basis();
    let (psi20, phi20) = reduced_at(b, 20.0);
    let (psi25, phi25) = reduced_at(b, 25.0);
    let at20 = tail_bounds(&dae, 20.0, psi20, phi20).unwrap();
    let at25 = tail_bounds(&dae, 25.0, psi25, phi25).unwrap();
    for k in 0..3 {
        assert!(at25.bounds[k] < at20.bounds[k]);
    }
}

#[test]
fn doubling_cut_stays_within_tail_bound() {
    let r20 = report();
    let r40 = xi_matrix_3d(basis(), 40.0, 1.0).unwrap();
    for k in 0..3 {
        assert!((r40.half_line[k] - r20.half_line[k]).abs() < r20.tails.bounds[k], "{k}");
    }
}

#[test]
fn tangent_and_determinant() {
    let r = report();
    assert_eq!(r.het_tangent[0], 0.0);
    assert_eq!(r.het_tangent[2], 1.0);
    assert!(r.tangent_ok());
    assert!((r.determinant + r.xi[0][1] * r.xi[1][0]).abs() < 1e-12);
    assert!(r.determinant.abs() > r.determinant_budget);
    assert!(r.rank_ok);
}

#[test]
fn rejects_bad_cut() {
    assert!(matches!(xi_matrix_3d(basis(), 10.0, 1.0), Err(Error::Precondition(_))));
    assert!(matches!(xi_matrix_3d(basis(), 50.0, 1.0), Err(Error::Precondition(_))));
}

#[test]
fn four_d_gradient() {
    let prof = shoot_homoclinic_4d(-2.0, 25.0, &ToleranceConfig::new(1e-12, 1e-12, 0.05, 50).unwrap()).unwrap();
    let r = xi_gradient_4d(&prof, 1.0).unwrap();
    assert_eq!(r.xi[1], 0.0);
    assert!(r.parity_residual <= 1e-8);
    assert!(r.by_parts_gap <= 1e-6);
    assert!((r.xi[2] - r.xi3_by_parts).abs() <= 1e-6);
    assert!(r.signs.all());
    assert_eq!(r.hom_tangent_normal, [r.xi[0], 0.0, r.xi[2], r.xi[3]]);
    assert_eq!(r.region_ranks.len(), 3);
    assert!(r.region_ranks.iter().all(|c| c.ok()));
    assert!(r.xi1_minus_xi3 > 0.0);

    let neg = xi_gradient_4d(&prof, -1.0).unwrap();
    assert!(neg.xi[3] < 0.0 && neg.signs.xi4_sign_of_kappa);
}

#[test]
fn four_d_gradient_insensitive_to_truncation() {
    let tol = ToleranceConfig::new(1e-12, 1e-12, 0.05, 50).unwrap();
    let short = xi_gradient_4d(&shoot_homoclinic_4d(-2.0, 25.0, &tol).unwrap(), 1.0).unwrap();
    let long = xi_gradient_4d(&shoot_homoclinic_4d(-2.0, 50.0, &tol).unwrap(), 1.0).unwrap();
    for k in 0..4 {
        assert!((short.xi[k] - long.xi[k]).abs() < 1e-8, "{k}: {} {}", short.xi[k], long.xi[k]);
    }
}

#[test]
fn four_d_requires_double_root() {
    let prof = shoot_homoclinic_4d(-2.5, 25.0, &ToleranceConfig::default()).unwrap();
    assert!(matches!(xi_gradient_4d(&prof, 1.0), Err(Error::Precondition(_))));
}
