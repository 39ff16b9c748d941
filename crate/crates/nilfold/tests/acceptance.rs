//! Acceptance criteria 1–8, one PASS/FAIL line each.

use std::time::Instant;

use nilfold_core::dichotomy::{adjoint_basis_michelson, dae_solve_reduced, AdjointBasis};
use nilfold_core::equilibria::{discriminant_surfaces, michelson_spectrum, scan_reversibility_curve, SpectralLabel};
use nilfold_core::families::michelson_rhs;
use nilfold_core::hamiltonian::{build_canonical, conservation_run};
use nilfold_core::melnikov::{xi_gradient_4d, xi_matrix_3d, SplittingReport3D};
use nilfold_core::numerics::linalg::inverse;
use nilfold_core::numerics::quad_nodes;
use nilfold_core::orbits::{kuramoto_p, shoot_homoclinic_4d, KuramotoOrbit};
use nilfold_core::{ToleranceConfig, Trajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const REFERENCE_INTEGRALS: [f64; 3] = [-2.655_965_40, 3.424_248_92, 2.191_906_41];
const REFERENCE_TAIL_BOUNDS: [f64; 3] = [4.219_110e-2, 2.103_834e-7, 3.321_829e-7];

type Check = Result<String, String>;

struct Fixture {
    basis: AdjointBasis,
    report: SplittingReport3D,
    seconds: f64,
}

fn fixture() -> Fixture {
    let start = Instant::now();
    let tol = ToleranceConfig::new(1e-12, 1e-12, 0.01, 50).unwrap();
    let basis = adjoint_basis_michelson(20.0, &tol).unwrap();
    let report = xi_matrix_3d(&basis, 20.0, 1.0).unwrap();
    Fixture { basis, report, seconds: start.elapsed().as_secs_f64() }
}

fn require(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_1(f: &Fixture) -> Check {
    let diffs: Vec<f64> = (0..3).map(|k| (f.report.half_line[k] - REFERENCE_INTEGRALS[k]).abs()).collect();
    let ok = diffs.iter().all(|d| *d <= 1e-4) && f.seconds < 60.0;
    require(ok, format!("integrals {:?}, max deviation {:.2e}, {:.2} s", f.report.half_line, diffs.iter().cloned().fold(0.0, f64::max), f.seconds))
}

fn criterion_2(f: &Fixture) -> Check {
    let b = f.report.tails.bounds;
    let rel: Vec<f64> = (0..3).map(|k| (b[k] - REFERENCE_TAIL_BOUNDS[k]).abs() / REFERENCE_TAIL_BOUNDS[k]).collect();
    require(rel.iter().all(|r| *r <= 0.01), format!("bounds {b:?}, max relative deviation {:.2e}", rel.iter().cloned().fold(0.0, f64::max)))
}

fn reduced_integrals() -> [f64; 3] {
    let tol = ToleranceConfig::new(1e-12, 1e-12, 0.01, 50).unwrap();
    let orbit = KuramotoOrbit::new();
    let psi = dae_solve_reduced(&[1.0, 0.0], (0.0, 20.0), &tol).unwrap();
    let phi = dae_solve_reduced(&[0.0, 1.0], (0.0, 20.0), &tol).unwrap();
    let q = |tr: &Trajectory, w: &dyn Fn(f64) -> f64| {
        let vals: Vec<f64> = tr.times().iter().zip(tr.states()).map(|(&t, v)| v[0] * w(t)).collect();
        quad_nodes(tr.times(), &vals).unwrap().value
    };
    [
        q(&psi, &|_| 1.0),
        q(&phi, &|t| orbit.state(t)[2]),
        q(&phi, &|t| {
            let p = orbit.state(t);
            p[0] * p[1]
        }),
    ]
}

fn criterion_3(f: &Fixture) -> Check {
    let red = reduced_integrals();
    let d = (0..3).map(|k| (red[k] - f.report.half_line[k]).abs()).fold(0.0, f64::max);
    require(d < 1e-4, format!("reduced {red:?}, max difference {d:.2e}"))
}

fn criterion_4(f: &Fixture) -> Check {
    let r3 = f.report.parity_residuals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let tol = ToleranceConfig::new(1e-12, 1e-12, 0.05, 50).unwrap();
    let prof = shoot_homoclinic_4d(-2.0, 25.0, &tol).map_err(|e| e.to_string())?;
    let r4 = xi_gradient_4d(&prof, 1.0).map_err(|e| e.to_string())?.parity_residual.abs();
    let mut orbit_dev: f64 = 0.0;
    let mut basis_dev: f64 = 0.0;
    let signs = [[-1.0, 1.0, -1.0], [1.0, -1.0, 1.0]];
    for k in 1..=200 {
        let t = 0.1 * k as f64;
        let (a, b) = (kuramoto_p(t), kuramoto_p(-t));
        orbit_dev = orbit_dev.max((a[0] + b[0]).abs()).max((a[1] - b[1]).abs()).max((a[2] + b[2]).abs());
        for (sol, s) in f.basis.solutions.iter().zip(signs) {
            let (x, y) = (sol.eval(t).unwrap(), sol.eval(-t).unwrap());
            for i in 0..3 {
                basis_dev = basis_dev.max((x[i] - s[i] * y[i]).abs());
            }
        }
    }
    let ok = r3 <= 1e-6 && r4 <= 1e-6 && orbit_dev <= 1e-6 && basis_dev <= 1e-6;
    require(ok, format!("3D zeros {r3:.1e}, 4D zero {r4:.1e}, orbit {orbit_dev:.1e}, adjoint basis {basis_dev:.1e}"))
}

fn random_nu(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut nu = vec![0.0; n];
    let mut sq = 0.0;
    for k in 1..n / 2 {
        let v: f64 = rng.gen_range(-0.6..0.6);
        nu[2 * k] = v;
        sq += v * v;
    }
    let scale = if sq > 0.9 { (0.9 / sq).sqrt() } else { 1.0 };
    for k in 1..n / 2 {
        nu[2 * k] *= scale;
    }
    nu[0] = -(1.0 - sq * scale * scale).sqrt();
    nu
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tol = ToleranceConfig::new(1e-10, 1e-10, 0.1, 50).unwrap();
    let (mut inv_err, mut field_err, mut dh): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let (mut runs, mut full) = (0, 0);
    for n in [4, 6, 8] {
        for _ in 0..10 {
            let nu = random_nu(&mut rng, n);
            let sys = build_canonical(n, &nu).map_err(|e| e.to_string())?;
            inv_err = inv_err.max(sys.s_inv.max_abs_diff(&inverse(&sys.s).map_err(|e| e.to_string())?));
            let y0: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.3..0.3)).collect();
            let run = conservation_run(&sys, &y0, 10.0, 5.0, &tol).map_err(|e| e.to_string())?;
            dh = dh.max(run.max_delta_h);
            runs += 1;
            full += usize::from(!run.escaped);
        }
        for _ in 0..34 {
            let nu = random_nu(&mut rng, n);
            let sys = build_canonical(n, &nu).map_err(|e| e.to_string())?;
            let z: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let (q, p) = z.split_at(n / 2);
            let (a, b) = (sys.transformed_field(q, p).unwrap(), sys.hamiltonian_field(q, p).unwrap());
            for i in 0..n / 2 {
                field_err = field_err.max((a.0[i] - b.0[i]).abs()).max((a.1[i] - b.1[i]).abs());
            }
        }
    }
    // A parameter where the orbit from (0.3, 0.1, −0.2, 0.05) stays bounded on [0, 10].
    let nu3: f64 = -0.99;
    let sys = build_canonical(4, &[-(1.0 - nu3 * nu3).sqrt(), 0.0, nu3, 0.0]).unwrap();
    let fixed = conservation_run(&sys, &[0.3, 0.1, -0.2, 0.05], 10.0, 10.0, &tol).map_err(|e| e.to_string())?;
    dh = dh.max(fixed.max_delta_h);
    let ok = inv_err <= 1e-10 && field_err <= 1e-8 && dh <= 1e-8 && !fixed.escaped;
    require(
        ok,
        format!(
            "inverse {inv_err:.1e}, field {field_err:.1e} at 102 points, max |dH| {dh:.1e} ({full}/{runs} random runs reach t = 10, others stop at |y| = 5)"
        ),
    )
}

fn criterion_6() -> Check {
    let tol = ToleranceConfig::new(1e-12, 1e-12, 0.05, 50).unwrap();
    let prof = shoot_homoclinic_4d(-2.0, 25.0, &tol).map_err(|e| e.to_string())?;
    let rep = xi_gradient_4d(&prof, 1.0).map_err(|e| e.to_string())?;
    let s = prof.sign_properties();
    let ranks = rep.region_ranks.iter().all(|c| c.ok());
    let min_ratio = rep.region_ranks.iter().map(|c| c.ratio).fold(f64::INFINITY, f64::min);
    let ok = prof.boundary_residual <= 1e-8
        && s.all()
        && prof.max_first_integral() <= 1e-6
        && rep.signs.xi1_positive
        && rep.signs.xi3_negative
        && rep.signs.xi1_minus_xi3_positive
        && rep.by_parts_gap <= 1e-6
        && ranks;
    require(
        ok,
        format!(
            "residual {:.1e}, signs at {} nodes, |H| {:.1e}, xi {:?}, by-parts gap {:.1e}, smallest rank ratio {min_ratio:.3}",
            prof.boundary_residual,
            s.nodes,
            prof.max_first_integral(),
            rep.xi,
            rep.by_parts_gap
        ),
    )
}

fn criterion_7() -> Check {
    let scan = scan_reversibility_curve(200).map_err(|e| e.to_string())?;
    let found: Vec<SpectralLabel> =
        SpectralLabel::CURVE_STRATA.into_iter().filter(|l| scan.iter().any(|p| p.classification.label == *l)).collect();
    let surf = discriminant_surfaces([0.0; 4], 0.05, 1.0).map_err(|e| e.to_string())?;
    let normal_err = surf.minus.normal_error.max(surf.plus.normal_error);
    let mut gap: f64 = 0.0;
    let mut shil = true;
    for k in 0..=19 {
        let s = michelson_spectrum(0.1 + 0.1 * k as f64).map_err(|e| e.to_string())?;
        gap = gap.max(s.divergence_gap);
        shil &= s.shilnikov;
    }
    let ok = found.len() == 7 && normal_err <= 1e-4 && gap <= 1e-10 && shil;
    require(ok, format!("{} of 7 strata, normal error {normal_err:.1e}, divergence gap {gap:.1e}, 0 < rho < lambda: {shil}", found.len()))
}

fn criterion_8() -> Check {
    let o = KuramotoOrbit::new();
    let params = o.params();
    let mut res: f64 = 0.0;
    for k in -100..=100 {
        let t = 0.1 * k as f64;
        let (f, v) = (michelson_rhs(&o.state(t), &params), o.velocity(t));
        res = res.max((0..3).map(|i| (f[i] - v[i]).abs()).fold(0.0, f64::max));
    }
    let lim_ok = (o.limit(1.0)[0] - 2f64.sqrt() * o.c_k).abs() < 1e-14;
    // Observed approach rate against the e-fold rate 2β.
    let dev = |t: f64| {
        let (p, l) = (o.state(t), o.limit(t.signum()));
        (0..3).map(|i| (p[i] - l[i]).abs()).fold(0.0, f64::max)
    };
    let rates: Vec<f64> = [1.0, -1.0].iter().map(|s| (dev(s * 10.0) / dev(s * 20.0)).ln() / 10.0).collect();
    let rate_ok = rates.iter().all(|r| (r - o.decay_rate()).abs() <= 0.01 * o.decay_rate());
    require(res <= 1e-12 && lim_ok && rate_ok, format!("residual {res:.1e}, decay rates {rates:?} vs {}", o.decay_rate()))
}

#[test]
fn acceptance() {
    let f = fixture();
    let results: Vec<(u8, &str, Check)> = vec![
        (1, "half-line integrals", criterion_1(&f)),
        (2, "tail bounds", criterion_2(&f)),
        (3, "reduced vs projected adjoint", criterion_3(&f)),
        (4, "parity suite", criterion_4(&f)),
        (5, "Hamiltonian suite", criterion_5()),
        (6, "4D homoclinic", criterion_6()),
        (7, "equilibria", criterion_7()),
        (8, "Kuramoto orbit", criterion_8()),
    ];
    let mut failed = Vec::new();
    for (n, name, res) in &results {
        match res {
            Ok(d) => println!("criterion {n} PASS  {name}: {d}"),
            Err(d) => {
                println!("criterion {n} FAIL  {name}: {d}");
                failed.push(*n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
