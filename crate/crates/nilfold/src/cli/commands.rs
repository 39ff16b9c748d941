//! One function per subcommand, each producing a [`Report`].

use anyhow::Context;
use nilfold_core::dichotomy::{adjoint_basis_michelson, dae_build, dae_solve_reduced, AdjointBasis};
use nilfold_core::equilibria::{
    classify_region_4d, classify_reversibility_4d, michelson_spectrum, scan_reversibility_curve,
    EquilibriumClassification,
};
use nilfold_core::families::FourDParams;
use nilfold_core::hamiltonian::{build_canonical, conservation_run};
use nilfold_core::melnikov::{tail_bounds, xi_gradient_4d, xi_matrix_3d};
use nilfold_core::numerics::quad_nodes;
use nilfold_core::orbits::{shoot_homoclinic_4d, KuramotoOrbit};
use nilfold_core::{Matrix, ToleranceConfig, Trajectory};

use super::export::{self, ScanRow};
use super::{ClassifyArgs, Command, GlobalOpts, Report, UsageError};

/// Reference half-line integrals ∫₀²⁰ of ψ₃, φ₃p₃ and φ₃p₁p₂.
pub const TABLE1_REFERENCE: [f64; 3] = [-2.655_965_40, 3.424_248_92, 2.191_906_41];
pub const TABLE1_TOL: f64 = 1e-4;
/// Reference tail bounds at t₀ = 20.
pub const TABLE2_REFERENCE: [f64; 3] = [4.219_110e-2, 2.103_834e-7, 3.321_829e-7];
pub const TABLE2_REL_TOL: f64 = 0.01;
/// Largest step for the adjoint basis.
const ADJOINT_MAX_STEP: f64 = 0.01;
const PROFILE_MAX_STEP: f64 = 0.05;
const INTEGRAL_NAMES: [&str; 3] = ["psi3", "phi3_p3", "phi3_p1p2"];

pub enum Output {
    Report(Report),
    Scan(Vec<ScanRow>, Report),
}

pub fn dispatch(cmd: &Command, g: &GlobalOpts) -> anyhow::Result<Output> {
    let report = match cmd {
        Command::Table1 => table1(g)?,
        Command::Table2 => table2(g)?,
        Command::Het { adjoint_csv } => het(g, adjoint_csv.as_deref())?,
        Command::Hom4d { p, profile_csv } => hom4d(g, *p, profile_csv.as_deref())?,
        Command::Hamiltonian { n, nu1, nu3, nu_odd, y0, t_end, escape_radius } => {
            hamiltonian(g, *n, *nu1, *nu3, nu_odd.as_deref(), y0.as_deref(), *t_end, *escape_radius)?
        }
        Command::Classify(args) => return classify(args),
    };
    Ok(Output::Report(report))
}

fn adjoint_tol(g: &GlobalOpts) -> anyhow::Result<ToleranceConfig> {
    Ok(ToleranceConfig::new(g.tol, g.tol, ADJOINT_MAX_STEP, 50)?)
}

fn basis(g: &GlobalOpts) -> anyhow::Result<AdjointBasis> {
    adjoint_basis_michelson(g.t_cut, &adjoint_tol(g)?).context("adjoint basis")
}

fn common_inputs(r: &mut Report, g: &GlobalOpts) {
    r.input("tol", g.tol).input("t_cut", g.t_cut).input("max_step", ADJOINT_MAX_STEP);
}

fn table1(g: &GlobalOpts) -> anyhow::Result<Report> {
    let b = basis(g)?;
    let rep = xi_matrix_3d(&b, g.t_cut, g.kappa)?;
    let mut r = Report::new("table1");
    common_inputs(&mut r, g);
    for k in 0..3 {
        let name = INTEGRAL_NAMES[k];
        r.result(name, rep.half_line[k]).budget(&format!("{name}.richardson"), rep.quadrature_errors[k]);
    }
    if g.t_cut == 20.0 {
        for k in 0..3 {
            let name = INTEGRAL_NAMES[k];
            r.result(&format!("{name}.reference"), TABLE1_REFERENCE[k]);
            r.verdict(&format!("{name}.matches_reference"), (rep.half_line[k] - TABLE1_REFERENCE[k]).abs() <= TABLE1_TOL);
        }
        r.budget("reference_tolerance", TABLE1_TOL);
    }
    Ok(r)
}

fn table2(g: &GlobalOpts) -> anyhow::Result<Report> {
    let b = basis(g)?;
    let v = |tr: &Trajectory| -> anyhow::Result<[f64; 2]> {
        let w = tr.eval(g.t_cut)?;
        Ok([w[2], -w[1]])
    };
    let tb = tail_bounds(&dae_build(), g.t_cut, v(b.psi())?, v(b.phi())?)?;
    let mut r = Report::new("table2");
    common_inputs(&mut r, g);
    r.result("norm_p", tb.norm_p)
        .result("norm_p_inv", tb.norm_p_inv)
        .result("norm_r", tb.norm_r)
        .result("l", tb.l)
        .result("psi_hat_norm", tb.psi_norm)
        .result("phi_hat_norm", tb.phi_norm);
    for k in 0..3 {
        r.result(&format!("{}.tail_bound", INTEGRAL_NAMES[k]), tb.bounds[k]);
    }
    if g.t_cut == 20.0 {
        for k in 0..3 {
            let name = INTEGRAL_NAMES[k];
            let rel = (tb.bounds[k] - TABLE2_REFERENCE[k]).abs() / TABLE2_REFERENCE[k];
            r.result(&format!("{name}.reference"), TABLE2_REFERENCE[k]);
            r.verdict(&format!("{name}.matches_reference"), rel <= TABLE2_REL_TOL);
        }
        r.budget("reference_relative_tolerance", TABLE2_REL_TOL);
    }
    Ok(r)
}

/// ∫₀^{t_cut} of ψ₃, φ₃p₃ and φ₃p₁p₂ along the reduced solutions.
fn reduced_integrals(g: &GlobalOpts) -> anyhow::Result<[f64; 3]> {
    let tol = adjoint_tol(g)?;
    let orbit = KuramotoOrbit::new();
    let psi = dae_solve_reduced(&[1.0, 0.0], (0.0, g.t_cut), &tol)?;
    let phi = dae_solve_reduced(&[0.0, 1.0], (0.0, g.t_cut), &tol)?;
    let q = |tr: &Trajectory, f: &dyn Fn(f64) -> f64| -> anyhow::Result<f64> {
        let vals: Vec<f64> = tr.times().iter().zip(tr.states()).map(|(&t, v)| v[0] * f(t)).collect();
        Ok(quad_nodes(tr.times(), &vals)?.value)
    };
    Ok([
        q(&psi, &|_| 1.0)?,
        q(&phi, &|t| orbit.state(t)[2])?,
        q(&phi, &|t| {
            let p = orbit.state(t);
            p[0] * p[1]
        })?,
    ])
}

fn het(g: &GlobalOpts, adjoint_csv: Option<&std::path::Path>) -> anyhow::Result<Report> {
    let b = basis(g)?;
    let rep = xi_matrix_3d(&b, g.t_cut, g.kappa)?;
    let reduced = reduced_integrals(g)?;
    let mut r = Report::new("het");
    common_inputs(&mut r, g);
    r.input("kappa", g.kappa);
    r.result("xi", rep.xi)
        .result("half_line", rep.half_line)
        .result("half_line_reduced", reduced)
        .result("parity_zeros", rep.parity_zeros)
        .result("parity_residuals", rep.parity_residuals)
        .result("tail_bounds", rep.tails.bounds)
        .result("het_tangent", rep.het_tangent)
        .result("tangent_residuals", rep.tangent_residuals)
        .result("determinant", rep.determinant)
        .result("determinant_c_nu", rep.determinant_c_nu)
        .result("max_projection_drift", b.max_drift);
    r.budget("xi", rep.budgets)
        .budget("tangent", rep.tangent_budgets)
        .budget("determinant", rep.determinant_budget)
        .budget("method_agreement", 1e-4)
        .budget("parity", 1e-6);
    let agreement = (0..3).all(|k| (reduced[k] - rep.half_line[k]).abs() < 1e-4);
    r.verdict("parity_zeros_vanish", rep.parity_residuals.iter().all(|v| v.abs() <= 1e-6))
        .verdict("tangent_satisfies_plane_equations", rep.tangent_ok())
        .verdict("tangent_transverse_to_epsilon_zero", rep.het_tangent[2] == 1.0)
        .verdict("determinant_nonzero", rep.rank_ok)
        .verdict("reduced_method_agrees", agreement);
    if let Some(path) = adjoint_csv {
        write_adjoint(path, &b)?;
    }
    Ok(r)
}

fn write_adjoint(path: &std::path::Path, b: &AdjointBasis) -> anyhow::Result<()> {
    let phi = b.phi();
    let mut states = Vec::with_capacity(phi.len());
    for (&t, w) in phi.times().iter().zip(phi.states()) {
        let mut row = w.to_vec();
        row.extend(b.psi().eval(t)?);
        states.push(row);
    }
    let tr = Trajectory::from_samples(phi.times().to_vec(), states)?;
    export::write_trajectory(path, &["t", "phi1", "phi2", "phi3", "psi1", "psi2", "psi3"], &tr)
}

fn hom4d(g: &GlobalOpts, p: f64, profile_csv: Option<&std::path::Path>) -> anyhow::Result<Report> {
    let tol = ToleranceConfig::new(g.tol, g.tol, PROFILE_MAX_STEP, 50)?;
    let prof = shoot_homoclinic_4d(p, g.t_end, &tol)?;
    let signs = prof.sign_properties();
    let mut r = Report::new("hom4d");
    r.input("P", p).input("T", g.t_end).input("tol", g.tol).input("kappa", g.kappa);
    r.result("u0", prof.u0)
        .result("u2_0", prof.u2_0)
        .result("boundary_residual", prof.boundary_residual)
        .result("continuity_residual", prof.continuity_residual)
        .result("newton_iterations", prof.iterations)
        .result("max_first_integral", prof.max_first_integral())
        .result("nodes", prof.trajectory.len());
    r.budget("boundary_residual", 1e-8).budget("first_integral", 1e-6);
    r.verdict("boundary_residual", prof.boundary_residual <= 1e-8)
        .verdict("first_integral_conserved", prof.max_first_integral() <= 1e-6);
    if p == -2.0 {
        r.verdict("u_positive", signs.u_positive)
            .verdict("du_negative", signs.du_negative)
            .verdict("p4_minus_p2_positive", signs.p4_minus_p2_positive);
        let rep = xi_gradient_4d(&prof, g.kappa)?;
        r.result("xi", rep.xi)
            .result("xi3_by_parts", rep.xi3_by_parts)
            .result("xi1_minus_xi3", rep.xi1_minus_xi3)
            .result("parity_residual", rep.parity_residual)
            .result("hom_tangent_normal", rep.hom_tangent_normal)
            .result("tail_envelope", [rep.tail.k, rep.tail.rate, rep.tail.m]);
        r.budget("xi", rep.budgets).budget("by_parts", 1e-6).budget("rank_ratio", 1e-3);
        r.verdict("xi1_positive", rep.signs.xi1_positive)
            .verdict("xi3_negative", rep.signs.xi3_negative)
            .verdict("xi4_sign_of_kappa", rep.signs.xi4_sign_of_kappa)
            .verdict("xi1_minus_xi3_positive", rep.signs.xi1_minus_xi3_positive)
            .verdict("integration_by_parts", rep.by_parts_gap <= 1e-6)
            .verdict("xi2_parity", rep.parity_residual <= 1e-8);
        for check in &rep.region_ranks {
            r.result(&format!("rank[{}]", check.name), [check.rank as f64, check.ratio]);
            r.verdict(&format!("rank[{}]", check.name), check.ok());
        }
    }
    if let Some(path) = profile_csv {
        export::write_trajectory(path, &["t", "u", "du", "d2u", "d3u"], &prof.full_orbit())?;
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn hamiltonian(
    g: &GlobalOpts,
    n: usize,
    nu1: Option<f64>,
    nu3: Option<f64>,
    nu_odd: Option<&[f64]>,
    y0: Option<&[f64]>,
    t_end: f64,
    escape_radius: f64,
) -> anyhow::Result<Report> {
    if n < 4 || n % 2 != 0 {
        return Err(UsageError(format!("--n must be even and at least 4, got {n}")).into());
    }
    let m = n / 2;
    let higher: Vec<f64> = match (nu_odd, nu3) {
        (Some(v), _) => v.to_vec(),
        (None, Some(v)) => vec![v],
        (None, None) => Vec::new(),
    };
    if higher.len() > m - 1 {
        return Err(UsageError(format!("at most {} odd parameters for n = {n}", m - 1)).into());
    }
    let mut nu = vec![0.0; n];
    for (k, v) in higher.iter().enumerate() {
        nu[2 * (k + 1)] = *v;
    }
    let sq: f64 = higher.iter().map(|v| v * v).sum();
    nu[0] = match nu1 {
        Some(v) => v,
        None if sq <= 1.0 => -(1.0 - sq).sqrt(),
        None => return Err(UsageError("odd parameters exceed the unit sphere".into()).into()),
    };
    let sys = build_canonical(n, &nu)?;
    let mut start = vec![0.0; n];
    match y0 {
        Some(y) if y.len() == n => start.copy_from_slice(y),
        Some(y) => return Err(UsageError(format!("--y0 needs {n} entries, got {}", y.len())).into()),
        None => start[..4].copy_from_slice(&[0.3, 0.1, -0.2, 0.05]),
    }
    let tol = ToleranceConfig::new(g.tol.max(1e-10), g.tol.max(1e-10), 0.1, 50)?;
    let run = conservation_run(&sys, &start, t_end, escape_radius, &tol)?;
    let rows = |mat: &Matrix| -> Vec<Vec<f64>> { (0..mat.rows()).map(|i| mat.row(i).to_vec()).collect() };
    let mut r = Report::new("hamiltonian");
    r.input("n", n).input("nu", &nu).input("y0", &start).input("t_end", t_end).input("escape_radius", escape_radius);
    r.input("tol", tol.abs_tol);
    r.result("s", rows(&sys.s))
        .result("s_inv", rows(&sys.s_inv))
        .result("b", &sys.b)
        .result("h0", run.h0)
        .result("max_delta_h", run.max_delta_h)
        .result("t_reached", run.t_reached)
        .result("escaped", run.escaped);
    r.budget("max_delta_h", 1e-8);
    r.verdict("energy_conserved", run.max_delta_h <= 1e-8);
    Ok(r)
}

fn classification_report(r: &mut Report, c: &EquilibriumClassification) {
    let ev: Vec<[f64; 2]> = c.eigenvalues.iter().map(|z| [z.re, z.im]).collect();
    r.result("label", c.label.as_str())
        .result("point", &c.point)
        .result("char_coeffs", &c.char_coeffs)
        .result("eigenvalues", ev)
        .result("consistency_residual", c.consistency_residual());
    r.verdict("consistent", c.consistency_residual() <= 1e-8);
}

fn classify(a: &ClassifyArgs) -> anyhow::Result<Output> {
    let modes = [a.nu1.is_some(), a.lambda.is_some(), a.scan.is_some(), a.michelson_c.is_some()];
    if modes.iter().filter(|m| **m).count() != 1 {
        return Err(UsageError("classify needs exactly one of --nu1/--nu3, --lambda, --scan, --michelson-c".into()).into());
    }
    let mut r = Report::new("classify");
    if let (Some(nu1), Some(nu3)) = (a.nu1, a.nu3) {
        r.input("nu1", nu1).input("nu3", nu3);
        classification_report(&mut r, &classify_reversibility_4d(nu1, nu3)?);
    } else if let Some(l) = &a.lambda {
        let lambda: [f64; 4] = l.as_slice().try_into().map_err(|_| UsageError("--lambda needs 4 values".into()))?;
        r.input("lambda", lambda);
        classification_report(&mut r, &classify_region_4d(&FourDParams::new(lambda, 1.0))?);
    } else if let Some(c) = a.michelson_c {
        let s = michelson_spectrum(c)?;
        r.input("c", c);
        r.result("lambda", s.lambda)
            .result("rho", s.rho)
            .result("omega", s.omega)
            .result("divergence_gap", s.divergence_gap)
            .result("label", s.plus.label.as_str());
        r.budget("divergence_gap", 1e-10);
        r.verdict("zero_divergence", s.divergence_gap <= 1e-10).verdict("shilnikov", s.shilnikov);
    } else if let Some(n) = a.scan {
        let pts = scan_reversibility_curve(n)?;
        let rows: Vec<ScanRow> = pts
            .iter()
            .map(|p| ScanRow {
                theta: p.theta,
                nu1: p.nu1,
                nu3: p.nu3,
                label: p.classification.label.as_str().to_string(),
                consistency_residual: p.classification.consistency_residual(),
            })
            .collect();
        r.input("points", n);
        r.result("scan", &rows);
        return Ok(Output::Scan(rows, r));
    } else {
        return Err(UsageError("classify needs --nu1/--nu3, --lambda, --scan or --michelson-c".into()).into());
    }
    Ok(Output::Report(r))
}
