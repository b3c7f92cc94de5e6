//! One line per acceptance criterion; exits non-zero if any fails.

use std::time::{Duration, Instant};

use quartic::catalog::{self, chi_identity_residuals};
use quartic::darboux::remove_eigenvalue;
use quartic::expr::sech;
use quartic::flow::{
    delta_q_predicted, evolve, normalization_target, normalized_delta_q, q_functional, traveling_wave_error,
    EvolutionState,
};
use quartic::operator::factorization_identities;
use quartic::verify::{verify_entry, VerificationReport};
use quartic::wronskian::{factor_from_wronskian, potentials_from_wronskian, wronskians};
use quartic::{DiffScheme, Grid, GridFunction};

const ANALYTIC: DiffScheme = DiffScheme::AnalyticPassthrough;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn relative(measured: f64, expected: f64) -> f64 {
    (measured - expected).abs() / expected.abs()
}

fn q_triple_example_two() -> Outcome {
    let start = Instant::now();
    let entry = catalog::example(2, Grid::default_decaying(), None).unwrap();
    let pp = entry.potentials().unwrap();
    let tilde = remove_eigenvalue(&pp, &entry.factorization().unwrap(), ANALYTIC).unwrap();
    let q = q_functional(&pp).unwrap();
    let q_tilde = q_functional(&tilde).unwrap();
    let elapsed = start.elapsed();
    let errors =
        [relative(q, 2_813_952.0 / 7.0), relative(q_tilde, 102_400.0), relative(q_tilde - q, -(2f64.powi(21)) / 7.0)];
    let worst = errors.iter().copied().fold(0.0, f64::max);
    outcome(
        worst < 1e-3 && elapsed < Duration::from_secs(1),
        format!("Q = {q:.4}, Q~ = {q_tilde:.4}, dQ = {:.4}, worst rel err {worst:.1e}, {elapsed:.2?}", q_tilde - q),
    )
}

fn delta_q_law() -> Outcome {
    let mut worst = 0.0_f64;
    let mut worst_norm = 0.0_f64;
    for kappa in [0.5, 1.0, 2.0] {
        let entry = catalog::follyton(kappa, Grid::default_decaying()).unwrap();
        let q = q_functional(&entry.potentials().unwrap()).unwrap();
        worst = worst.max(relative(q - 0.0, 2f64.powi(14) / 7.0 * kappa.powi(7)));
        let predicted = delta_q_predicted(kappa).unwrap();
        worst_norm = worst_norm.max((normalized_delta_q(predicted) - normalization_target(kappa)).abs());
    }
    outcome(
        worst < 1e-3 && worst_norm < 1e-12,
        format!("worst rel err of Q {worst:.1e}, normalization defect {worst_norm:.1e}"),
    )
}

fn spectral_ground_truth(reports: &[VerificationReport], elapsed: Duration) -> Outcome {
    let mut lines = Vec::new();
    let mut passed = elapsed < Duration::from_secs(180);
    for r in reports {
        let ok = r.check("lowest_eigenvalue").unwrap().passed && r.check("multiplicity").unwrap().passed;
        passed &= ok;
        lines.push(format!("{}: {:.6} x{}", r.entry, r.eigenvalues[0], r.e0_multiplicity));
    }
    outcome(passed, format!("{} ({elapsed:.1?})", lines.join(", ")))
}

fn removal_correctness(reports: &[VerificationReport]) -> Outcome {
    let mut passed = true;
    let mut worst_displayed = 0.0_f64;
    let mut worst_free = 0.0_f64;
    for r in reports {
        let removal = r.check("removal");
        match r.entry.as_str() {
            "1" | "2" | "3" | "4" => worst_displayed = worst_displayed.max(removal.unwrap().value),
            name if name.starts_with("follyton") => worst_free = worst_free.max(removal.unwrap().value),
            _ => {}
        }
        passed &= r.isospectrality.as_ref().is_some_and(|iso| iso.passed && iso.removed);
    }
    passed &= worst_displayed < 1e-5 && worst_free < 1e-6;
    outcome(
        passed,
        format!(
            "displayed L~ diff {worst_displayed:.1e}, follyton |u~|+|v~| {worst_free:.1e}, E0 absent from every L~"
        ),
    )
}

/// `f, g, u, v` after replacing the pair by `M·(ψ₊, ψ₋)` for an invertible `M`.
fn basis_change_defect(entry: &catalog::CatalogEntry) -> f64 {
    let (p, m) = entry.psi_pair().unwrap();
    let ws = wronskians(&p, &m, ANALYTIC).unwrap();
    let (f, g) = factor_from_wronskian(&ws).unwrap();
    let pp = potentials_from_wronskian(&ws, entry.e0).unwrap();
    let (a, b, c, d) = (1.9 * 0.7f64.cos(), 1.9 * 0.7f64.sin(), -0.4, 1.3);
    let p2 = p.scale(a) + m.scale(b);
    let m2 = p.scale(c) + m.scale(d);
    let ws2 = wronskians(&p2, &m2, ANALYTIC).unwrap();
    let (f2, g2) = factor_from_wronskian(&ws2).unwrap();
    let pp2 = potentials_from_wronskian(&ws2, entry.e0).unwrap();
    let diff = |x: &GridFunction, y: &GridFunction| (x - y).sup_norm();
    [diff(&f, &f2), diff(&g, &g2), diff(pp.u(), pp2.u()), diff(pp.v(), pp2.v())].into_iter().fold(0.0, f64::max)
}

fn identity_suite(reports: &[VerificationReport]) -> Outcome {
    let identity_checks = [
        "factorization_identities",
        "quadratic_relation",
        "round_trip",
        "displayed_factor",
        "hirota",
        "addition",
        "addition_f_form",
    ];
    let mut worst = 0.0_f64;
    let mut worst_liouville = 0.0_f64;
    let mut signs = true;
    for r in reports {
        for c in r.checks.iter().filter(|c| identity_checks.contains(&c.name.as_str())) {
            worst = worst.max(if c.value.is_nan() { f64::INFINITY } else { c.value });
        }
        if let Some(c) = r.check("liouville_unit_wronskian") {
            worst_liouville = worst_liouville.max(c.value);
        }
        signs &= r.check("wronskian_sign_constant").unwrap().passed;
    }
    let chi = chi_identity_residuals(Grid::new(-20.0, 20.0, 2001, false).unwrap()).unwrap();
    let window = Grid::new(-15.0, 15.0, 1501, false).unwrap();
    let basis = ["1", "2", "4", "5:1", "5:2", "5:3"]
        .iter()
        .map(|n| basis_change_defect(&catalog::lookup(n, window).unwrap()))
        .fold(0.0, f64::max);
    outcome(
        worst < 1e-6 && worst_liouville < 1e-8 && chi < 1e-12 && signs && basis < 1e-8,
        format!(
            "identities {worst:.1e}, Liouville {worst_liouville:.1e}, chi {chi:.1e}, W sign-constant: {signs}, basis change {basis:.1e}"
        ),
    )
}

fn flow_verification() -> Outcome {
    let start = Instant::now();
    let grid = Grid::new(-24.0 * std::f64::consts::PI, 24.0 * std::f64::consts::PI, 512, true).unwrap();
    let entry = catalog::follyton(0.5, grid).unwrap();
    let initial = EvolutionState::from_exprs(&entry.u, &entry.v, grid).unwrap();
    let end = evolve(&initial, 1e-3, 500).unwrap();
    let error = traveling_wave_error(&end, &entry.u, &entry.v, 16.0 * 0.25);
    let drift = end.relative_q_drift();
    let elapsed = start.elapsed();
    outcome(
        (end.t - 0.5).abs() < 1e-9 && error < 1e-4 && drift < 1e-6 && elapsed < Duration::from_secs(30),
        format!("t = {:.3}, sup err vs shift 2.0 = {error:.1e}, Q drift {drift:.1e}, {elapsed:.2?}", end.t),
    )
}

fn negative_control() -> Outcome {
    let mut entry = catalog::example(1, Grid::default_decaying(), None).unwrap();
    entry.v = entry.v + 0.5 * sech(1.0, 2);
    let pp = entry.potentials().unwrap();
    let (r1, r2) = factorization_identities(&pp, &entry.factorization().unwrap(), ANALYTIC).unwrap();
    let residual = r1.sup_norm().max(r2.sup_norm());
    let report = verify_entry(&entry).unwrap();
    outcome(
        residual > 1e-2 && !report.passed,
        format!("perturbed residual {residual:.3e}, suite passed: {}", report.passed),
    )
}

fn main() {
    let start = Instant::now();
    let reports: Vec<VerificationReport> = catalog::ALL
        .iter()
        .map(|n| verify_entry(&catalog::lookup(n, Grid::default_decaying()).unwrap()).unwrap())
        .collect();
    let sweep = start.elapsed();

    let results = [
        ("1 Example 2 Q-triple", q_triple_example_two()),
        ("2 dQ law and normalization", delta_q_law()),
        ("3 spectral ground truth", spectral_ground_truth(&reports, sweep)),
        ("4 removal correctness", removal_correctness(&reports)),
        ("5 identity suite", identity_suite(&reports)),
        ("6 flow verification", flow_verification()),
        ("7 negative control", negative_control()),
    ];
    let mut failures = 0;
    for (name, result) in &results {
        let status = if result.passed { "PASS" } else { "FAIL" };
        println!("acceptance {name}: {status} ({})", result.detail);
        failures += usize::from(!result.passed);
    }
    println!("acceptance total: {} of {} passed in {:.1?}", results.len() - failures, results.len(), start.elapsed());
    if failures > 0 {
        std::process::exit(1);
    }
}
