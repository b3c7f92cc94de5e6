use std::path::Path;

use quartic::catalog::{self, CatalogEntry};
use quartic::darboux::{removal_isospectrality_check, remove_eigenvalue, IsospectralityReport};
use quartic::flow::{
    delta_q_predicted, evolve_with_snapshots, normalization_target, normalized_delta_q, q_functional,
    traveling_wave_error, EvolutionState, EvolutionSummary,
};
use quartic::operator::{assemble_l, factorization_identities, lowest_eigenpairs, SignConvention};
use quartic::problem::ProblemSpec;
use quartic::verify::verify_example;
use quartic::wronskian::{factor_from_wronskian, hirota_residual, wronskians, WronskianSet};
use quartic::{DiffScheme, FactorizationData, Grid, PotentialPair};
use serde::Serialize;
use serde_json::json;

use crate::failure::Failure;
use crate::output::{columns_csv, emit_json, write_file};
use crate::Source;

/// Potentials plus whatever ground-state data the source provides.
struct Problem {
    name: String,
    pp: PotentialPair,
    e0: Option<f64>,
    wronskians: Option<WronskianSet>,
    entry: Option<CatalogEntry>,
}

impl Problem {
    fn load(source: &Source) -> Result<Self, Failure> {
        match (&source.example, &source.spec) {
            (Some(name), None) => {
                let entry = catalog::lookup(name, Grid::default_decaying())?;
                Ok(Problem {
                    name: entry.name.clone(),
                    pp: entry.potentials()?,
                    e0: Some(entry.e0),
                    wronskians: Some(entry.wronskian_set()?),
                    entry: Some(entry),
                })
            }
            (None, Some(path)) => {
                let spec = load_spec(path)?;
                let wronskians = match spec.psi_pair()? {
                    Some((p, m)) => Some(wronskians(&p, &m, DiffScheme::natural_for(&[&p, &m]))?),
                    None => None,
                };
                Ok(Problem {
                    name: spec.name.clone().unwrap_or_else(|| path.display().to_string()),
                    pp: spec.potentials()?,
                    e0: spec.e0,
                    wronskians,
                    entry: None,
                })
            }
            _ => Err(Failure::BadArguments("give exactly one of --example and --spec".into())),
        }
    }

    fn ground_state(&self) -> Result<(f64, &WronskianSet), Failure> {
        match (self.e0, &self.wronskians) {
            (Some(e0), Some(ws)) => Ok((e0, ws)),
            _ => Err(Failure::BadArguments(format!("{} needs e0 and a psi_plus/psi_minus pair", self.name))),
        }
    }

    fn factorization(&self) -> Result<FactorizationData, Failure> {
        let (e0, ws) = self.ground_state()?;
        let (f, g) = factor_from_wronskian(ws)?;
        Ok(FactorizationData::new(f, g, e0)?.with_convention(SignConvention::Removal))
    }

    fn scheme(&self, fac: &FactorizationData) -> DiffScheme {
        DiffScheme::natural_for(&[self.pp.u(), self.pp.v(), &fac.f, &fac.g])
    }
}

fn load_spec(path: &Path) -> Result<ProblemSpec, Failure> {
    ProblemSpec::from_path(path).map_err(|e| match Failure::from(e) {
        Failure::BadArguments(message) => Failure::BadArguments(format!("{}: {message}", path.display())),
        other => other,
    })
}

pub fn spectrum(spec_path: &Path, k: usize, grid: Option<Grid>, out: &Path) -> Result<(), Failure> {
    if k == 0 {
        return Err(Failure::BadArguments("--k must be at least 1".into()));
    }
    let mut spec = load_spec(spec_path)?;
    if let Some(grid) = grid {
        spec = spec.with_grid(grid)?;
    }
    let pp = spec.potentials()?;
    let result = lowest_eigenpairs(&assemble_l(&pp)?, k)?;
    let names: Vec<String> = (0..k).map(|i| format!("psi_{i}")).collect();
    let columns: Vec<&[f64]> = result.eigenfunctions.iter().take(k).map(|f| f.values()).collect();
    write_file(out, &columns_csv(&spec.grid, &names, &columns))?;
    emit_json(
        &json!({
            "eigenvalues": &result.eigenvalues[..k],
            "degeneracy_groups": result.degeneracy_groups,
            "eigenfunctions": out.display().to_string(),
        }),
        None,
    )
}

#[derive(Serialize)]
struct FactorizeOutput {
    name: String,
    grid: Grid,
    e0: f64,
    kappa: f64,
    convention: SignConvention,
    f: Vec<f64>,
    g: Vec<f64>,
    residuals: Residuals,
}

#[derive(Serialize)]
struct Residuals {
    factorization_identities: f64,
    quadratic_relation: f64,
    hirota: f64,
}

pub fn factorize(source: &Source, out: Option<&Path>) -> Result<(), Failure> {
    let problem = Problem::load(source)?;
    let (e0, ws) = problem.ground_state()?;
    let fac = problem.factorization()?;
    let scheme = problem.scheme(&fac);
    let (r1, r2) = factorization_identities(&problem.pp, &fac, scheme)?;
    let residuals = Residuals {
        factorization_identities: r1.sup_norm().max(r2.sup_norm()),
        quadratic_relation: ws.quadratic_relation_residual()?.sup_norm(),
        hirota: hirota_residual(&ws.w, &problem.pp, e0, ws.scheme)?.sup_norm(),
    };
    let output = FactorizeOutput {
        name: problem.name.clone(),
        grid: *problem.pp.grid(),
        e0,
        kappa: fac.kappa,
        convention: fac.convention,
        f: fac.f.values().to_vec(),
        g: fac.g.values().to_vec(),
        residuals,
    };
    emit_json(&output, out)
}

#[derive(Serialize)]
struct RemoveOutput {
    name: String,
    grid: Grid,
    e0: f64,
    u_tilde: Vec<f64>,
    v_tilde: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    displayed_difference: Option<f64>,
    isospectrality: IsospectralityReport,
}

pub fn remove(source: &Source, k: usize, out: Option<&Path>) -> Result<(), Failure> {
    let problem = Problem::load(source)?;
    let fac = problem.factorization()?;
    let tilde = remove_eigenvalue(&problem.pp, &fac, problem.scheme(&fac))?;
    let displayed_difference = match problem.entry.as_ref().map(CatalogEntry::expected_tilde).transpose()? {
        Some(Some(expected)) => Some((tilde.u() - expected.u()).sup_norm() + (tilde.v() - expected.v()).sup_norm()),
        _ => None,
    };
    let isospectrality = removal_isospectrality_check(&problem.pp, &tilde, fac.e0, k)?;
    let output = RemoveOutput {
        name: problem.name.clone(),
        grid: *tilde.grid(),
        e0: fac.e0,
        u_tilde: tilde.u().values().to_vec(),
        v_tilde: tilde.v().values().to_vec(),
        displayed_difference,
        isospectrality,
    };
    emit_json(&output, out)
}

pub fn qval(source: &Source) -> Result<(), Failure> {
    let problem = Problem::load(source)?;
    let q = q_functional(&problem.pp)?;
    let mut report = json!({ "name": problem.name, "q": q });
    if problem.ground_state().is_ok() {
        let fac = problem.factorization()?;
        let tilde = remove_eigenvalue(&problem.pp, &fac, problem.scheme(&fac))?;
        if let Ok(q_tilde) = q_functional(&tilde) {
            report["q_tilde"] = json!(q_tilde);
            report["delta_q"] = json!(q_tilde - q);
            report["delta_q_predicted"] = json!(delta_q_predicted(fac.kappa)?);
        }
    }
    emit_json(&report, None)
}

pub fn delta_q(kappa: f64) -> Result<(), Failure> {
    let predicted = delta_q_predicted(kappa)?;
    let entry = catalog::follyton(kappa, Grid::default_decaying())?;
    let measured = q_functional(&PotentialPair::free(entry.grid))? - q_functional(&entry.potentials()?)?;
    emit_json(
        &json!({
            "kappa": kappa,
            "delta_q_predicted": predicted,
            "delta_q_measured": measured,
            "relative_error": ((measured - predicted) / predicted).abs(),
            "normalized": normalized_delta_q(predicted),
            "normalization_target": normalization_target(kappa),
        }),
        None,
    )
}

#[derive(Serialize)]
struct Snapshot {
    file: String,
    #[serde(flatten)]
    summary: EvolutionSummary,
}

pub fn evolve(
    initial: &str,
    t_end: f64,
    n: usize,
    dt: f64,
    snap: f64,
    half_width: f64,
    out: &Path,
) -> Result<(), Failure> {
    let grid = Grid::new(-half_width, half_width, n, true)?;
    let entry = catalog::lookup(initial, grid)?;
    let speed = initial.starts_with("follyton").then_some(16.0 * entry.kappa * entry.kappa);
    let state = EvolutionState::from_exprs(&entry.u, &entry.v, grid)?;
    let snapshots = evolve_with_snapshots(&state, dt, t_end, snap)?;

    std::fs::create_dir_all(out)?;
    let mut records = Vec::with_capacity(snapshots.len());
    for (i, s) in snapshots.iter().enumerate() {
        let file = format!("snapshot_{i:04}.csv");
        write_file(&out.join(&file), &s.snapshot_csv())?;
        let error = speed.map(|c| traveling_wave_error(s, &entry.u, &entry.v, c));
        records.push(Snapshot { file, summary: s.summary(error) });
    }
    let last = snapshots.last().expect("the initial state is always recorded");
    let summary = json!({
        "initial": entry.name,
        "grid": grid,
        "dt": dt,
        "speed": speed,
        "final": records.last().map(|r| &r.summary),
        "max_relative_q_drift": snapshots.iter().map(EvolutionState::relative_q_drift).fold(0.0, f64::max),
        "snapshots": records,
    });
    emit_json(&summary, Some(&out.join("summary.json")))?;
    emit_json(&last.summary(speed.map(|c| traveling_wave_error(last, &entry.u, &entry.v, c))), None)
}

pub fn verify(name: &str, out: Option<&Path>) -> Result<(), Failure> {
    let reports = verify_example(name)?;
    emit_json(&reports, out)?;
    let failed: Vec<_> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| json!({ "entry": r.entry, "checks": r.failures().map(|c| &c.name).collect::<Vec<_>>() }))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification {
            message: format!("{} of {} entries failed verification", failed.len(), reports.len()),
            failed: json!(failed),
        })
    }
}
