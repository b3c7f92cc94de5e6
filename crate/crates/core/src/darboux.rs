//! Removing a ground-state level (`L = A*A + E₀ → L̃ = AA* + E₀`) and adding
//! one to the free operator.
//!
//! Removal changes the potentials by
//!
//! ```text
//! ũ = u + 4f′
//! ṽ = v + 2fg′ − ff″ + f‴
//! ```

use serde::Serialize;

use crate::catalog;
use crate::error::{Error, Result};
use crate::numgrid::{d, DiffScheme, Grid, GridFunction};
use crate::operator::{
    assemble_l, factorization_identities, lowest_eigenpairs, FactorizationData, PotentialPair, SignConvention,
};
use crate::wronskian::ensure_nonvanishing;

/// `(f, g)` must satisfy both factorization identities to this accuracy before removal.
pub const IDENTITY_TOL: f64 = 1e-4;

/// Relative tolerance for matching eigenvalues of `L` and `L̃`.
pub const MATCH_TOL: f64 = 1e-3;

pub fn remove_eigenvalue(pp: &PotentialPair, fac: &FactorizationData, scheme: DiffScheme) -> Result<PotentialPair> {
    let (r1, r2) = factorization_identities(pp, fac, scheme)?;
    let residual = r1.sup_norm().max(r2.sup_norm());
    if residual.is_nan() || residual >= IDENTITY_TOL {
        return Err(Error::IdentityViolation { residual, tol: IDENTITY_TOL });
    }
    let f = &fac.f;
    let (f1, f2, f3) = (d(f, 1, scheme)?, d(f, 2, scheme)?, d(f, 3, scheme)?);
    let u = pp.u() + f1.scale(4.0);
    let v = pp.v() + (f * d(&fac.g, 1, scheme)?).scale(2.0) - f * &f2 + &f3;
    PotentialPair::new(u, v)
}

#[derive(Clone, Debug, Serialize)]
pub struct IsospectralityReport {
    pub e0: f64,
    pub eigenvalues: Vec<f64>,
    pub eigenvalues_tilde: Vec<f64>,
    pub continuum_threshold: f64,
    /// Multiplicity of `E₀` in the discrete spectrum of `L`.
    pub e0_multiplicity: usize,
    /// Bound states of `L` other than `E₀` that were found again in `L̃`.
    pub shared: Vec<f64>,
    /// Bound states present in one spectrum but not the other.
    pub unmatched: Vec<f64>,
    /// `min |μ − E₀|` over the computed eigenvalues `μ` of `L̃`.
    pub margin: f64,
    /// `|E₀ − λ|` for the first eigenvalue `λ` of `L` above the `E₀` level.
    pub gap: f64,
    pub removed: bool,
    pub passed: bool,
}

/// Matches the bound states of `L̃` (its `k` lowest eigenvalues) against those
/// of `L` (its `k + 2` lowest) on their common grid, over the range both cover.
pub fn removal_isospectrality_check(
    pp: &PotentialPair,
    pp_tilde: &PotentialPair,
    e0: f64,
    k: usize,
) -> Result<IsospectralityReport> {
    pp.u().ensure_same_grid(pp_tilde.u())?;
    let k = k.max(1);
    let spec = lowest_eigenpairs(&assemble_l(pp)?, k + 2)?.eigenvalues;
    let spec_tilde = lowest_eigenpairs(&assemble_l(pp_tilde)?, k)?.eigenvalues;

    let near = |a: f64, b: f64| (a - b).abs() < MATCH_TOL * a.abs().max(b.abs()).max(1.0);
    let e0_multiplicity = spec.iter().filter(|&&l| near(l, e0)).count();
    let gap = spec.iter().find(|&&l| l > e0 && !near(l, e0)).map_or(f64::INFINITY, |l| l - e0);
    let margin = spec_tilde.iter().map(|m| (m - e0).abs()).fold(f64::INFINITY, f64::min);

    let threshold = pp.continuum_threshold();
    let threshold_tilde = pp_tilde.continuum_threshold();
    let top = spec.last().copied().unwrap_or(f64::INFINITY);
    let top_tilde = spec_tilde.last().copied().unwrap_or(f64::INFINITY);
    let within = |x: f64, limit: f64| x < limit || near(x, limit);
    let bound: Vec<f64> =
        spec.iter().copied().filter(|&l| l < threshold - 1e-6 && !near(l, e0) && within(l, top_tilde)).collect();
    let bound_tilde: Vec<f64> =
        spec_tilde.iter().copied().filter(|&l| l < threshold_tilde - 1e-6 && within(l, top)).collect();
    let mut shared = Vec::new();
    let mut unmatched = Vec::new();
    for &l in &bound {
        if bound_tilde.iter().any(|&m| near(l, m)) {
            shared.push(l);
        } else {
            unmatched.push(l);
        }
    }
    for &m in &bound_tilde {
        if !bound.iter().any(|&l| near(l, m)) {
            unmatched.push(m);
        }
    }
    let removed = margin > 0.5 * gap;
    Ok(IsospectralityReport {
        e0,
        eigenvalues: spec,
        eigenvalues_tilde: spec_tilde,
        continuum_threshold: threshold.min(threshold_tilde),
        e0_multiplicity,
        shared,
        unmatched: unmatched.clone(),
        margin,
        gap,
        removed,
        passed: removed && unmatched.is_empty() && e0_multiplicity >= 1,
    })
}

/// `g = (3f′ − f² − u)/2`.
pub fn g_from_f(f: &GridFunction, u: &GridFunction) -> Result<GridFunction> {
    g_from_f_with(f, u, DiffScheme::natural_for(&[f]))
}

pub fn g_from_f_with(f: &GridFunction, u: &GridFunction, scheme: DiffScheme) -> Result<GridFunction> {
    f.ensure_same_grid(u)?;
    Ok((d(f, 1, scheme)?.scale(3.0) - f * f - u).scale(0.5))
}

/// Pointwise residual of the equation a new level `−4κ⁴` imposes on `W`:
///
/// ```text
/// 40W′⁴/W⁴ − 2W⁗/W + 14W‴W′/W² + 13W″²/W² − 64W″W′²/W³
///   + 2u″ + u² − 2u′W′/W + 2u(W′²/W² − 2(W′/W)′) − 16κ⁴ − 4v
/// ```
pub fn addition_residual(w: &GridFunction, pp: &PotentialPair, kappa: f64, scheme: DiffScheme) -> Result<GridFunction> {
    w.ensure_same_grid(pp.u())?;
    ensure_nonvanishing(w)?;
    let r = w.recip();
    let w1 = d(w, 1, scheme)? * &r;
    let w2 = d(w, 2, scheme)? * &r;
    let w3 = d(w, 3, scheme)? * &r;
    let w4 = d(w, 4, scheme)? * &r;
    let (u, v) = (pp.u(), pp.v());
    let l1 = &w1 * &w1;
    let lhs = (&l1 * &l1).scale(40.0) - w4.scale(2.0) + (&w3 * &w1).scale(14.0) + (&w2 * &w2).scale(13.0)
        - (&w2 * &l1).scale(64.0)
        + d(u, 2, scheme)?.scale(2.0)
        + u * u
        - (d(u, 1, scheme)? * &w1).scale(2.0)
        + (u * (&l1 - d(&w1, 1, scheme)?.scale(2.0))).scale(2.0);
    Ok(lhs - v.scale(4.0) - 16.0 * kappa.powi(4))
}

/// The same equation written for `f = W′/W`:
///
/// ```text
/// −2f‴ + 6ff″ + 7f′² − 8f′f² + f⁴ + 2u(f² − 2f′) − 2u′f + u² + 2u″ − 4v − 16κ⁴
/// ```
pub fn addition_residual_f_form(
    f: &GridFunction,
    pp: &PotentialPair,
    kappa: f64,
    scheme: DiffScheme,
) -> Result<GridFunction> {
    f.ensure_same_grid(pp.u())?;
    let (f1, f2, f3) = (d(f, 1, scheme)?, d(f, 2, scheme)?, d(f, 3, scheme)?);
    let (u, v) = (pp.u(), pp.v());
    let ff = f * f;
    let lhs = f3.scale(-2.0) + (f * &f2).scale(6.0) + (&f1 * &f1).scale(7.0) - (&f1 * &ff).scale(8.0)
        + &ff * &ff
        + (u * (&ff - f1.scale(2.0))).scale(2.0)
        - (d(u, 1, scheme)? * f).scale(2.0)
        + u * u
        + d(u, 2, scheme)?.scale(2.0);
    Ok(lhs - v.scale(4.0) - 16.0 * kappa.powi(4))
}

/// Adds the level `−4κ⁴` to `∂⁴`: `W = 1/(√2 + cosh 2κx)`, `f = W′/W`,
/// `g = (3f′ − f²)/2`, and the resulting reflectionless potentials.
pub fn add_eigenvalue_free(kappa: f64, grid: Grid) -> Result<(PotentialPair, FactorizationData)> {
    let entry = catalog::follyton(kappa, grid)?;
    let w = catalog::chi_expr(2.0 * kappa).sample(grid);
    let scheme = DiffScheme::AnalyticPassthrough;
    let f = d(&w, 1, scheme)? / &w;
    let g = g_from_f_with(&f, &GridFunction::zeros(grid), scheme)?;
    let fac = FactorizationData::new(f, g, entry.e0)?.with_convention(SignConvention::Addition);
    Ok((entry.potentials()?, fac))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{c, cosh, sinh};
    use std::f64::consts::SQRT_2;

    const A: DiffScheme = DiffScheme::AnalyticPassthrough;

    fn grid() -> Grid {
        Grid::new(-30.0, 30.0, 1201, false).unwrap()
    }

    #[test]
    fn g_from_f_cases() {
        let g = grid();
        let f = GridFunction::constant(g, 3.0);
        assert!((g_from_f(&f, &GridFunction::zeros(g)).unwrap() + 4.5).sup_norm() < 1e-14);
        let u = (c(2.0) * crate::expr::sech(1.0, 2)).sample(g);
        assert!((g_from_f(&GridFunction::zeros(g), &u).unwrap() + u.scale(0.5)).sup_norm() < 1e-14);
    }

    #[test]
    fn free_addition_closed_forms() {
        let g = grid();
        for kappa in [0.5, 1.0, 2.0] {
            let (pp, fac) = add_eigenvalue_free(kappa, g).unwrap();
            let w = (c(SQRT_2) + cosh(2.0 * kappa)).recip();
            let f = (-2.0 * kappa * sinh(2.0 * kappa) * w.clone()).sample(g);
            assert!((&fac.f - f).sup_norm() < 1e-12);
            let wg = w.sample(g);
            let expected_g = (c(1.0).sample(g) + wg.scale(SQRT_2) - (&wg * &wg).scale(2.0)).scale(-2.0 * kappa * kappa);
            assert!((&fac.g - expected_g).sup_norm() < 1e-12);
            let (r1, r2) = factorization_identities(&pp, &fac, A).unwrap();
            assert!(r1.sup_norm().max(r2.sup_norm()) < 1e-8 * kappa.powi(4).max(1.0));
            assert!(fac.asymptotic_deviation() < 1e-6, "{}", fac.asymptotic_deviation());
            assert_eq!(fac.convention, SignConvention::Addition);
        }
    }

    #[test]
    fn free_round_trip_is_free() {
        let (pp, fac) = add_eigenvalue_free(1.0, grid()).unwrap();
        let t = remove_eigenvalue(&pp, &fac, A).unwrap();
        assert!(t.u().sup_norm() + t.v().sup_norm() < 1e-6);
    }

    #[test]
    fn addition_forms_agree_on_the_free_case() {
        let g = grid();
        for kappa in [0.5, 1.0] {
            let w = catalog::chi_expr(2.0 * kappa).sample(g);
            let free = PotentialPair::free(g);
            let rw = addition_residual(&w, &free, kappa, A).unwrap();
            assert!(rw.sup_norm() < 1e-7, "{}", rw.sup_norm());
            let f = d(&w, 1, A).unwrap() / &w;
            let rf = addition_residual_f_form(&f, &free, kappa, A).unwrap();
            assert!((&rw - &rf).sup_norm() < 1e-7);
        }
        let one = GridFunction::constant(g, 1.0);
        assert_eq!(addition_residual(&one, &PotentialPair::free(g), 0.0, A).unwrap().sup_norm(), 0.0);
    }

    #[test]
    fn removal_refuses_inconsistent_factor() {
        let e = catalog::example(1, grid(), None).unwrap();
        let pp = e.potentials().unwrap();
        let mut fac = e.factorization().unwrap();
        fac.g = fac.g.add_scalar(0.1);
        assert!(matches!(remove_eigenvalue(&pp, &fac, A), Err(Error::IdentityViolation { .. })));
    }

    #[test]
    fn invalid_kappa() {
        assert!(matches!(add_eigenvalue_free(0.0, grid()), Err(Error::InvalidKappa(_))));
    }
}
