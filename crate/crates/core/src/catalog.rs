//! Closed-form operators with known ground states.
//!
//! Every entry is kept as expressions and sampled on demand, so all derived
//! quantities carry exact derivatives. `Ψ` below is `sech x`.
//!
//! | name          | `u`                    | `v`                                   | `E₀`   |
//! |---------------|------------------------|---------------------------------------|--------|
//! | `1`           | `−5 + 12Ψ²`            | `−6Ψ²`                                | `−4`   |
//! | `2`           | `16Ψ²`                 | `40Ψ⁴ − 88Ψ²`                         | `−64`  |
//! | `3`           | `0`                    | `45Ψ⁴ − 40Ψ²`                         | `−4`   |
//! | `4`           | `−1 + 4Ψ²`             | `6Ψ² − 8Ψ⁴`                           | `0`    |
//! | `5:k`         | `2(1 + 2/k)Ψ²(x/k)`    | see [`example`]                       | `−4`   |
//! | `follyton:κ`  | `16κ²(√2W − W²)`       | `16κ⁴(√2W − 12W² + 16√2W³ − 8W⁴)`     | `−4κ⁴` |
//!
//! with `W = χ(2κx)` and `χ(y) = 1/(√2 + cosh y)`.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::expr::{c, cos, cosh, sech, sin, sinh, tanh, Expr};
use crate::numgrid::{d, DiffScheme, Grid, GridFunction};
use crate::operator::{e0_of, kappa_of, FactorizationData, PotentialPair, SignConvention};
use crate::problem::ProblemSpec;
use crate::wronskian::{factor_from_wronskian, wronskians, WronskianSet};

const ANALYTIC: DiffScheme = DiffScheme::AnalyticPassthrough;

/// Names accepted by [`lookup`] for `all`.
pub const ALL: [&str; 9] = ["1", "2", "3", "4", "5:1", "5:2", "5:3", "follyton:0.5", "follyton:1"];

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub grid: Grid,
    pub u: Expr,
    pub v: Expr,
    pub u_limits: (f64, f64),
    pub e0: f64,
    pub kappa: f64,
    /// Ground-state pair; for a simple ground state the second member solves
    /// `Aψ = 0` without being normalizable.
    pub psi_pair: Option<(Expr, Expr)>,
    /// `(W, W₁₂)` in closed form.
    pub wronskian_closed_form: Option<(Expr, Expr)>,
    /// `(f, g)` as displayed for the factor `A = −∂² + f∂ + g`.
    pub factor_closed_form: Option<(Expr, Expr)>,
    pub expected_tilde: Option<(Expr, Expr)>,
    pub expected_q: Option<f64>,
    pub expected_q_tilde: Option<f64>,
    pub degenerate: bool,
}

fn psi2(scale: f64) -> Expr {
    sech(scale, 2)
}

fn psi4(scale: f64) -> Expr {
    sech(scale, 4)
}

fn blank(name: &str, grid: Grid, u: Expr, v: Expr, e0: f64) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        grid,
        u,
        v,
        u_limits: (0.0, 0.0),
        e0,
        kappa: kappa_of(e0),
        psi_pair: None,
        wronskian_closed_form: None,
        factor_closed_form: None,
        expected_tilde: None,
        expected_q: None,
        expected_q_tilde: None,
        degenerate: true,
    }
}

/// Examples 1–5; `k` is required (and must be positive) for example 5 only.
pub fn example(n: u32, grid: Grid, k: Option<f64>) -> Result<CatalogEntry> {
    let entry = match n {
        1 => {
            let mut e = blank("1", grid, c(-5.0) + 12.0 * psi2(1.0), -6.0 * psi2(1.0), -4.0);
            e.u_limits = (-5.0, -5.0);
            e.psi_pair = Some((psi2(1.0), sinh(1.0) * psi2(1.0)));
            e.wronskian_closed_form = Some((sech(1.0, 3), 2.0 * sech(1.0, 3)));
            e.factor_closed_form = Some((-3.0 * tanh(1.0), c(-2.0)));
            e.expected_tilde = Some((c(-5.0), c(0.0)));
            e
        }
        2 => {
            let mut e = blank("2", grid, 16.0 * psi2(1.0), 40.0 * psi4(1.0) - 88.0 * psi2(1.0), -64.0);
            e.psi_pair = Some((cos(2.0) * psi2(1.0), sin(2.0) * psi2(1.0)));
            let g = c(-8.0) + 2.0 * psi2(1.0);
            e.wronskian_closed_form = Some((2.0 * psi4(1.0), c(-1.0) * g.clone() * (2.0 * psi4(1.0))));
            e.factor_closed_form = Some((-4.0 * tanh(1.0), g));
            e.expected_tilde = Some((c(0.0), -40.0 * psi2(1.0)));
            e.expected_q = Some(2f64.powi(10) / 7.0 * 4.0 * 687.0);
            e.expected_q_tilde = Some(2f64.powi(10) * 100.0);
            e
        }
        3 => {
            let mut e = blank("3", grid, c(0.0), 45.0 * psi4(1.0) - 40.0 * psi2(1.0), -4.0);
            e.wronskian_closed_form = Some((psi2(1.0), 2.0 * psi2(1.0) - 3.0 * psi4(1.0)));
            e.factor_closed_form = Some((-2.0 * tanh(1.0), c(-2.0) + 3.0 * psi2(1.0)));
            e.expected_tilde = Some((-8.0 * psi2(1.0), 25.0 * psi4(1.0) - 16.0 * psi2(1.0)));
            e
        }
        4 => {
            let mut e = blank("4", grid, c(-1.0) + 4.0 * psi2(1.0), 6.0 * psi2(1.0) - 8.0 * psi4(1.0), 0.0);
            e.u_limits = (-1.0, -1.0);
            e.psi_pair = Some((sech(1.0, 1), tanh(1.0)));
            e.wronskian_closed_form = Some((sech(1.0, 1), sech(1.0, 3)));
            e.factor_closed_form = Some((-1.0 * tanh(1.0), -1.0 * psi2(1.0)));
            e.expected_tilde = Some((c(-1.0), c(0.0)));
            e.degenerate = false;
            e
        }
        5 => {
            let k = match k {
                Some(k) if k.is_finite() && k > 0.0 => k,
                _ => return Err(Error::MissingK),
            };
            let s = 1.0 / k;
            let u = 2.0 * (1.0 + 2.0 / k) * psi2(s);
            let v = -4.0 * (1.0 + 1.0 / k - 1.0 / k.powi(3)) * psi2(s)
                + (1.0 - 1.0 / k) * (1.0 + 5.0 / k + 6.0 / (k * k)) * psi4(s);
            let mut e = blank(&format!("5:{}", fmt_param(k)), grid, u, v, -4.0);
            let envelope = sech(s, k);
            e.psi_pair = Some((cos(1.0) * envelope.clone(), sin(1.0) * envelope));
            e
        }
        _ => return Err(Error::UnknownExample(n.to_string())),
    };
    Ok(entry)
}

/// `χ(y) = 1/(√2 + cosh y)` as an expression in `x` with `y = scale·x`.
pub fn chi_expr(scale: f64) -> Expr {
    (c(SQRT_2) + cosh(scale)).recip()
}

pub fn chi(x: f64) -> f64 {
    1.0 / (SQRT_2 + x.cosh())
}

/// The reflectionless pair conjugate to `∂⁴` with the level `−4κ⁴`.
pub fn follyton(kappa: f64, grid: Grid) -> Result<CatalogEntry> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidKappa(kappa));
    }
    let w = chi_expr(2.0 * kappa);
    let k2 = kappa * kappa;
    let k4 = k2 * k2;
    let u = 16.0 * k2 * (SQRT_2 * w.clone() - w.clone().pow(2));
    let v = 16.0
        * k4
        * (SQRT_2 * w.clone() - 12.0 * w.clone().pow(2) + 16.0 * SQRT_2 * w.clone().pow(3) - 8.0 * w.clone().pow(4));
    let g = -2.0 * k2 * (c(1.0) + SQRT_2 * w.clone() - 2.0 * w.clone().pow(2));
    let f = -2.0 * kappa * sinh(2.0 * kappa) * w.clone();
    let mut e = blank(&format!("follyton:{}", fmt_param(kappa)), grid, u, v, e0_of(kappa));
    e.kappa = kappa;
    e.wronskian_closed_form = Some((w.clone(), c(-1.0) * g.clone() * w));
    e.factor_closed_form = Some((f, g));
    e.expected_tilde = Some((c(0.0), c(0.0)));
    e.expected_q = Some(2f64.powi(14) / 7.0 * kappa.powi(7));
    Ok(e)
}

fn fmt_param(x: f64) -> String {
    format!("{x}")
}

/// Resolves `1`…`4`, `5:k` and `follyton:κ`.
pub fn lookup(name: &str, grid: Grid) -> Result<CatalogEntry> {
    let unknown = || Error::UnknownExample(name.to_string());
    let parse = |s: &str| s.parse::<f64>().map_err(|_| unknown());
    match name.split_once(':') {
        Some(("5", k)) => example(5, grid, Some(parse(k)?)),
        Some(("follyton", k)) => follyton(parse(k)?, grid),
        Some(_) => Err(unknown()),
        None if name == "5" => Err(Error::MissingK),
        None => example(name.parse().map_err(|_| unknown())?, grid, None),
    }
}

/// Expands `all` into the standard entry list; any other name resolves to itself.
pub fn resolve_names(name: &str) -> Vec<String> {
    if name == "all" {
        ALL.iter().map(|s| s.to_string()).collect()
    } else {
        vec![name.to_string()]
    }
}

impl CatalogEntry {
    pub fn potentials(&self) -> Result<PotentialPair> {
        PotentialPair::with_limits(self.u.sample(self.grid), self.v.sample(self.grid), self.u_limits, (0.0, 0.0))
    }

    pub fn psi_pair(&self) -> Option<(GridFunction, GridFunction)> {
        self.psi_pair.as_ref().map(|(p, m)| (p.sample(self.grid), m.sample(self.grid)))
    }

    /// From the ground-state pair when one is known, otherwise from the closed form.
    pub fn wronskian_set(&self) -> Result<WronskianSet> {
        if let Some((p, m)) = self.psi_pair() {
            return wronskians(&p, &m, ANALYTIC);
        }
        let (w, w12) = self
            .wronskian_closed_form
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("entry {} has no Wronskian data", self.name)))?;
        WronskianSet::from_parts(w.sample(self.grid), w12.sample(self.grid), ANALYTIC)
    }

    pub fn factorization(&self) -> Result<FactorizationData> {
        let (f, g) = factor_from_wronskian(&self.wronskian_set()?)?;
        Ok(FactorizationData::new(f, g, self.e0)?.with_convention(SignConvention::Removal))
    }

    pub fn displayed_factor(&self) -> Option<(GridFunction, GridFunction)> {
        self.factor_closed_form.as_ref().map(|(f, g)| (f.sample(self.grid), g.sample(self.grid)))
    }

    pub fn expected_tilde(&self) -> Result<Option<PotentialPair>> {
        self.expected_tilde
            .as_ref()
            .map(|(u, v)| PotentialPair::new(u.sample(self.grid), v.sample(self.grid)))
            .transpose()
    }

    pub fn is_decaying(&self) -> bool {
        self.u_limits == (0.0, 0.0)
    }

    /// Same entry on another grid.
    pub fn on_grid(mut self, grid: Grid) -> Self {
        self.grid = grid;
        self
    }

    pub fn to_problem_spec(&self) -> ProblemSpec {
        let (psi_plus, psi_minus) = match &self.psi_pair {
            Some((p, m)) if self.degenerate => (Some(p.clone().into()), Some(m.clone().into())),
            _ => (None, None),
        };
        ProblemSpec {
            name: Some(self.name.clone()),
            grid: self.grid,
            u: self.u.clone().into(),
            v: self.v.clone().into(),
            e0: Some(self.e0),
            psi_plus,
            psi_minus,
        }
    }
}

/// `true` when the samples die off at both ends (relative to the peak).
pub fn decays_at_ends(gf: &GridFunction) -> bool {
    let peak = gf.sup_norm();
    peak > 0.0 && gf.first().abs().max(gf.last().abs()) < 1e-8 * peak
}

/// Largest pointwise residual of the four polynomial identities for `χ`,
/// `χ″ = χ(1 − 3√2χ + 2χ²)`, `χ′² = χ²(1 − 2√2χ + χ²)`, `χ‴ = χ′(1 − 6√2χ + 6χ²)`,
/// `χ⁗ = χ(1 − 15√2χ + 80χ² − 60√2χ³ + 24χ⁴)`, using exact derivatives.
pub fn chi_identity_residuals(grid: Grid) -> Result<f64> {
    let x = chi_expr(1.0).sample(grid);
    let dx: Vec<GridFunction> = (1..=4).map(|k| d(&x, k, ANALYTIC)).collect::<Result<_>>()?;
    let x2 = &x * &x;
    let x3 = &x2 * &x;
    let x4 = &x2 * &x2;
    let s = SQRT_2;
    let r = [
        &dx[1] - &x * (x.scale(-3.0 * s) + x2.scale(2.0) + 1.0),
        &dx[0] * &dx[0] - &x2 * (x.scale(-2.0 * s) + &x2 + 1.0),
        &dx[2] - &dx[0] * (x.scale(-6.0 * s) + x2.scale(6.0) + 1.0),
        &dx[3] - &x * (x.scale(-15.0 * s) + x2.scale(80.0) - x3.scale(60.0 * s) + x4.scale(24.0) + 1.0),
    ];
    Ok(r.iter().map(GridFunction::sup_norm).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::apply_a;

    fn grid() -> Grid {
        Grid::new(-20.0, 20.0, 801, false).unwrap()
    }

    #[test]
    fn chi_values_and_identities() {
        assert!((chi(0.0) - 0.414_213_562_373_095).abs() < 1e-14);
        let g = grid();
        let dchi = d(&chi_expr(1.0).sample(g), 1, ANALYTIC).unwrap();
        assert_eq!(dchi.values()[g.midpoint_index()], 0.0);
        assert!(chi_identity_residuals(g).unwrap() < 1e-12);
    }

    #[test]
    fn lookup_names() {
        let g = grid();
        assert_eq!(lookup("5:2", g).unwrap().name, "5:2");
        assert_eq!(lookup("follyton:0.5", g).unwrap().e0, -0.25);
        assert!(matches!(lookup("5", g), Err(Error::MissingK)));
        assert!(matches!(lookup("7", g), Err(Error::UnknownExample(_))));
        assert!(matches!(lookup("follyton:-1", g), Err(Error::InvalidKappa(_))));
        assert!(matches!(lookup("bogus:1", g), Err(Error::UnknownExample(_))));
        assert_eq!(resolve_names("all").len(), ALL.len());
        for name in ALL {
            assert_eq!(lookup(name, g).unwrap().name, name);
        }
    }

    #[test]
    fn example1_ground_states_are_annihilated() {
        let e = example(1, grid(), None).unwrap();
        let fac = e.factorization().unwrap();
        let (p, m) = e.psi_pair().unwrap();
        assert!(apply_a(&fac, &p).unwrap().sup_norm() < 1e-12);
        assert!(apply_a(&fac, &m).unwrap().sup_norm() < 1e-12);
    }

    #[test]
    fn example4_second_solution_does_not_decay() {
        let e = example(4, grid(), None).unwrap();
        let (p, m) = e.psi_pair().unwrap();
        assert!(decays_at_ends(&p));
        assert!(!decays_at_ends(&m));
        assert!(!e.degenerate);
    }

    #[test]
    fn entries_serialize_to_problem_specs() {
        let e = example(2, grid(), None).unwrap();
        let spec = ProblemSpec::from_json(&e.to_problem_spec().to_json().unwrap()).unwrap();
        let pp = spec.potentials().unwrap();
        assert!((pp.u() - e.potentials().unwrap().u()).sup_norm() == 0.0);
        assert_eq!(spec.e0, Some(-64.0));
        assert!(spec.psi_pair().unwrap().is_some());
    }

    #[test]
    fn example5_needs_positive_k() {
        assert!(matches!(example(5, grid(), None), Err(Error::MissingK)));
        assert!(matches!(example(5, grid(), Some(0.0)), Err(Error::MissingK)));
        assert!(example(5, grid(), Some(1.5)).is_ok());
        assert!(matches!(example(6, grid(), None), Err(Error::UnknownExample(_))));
    }
}
