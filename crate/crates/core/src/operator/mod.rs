//! The operator `L = ∂⁴ + ∂u∂ + v`, its discretization and spectrum, and the
//! factors of `L − E₀ = A*A`:
//!
//! ```text
//! A  = −∂² + f∂ + g
//! A* = −∂² − f∂ + g − f′
//! ```

#![allow(clippy::needless_range_loop)]

mod banded;
mod spectrum;

use serde::{Deserialize, Serialize};

pub use banded::BandedSymmetric;
pub use spectrum::{lowest_eigenpairs, SpectrumResult};

use crate::error::{Error, Result};
use crate::numgrid::{d, DiffScheme, Grid, GridFunction};

/// Samples within this distance of a declared asymptotic constant count as converged.
pub const LIMIT_TOL: f64 = 1e-8;

/// Potentials `(u, v)` of `L = ∂⁴ + ∂u∂ + v`, with their asymptotic constants
/// at the left and right ends (zero for decaying potentials).
#[derive(Clone, Debug)]
pub struct PotentialPair {
    u: GridFunction,
    v: GridFunction,
    u_limits: (f64, f64),
    v_limits: (f64, f64),
}

impl PotentialPair {
    /// Infers the asymptotic constants from the end samples.
    pub fn new(u: GridFunction, v: GridFunction) -> Result<Self> {
        u.ensure_same_grid(&v)?;
        let snap = |x: f64| if x.abs() < LIMIT_TOL { 0.0 } else { x };
        let u_limits = (snap(u.first()), snap(u.last()));
        let v_limits = (snap(v.first()), snap(v.last()));
        Ok(Self { u, v, u_limits, v_limits })
    }

    /// Declares the asymptotic constants and checks the samples approach them.
    pub fn with_limits(u: GridFunction, v: GridFunction, u_limits: (f64, f64), v_limits: (f64, f64)) -> Result<Self> {
        u.ensure_same_grid(&v)?;
        for (f, (l, r)) in [(&u, u_limits), (&v, v_limits)] {
            if (f.first() - l).abs() > LIMIT_TOL {
                return Err(Error::LimitMismatch { side: "left", found: f.first(), declared: l });
            }
            if (f.last() - r).abs() > LIMIT_TOL {
                return Err(Error::LimitMismatch { side: "right", found: f.last(), declared: r });
            }
        }
        Ok(Self { u, v, u_limits, v_limits })
    }

    pub fn free(grid: Grid) -> Self {
        Self { u: GridFunction::zeros(grid), v: GridFunction::zeros(grid), u_limits: (0.0, 0.0), v_limits: (0.0, 0.0) }
    }

    pub fn u(&self) -> &GridFunction {
        &self.u
    }

    pub fn v(&self) -> &GridFunction {
        &self.v
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    pub fn u_limits(&self) -> (f64, f64) {
        self.u_limits
    }

    pub fn v_limits(&self) -> (f64, f64) {
        self.v_limits
    }

    pub fn is_decaying(&self) -> bool {
        [self.u_limits.0, self.u_limits.1, self.v_limits.0, self.v_limits.1].iter().all(|&l| l == 0.0)
    }

    /// Bottom of the essential spectrum: `min over ends of v∞ − max(u∞, 0)²/4`,
    /// the minimum of the symbol `k⁴ − u∞k² + v∞`.
    pub fn continuum_threshold(&self) -> f64 {
        let side = |u: f64, v: f64| v - u.max(0.0).powi(2) / 4.0;
        side(self.u_limits.0, self.v_limits.0).min(side(self.u_limits.1, self.v_limits.1))
    }
}

/// Which construction produced `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// `f = W′/W` from the Wronskian of a ground-state pair of `L`.
    Removal,
    /// `f = −Ŵ′/Ŵ` from the diverging solution `Ŵ` of the bilinear equation
    /// of the operator a level is added to; since `W = 1/Ŵ` this is again `W′/W`.
    Addition,
}

/// `(f, g, E₀)` defining `A = −∂² + f∂ + g` with `L = A*A + E₀`, `E₀ = −4κ⁴`.
#[derive(Clone, Debug)]
pub struct FactorizationData {
    pub f: GridFunction,
    pub g: GridFunction,
    pub e0: f64,
    pub kappa: f64,
    pub convention: SignConvention,
}

impl FactorizationData {
    pub fn new(f: GridFunction, g: GridFunction, e0: f64) -> Result<Self> {
        f.ensure_same_grid(&g)?;
        if !e0.is_finite() || e0 > 0.0 {
            return Err(Error::InvalidEigenvalue(e0));
        }
        Ok(Self { f, g, e0, kappa: kappa_of(e0), convention: SignConvention::Removal })
    }

    pub fn with_convention(mut self, convention: SignConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn grid(&self) -> &Grid {
        self.f.grid()
    }

    /// Largest deviation of the end values from `f → ∓2κ`, `g → −2κ²` (right/left).
    pub fn asymptotic_deviation(&self) -> f64 {
        let k = self.kappa;
        [
            (self.f.last() + 2.0 * k).abs(),
            (self.f.first() - 2.0 * k).abs(),
            (self.g.last() + 2.0 * k * k).abs(),
            (self.g.first() + 2.0 * k * k).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `κ` with `E₀ = −4κ⁴`.
pub fn kappa_of(e0: f64) -> f64 {
    (-e0 / 4.0).max(0.0).powf(0.25)
}

/// `E₀ = −4κ⁴`.
pub fn e0_of(kappa: f64) -> f64 {
    -4.0 * kappa.powi(4)
}

/// The discretized operator on a non-periodic grid.
#[derive(Clone, Debug)]
pub struct SymmetricOperatorMatrix {
    grid: Grid,
    band: BandedSymmetric,
}

impl SymmetricOperatorMatrix {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn band(&self) -> &BandedSymmetric {
        &self.band
    }
}

const D4: [f64; 4] = [56.0 / 6.0, -39.0 / 6.0, 12.0 / 6.0, -1.0 / 6.0];
const D1: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];

/// Assembles `∂⁴ + ∂u∂ + v` as a symmetric band matrix (half-bandwidth 4).
///
/// `∂⁴` uses the 7-point fourth-order stencil, `∂u∂` is `−Dᵀ diag(u) D` with
/// `D` the 5-point fourth-order first derivative, and `v` sits on the diagonal.
/// Samples outside the box are taken as zero (clamped ends).
pub fn assemble_l(pp: &PotentialPair) -> Result<SymmetricOperatorMatrix> {
    let grid = *pp.grid();
    if grid.is_periodic() {
        return Err(Error::SchemeGridMismatch {
            scheme: DiffScheme::CentralFd4,
            reason: "eigenproblems use clamped ends on a non-periodic grid".into(),
        });
    }
    let n = grid.len();
    let h = grid.spacing();
    let mut band = BandedSymmetric::zeros(n, 4);
    let h4 = h.powi(4);
    for i in 0..n {
        for (d, w) in D4.iter().enumerate() {
            if i >= d {
                band.add(i, i - d, w / h4);
            }
        }
    }
    let u = pp.u().values();
    let h2 = h * h;
    for (k, &uk) in u.iter().enumerate() {
        for o1 in 0..5usize {
            for o2 in 0..=o1 {
                let (w1, w2) = (D1[o1], D1[o2]);
                if w1 == 0.0 || w2 == 0.0 {
                    continue;
                }
                let (i, j) = ((k + o1).checked_sub(2), (k + o2).checked_sub(2));
                if let (Some(i), Some(j)) = (i, j) {
                    if i < n && j < n {
                        band.add(i, j, -uk * w1 * w2 / h2);
                    }
                }
            }
        }
    }
    for (i, &vi) in pp.v().values().iter().enumerate() {
        band.add(i, i, vi);
    }
    Ok(SymmetricOperatorMatrix { grid, band })
}

/// `Lφ = φ⁗ + (uφ′)′ + vφ`.
pub fn apply_l(pp: &PotentialPair, phi: &GridFunction, scheme: DiffScheme) -> Result<GridFunction> {
    pp.u().ensure_same_grid(phi)?;
    let flux = pp.u() * d(phi, 1, scheme)?;
    Ok(d(phi, 4, scheme)? + d(&flux, 1, scheme)? + pp.v() * phi)
}

/// `Aψ = −ψ″ + fψ′ + gψ`.
pub fn apply_a(fac: &FactorizationData, psi: &GridFunction) -> Result<GridFunction> {
    apply_a_with(fac, psi, DiffScheme::natural_for(&[psi]))
}

pub fn apply_a_with(fac: &FactorizationData, psi: &GridFunction, scheme: DiffScheme) -> Result<GridFunction> {
    fac.f.ensure_same_grid(psi)?;
    Ok(-d(psi, 2, scheme)? + &fac.f * d(psi, 1, scheme)? + &fac.g * psi)
}

/// `A*ψ = −ψ″ − fψ′ + (g − f′)ψ`.
pub fn apply_a_star(fac: &FactorizationData, psi: &GridFunction) -> Result<GridFunction> {
    apply_a_star_with(fac, psi, DiffScheme::natural_for(&[psi, &fac.f]))
}

pub fn apply_a_star_with(fac: &FactorizationData, psi: &GridFunction, scheme: DiffScheme) -> Result<GridFunction> {
    fac.f.ensure_same_grid(psi)?;
    let fp = d(&fac.f, 1, scheme)?;
    Ok(-d(psi, 2, scheme)? - &fac.f * d(psi, 1, scheme)? + (&fac.g - fp) * psi)
}

/// Pointwise residuals of `f′ + f² + 2g = −u` and `g² − (fg + g′)′ = v − E₀`.
pub fn factorization_identities(
    pp: &PotentialPair,
    fac: &FactorizationData,
    scheme: DiffScheme,
) -> Result<(GridFunction, GridFunction)> {
    pp.u().ensure_same_grid(&fac.f)?;
    let (f, g) = (&fac.f, &fac.g);
    let first = d(f, 1, scheme)? + f * f + g.scale(2.0) + pp.u();
    let inner = f * g + d(g, 1, scheme)?;
    let second = g * g - d(&inner, 1, scheme)? - pp.v() + fac.e0;
    Ok((first, second))
}

/// Largest of `‖(A*A + E₀)φ − Lφ‖∞ / ‖φ‖∞` over the probes and of the two
/// pointwise factorization identities.
pub fn factorization_residual(pp: &PotentialPair, fac: &FactorizationData, probes: &[GridFunction]) -> Result<f64> {
    let scheme = DiffScheme::natural_for(&[pp.u(), pp.v(), &fac.f, &fac.g]);
    let (r1, r2) = factorization_identities(pp, fac, scheme)?;
    let mut worst = r1.sup_norm().max(r2.sup_norm());
    for phi in probes {
        let s = if scheme == DiffScheme::AnalyticPassthrough { DiffScheme::natural_for(&[phi]) } else { scheme };
        let a_phi = apply_a_with(fac, phi, s)?;
        let lhs = apply_a_star_with(fac, &a_phi, s)? + phi.scale(fac.e0);
        let rhs = apply_l(pp, phi, s)?;
        let scale = phi.sup_norm().max(f64::MIN_POSITIVE);
        worst = worst.max((lhs - rhs).sup_norm() / scale);
    }
    Ok(worst)
}

/// Gaussian bumps well inside the box, carrying jets.
pub fn probe_functions(grid: &Grid) -> Vec<GridFunction> {
    let span = grid.length();
    let mid = 0.5 * (grid.x_min() + grid.x_max());
    let width = (span / 40.0).clamp(0.25, 1.0);
    [-0.15, -0.04, 0.0, 0.07, 0.2]
        .iter()
        .map(|&frac| {
            let c = mid + frac * span * 0.5;
            GridFunction::from_jet_fn(*grid, move |x| {
                let z = (x + (-c)) * (1.0 / width);
                (-(z * z)).exp()
            })
        })
        .collect()
}
