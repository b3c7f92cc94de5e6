//! Wronskians of a ground-state pair and what follows from them.
//!
//! For a pair `ψ₊, ψ₋` with `Lψ± = E₀ψ±`:
//!
//! ```text
//! W   = ψ₊ψ₋′  − ψ₋ψ₊′
//! W₁₂ = ψ₊′ψ₋″ − ψ₊″ψ₋′
//! W₂₃ = ψ₊″ψ₋‴ − ψ₊‴ψ₋″
//! ```
//!
//! The factor of `L − E₀` is `f = W′/W`, `g = −W₁₂/W`, and the potentials are
//! recovered as `u = (2W₁₂ − W″)/W`, `v = E₀ + W₁₂²/W² + (W₁₂′/W)′`.

use crate::error::{Error, Result};
use crate::numgrid::{d, DiffScheme, GridFunction};
use crate::operator::PotentialPair;

/// Quotients by `W` are refused when `min |W|` falls below this.
pub const W_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug)]
pub struct WronskianSet {
    pub w: GridFunction,
    pub w12: GridFunction,
    pub w23: GridFunction,
    /// Scheme used for every further derivative of the set.
    pub scheme: DiffScheme,
    /// `[W′, W″, W₁₂′, W₁₂″]` expanded in derivatives of the pair, when the
    /// set was built from one.
    pair_derivatives: Option<Box<[GridFunction; 4]>>,
}

pub fn wronskians(psi_plus: &GridFunction, psi_minus: &GridFunction, scheme: DiffScheme) -> Result<WronskianSet> {
    psi_plus.ensure_same_grid(psi_minus)?;
    let derivatives = |psi: &GridFunction| -> Result<Vec<GridFunction>> {
        let mut out = vec![psi.clone()];
        for k in 1..=4 {
            out.push(d(psi, k, scheme)?);
        }
        Ok(out)
    };
    let (p, m) = (derivatives(psi_plus)?, derivatives(psi_minus)?);
    let det = |i: usize, j: usize| &p[i] * &m[j] - &m[i] * &p[j];
    let w = det(0, 1);
    let size = (&p[0] * &m[1]).sup_norm() + (&m[0] * &p[1]).sup_norm();
    if w.sup_norm() <= 1e-10 * size || size == 0.0 {
        return Err(Error::LinearDependence { max_abs_w: w.sup_norm() });
    }
    let pair_derivatives = Box::new([det(0, 2), det(1, 2) + det(0, 3), det(1, 3), det(2, 3) + det(1, 4)]);
    Ok(WronskianSet { w, w12: det(1, 2), w23: det(2, 3), scheme, pair_derivatives: Some(pair_derivatives) })
}

impl WronskianSet {
    /// Builds the set from `W` and `W₁₂` alone, filling `W₂₃` from the
    /// quadratic relation `W·W₂₃ = W₁₂′W′ − W₁₂W″ + W₁₂²`.
    pub fn from_parts(w: GridFunction, w12: GridFunction, scheme: DiffScheme) -> Result<Self> {
        w.ensure_same_grid(&w12)?;
        ensure_nonvanishing(&w)?;
        let rhs = d(&w12, 1, scheme)? * d(&w, 1, scheme)? - &w12 * d(&w, 2, scheme)? + &w12 * &w12;
        let w23 = rhs / &w;
        Ok(Self { w, w12, w23, scheme, pair_derivatives: None })
    }

    /// `W⁽ᵏ⁾` for `k = 1, 2`.
    pub fn w_derivative(&self, k: usize) -> Result<GridFunction> {
        self.derivative(0, k)
    }

    /// `W₁₂⁽ᵏ⁾` for `k = 1, 2`.
    pub fn w12_derivative(&self, k: usize) -> Result<GridFunction> {
        self.derivative(1, k)
    }

    fn derivative(&self, which: usize, k: usize) -> Result<GridFunction> {
        match (&self.pair_derivatives, k) {
            (Some(cached), 1 | 2) => Ok(cached[2 * which + k - 1].clone()),
            _ => d(if which == 0 { &self.w } else { &self.w12 }, k, self.scheme),
        }
    }

    /// Pointwise `W·W₂₃ − (W₁₂′W′ − W₁₂W″ + W₁₂²)`.
    pub fn quadratic_relation_residual(&self) -> Result<GridFunction> {
        let w12 = &self.w12;
        let rhs = self.w12_derivative(1)? * self.w_derivative(1)? - w12 * self.w_derivative(2)? + w12 * w12;
        Ok(&self.w * &self.w23 - rhs)
    }

    /// The same set for the pair `(cψ₊, cψ₋)`.
    pub fn scaled(&self, c: f64) -> Self {
        let c2 = c * c;
        Self {
            w: self.w.scale(c2),
            w12: self.w12.scale(c2),
            w23: self.w23.scale(c2),
            scheme: self.scheme,
            pair_derivatives: self.pair_derivatives.as_ref().map(|ds| Box::new(ds.clone().map(|g| g.scale(c2)))),
        }
    }
}

/// `true` iff `min |W| > 1e-300` and `W` keeps one sign on the grid.
pub fn check_wronskian_positive(ws: &WronskianSet) -> bool {
    ensure_nonvanishing(&ws.w).is_ok()
}

pub(crate) fn ensure_nonvanishing(w: &GridFunction) -> Result<()> {
    let min_abs = w.values().iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    let one_sign = w.min() > 0.0 || w.max() < 0.0;
    if min_abs > W_FLOOR && one_sign {
        Ok(())
    } else {
        Err(Error::WronskianVanishes { min_abs_w: min_abs })
    }
}

/// `(f, g) = (W′/W, −W₁₂/W)`.
pub fn factor_from_wronskian(ws: &WronskianSet) -> Result<(GridFunction, GridFunction)> {
    ensure_nonvanishing(&ws.w)?;
    let f = ws.w_derivative(1)? / &ws.w;
    let g = -(&ws.w12 / &ws.w);
    Ok((f, g))
}

/// `u = (2W₁₂ − W″)/W` and `v = E₀ + W₁₂²/W² + (W₁₂′/W)′`, with the
/// integration constant of the first relation taken to be zero.
pub fn potentials_from_wronskian(ws: &WronskianSet, e0: f64) -> Result<PotentialPair> {
    ensure_nonvanishing(&ws.w)?;
    let (w, w12) = (&ws.w, &ws.w12);
    let u = (w12.scale(2.0) - ws.w_derivative(2)?) / w;
    let ratio = w12 / w;
    let w_prime = ws.w_derivative(1)? / w;
    let w12_prime = ws.w12_derivative(1)?;
    // (W₁₂′/W)′ = W₁₂″/W − (W₁₂′/W)(W′/W)
    let v = &ratio * &ratio + ws.w12_derivative(2)? / w - (&w12_prime / w) * &w_prime + e0;
    PotentialPair::new(u, v)
}

/// Pointwise residual of `4(v − E₀) = (W″/W + u)² + 2(W‴/W + u′ + uW′/W)′`.
pub fn hirota_residual(w: &GridFunction, pp: &PotentialPair, e0: f64, scheme: DiffScheme) -> Result<GridFunction> {
    w.ensure_same_grid(pp.u())?;
    ensure_nonvanishing(w)?;
    let u = pp.u();
    let first = d(w, 2, scheme)? / w + u;
    let inner = d(w, 3, scheme)? / w + d(u, 1, scheme)? + u * (d(w, 1, scheme)? / w);
    let rhs = &first * &first + d(&inner, 1, scheme)?.scale(2.0);
    Ok((pp.v() - e0).scale(4.0) - rhs)
}

/// `φ± = ψ±/√W`, a pair with unit Wronskian. When `W < 0` the sign of `ψ₋`
/// is flipped first.
pub fn liouville_pair(
    psi_plus: &GridFunction,
    psi_minus: &GridFunction,
    w: &GridFunction,
) -> Result<(GridFunction, GridFunction)> {
    psi_plus.ensure_same_grid(psi_minus)?;
    psi_plus.ensure_same_grid(w)?;
    ensure_nonvanishing(w)?;
    let (minus, w) = if w.max() < 0.0 { (-psi_minus, -w) } else { (psi_minus.clone(), w.clone()) };
    let root = w.sqrt();
    Ok((psi_plus / &root, &minus / &root))
}
