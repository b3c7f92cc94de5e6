use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{Grid, GridFunction};
use crate::error::{Error, Result};

pub const MAX_DIFF_ORDER: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffScheme {
    /// Fourth-order finite differences: centered in the interior, one-sided of
    /// matching accuracy near the ends.
    CentralFd4,
    /// FFT differentiation on periodic grids.
    PeriodicSpectral,
    /// Exact derivatives read off the Taylor jets carried by closed-form samples.
    AnalyticPassthrough,
}

impl DiffScheme {
    /// Analytic when every function carries jets, otherwise the grid's numeric scheme.
    pub fn natural_for(fs: &[&GridFunction]) -> DiffScheme {
        if fs.iter().all(|f| f.jets().is_some()) {
            DiffScheme::AnalyticPassthrough
        } else if fs.first().is_some_and(|f| f.grid().is_periodic()) {
            DiffScheme::PeriodicSpectral
        } else {
            DiffScheme::CentralFd4
        }
    }
}

/// Derivative of order `1..=5` of sampled data.
pub fn differentiate(gf: &GridFunction, order: usize, scheme: DiffScheme) -> Result<GridFunction> {
    if order == 0 || order > MAX_DIFF_ORDER {
        return Err(Error::UnsupportedOrder { order, scheme });
    }
    match scheme {
        DiffScheme::CentralFd4 => Ok(fd4(gf, order)),
        DiffScheme::PeriodicSpectral => spectral(gf, order),
        DiffScheme::AnalyticPassthrough => analytic(gf, order),
    }
}

fn analytic(gf: &GridFunction, order: usize) -> Result<GridFunction> {
    let scheme = DiffScheme::AnalyticPassthrough;
    let jets = gf
        .jets()
        .ok_or_else(|| Error::SchemeGridMismatch { scheme, reason: "function carries no analytic jets".into() })?;
    let mut out = Vec::with_capacity(jets.len());
    for j in jets {
        let mut d = *j;
        for _ in 0..order {
            d = d.differentiate().ok_or(Error::UnsupportedOrder { order, scheme })?;
        }
        out.push(d);
    }
    Ok(GridFunction::from_jets(*gf.grid(), out))
}

fn spectral(gf: &GridFunction, order: usize) -> Result<GridFunction> {
    let grid = gf.grid();
    if !grid.is_periodic() {
        return Err(Error::SchemeGridMismatch {
            scheme: DiffScheme::PeriodicSpectral,
            reason: "grid is not periodic".into(),
        });
    }
    let n = grid.len();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex64> = gf.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fwd.process(&mut buf);
    let mult = spectral_multipliers(grid, order);
    for (b, m) in buf.iter_mut().zip(&mult) {
        *b *= m;
    }
    inv.process(&mut buf);
    let scale = 1.0 / n as f64;
    Ok(GridFunction::from_raw(*grid, buf.iter().map(|c| c.re * scale).collect()))
}

/// Signed angular wavenumbers in FFT order.
pub(crate) fn wavenumbers(grid: &Grid) -> Vec<f64> {
    let n = grid.len();
    let dk = 2.0 * std::f64::consts::PI / grid.length();
    (0..n).map(|j| if j <= n / 2 { j as f64 } else { j as f64 - n as f64 }).map(|j| j * dk).collect()
}

/// `(ik)^order` per mode; the Nyquist mode is zeroed for odd orders to keep real data real.
pub(crate) fn spectral_multipliers(grid: &Grid, order: usize) -> Vec<Complex64> {
    let n = grid.len();
    wavenumbers(grid)
        .into_iter()
        .enumerate()
        .map(|(j, k)| {
            if n.is_multiple_of(2) && j == n / 2 && order % 2 == 1 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, k).powu(order as u32)
            }
        })
        .collect()
}

fn centered_half_width(order: usize) -> usize {
    // 4th-order centered stencils: 5, 5, 7, 7, 9 points
    order.div_ceil(2) + 1
}

fn fd4(gf: &GridFunction, order: usize) -> GridFunction {
    let grid = gf.grid();
    let n = grid.len();
    let h = grid.spacing();
    let y = gf.values();
    let scale = h.powi(order as i32);
    let r = centered_half_width(order);

    if grid.is_periodic() {
        let offsets: Vec<f64> = (-(r as i64)..=r as i64).map(|o| o as f64).collect();
        let w = fornberg_weights(0.0, &offsets, order);
        let out = (0..n)
            .map(|i| w.iter().enumerate().map(|(k, wk)| wk * y[(i + n + k - r) % n]).sum::<f64>() / scale)
            .collect();
        return GridFunction::from_raw(*grid, out);
    }

    let one_sided = order + 4;
    let centered: Vec<f64> = {
        let offsets: Vec<f64> = (-(r as i64)..=r as i64).map(|o| o as f64).collect();
        fornberg_weights(0.0, &offsets, order)
    };
    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate() {
        if i >= r && i + r < n {
            *o = centered.iter().enumerate().map(|(k, wk)| wk * y[i + k - r]).sum::<f64>() / scale;
        } else {
            let start = if i < r { 0 } else { n - one_sided };
            let offsets: Vec<f64> = (start..start + one_sided).map(|j| j as f64 - i as f64).collect();
            let w = fornberg_weights(0.0, &offsets, order);
            *o = w.iter().enumerate().map(|(k, wk)| wk * y[start + k]).sum::<f64>() / scale;
        }
    }
    GridFunction::from_raw(*grid, out)
}

/// Finite-difference weights for the `m`-th derivative at `z` from nodes `x`
/// (Fornberg's recursion, unit spacing in whatever units `x` is given).
pub fn fornberg_weights(z: f64, x: &[f64], m: usize) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn fornberg_reproduces_textbook_stencils() {
        let w = fornberg_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 1);
        let expect = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect) {
            assert_relative_eq!(*a, b, epsilon = 1e-14);
        }
        let w4 = fornberg_weights(0.0, &[-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0], 4);
        let expect4 = [-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0].map(|v| v / 6.0);
        for (a, b) in w4.iter().zip(expect4) {
            assert_relative_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn spectral_derivative_of_sine() {
        let g = Grid::new(0.0, 2.0 * PI, 256, true).unwrap();
        let s = GridFunction::from_fn(g, f64::sin);
        let d = differentiate(&s, 1, DiffScheme::PeriodicSpectral).unwrap();
        let err = d.values().iter().zip(g.points()).map(|(v, x)| (v - x.cos()).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "err = {err:e}");
    }

    #[test]
    fn chi_second_derivative_identity() {
        // χ = 1/(√2 + cosh x), χ″ = χ(1 − 3√2 χ + 2χ²)
        let s2 = 2f64.sqrt();
        let chi = |x: f64| 1.0 / (s2 + x.cosh());
        let g = Grid::new(-20.0, 20.0, 2001, false).unwrap();
        let f = GridFunction::from_fn(g, chi);
        let d2 = differentiate(&f, 2, DiffScheme::CentralFd4).unwrap();
        let err = g
            .points()
            .zip(d2.values())
            .map(|(x, d)| {
                let c = chi(x);
                (d - c * (1.0 - 3.0 * s2 * c + 2.0 * c * c)).abs()
            })
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "err = {err:e}");

        let fj = GridFunction::from_jet_fn(g, |x| (x.cosh() + s2).recip());
        let d2a = differentiate(&fj, 2, DiffScheme::AnalyticPassthrough).unwrap();
        let err_a = g
            .points()
            .zip(d2a.values())
            .map(|(x, d)| {
                let c = chi(x);
                (d - c * (1.0 - 3.0 * s2 * c + 2.0 * c * c)).abs()
            })
            .fold(0.0, f64::max);
        assert!(err_a < 1e-14, "err = {err_a:e}");
    }

    #[test]
    fn constants_differentiate_to_zero() {
        let g = Grid::new(-3.0, 3.0, 64, false).unwrap();
        let c = GridFunction::from_fn(g, |_| 2.5);
        for order in 1..=5 {
            let d = differentiate(&c, order, DiffScheme::CentralFd4).unwrap();
            assert!(d.sup_norm() * g.spacing().powi(order as i32) < 1e-12, "order {order}");
        }
        let p = Grid::new(0.0, 1.0, 64, true).unwrap();
        let cp = GridFunction::from_fn(p, |_| 2.5);
        for order in 1..=5 {
            assert!(differentiate(&cp, order, DiffScheme::PeriodicSpectral).unwrap().sup_norm() < 1e-9);
        }
    }

    #[test]
    fn fd4_converges_at_fourth_order() {
        let err = |n: usize, order: usize| {
            let g = Grid::new(-4.0, 4.0, n, false).unwrap();
            let f = GridFunction::from_fn(g, |x| (-x * x).exp());
            let d = differentiate(&f, order, DiffScheme::CentralFd4).unwrap();
            let exact = GridFunction::from_jet_fn(g, |x| (-(x * x)).exp());
            let e = differentiate(&exact, order, DiffScheme::AnalyticPassthrough).unwrap();
            (&d - &e).sup_norm()
        };
        for order in 1..=5 {
            let ratio = err(201, order) / err(401, order);
            assert!(ratio > 12.0, "order {order}: ratio {ratio}");
        }
    }

    #[test]
    fn errors() {
        let g = Grid::new(0.0, 1.0, 32, false).unwrap();
        let f = GridFunction::from_fn(g, |x| x);
        assert!(matches!(differentiate(&f, 6, DiffScheme::CentralFd4), Err(Error::UnsupportedOrder { .. })));
        assert!(matches!(differentiate(&f, 0, DiffScheme::CentralFd4), Err(Error::UnsupportedOrder { .. })));
        assert!(matches!(differentiate(&f, 1, DiffScheme::PeriodicSpectral), Err(Error::SchemeGridMismatch { .. })));
        assert!(matches!(differentiate(&f, 1, DiffScheme::AnalyticPassthrough), Err(Error::SchemeGridMismatch { .. })));
    }
}
