use nalgebra::{DMatrix, SymmetricEigen};

use super::SymmetricOperatorMatrix;
use crate::error::{Error, Result};
use crate::numgrid::{integrate, Grid, GridFunction};

/// Relative tolerance under which two eigenvalues count as one degenerate level.
pub const CLUSTER_TOL: f64 = 1e-6;

// eigenvalues closer than this (relative) share one inverse-iteration block
const BLOCK_GAP: f64 = 1e-4;
const GUARD_VECTORS: usize = 2;
const MAX_ITERATIONS: usize = 50;

/// Lowest eigenpairs of a discretized operator.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// Normalized under grid quadrature.
    pub eigenfunctions: Vec<GridFunction>,
    /// Index groups with `|λᵢ − λⱼ| < 1e-6·max(1, |λ|)`.
    pub degeneracy_groups: Vec<Vec<usize>>,
}

impl SpectrumResult {
    pub fn multiplicity_of_lowest(&self) -> usize {
        self.degeneracy_groups.first().map_or(0, Vec::len)
    }
}

fn scale(lambda: f64) -> f64 {
    lambda.abs().max(1.0)
}

/// The `k` smallest eigenvalues with their eigenvectors.
///
/// Eigenvalues are located by bisection on the Sturm count of the band
/// matrix, eigenvectors by shifted block inverse iteration followed by a
/// Rayleigh–Ritz step. Within a degenerate pair the basis is rotated so the
/// second function vanishes at the grid midpoint and the first is positive
/// there; the second is then signed to rise through the midpoint.
pub fn lowest_eigenpairs(m: &SymmetricOperatorMatrix, k: usize) -> Result<SpectrumResult> {
    if k == 0 {
        return Err(Error::InvalidArgument("at least one eigenpair must be requested".into()));
    }
    let band = m.band();
    let n = band.size();
    if k > n {
        return Err(Error::InvalidArgument(format!("{k} eigenpairs requested from a {n}×{n} matrix")));
    }

    let (lo, hi) = band.gershgorin();
    let kth = |i: usize| bisect(|s| band.count_below(s), i, lo, hi);

    // extend past k until the last block closes, so no block is cut in half
    let mut approx: Vec<f64> = (0..k).map(kth).collect();
    while approx.len() < n {
        let next = kth(approx.len());
        let last = *approx.last().unwrap();
        if next - last < BLOCK_GAP * scale(last) {
            approx.push(next);
        } else {
            break;
        }
    }

    let mut blocks: Vec<Vec<f64>> = Vec::new();
    for &lam in &approx {
        match blocks.last_mut() {
            Some(b) if lam - b.last().unwrap() < BLOCK_GAP * scale(lam) => b.push(lam),
            _ => blocks.push(vec![lam]),
        }
    }

    let mut values = Vec::with_capacity(approx.len());
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(approx.len());
    for block in &blocks {
        let (vals, vecs) = block_inverse_iteration(m, block, &vectors)?;
        values.extend(vals);
        vectors.extend(vecs);
    }
    values.truncate(k);
    vectors.truncate(k);

    let grid = *m.grid();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &lam) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if lam - values[*g.last().unwrap()] < CLUSTER_TOL * scale(lam) => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    for group in &groups {
        fix_gauge(&grid, &mut vectors, group);
    }
    let eigenfunctions = vectors
        .into_iter()
        .map(|v| {
            let gf = GridFunction::from_raw(grid, v);
            let norm = integrate(&(&gf * &gf)).sqrt();
            gf.scale(1.0 / norm)
        })
        .collect();

    Ok(SpectrumResult { eigenvalues: values, eigenfunctions, degeneracy_groups: groups })
}

/// Eigenvalue with zero-based index `i` from a monotone counting function.
fn bisect(count_below: impl Fn(f64) -> usize, i: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(mid) > i {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn seed_vector(n: usize, column: usize) -> Vec<f64> {
    let freq = 0.618_033_988_749_895 * (column as f64 + 1.0) + 0.1;
    (0..n).map(|j| ((j as f64 + 1.0) * freq).sin() + 0.5 * ((j as f64 + 0.5) * freq * 2.3).cos()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Modified Gram–Schmidt against `locked`, then within `block` (twice for stability).
fn orthonormalize(block: &mut [Vec<f64>], locked: &[Vec<f64>]) -> Result<()> {
    for _ in 0..2 {
        for i in 0..block.len() {
            let (done, rest) = block.split_at_mut(i);
            let v = &mut rest[0];
            for q in locked.iter().chain(done.iter()) {
                let c = dot(q, v);
                axpy(-c, q, v);
            }
            let norm = dot(v, v).sqrt();
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::SolverFailure("inverse iteration lost rank".into()));
            }
            v.iter_mut().for_each(|x| *x /= norm);
        }
    }
    Ok(())
}

fn block_inverse_iteration(
    m: &SymmetricOperatorMatrix,
    cluster: &[f64],
    locked: &[Vec<f64>],
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let band = m.band();
    let n = band.size();
    let wanted = cluster.len();
    let width = (wanted + GUARD_VECTORS).min(n - locked.len());
    let low = cluster[0];
    let sigma = low - 1e-7 * scale(low);
    let lu = band.shifted_lu(sigma);
    let norm = band.inf_norm();

    let mut x: Vec<Vec<f64>> = (0..width).map(|c| seed_vector(n, locked.len() + c)).collect();
    orthonormalize(&mut x, locked)?;
    let mut previous: Option<Vec<Vec<f64>>> = None;
    let mut last_change = f64::INFINITY;

    for _ in 0..MAX_ITERATIONS {
        for col in x.iter_mut() {
            lu.solve_in_place(col);
        }
        orthonormalize(&mut x, locked)?;
        let (vals, ritz) = rayleigh_ritz(band, &x);
        x = ritz;
        // σ sits just below the cluster, so the wanted Ritz values come first
        let current: Vec<Vec<f64>> = x[..wanted].to_vec();
        if let Some(prev) = &previous {
            let change = subspace_change(prev, &current);
            // rounding keeps the subspace from settling below about eps·‖A‖/gap
            let gap = vals.get(wanted).map_or(scale(low), |g| g - vals[wanted - 1]);
            let floor = (f64::EPSILON * norm / gap.max(f64::MIN_POSITIVE)).clamp(1e-12, 1e-3);
            let stalled = change < floor && change > 0.5 * last_change;
            if change < 1e-12 || stalled {
                return Ok((vals[..wanted].to_vec(), current));
            }
            last_change = change;
        }
        previous = Some(current);
    }
    Err(Error::SolverFailure(format!("inverse iteration near {low} did not converge in {MAX_ITERATIONS} iterations")))
}

/// Ritz pairs of the band matrix on the span of the orthonormal columns, ordered by
/// distance above the lowest Ritz value.
fn rayleigh_ritz(band: &super::BandedSymmetric, x: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let w = x.len();
    let ax: Vec<Vec<f64>> = x.iter().map(|c| band.matvec(c)).collect();
    let h = DMatrix::from_fn(w, w, |i, j| 0.5 * (dot(&x[i], &ax[j]) + dot(&x[j], &ax[i])));
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..w).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = x[0].len();
    let vals = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let vecs = order
        .iter()
        .map(|&j| {
            let mut v = vec![0.0; n];
            for (i, col) in x.iter().enumerate() {
                axpy(eig.eigenvectors[(i, j)], col, &mut v);
            }
            v
        })
        .collect();
    (vals, vecs)
}

/// Frobenius norm of the part of `new` outside the span of `old` (both orthonormal).
fn subspace_change(old: &[Vec<f64>], new: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for v in new {
        let mut r = v.clone();
        for q in old {
            let c = dot(q, &r);
            axpy(-c, q, &mut r);
        }
        total += dot(&r, &r);
    }
    total.sqrt()
}

fn centered_slope(v: &[f64], i: usize) -> f64 {
    if i == 0 || i + 1 >= v.len() {
        return 0.0;
    }
    v[i + 1] - v[i - 1]
}

fn fix_gauge(grid: &Grid, vectors: &mut [Vec<f64>], group: &[usize]) {
    let mid = grid.midpoint_index();
    if group.len() == 2 {
        let (a, b) = (group[0], group[1]);
        let peak = vectors[a].iter().chain(&vectors[b]).fold(0.0_f64, |m, x| m.max(x.abs()));
        let mut pa = vectors[a][mid];
        let mut pb = vectors[b][mid];
        if pa.hypot(pb) < 1e-6 * peak {
            pa = centered_slope(&vectors[a], mid);
            pb = centered_slope(&vectors[b], mid);
        }
        let r = pa.hypot(pb);
        if r > 0.0 {
            let (c, s) = (pa / r, pb / r);
            let (va, vb) = (vectors[a].clone(), vectors[b].clone());
            for j in 0..va.len() {
                vectors[a][j] = c * va[j] + s * vb[j];
                vectors[b][j] = -s * va[j] + c * vb[j];
            }
        }
        sign_by_slope_then_value(&mut vectors[b], mid);
    } else {
        for &i in group {
            sign_by_value_then_slope(&mut vectors[i], mid);
        }
    }
}

fn first_significant(v: &[f64]) -> f64 {
    let peak = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    v.iter().copied().find(|x| x.abs() > 1e-8 * peak).unwrap_or(0.0)
}

fn sign_by_value_then_slope(v: &mut [f64], mid: usize) {
    let peak = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let probe = if v[mid].abs() > 1e-6 * peak {
        v[mid]
    } else if centered_slope(v, mid).abs() > 1e-9 * peak {
        centered_slope(v, mid)
    } else {
        first_significant(v)
    };
    if probe < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn sign_by_slope_then_value(v: &mut [f64], mid: usize) {
    let peak = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let slope = centered_slope(v, mid);
    let probe = if slope.abs() > 1e-9 * peak {
        slope
    } else if v[mid].abs() > 1e-6 * peak {
        v[mid]
    } else {
        first_significant(v)
    };
    if probe < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}
