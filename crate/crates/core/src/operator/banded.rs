#![allow(clippy::needless_range_loop)]

use nalgebra::DMatrix;

/// Symmetric band matrix stored by lower diagonals: `diag(d)[j] = A[j + d][j]`.
///
/// Only the lower triangle is stored, so the matrix is exactly symmetric by construction.
#[derive(Clone, Debug)]
pub struct BandedSymmetric {
    n: usize,
    bandwidth: usize,
    data: Vec<f64>,
}

impl BandedSymmetric {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        Self { n, bandwidth, data: vec![0.0; n * (bandwidth + 1)] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let d = i - j;
        if d > self.bandwidth {
            0.0
        } else {
            self.data[d * self.n + j]
        }
    }

    /// Adds `value` to `A[i][j]` (and hence to `A[j][i]`).
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let d = i - j;
        assert!(d <= self.bandwidth, "entry ({i}, {j}) outside the band");
        self.data[d * self.n + j] += value;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for d in 0..=self.bandwidth {
            let diag = &self.data[d * n..(d + 1) * n];
            for j in 0..n.saturating_sub(d) {
                let a = diag[j];
                y[j + d] += a * x[j];
                if d > 0 {
                    y[j] += a * x[j + d];
                }
            }
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn inf_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.bandwidth);
                let hi = (i + self.bandwidth).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j).abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let a = self.bandwidth.min(i);
            let b = self.bandwidth.min(self.n - 1 - i);
            let r: f64 = (i - a..=i + b).filter(|&j| j != i).map(|j| self.get(i, j).abs()).sum();
            let c = self.get(i, i);
            lo = lo.min(c - r);
            hi = hi.max(c + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `sigma`, from the inertia of the
    /// banded `LDLᵀ` factorization of `A − σI`.
    pub fn count_below(&self, sigma: f64) -> usize {
        let n = self.n;
        let bw = self.bandwidth;
        let tiny = f64::EPSILON * self.inf_norm().max(1.0) * 1e-3;
        // work[i][d] = current A[i][i − d] of the Schur complement (lower band, row-major)
        let mut work = vec![0.0; n * (bw + 1)];
        for i in 0..n {
            for d in 0..=bw.min(i) {
                work[i * (bw + 1) + d] = self.get(i, i - d);
            }
            work[i * (bw + 1)] -= sigma;
        }
        let mut negatives = 0;
        let mut col = vec![0.0; bw + 1];
        for j in 0..n {
            let mut dj = work[j * (bw + 1)];
            if dj.abs() < tiny {
                dj = -tiny;
            }
            if dj < 0.0 {
                negatives += 1;
            }
            let last = (j + bw).min(n - 1);
            for i in j + 1..=last {
                col[i - j] = work[i * (bw + 1) + (i - j)];
            }
            for i in j + 1..=last {
                let lij = col[i - j] / dj;
                for k in j + 1..=i {
                    work[i * (bw + 1) + (i - k)] -= lij * col[k - j];
                }
            }
        }
        negatives
    }

    pub(crate) fn shifted_lu(&self, sigma: f64) -> BandLu {
        BandLu::factor(self, sigma)
    }
}

/// LU factorization with partial pivoting of the general band matrix `A − σI`.
pub(crate) struct BandLu {
    n: usize,
    kl: usize,
    width: usize,
    rows: Vec<f64>,
    piv: Vec<usize>,
}

impl BandLu {
    // row i stores columns i − kl ..= i + 2·kl (upper bandwidth grows to 2·kl under pivoting)
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    fn factor(a: &BandedSymmetric, sigma: f64) -> Self {
        let n = a.n;
        let kl = a.bandwidth;
        let width = 3 * kl + 1;
        let mut lu = BandLu { n, kl, width, rows: vec![0.0; n * width], piv: vec![0; n] };
        for i in 0..n {
            let lo = i.saturating_sub(kl);
            let hi = (i + kl).min(n - 1);
            for j in lo..=hi {
                let k = lu.idx(i, j);
                lu.rows[k] = a.get(i, j);
            }
            let k = lu.idx(i, i);
            lu.rows[k] -= sigma;
        }
        let tiny = f64::EPSILON * a.inf_norm().max(1.0);
        for j in 0..n {
            let last_row = (j + kl).min(n - 1);
            let last_col = (j + 2 * kl).min(n - 1);
            let mut p = j;
            let mut best = lu.rows[lu.idx(j, j)].abs();
            for i in j + 1..=last_row {
                let v = lu.rows[lu.idx(i, j)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            lu.piv[j] = p;
            if p != j {
                for c in j..=last_col {
                    let (x, y) = (lu.idx(j, c), lu.idx(p, c));
                    lu.rows.swap(x, y);
                }
            }
            let djj = lu.idx(j, j);
            if lu.rows[djj].abs() < tiny {
                lu.rows[djj] = tiny;
            }
            let pivot = lu.rows[djj];
            for i in j + 1..=last_row {
                let kij = lu.idx(i, j);
                let l = lu.rows[kij] / pivot;
                lu.rows[kij] = l;
                if l != 0.0 {
                    for c in j + 1..=last_col {
                        let (ic, jc) = (lu.idx(i, c), lu.idx(j, c));
                        lu.rows[ic] -= l * lu.rows[jc];
                    }
                }
            }
        }
        lu
    }

    pub(crate) fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        let kl = self.kl;
        for j in 0..n {
            b.swap(j, self.piv[j]);
            let bj = b[j];
            if bj != 0.0 {
                for i in j + 1..=(j + kl).min(n - 1) {
                    b[i] -= self.rows[self.idx(i, j)] * bj;
                }
            }
        }
        for j in (0..n).rev() {
            let mut acc = b[j];
            for c in j + 1..=(j + 2 * kl).min(n - 1) {
                acc -= self.rows[self.idx(j, c)] * b[c];
            }
            b[j] = acc / self.rows[self.idx(j, j)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample(n: usize, bw: usize) -> BandedSymmetric {
        let mut m = BandedSymmetric::zeros(n, bw);
        for i in 0..n {
            for d in 0..=bw.min(i) {
                let x = ((i * 7 + d * 13) % 11) as f64 - 5.0;
                m.add(i, i - d, if d == 0 { x * 3.0 } else { x });
            }
        }
        m
    }

    #[test]
    fn sturm_count_matches_dense_spectrum() {
        let m = sample(60, 4);
        let mut eig: Vec<f64> = m.to_dense().symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        for w in eig.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let expected = eig.iter().filter(|&&e| e < mid).count();
            if (w[1] - w[0]).abs() > 1e-8 {
                assert_eq!(m.count_below(mid), expected);
            }
        }
        assert_eq!(m.count_below(eig[0] - 1.0), 0);
        assert_eq!(m.count_below(eig[59] + 1.0), 60);
    }

    #[test]
    fn band_lu_solves_shifted_system() {
        let m = sample(50, 3);
        let sigma = 0.37;
        let x: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).sin()).collect();
        let mut b = m.matvec(&x);
        for (bi, xi) in b.iter_mut().zip(&x) {
            *bi -= sigma * xi;
        }
        m.shifted_lu(sigma).solve_in_place(&mut b);
        for (a, e) in b.iter().zip(&x) {
            assert_relative_eq!(*a, *e, epsilon = 1e-9);
        }
    }

    #[test]
    fn matvec_agrees_with_dense() {
        let m = sample(30, 2);
        let x: Vec<f64> = (0..30).map(|i| i as f64 - 14.5).collect();
        let y = m.matvec(&x);
        let yd = m.to_dense() * nalgebra::DVector::from_vec(x);
        for (a, b) in y.iter().zip(yd.iter()) {
            assert_relative_eq!(*a, *b, epsilon = 1e-12);
        }
    }
}
