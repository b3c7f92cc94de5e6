//! Library results against independently computed references.

use nalgebra::SymmetricEigen;

use quartic::catalog;
use quartic::darboux::remove_eigenvalue;
use quartic::flow::{q_functional, q_functional_with};
use quartic::operator::{assemble_l, lowest_eigenpairs};
use quartic::{DiffScheme, Grid, GridFunction, PotentialPair};

#[test]
fn banded_spectrum_matches_a_dense_solve() {
    let grid = Grid::new(-16.0, 16.0, 801, false).unwrap();
    let pp = catalog::example(2, grid, None).unwrap().potentials().unwrap();
    let m = assemble_l(&pp).unwrap();
    let mut dense = SymmetricEigen::new(m.band().to_dense()).eigenvalues.as_slice().to_vec();
    dense.sort_by(f64::total_cmp);
    let banded = lowest_eigenpairs(&m, 4).unwrap().eigenvalues;
    for (b, d) in banded.iter().zip(&dense) {
        assert!((b - d).abs() < 1e-8 * d.abs().max(1.0), "{b} vs {d}");
    }
}

/// Q from samples only: the periodic box is wide enough that sech-type data
/// is periodic to round-off, so spectral derivatives stand in for exact ones.
#[test]
fn q_from_spectral_derivatives_matches_exact_derivatives() {
    let decaying = Grid::default_decaying();
    let periodic = Grid::new(-40.0, 40.0, 2048, true).unwrap();
    for name in ["2", "3", "follyton:1"] {
        let exact = q_functional(&catalog::lookup(name, decaying).unwrap().potentials().unwrap()).unwrap();
        let entry = catalog::lookup(name, periodic).unwrap();
        let pp = PotentialPair::new(entry.u.sample(periodic).without_jets(), entry.v.sample(periodic).without_jets())
            .unwrap();
        let spectral = q_functional_with(&pp, DiffScheme::PeriodicSpectral).unwrap();
        assert!(((spectral - exact) / exact).abs() < 1e-9, "{name}: {spectral} vs {exact}");
    }
}

/// Removal on plain samples with finite differences against the exact result.
#[test]
fn removal_from_samples_converges_to_the_exact_result() {
    let errors: Vec<f64> = [2001, 4001]
        .iter()
        .map(|&n| {
            let grid = Grid::new(-20.0, 20.0, n, false).unwrap();
            let entry = catalog::example(3, grid, None).unwrap();
            let strip = |g: &GridFunction| g.without_jets();
            let pp = entry.potentials().unwrap();
            let mut fac = entry.factorization().unwrap();
            fac.f = strip(&fac.f);
            fac.g = strip(&fac.g);
            let plain = PotentialPair::new(strip(pp.u()), strip(pp.v())).unwrap();
            let tilde = remove_eigenvalue(&plain, &fac, DiffScheme::CentralFd4).unwrap();
            let expected = entry.expected_tilde().unwrap().unwrap();
            let inner = n / 10..n - n / 10;
            (tilde.u() - expected.u()).sup_norm_on(inner.clone()) + (tilde.v() - expected.v()).sup_norm_on(inner)
        })
        .collect();
    assert!(errors[1] < 1e-5, "{errors:?}");
    assert!(errors[0] / errors[1] > 12.0, "{errors:?}");
}
