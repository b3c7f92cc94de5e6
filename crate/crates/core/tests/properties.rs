use proptest::prelude::*;

use quartic::catalog;
use quartic::darboux::{addition_residual, remove_eigenvalue};
use quartic::expr::{c, sech, tanh};
use quartic::flow::{delta_q_predicted, normalization_target, normalized_delta_q, q_functional};
use quartic::numgrid::inner;
use quartic::operator::{apply_a_star_with, apply_a_with, assemble_l, factorization_identities, FactorizationData};
use quartic::wronskian::{factor_from_wronskian, hirota_residual, potentials_from_wronskian, wronskians};
use quartic::{differentiate, DiffScheme, Grid, GridFunction, PotentialPair};

const ANALYTIC: DiffScheme = DiffScheme::AnalyticPassthrough;

fn bump(grid: Grid, center: f64, width: f64) -> GridFunction {
    GridFunction::from_jet_fn(grid, move |x| {
        let z = (x + (-center)) * (1.0 / width);
        (-(z * z)).exp()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn differentiation_is_linear(
        a in -3.0..3.0f64,
        b in -3.0..3.0f64,
        c1 in -2.0..2.0f64,
        c2 in -2.0..2.0f64,
        order in 1usize..=5,
        periodic in any::<bool>(),
    ) {
        let grid = Grid::new(-10.0, 10.0, 256, periodic).unwrap();
        let scheme = if periodic { DiffScheme::PeriodicSpectral } else { DiffScheme::CentralFd4 };
        let f = bump(grid, c1, 1.0).without_jets();
        let g = bump(grid, c2, 0.7).without_jets();
        let combined = differentiate(&(f.scale(a) + g.scale(b)), order, scheme).unwrap();
        let separate = differentiate(&f, order, scheme).unwrap().scale(a) + differentiate(&g, order, scheme).unwrap().scale(b);
        let scale = combined.sup_norm().max(1.0);
        prop_assert!((combined - separate).sup_norm() < 1e-10 * scale);
    }

    #[test]
    fn assembled_operator_is_symmetric(seed in any::<u64>(), amp_u in -5.0..5.0f64, amp_v in -5.0..5.0f64) {
        let grid = Grid::new(-8.0, 8.0, 161, false).unwrap();
        let u = (amp_u * sech(1.3, 2)).sample(grid);
        let v = (amp_v * sech(0.8, 4)).sample(grid);
        let m = assemble_l(&PotentialPair::new(u, v).unwrap()).unwrap();
        let mut state = seed | 1;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let x: Vec<f64> = (0..grid.len()).map(|_| next()).collect();
        let y: Vec<f64> = (0..grid.len()).map(|_| next()).collect();
        let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| a * b).sum::<f64>();
        let lhs = dot(&x, &m.band().matvec(&y));
        let rhs = dot(&y, &m.band().matvec(&x));
        prop_assert!((lhs - rhs).abs() < 1e-9 * lhs.abs().max(1.0));
    }

    #[test]
    fn factor_adjoint_pairs_under_the_inner_product(
        f_amp in -3.0..3.0f64,
        g_amp in -3.0..3.0f64,
        c1 in -3.0..3.0f64,
        c2 in -3.0..3.0f64,
    ) {
        let grid = Grid::new(-15.0, 15.0, 1501, false).unwrap();
        let f = (f_amp * tanh(0.9)).sample(grid);
        let g = (c(-1.0) + g_amp * sech(1.1, 2)).sample(grid);
        let fac = FactorizationData::new(f, g, -1.0).unwrap();
        let phi = bump(grid, c1, 1.0);
        let chi = bump(grid, c2, 0.8);
        let lhs = inner(&apply_a_with(&fac, &phi, ANALYTIC).unwrap(), &chi);
        let rhs = inner(&phi, &apply_a_star_with(&fac, &chi, ANALYTIC).unwrap());
        prop_assert!((lhs - rhs).abs() < 1e-8, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn factor_and_potentials_ignore_the_ground_state_basis(
        which in 0usize..4,
        a in 0.3..2.0f64,
        b in -2.0..2.0f64,
        cc in -2.0..2.0f64,
        d in 0.3..2.0f64,
    ) {
        prop_assume!((a * d - b * cc).abs() > 0.1);
        let name = ["1", "2", "5:1", "5:2"][which];
        let grid = Grid::new(-12.0, 12.0, 801, false).unwrap();
        let entry = catalog::lookup(name, grid).unwrap();
        let (p, m) = entry.psi_pair().unwrap();
        let base = wronskians(&p, &m, ANALYTIC).unwrap();
        let mixed = wronskians(&(p.scale(a) + m.scale(b)), &(p.scale(cc) + m.scale(d)), ANALYTIC).unwrap();
        let det = a * d - b * cc;
        prop_assert!((&mixed.w - base.w.scale(det)).sup_norm() < 1e-10 * base.w.sup_norm() * det.abs().max(1.0));
        let (f0, g0) = factor_from_wronskian(&base).unwrap();
        let (f1, g1) = factor_from_wronskian(&mixed).unwrap();
        let pp0 = potentials_from_wronskian(&base, entry.e0).unwrap();
        let pp1 = potentials_from_wronskian(&mixed, entry.e0).unwrap();
        for (x, y) in [(&f0, &f1), (&g0, &g1), (pp0.u(), pp1.u()), (pp0.v(), pp1.v())] {
            prop_assert!((x - y).sup_norm() < 1e-8);
        }
    }

    #[test]
    fn example_five_family_satisfies_the_identities(k in 0.6..4.0f64) {
        let grid = Grid::new(-30.0 * k.max(1.0), 30.0 * k.max(1.0), 1201, false).unwrap();
        let entry = catalog::example(5, grid, Some(k)).unwrap();
        let pp = entry.potentials().unwrap();
        let fac = entry.factorization().unwrap();
        let (r1, r2) = factorization_identities(&pp, &fac, ANALYTIC).unwrap();
        prop_assert!(r1.sup_norm().max(r2.sup_norm()) < 1e-8);
        let ws = entry.wronskian_set().unwrap();
        prop_assert!(hirota_residual(&ws.w, &pp, entry.e0, ANALYTIC).unwrap().sup_norm() < 1e-8);
    }

    #[test]
    fn follytons_carry_the_predicted_charge(kappa in 0.3..1.6f64) {
        let half = 14.0 / kappa;
        let grid = Grid::new(-half, half, 2001, false).unwrap();
        let entry = catalog::follyton(kappa, grid).unwrap();
        let pp = entry.potentials().unwrap();
        let q = q_functional(&pp).unwrap();
        let predicted = delta_q_predicted(kappa).unwrap();
        prop_assert!(((q + predicted) / predicted).abs() < 1e-6);
        let relative_norm = (normalized_delta_q(predicted) - normalization_target(kappa)) / normalization_target(kappa);
        prop_assert!(relative_norm.abs() < 1e-14);

        let w = catalog::chi_expr(2.0 * kappa).sample(grid);
        let scale = 16.0 * kappa.powi(4);
        prop_assert!(addition_residual(&w, &PotentialPair::free(grid), kappa, ANALYTIC).unwrap().sup_norm() < 1e-10 * scale.max(1.0));
        let tilde = remove_eigenvalue(&pp, &entry.factorization().unwrap(), ANALYTIC).unwrap();
        prop_assert!(tilde.u().sup_norm() + tilde.v().sup_norm() < 1e-8 * scale.max(1.0));
    }

    #[test]
    fn grid_json_round_trips(x_min in -50.0..0.0f64, width in 0.5..100.0f64, n in 16usize..5000, periodic in any::<bool>()) {
        let grid = Grid::new(x_min, x_min + width, n, periodic).unwrap();
        let text = serde_json::to_string(&grid).unwrap();
        prop_assert_eq!(serde_json::from_str::<Grid>(&text).unwrap(), grid);
    }
}
