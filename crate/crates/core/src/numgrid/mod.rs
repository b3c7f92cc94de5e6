//! Uniform grids, sampled functions, differentiation and quadrature.

mod diff;
mod function;
mod grid;
mod quadrature;

pub use diff::{differentiate, fornberg_weights, DiffScheme, MAX_DIFF_ORDER};
pub(crate) use diff::{spectral_multipliers, wavenumbers};
pub use function::GridFunction;
pub use grid::{make_uniform_grid, Grid, MIN_POINTS};
pub use quadrature::{inner, integrate};

/// Shorthand for `differentiate(f, order, scheme)` inside this crate.
pub(crate) fn d(f: &GridFunction, order: usize, scheme: DiffScheme) -> crate::Result<GridFunction> {
    differentiate(f, order, scheme)
}
