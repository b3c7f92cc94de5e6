//! Numerics for fourth-order operators `L = ∂⁴ + ∂u∂ + v` on the line.
//!
//! - [`numgrid`]: grids, sampled functions with optional exact Taylor jets,
//!   finite-difference/spectral/analytic differentiation, quadrature.
//! - [`operator`]: assembly of the discretized operator, its lowest eigenpairs,
//!   and the factors `A = −∂² + f∂ + g`, `A*` of `L = A*A + E₀`.
//! - [`wronskian`]: Wronskians of a ground-state pair, the factor `(f, g)`,
//!   reconstruction of `(u, v)` and the bilinear (Hirota-type) residual.
//! - [`darboux`]: removal of a doubly degenerate ground state and addition of
//!   one to the free operator.
//! - [`flow`]: the conserved functional `Q[u, v]`, its jump under removal, and
//!   the coupled evolution equations it is conserved by.
//! - [`catalog`]: closed-form operators with known ground states.

pub mod catalog;
pub mod darboux;
mod error;
pub mod expr;
pub mod flow;
pub mod jet;
pub mod numgrid;
pub mod operator;
pub mod problem;
pub mod verify;
pub mod wronskian;

pub use error::{Error, Result};
pub use numgrid::{differentiate, integrate, DiffScheme, Grid, GridFunction};
pub use operator::{FactorizationData, PotentialPair, SpectrumResult};
pub use wronskian::WronskianSet;
