//! JSON problem specifications.
//!
//! ```json
//! {
//!   "grid": {"x_min": -40.0, "x_max": 40.0, "n": 4001},
//!   "u": {"kind": "closed_form", "expr": {"product": [{"const": 16.0}, {"sech": {"scale": 1.0, "power": 2.0}}]}},
//!   "v": {"kind": "samples", "values": [0.0, ...]},
//!   "e0": -64.0
//! }
//! ```
//!
//! `psi_plus`/`psi_minus` optionally give a ground-state pair, `name` is free text.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::numgrid::{Grid, GridFunction};
use crate::operator::PotentialPair;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    ClosedForm { expr: Expr },
    Samples { values: Vec<f64> },
}

impl FunctionSpec {
    /// Closed forms are sampled with jets; raw samples must match the grid size.
    pub fn sample(&self, grid: Grid) -> Result<GridFunction> {
        match self {
            FunctionSpec::ClosedForm { expr } => {
                let gf = expr.sample(grid);
                if let Some(i) = gf.values().iter().position(|v| !v.is_finite()) {
                    return Err(Error::NonFinite(i));
                }
                Ok(gf)
            }
            FunctionSpec::Samples { values } => GridFunction::from_values(grid, values.clone()),
        }
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self, FunctionSpec::ClosedForm { .. })
    }
}

impl From<Expr> for FunctionSpec {
    fn from(expr: Expr) -> Self {
        FunctionSpec::ClosedForm { expr }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub grid: Grid,
    pub u: FunctionSpec,
    pub v: FunctionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_plus: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_minus: Option<FunctionSpec>,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Replaces the grid; only valid when every function is given in closed form.
    pub fn with_grid(mut self, grid: Grid) -> Result<Self> {
        let all_closed = [Some(&self.u), Some(&self.v), self.psi_plus.as_ref(), self.psi_minus.as_ref()]
            .into_iter()
            .flatten()
            .all(FunctionSpec::is_closed_form);
        if !all_closed && grid != self.grid {
            return Err(Error::InvalidArgument("sampled functions cannot be moved to another grid".into()));
        }
        self.grid = grid;
        Ok(self)
    }

    pub fn potentials(&self) -> Result<PotentialPair> {
        PotentialPair::new(self.u.sample(self.grid)?, self.v.sample(self.grid)?)
    }

    pub fn psi_pair(&self) -> Result<Option<(GridFunction, GridFunction)>> {
        match (&self.psi_plus, &self.psi_minus) {
            (Some(p), Some(m)) => Ok(Some((p.sample(self.grid)?, m.sample(self.grid)?))),
            (None, None) => Ok(None),
            _ => Err(Error::InvalidArgument("psi_plus and psi_minus must be given together".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{c, sech};

    fn spec() -> ProblemSpec {
        ProblemSpec {
            name: Some("demo".into()),
            grid: Grid::new(-10.0, 10.0, 101, false).unwrap(),
            u: (16.0 * sech(1.0, 2)).into(),
            v: FunctionSpec::Samples { values: vec![0.0; 101] },
            e0: None,
            psi_plus: None,
            psi_minus: None,
        }
    }

    #[test]
    fn json_round_trip() {
        let s = spec();
        let text = s.to_json().unwrap();
        assert!(text.contains(r#""kind": "closed_form""#));
        assert!(!text.contains("e0"));
        assert_eq!(ProblemSpec::from_json(&text).unwrap(), s);
    }

    #[test]
    fn sampled_length_is_checked() {
        let mut s = spec();
        s.v = FunctionSpec::Samples { values: vec![0.0; 100] };
        assert!(matches!(s.potentials(), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn regridding_requires_closed_forms() {
        let g = Grid::new(-5.0, 5.0, 51, false).unwrap();
        assert!(spec().with_grid(g).is_err());
        let mut s = spec();
        s.v = c(0.0).into();
        assert_eq!(s.with_grid(g).unwrap().potentials().unwrap().grid(), &g);
    }

    #[test]
    fn half_a_pair_is_rejected() {
        let mut s = spec();
        s.psi_plus = Some(c(1.0).into());
        assert!(s.psi_pair().is_err());
    }
}
