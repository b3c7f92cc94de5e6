use std::ops::{Add, Div, Mul, Neg, Range, Sub};

use super::Grid;
use crate::error::{Error, Result};
use crate::jet::Jet;

/// Real samples of a function on a [`Grid`].
///
/// A function sampled from a closed form may also carry a Taylor [`Jet`] per
/// sample; pointwise arithmetic propagates jets when both operands have them,
/// which is what makes [`super::DiffScheme::AnalyticPassthrough`] exact.
///
/// The arithmetic operators panic when the operands live on different grids;
/// public entry points that accept user data check with [`GridFunction::ensure_same_grid`] first.
#[derive(Clone, Debug)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
    jets: Option<Vec<Jet>>,
}

impl GridFunction {
    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values, jets: None })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values, jets: None }
    }

    /// Samples a function given on jets, keeping the jets for analytic differentiation.
    pub fn from_jet_fn(grid: Grid, f: impl Fn(Jet) -> Jet) -> Self {
        let jets: Vec<Jet> = grid.points().map(|x| f(Jet::variable(x))).collect();
        Self::from_jets(grid, jets)
    }

    pub(crate) fn from_jets(grid: Grid, jets: Vec<Jet>) -> Self {
        debug_assert_eq!(jets.len(), grid.len());
        let values = jets.iter().map(Jet::value).collect();
        Self { grid, values, jets: Some(jets) }
    }

    pub(crate) fn from_raw(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values, jets: None }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self::from_jets(grid, vec![Jet::constant(c); grid.len()])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn jets(&self) -> Option<&[Jet]> {
        self.jets.as_deref()
    }

    /// Highest derivative order available analytically at every sample.
    pub fn jet_depth(&self) -> Option<usize> {
        self.jets.as_ref().map(|js| js.iter().map(Jet::depth).min().unwrap_or(0))
    }

    /// Drops the analytic jets, leaving plain samples.
    pub fn without_jets(&self) -> Self {
        Self { grid: self.grid, values: self.values.clone(), jets: None }
    }

    pub fn ensure_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sup_norm_on(&self, range: Range<usize>) -> f64 {
        self.values[range].iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Applies `f` to the samples; jets are dropped.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.unary(|v| v * s, |j| j.scale(s))
    }

    pub fn add_scalar(&self, s: f64) -> Self {
        self.unary(|v| v + s, |j| *j + s)
    }

    pub fn recip(&self) -> Self {
        self.unary(|v| 1.0 / v, |j| j.recip())
    }

    pub fn sqrt(&self) -> Self {
        self.unary(f64::sqrt, |j| j.sqrt())
    }

    pub fn powi(&self, n: u32) -> Self {
        self.unary(|v| v.powi(n as i32), |j| j.powi(n))
    }

    fn unary(&self, fv: impl Fn(f64) -> f64, fj: impl Fn(&Jet) -> Jet) -> Self {
        match &self.jets {
            Some(js) => Self::from_jets(self.grid, js.iter().map(fj).collect()),
            None => Self::from_raw(self.grid, self.values.iter().map(|&v| fv(v)).collect()),
        }
    }

    fn zip_with(&self, other: &GridFunction, fv: impl Fn(f64, f64) -> f64, fj: impl Fn(Jet, Jet) -> Jet) -> Self {
        assert!(self.grid == other.grid, "grid mismatch in pointwise arithmetic");
        match (&self.jets, &other.jets) {
            (Some(a), Some(b)) => Self::from_jets(self.grid, a.iter().zip(b).map(|(&x, &y)| fj(x, y)).collect()),
            _ => Self::from_raw(self.grid, self.values.iter().zip(&other.values).map(|(&x, &y)| fv(x, y)).collect()),
        }
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&GridFunction> for &GridFunction {
            type Output = GridFunction;
            fn $method(self, rhs: &GridFunction) -> GridFunction {
                self.zip_with(rhs, |a, b| a $op b, |a, b| a $op b)
            }
        }
        impl $trait<GridFunction> for GridFunction {
            type Output = GridFunction;
            fn $method(self, rhs: GridFunction) -> GridFunction {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&GridFunction> for GridFunction {
            type Output = GridFunction;
            fn $method(self, rhs: &GridFunction) -> GridFunction {
                (&self).$method(rhs)
            }
        }
        impl $trait<GridFunction> for &GridFunction {
            type Output = GridFunction;
            fn $method(self, rhs: GridFunction) -> GridFunction {
                self.$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);
impl_binop!(Mul, mul, *);
impl_binop!(Div, div, /);

impl Mul<f64> for &GridFunction {
    type Output = GridFunction;
    fn mul(self, rhs: f64) -> GridFunction {
        self.scale(rhs)
    }
}

impl Mul<f64> for GridFunction {
    type Output = GridFunction;
    fn mul(self, rhs: f64) -> GridFunction {
        self.scale(rhs)
    }
}

impl Mul<&GridFunction> for f64 {
    type Output = GridFunction;
    fn mul(self, rhs: &GridFunction) -> GridFunction {
        rhs.scale(self)
    }
}

impl Mul<GridFunction> for f64 {
    type Output = GridFunction;
    fn mul(self, rhs: GridFunction) -> GridFunction {
        rhs.scale(self)
    }
}

impl Add<f64> for GridFunction {
    type Output = GridFunction;
    fn add(self, rhs: f64) -> GridFunction {
        self.add_scalar(rhs)
    }
}

impl Add<f64> for &GridFunction {
    type Output = GridFunction;
    fn add(self, rhs: f64) -> GridFunction {
        self.add_scalar(rhs)
    }
}

impl Sub<f64> for GridFunction {
    type Output = GridFunction;
    fn sub(self, rhs: f64) -> GridFunction {
        self.add_scalar(-rhs)
    }
}

impl Sub<f64> for &GridFunction {
    type Output = GridFunction;
    fn sub(self, rhs: f64) -> GridFunction {
        self.add_scalar(-rhs)
    }
}

impl Neg for &GridFunction {
    type Output = GridFunction;
    fn neg(self) -> GridFunction {
        self.scale(-1.0)
    }
}

impl Neg for GridFunction {
    type Output = GridFunction;
    fn neg(self) -> GridFunction {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(-1.0, 1.0, 21, false).unwrap()
    }

    #[test]
    fn construction_checks() {
        let g = grid();
        assert!(matches!(
            GridFunction::from_values(g, vec![0.0; 20]),
            Err(Error::LengthMismatch { expected: 21, got: 20 })
        ));
        let mut vals = vec![0.0; 21];
        vals[3] = f64::NAN;
        assert!(matches!(GridFunction::from_values(g, vals), Err(Error::NonFinite(3))));
    }

    #[test]
    fn jets_survive_only_when_both_sides_have_them() {
        let g = grid();
        let a = GridFunction::from_jet_fn(g, |x| x.sin());
        let b = GridFunction::from_fn(g, f64::cos);
        assert!((&a * &a).jets().is_some());
        assert!((&a * &b).jets().is_none());
        assert_eq!((&a + 1.0).jet_depth(), a.jet_depth());
    }

    #[test]
    fn mismatched_grids_are_reported() {
        let a = GridFunction::zeros(grid());
        let b = GridFunction::zeros(Grid::new(-1.0, 1.0, 22, false).unwrap());
        assert!(matches!(a.ensure_same_grid(&b), Err(Error::GridMismatch)));
    }
}
