use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 16;

/// A uniform 1-D grid.
///
/// Non-periodic grids include both endpoints, so `h = (x_max − x_min)/(n − 1)`.
/// Periodic grids omit `x_max` (it coincides with `x_min`), so `h = (x_max − x_min)/n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n: usize,
    periodic: bool,
}

#[derive(Deserialize)]
struct RawGrid {
    x_min: f64,
    x_max: f64,
    n: usize,
    #[serde(default)]
    periodic: bool,
}

impl TryFrom<RawGrid> for Grid {
    type Error = Error;

    fn try_from(raw: RawGrid) -> Result<Self> {
        Grid::new(raw.x_min, raw.x_max, raw.n, raw.periodic)
    }
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize, periodic: bool) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_min >= x_max {
            return Err(Error::InvalidRange { x_min, x_max });
        }
        if n < MIN_POINTS {
            return Err(Error::TooFewPoints { n, min: MIN_POINTS });
        }
        Ok(Self { x_min, x_max, n, periodic })
    }

    /// The box used for decaying potentials: `[−40, 40]` with 4001 points.
    pub fn default_decaying() -> Self {
        Self { x_min: -40.0, x_max: 40.0, n: 4001, periodic: false }
    }

    /// The periodic box used for the flow: `[−24π, 24π]` with 512 points.
    pub fn default_periodic() -> Self {
        let l = 24.0 * std::f64::consts::PI;
        Self { x_min: -l, x_max: l, n: 512, periodic: true }
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn spacing(&self) -> f64 {
        if self.periodic {
            self.length() / self.n as f64
        } else {
            self.length() / (self.n - 1) as f64
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.spacing()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        let h = self.spacing();
        (0..self.n).map(move |i| self.x_min + i as f64 * h)
    }

    pub fn midpoint_index(&self) -> usize {
        self.n / 2
    }
}

/// Same as [`Grid::new`]; kept as a free function for call sites that read better that way.
pub fn make_uniform_grid(x_min: f64, x_max: f64, n: usize, periodic: bool) -> Result<Grid> {
    Grid::new(x_min, x_max, n, periodic)
}
