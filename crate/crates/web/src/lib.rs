//! Browser bindings for the demo page in `www/`.
//!
//! Three operations are exposed: sampling a follyton profile, computing the
//! lowest eigenpairs of a catalog entry, and stepping the flow from follyton
//! initial data. Arrays cross the boundary as `Float64Array`.

use quartic::catalog::{self, CatalogEntry};
use quartic::flow::{evolve, max_stable_dt, traveling_wave_error, EvolutionState};
use quartic::operator::{assemble_l, lowest_eigenpairs};
use quartic::Grid;
use wasm_bindgen::prelude::*;

fn js(e: quartic::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Profile {
    x: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
    e0: f64,
}

#[wasm_bindgen]
impl Profile {
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    pub fn u(&self) -> Vec<f64> {
        self.u.clone()
    }

    pub fn v(&self) -> Vec<f64> {
        self.v.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn e0(&self) -> f64 {
        self.e0
    }
}

fn profile_of(entry: &CatalogEntry) -> Profile {
    Profile {
        x: entry.grid.points().collect(),
        u: entry.u.sample(entry.grid).into_values(),
        v: entry.v.sample(entry.grid).into_values(),
        e0: entry.e0,
    }
}

/// `(u, v)` of the follyton with parameter `kappa` on `[−half_width, half_width]`.
#[wasm_bindgen]
pub fn follyton_profile(kappa: f64, half_width: f64, n: usize) -> Result<Profile, JsError> {
    let grid = Grid::new(-half_width, half_width, n, false).map_err(js)?;
    Ok(profile_of(&catalog::follyton(kappa, grid).map_err(js)?))
}

#[wasm_bindgen]
pub struct Spectrum {
    x: Vec<f64>,
    eigenvalues: Vec<f64>,
    eigenfunctions: Vec<Vec<f64>>,
    expected_e0: f64,
}

#[wasm_bindgen]
impl Spectrum {
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.clone()
    }

    /// Samples of the `index`-th eigenfunction; empty when out of range.
    pub fn eigenfunction(&self, index: usize) -> Vec<f64> {
        self.eigenfunctions.get(index).cloned().unwrap_or_default()
    }

    #[wasm_bindgen(getter)]
    pub fn expected_e0(&self) -> f64 {
        self.expected_e0
    }
}

pub fn compute_spectrum(name: &str, k: usize, n: usize) -> quartic::Result<Spectrum> {
    let grid = Grid::new(-40.0, 40.0, n, false)?;
    let entry = catalog::lookup(name, grid)?;
    let result = lowest_eigenpairs(&assemble_l(&entry.potentials()?)?, k)?;
    Ok(Spectrum {
        x: grid.points().collect(),
        eigenvalues: result.eigenvalues[..k].to_vec(),
        eigenfunctions: result.eigenfunctions.into_iter().take(k).map(|f| f.into_values()).collect(),
        expected_e0: entry.e0,
    })
}

/// Lowest `k` eigenpairs of a catalog entry (`1`…`4`, `5:k`, `follyton:κ`) on `[−40, 40]`.
#[wasm_bindgen]
pub fn catalog_spectrum(name: &str, k: usize, n: usize) -> Result<Spectrum, JsError> {
    compute_spectrum(name, k, n).map_err(js)
}

/// Follyton initial data stepped forward on a periodic box.
#[wasm_bindgen]
pub struct Evolution {
    entry: CatalogEntry,
    state: EvolutionState,
    dt: f64,
}

impl Evolution {
    pub fn start(kappa: f64, half_width: f64, n: usize, dt: f64) -> quartic::Result<Evolution> {
        let grid = Grid::new(-half_width, half_width, n, true)?;
        let entry = catalog::follyton(kappa, grid)?;
        let state = EvolutionState::from_exprs(&entry.u, &entry.v, grid)?;
        let dt = dt.min(0.9 * max_stable_dt(&state.u));
        Ok(Evolution { entry, state, dt })
    }

    pub fn advance(&mut self, steps: usize) -> quartic::Result<()> {
        self.state = evolve(&self.state, self.dt, steps)?;
        Ok(())
    }
}

#[wasm_bindgen]
impl Evolution {
    /// `dt` is capped below the stability bound of the initial data.
    #[wasm_bindgen(constructor)]
    pub fn new(kappa: f64, half_width: f64, n: usize, dt: f64) -> Result<Evolution, JsError> {
        Self::start(kappa, half_width, n, dt).map_err(js)
    }

    pub fn step(&mut self, steps: usize) -> Result<(), JsError> {
        self.advance(steps).map_err(js)
    }

    pub fn x(&self) -> Vec<f64> {
        self.state.grid().points().collect()
    }

    pub fn u(&self) -> Vec<f64> {
        self.state.u.values().to_vec()
    }

    pub fn v(&self) -> Vec<f64> {
        self.state.v.values().to_vec()
    }

    #[wasm_bindgen(getter)]
    pub fn t(&self) -> f64 {
        self.state.t
    }

    #[wasm_bindgen(getter)]
    pub fn dt(&self) -> f64 {
        self.dt
    }

    #[wasm_bindgen(getter)]
    pub fn speed(&self) -> f64 {
        16.0 * self.entry.kappa * self.entry.kappa
    }

    #[wasm_bindgen(getter)]
    pub fn q_drift(&self) -> f64 {
        self.state.relative_q_drift()
    }

    /// Sup-norm distance from the exactly translated profile.
    #[wasm_bindgen(getter)]
    pub fn shift_error(&self) -> f64 {
        traveling_wave_error(&self.state, &self.entry.u, &self.entry.v, self.speed())
    }
}
