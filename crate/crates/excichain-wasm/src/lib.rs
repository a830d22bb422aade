//! Browser bindings: run the chain, sweep the initial phase, and expose
//! the k-space analytics as flat numeric arrays for canvas rendering.
//!
//! Everything here is a thin shim over the `excichain` crate; the page in
//! `www/` does the drawing. Build with
//! `wasm-pack build --target web crates/excichain-wasm`.

use wasm_bindgen::prelude::*;

use excichain::analytics;
use excichain::couplings::{focusing_profile, CouplingModel};
use excichain::dynamics::{propagate, PropagationConfig, Trajectory};
use excichain::error::{ChainError, Result};
use excichain::model::{Boundary, ChainSpec, InitialCondition};

fn coupling_for(kind: &str, n_sites: usize, v: f64) -> Result<CouplingModel> {
    match kind {
        "uniform" => Ok(CouplingModel::NearestNeighbor { strength: v }),
        "dipole" => Ok(CouplingModel::dipole(v)),
        "focusing" => match focusing_profile(n_sites, v)? {
            CouplingModel::Custom(bonds) => Ok(CouplingModel::Custom(bonds)),
            other => Ok(other),
        },
        _ => Err(ChainError::BadPropagationConfig(format!(
            "unknown coupling kind `{kind}` (uniform, dipole, focusing)"
        ))),
    }
}

fn run_inner(
    n_sites: usize,
    kind: &str,
    theta: f64,
    gamma: f64,
    v: f64,
    t_max: f64,
    stride: usize,
) -> Result<Trajectory> {
    let spec = ChainSpec::new(n_sites, 0.0, coupling_for(kind, n_sites, v)?, Boundary::Open, gamma)?;
    let init = InitialCondition::centered_pure(&spec, theta)?;
    let cfg = PropagationConfig::new(t_max, 0.01, stride.max(1))?;
    propagate(&spec, &init, &cfg)
}

fn phase_curve_inner(
    n_sites: usize,
    kind: &str,
    gamma: f64,
    v: f64,
    t_eval: f64,
    points: usize,
) -> Result<Vec<f64>> {
    let mut rows = Vec::with_capacity(points * 3);
    for i in 0..points {
        let theta = if points == 1 {
            0.0
        } else {
            -std::f64::consts::FRAC_PI_2
                + i as f64 * std::f64::consts::PI / (points - 1) as f64
        };
        let traj = run_inner(n_sites, kind, theta, gamma, v, t_eval, usize::MAX)?;
        rows.push(theta);
        rows.push(traj.final_p_left());
        rows.push(analytics::p_k_positive_limit(theta));
    }
    Ok(rows)
}

/// One propagated run, ready for plotting.
#[wasm_bindgen]
pub struct ChainRun {
    n_sites: usize,
    traj: Trajectory,
}

#[wasm_bindgen]
impl ChainRun {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_times(&self) -> usize {
        self.traj.len()
    }

    pub fn times(&self) -> Vec<f64> {
        self.traj.times.clone()
    }

    /// Site populations, row-major `[time][site]`.
    pub fn populations(&self) -> Vec<f64> {
        self.traj.populations.iter().flatten().copied().collect()
    }

    pub fn mean(&self) -> Vec<f64> {
        self.traj.mean.clone()
    }

    pub fn p_left(&self) -> Vec<f64> {
        self.traj.p_left.clone()
    }

    pub fn p_right(&self) -> Vec<f64> {
        self.traj.p_right.clone()
    }

    pub fn phi(&self) -> Vec<f64> {
        self.traj.phi.clone()
    }

    /// Largest single-site population over the whole run (color scale).
    pub fn max_population(&self) -> f64 {
        self.traj
            .populations
            .iter()
            .flatten()
            .copied()
            .fold(0.0_f64, f64::max)
    }
}

/// Propagate the centered pure two-site state.
///
/// `kind` selects the coupling profile: `uniform`, `dipole`, or
/// `focusing`; `v` is the coupling scale (peak strength for `focusing`).
#[wasm_bindgen]
pub fn run_chain(
    n_sites: usize,
    kind: &str,
    theta: f64,
    gamma: f64,
    v: f64,
    t_max: f64,
    stride: usize,
) -> std::result::Result<ChainRun, JsError> {
    let traj = run_inner(n_sites, kind, theta, gamma, v, t_max, stride)
        .map_err(|e| JsError::new(&e.to_string()))?;
    Ok(ChainRun { n_sites, traj })
}

/// Numeric phase curve with its closed-form limit: `points` triplets
/// `(theta, P_L(t_eval), 1/2 + sin(theta)/pi)`, theta spanning
/// `[-pi/2, pi/2]`.
#[wasm_bindgen]
pub fn phase_curve(
    n_sites: usize,
    kind: &str,
    gamma: f64,
    v: f64,
    t_eval: f64,
    points: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    phase_curve_inner(n_sites, kind, gamma, v, t_eval, points)
        .map_err(|e| JsError::new(&e.to_string()))
}

/// Wave numbers of the even-N Bloch grid, ascending.
#[wasm_bindgen]
pub fn k_values(n_sites: usize) -> std::result::Result<Vec<f64>, JsError> {
    analytics::k_spectrum(n_sites, 0.0, 1.0)
        .map(|s| s.k_values)
        .map_err(|e| JsError::new(&e.to_string()))
}

/// Weight of each Bloch state in the pure two-site initial state.
#[wasm_bindgen]
pub fn k_distribution(n_sites: usize, theta: f64) -> std::result::Result<Vec<f64>, JsError> {
    analytics::initial_k_distribution(n_sites, theta).map_err(|e| JsError::new(&e.to_string()))
}

/// Group velocities `-2 V sin k` on the same grid.
#[wasm_bindgen]
pub fn group_velocities(n_sites: usize, v: f64) -> std::result::Result<Vec<f64>, JsError> {
    analytics::k_spectrum(n_sites, 0.0, v)
        .map(|s| s.velocities)
        .map_err(|e| JsError::new(&e.to_string()))
}

/// The engineered focusing bond profile, for plotting.
#[wasm_bindgen]
pub fn focusing_bonds(n_sites: usize, peak: f64) -> std::result::Result<Vec<f64>, JsError> {
    match focusing_profile(n_sites, peak).map_err(|e| JsError::new(&e.to_string()))? {
        CouplingModel::Custom(bonds) => Ok(bonds),
        _ => Ok(Vec::new()),
    }
}

/// Asymptotic left-side population `1/2 + sin(theta)/pi`.
#[wasm_bindgen]
pub fn directionality_limit(theta: f64) -> f64 {
    analytics::p_k_positive_limit(theta)
}

/// Initial mean velocity `-V sin(theta)` of the pure state.
#[wasm_bindgen]
pub fn initial_velocity(theta: f64, v: f64) -> f64 {
    analytics::initial_velocity(theta, v)
}
