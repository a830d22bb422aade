//! Chain geometry, Hamiltonian assembly, and initial density matrices.
//!
//! A chain of `N` two-level monomers carries a single excitation. In the
//! site basis the Hamiltonian is the real symmetric matrix with the uniform
//! transition energy `epsilon` on the diagonal and the coupling profile
//! off the diagonal. Energies are measured in units of the coupling scale
//! `|V|`, times in `hbar/|V|`, and `hbar = 1` throughout.
//!
//! Site indices are 1-based in the public API, matching the usual
//! `n = 1..N` labelling of the monomers.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::couplings::{coupling_matrix, CouplingModel};
use crate::error::{ChainError, Result};

/// Hermiticity residual allowed on a valid density matrix.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Trace deviation from 1 allowed on a valid density matrix.
pub const TRACE_TOL: f64 = 1e-10;
/// How far below zero a population may sit before it counts as a violation.
pub const DIAGONAL_TOL: f64 = 1e-10;

/// Chain boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Open,
    /// Adds the wrap bond `V_{N,1}`; nearest-neighbor coupling only.
    Periodic,
}

/// A validated description of the monomer chain.
#[derive(Debug, Clone)]
pub struct ChainSpec {
    n_sites: usize,
    epsilon: f64,
    coupling: CouplingModel,
    boundary: Boundary,
    dephasing_rate: f64,
}

impl ChainSpec {
    /// Validate and build a chain description.
    ///
    /// `epsilon` is the uniform site transition energy (it only contributes
    /// a global phase and defaults to 0 everywhere in this crate);
    /// `dephasing_rate` is the pure-dephasing rate `gamma >= 0`.
    pub fn new(
        n_sites: usize,
        epsilon: f64,
        coupling: CouplingModel,
        boundary: Boundary,
        dephasing_rate: f64,
    ) -> Result<Self> {
        if n_sites < 2 {
            return Err(ChainError::TooFewSites(n_sites));
        }
        if !dephasing_rate.is_finite() || dephasing_rate < 0.0 {
            return Err(ChainError::NegativeDephasing(dephasing_rate));
        }
        if !epsilon.is_finite() {
            return Err(ChainError::NonFiniteHamiltonian);
        }
        coupling.validate(n_sites)?;
        if boundary == Boundary::Periodic
            && !matches!(coupling, CouplingModel::NearestNeighbor { .. })
        {
            return Err(ChainError::PeriodicRequiresNearestNeighbor);
        }
        Ok(ChainSpec { n_sites, epsilon, coupling, boundary, dephasing_rate })
    }

    /// Uniform open nearest-neighbor chain with `epsilon = 0`, no dephasing.
    pub fn uniform_open(n_sites: usize, strength: f64) -> Result<Self> {
        ChainSpec::new(
            n_sites,
            0.0,
            CouplingModel::NearestNeighbor { strength },
            Boundary::Open,
            0.0,
        )
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn coupling(&self) -> &CouplingModel {
        &self.coupling
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn dephasing_rate(&self) -> f64 {
        self.dephasing_rate
    }

    /// Default left member of the initially excited pair: site `floor(N/2)`.
    pub fn default_left_site(&self) -> usize {
        self.n_sites / 2
    }
}

/// The single-excitation Hamiltonian, a real symmetric `N x N` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    matrix: DMatrix<f64>,
}

impl Hamiltonian {
    /// Wrap an explicit symmetric matrix (useful to feed the verification
    /// oracles with hand-built operators).
    pub fn from_symmetric(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(ChainError::NotSymmetric);
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(ChainError::NonFiniteHamiltonian);
        }
        if matrix != matrix.transpose() {
            return Err(ChainError::NotSymmetric);
        }
        Ok(Hamiltonian { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn n_sites(&self) -> usize {
        self.matrix.nrows()
    }

    /// Element `H_nm` with 1-based site indices.
    pub fn element(&self, n: usize, m: usize) -> f64 {
        self.matrix[(n - 1, m - 1)]
    }

    /// Infinity norm (max absolute row sum), used by the stability guard.
    pub fn inf_norm(&self) -> f64 {
        (0..self.matrix.nrows())
            .map(|i| self.matrix.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0_f64, f64::max)
    }
}

/// Build the Hamiltonian of a chain: uniform `epsilon` on the diagonal,
/// coupling profile off the diagonal (wrap bond included when periodic).
pub fn build_hamiltonian(spec: &ChainSpec) -> Result<Hamiltonian> {
    let mut matrix = coupling_matrix(&spec.coupling, spec.n_sites, spec.boundary)?;
    for i in 0..spec.n_sites {
        matrix[(i, i)] = spec.epsilon;
    }
    Ok(Hamiltonian { matrix })
}

/// The two-site block that seeds the dynamics.
///
/// The excitation starts distributed over the adjacent pair
/// `(left_site, left_site + 1)` with populations `rho_left`, `rho_right`
/// and coherence `a * exp(-i theta)`. `theta` is normalized into
/// `(-pi, pi]` on construction.
#[derive(Debug, Clone, Copy)]
pub struct InitialCondition {
    left_site: usize,
    rho_left: f64,
    rho_right: f64,
    coherence: f64,
    theta: f64,
}

impl InitialCondition {
    pub fn new(
        left_site: usize,
        rho_left: f64,
        rho_right: f64,
        coherence: f64,
        theta: f64,
    ) -> Result<Self> {
        let in_unit = |x: f64| x.is_finite() && (0.0..=1.0).contains(&x);
        if !in_unit(rho_left) || !in_unit(rho_right) || (rho_left + rho_right - 1.0).abs() > 1e-12
        {
            return Err(ChainError::BadPopulations { rho_left, rho_right });
        }
        let bound = (rho_left * rho_right).sqrt();
        if !coherence.is_finite() || coherence < 0.0 || coherence > bound + 1e-12 {
            return Err(ChainError::PositivityViolation { coherence, bound });
        }
        if left_site < 1 {
            return Err(ChainError::SiteOutOfRange { site: left_site, n_sites: 0 });
        }
        if !theta.is_finite() {
            return Err(ChainError::BadPropagationConfig(format!(
                "phase theta must be finite, got {theta}"
            )));
        }
        Ok(InitialCondition {
            left_site,
            rho_left,
            rho_right,
            coherence,
            theta: crate::analytics::normalize_theta(theta),
        })
    }

    /// Pure state `(|pi_L> + e^{i theta} |pi_{L+1}>) / sqrt(2)`:
    /// equal populations and maximal coherence `a = 1/2`.
    pub fn pure(left_site: usize, theta: f64) -> Result<Self> {
        InitialCondition::new(left_site, 0.5, 0.5, 0.5, theta)
    }

    /// Pure state on the default centered pair of the chain.
    pub fn centered_pure(spec: &ChainSpec, theta: f64) -> Result<Self> {
        InitialCondition::pure(spec.default_left_site(), theta)
    }

    pub fn left_site(&self) -> usize {
        self.left_site
    }

    pub fn rho_left(&self) -> f64 {
        self.rho_left
    }

    pub fn rho_right(&self) -> f64 {
        self.rho_right
    }

    /// Coherence magnitude `a`.
    pub fn coherence(&self) -> f64 {
        self.coherence
    }

    /// Relative phase `theta` in `(-pi, pi]`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Mean position of the excitation at `t = 0`.
    pub fn mean_position(&self) -> f64 {
        self.left_site as f64 * self.rho_left + (self.left_site + 1) as f64 * self.rho_right
    }
}

/// Density matrix in the single-excitation site basis, tagged with the
/// time it describes.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub matrix: DMatrix<Complex64>,
    pub time: f64,
}

impl DensityMatrix {
    pub fn n_sites(&self) -> usize {
        self.matrix.nrows()
    }

    /// Site populations `rho_nn` (real parts of the diagonal).
    pub fn populations(&self) -> Vec<f64> {
        (0..self.matrix.nrows()).map(|i| self.matrix[(i, i)].re).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.matrix.nrows()).map(|i| self.matrix[(i, i)]).sum()
    }
}

/// Place the validated two-site block into an otherwise zero matrix.
pub fn build_initial_density(spec: &ChainSpec, init: &InitialCondition) -> Result<DensityMatrix> {
    let n = spec.n_sites;
    if init.left_site + 1 > n {
        return Err(ChainError::SiteOutOfRange { site: init.left_site, n_sites: n });
    }
    let l = init.left_site - 1;
    let mut matrix = DMatrix::<Complex64>::zeros(n, n);
    let coherence = Complex64::from_polar(init.coherence, -init.theta);
    matrix[(l, l)] = Complex64::new(init.rho_left, 0.0);
    matrix[(l + 1, l + 1)] = Complex64::new(init.rho_right, 0.0);
    matrix[(l, l + 1)] = coherence;
    matrix[(l + 1, l)] = coherence.conj();
    Ok(DensityMatrix { matrix, time: 0.0 })
}

/// A named defect found by [`validate_density`].
#[derive(Debug, Clone, PartialEq)]
pub enum DensityViolation {
    /// `|tr rho - 1|` exceeded [`TRACE_TOL`]; carries the residual.
    Trace(f64),
    /// `max |rho - rho^dagger|` exceeded [`HERMITICITY_TOL`].
    Hermiticity(f64),
    /// A population sits below `-DIAGONAL_TOL`; carries the 1-based site.
    NegativeDiagonal { site: usize, value: f64 },
}

impl fmt::Display for DensityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityViolation::Trace(residual) => {
                write!(f, "trace deviates from 1 by {residual:e}")
            }
            DensityViolation::Hermiticity(residual) => {
                write!(f, "hermiticity residual {residual:e}")
            }
            DensityViolation::NegativeDiagonal { site, value } => {
                write!(f, "population at site {site} is negative: {value:e}")
            }
        }
    }
}

/// Diagnostic check of the density-matrix invariants; returns every
/// violated invariant with its residual (empty means valid).
pub fn validate_density(rho: &DensityMatrix) -> Vec<DensityViolation> {
    let mut violations = Vec::new();
    let n = rho.matrix.nrows();

    let mut herm = 0.0_f64;
    for j in 0..n {
        for i in 0..=j {
            let residual = (rho.matrix[(i, j)] - rho.matrix[(j, i)].conj()).norm();
            herm = herm.max(residual);
        }
    }
    if herm > HERMITICITY_TOL {
        violations.push(DensityViolation::Hermiticity(herm));
    }

    let trace_residual = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
    if trace_residual > TRACE_TOL {
        violations.push(DensityViolation::Trace(trace_residual));
    }

    for i in 0..n {
        let value = rho.matrix[(i, i)].re;
        if value < -DIAGONAL_TOL {
            violations.push(DensityViolation::NegativeDiagonal { site: i + 1, value });
        }
    }
    violations
}
