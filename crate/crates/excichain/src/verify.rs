//! Independent brute-force oracles.
//!
//! These deliberately share no numerical machinery with the production
//! paths: the coherent dynamics is reproduced by spectral decomposition
//! instead of time stepping, and the k-distribution by explicit overlap
//! integrals instead of the closed form. Disagreements between an oracle
//! and the module it checks therefore localize bugs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{ChainError, Result};
use crate::model::Hamiltonian;

/// A pure state in the site basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
    time: f64,
}

impl StateVector {
    /// Requires unit norm within 1e-10.
    pub fn new(amplitudes: DVector<Complex64>, time: f64) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-10 {
            return Err(ChainError::NormalizationViolation { sum: norm });
        }
        Ok(StateVector { amplitudes, time })
    }

    /// The pure two-site state `(|pi_L> + e^{i theta} |pi_{L+1}>)/sqrt(2)`.
    pub fn two_site(n_sites: usize, left_site: usize, theta: f64) -> Result<Self> {
        if left_site < 1 || left_site + 1 > n_sites {
            return Err(ChainError::SiteOutOfRange { site: left_site, n_sites });
        }
        let mut amplitudes = DVector::<Complex64>::zeros(n_sites);
        let w = std::f64::consts::FRAC_1_SQRT_2;
        amplitudes[left_site - 1] = Complex64::new(w, 0.0);
        amplitudes[left_site] = Complex64::from_polar(w, theta);
        Ok(StateVector { amplitudes, time: 0.0 })
    }

    /// Excitation fully localized on one site (1-based).
    pub fn localized(n_sites: usize, site: usize) -> Result<Self> {
        if site < 1 || site > n_sites {
            return Err(ChainError::SiteOutOfRange { site, n_sites });
        }
        let mut amplitudes = DVector::<Complex64>::zeros(n_sites);
        amplitudes[site - 1] = Complex64::new(1.0, 0.0);
        Ok(StateVector { amplitudes, time: 0.0 })
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Projector `|psi><psi|` as a density matrix.
    pub fn density(&self) -> crate::model::DensityMatrix {
        let n = self.amplitudes.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        });
        crate::model::DensityMatrix { matrix, time: self.time }
    }
}

/// Propagate a pure state to time `t` by spectral decomposition:
/// `psi(t) = Q exp(-i Lambda t) Q^T psi(0)` with `H = Q Lambda Q^T`.
///
/// Exact up to linear-algebra round-off; no time stepping involved.
pub fn schrodinger_propagate(h: &Hamiltonian, psi0: &StateVector, t: f64) -> Result<StateVector> {
    let n = h.n_sites();
    if psi0.amplitudes.len() != n {
        return Err(ChainError::DimensionMismatch { expected: n, got: psi0.amplitudes.len() });
    }
    if h.matrix().iter().any(|x| !x.is_finite()) {
        return Err(ChainError::NonFiniteHamiltonian);
    }
    let eigen = h.matrix().clone().symmetric_eigen();
    let q = &eigen.eigenvectors;

    // coefficients in the eigenbasis: c_k = sum_n Q_nk psi_n
    let mut coeffs = DVector::<Complex64>::zeros(n);
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for site in 0..n {
            acc += q[(site, k)] * psi0.amplitudes[site];
        }
        coeffs[k] = acc * Complex64::from_polar(1.0, -eigen.eigenvalues[k] * t);
    }
    let mut amplitudes = DVector::<Complex64>::zeros(n);
    for site in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            acc += q[(site, k)] * coeffs[k];
        }
        amplitudes[site] = acc;
    }

    let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
        return Err(ChainError::NumericalAbort {
            time: t,
            what: format!("spectral propagation lost unitarity, norm {norm}"),
        });
    }
    Ok(StateVector { amplitudes, time: psi0.time + t })
}

/// Brute-force k-distribution of the pure two-site state.
///
/// Builds the explicit initial vector on sites `(N/2, N/2 + 1)`, projects
/// it onto each explicit plane-wave eigenvector, and returns the squared
/// moduli ordered like `analytics::k_spectrum`. The closed-form
/// distribution is never used here.
pub fn brute_force_pk(n_sites: usize, theta: f64) -> Result<Vec<f64>> {
    if n_sites < 2 || n_sites % 2 != 0 {
        return Err(ChainError::OddSites(n_sites));
    }
    let psi = StateVector::two_site(n_sites, n_sites / 2, theta)?;
    let n = n_sites as f64;
    let norm = 1.0 / n.sqrt();
    let half = (n_sites / 2) as i64;
    let mut weights = Vec::with_capacity(n_sites);
    for j in -half..half {
        let k = 2.0 * std::f64::consts::PI * j as f64 / n;
        // <phi_k | psi> with phi_k components e^{ikn}/sqrt(N), n = 1..N
        let mut overlap = Complex64::new(0.0, 0.0);
        for site in 1..=n_sites {
            let basis = Complex64::from_polar(norm, k * site as f64);
            overlap += basis.conj() * psi.amplitudes[site - 1];
        }
        weights.push(overlap.norm_sqr());
    }
    Ok(weights)
}
