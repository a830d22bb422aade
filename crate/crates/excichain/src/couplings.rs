//! Off-diagonal coupling profiles between chain sites.
//!
//! Three models are supported: the dipole-dipole power law `V / |n - m|^p`,
//! uniform nearest-neighbor coupling, and arbitrary per-bond nearest-neighbor
//! profiles. [`focusing_profile`] builds the engineered profile that refocuses
//! a wave packet at the chain endpoints.

use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{ChainError, Result};
use crate::model::Boundary;

/// How sites couple to each other.
#[derive(Debug, Clone, PartialEq)]
pub enum CouplingModel {
    /// `V_nm = strength / |n - m|^exponent` for all site pairs.
    PowerLaw { strength: f64, exponent: f64 },
    /// Uniform coupling between adjacent sites only.
    NearestNeighbor { strength: f64 },
    /// Per-bond strengths `V_{n,n+1}`, one entry per adjacent pair.
    Custom(Vec<f64>),
}

impl CouplingModel {
    /// Dipole-dipole coupling with the usual `1/r^3` distance dependence.
    pub fn dipole(strength: f64) -> Self {
        CouplingModel::PowerLaw { strength, exponent: 3.0 }
    }

    /// Check the model against a chain of `n_sites` sites.
    pub fn validate(&self, n_sites: usize) -> Result<()> {
        match self {
            CouplingModel::PowerLaw { strength, exponent } => {
                if !strength.is_finite() || !exponent.is_finite() {
                    return Err(ChainError::NonFiniteHamiltonian);
                }
                if *exponent <= 0.0 {
                    return Err(ChainError::NonPositiveExponent(*exponent));
                }
            }
            CouplingModel::NearestNeighbor { strength } => {
                if !strength.is_finite() {
                    return Err(ChainError::NonFiniteHamiltonian);
                }
            }
            CouplingModel::Custom(bonds) => {
                if bonds.len() != n_sites - 1 {
                    return Err(ChainError::ProfileLength {
                        expected: n_sites - 1,
                        got: bonds.len(),
                    });
                }
                for (index, &value) in bonds.iter().enumerate() {
                    if !value.is_finite() {
                        return Err(ChainError::NonFiniteCoupling { index, value });
                    }
                }
            }
        }
        Ok(())
    }

    /// The scale `V` of the interaction, where a single scale exists.
    ///
    /// Custom profiles have no single scale; closed-form predictions that
    /// need one do not apply to them.
    pub fn nominal_strength(&self) -> Option<f64> {
        match self {
            CouplingModel::PowerLaw { strength, .. } => Some(*strength),
            CouplingModel::NearestNeighbor { strength } => Some(*strength),
            CouplingModel::Custom(_) => None,
        }
    }

    /// Nearest-neighbor bond strengths `V_{n,n+1}` for n = 1..N-1.
    pub(crate) fn bonds(&self, n_sites: usize) -> Vec<f64> {
        match self {
            CouplingModel::PowerLaw { strength, .. }
            | CouplingModel::NearestNeighbor { strength } => vec![*strength; n_sites - 1],
            CouplingModel::Custom(bonds) => bonds.clone(),
        }
    }
}

/// Build the symmetric off-diagonal coupling matrix for `n_sites` sites.
///
/// Periodic boundaries add the wrap bond `V_{N,1}` and are restricted to
/// nearest-neighbor coupling; custom profiles are restricted to open chains.
pub fn coupling_matrix(
    model: &CouplingModel,
    n_sites: usize,
    boundary: Boundary,
) -> Result<DMatrix<f64>> {
    if n_sites < 2 {
        return Err(ChainError::TooFewSites(n_sites));
    }
    model.validate(n_sites)?;

    let mut v = DMatrix::<f64>::zeros(n_sites, n_sites);
    match model {
        CouplingModel::PowerLaw { strength, exponent } => {
            if boundary == Boundary::Periodic {
                return Err(ChainError::PeriodicRequiresNearestNeighbor);
            }
            for n in 0..n_sites {
                for m in (n + 1)..n_sites {
                    let value = strength / ((m - n) as f64).powf(*exponent);
                    v[(n, m)] = value;
                    v[(m, n)] = value;
                }
            }
        }
        CouplingModel::NearestNeighbor { strength } => {
            for n in 0..n_sites - 1 {
                v[(n, n + 1)] = *strength;
                v[(n + 1, n)] = *strength;
            }
            if boundary == Boundary::Periodic {
                v[(0, n_sites - 1)] = *strength;
                v[(n_sites - 1, 0)] = *strength;
            }
        }
        CouplingModel::Custom(bonds) => {
            if boundary == Boundary::Periodic {
                return Err(ChainError::CustomRequiresOpen);
            }
            for (n, &value) in bonds.iter().enumerate() {
                v[(n, n + 1)] = value;
                v[(n + 1, n)] = value;
            }
        }
    }
    Ok(v)
}

/// Engineered nearest-neighbor profile that refocuses the two halves of a
/// wave packet at the chain endpoints.
///
/// Each half of the chain (length `M = N/2`) carries mirror-transfer bonds
/// `V_{n,n+1} proportional to sqrt(n (M - n))`; the center bond joining the
/// halves takes the value of the same formula on the join-inclusive half,
/// `sqrt(M)` before scaling. The whole profile is scaled so its maximum
/// equals `peak_strength` and is symmetric under index reversal.
pub fn focusing_profile(n_sites: usize, peak_strength: f64) -> Result<CouplingModel> {
    if n_sites < 4 || n_sites % 2 != 0 {
        return Err(ChainError::FocusingSize(n_sites));
    }
    let half = n_sites / 2;
    let arch = |bond: usize| ((bond * (half - bond)) as f64).sqrt();

    let mut bonds = Vec::with_capacity(n_sites - 1);
    for bond in 1..n_sites {
        let value = if bond < half {
            arch(bond)
        } else if bond == half {
            (half as f64).sqrt()
        } else {
            arch(n_sites - bond)
        };
        bonds.push(value);
    }
    let max = bonds.iter().cloned().fold(0.0_f64, f64::max);
    for value in &mut bonds {
        *value *= peak_strength / max;
    }
    Ok(CouplingModel::Custom(bonds))
}

/// Read a custom profile from a text file, one bond strength per line.
///
/// Blank lines and lines starting with `#` are skipped.
pub fn read_profile<P: AsRef<Path>>(path: P) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    parse_profile(&text)
}

/// Parse a one-column profile from text. See [`read_profile`].
pub fn parse_profile(text: &str) -> Result<Vec<f64>> {
    let mut bonds = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let value: f64 = trimmed.parse().map_err(|_| ChainError::ProfileParse {
            line: i + 1,
            content: trimmed.to_string(),
        })?;
        bonds.push(value);
    }
    Ok(bonds)
}
