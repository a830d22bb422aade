//! Propagation of the pure-dephasing master equation and the transport
//! observables extracted from it.
//!
//! The equation of motion for the site-basis density matrix is
//!
//! ```text
//! d rho_nm / dt = -i [H, rho]_nm - gamma (1 - delta_nm) rho_nm
//! ```
//!
//! with `hbar = 1`: coherent hopping plus exponential damping of every
//! inter-site coherence at the dephasing rate `gamma`. Populations carry no
//! damping term, so the trace is conserved exactly.
//!
//! Integration is fixed-step classical Runge-Kutta (RK4) on the full complex
//! matrix. The equation is linear and non-stiff at the scales of interest,
//! and a fixed step gives reproducible output grids. After every step the
//! state is re-symmetrized, `rho <- (rho + rho^dagger)/2`, which removes
//! round-off Hermiticity drift without touching the physics.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{ChainError, Result};
use crate::model::{build_hamiltonian, build_initial_density, ChainSpec, DensityMatrix,
                   Hamiltonian, InitialCondition};

/// Stability guard: require `dt * max(|H|_inf, gamma) <= 0.1`.
pub const STABILITY_LIMIT: f64 = 0.1;

/// Trace deviation at which a run is aborted as numerically broken.
const TRACE_ABORT: f64 = crate::model::TRACE_TOL;

/// Fixed-step integrator settings.
#[derive(Debug, Clone, Copy)]
pub struct PropagationConfig {
    t_max: f64,
    dt: f64,
    output_stride: usize,
}

impl PropagationConfig {
    pub fn new(t_max: f64, dt: f64, output_stride: usize) -> Result<Self> {
        if !t_max.is_finite() || t_max < 0.0 {
            return Err(ChainError::BadPropagationConfig(format!(
                "t_max must be finite and nonnegative, got {t_max}"
            )));
        }
        if !dt.is_finite() || dt <= 0.0 {
            return Err(ChainError::BadPropagationConfig(format!(
                "dt must be finite and positive, got {dt}"
            )));
        }
        if output_stride == 0 {
            return Err(ChainError::BadPropagationConfig(
                "output_stride must be at least 1".into(),
            ));
        }
        Ok(PropagationConfig { t_max, dt, output_stride })
    }

    /// `t_max` with the default step `dt = 0.01` and stride 10.
    pub fn until(t_max: f64) -> Result<Self> {
        PropagationConfig::new(t_max, 0.01, 10)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn output_stride(&self) -> usize {
        self.output_stride
    }

    pub fn with_stride(mut self, output_stride: usize) -> Self {
        self.output_stride = output_stride.max(1);
        self
    }
}

/// Time series of populations and derived observables.
///
/// All vectors share the same length; `populations[i]` holds the `N` site
/// populations at `times[i]`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub populations: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub p_left: Vec<f64>,
    pub p_right: Vec<f64>,
    pub phi: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds at least t = 0")
    }

    pub fn final_mean(&self) -> f64 {
        *self.mean.last().expect("trajectory holds at least t = 0")
    }

    pub fn final_p_left(&self) -> f64 {
        *self.p_left.last().expect("trajectory holds at least t = 0")
    }
}

/// Right-hand side of the master equation, dense reference implementation.
///
/// Returns `-i [H, rho] - gamma * offdiag(rho)`; the diagonal carries no
/// dephasing term.
pub fn master_rhs(
    rho: &DMatrix<Complex64>,
    h: &Hamiltonian,
    gamma: f64,
) -> Result<DMatrix<Complex64>> {
    let n = h.n_sites();
    if rho.nrows() != n || rho.ncols() != n {
        return Err(ChainError::DimensionMismatch { expected: n, got: rho.nrows() });
    }
    let h_c = h.matrix().map(|x| Complex64::new(x, 0.0));
    let commutator = &h_c * rho - rho * &h_c;
    let mut out = commutator.map(|c| Complex64::new(c.im, -c.re)); // -i * c
    for j in 0..n {
        for i in 0..n {
            if i != j {
                out[(i, j)] -= gamma * rho[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Population-weighted mean site index `M = sum_n n rho_nn` (1-based).
pub fn mean_position(populations: &[f64]) -> Result<f64> {
    let sum: f64 = populations.iter().sum();
    if (sum - 1.0).abs() > 1e-8 {
        return Err(ChainError::NormalizationViolation { sum });
    }
    Ok(populations
        .iter()
        .enumerate()
        .map(|(i, p)| (i + 1) as f64 * p)
        .sum())
}

/// Total population on sites `1..=split_after` and on the rest.
pub fn side_populations(populations: &[f64], split_after: usize) -> Result<(f64, f64)> {
    let n = populations.len();
    if split_after < 1 || split_after >= n {
        return Err(ChainError::BadSplitIndex { split: split_after, n_sites: n });
    }
    let p_left: f64 = populations[..split_after].iter().sum();
    let p_right: f64 = populations[split_after..].iter().sum();
    Ok((p_left, p_right))
}

/// Current-like coherence sum `phi = i sum_n (rho_{n+1,n} - rho_{n,n+1})`.
///
/// Computed as the open-chain sum over `n = 1..N-1` (no wrap term); the mean
/// velocity of the excitation is `V * phi` while the packet is away from the
/// chain ends.
pub fn phi_observable(rho: &DensityMatrix) -> f64 {
    phi_of_matrix(&rho.matrix)
}

fn phi_of_matrix(matrix: &DMatrix<Complex64>) -> f64 {
    let n = matrix.nrows();
    -2.0 * (0..n - 1).map(|i| matrix[(i + 1, i)].im).sum::<f64>()
}

/// Integrate the master equation and record observables on the output grid.
///
/// The grid holds `t = 0`, every `output_stride`-th step, and the final
/// time. Populations are recorded per site; the mean, the side populations
/// (split after site `floor(N/2)`), and `phi` are derived at each stored
/// time.
pub fn propagate(
    spec: &ChainSpec,
    init: &InitialCondition,
    cfg: &PropagationConfig,
) -> Result<Trajectory> {
    propagate_full(spec, init, cfg).map(|(traj, _)| traj)
}

/// Like [`propagate`], but also hands back the density matrix at the final
/// time for entrywise inspection.
pub fn propagate_full(
    spec: &ChainSpec,
    init: &InitialCondition,
    cfg: &PropagationConfig,
) -> Result<(Trajectory, DensityMatrix)> {
    let h = build_hamiltonian(spec)?;
    let rho0 = build_initial_density(spec, init)?;
    let gamma = spec.dephasing_rate();

    let guard = cfg.dt * h.inf_norm().max(gamma);
    if guard > STABILITY_LIMIT {
        return Err(ChainError::StabilityGuard { product: guard, limit: STABILITY_LIMIT });
    }

    let action = HamiltonianAction::for_spec(spec, &h);
    let split_after = spec.n_sites() / 2;
    let n_steps = steps_for(cfg.t_max, cfg.dt);

    let mut rho = rho0.matrix;
    let mut traj = Trajectory {
        times: Vec::new(),
        populations: Vec::new(),
        mean: Vec::new(),
        p_left: Vec::new(),
        p_right: Vec::new(),
        phi: Vec::new(),
    };
    record(&mut traj, &rho, 0.0, split_after)?;

    let mut stepper = Rk4::new(spec.n_sites());
    for step in 1..=n_steps {
        stepper.advance(&mut rho, &action, gamma, cfg.dt);
        hermitize(&mut rho);
        if step % cfg.output_stride == 0 || step == n_steps {
            record(&mut traj, &rho, step as f64 * cfg.dt, split_after)?;
        }
    }
    let final_time = traj.final_time();
    Ok((traj, DensityMatrix { matrix: rho, time: final_time }))
}

fn steps_for(t_max: f64, dt: f64) -> usize {
    ((t_max / dt) - 1e-9).ceil().max(0.0) as usize
}

fn record(
    traj: &mut Trajectory,
    rho: &DMatrix<Complex64>,
    time: f64,
    split_after: usize,
) -> Result<()> {
    let n = rho.nrows();
    let populations: Vec<f64> = (0..n).map(|i| rho[(i, i)].re).collect();
    let trace: f64 = populations.iter().sum();
    if !trace.is_finite() {
        return Err(ChainError::NumericalAbort {
            time,
            what: "non-finite population encountered".into(),
        });
    }
    if (trace - 1.0).abs() > TRACE_ABORT {
        return Err(ChainError::NumericalAbort {
            time,
            what: format!("trace drifted to {trace}"),
        });
    }
    let mean: f64 = populations.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p).sum();
    let (p_left, p_right) = side_populations(&populations, split_after)?;
    traj.times.push(time);
    traj.mean.push(mean);
    traj.p_left.push(p_left);
    traj.p_right.push(p_right);
    traj.phi.push(phi_of_matrix(rho));
    traj.populations.push(populations);
    Ok(())
}

/// Exact symmetrization `rho <- (rho + rho^dagger)/2`; the result is
/// bitwise Hermitian.
fn hermitize(rho: &mut DMatrix<Complex64>) {
    let n = rho.nrows();
    for j in 0..n {
        rho[(j, j)] = Complex64::new(rho[(j, j)].re, 0.0);
        for i in 0..j {
            let avg = (rho[(i, j)] + rho[(j, i)].conj()) * 0.5;
            rho[(i, j)] = avg;
            rho[(j, i)] = avg.conj();
        }
    }
}

/// The Hamiltonian as an operator on density matrices.
///
/// Nearest-neighbor and custom profiles act through their bond list in
/// O(N^2); dense profiles (power law) go through real matrix products on
/// the split real/imaginary parts, which keeps the inner loops in f64.
/// Both paths compute the same commutator; a unit test pins them to the
/// dense reference [`master_rhs`].
enum HamiltonianAction {
    Banded { bonds: Vec<f64>, wrap: f64 },
    Dense { h: DMatrix<f64> },
}

impl HamiltonianAction {
    fn for_spec(spec: &ChainSpec, h: &Hamiltonian) -> Self {
        use crate::couplings::CouplingModel::*;
        match spec.coupling() {
            NearestNeighbor { strength } => HamiltonianAction::Banded {
                bonds: spec.coupling().bonds(spec.n_sites()),
                wrap: match spec.boundary() {
                    crate::model::Boundary::Periodic => *strength,
                    crate::model::Boundary::Open => 0.0,
                },
            },
            Custom(_) => HamiltonianAction::Banded {
                bonds: spec.coupling().bonds(spec.n_sites()),
                wrap: 0.0,
            },
            PowerLaw { .. } => HamiltonianAction::Dense { h: h.matrix().clone() },
        }
    }

    /// Write `-i [H, rho] - gamma * offdiag(rho)` into `out`.
    ///
    /// The uniform diagonal of H commutes with everything and is skipped.
    fn rhs(&self, rho: &DMatrix<Complex64>, gamma: f64, out: &mut DMatrix<Complex64>) {
        match self {
            HamiltonianAction::Banded { bonds, wrap } => {
                banded_rhs(bonds, *wrap, rho, gamma, out);
            }
            HamiltonianAction::Dense { h } => dense_rhs(h, rho, gamma, out),
        }
    }
}

fn banded_rhs(
    bonds: &[f64],
    wrap: f64,
    rho: &DMatrix<Complex64>,
    gamma: f64,
    out: &mut DMatrix<Complex64>,
) {
    let n = rho.nrows();
    let zero = Complex64::new(0.0, 0.0);
    for m in 0..n {
        for site in 0..n {
            // (H rho)_{site,m} from the bonds touching `site`
            let mut c = zero;
            if site > 0 {
                c += bonds[site - 1] * rho[(site - 1, m)];
            }
            if site + 1 < n {
                c += bonds[site] * rho[(site + 1, m)];
            }
            // (rho H)_{site,m} from the bonds touching `m`
            if m > 0 {
                c -= bonds[m - 1] * rho[(site, m - 1)];
            }
            if m + 1 < n {
                c -= bonds[m] * rho[(site, m + 1)];
            }
            if wrap != 0.0 {
                if site == 0 {
                    c += wrap * rho[(n - 1, m)];
                } else if site == n - 1 {
                    c += wrap * rho[(0, m)];
                }
                if m == 0 {
                    c -= wrap * rho[(site, n - 1)];
                } else if m == n - 1 {
                    c -= wrap * rho[(site, 0)];
                }
            }
            // -i c - gamma * offdiag
            let mut value = Complex64::new(c.im, -c.re);
            if site != m {
                value -= gamma * rho[(site, m)];
            }
            out[(site, m)] = value;
        }
    }
}

fn dense_rhs(h: &DMatrix<f64>, rho: &DMatrix<Complex64>, gamma: f64, out: &mut DMatrix<Complex64>) {
    let n = rho.nrows();
    let re = rho.map(|x| x.re);
    let im = rho.map(|x| x.im);
    let c_re = h * &re - &re * h;
    let c_im = h * &im - &im * h;
    for j in 0..n {
        for i in 0..n {
            // -i (c_re + i c_im) = c_im - i c_re
            let mut value = Complex64::new(c_im[(i, j)], -c_re[(i, j)]);
            if i != j {
                value -= gamma * rho[(i, j)];
            }
            out[(i, j)] = value;
        }
    }
}

/// Classical RK4 with preallocated stage buffers.
struct Rk4 {
    k1: DMatrix<Complex64>,
    k2: DMatrix<Complex64>,
    k3: DMatrix<Complex64>,
    k4: DMatrix<Complex64>,
    stage: DMatrix<Complex64>,
}

impl Rk4 {
    fn new(n: usize) -> Self {
        let zeros = || DMatrix::<Complex64>::zeros(n, n);
        Rk4 { k1: zeros(), k2: zeros(), k3: zeros(), k4: zeros(), stage: zeros() }
    }

    fn advance(
        &mut self,
        rho: &mut DMatrix<Complex64>,
        action: &HamiltonianAction,
        gamma: f64,
        dt: f64,
    ) {
        let half = dt / 2.0;
        action.rhs(rho, gamma, &mut self.k1);

        self.stage.zip_zip_apply(rho, &self.k1, |s, r, k| *s = r + half * k);
        action.rhs(&self.stage, gamma, &mut self.k2);

        self.stage.zip_zip_apply(rho, &self.k2, |s, r, k| *s = r + half * k);
        action.rhs(&self.stage, gamma, &mut self.k3);

        self.stage.zip_zip_apply(rho, &self.k3, |s, r, k| *s = r + dt * k);
        action.rhs(&self.stage, gamma, &mut self.k4);

        let sixth = dt / 6.0;
        for j in 0..rho.ncols() {
            for i in 0..rho.nrows() {
                let idx = (i, j);
                rho[idx] += sixth
                    * (self.k1[idx]
                        + 2.0 * self.k2[idx]
                        + 2.0 * self.k3[idx]
                        + self.k4[idx]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::couplings::CouplingModel;
    use crate::model::Boundary;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn nn_spec(n: usize, gamma: f64) -> ChainSpec {
        ChainSpec::new(
            n,
            0.0,
            CouplingModel::NearestNeighbor { strength: 1.0 },
            Boundary::Open,
            gamma,
        )
        .unwrap()
    }

    #[test]
    fn rhs_of_diagonal_pair_vanishes() {
        // diagonal rho and diagonal H commute, and there is no coherence to damp
        let h = Hamiltonian::from_symmetric(DMatrix::from_diagonal(
            &nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0]),
        ))
        .unwrap();
        let rho = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.2, 0.0),
            Complex64::new(0.3, 0.0),
            Complex64::new(0.5, 0.0),
        ]));
        let out = master_rhs(&rho, &h, 0.7).unwrap();
        assert!(out.iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn rhs_two_site_hand_value() {
        // H = [[0,1],[1,0]], rho = |1><1|: d rho_11/dt = 0, d rho_12/dt = +i
        let spec = nn_spec(2, 0.0);
        let h = build_hamiltonian(&spec).unwrap();
        let mut rho = DMatrix::<Complex64>::zeros(2, 2);
        rho[(0, 0)] = Complex64::new(1.0, 0.0);
        let out = master_rhs(&rho, &h, 0.0).unwrap();
        assert_abs_diff_eq!(out[(0, 0)].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out[(0, 1)].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out[(0, 1)].im, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn dephasing_only_damps_coherences() {
        let spec = nn_spec(4, 0.0);
        let h = build_hamiltonian(&spec).unwrap();
        let init = InitialCondition::pure(2, 0.9).unwrap();
        let rho = build_initial_density(&spec, &init).unwrap().matrix;
        let gamma = 0.37;
        let without = master_rhs(&rho, &h, 0.0).unwrap();
        let with = master_rhs(&rho, &h, gamma).unwrap();
        for j in 0..4 {
            for i in 0..4 {
                let expected = if i == j {
                    without[(i, j)]
                } else {
                    without[(i, j)] - gamma * rho[(i, j)]
                };
                assert_abs_diff_eq!((with[(i, j)] - expected).norm(), 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn rhs_dimension_mismatch() {
        let spec = nn_spec(3, 0.0);
        let h = build_hamiltonian(&spec).unwrap();
        let rho = DMatrix::<Complex64>::zeros(2, 2);
        assert!(matches!(
            master_rhs(&rho, &h, 0.0),
            Err(ChainError::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn engine_paths_match_dense_reference() {
        // banded (open + periodic + custom) and split-real dense paths against master_rhs
        let configs = [
            ChainSpec::new(
                5,
                0.0,
                CouplingModel::NearestNeighbor { strength: 0.8 },
                Boundary::Open,
                0.25,
            )
            .unwrap(),
            ChainSpec::new(
                6,
                0.0,
                CouplingModel::NearestNeighbor { strength: -1.1 },
                Boundary::Periodic,
                0.0,
            )
            .unwrap(),
            ChainSpec::new(
                5,
                0.0,
                CouplingModel::Custom(vec![0.4, -0.9, 1.3, 0.2]),
                Boundary::Open,
                0.6,
            )
            .unwrap(),
            ChainSpec::new(5, 0.0, CouplingModel::dipole(0.9), Boundary::Open, 0.15).unwrap(),
        ];
        for spec in configs {
            let n = spec.n_sites();
            let h = build_hamiltonian(&spec).unwrap();
            // pseudo-random Hermitian rho with unit trace
            let mut rho = DMatrix::<Complex64>::zeros(n, n);
            let mut seed = 1.0_f64;
            for j in 0..n {
                for i in 0..=j {
                    seed = (seed * 997.13).fract();
                    let re = seed - 0.5;
                    seed = (seed * 913.77).fract();
                    let im = if i == j { 0.0 } else { seed - 0.5 };
                    rho[(i, j)] = Complex64::new(re, im);
                    rho[(j, i)] = Complex64::new(re, -im);
                }
            }
            let trace: Complex64 = (0..n).map(|i| rho[(i, i)]).sum();
            rho[(0, 0)] += Complex64::new(1.0, 0.0) - trace;

            let reference = master_rhs(&rho, &h, spec.dephasing_rate()).unwrap();
            let action = HamiltonianAction::for_spec(&spec, &h);
            let mut out = DMatrix::<Complex64>::zeros(n, n);
            action.rhs(&rho, spec.dephasing_rate(), &mut out);
            let diff = (&out - &reference).map(|x| x.norm()).max();
            assert!(diff < 1e-13, "engine path deviates from reference by {diff}");
        }
    }

    #[test]
    fn symmetric_spread_keeps_mean() {
        // theta = 0: the mean stays pinned at the initial location
        let spec = nn_spec(60, 0.0);
        let init = InitialCondition::centered_pure(&spec, 0.0).unwrap();
        let cfg = PropagationConfig::new(12.0, 0.01, 100).unwrap();
        let traj = propagate(&spec, &init, &cfg).unwrap();
        for &m in &traj.mean {
            assert_abs_diff_eq!(m, 30.5, epsilon = 1e-8);
        }
    }

    #[test]
    fn positive_theta_moves_left() {
        let spec = nn_spec(30, 0.0);
        let init = InitialCondition::centered_pure(&spec, FRAC_PI_2).unwrap();
        let cfg = PropagationConfig::new(5.0, 0.01, 20).unwrap();
        let traj = propagate(&spec, &init, &cfg).unwrap();
        for pair in traj.mean.windows(2) {
            assert!(pair[1] < pair[0], "mean must decrease monotonically");
        }
    }

    #[test]
    fn trajectory_normalization_invariants() {
        let spec = ChainSpec::new(12, 0.0, CouplingModel::dipole(1.0), Boundary::Open, 0.2)
            .unwrap();
        let init = InitialCondition::centered_pure(&spec, 0.7).unwrap();
        let cfg = PropagationConfig::new(3.0, 0.01, 7).unwrap();
        let traj = propagate(&spec, &init, &cfg).unwrap();
        for i in 0..traj.len() {
            let total: f64 = traj.populations[i].iter().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(traj.p_left[i] + traj.p_right[i], 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn phi_initial_values() {
        let spec = nn_spec(10, 0.0);
        for (a, theta, expected) in [
            (0.5, FRAC_PI_2, -1.0),
            (0.0, 1.3, 0.0),
            (0.5, 0.0, 0.0),
            (0.25, -FRAC_PI_2, 0.5),
        ] {
            let init = InitialCondition::new(5, 0.5, 0.5, a, theta).unwrap();
            let rho = build_initial_density(&spec, &init).unwrap();
            assert_abs_diff_eq!(phi_observable(&rho), expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn mean_position_values() {
        let mut pops = vec![0.0; 60];
        pops[29] = 1.0;
        assert_abs_diff_eq!(mean_position(&pops).unwrap(), 30.0);
        pops[29] = 0.5;
        pops[30] = 0.5;
        assert_abs_diff_eq!(mean_position(&pops).unwrap(), 30.5);
        let uniform = vec![0.25; 4];
        assert_abs_diff_eq!(mean_position(&uniform).unwrap(), 2.5);
        assert!(matches!(
            mean_position(&vec![0.3, 0.3]),
            Err(ChainError::NormalizationViolation { .. })
        ));
    }

    #[test]
    fn side_population_values() {
        let mut pops = vec![0.0; 60];
        pops[0] = 1.0;
        let (l, r) = side_populations(&pops, 30).unwrap();
        assert_eq!((l, r), (1.0, 0.0));
        assert!(side_populations(&pops, 0).is_err());
        assert!(side_populations(&pops, 60).is_err());
    }

    #[test]
    fn stability_guard_triggers() {
        let spec = nn_spec(10, 0.0);
        let init = InitialCondition::centered_pure(&spec, 0.0).unwrap();
        let cfg = PropagationConfig::new(1.0, 0.06, 1).unwrap(); // 0.06 * 2 > 0.1
        assert!(matches!(
            propagate(&spec, &init, &cfg),
            Err(ChainError::StabilityGuard { .. })
        ));
    }

    #[test]
    fn zero_t_max_yields_single_row() {
        let spec = nn_spec(8, 0.1);
        let init = InitialCondition::centered_pure(&spec, 1.0).unwrap();
        let cfg = PropagationConfig::new(0.0, 0.01, 5).unwrap();
        let traj = propagate(&spec, &init, &cfg).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.times[0], 0.0);
        assert_abs_diff_eq!(traj.mean[0], 4.5);
    }

    #[test]
    fn hermiticity_exact_after_symmetrization() {
        let spec = nn_spec(16, 0.3);
        let init = InitialCondition::centered_pure(&spec, 1.1).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        let action = HamiltonianAction::for_spec(&spec, &h);
        let mut rho = build_initial_density(&spec, &init).unwrap().matrix;
        let mut stepper = Rk4::new(16);
        for _ in 0..50 {
            stepper.advance(&mut rho, &action, 0.3, 0.01);
            hermitize(&mut rho);
        }
        for j in 0..16 {
            for i in 0..16 {
                assert_eq!(rho[(i, j)], rho[(j, i)].conj());
            }
        }
    }
}
