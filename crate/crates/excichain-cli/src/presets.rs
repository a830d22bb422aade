//! Named parameter sets reproducing the reference figures at desk scale.
//!
//! The `fig1*` presets propagate the full dipole (power-law) chain with
//! open ends; `fig2` sweeps the initial phase on the same chain; `fig3`
//! uses the engineered focusing profile. All of them start from the pure
//! two-site state on the centered pair.

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use excichain::couplings::{focusing_profile, CouplingModel};
use excichain::dynamics::PropagationConfig;
use excichain::model::{Boundary, ChainSpec, InitialCondition};

use crate::config::{linear_grid, ConfigError, RunConfig, SweepConfig, SweepParameter};

pub const PRESET_NAMES: [&str; 5] = ["fig1a", "fig1c", "fig1f", "fig2", "fig3"];

pub enum Preset {
    Run(RunConfig),
    Sweep(SweepConfig),
}

pub fn lookup(name: &str) -> Result<Preset, ConfigError> {
    let run = |theta: f64, gamma: f64, coupling: CouplingModel, t_max: f64| -> Result<RunConfig, ConfigError> {
        let chain = ChainSpec::new(60, 0.0, coupling, Boundary::Open, gamma)?;
        let initial = InitialCondition::centered_pure(&chain, theta)?;
        Ok(RunConfig {
            chain,
            initial,
            propagation: PropagationConfig::new(t_max, 0.01, 10)?,
            trajectory_csv: PathBuf::from(format!("{name}_trajectory.csv")),
            summary_csv: PathBuf::from(format!("{name}_summary.csv")),
        })
    };
    let dipole = CouplingModel::dipole(1.0);

    match name {
        "fig1a" => Ok(Preset::Run(run(FRAC_PI_2, 0.0, dipole, 12.0)?)),
        "fig1c" => Ok(Preset::Run(run(0.0, 0.0, dipole, 12.0)?)),
        "fig1f" => Ok(Preset::Run(run(FRAC_PI_2, 0.3, dipole, 12.0)?)),
        "fig3" => Ok(Preset::Run(run(-FRAC_PI_2, 0.0, focusing_profile(60, 1.0)?, 40.0)?)),
        "fig2" => {
            let base = run(FRAC_PI_2, 0.0, dipole, 12.0)?;
            Ok(Preset::Sweep(SweepConfig {
                parameter: SweepParameter::Theta,
                values: linear_grid(-FRAC_PI_2, FRAC_PI_2, 19)?,
                base,
                sweep_csv: PathBuf::from("fig2_sweep.csv"),
            }))
        }
        other => Err(ConfigError::general(format!(
            "unknown preset `{other}` (available: {})",
            PRESET_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_build() {
        for name in PRESET_NAMES {
            assert!(lookup(name).is_ok(), "preset {name} failed to build");
        }
        assert!(lookup("fig9").is_err());
    }

    #[test]
    fn fig2_grid_shape() {
        let Preset::Sweep(sweep) = lookup("fig2").unwrap() else {
            panic!("fig2 must be a sweep preset");
        };
        assert_eq!(sweep.values.len(), 19);
        assert!((sweep.values[0] + FRAC_PI_2).abs() < 1e-12);
        assert!((sweep.values[18] - FRAC_PI_2).abs() < 1e-12);
        assert!((sweep.values[9]).abs() < 1e-12);
    }

    #[test]
    fn fig3_uses_engineered_profile() {
        let Preset::Run(run) = lookup("fig3").unwrap() else {
            panic!("fig3 must be a run preset");
        };
        assert!(matches!(run.chain.coupling(), CouplingModel::Custom(_)));
        assert!(run.initial.theta() < 0.0);
    }
}
