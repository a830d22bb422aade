//! CSV emission. All numbers are written with 15 significant digits in
//! scientific notation, `.` decimal separator, LF line endings, so a
//! given configuration always produces byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use excichain::analytics::{self, mean_closed_form, MeanClosedForm};
use excichain::dynamics::Trajectory;

use crate::config::RunConfig;

/// 15 significant digits, scientific notation.
pub fn sig15(x: f64) -> String {
    format!("{x:.14e}")
}

/// Trajectory CSV: `t, M, P_L, P_R, phi, rho_11 .. rho_NN`.
pub fn write_trajectory(path: &Path, traj: &Trajectory) -> std::io::Result<()> {
    let n = traj.populations.first().map_or(0, Vec::len);
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "t,M,P_L,P_R,phi")?;
    for site in 1..=n {
        write!(w, ",rho_{site}{site}")?;
    }
    writeln!(w)?;
    for i in 0..traj.len() {
        write!(
            w,
            "{},{},{},{},{}",
            sig15(traj.times[i]),
            sig15(traj.mean[i]),
            sig15(traj.p_left[i]),
            sig15(traj.p_right[i]),
            sig15(traj.phi[i])
        )?;
        for &p in &traj.populations[i] {
            write!(w, ",{}", sig15(p))?;
        }
        writeln!(w)?;
    }
    w.flush()
}

/// Final-time observables next to the closed-form predictions.
///
/// Fields that need a single coupling scale (custom profiles) or an even
/// chain (k-space) are NaN when they do not apply; an unbounded long-time
/// mean (drift without dephasing) is NaN as well.
#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub t: f64,
    pub mean: f64,
    pub p_left: f64,
    pub p_right: f64,
    pub phi: f64,
    pub mean_analytic: f64,
    pub phi_analytic: f64,
    pub p_k_positive: f64,
    pub p_k_positive_limit: f64,
    pub v_initial: f64,
    pub phi0: f64,
    pub long_time_mean: f64,
}

pub const SUMMARY_HEADER: &str = "t,M,P_L,P_R,phi,M_analytic,phi_analytic,p_k_positive,p_k_positive_limit,v_initial,phi0,long_time_mean";

impl SummaryRow {
    pub fn compute(run: &RunConfig, traj: &Trajectory) -> SummaryRow {
        let t = traj.final_time();
        let theta = run.initial.theta();
        let gamma = run.chain.dephasing_rate();
        let phi0 = analytics::phi_initial(run.initial.coherence(), theta);
        let v = run.nominal_strength();
        let n = run.chain.n_sites();
        let even = n >= 4 && n % 2 == 0;

        let with_v = |f: &dyn Fn(f64) -> f64| v.map_or(f64::NAN, f);
        SummaryRow {
            t,
            mean: traj.final_mean(),
            p_left: traj.final_p_left(),
            p_right: *traj.p_right.last().unwrap(),
            phi: *traj.phi.last().unwrap(),
            mean_analytic: with_v(&|v| {
                mean_closed_form(run.initial.mean_position(), v, phi0, gamma, t)
            }),
            phi_analytic: phi0 * (-gamma * t).exp(),
            p_k_positive: if even {
                analytics::p_k_positive(n, theta).expect("even n")
            } else {
                f64::NAN
            },
            p_k_positive_limit: analytics::p_k_positive_limit(theta),
            v_initial: with_v(&|v| analytics::initial_velocity(theta, v)),
            phi0,
            long_time_mean: with_v(&|v| {
                MeanClosedForm { m0: run.initial.mean_position(), v, phi0, gamma }
                    .long_time()
                    .as_f64()
                    .unwrap_or(f64::NAN)
            }),
        }
    }

    fn fields(&self) -> [f64; 12] {
        [
            self.t,
            self.mean,
            self.p_left,
            self.p_right,
            self.phi,
            self.mean_analytic,
            self.phi_analytic,
            self.p_k_positive,
            self.p_k_positive_limit,
            self.v_initial,
            self.phi0,
            self.long_time_mean,
        ]
    }
}

pub fn write_summary(path: &Path, row: &SummaryRow) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{SUMMARY_HEADER}")?;
    let line: Vec<String> = row.fields().iter().map(|&x| sig15(x)).collect();
    writeln!(w, "{}", line.join(","))?;
    w.flush()
}

/// One sweep grid point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub p_left: f64,
    pub mean: f64,
    pub p_k_positive_limit: f64,
    pub long_time_mean: f64,
}

pub const SWEEP_HEADER: &str = "value,P_L,M,p_k_positive_limit,long_time_mean";

impl SweepRow {
    pub fn compute(value: f64, point: &RunConfig, traj: &Trajectory) -> SweepRow {
        let theta = point.initial.theta();
        let gamma = point.chain.dephasing_rate();
        let phi0 = analytics::phi_initial(point.initial.coherence(), theta);
        SweepRow {
            value,
            p_left: traj.final_p_left(),
            mean: traj.final_mean(),
            p_k_positive_limit: analytics::p_k_positive_limit(theta),
            long_time_mean: point.nominal_strength().map_or(f64::NAN, |v| {
                MeanClosedForm { m0: point.initial.mean_position(), v, phi0, gamma }
                    .long_time()
                    .as_f64()
                    .unwrap_or(f64::NAN)
            }),
        }
    }
}

pub fn write_sweep(path: &Path, rows: &[SweepRow]) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{SWEEP_HEADER}")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            sig15(row.value),
            sig15(row.p_left),
            sig15(row.mean),
            sig15(row.p_k_positive_limit),
            sig15(row.long_time_mean)
        )?;
    }
    w.flush()
}
