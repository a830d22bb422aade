//! Config files: flat `key = value` lines grouped under `[section]`
//! headers. `#` starts a comment. The full schema is documented in the
//! repository README; parse errors carry the offending line and field.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use excichain::analytics::normalize_theta;
use excichain::couplings::{read_profile, CouplingModel};
use excichain::dynamics::PropagationConfig;
use excichain::model::{Boundary, ChainSpec, InitialCondition};

/// A configuration problem, with the line / field it came from when known.
#[derive(Debug)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn at_line(line: usize, message: impl Into<String>) -> Self {
        ConfigError { line: Some(line), field: None, message: message.into() }
    }

    fn at_field(line: Option<usize>, field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { line, field: Some(field.into()), message: message.into() }
    }

    pub fn general(message: impl Into<String>) -> Self {
        ConfigError { line: None, field: None, message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error")?;
        if let Some(line) = self.line {
            write!(f, " (line {line})")?;
        }
        if let Some(field) = &self.field {
            write!(f, " [{field}]")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

impl From<excichain::ChainError> for ConfigError {
    fn from(err: excichain::ChainError) -> Self {
        ConfigError::general(err.to_string())
    }
}

/// Raw `section.key -> (line, value)` map with consumption tracking, so
/// unknown keys can be reported with their line numbers.
struct RawConfig {
    entries: BTreeMap<String, (usize, String)>,
    consumed: BTreeSet<String>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::at_line(line_no, "unterminated section header"))?
                    .trim();
                if name.is_empty() {
                    return Err(ConfigError::at_line(line_no, "empty section name"));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError::at_line(line_no, "expected `key = value` or `[section]`")
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(ConfigError::at_line(line_no, "empty key"));
            }
            if section.is_empty() {
                return Err(ConfigError::at_line(
                    line_no,
                    format!("key `{key}` appears before any [section] header"),
                ));
            }
            let full = format!("{section}.{key}");
            if entries.insert(full.clone(), (line_no, value.trim().to_string())).is_some() {
                return Err(ConfigError::at_line(line_no, format!("duplicate key `{full}`")));
            }
        }
        Ok(RawConfig { entries, consumed: BTreeSet::new() })
    }

    fn take(&mut self, section: &str, key: &str) -> Option<(usize, String)> {
        let full = format!("{section}.{key}");
        self.consumed.insert(full.clone());
        self.entries.get(&full).cloned()
    }

    fn take_f64(&mut self, section: &str, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.take(section, key) {
            None => Ok(None),
            Some((line, value)) => value.parse().map(Some).map_err(|_| {
                ConfigError::at_field(
                    Some(line),
                    format!("{section}.{key}"),
                    format!("cannot parse `{value}` as a number"),
                )
            }),
        }
    }

    fn take_usize(&mut self, section: &str, key: &str) -> Result<Option<usize>, ConfigError> {
        match self.take(section, key) {
            None => Ok(None),
            Some((line, value)) => value.parse().map(Some).map_err(|_| {
                ConfigError::at_field(
                    Some(line),
                    format!("{section}.{key}"),
                    format!("cannot parse `{value}` as a nonnegative integer"),
                )
            }),
        }
    }

    fn take_string(&mut self, section: &str, key: &str) -> Option<(usize, String)> {
        self.take(section, key)
    }

    fn require_f64(&mut self, section: &str, key: &str) -> Result<f64, ConfigError> {
        self.take_f64(section, key)?.ok_or_else(|| {
            ConfigError::at_field(None, format!("{section}.{key}"), "required key is missing")
        })
    }

    fn require_usize(&mut self, section: &str, key: &str) -> Result<usize, ConfigError> {
        self.take_usize(section, key)?.ok_or_else(|| {
            ConfigError::at_field(None, format!("{section}.{key}"), "required key is missing")
        })
    }

    fn reject_unknown(&self) -> Result<(), ConfigError> {
        for (full, (line, _)) in &self.entries {
            if !self.consumed.contains(full) {
                return Err(ConfigError::at_field(Some(*line), full.clone(), "unknown key"));
            }
        }
        Ok(())
    }
}

/// Everything a single `run` needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub chain: ChainSpec,
    pub initial: InitialCondition,
    pub propagation: PropagationConfig,
    pub trajectory_csv: PathBuf,
    pub summary_csv: PathBuf,
}

/// Which knob a sweep turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Theta,
    Gamma,
}

/// A grid of values over one parameter, on top of a base run.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub base: RunConfig,
    pub sweep_csv: PathBuf,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ConfigError::general(format!("cannot read {}: {e}", path.display()))
        })?;
        let mut raw = RawConfig::parse(&text)?;
        let config = RunConfig::from_raw(&mut raw, path.parent())?;
        raw.reject_unknown()?;
        Ok(config)
    }

    #[cfg(test)]
    pub fn from_str_for_tests(text: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::parse(text)?;
        let config = RunConfig::from_raw(&mut raw, None)?;
        raw.reject_unknown()?;
        Ok(config)
    }

    fn from_raw(raw: &mut RawConfig, base_dir: Option<&Path>) -> Result<Self, ConfigError> {
        let chain = parse_chain(raw, base_dir)?;
        let initial = parse_initial(raw, &chain)?;
        let propagation = parse_propagation(raw)?;

        let path_or = |entry: Option<(usize, String)>, default: &str| -> PathBuf {
            entry.map(|(_, v)| PathBuf::from(v)).unwrap_or_else(|| PathBuf::from(default))
        };
        let trajectory_csv = path_or(raw.take_string("output", "trajectory_csv"), "trajectory.csv");
        let summary_csv = path_or(raw.take_string("output", "summary_csv"), "summary.csv");

        Ok(RunConfig { chain, initial, propagation, trajectory_csv, summary_csv })
    }

    /// The coupling scale entering closed-form predictions, if one exists.
    pub fn nominal_strength(&self) -> Option<f64> {
        self.chain.coupling().nominal_strength()
    }

    /// Same run with another initial phase.
    pub fn with_theta(&self, theta: f64) -> Result<Self, ConfigError> {
        let initial = InitialCondition::new(
            self.initial.left_site(),
            self.initial.rho_left(),
            self.initial.rho_right(),
            self.initial.coherence(),
            theta,
        )?;
        Ok(RunConfig { initial, ..self.clone() })
    }

    /// Same run with another dephasing rate.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self, ConfigError> {
        let chain = ChainSpec::new(
            self.chain.n_sites(),
            self.chain.epsilon(),
            self.chain.coupling().clone(),
            self.chain.boundary(),
            gamma,
        )?;
        Ok(RunConfig { chain, ..self.clone() })
    }
}

impl SweepConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ConfigError::general(format!("cannot read {}: {e}", path.display()))
        })?;
        let mut raw = RawConfig::parse(&text)?;
        let base = RunConfig::from_raw(&mut raw, path.parent())?;
        let sweep = SweepConfig::from_raw(&mut raw, base)?;
        raw.reject_unknown()?;
        Ok(sweep)
    }

    fn from_raw(raw: &mut RawConfig, base: RunConfig) -> Result<Self, ConfigError> {
        let (line, parameter) = raw.take_string("sweep", "parameter").ok_or_else(|| {
            ConfigError::at_field(None, "sweep.parameter", "required key is missing")
        })?;
        let parameter = match parameter.as_str() {
            "theta" => SweepParameter::Theta,
            "gamma" => SweepParameter::Gamma,
            other => {
                return Err(ConfigError::at_field(
                    Some(line),
                    "sweep.parameter",
                    format!("expected `theta` or `gamma`, got `{other}`"),
                ))
            }
        };

        let explicit = raw.take_string("sweep", "values");
        let values = if let Some((line, list)) = explicit {
            for key in ["start", "stop", "count"] {
                if raw.take(&"sweep".to_string(), key).is_some() {
                    return Err(ConfigError::at_field(
                        Some(line),
                        format!("sweep.{key}"),
                        "give either `values` or `start`/`stop`/`count`, not both",
                    ));
                }
            }
            list.split(',')
                .map(|item| {
                    item.trim().parse::<f64>().map_err(|_| {
                        ConfigError::at_field(
                            Some(line),
                            "sweep.values",
                            format!("cannot parse `{}` as a number", item.trim()),
                        )
                    })
                })
                .collect::<Result<Vec<f64>, _>>()?
        } else {
            let start = raw.require_f64("sweep", "start")?;
            let stop = raw.require_f64("sweep", "stop")?;
            let count = raw.require_usize("sweep", "count")?;
            linear_grid(start, stop, count)?
        };
        if values.is_empty() {
            return Err(ConfigError::at_field(None, "sweep.values", "needs at least one value"));
        }
        let values = match parameter {
            SweepParameter::Theta => values.into_iter().map(normalize_theta).collect(),
            SweepParameter::Gamma => values,
        };
        let sweep_csv = raw
            .take_string("sweep", "sweep_csv")
            .map(|(_, v)| PathBuf::from(v))
            .unwrap_or_else(|| PathBuf::from("sweep.csv"));
        Ok(SweepConfig { parameter, values, base, sweep_csv })
    }

    /// The run for one grid point.
    pub fn point(&self, value: f64) -> Result<RunConfig, ConfigError> {
        match self.parameter {
            SweepParameter::Theta => self.base.with_theta(value),
            SweepParameter::Gamma => self.base.with_gamma(value),
        }
    }
}

pub fn linear_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>, ConfigError> {
    if count < 1 {
        return Err(ConfigError::at_field(None, "sweep.count", "must be at least 1"));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

fn parse_chain(raw: &mut RawConfig, base_dir: Option<&Path>) -> Result<ChainSpec, ConfigError> {
    let n_sites = raw.require_usize("chain", "n_sites")?;
    let epsilon = raw.take_f64("chain", "epsilon")?.unwrap_or(0.0);
    let gamma = raw.take_f64("chain", "gamma")?.unwrap_or(0.0);

    let boundary = match raw.take_string("chain", "boundary") {
        None => Boundary::Open,
        Some((line, value)) => match value.as_str() {
            "open" => Boundary::Open,
            "periodic" => Boundary::Periodic,
            other => {
                return Err(ConfigError::at_field(
                    Some(line),
                    "chain.boundary",
                    format!("expected `open` or `periodic`, got `{other}`"),
                ))
            }
        },
    };

    let (coupling_line, kind) = raw.take_string("chain", "coupling").ok_or_else(|| {
        ConfigError::at_field(None, "chain.coupling", "required key is missing")
    })?;
    let coupling = match kind.as_str() {
        "power_law" => CouplingModel::PowerLaw {
            strength: raw.take_f64("chain", "strength")?.unwrap_or(1.0),
            exponent: raw.take_f64("chain", "exponent")?.unwrap_or(3.0),
        },
        "nearest_neighbor" => CouplingModel::NearestNeighbor {
            strength: raw.take_f64("chain", "strength")?.unwrap_or(1.0),
        },
        "custom" => {
            let (line, file) = raw.take_string("chain", "profile_file").ok_or_else(|| {
                ConfigError::at_field(
                    None,
                    "chain.profile_file",
                    "custom coupling needs a profile file (one bond strength per line)",
                )
            })?;
            let mut path = PathBuf::from(&file);
            if path.is_relative() {
                if let Some(dir) = base_dir {
                    path = dir.join(path);
                }
            }
            let bonds = read_profile(&path).map_err(|e| {
                ConfigError::at_field(Some(line), "chain.profile_file", e.to_string())
            })?;
            CouplingModel::Custom(bonds)
        }
        other => {
            return Err(ConfigError::at_field(
                Some(coupling_line),
                "chain.coupling",
                format!("expected `power_law`, `nearest_neighbor`, or `custom`, got `{other}`"),
            ))
        }
    };

    ChainSpec::new(n_sites, epsilon, coupling, boundary, gamma).map_err(Into::into)
}

fn parse_initial(raw: &mut RawConfig, chain: &ChainSpec) -> Result<InitialCondition, ConfigError> {
    let left_site =
        raw.take_usize("initial", "left_site")?.unwrap_or_else(|| chain.default_left_site());
    let rho_left = raw.take_f64("initial", "rho_left")?.unwrap_or(0.5);
    let rho_right = raw.take_f64("initial", "rho_right")?.unwrap_or(0.5);
    let coherence = raw.take_f64("initial", "coherence")?.unwrap_or(0.5);
    let theta = raw.take_f64("initial", "theta")?.unwrap_or(0.0);
    InitialCondition::new(left_site, rho_left, rho_right, coherence, theta).map_err(Into::into)
}

fn parse_propagation(raw: &mut RawConfig) -> Result<PropagationConfig, ConfigError> {
    let t_max = raw.require_f64("propagation", "t_max")?;
    let dt = raw.take_f64("propagation", "dt")?.unwrap_or(0.01);
    let stride = raw.take_usize("propagation", "output_stride")?.unwrap_or(10);
    PropagationConfig::new(t_max, dt, stride).map_err(Into::into)
}
