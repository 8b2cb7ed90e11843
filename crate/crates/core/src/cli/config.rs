use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::qlinalg::{BipartitionSpec, ComplexMatrix};
use crate::spin_system::{collective_observable, spin_observable, Axis, SpinSystem, ThermalEnsemble};
use crate::{Error, Result};

/// Which operator is read out: the molecule's total spin component along
/// an axis, or a single spin's component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableSpec {
    Collective(Axis),
    Spin { spin: usize, axis: Axis },
}

impl ObservableSpec {
    pub fn operator(&self, n_spins: usize) -> Result<ComplexMatrix> {
        match *self {
            ObservableSpec::Collective(axis) => collective_observable(n_spins, axis),
            ObservableSpec::Spin { spin, axis } => spin_observable(n_spins, spin, axis),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ObservableSpec::Collective(axis) => format!("collective {axis}"),
            ObservableSpec::Spin { spin, axis } => format!("spin {spin} {axis}"),
        }
    }
}

/// `"x"` for the collective component, `"x:2"` for spin 2 only.
impl FromStr for ObservableSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None => Ok(ObservableSpec::Collective(s.parse()?)),
            Some((axis, spin)) => {
                let spin = spin
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad spin in observable {s:?}")))?;
                Ok(ObservableSpec::Spin {
                    spin,
                    axis: axis.parse()?,
                })
            }
        }
    }
}

impl fmt::Display for ObservableSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObservableSpec::Collective(axis) => write!(f, "{axis}"),
            ObservableSpec::Spin { spin, axis } => write!(f, "{axis}:{spin}"),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    n_spins: usize,
    larmor: Vec<f64>,
    temperature: f64,
    molecule_count: f64,
    circuit_path: Option<PathBuf>,
    #[serde(default = "default_observable")]
    observable: String,
    bipartition: Option<String>,
    ball_radius: Option<f64>,
    seed: Option<u64>,
    output_path: Option<PathBuf>,
}

fn default_observable() -> String {
    "x".to_string()
}

/// A validated run configuration.
///
/// Relative paths are kept as written (they are echoed into reports) and
/// resolved against the directory of the config file when used.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n_spins: usize,
    pub larmor: Vec<f64>,
    pub temperature: f64,
    pub molecule_count: f64,
    pub circuit_path: Option<PathBuf>,
    pub observable: ObservableSpec,
    /// `None` only for single-spin molecules, which have no cut.
    pub bipartition: Option<BipartitionSpec>,
    pub ball_radius: Option<f64>,
    pub seed: Option<u64>,
    pub output_path: Option<PathBuf>,
    pub base_dir: PathBuf,
}

impl RunConfig {
    /// Reads and validates a config file; a configured circuit file must
    /// exist.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let config = Self::from_toml(&text, base_dir)?;
        if let Some(circuit) = config.resolved_circuit_path() {
            if !circuit.is_file() {
                return Err(Error::Config(format!(
                    "circuit file {} does not exist",
                    circuit.display()
                )));
            }
        }
        Ok(config)
    }

    /// Parses config text without touching the filesystem.
    pub fn from_toml(text: &str, base_dir: PathBuf) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        let n = file.n_spins;
        // validates N, the Larmor list, and produces finite energies
        let system = SpinSystem::zeeman(&file.larmor).map_err(config_err)?;
        if system.n_spins() != n {
            return Err(Error::Config(format!(
                "n_spins = {n} but {} Larmor frequencies given",
                file.larmor.len()
            )));
        }
        ThermalEnsemble::boltzmann(system, file.temperature, file.molecule_count).map_err(config_err)?;
        let observable: ObservableSpec = file.observable.parse().map_err(config_err)?;
        observable.operator(n).map_err(config_err)?;
        let bipartition = match (&file.bipartition, n) {
            (Some(text), _) => Some(BipartitionSpec::parse(text, n).map_err(config_err)?),
            (None, 1) => None,
            (None, _) => Some(BipartitionSpec::from_left(n, vec![1]).map_err(config_err)?),
        };
        if let Some(r) = file.ball_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Config(format!("ball_radius must be positive, got {r}")));
            }
        }
        Ok(Self {
            n_spins: n,
            larmor: file.larmor,
            temperature: file.temperature,
            molecule_count: file.molecule_count,
            circuit_path: file.circuit_path,
            observable,
            bipartition,
            ball_radius: file.ball_radius,
            seed: file.seed,
            output_path: file.output_path,
            base_dir,
        })
    }

    pub fn resolved_circuit_path(&self) -> Option<PathBuf> {
        self.circuit_path.as_ref().map(|p| self.base_dir.join(p))
    }

    pub fn resolved_output_path(&self) -> Option<PathBuf> {
        self.output_path.as_ref().map(|p| self.base_dir.join(p))
    }

    pub fn ensemble(&self) -> Result<ThermalEnsemble> {
        ThermalEnsemble::boltzmann(SpinSystem::zeeman(&self.larmor)?, self.temperature, self.molecule_count)
    }
}

fn config_err(e: Error) -> Error {
    Error::Config(e.to_string())
}
