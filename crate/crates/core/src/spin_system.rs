//! The N-spin molecule, its energy levels, and the thermal ensemble of `M`
//! identical molecules.
//!
//! Units: `k_B = hbar = 1`, so energies and temperature share one unit and
//! only the ratio `E/T` matters. The energy eigenbasis is the computational
//! basis, i.e. the molecular Hamiltonian is taken to be diagonal.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::qlinalg::{bit_of, ComplexMatrix, DensityMatrix, MAX_SPINS};
use crate::{Error, Result};

/// Relative tolerance on `sum_k C_k = M`.
const POPULATION_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(Error::InvalidAxis(other.to_string())),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Pauli matrix for `axis`.
pub fn pauli(axis: Axis) -> ComplexMatrix {
    let (o, z, i) = (Complex64::ONE, Complex64::ZERO, Complex64::I);
    let rows = match axis {
        Axis::X => [[z, o], [o, z]],
        Axis::Y => [[z, -i], [i, z]],
        Axis::Z => [[o, z], [z, -o]],
    };
    ComplexMatrix::from_rows(&rows.map(Vec::from)).expect("2x2 table")
}

fn check_spins(n_spins: usize) -> Result<()> {
    if n_spins == 0 || n_spins > MAX_SPINS {
        return Err(Error::InvalidParameter(format!(
            "number of spins must be in 1..={MAX_SPINS}, got {n_spins}"
        )));
    }
    Ok(())
}

/// Zeeman level energies `E_k = sum_j s_j(k) w_j / 2` with `s_j(k) = +1`
/// when spin `j` is up (bit set) in basis state `k`, `-1` otherwise.
pub fn default_energies(n_spins: usize, larmor: &[f64]) -> Result<Vec<f64>> {
    check_spins(n_spins)?;
    if larmor.len() != n_spins {
        return Err(Error::InvalidParameter(format!(
            "expected {n_spins} Larmor frequencies, got {}",
            larmor.len()
        )));
    }
    if let Some(w) = larmor.iter().find(|w| !w.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite Larmor frequency {w}")));
    }
    Ok((0..1usize << n_spins)
        .map(|k| {
            larmor
                .iter()
                .enumerate()
                .map(|(j, w)| {
                    let up = k >> bit_of(j + 1, n_spins) & 1 == 1;
                    if up {
                        w / 2.0
                    } else {
                        -w / 2.0
                    }
                })
                .sum()
        })
        .collect())
}

/// Boltzmann level counts `C_k = M exp(-E_k/T) / Z`.
///
/// Energies are shifted by their minimum before exponentiation, so the
/// largest weight is exactly 1 and nothing overflows.
pub fn boltzmann_populations(energies: &[f64], temperature: f64, molecule_count: f64) -> Result<Vec<f64>> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidTemperature(temperature));
    }
    if !(molecule_count > 0.0 && molecule_count.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "molecule count must be positive and finite, got {molecule_count}"
        )));
    }
    if energies.is_empty() || energies.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidParameter("energies must be finite and non-empty".into()));
    }
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = energies
        .iter()
        .map(|e| (-(e - e_min) / temperature).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    Ok(weights.iter().map(|w| molecule_count * w / z).collect())
}

/// Total spin component `sum_j sigma^axis_j / 2` of an `n_spins` molecule.
pub fn collective_observable(n_spins: usize, axis: Axis) -> Result<ComplexMatrix> {
    check_spins(n_spins)?;
    let dim = 1usize << n_spins;
    let mut total = ComplexMatrix::zeros(dim);
    for spin in 1..=n_spins {
        total = &total + &spin_observable(n_spins, spin, axis)?;
    }
    Ok(total)
}

/// Single-spin component `sigma^axis / 2` acting on 1-based `spin`.
pub fn spin_observable(n_spins: usize, spin: usize, axis: Axis) -> Result<ComplexMatrix> {
    check_spins(n_spins)?;
    if spin == 0 || spin > n_spins {
        return Err(Error::IndexOutOfRange {
            index: spin,
            len: n_spins,
        });
    }
    let dim = 1usize << n_spins;
    let mask = 1usize << bit_of(spin, n_spins);
    let mut op = ComplexMatrix::zeros(dim);
    for col in 0..dim {
        let up = col & mask != 0;
        match axis {
            Axis::X => op.set(col ^ mask, col, Complex64::new(0.5, 0.0)),
            // sigma_y |0> = i|1>, sigma_y |1> = -i|0>
            Axis::Y => op.set(col ^ mask, col, Complex64::new(0.0, if up { -0.5 } else { 0.5 })),
            Axis::Z => op.set(col, col, Complex64::new(if up { -0.5 } else { 0.5 }, 0.0)),
        }
    }
    Ok(op)
}

/// One molecule: `N` spins and the `2^N` energies of its eigenstates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinSystem {
    n_spins: usize,
    level_energies: Vec<f64>,
}

impl SpinSystem {
    pub fn new(n_spins: usize, level_energies: Vec<f64>) -> Result<Self> {
        check_spins(n_spins)?;
        if level_energies.len() != 1 << n_spins {
            return Err(Error::InvalidParameter(format!(
                "{n_spins} spins need {} level energies, got {}",
                1usize << n_spins,
                level_energies.len()
            )));
        }
        if level_energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidParameter("level energies must be finite".into()));
        }
        Ok(Self {
            n_spins,
            level_energies,
        })
    }

    /// Molecule with uncoupled Zeeman levels, see [`default_energies`].
    pub fn zeeman(larmor: &[f64]) -> Result<Self> {
        let n = larmor.len();
        Self::new(n, default_energies(n, larmor)?)
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.level_energies.len()
    }

    pub fn level_energies(&self) -> &[f64] {
        &self.level_energies
    }

    /// `max_k E_k - min_k E_k`.
    pub fn spectral_width(&self) -> f64 {
        let (lo, hi) = self
            .level_energies
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)));
        hi - lo
    }

    /// Largest gap between neighbouring levels once sorted by energy.
    pub fn max_adjacent_gap(&self) -> f64 {
        let mut sorted = self.level_energies.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Diagonal Hamiltonian in the eigenbasis.
    pub fn hamiltonian(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.level_energies)
    }
}

/// `M` molecules distributed over the levels of one [`SpinSystem`].
///
/// `M` is real: Boltzmann counts are not integers and are never rounded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalEnsemble {
    system: SpinSystem,
    temperature: f64,
    molecule_count: f64,
    populations: Vec<f64>,
}

impl ThermalEnsemble {
    pub fn boltzmann(system: SpinSystem, temperature: f64, molecule_count: f64) -> Result<Self> {
        let populations = boltzmann_populations(system.level_energies(), temperature, molecule_count)?;
        Self::with_counts(system, temperature, molecule_count, populations)
    }

    /// Ensemble with explicit level counts; `M` is their sum.
    pub fn from_populations(system: SpinSystem, temperature: f64, populations: Vec<f64>) -> Result<Self> {
        let m = populations.iter().sum();
        Self::with_counts(system, temperature, m, populations)
    }

    /// Ensemble assembled from `(level, count)` pairs in any order. Every
    /// level must appear exactly once.
    pub fn from_level_counts<I>(system: SpinSystem, temperature: f64, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let dim = system.dim();
        let mut slots: Vec<Option<f64>> = vec![None; dim];
        for (k, c) in counts {
            let slot = slots
                .get_mut(k)
                .ok_or(Error::IndexOutOfRange { index: k, len: dim })?;
            if slot.replace(c).is_some() {
                return Err(Error::InvalidParameter(format!("level {k} given twice")));
            }
        }
        let populations = slots
            .into_iter()
            .enumerate()
            .map(|(k, c)| c.ok_or_else(|| Error::InvalidParameter(format!("level {k} missing"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_populations(system, temperature, populations)
    }

    fn with_counts(system: SpinSystem, temperature: f64, molecule_count: f64, populations: Vec<f64>) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::InvalidTemperature(temperature));
        }
        if !(molecule_count > 0.0 && molecule_count.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "molecule count must be positive and finite, got {molecule_count}"
            )));
        }
        if populations.len() != system.dim() {
            return Err(Error::InvalidParameter(format!(
                "expected {} populations, got {}",
                system.dim(),
                populations.len()
            )));
        }
        if let Some(c) = populations.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
            return Err(Error::InvalidParameter(format!("invalid level count {c}")));
        }
        let total: f64 = populations.iter().sum();
        if (total - molecule_count).abs() > POPULATION_SUM_TOL * molecule_count {
            return Err(Error::InvalidParameter(format!(
                "level counts sum to {total}, expected {molecule_count}"
            )));
        }
        Ok(Self {
            system,
            temperature,
            molecule_count,
            populations,
        })
    }

    pub fn system(&self) -> &SpinSystem {
        &self.system
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn molecule_count(&self) -> f64 {
        self.molecule_count
    }

    /// Level counts `C_k`.
    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    /// `P_k = C_k / M`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.populations
            .iter()
            .map(|c| c / self.molecule_count)
            .collect()
    }

    /// Same distribution, `M` scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let populations = self.populations.iter().map(|c| c * factor).collect();
        Self::with_counts(
            self.system.clone(),
            self.temperature,
            self.molecule_count * factor,
            populations,
        )
    }
}

/// `rho = sum_k (C_k/M) |k><k|`, the ensemble-averaged single-molecule
/// operator. Diagonal in the eigenbasis.
pub fn equilibrium_density_matrix(ensemble: &ThermalEnsemble) -> DensityMatrix {
    DensityMatrix::from_probabilities(&ensemble.probabilities())
        .expect("ensemble invariants guarantee a probability vector")
}

/// How far the ensemble sits from equal level occupation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonReport {
    /// Full spectral width `max E - min E`.
    pub delta_e: f64,
    /// `delta_e / T`.
    pub epsilon: f64,
    /// `max P_k - min P_k`.
    pub max_population_spread: f64,
}

pub fn epsilon_report(ensemble: &ThermalEnsemble) -> EpsilonReport {
    let delta_e = ensemble.system.spectral_width();
    let p = ensemble.probabilities();
    let (lo, hi) = p
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    EpsilonReport {
        delta_e,
        epsilon: delta_e / ensemble.temperature,
        max_population_spread: hi - lo,
    }
}
