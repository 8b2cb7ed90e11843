//! The two routes to the sample-level readout `<J>` of an ensemble of `M`
//! identical molecules.
//!
//! * Sum route: evolve every eigenstate `|k>` on its own, take the pure-state
//!   expectation `<k| U^dagger O U |k>`, and weight it by the number of
//!   molecules `C_k` that started in level `k`.
//! * Trace route: build the averaged operator `rho = sum_k (C_k/M) |k><k|`,
//!   evolve it as `U rho U^dagger` and take `M Tr(U rho U^dagger O)`.
//!
//! The `M`-fold product state of the whole sample is never built. Because
//! the molecules are identical and non-interacting, the sample expectation
//! of an additive observable is exactly the sum route above, so nothing is
//! approximated. No molecule index exists anywhere in this module: the
//! per-state values depend on the initial level `k` alone.
//!
//! The two routes share nothing but the propagator, so their agreement is a
//! real cross-check.

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{compose_propagator, Circuit};
use crate::qlinalg::{tol, ComplexMatrix, StateVector};
use crate::spin_system::{equilibrium_density_matrix, ThermalEnsemble};
use crate::{Error, Result};

/// Allowed `|sum - trace|` per molecule.
pub const PATHWAY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathwayResult {
    pub expectation_sum: f64,
    pub expectation_trace: f64,
    pub abs_difference: f64,
    /// `<k| U^dagger O U |k>` for every initial level `k`.
    pub per_state_values: Vec<f64>,
}

impl PathwayResult {
    /// `abs_difference <= 1e-10 * M`.
    pub fn agrees(&self, molecule_count: f64) -> bool {
        self.abs_difference <= PATHWAY_TOLERANCE * molecule_count
    }
}

/// `U|k>`, i.e. column `k` of the propagator.
pub fn evolve_eigenstate(propagator: &ComplexMatrix, k: usize) -> Result<StateVector> {
    if k >= propagator.dim() {
        return Err(Error::IndexOutOfRange {
            index: k,
            len: propagator.dim(),
        });
    }
    StateVector::new(propagator.column(k))
}

/// `<k| U^dagger O U |k>`.
pub fn expectation_per_initial_state(propagator: &ComplexMatrix, k: usize, observable: &ComplexMatrix) -> Result<f64> {
    observable.validate_hermitian()?;
    check_dims(propagator, observable)?;
    state_expectation(propagator, k, observable)
}

fn state_expectation(propagator: &ComplexMatrix, k: usize, observable: &ComplexMatrix) -> Result<f64> {
    let value = evolve_eigenstate(propagator, k)?.expectation(observable)?;
    real_part(value)
}

fn real_part(value: num_complex::Complex64) -> Result<f64> {
    if value.im.abs() > tol::VALIDATION {
        return Err(Error::ComplexExpectation { imag: value.im });
    }
    Ok(value.re)
}

fn check_dims(propagator: &ComplexMatrix, observable: &ComplexMatrix) -> Result<()> {
    if propagator.dim() != observable.dim() {
        return Err(Error::DimensionMismatch {
            left: propagator.dim(),
            right: observable.dim(),
        });
    }
    Ok(())
}

fn check_ensemble(propagator: &ComplexMatrix, ensemble: &ThermalEnsemble) -> Result<()> {
    if propagator.dim() != ensemble.system().dim() {
        return Err(Error::DimensionMismatch {
            left: propagator.dim(),
            right: ensemble.system().dim(),
        });
    }
    Ok(())
}

/// Per-level expectations for all `K` eigenstates, in level order. The
/// levels are evaluated in parallel.
pub fn per_state_values(propagator: &ComplexMatrix, observable: &ComplexMatrix) -> Result<Vec<f64>> {
    propagator.validate_unitary()?;
    observable.validate_hermitian()?;
    check_dims(propagator, observable)?;
    (0..propagator.dim())
        .into_par_iter()
        .map(|k| state_expectation(propagator, k, observable))
        .collect()
}

/// Weighted sum `sum_k C_k <k| U^dagger O U |k>`, accumulated in ascending
/// `k` so the result does not depend on thread scheduling.
pub fn ensemble_expectation_sum(propagator: &ComplexMatrix, ensemble: &ThermalEnsemble, observable: &ComplexMatrix) -> Result<f64> {
    Ok(sum_route(propagator, ensemble, observable)?.0)
}

fn sum_route(propagator: &ComplexMatrix, ensemble: &ThermalEnsemble, observable: &ComplexMatrix) -> Result<(f64, Vec<f64>)> {
    check_ensemble(propagator, ensemble)?;
    let values = per_state_values(propagator, observable)?;
    let total = ensemble
        .populations()
        .iter()
        .zip(&values)
        .fold(0.0, |acc, (c, v)| acc + c * v);
    Ok((total, values))
}

/// `M Tr(U rho U^dagger O)` with `rho` the ensemble-averaged operator.
pub fn ensemble_expectation_trace(propagator: &ComplexMatrix, ensemble: &ThermalEnsemble, observable: &ComplexMatrix) -> Result<f64> {
    observable.validate_hermitian()?;
    check_dims(propagator, observable)?;
    check_ensemble(propagator, ensemble)?;
    let rho = equilibrium_density_matrix(ensemble).evolve(propagator)?;
    let value = rho.matrix().trace_product(observable)?;
    Ok(ensemble.molecule_count() * real_part(value)?)
}

/// Runs both routes for an already composed propagator.
pub fn compare_with_propagator(propagator: &ComplexMatrix, ensemble: &ThermalEnsemble, observable: &ComplexMatrix) -> Result<PathwayResult> {
    let (expectation_sum, per_state_values) = sum_route(propagator, ensemble, observable)?;
    let expectation_trace = ensemble_expectation_trace(propagator, ensemble, observable)?;
    Ok(PathwayResult {
        expectation_sum,
        expectation_trace,
        abs_difference: (expectation_sum - expectation_trace).abs(),
        per_state_values,
    })
}

pub fn compare_pathways(circuit: &Circuit, ensemble: &ThermalEnsemble, observable: &ComplexMatrix) -> Result<PathwayResult> {
    if circuit.n_spins() != ensemble.system().n_spins() {
        return Err(Error::DimensionMismatch {
            left: circuit.n_spins(),
            right: ensemble.system().n_spins(),
        });
    }
    compare_with_propagator(&compose_propagator(circuit)?, ensemble, observable)
}
