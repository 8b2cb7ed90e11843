use super::{hermitian_eigenvalues, spins_for_dim, tol, ComplexMatrix, StateVector};
use crate::{Error, Result};

/// Hermitian, unit-trace, positive-semidefinite operator on an N-spin
/// register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        spins_for_dim(matrix.dim())?;
        matrix.validate_hermitian()?;
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tol::VALIDATION || trace.im.abs() > tol::VALIDATION {
            return Err(Error::NotDensityMatrix(format!("trace is {trace}")));
        }
        let min = hermitian_eigenvalues(&matrix)?[0];
        if min < -tol::VALIDATION {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// `I/K`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        spins_for_dim(dim)?;
        Ok(Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        Self {
            matrix: state.projector(),
        }
    }

    /// `diag(p)` for a probability vector.
    pub fn from_probabilities(probabilities: &[f64]) -> Result<Self> {
        spins_for_dim(probabilities.len())?;
        if let Some(p) = probabilities.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::NotDensityMatrix(format!("invalid weight {p}")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > tol::VALIDATION {
            return Err(Error::NotDensityMatrix(format!("weights sum to {total}")));
        }
        Ok(Self {
            matrix: ComplexMatrix::from_real_diagonal(probabilities),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn n_spins(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        self.matrix
            .trace_product(&self.matrix)
            .expect("same matrix")
            .re
    }

    /// `U rho U^dagger`. The unitary is validated first.
    pub fn evolve(&self, unitary: &ComplexMatrix) -> Result<Self> {
        unitary.validate_unitary()?;
        let evolved = unitary.conjugate(&self.matrix)?;
        Ok(Self { matrix: evolved })
    }
}
