//! Dense complex linear algebra over spin-1/2 registers.
//!
//! Basis indices follow the big-endian convention: spin 1 is the most
//! significant bit, so `|s_1 s_2 ... s_N>` has index `sum_j s_j 2^(N-j)`.
//! This matches the left-to-right order of `A (x) B (x) ...`.

mod bipartition;
mod density;
mod matrix;
mod state;

pub use bipartition::{partial_trace, partial_transpose, BipartitionSpec, Side};
pub use density::DensityMatrix;
pub use matrix::{frobenius_distance, hermitian_eigenvalues, tensor_product, ComplexMatrix};
pub use state::StateVector;

pub use num_complex::Complex64;

/// Largest supported number of spins per molecule.
pub const MAX_SPINS: usize = 12;
/// Largest supported Hilbert-space dimension, `2^MAX_SPINS`.
pub const MAX_DIM: usize = 1 << MAX_SPINS;

/// Numerical tolerances shared by every module.
pub mod tol {
    /// Normalization, trace and unitarity validation.
    pub const VALIDATION: f64 = 1e-10;
    /// Hermiticity validation and exact-equality assertions.
    pub const EQUALITY: f64 = 1e-12;
    /// Spectral residuals (eigenvalue sums, characteristic polynomial).
    pub const SPECTRAL: f64 = 1e-9;
    /// Schmidt coefficients at or below this count as zero.
    pub const SCHMIDT_CUTOFF: f64 = 1e-8;
}

/// Returns `N` such that `dim == 2^N`, or an error if `dim` is not a
/// supported register dimension.
pub fn spins_for_dim(dim: usize) -> crate::Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(crate::Error::InvalidDimension {
            dim,
            reason: "expected 2^N with N >= 1",
        });
    }
    if dim > MAX_DIM {
        return Err(crate::Error::InvalidDimension {
            dim,
            reason: "exceeds 2^12",
        });
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Bit position (from the least significant end) of 1-based `spin` in an
/// `n_spins` register.
#[inline]
pub(crate) fn bit_of(spin: usize, n_spins: usize) -> usize {
    n_spins - spin
}
