//! Simulation of ensemble NMR quantum computation from two statistical
//! viewpoints.
//!
//! Each molecule of the sample is an `N`-spin register that starts in one of
//! its energy eigenstates `|k>`, with `C_k` molecules per level. The readout
//! of an additive observable can be computed either by evolving every
//! eigenstate as a pure state and summing the weighted expectations, or by
//! evolving the population-averaged density matrix. The two agree to
//! rounding, yet they describe very different objects: the evolved pure
//! states can be maximally entangled while the averaged density matrix sits
//! next to the maximally mixed state and passes the PPT test.
//!
//! Modules:
//! - [`qlinalg`]: dense complex matrices, states, partial trace/transpose
//! - [`spin_system`]: Zeeman levels, Boltzmann populations, spin observables
//! - [`circuit`]: gate-sequence parser and propagator composition
//! - [`engine`]: the sum and trace readout pathways
//! - [`entanglement`]: Schmidt/entropy analysis and PPT/mixedness reports
//! - [`cli`]: configuration, runs and JSON reports

pub mod circuit;
pub mod cli;
pub mod engine;
pub mod entanglement;
mod error;
pub mod qlinalg;
pub mod spin_system;

pub use error::{Error, Result};
