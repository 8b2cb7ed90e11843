//! Entanglement of individual pure states and separability indicators of
//! mixed states.
//!
//! A pure state is a product across a cut exactly when it has a single
//! Schmidt term; the von Neumann entropy of the Schmidt spectrum (in bits)
//! is reported as a graded measure. For mixed states the partial-transpose
//! (PPT) test is used: it is necessary for separability in general and
//! sufficient when both sides of the cut are single spins.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::qlinalg::{
    frobenius_distance, hermitian_eigenvalues, partial_transpose, tol, BipartitionSpec,
    DensityMatrix, StateVector,
};
use crate::{Error, Result};

/// Smallest partial-transpose eigenvalue still counted as non-negative.
pub const PPT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    #[serde(serialize_with = "serialize_cut")]
    pub bipartition: BipartitionSpec,
    /// Descending.
    pub schmidt_coefficients: Vec<f64>,
    pub entropy_bits: f64,
    /// Number of coefficients above [`tol::SCHMIDT_CUTOFF`].
    pub schmidt_rank: usize,
    pub is_product: bool,
}

fn serialize_cut<S: serde::Serializer>(cut: &BipartitionSpec, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(cut)
}

fn check_state(psi: &StateVector, part: &BipartitionSpec) -> Result<()> {
    part.check_dim(psi.dim())
}

/// Singular values of the `|left| x |right|` amplitude matrix, descending.
pub fn schmidt_coefficients(psi: &StateVector, part: &BipartitionSpec) -> Result<Vec<f64>> {
    check_state(psi, part)?;
    let amps = psi.amplitudes();
    let reshaped: DMatrix<Complex64> = DMatrix::from_fn(part.left_dim(), part.right_dim(), |l, r| amps[part.join(l, r)]);
    let mut values: Vec<f64> = reshaped.singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

fn entropy_of(coefficients: &[f64]) -> f64 {
    coefficients
        .iter()
        .map(|c| c * c)
        .filter(|&p| p > 0.0)
        .fold(0.0, |acc, p| acc - p * p.log2())
        .max(0.0)
}

/// `-sum lambda^2 log2 lambda^2` over the Schmidt coefficients.
pub fn entanglement_entropy(psi: &StateVector, part: &BipartitionSpec) -> Result<f64> {
    Ok(entropy_of(&schmidt_coefficients(psi, part)?))
}

pub fn entanglement_report(psi: &StateVector, part: &BipartitionSpec) -> Result<EntanglementReport> {
    let schmidt_coefficients = schmidt_coefficients(psi, part)?;
    let schmidt_rank = schmidt_coefficients
        .iter()
        .filter(|&&c| c > tol::SCHMIDT_CUTOFF)
        .count();
    Ok(EntanglementReport {
        bipartition: part.clone(),
        entropy_bits: entropy_of(&schmidt_coefficients),
        schmidt_coefficients,
        schmidt_rank,
        is_product: schmidt_rank == 1,
    })
}

/// True when `psi` has Schmidt rank one across every cut of its register.
/// Single-spin states are trivially product.
pub fn is_fully_product(psi: &StateVector) -> Result<bool> {
    let n = psi.n_spins();
    if n < 2 {
        return Ok(true);
    }
    for cut in BipartitionSpec::all_cuts(n)? {
        if !entanglement_report(psi, &cut)?.is_product {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PptReport {
    pub min_pt_eigenvalue: f64,
    /// Sum of the magnitudes of the negative partial-transpose eigenvalues,
    /// which equals `(||rho^T_B||_1 - 1)/2` for unit trace.
    pub negativity: f64,
    pub ppt_holds: bool,
    /// Whether PPT implies separability for this cut (2 x 2 only).
    pub ppt_is_sufficient: bool,
}

pub fn ppt_report(rho: &DensityMatrix, part: &BipartitionSpec) -> Result<PptReport> {
    let pt = partial_transpose(rho.matrix(), part)?;
    let spectrum = hermitian_eigenvalues(&pt)?;
    let min_pt_eigenvalue = spectrum[0];
    let negativity = spectrum.iter().filter(|&&l| l < 0.0).fold(0.0, |acc, l| acc - l);
    Ok(PptReport {
        min_pt_eigenvalue,
        negativity,
        ppt_holds: min_pt_eigenvalue >= -PPT_TOLERANCE,
        ppt_is_sufficient: part.is_two_qubit(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixednessReport {
    /// `||rho - I/K||_F`.
    pub frobenius_to_mixed: f64,
    /// `Tr rho^2`.
    pub purity: f64,
    pub ball_radius_used: Option<f64>,
    /// `frobenius_to_mixed <= radius`, only when a radius was supplied.
    pub within_ball: Option<bool>,
}

/// Distance of `rho` from the maximally mixed state. No default radius is
/// assumed; `within_ball` is only filled when the caller supplies one.
pub fn mixedness_report(rho: &DensityMatrix, ball_radius: Option<f64>) -> Result<MixednessReport> {
    if let Some(r) = ball_radius {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive, got {r}"
            )));
        }
    }
    let mixed = DensityMatrix::maximally_mixed(rho.dim())?;
    let frobenius_to_mixed = frobenius_distance(rho.matrix(), mixed.matrix())?;
    Ok(MixednessReport {
        frobenius_to_mixed,
        purity: rho.purity(),
        ball_radius_used: ball_radius,
        within_ball: ball_radius.map(|r| frobenius_to_mixed <= r),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparabilityReport {
    #[serde(flatten)]
    pub ppt: PptReport,
    #[serde(flatten)]
    pub mixedness: MixednessReport,
}

pub fn separability_report(rho: &DensityMatrix, part: &BipartitionSpec, ball_radius: Option<f64>) -> Result<SeparabilityReport> {
    Ok(SeparabilityReport {
        ppt: ppt_report(rho, part)?,
        mixedness: mixedness_report(rho, ball_radius)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{tensor_product, ComplexMatrix};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn real_state(amps: &[f64]) -> StateVector {
        StateVector::new(amps.iter().map(|&a| Complex64::new(a, 0.0)).collect()).unwrap()
    }

    fn cut(text: &str, n: usize) -> BipartitionSpec {
        BipartitionSpec::parse(text, n).unwrap()
    }

    /// The four Bell states in the order Phi+, Phi-, Psi+, Psi-.
    fn bell_states() -> Vec<StateVector> {
        let h = FRAC_1_SQRT_2;
        vec![
            real_state(&[h, 0.0, 0.0, h]),
            real_state(&[h, 0.0, 0.0, -h]),
            real_state(&[0.0, h, h, 0.0]),
            real_state(&[0.0, h, -h, 0.0]),
        ]
    }

    fn bell_diagonal(weights: [f64; 4]) -> DensityMatrix {
        let mut m = ComplexMatrix::zeros(4);
        for (w, b) in weights.iter().zip(bell_states()) {
            m = &m + &b.projector().scale_real(*w);
        }
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn schmidt_examples() {
        let product = real_state(&[0.0, 1.0, 0.0, 0.0]);
        let c = schmidt_coefficients(&product, &cut("1|2", 2)).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-15 && c[1].abs() < 1e-15);

        let c = schmidt_coefficients(&bell_states()[0], &cut("1|2", 2)).unwrap();
        assert!(c.iter().all(|x| (x - FRAC_1_SQRT_2).abs() < 1e-15));

        let h = FRAC_1_SQRT_2;
        let ghz = real_state(&[h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, h]);
        let c = schmidt_coefficients(&ghz, &cut("1|23", 3)).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|x| (x - h).abs() < 1e-15));
    }

    #[test]
    fn entropy_examples() {
        let product = real_state(&[0.0, 0.0, 1.0, 0.0]);
        assert_eq!(entanglement_entropy(&product, &cut("1|2", 2)).unwrap(), 0.0);
        let s = entanglement_entropy(&bell_states()[3], &cut("1|2", 2)).unwrap();
        assert!((s - 1.0).abs() < 1e-12);

        let a = (1.0f64 / 3.0).sqrt();
        let b = (2.0f64 / 3.0).sqrt();
        let psi = real_state(&[a, 0.0, 0.0, b]);
        // binary entropy H(1/3), evaluated independently in f64
        let h = -(1.0f64 / 3.0) * (1.0f64 / 3.0).log2() - (2.0f64 / 3.0) * (2.0f64 / 3.0).log2();
        assert!((h - 0.918_295_834_054_489_6).abs() < 1e-15);
        let s = entanglement_entropy(&psi, &cut("1|2", 2)).unwrap();
        assert!((s - h).abs() < 1e-12);
    }

    #[test]
    fn report_rank_and_product_flag() {
        let r = entanglement_report(&bell_states()[0], &cut("1|2", 2)).unwrap();
        assert_eq!(r.schmidt_rank, 2);
        assert!(!r.is_product);
        let r = entanglement_report(&StateVector::basis(8, 5).unwrap(), &cut("2|13", 3)).unwrap();
        assert_eq!(r.schmidt_rank, 1);
        assert!(r.is_product);
        assert!(is_fully_product(&StateVector::basis(8, 5).unwrap()).unwrap());
        let h = FRAC_1_SQRT_2;
        // |0> (x) Bell on spins 2,3: product across 1|23, entangled across 2|13
        let psi = real_state(&[h, 0.0, 0.0, h, 0.0, 0.0, 0.0, 0.0]);
        assert!(entanglement_report(&psi, &cut("1|23", 3)).unwrap().is_product);
        assert!(!is_fully_product(&psi).unwrap());
    }

    #[test]
    fn wrong_dimension() {
        assert!(schmidt_coefficients(&bell_states()[0], &cut("1|23", 3)).is_err());
    }

    #[test]
    fn ppt_examples() {
        let a = ComplexMatrix::from_real_diagonal(&[0.3, 0.7]);
        let b = ComplexMatrix::from_real_rows(&[&[0.5, 0.2], &[0.2, 0.5]]).unwrap();
        let rho = DensityMatrix::new(tensor_product(&a, &b)).unwrap();
        let r = ppt_report(&rho, &cut("1|2", 2)).unwrap();
        assert!(r.ppt_holds && r.ppt_is_sufficient);
        assert_eq!(r.negativity, 0.0);

        let rho = DensityMatrix::from_pure(&bell_states()[0]);
        let r = ppt_report(&rho, &cut("1|2", 2)).unwrap();
        assert!((r.min_pt_eigenvalue + 0.5).abs() < 1e-12);
        assert!((r.negativity - 0.5).abs() < 1e-12);
        assert!(!r.ppt_holds);
    }

    #[test]
    fn near_mixed_bell_diagonal_is_ppt() {
        let eps = 1e-5;
        let d = 0.75 * eps;
        let w = [0.25 + d, 0.25 - d / 3.0, 0.25 - d / 3.0, 0.25 - d / 3.0];
        let r = ppt_report(&bell_diagonal(w), &cut("1|2", 2)).unwrap();
        // partial-transpose spectrum of a Bell-diagonal state is 1/2 - w_k
        assert!((r.min_pt_eigenvalue - (0.5 - w[0])).abs() < 1e-12);
        assert!(r.ppt_holds);
        assert!(r.negativity <= 1e-12);

        // crossing max weight 1/2 makes it NPT
        let r = ppt_report(&bell_diagonal([0.6, 0.2, 0.1, 0.1]), &cut("1|2", 2)).unwrap();
        assert!(!r.ppt_holds);
        assert!((r.min_pt_eigenvalue + 0.1).abs() < 1e-12);
        assert!((r.negativity - 0.1).abs() < 1e-12);
    }

    #[test]
    fn larger_cuts_are_not_sufficient() {
        let rho = DensityMatrix::maximally_mixed(8).unwrap();
        let r = ppt_report(&rho, &cut("1|23", 3)).unwrap();
        assert!(r.ppt_holds && !r.ppt_is_sufficient);
    }

    #[test]
    fn mixedness_examples() {
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        let r = mixedness_report(&mixed, None).unwrap();
        assert_eq!(r.frobenius_to_mixed, 0.0);
        assert!((r.purity - 0.25).abs() < 1e-15);
        assert_eq!((r.ball_radius_used, r.within_ball), (None, None));

        let pure = DensityMatrix::from_pure(&bell_states()[1]);
        let r = mixedness_report(&pure, Some(0.5)).unwrap();
        assert!((r.frobenius_to_mixed - 0.75f64.sqrt()).abs() < 1e-12);
        assert!((r.purity - 1.0).abs() < 1e-12);
        assert_eq!(r.within_ball, Some(false));

        assert!(mixedness_report(&pure, Some(0.0)).is_err());
        assert!(mixedness_report(&pure, Some(-1.0)).is_err());
    }

    #[test]
    fn boltzmann_state_is_close_to_mixed() {
        use crate::spin_system::{equilibrium_density_matrix, SpinSystem, ThermalEnsemble};
        let sys = SpinSystem::zeeman(&[1.0, 1.0]).unwrap();
        // spectral width 2, so T = 2e5 gives epsilon = 1e-5
        let ens = ThermalEnsemble::boltzmann(sys, 2e5, 1.0).unwrap();
        let r = mixedness_report(&equilibrium_density_matrix(&ens), Some(1e-5)).unwrap();
        assert!(r.frobenius_to_mixed <= 1e-5);
        assert_eq!(r.within_ball, Some(true));
        let identity = r.frobenius_to_mixed.powi(2) - (r.purity - 0.25);
        assert!(identity.abs() < 1e-12);
    }
}
