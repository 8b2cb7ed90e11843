//! Batch driver: configuration, the `simulate` and `sweep` runs, and the
//! JSON report they produce.
//!
//! A report has six top-level sections: `config_echo`, `ensemble`,
//! `pathways`, `entanglement`, `separability` and `sweep`. Sections that a
//! run does not produce are `null`. Reports carry no timestamp, so they are
//! byte-for-byte reproducible from the config, circuit file and seed.

mod config;
mod json;

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use config::{ObservableSpec, RunConfig};
pub use json::to_json_string;

use crate::circuit::{compose_propagator, parse_circuit, random_circuit, Circuit};
use crate::engine::{compare_with_propagator, evolve_eigenstate, PathwayResult, PATHWAY_TOLERANCE};
use crate::entanglement::{entanglement_report, is_fully_product, separability_report, EntanglementReport, SeparabilityReport};
use crate::spin_system::{epsilon_report, equilibrium_density_matrix, EpsilonReport, ThermalEnsemble};
use crate::{Error, Result};

/// Random sweep circuits have between 1 and this many gates.
pub const SWEEP_MAX_DEPTH: usize = 20;

const ENTROPY_MEASURE: &str = "von Neumann entropy of the Schmidt spectrum (bits)";

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config_echo: ConfigEcho,
    pub ensemble: EnsembleSection,
    pub pathways: Option<PathwaysSection>,
    pub entanglement: Option<EntanglementSection>,
    pub separability: Option<SeparabilitySection>,
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub n_spins: usize,
    pub larmor: Vec<f64>,
    pub temperature: f64,
    pub molecule_count: f64,
    pub circuit_path: Option<String>,
    /// Gate lines as parsed, in application order.
    pub circuit: Option<Vec<String>>,
    pub observable: String,
    pub bipartition: Option<String>,
    pub ball_radius: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleSection {
    pub level_energies: Vec<f64>,
    pub temperature: f64,
    pub molecule_count: f64,
    pub populations: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub epsilon: EpsilonReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathwaysSection {
    pub observable: String,
    /// Allowed `|sum - trace|`, `1e-10 * M`.
    pub tolerance: f64,
    pub agree: bool,
    #[serde(flatten)]
    pub result: PathwayResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvolvedStateEntry {
    pub level: usize,
    pub initial_state: String,
    /// Product across every cut, not just the configured one.
    pub fully_product: bool,
    #[serde(flatten)]
    pub report: EntanglementReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntanglementSection {
    pub measure: &'static str,
    pub bipartition: String,
    pub entangled_count: usize,
    pub per_state: Vec<EvolvedStateEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparabilitySection {
    pub bipartition: String,
    pub criterion: &'static str,
    pub initial: SeparabilityReport,
    pub evolved: SeparabilityReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepCase {
    pub index: usize,
    pub depth: usize,
    pub abs_difference: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WorstCase {
    pub index: usize,
    pub abs_difference: f64,
    pub circuit: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSection {
    pub seed: u64,
    pub n_circuits: usize,
    pub min_depth: usize,
    pub max_depth: usize,
    pub observable: String,
    pub tolerance: f64,
    pub max_abs_difference: f64,
    pub passed: bool,
    pub worst_case: Option<WorstCase>,
    pub cases: Vec<SweepCase>,
}

/// A finished run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: Report,
    /// False when a numerical cross-check failed (pathways disagree).
    pub validated: bool,
}

impl RunOutcome {
    pub fn to_json(&self) -> String {
        to_json_string(&self.report)
    }
}

fn basis_label(k: usize, n_spins: usize) -> String {
    format!("|{k:0n_spins$b}>")
}

fn echo(config: &RunConfig, circuit: Option<&Circuit>) -> ConfigEcho {
    ConfigEcho {
        n_spins: config.n_spins,
        larmor: config.larmor.clone(),
        temperature: config.temperature,
        molecule_count: config.molecule_count,
        circuit_path: config.circuit_path.as_ref().map(|p| p.display().to_string()),
        circuit: circuit.map(|c| c.gates().iter().map(ToString::to_string).collect()),
        observable: config.observable.to_string(),
        bipartition: config.bipartition.as_ref().map(ToString::to_string),
        ball_radius: config.ball_radius,
        seed: config.seed,
    }
}

fn ensemble_section(ensemble: &ThermalEnsemble) -> EnsembleSection {
    EnsembleSection {
        level_energies: ensemble.system().level_energies().to_vec(),
        temperature: ensemble.temperature(),
        molecule_count: ensemble.molecule_count(),
        populations: ensemble.populations().to_vec(),
        probabilities: ensemble.probabilities(),
        epsilon: epsilon_report(ensemble),
    }
}

pub fn load_circuit(path: &Path, n_spins: usize) -> Result<Circuit> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_circuit(&text, n_spins).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

/// Reads the configured circuit file and runs [`simulate_circuit`].
pub fn run_simulate(config: &RunConfig) -> Result<RunOutcome> {
    let path = config
        .resolved_circuit_path()
        .ok_or_else(|| Error::Config("simulate needs circuit_path".into()))?;
    let circuit = load_circuit(&path, config.n_spins)?;
    simulate_circuit(config, &circuit)
}

/// Both readout pathways plus entanglement of every evolved eigenstate and
/// separability of the averaged state before and after the circuit.
pub fn simulate_circuit(config: &RunConfig, circuit: &Circuit) -> Result<RunOutcome> {
    let ensemble = config.ensemble()?;
    let m = ensemble.molecule_count();
    let propagator = compose_propagator(circuit)?;
    let observable = config.observable.operator(config.n_spins)?;
    let result = compare_with_propagator(&propagator, &ensemble, &observable)?;
    let validated = result.agrees(m);
    let pathways = PathwaysSection {
        observable: config.observable.describe(),
        tolerance: PATHWAY_TOLERANCE * m,
        agree: validated,
        result,
    };

    let (entanglement, separability) = match &config.bipartition {
        None => (None, None),
        Some(cut) => {
            let per_state = (0..ensemble.system().dim())
                .map(|k| {
                    let psi = evolve_eigenstate(&propagator, k)?;
                    Ok(EvolvedStateEntry {
                        level: k,
                        initial_state: basis_label(k, config.n_spins),
                        fully_product: is_fully_product(&psi)?,
                        report: entanglement_report(&psi, cut)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let entanglement = EntanglementSection {
                measure: ENTROPY_MEASURE,
                bipartition: cut.to_string(),
                entangled_count: per_state.iter().filter(|e| !e.report.is_product).count(),
                per_state,
            };

            let initial = equilibrium_density_matrix(&ensemble);
            let evolved = initial.evolve(&propagator)?;
            let separability = SeparabilitySection {
                bipartition: cut.to_string(),
                criterion: if cut.is_two_qubit() {
                    "PPT (necessary and sufficient for two qubits)"
                } else {
                    "PPT (necessary condition only)"
                },
                initial: separability_report(&initial, cut, config.ball_radius)?,
                evolved: separability_report(&evolved, cut, config.ball_radius)?,
            };
            (Some(entanglement), Some(separability))
        }
    };

    Ok(RunOutcome {
        report: Report {
            config_echo: echo(config, Some(circuit)),
            ensemble: ensemble_section(&ensemble),
            pathways: Some(pathways),
            entanglement,
            separability,
            sweep: None,
        },
        validated,
    })
}

/// Cross-checks the two pathways on `n_circuits` random circuits drawn from
/// the configured seed. Depths are uniform in `1..=20`.
pub fn run_sweep(config: &RunConfig, n_circuits: usize) -> Result<RunOutcome> {
    let seed = config
        .seed
        .ok_or_else(|| Error::Config("sweep needs a seed".into()))?;
    let ensemble = config.ensemble()?;
    let m = ensemble.molecule_count();
    let observable = config.observable.operator(config.n_spins)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut cases = Vec::with_capacity(n_circuits);
    let mut worst: Option<WorstCase> = None;
    for index in 0..n_circuits {
        let depth = rng.random_range(1..=SWEEP_MAX_DEPTH);
        let circuit = random_circuit(&mut rng, config.n_spins, depth)?;
        let propagator = compose_propagator(&circuit)?;
        let result = compare_with_propagator(&propagator, &ensemble, &observable)?;
        let d = result.abs_difference;
        if worst.as_ref().is_none_or(|w| d > w.abs_difference) {
            worst = Some(WorstCase {
                index,
                abs_difference: d,
                circuit: circuit.to_string(),
            });
        }
        cases.push(SweepCase {
            index,
            depth,
            abs_difference: d,
        });
    }
    let max_abs_difference = worst.as_ref().map_or(0.0, |w| w.abs_difference);
    let tolerance = PATHWAY_TOLERANCE * m;
    let passed = max_abs_difference <= tolerance;

    Ok(RunOutcome {
        report: Report {
            config_echo: echo(config, None),
            ensemble: ensemble_section(&ensemble),
            pathways: None,
            entanglement: None,
            separability: None,
            sweep: Some(SweepSection {
                seed,
                n_circuits,
                min_depth: 1,
                max_depth: SWEEP_MAX_DEPTH,
                observable: config.observable.describe(),
                tolerance,
                max_abs_difference,
                passed,
                worst_case: worst,
                cases,
            }),
        },
        validated: passed,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Ten-line human-readable verdict for a report.
pub fn summary(report: &Report) -> Vec<String> {
    let cfg = &report.config_echo;
    let ens = &report.ensemble;
    let mut lines = vec![
        "NMR ensemble computation: pure-state vs density-matrix statistics".to_string(),
        format!(
            "molecule: N = {} spins, K = {} levels, M = {:e}, T = {:e}",
            cfg.n_spins,
            ens.level_energies.len(),
            ens.molecule_count,
            ens.temperature
        ),
        format!(
            "epsilon = dE/T = {:e} (dE = {:e}), population spread = {:e}",
            ens.epsilon.epsilon, ens.epsilon.delta_e, ens.epsilon.max_population_spread
        ),
    ];
    if let Some(sweep) = &report.sweep {
        lines.push(format!("observable: {}", sweep.observable));
        lines.push(format!("sweep seed: {}", sweep.seed));
        lines.push(format!(
            "random circuits: {} (depth {}..={})",
            sweep.n_circuits, sweep.min_depth, sweep.max_depth
        ));
        lines.push(format!("pathway agreement: max Δ = {:e}", sweep.max_abs_difference));
        lines.push(match &sweep.worst_case {
            Some(w) => format!(
                "worst case: circuit #{} ({} gates)",
                w.index,
                w.circuit.lines().count()
            ),
            None => "worst case: none (empty sweep)".to_string(),
        });
        lines.push(format!(
            "tolerance: {:e} ({:e} x M)",
            sweep.tolerance, PATHWAY_TOLERANCE
        ));
        lines.push(format!("verdict: {}", if sweep.passed { "PASS" } else { "FAIL" }));
        return lines;
    }

    let n_gates = cfg.circuit.as_ref().map_or(0, Vec::len);
    lines.push(format!(
        "circuit: {} gate(s) from {}",
        n_gates,
        cfg.circuit_path.as_deref().unwrap_or("<inline>")
    ));
    match &report.entanglement {
        Some(e) => {
            let max_s = e
                .per_state
                .iter()
                .map(|s| s.report.entropy_bits)
                .fold(0.0, f64::max);
            lines.push(format!(
                "per-molecule states entangled: {} ({}/{} evolved eigenstates across {}, max entropy {:.9} bits)",
                yes_no(e.entangled_count > 0),
                e.entangled_count,
                e.per_state.len(),
                e.bipartition,
                max_s
            ));
        }
        None => lines.push("per-molecule states entangled: n/a (single spin)".to_string()),
    }
    match &report.separability {
        Some(s) => {
            lines.push(format!(
                "ensemble state PPT-separable: {} (min PT eigenvalue {:e}, negativity {:e}; {})",
                yes_no(s.evolved.ppt.ppt_holds),
                s.evolved.ppt.min_pt_eigenvalue,
                s.evolved.ppt.negativity,
                s.criterion
            ));
            lines.push(format!(
                "distance to maximally mixed: {:e} (purity {:.12})",
                s.evolved.mixedness.frobenius_to_mixed, s.evolved.mixedness.purity
            ));
        }
        None => {
            lines.push("ensemble state PPT-separable: n/a (single spin)".to_string());
            lines.push("distance to maximally mixed: n/a".to_string());
        }
    }
    if let Some(p) = &report.pathways {
        lines.push(format!(
            "pathway agreement: Δ = {:e} (sum {:e}, trace {:e}, {})",
            p.result.abs_difference, p.result.expectation_sum, p.result.expectation_trace, p.observable
        ));
        lines.push(format!(
            "tolerance {:e} ({:e} x M): {}",
            p.tolerance,
            PATHWAY_TOLERANCE,
            if p.agree { "PASS" } else { "FAIL" }
        ));
    }
    let entangled = report.entanglement.as_ref().is_some_and(|e| e.entangled_count > 0);
    let ppt = report.separability.as_ref().is_some_and(|s| s.evolved.ppt.ppt_holds);
    lines.push(if entangled && ppt {
        "verdict: every molecule may hold an entangled pure state while the averaged operator is PPT".to_string()
    } else {
        format!(
            "verdict: entangled molecules {}, averaged operator PPT {}",
            yes_no(entangled),
            yes_no(ppt)
        )
    });
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn config(extra: &str) -> RunConfig {
        let text = format!(
            "n_spins = 2\nlarmor = [1.0, 1.0]\ntemperature = 2e5\nmolecule_count = 1e20\nseed = 42\n{extra}"
        );
        RunConfig::from_toml(&text, PathBuf::new()).unwrap()
    }

    #[test]
    fn bell_simulation_report() {
        let cfg = config("");
        let circ = parse_circuit("H 1\nCNOT 1 2", 2).unwrap();
        let out = simulate_circuit(&cfg, &circ).unwrap();
        assert!(out.validated);
        let e = out.report.entanglement.as_ref().unwrap();
        assert_eq!(e.entangled_count, 4);
        for s in &e.per_state {
            assert!((s.report.entropy_bits - 1.0).abs() < 1e-9);
        }
        let sep = out.report.separability.as_ref().unwrap();
        assert!(sep.evolved.ppt.ppt_holds);
        assert!(sep.evolved.ppt.negativity <= 1e-12);
        assert_eq!(summary(&out.report).len(), 10);
    }

    #[test]
    fn empty_circuit_report() {
        let out = simulate_circuit(&config(""), &Circuit::empty(2).unwrap()).unwrap();
        let p = out.report.pathways.as_ref().unwrap();
        assert_eq!(p.result.expectation_sum, 0.0);
        let e = out.report.entanglement.unwrap();
        assert!(e.per_state.iter().all(|s| s.report.entropy_bits == 0.0 && s.fully_product));
    }

    #[test]
    fn sweep_sections() {
        let out = run_sweep(&config(""), 0).unwrap();
        let s = out.report.sweep.as_ref().unwrap();
        assert!(s.cases.is_empty() && s.worst_case.is_none() && s.passed);
        assert_eq!(summary(&out.report).len(), 10);

        let a = run_sweep(&config(""), 10).unwrap().to_json();
        let b = run_sweep(&config(""), 10).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_requires_seed() {
        let text = "n_spins = 1\nlarmor = [1.0]\ntemperature = 1.0\nmolecule_count = 1.0\n";
        let cfg = RunConfig::from_toml(text, PathBuf::new()).unwrap();
        assert!(matches!(run_sweep(&cfg, 1), Err(Error::Config(_))));
        assert!(matches!(run_simulate(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn single_spin_summary_has_ten_lines() {
        let text = "n_spins = 1\nlarmor = [1.0]\ntemperature = 1.0\nmolecule_count = 1.0\n";
        let cfg = RunConfig::from_toml(text, PathBuf::new()).unwrap();
        let out = simulate_circuit(&cfg, &parse_circuit("H 1", 1).unwrap()).unwrap();
        assert!(out.report.entanglement.is_none());
        assert_eq!(summary(&out.report).len(), 10);
    }

    #[test]
    fn basis_labels() {
        assert_eq!(basis_label(2, 3), "|010>");
        assert_eq!(basis_label(3, 2), "|11>");
    }
}
