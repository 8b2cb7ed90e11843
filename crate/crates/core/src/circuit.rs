//! Gate sequences: a line-oriented text format, embedding of gates into the
//! `2^N`-dimensional molecule space, and the composed propagator.
//!
//! File format, one gate per line:
//!
//! ```text
//! # comment to end of line
//! H 1
//! CNOT 1 2        # control, target
//! RZ 2 1.5707963267948966
//! ```
//!
//! Names are case-sensitive. `RX`/`RY`/`RZ` take one spin and an angle in
//! radians; `CNOT`/`CZ`/`SWAP` take two distinct spins; every other gate
//! takes one spin. Spins are 1-based.
//!
//! Textual order is application order: the first line acts first, so the
//! propagator is `U_L ... U_2 U_1`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::qlinalg::{bit_of, ComplexMatrix, MAX_SPINS};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    T,
    RX,
    RY,
    RZ,
    CNOT,
    CZ,
    SWAP,
}

impl GateKind {
    pub const ALL: [GateKind; 12] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::T,
        GateKind::RX,
        GateKind::RY,
        GateKind::RZ,
        GateKind::CNOT,
        GateKind::CZ,
        GateKind::SWAP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::T => "T",
            GateKind::RX => "RX",
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::CNOT => "CNOT",
            GateKind::CZ => "CZ",
            GateKind::SWAP => "SWAP",
        }
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::RX | GateKind::RY | GateKind::RZ)
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::CNOT | GateKind::CZ | GateKind::SWAP => 2,
            _ => 1,
        }
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown gate {s:?}"))
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
    angle: Option<f64>,
}

impl Gate {
    /// Checks target count, distinctness, range against `n_spins`, and that
    /// an angle is given exactly for rotations.
    pub fn new(kind: GateKind, targets: Vec<usize>, angle: Option<f64>, n_spins: usize) -> std::result::Result<Self, String> {
        if targets.len() != kind.arity() {
            return Err(format!(
                "{kind} takes {} spin index(es), got {}",
                kind.arity(),
                targets.len()
            ));
        }
        if let Some(&t) = targets.iter().find(|&&t| t == 0 || t > n_spins) {
            return Err(format!("spin {t} out of range 1..={n_spins}"));
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(format!("{kind} needs two distinct spins"));
        }
        match (kind.is_rotation(), angle) {
            (true, None) => return Err(format!("{kind} needs an angle")),
            (false, Some(_)) => return Err(format!("{kind} takes no angle")),
            (true, Some(a)) if !a.is_finite() => return Err(format!("angle {a} is not finite")),
            _ => {}
        }
        Ok(Self {
            kind,
            targets,
            angle,
        })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn angle(&self) -> Option<f64> {
        self.angle
    }

    /// The 2x2 or 4x4 matrix on the gate's own targets, first target most
    /// significant. For `CNOT` the first target is the control.
    pub fn local_matrix(&self) -> ComplexMatrix {
        let c = |re, im| Complex64::new(re, im);
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        let rows: Vec<Vec<Complex64>> = match self.kind {
            GateKind::H => {
                let h = c(FRAC_1_SQRT_2, 0.0);
                vec![vec![h, h], vec![h, -h]]
            }
            GateKind::X => vec![vec![z, o], vec![o, z]],
            GateKind::Y => vec![vec![z, c(0.0, -1.0)], vec![c(0.0, 1.0), z]],
            GateKind::Z => vec![vec![o, z], vec![z, -o]],
            GateKind::S => vec![vec![o, z], vec![z, c(0.0, 1.0)]],
            GateKind::T => vec![vec![o, z], vec![z, Complex64::from_polar(1.0, FRAC_PI_4)]],
            GateKind::RX | GateKind::RY | GateKind::RZ => {
                // exp(-i theta sigma / 2)
                let half = self.angle.expect("rotation has an angle") / 2.0;
                let (cs, sn) = (half.cos(), half.sin());
                match self.kind {
                    GateKind::RX => vec![vec![c(cs, 0.0), c(0.0, -sn)], vec![c(0.0, -sn), c(cs, 0.0)]],
                    GateKind::RY => vec![vec![c(cs, 0.0), c(-sn, 0.0)], vec![c(sn, 0.0), c(cs, 0.0)]],
                    _ => vec![vec![c(cs, -sn), z], vec![z, c(cs, sn)]],
                }
            }
            GateKind::CNOT => vec![
                vec![o, z, z, z],
                vec![z, o, z, z],
                vec![z, z, z, o],
                vec![z, z, o, z],
            ],
            GateKind::CZ => vec![
                vec![o, z, z, z],
                vec![z, o, z, z],
                vec![z, z, o, z],
                vec![z, z, z, -o],
            ],
            GateKind::SWAP => vec![
                vec![o, z, z, z],
                vec![z, z, o, z],
                vec![z, o, z, z],
                vec![z, z, z, o],
            ],
        };
        ComplexMatrix::from_rows(&rows).expect("gate tables are square")
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for t in &self.targets {
            write!(f, " {t}")?;
        }
        if let Some(a) = self.angle {
            // `{:?}` is the shortest representation that parses back to the same f64
            write!(f, " {a:?}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_spins: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_spins: usize, gates: Vec<Gate>) -> Result<Self> {
        check_spins(n_spins)?;
        if let Some(g) = gates.iter().find(|g| g.targets.iter().any(|&t| t > n_spins)) {
            return Err(Error::InvalidParameter(format!(
                "gate `{g}` exceeds {n_spins} spins"
            )));
        }
        Ok(Self { n_spins, gates })
    }

    pub fn empty(n_spins: usize) -> Result<Self> {
        Self::new(n_spins, Vec::new())
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Circuit) -> Result<Self> {
        if self.n_spins != next.n_spins {
            return Err(Error::DimensionMismatch {
                left: self.n_spins,
                right: next.n_spins,
            });
        }
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&next.gates);
        Ok(Self {
            n_spins: self.n_spins,
            gates,
        })
    }
}

/// One gate per line, in the same grammar [`parse_circuit`] reads.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

fn check_spins(n_spins: usize) -> Result<()> {
    if n_spins == 0 || n_spins > MAX_SPINS {
        return Err(Error::InvalidParameter(format!(
            "number of spins must be in 1..={MAX_SPINS}, got {n_spins}"
        )));
    }
    Ok(())
}

pub fn parse_circuit(text: &str, n_spins: usize) -> Result<Circuit> {
    check_spins(n_spins)?;
    let mut gates = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let gate = parse_gate_line(&tokens, n_spins).map_err(|message| Error::Parse {
            line: i + 1,
            message,
        })?;
        gates.push(gate);
    }
    Ok(Circuit { n_spins, gates })
}

fn parse_gate_line(tokens: &[&str], n_spins: usize) -> std::result::Result<Gate, String> {
    let kind: GateKind = tokens[0].parse()?;
    let args = &tokens[1..];
    let n_ints = kind.arity();
    let expected = n_ints + usize::from(kind.is_rotation());
    if args.len() != expected {
        return Err(format!(
            "{kind} expects {expected} argument(s), got {}",
            args.len()
        ));
    }
    let targets = args[..n_ints]
        .iter()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| format!("bad spin index {t:?}"))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let angle = if kind.is_rotation() {
        let a = args[n_ints];
        let v: f64 = a.parse().map_err(|_| format!("malformed angle {a:?}"))?;
        if !v.is_finite() {
            return Err(format!("malformed angle {a:?}"));
        }
        Some(v)
    } else {
        None
    };
    Gate::new(kind, targets, angle, n_spins)
}

/// Embeds `local` (acting on `targets`, first target most significant)
/// into the full register, identity on all other spins.
pub fn embed(local: &ComplexMatrix, targets: &[usize], n_spins: usize) -> Result<ComplexMatrix> {
    check_spins(n_spins)?;
    if local.dim() != 1 << targets.len() {
        return Err(Error::DimensionMismatch {
            left: local.dim(),
            right: 1 << targets.len(),
        });
    }
    let dim = 1usize << n_spins;
    let bits: Vec<usize> = targets.iter().map(|&t| bit_of(t, n_spins)).collect();
    let target_mask = bits.iter().fold(0, |m, b| m | 1 << b);
    let m = bits.len();
    let sub = |idx: usize| {
        bits.iter()
            .enumerate()
            .fold(0, |acc, (p, b)| acc | (idx >> b & 1) << (m - 1 - p))
    };
    let spread = |s: usize| {
        bits.iter()
            .enumerate()
            .fold(0, |acc, (p, b)| acc | (s >> (m - 1 - p) & 1) << b)
    };
    let mut out = ComplexMatrix::zeros(dim);
    for col in 0..dim {
        let rest = col & !target_mask;
        let sc = sub(col);
        for sr in 0..local.dim() {
            let v = local.get(sr, sc);
            if v != Complex64::ZERO {
                out.set(rest | spread(sr), col, v);
            }
        }
    }
    Ok(out)
}

pub fn gate_unitary(gate: &Gate, n_spins: usize) -> Result<ComplexMatrix> {
    embed(&gate.local_matrix(), &gate.targets, n_spins)
}

/// `U_comp = U_L ... U_2 U_1` for gates listed `U_1, U_2, ..., U_L`.
pub fn compose_propagator(circuit: &Circuit) -> Result<ComplexMatrix> {
    let mut u = ComplexMatrix::identity(1 << circuit.n_spins);
    for gate in &circuit.gates {
        u = gate_unitary(gate, circuit.n_spins)?.matmul(&u)?;
    }
    u.validate_unitary()?;
    Ok(u)
}

/// Random circuit with gate kinds drawn uniformly from those that fit in
/// `n_spins` and angles uniform in `[0, 2 pi)`.
pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, n_spins: usize, depth: usize) -> Result<Circuit> {
    check_spins(n_spins)?;
    let kinds: Vec<GateKind> = GateKind::ALL
        .into_iter()
        .filter(|k| k.arity() <= n_spins)
        .collect();
    let gates = (0..depth)
        .map(|_| {
            let kind = kinds[rng.random_range(0..kinds.len())];
            let first = rng.random_range(1..=n_spins);
            let targets = if kind.arity() == 2 {
                let mut second = rng.random_range(1..n_spins);
                if second >= first {
                    second += 1;
                }
                vec![first, second]
            } else {
                vec![first]
            };
            let angle = kind.is_rotation().then(|| rng.random_range(0.0..TAU));
            Gate::new(kind, targets, angle, n_spins).expect("generated gate is valid")
        })
        .collect();
    Ok(Circuit { n_spins, gates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::tensor_product;
    use crate::spin_system::{pauli, Axis};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn parse_basic() {
        let circ = parse_circuit("H 1\nCNOT 1 2", 2).unwrap();
        assert_eq!(circ.len(), 2);
        assert_eq!(circ.gates()[1].targets(), &[1, 2]);
        assert!(parse_circuit("", 2).unwrap().is_empty());
        let circ = parse_circuit("# header\n\n  RZ 1 -0.5   # tail\n\tSWAP 2 1\n", 2).unwrap();
        assert_eq!(circ.gates()[0].angle(), Some(-0.5));
        assert_eq!(circ.gates()[1].kind(), GateKind::SWAP);
    }

    #[test]
    fn parse_errors_cite_line() {
        let cases = [
            ("CNOT 1 3", 2, 1),
            ("H 1\nFOO 1", 2, 2),
            ("H 1\n\nh 1", 2, 3),
            ("H", 2, 1),
            ("H 1 2", 2, 1),
            ("RX 1", 1, 1),
            ("RX 1 abc", 1, 1),
            ("RX 1 nan", 1, 1),
            ("RX 1 0.1 0.2", 1, 1),
            ("CNOT 1 1", 2, 1),
            ("CZ 1", 2, 1),
            ("X 0", 2, 1),
            ("X -1", 2, 1),
            ("H 1.0", 2, 1),
        ];
        for (text, n, line) in cases {
            match parse_circuit(text, n) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn display_round_trip() {
        let text = "H 1\nRX 2 0.1\nRZ 1 -3.141592653589793\nCNOT 2 1\nT 2\n";
        let circ = parse_circuit(text, 2).unwrap();
        assert_eq!(circ.to_string(), text);
        assert_eq!(parse_circuit(&circ.to_string(), 2).unwrap(), circ);
    }

    #[test]
    fn hadamard_single_spin() {
        let g = Gate::new(GateKind::H, vec![1], None, 1).unwrap();
        let u = gate_unitary(&g, 1).unwrap();
        let h = FRAC_1_SQRT_2;
        let want = ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]).unwrap();
        assert!(u.max_abs_diff(&want).unwrap() < 1e-15);
    }

    #[test]
    fn x_on_second_spin() {
        let g = Gate::new(GateKind::X, vec![2], None, 2).unwrap();
        let want = tensor_product(&ComplexMatrix::identity(2), &pauli(Axis::X));
        assert_eq!(gate_unitary(&g, 2).unwrap(), want);
    }

    #[test]
    fn cnot_truth_table() {
        let g = Gate::new(GateKind::CNOT, vec![1, 2], None, 2).unwrap();
        let u = gate_unitary(&g, 2).unwrap();
        // |c t> -> |c, t xor c>
        for input in 0..4usize {
            let (ctl, tgt) = (input >> 1, input & 1);
            let out = (ctl << 1) | (tgt ^ ctl);
            for row in 0..4 {
                let want = if row == out { 1.0 } else { 0.0 };
                assert_eq!(u.get(row, input), c(want));
            }
        }
        let reversed = gate_unitary(&Gate::new(GateKind::CNOT, vec![2, 1], None, 2).unwrap(), 2).unwrap();
        assert_eq!(reversed.get(3, 1), c(1.0));
    }

    #[test]
    fn embedding_on_non_adjacent_spins_matches_swaps() {
        // CNOT 1 3 == SWAP 2 3 ; CNOT 1 2 ; SWAP 2 3
        let direct = compose_propagator(&parse_circuit("CNOT 1 3", 3).unwrap()).unwrap();
        let via = compose_propagator(&parse_circuit("SWAP 2 3\nCNOT 1 2\nSWAP 2 3", 3).unwrap()).unwrap();
        assert!(direct.max_abs_diff(&via).unwrap() < 1e-15);
    }

    #[test]
    fn rotations_match_exponentials() {
        let theta = 0.83;
        for (kind, axis) in [(GateKind::RX, Axis::X), (GateKind::RY, Axis::Y), (GateKind::RZ, Axis::Z)] {
            let g = Gate::new(kind, vec![1], Some(theta), 1).unwrap();
            // cos(t/2) I - i sin(t/2) sigma
            let want = &ComplexMatrix::identity(2).scale_real((theta / 2.0).cos())
                - &pauli(axis).scale(Complex64::new(0.0, (theta / 2.0).sin()));
            assert!(g.local_matrix().max_abs_diff(&want).unwrap() < 1e-15);
        }
        let s = Gate::new(GateKind::S, vec![1], None, 1).unwrap().local_matrix();
        let t = Gate::new(GateKind::T, vec![1], None, 1).unwrap().local_matrix();
        assert!((&t * &t).max_abs_diff(&s).unwrap() < 1e-15);
    }

    #[test]
    fn empty_and_involution() {
        assert_eq!(compose_propagator(&Circuit::empty(3).unwrap()).unwrap(), ComplexMatrix::identity(8));
        let u = compose_propagator(&parse_circuit("H 1\nH 1", 1).unwrap()).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(2)).unwrap() <= 1e-12);
    }

    #[test]
    fn bell_circuit_on_ground_state() {
        let u = compose_propagator(&parse_circuit("H 1\nCNOT 1 2", 2).unwrap()).unwrap();
        let out = u.apply(&[c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        let h = FRAC_1_SQRT_2;
        for (got, want) in out.iter().zip([h, 0.0, 0.0, h]) {
            assert!((got - c(want)).norm() < 1e-15);
        }
    }

    #[test]
    fn random_circuits_are_valid_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4 {
            let ca = random_circuit(&mut a, n, 15).unwrap();
            let cb = random_circuit(&mut b, n, 15).unwrap();
            assert_eq!(ca, cb);
            assert_eq!(parse_circuit(&ca.to_string(), n).unwrap(), ca);
            if n == 1 {
                assert!(ca.gates().iter().all(|g| g.kind().arity() == 1));
            }
        }
    }
}
