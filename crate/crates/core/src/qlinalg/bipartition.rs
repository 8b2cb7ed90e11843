use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::{bit_of, ComplexMatrix, MAX_SPINS};
use crate::{Error, Result};

/// Which side of a cut a reduced operator lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A cut of the spins `1..=N` into two non-empty complementary groups.
///
/// Spin labels are 1-based and each side is kept in ascending order, so the
/// reduced basis of a side is again big-endian in its own spins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BipartitionSpec {
    n_spins: usize,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl BipartitionSpec {
    pub fn new(n_spins: usize, mut left: Vec<usize>, mut right: Vec<usize>) -> Result<Self> {
        if n_spins < 2 || n_spins > MAX_SPINS {
            return Err(Error::InvalidBipartition(format!(
                "need 2..={MAX_SPINS} spins to cut, got {n_spins}"
            )));
        }
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidBipartition("both sides must be non-empty".into()));
        }
        left.sort_unstable();
        right.sort_unstable();
        let mut seen = vec![false; n_spins + 1];
        for &s in left.iter().chain(&right) {
            if s == 0 || s > n_spins {
                return Err(Error::InvalidBipartition(format!(
                    "spin {s} outside 1..={n_spins}"
                )));
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidBipartition(format!("spin {s} listed twice")));
            }
        }
        if left.len() + right.len() != n_spins {
            return Err(Error::InvalidBipartition(format!(
                "sides must cover all {n_spins} spins"
            )));
        }
        Ok(Self {
            n_spins,
            left,
            right,
        })
    }

    /// Cut with the given left side and its complement on the right.
    pub fn from_left(n_spins: usize, left: Vec<usize>) -> Result<Self> {
        let right = (1..=n_spins).filter(|s| !left.contains(s)).collect();
        Self::new(n_spins, left, right)
    }

    /// Parses `"<left>|<right>"`. Spins on a side are separated by commas or
    /// whitespace; for registers of at most 9 spins a run of digits such as
    /// `23` is also read as the individual spins 2 and 3.
    pub fn parse(text: &str, n_spins: usize) -> Result<Self> {
        let (l, r) = text
            .split_once('|')
            .ok_or_else(|| Error::InvalidBipartition(format!("missing '|' in {text:?}")))?;
        let left = parse_side(l, n_spins)?;
        let right = parse_side(r, n_spins)?;
        Self::new(n_spins, left, right)
    }

    /// Every cut of an `n_spins` register, each listed once (spin 1 always
    /// on the left).
    pub fn all_cuts(n_spins: usize) -> Result<Vec<Self>> {
        if n_spins < 2 || n_spins > MAX_SPINS {
            return Err(Error::InvalidBipartition(format!(
                "need 2..={MAX_SPINS} spins to cut, got {n_spins}"
            )));
        }
        let rest = n_spins - 1;
        (0..(1usize << rest) - 1)
            .map(|mask| {
                let mut left = vec![1];
                left.extend((0..rest).filter(|b| mask >> b & 1 == 1).map(|b| b + 2));
                Self::from_left(n_spins, left)
            })
            .collect()
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn left_dim(&self) -> usize {
        1 << self.left.len()
    }

    pub fn right_dim(&self) -> usize {
        1 << self.right.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.n_spins
    }

    /// True when both sides hold a single spin (the 2-qubit case).
    pub fn is_two_qubit(&self) -> bool {
        self.left.len() == 1 && self.right.len() == 1
    }

    /// Splits a full basis index into `(left_index, right_index)`.
    pub fn split(&self, index: usize) -> (usize, usize) {
        (
            gather(index, &self.left, self.n_spins),
            gather(index, &self.right, self.n_spins),
        )
    }

    /// Inverse of [`split`](Self::split).
    pub fn join(&self, left_index: usize, right_index: usize) -> usize {
        scatter(left_index, &self.left, self.n_spins) | scatter(right_index, &self.right, self.n_spins)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if dim == self.dim() {
            Ok(())
        } else {
            Err(Error::InvalidBipartition(format!(
                "cut {self} is for dimension {}, operand has dimension {dim}",
                self.dim()
            )))
        }
    }

    /// `join` for every `(left, right)` pair, indexed `[left * right_dim + right]`.
    fn join_table(&self) -> Vec<usize> {
        let rd = self.right_dim();
        (0..self.left_dim() * rd)
            .map(|lr| self.join(lr / rd, lr % rd))
            .collect()
    }
}

impl fmt::Display for BipartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n_spins <= 9 { "" } else { "," };
        let side = |s: &[usize]| {
            s.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(sep)
        };
        write!(f, "{}|{}", side(&self.left), side(&self.right))
    }
}

fn parse_side(text: &str, n_spins: usize) -> Result<Vec<usize>> {
    let mut spins = Vec::new();
    for token in text.split(|c: char| c == ',' || c.is_whitespace()) {
        if token.is_empty() {
            continue;
        }
        if !token.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::InvalidBipartition(format!("bad spin label {token:?}")));
        }
        if n_spins <= 9 {
            spins.extend(token.chars().map(|c| c as usize - '0' as usize));
        } else {
            spins.push(
                token
                    .parse()
                    .map_err(|_| Error::InvalidBipartition(format!("bad spin label {token:?}")))?,
            );
        }
    }
    Ok(spins)
}

fn gather(index: usize, spins: &[usize], n_spins: usize) -> usize {
    spins
        .iter()
        .fold(0, |acc, &s| (acc << 1) | (index >> bit_of(s, n_spins) & 1))
}

fn scatter(sub: usize, spins: &[usize], n_spins: usize) -> usize {
    let m = spins.len();
    spins.iter().enumerate().fold(0, |acc, (pos, &s)| {
        acc | ((sub >> (m - 1 - pos) & 1) << bit_of(s, n_spins))
    })
}

/// Reduced operator on the `keep` side, tracing out the other side.
pub fn partial_trace(rho: &ComplexMatrix, part: &BipartitionSpec, keep: Side) -> Result<ComplexMatrix> {
    part.check_dim(rho.dim())?;
    let (ld, rd) = (part.left_dim(), part.right_dim());
    let join = part.join_table();
    let idx = |l: usize, r: usize| join[l * rd + r];
    let out = match keep {
        Side::Left => {
            let mut out = ComplexMatrix::zeros(ld);
            for a in 0..ld {
                for b in 0..ld {
                    let s: Complex64 = (0..rd).map(|t| rho.get(idx(a, t), idx(b, t))).sum();
                    out.set(a, b, s);
                }
            }
            out
        }
        Side::Right => {
            let mut out = ComplexMatrix::zeros(rd);
            for a in 0..rd {
                for b in 0..rd {
                    let s: Complex64 = (0..ld).map(|t| rho.get(idx(t, a), idx(t, b))).sum();
                    out.set(a, b, s);
                }
            }
            out
        }
    };
    Ok(out)
}

/// Transpose with respect to the right-hand spins only:
/// `<l r| rho^T_B |l' r'> = <l r'| rho |l' r>`.
pub fn partial_transpose(rho: &ComplexMatrix, part: &BipartitionSpec) -> Result<ComplexMatrix> {
    part.check_dim(rho.dim())?;
    let dim = rho.dim();
    let split: Vec<(usize, usize)> = (0..dim).map(|i| part.split(i)).collect();
    let mut out = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        let (li, ri) = split[i];
        for j in 0..dim {
            let (lj, rj) = split[j];
            out.set(i, j, rho.get(part.join(li, rj), part.join(lj, ri)));
        }
    }
    Ok(out)
}
