//! Seeded random inputs and brute-force oracles shared by integration tests.
//! Nothing here calls into the code paths it is used to check.
#![allow(dead_code)]

use nmr_ensemble::qlinalg::{Complex64, ComplexMatrix, StateVector};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> StateVector {
    StateVector::normalized((0..dim).map(|_| gaussian(rng)).collect()).unwrap()
}

/// Haar-ish unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(c) {
                    *x -= proj * a;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    let mut data = vec![Complex64::ZERO; dim * dim];
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            data[i * dim + j] = *x;
        }
    }
    ComplexMatrix::from_row_major(dim, data).unwrap()
}

pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m.set(i, i, Complex64::new(rng.sample(StandardNormal), 0.0));
        for j in i + 1..dim {
            let z = gaussian(rng);
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    m
}

/// `A A^dagger / Tr(A A^dagger)` for Gaussian `A`; full rank almost surely.
pub fn random_density<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_row_major(dim, (0..dim * dim).map(|_| gaussian(rng)).collect()).unwrap();
    let m = naive_mul(&a, &naive_adjoint(&a));
    let tr: f64 = (0..dim).map(|i| m.get(i, i).re).sum();
    let mut out = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            // exact Hermitian symmetry
            let v = if i <= j { m.get(i, j) } else { m.get(j, i).conj() };
            out.set(i, j, v / tr);
        }
    }
    out
}

pub fn naive_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut s = Complex64::ZERO;
            for k in 0..n {
                s += a.get(i, k) * b.get(k, j);
            }
            out.set(i, j, s);
        }
    }
    out
}

pub fn naive_adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, a.get(j, i).conj());
        }
    }
    out
}

pub fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.dim();
    assert_eq!(n, b.dim());
    let mut d = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            d = d.max((a.get(i, j) - b.get(i, j)).norm());
        }
    }
    d
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(a: &ComplexMatrix) -> Complex64 {
    let n = a.dim();
    let mut m: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
    let mut det = Complex64::ONE;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm()))
            .unwrap();
        if m[pivot][col] == Complex64::ZERO {
            return Complex64::ZERO;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                let v = m[col][k];
                m[row][k] -= f * v;
            }
        }
    }
    det
}

/// Bit of 1-based `spin` in basis index `k` of an `n`-spin register,
/// spin 1 most significant.
pub fn spin_bit(k: usize, spin: usize, n: usize) -> usize {
    (k >> (n - spin)) & 1
}

/// `Tr_B rho` by explicit summation over basis strings, keeping `left`.
pub fn partial_trace_oracle(rho: &ComplexMatrix, n: usize, left: &[usize]) -> ComplexMatrix {
    let dim = 1 << n;
    let kd = 1 << left.len();
    let mut out = ComplexMatrix::zeros(kd);
    for i in 0..dim {
        for j in 0..dim {
            // traced spins must agree between row and column
            let same_rest = (1..=n)
                .filter(|s| !left.contains(s))
                .all(|s| spin_bit(i, s, n) == spin_bit(j, s, n));
            if !same_rest {
                continue;
            }
            let a = left.iter().fold(0, |acc, &s| acc << 1 | spin_bit(i, s, n));
            let b = left.iter().fold(0, |acc, &s| acc << 1 | spin_bit(j, s, n));
            out.set(a, b, out.get(a, b) + rho.get(i, j));
        }
    }
    out
}
