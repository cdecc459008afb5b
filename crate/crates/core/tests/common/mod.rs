//! Reference computations for the property tests. Everything here works on
//! plain nested `Vec`s with explicit index loops so it shares no code path
//! with the library beyond the input types.
#![allow(dead_code)]

use num_complex::Complex64;
use premeasure_core::{Ket64, Operator64, Vector64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dense(op: &Operator64) -> Vec<Vec<Complex64>> {
    op.rows().map(|r| r.to_vec()).collect()
}

pub fn vec_of(v: &Vector64) -> Vec<Complex64> {
    v.amplitudes().to_vec()
}

pub fn matvec(m: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() * b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

pub fn kron(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let (da, db) = (a.len(), b.len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); da * db]; da * db];
    for i in 0..da * db {
        for j in 0..da * db {
            out[i][j] = a[i / db][j / db] * b[i % db][j % db];
        }
    }
    out
}

pub fn identity(n: usize) -> Vec<Vec<Complex64>> {
    (0..n)
        .map(|i| (0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect()
}

pub fn trace(m: &[Vec<Complex64>]) -> Complex64 {
    (0..m.len()).map(|i| m[i][i]).sum()
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_diff(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `⟨v|M|v⟩` by explicit double sum.
pub fn expectation(m: &[Vec<Complex64>], v: &[Complex64]) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..v.len() {
        for j in 0..v.len() {
            acc += v[i].conj() * m[i][j] * v[j];
        }
    }
    acc.re
}

/// Partial trace over the second factor from the defining identity
/// `tr(Tr_B(ρ) X) = tr(ρ (X ⊗ I))` with `X = |j⟩⟨i|`.
pub fn partial_trace_second_by_duality(rho: &[Vec<Complex64>], da: usize, db: usize) -> Vec<Vec<Complex64>> {
    let mut out = vec![vec![Complex64::new(0.0, 0.0); da]; da];
    for i in 0..da {
        for j in 0..da {
            let mut x = vec![vec![Complex64::new(0.0, 0.0); da]; da];
            x[j][i] = Complex64::new(1.0, 0.0);
            out[i][j] = trace(&matmul(rho, &kron(&x, &identity(db))));
        }
    }
    out
}

/// Same for the first factor.
pub fn partial_trace_first_by_duality(rho: &[Vec<Complex64>], da: usize, db: usize) -> Vec<Vec<Complex64>> {
    let mut out = vec![vec![Complex64::new(0.0, 0.0); db]; db];
    for i in 0..db {
        for j in 0..db {
            let mut x = vec![vec![Complex64::new(0.0, 0.0); db]; db];
            x[j][i] = Complex64::new(1.0, 0.0);
            out[i][j] = trace(&matmul(rho, &kron(&identity(da), &x)));
        }
    }
    out
}

pub fn ket_vec(k: &Ket64) -> Vec<Complex64> {
    k.amplitudes().to_vec()
}
