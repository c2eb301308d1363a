//! Seeded random generators for vectors and matrices.
//!
//! Every randomized routine draws from a ChaCha stream keyed by
//! `(seed, stream)`, so results are reproducible and independent of the
//! order in which parallel work items run.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{normalize, ComplexMatrix, HermitianMatrix, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng_for(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Uniform on the unit sphere of `C^n` (normalized complex Gaussian).
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let mut v = complex_gaussian_vector(rng, n);
        if normalize(&mut v) > 1e-12 {
            return v;
        }
    }
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_complex_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(&random_complex_matrix(rng, n))
}

/// Haar-distributed unitary via Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let g = random_complex_matrix(rng, n);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v = g.column(j);
            for _ in 0..2 {
                for q in &cols {
                    let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= proj * qi;
                    }
                }
            }
            if normalize(&mut v) < 1e-8 {
                ok = false;
                break;
            }
            cols.push(v);
        }
        if ok {
            let mut u = ComplexMatrix::zeros(n);
            for (j, c) in cols.iter().enumerate() {
                u.set_column(j, c);
            }
            return u;
        }
    }
}

/// Nonsingular matrix `U diag(s) V` with singular values spread
/// log-uniformly over `[1, cond]`, so its condition number is at most `cond`.
pub fn random_nonsingular<R: Rng + ?Sized>(rng: &mut R, n: usize, cond: f64) -> ComplexMatrix {
    let u = random_unitary(rng, n);
    let v = random_unitary(rng, n);
    let mut s: Vec<f64> = (0..n).map(|_| cond.powf(rng.random::<f64>())).collect();
    if n > 1 {
        s[0] = 1.0;
        s[n - 1] = cond;
    }
    let d = ComplexMatrix::from_real_diag(&s);
    &(&u * &d) * &v
}

/// Random positive semidefinite matrix of the given rank whose kernel contains
/// every vector in `kernel` (which must be orthonormal).
pub fn random_psd_with_kernel<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize, kernel: &[Vec<C64>]) -> HermitianMatrix {
    let mut acc = ComplexMatrix::zeros(n);
    for _ in 0..rank {
        let mut g = complex_gaussian_vector(rng, n);
        for w in kernel {
            let proj: C64 = w.iter().zip(&g).map(|(a, b)| a.conj() * b).sum();
            for (gi, wi) in g.iter_mut().zip(w) {
                *gi -= proj * wi;
            }
        }
        let outer = ComplexMatrix::from_fn(n, |i, j| g[i] * g[j].conj());
        acc = &acc + &outer;
    }
    HermitianMatrix::hermitian_part(&acc)
}

