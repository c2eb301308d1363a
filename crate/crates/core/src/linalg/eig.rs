//! Cyclic complex Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real Jacobi rotation to the resulting
//! real symmetric 2x2 block. Desk-scale sizes only (n up to a few hundred).

use super::matrix::{ComplexMatrix, HermitianMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    pub fn min_vector(&self) -> Vec<C64> {
        self.vector(0)
    }

    pub fn max_vector(&self) -> Vec<C64> {
        self.vector(self.eigenvalues.len() - 1)
    }
}

pub fn hermitian_eig(h: &HermitianMatrix) -> Result<EigenDecomposition> {
    let m = h.as_matrix();
    let n = m.n();
    if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("non-finite entries in eigenproblem".into()));
    }
    let mut a: Vec<C64> = m.as_slice().to_vec();
    let mut v = vec![ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = ONE;
    }

    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off <= 1e-32 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // Past the first few sweeps, drop pivots that no longer
                // change the diagonal at working precision.
                if sweep > 3 && app.abs() + 100.0 * r == app.abs() && aqq.abs() + 100.0 * r == aqq.abs() {
                    a[p * n + q] = ZERO;
                    a[q * n + p] = ZERO;
                    continue;
                }
                let phase = apq / r;
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let ce = phase.conj();

                // Columns p, q: A <- A G.
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * ce * s;
                    a[k * n + q] = akp * s + akq * ce * c;
                }
                // Rows p, q: A <- G* A.
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * phase * s;
                    a[q * n + k] = apk * s + aqk * phase * c;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = C64::new(app - t * r, 0.0);
                a[q * n + q] = C64::new(aqq + t * r, 0.0);

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c - vkq * ce * s;
                    v[k * n + q] = vkp * s + vkq * ce * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col: Vec<C64> = (0..n).map(|k| v[k * n + src]).collect();
        normalize_phase(&mut col);
        vectors.set_column(dst, &col);
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Rotates the phase so the first component of non-negligible modulus is
/// real and positive. Makes eigenvector output canonical for a fixed input.
pub(crate) fn normalize_phase(x: &mut [C64]) {
    if let Some(lead) = x.iter().find(|z| z.norm() > 1e-10).copied() {
        let rot = lead.conj() / lead.norm();
        for z in x.iter_mut() {
            *z *= rot;
        }
    }
}

/// Smallest and largest eigenvalue, i.e. the ends of `W(H)`.
pub fn lambda_extremes(h: &HermitianMatrix) -> Result<(f64, f64)> {
    let eig = hermitian_eig(h)?;
    Ok((eig.min(), eig.max()))
}

/// `H^{-1/2}` for positive definite `H`; `tol` is relative to `||H||_F`.
pub fn inv_sqrt_pd(h: &HermitianMatrix, tol: f64) -> Result<HermitianMatrix> {
    let eig = hermitian_eig(h)?;
    let scale = h.frobenius_norm();
    if eig.min().is_nan() || eig.min() <= tol * scale {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: eig.min(),
        });
    }
    Ok(spectral_function(&eig, |l| 1.0 / l.sqrt()))
}

/// Projection onto the positive semidefinite cone (negative eigenvalues clipped).
pub fn psd_projection(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = hermitian_eig(h)?;
    Ok(spectral_function(&eig, |l| l.max(0.0)))
}

/// `V f(Lambda) V*`.
pub fn spectral_function(eig: &EigenDecomposition, f: impl Fn(f64) -> f64) -> HermitianMatrix {
    let v = &eig.eigenvectors;
    let n = v.n();
    let vals: Vec<f64> = eig.eigenvalues.iter().map(|&l| f(l)).collect();
    let m = ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| v[(i, k)] * vals[k] * v[(j, k)].conj()).sum());
    HermitianMatrix::hermitian_part(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::inner;
    use crate::random::{random_hermitian, random_unitary, rng_for};

    fn residual(h: &HermitianMatrix, e: &EigenDecomposition) -> f64 {
        let n = h.n();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let x = e.vector(k);
            let hx = h.as_matrix().mul_vec(&x);
            let r: f64 = hx.iter().zip(&x).map(|(a, b)| (a - b * e.eigenvalues[k]).norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(r);
        }
        worst
    }

    fn orthonormality_defect(e: &EigenDecomposition) -> f64 {
        let n = e.eigenvalues.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = inner(&e.vector(i), &e.vector(j)) - if i == j { ONE } else { ZERO };
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    #[test]
    fn diagonal_and_swap() {
        let e = hermitian_eig(&HermitianMatrix::from_real_diag(&[2.0, -1.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 2.0]);
        let x = HermitianMatrix::new(ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()).unwrap();
        let e = hermitian_eig(&x).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15 && (e.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    /// Roots of the real cubic `det(tI - H)` by the trigonometric method.
    fn cubic_oracle(h: &HermitianMatrix) -> [f64; 3] {
        let m = h.as_matrix();
        let a = |i: usize, j: usize| m[(i, j)];
        let tr = (a(0, 0) + a(1, 1) + a(2, 2)).re;
        let minors = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0) + a(1, 1) * a(2, 2)
            - a(1, 2) * a(2, 1))
        .re;
        let det = (a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)))
        .re;
        // t^3 - tr t^2 + minors t - det; shift t = s + tr/3.
        let p = minors - tr * tr / 3.0;
        let q = -2.0 * tr.powi(3) / 27.0 + tr * minors / 3.0 - det;
        let r = (-p / 3.0).sqrt();
        let phi = ((-q / 2.0) / r.powi(3)).clamp(-1.0, 1.0).acos();
        let mut roots = [0.0; 3];
        for (k, root) in roots.iter_mut().enumerate() {
            *root = 2.0 * r * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos() + tr / 3.0;
        }
        roots.sort_by(f64::total_cmp);
        roots
    }

    #[test]
    fn random_three_by_three_matches_cubic_roots() {
        let mut rng = rng_for(11, 0);
        for _ in 0..50 {
            let h = random_hermitian(&mut rng, 3);
            let e = hermitian_eig(&h).unwrap();
            let oracle = cubic_oracle(&h);
            for (got, want) in e.eigenvalues.iter().zip(oracle) {
                assert!((got - want).abs() < 1e-8, "{got} vs {want}");
            }
        }
    }

    #[test]
    fn residual_and_orthonormality() {
        let mut rng = rng_for(5, 1);
        for n in [1, 2, 3, 5, 8, 17, 40] {
            let h = random_hermitian(&mut rng, n);
            let e = hermitian_eig(&h).unwrap();
            let scale = h.frobenius_norm();
            assert!(residual(&h, &e) <= 1e-10 * scale, "n={n}");
            assert!(orthonormality_defect(&e) <= 1e-10, "n={n}");
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn unitary_invariance() {
        let mut rng = rng_for(6, 2);
        for n in [2, 4, 7] {
            let h = random_hermitian(&mut rng, n);
            let u = random_unitary(&mut rng, n);
            let e1 = hermitian_eig(&h).unwrap();
            let e2 = hermitian_eig(&h.congruence(&u)).unwrap();
            for (a, b) in e1.eigenvalues.iter().zip(&e2.eigenvalues) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let mut rng = rng_for(7, 3);
        let u = random_unitary(&mut rng, 5);
        let h = HermitianMatrix::from_real_diag(&[1.0, 1.0, 1.0, -2.0, -2.0]).congruence(&u);
        let e = hermitian_eig(&h).unwrap();
        assert!(residual(&h, &e) < 1e-12);
        assert!(orthonormality_defect(&e) < 1e-12);
    }

    #[test]
    fn inverse_square_root() {
        let s = inv_sqrt_pd(&HermitianMatrix::identity(3), 1e-12).unwrap();
        assert!((s.as_matrix() - &ComplexMatrix::identity(3)).max_abs() < 1e-14);
        let s = inv_sqrt_pd(&HermitianMatrix::from_real_diag(&[4.0, 9.0]), 1e-12).unwrap();
        assert!((s.as_matrix() - &ComplexMatrix::from_real_diag(&[0.5, 1.0 / 3.0])).max_abs() < 1e-14);

        let mut rng = rng_for(8, 4);
        for _ in 0..20 {
            let g = random_hermitian(&mut rng, 3);
            let pd = HermitianMatrix::hermitian_part(&(g.as_matrix() * g.as_matrix())).add(&HermitianMatrix::identity(3).scale(0.1));
            let s = inv_sqrt_pd(&pd, 1e-12).unwrap();
            let prod = &(s.as_matrix() * pd.as_matrix()) * s.as_matrix();
            assert!((&prod - &ComplexMatrix::identity(3)).max_abs() < 1e-9 * pd.frobenius_norm());
            assert!(hermitian_eig(&s).unwrap().min() > 0.0);
        }

        let err = inv_sqrt_pd(&HermitianMatrix::from_real_diag(&[1.0, -1.0]), 1e-12).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { .. }));
    }

    #[test]
    fn extremes() {
        assert_eq!(lambda_extremes(&HermitianMatrix::from_real_diag(&[1.0, 2.0])).unwrap(), (1.0, 2.0));
        let mut rng = rng_for(9, 5);
        let h = random_hermitian(&mut rng, 6);
        let e = hermitian_eig(&h).unwrap();
        assert_eq!(lambda_extremes(&h).unwrap(), (e.min(), e.max()));
    }
}
