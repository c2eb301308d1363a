//! Driving a family of Hermitian quadratic forms to zero on the unit sphere.
//!
//! For unit `v` the residuals are `r_i(v) = v* H_i v`. The real gradient of
//! `r_i` restricted to the sphere is `g_i = 2 (H_i v - r_i v)`, so each
//! Levenberg-Marquardt step solves the small system `(G + mu I) y = r` with
//! `G_ij = Re <g_i, g_j>` and moves along `-sum_i y_i g_i`, the minimum-norm
//! Gauss-Newton direction.
//!
//! A semidefinite form vanishes only where it does so to second order, which
//! stalls Gauss-Newton. Such forms are replaced by the linear residual
//! `S v` with `S = |H|^(1/2)`, which has the same zeros.

use crate::linalg::{hermitian_eig, inner, norm, normalize, solve_dense, spectral_function, HermitianMatrix, C64};

/// Relative size of negative eigenvalues tolerated in a semidefinite form.
const SEMIDEFINITE_SLACK: f64 = 1e-10;

#[derive(Debug, Clone)]
pub(crate) struct Polished {
    pub vector: Vec<C64>,
    /// Euclidean norm of the residual vector `(v* H_i v)_i`.
    pub residual: f64,
}

pub(crate) fn residuals(mats: &[&HermitianMatrix], v: &[C64]) -> Vec<f64> {
    mats.iter().map(|h| h.form(v)).collect()
}

pub(crate) fn residual_norm(mats: &[&HermitianMatrix], v: &[C64]) -> f64 {
    residuals(mats, v).iter().map(|r| r * r).sum::<f64>().sqrt()
}

enum Term<'a> {
    Form(&'a HermitianMatrix),
    /// Square root of the absolute value of a semidefinite form.
    Root(HermitianMatrix),
}

fn terms<'a>(mats: &[&'a HermitianMatrix]) -> Vec<Term<'a>> {
    mats.iter()
        .map(|&h| {
            let Ok(eig) = hermitian_eig(h) else {
                return Term::Form(h);
            };
            let big = eig.min().abs().max(eig.max().abs());
            let slack = SEMIDEFINITE_SLACK * big;
            if big == 0.0 {
                Term::Form(h)
            } else if eig.min() >= -slack {
                Term::Root(spectral_function(&eig, |l| l.max(0.0).sqrt()))
            } else if eig.max() <= slack {
                Term::Root(spectral_function(&eig, |l| (-l).max(0.0).sqrt()))
            } else {
                Term::Form(h)
            }
        })
        .collect()
}

struct State {
    v: Vec<C64>,
    /// Residuals and their tangent gradients.
    r: Vec<f64>,
    grads: Vec<Vec<C64>>,
    f: f64,
}

fn project(mut g: Vec<C64>, v: &[C64]) -> Vec<C64> {
    let along = inner(v, &g).re;
    for (gi, vi) in g.iter_mut().zip(v) {
        *gi -= vi * along;
    }
    g
}

fn evaluate(terms: &[Term], v: Vec<C64>) -> State {
    let mut r = Vec::new();
    let mut grads = Vec::new();
    for t in terms {
        match t {
            Term::Form(h) => {
                let hv = h.as_matrix().mul_vec(&v);
                let ri = inner(&v, &hv).re;
                grads.push(hv.iter().zip(&v).map(|(a, b)| (a - b * ri) * 2.0).collect());
                r.push(ri);
            }
            Term::Root(s) => {
                let sv = s.as_matrix().mul_vec(&v);
                for (k, z) in sv.iter().enumerate() {
                    // d(Sv)_k = sum_j S_kj dv_j; S is Hermitian, so the
                    // gradient of its real part is column k of S.
                    let col = s.as_matrix().column(k);
                    let imag: Vec<C64> = col.iter().map(|c| c * C64::new(0.0, 1.0)).collect();
                    grads.push(project(col, &v));
                    r.push(z.re);
                    grads.push(project(imag, &v));
                    r.push(z.im);
                }
            }
        }
    }
    let f = r.iter().map(|x| x * x).sum();
    State { v, r, grads, f }
}

/// Runs damped Gauss-Newton from `start` until the residual norm drops to
/// `target`, progress stalls, or `max_iter` steps pass. Semidefinite forms
/// are first handled through their square roots; the plain residuals then
/// finish from wherever that leaves off.
pub(crate) fn polish(mats: &[&HermitianMatrix], start: &[C64], target: f64, max_iter: usize) -> Polished {
    let mut v = start.to_vec();
    if normalize(&mut v) == 0.0 || mats.is_empty() {
        let residual = if mats.is_empty() { 0.0 } else { f64::INFINITY };
        return Polished { vector: v, residual };
    }
    let rooted = terms(mats);
    let mut best = if rooted.iter().any(|t| matches!(t, Term::Root(_))) {
        descend(mats, &rooted, v, target, max_iter)
    } else {
        Polished { residual: residual_norm(mats, &v), vector: v }
    };
    if best.residual > target {
        let plain: Vec<Term> = mats.iter().map(|&h| Term::Form(h)).collect();
        let next = descend(mats, &plain, best.vector.clone(), target, max_iter);
        if next.residual < best.residual {
            best = next;
        }
    }
    best
}

fn descend(mats: &[&HermitianMatrix], terms: &[Term], v: Vec<C64>, target: f64, max_iter: usize) -> Polished {
    let mut st = evaluate(terms, v);
    let mut mu = -1.0;
    let mut slow = 0;

    for _ in 0..max_iter {
        if residual_norm(mats, &st.v) <= target {
            break;
        }
        let m = st.r.len();
        let mut gram = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let g = inner(&st.grads[i], &st.grads[j]).re;
                gram[i * m + j] = g;
                gram[j * m + i] = g;
            }
        }
        let trace: f64 = (0..m).map(|i| gram[i * m + i]).sum::<f64>() / m as f64;
        if mu < 0.0 {
            mu = 1e-10 * trace.max(f64::MIN_POSITIVE);
        }

        let mut accepted = None;
        for _ in 0..40 {
            let mut a = gram.clone();
            for i in 0..m {
                a[i * m + i] += mu;
            }
            let Some(y) = solve_dense(a, st.r.clone(), m, 1e-300) else {
                mu = mu * 10.0 + 1e-300;
                continue;
            };
            let mut cand = st.v.clone();
            for (g, yi) in st.grads.iter().zip(&y) {
                for (c, gi) in cand.iter_mut().zip(g) {
                    *c -= gi * *yi;
                }
            }
            if normalize(&mut cand) == 0.0 {
                mu *= 10.0;
                continue;
            }
            let next = evaluate(terms, cand);
            if next.f < st.f {
                mu = (mu / 3.0).max(1e-300);
                accepted = Some(next);
                break;
            }
            mu *= 4.0;
            if mu > 1e30 * trace.max(1.0) {
                break;
            }
        }
        match accepted {
            Some(next) => {
                if next.f > st.f * (1.0 - 1e-4) {
                    slow += 1;
                } else {
                    slow = 0;
                }
                st = next;
                if slow >= 12 {
                    break;
                }
            }
            None => break,
        }
    }
    let residual = residual_norm(mats, &st.v);
    Polished { vector: st.v, residual }
}

/// Combines weighted vectors with the given phases: `sum_j sqrt(w_j) e^{i phi_j} x_j`.
/// Averaged over phases, the cross terms vanish and the form values equal
/// the weighted average of the individual values.
pub(crate) fn phase_combination(vectors: &[Vec<C64>], weights: &[f64], phases: &[f64]) -> Vec<C64> {
    let n = vectors[0].len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for ((x, &w), &phi) in vectors.iter().zip(weights).zip(phases) {
        let coef = C64::from_polar(w.max(0.0).sqrt(), phi);
        for (o, xi) in out.iter_mut().zip(x) {
            *o += coef * xi;
        }
    }
    if norm(&out) == 0.0 {
        out.clone_from(&vectors[0]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::normalized;
    use crate::random::{random_psd_with_kernel, random_unit_vector, rng_for};

    #[test]
    fn converges_to_isotropic_vector_of_indefinite_diagonals() {
        let a = HermitianMatrix::from_real_diag(&[1.0, -1.0, 0.5]);
        let b = HermitianMatrix::from_real_diag(&[0.0, 1.0, -2.0]);
        let mut rng = rng_for(1, 0);
        let start = random_unit_vector(&mut rng, 3);
        let out = polish(&[&a, &b], &start, 1e-14, 200);
        assert!(out.residual < 1e-13, "{}", out.residual);
        assert!((norm(&out.vector) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn handles_semidefinite_forms_with_common_kernel() {
        let mut rng = rng_for(2, 0);
        let w = random_unit_vector(&mut rng, 4);
        let r1 = random_psd_with_kernel(&mut rng, 4, 3, std::slice::from_ref(&w));
        let r2 = random_psd_with_kernel(&mut rng, 4, 2, std::slice::from_ref(&w));
        let mut start = w.clone();
        start[0] += C64::new(0.05, -0.02);
        let out = polish(&[&r1, &r2], &start, 1e-12, 300);
        assert!(out.residual < 1e-12, "{}", out.residual);
    }

    #[test]
    fn reaches_degenerate_zero_of_mixed_forms() {
        // Two semidefinite forms with a two-dimensional common kernel plus
        // two indefinite forms vanishing at a kernel vector.
        let mut rng = rng_for(3, 0);
        let n = 5;
        let w = random_unit_vector(&mut rng, n);
        let u = {
            let mut g = random_unit_vector(&mut rng, n);
            let p = inner(&w, &g);
            for (gi, wi) in g.iter_mut().zip(&w) {
                *gi -= p * wi;
            }
            normalized(&g)
        };
        let kernel = [w.clone(), u];
        let r1 = random_psd_with_kernel(&mut rng, n, 2, &kernel);
        let r2 = random_psd_with_kernel(&mut rng, n, 2, &kernel);
        // Indefinite forms with the w-diagonal entry removed.
        let vanishing_at_w = |rng: &mut crate::random::SeededRng| {
            let g = crate::random::random_hermitian(rng, n);
            let q = g.form(&w);
            g.sub(&HermitianMatrix::hermitian_part(&crate::linalg::ComplexMatrix::from_fn(n, |i, j| w[i] * w[j].conj() * q)))
        };
        let k1 = vanishing_at_w(&mut rng);
        let k2 = vanishing_at_w(&mut rng);
        let hits = (0..20)
            .filter(|_| {
                let start = random_unit_vector(&mut rng, n);
                polish(&[&r1, &k1, &r2, &k2], &start, 1e-13, 500).residual < 1e-12
            })
            .count();
        assert!(hits >= 16, "{hits}");
    }

    #[test]
    fn stays_put_when_no_zero_exists() {
        let id = HermitianMatrix::identity(3);
        let start = normalized(&[C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.5, 0.5)]);
        let out = polish(&[&id], &start, 1e-12, 50);
        assert!((out.residual - 1.0).abs() < 1e-12);
    }
}
