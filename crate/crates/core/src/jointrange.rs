//! Joint numerical range of Hermitian tuples
//! `JW(H_1, ..., H_m) = {(x* H_1 x, ..., x* H_m x) : ||x|| = 1}`.
//!
//! The central question is whether the origin lies in the convex hull of the
//! joint range. `f(c) = lambda_min(sum_i c_i H_i)` is the support function of
//! that hull (from below), so the hull misses the origin iff `f(c) > 0` for
//! some direction `c`; conversely the eigenvectors returned by the oracle
//! supply points of the joint range that can be combined into a certificate.

use rand::Rng;

use crate::error::{Error, Result};
use crate::exec;
use crate::forms::{self, phase_combination};
use crate::linalg::{hermitian_eig, solve_dense, unit_vector, ComplexMatrix, HermitianMatrix, C64};
use crate::random::{random_unit_vector, rng_for};
use crate::settings::Settings;

const MAX_FORMS: usize = 4;
const ASCENT_STEPS: usize = 30;
const WOLFE_ITERS: usize = 400;
const LM_STEPS: usize = 500;
const PHASE_DRAWS: usize = 8;
const CONVEX_RESTARTS: usize = 128;

/// A sample of the joint range with the vectors that produced it.
#[derive(Debug, Clone)]
pub struct JointSample {
    pub points: Vec<Vec<f64>>,
    pub vectors: Vec<Vec<C64>>,
}

/// One point of the joint range used in a hull certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct HullWitness {
    pub vector: Vec<C64>,
    pub point: Vec<f64>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HullCertificate {
    /// The weighted points average to (numerically) zero: `residual` is the
    /// norm of `sum_j weight_j point_j`.
    InHull { witnesses: Vec<HullWitness>, residual: f64 },
    /// `sum_i separator_i H_i` is positive definite with smallest eigenvalue
    /// `margin`; `separator` is a unit vector.
    NotInHull { separator: Vec<f64>, margin: f64 },
}

impl HullCertificate {
    pub fn in_hull(&self) -> bool {
        matches!(self, HullCertificate::InHull { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsotropicWitness {
    pub vector: Vec<C64>,
    /// `sqrt(sum_i |x* M_i x|^2)`.
    pub residual: f64,
}

fn check_tuple(hs: &[HermitianMatrix]) -> Result<usize> {
    if hs.is_empty() || hs.len() > MAX_FORMS {
        return Err(Error::InvalidInput(format!("expected 1 to {MAX_FORMS} forms, got {}", hs.len())));
    }
    let n = hs[0].n();
    for h in hs {
        if h.n() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: h.n() });
        }
    }
    Ok(n)
}

fn tuple_scale(hs: &[HermitianMatrix]) -> f64 {
    hs.iter().map(HermitianMatrix::frobenius_norm).fold(0.0, f64::max)
}

fn point_of(hs: &[HermitianMatrix], x: &[C64]) -> Vec<f64> {
    hs.iter().map(|h| h.form(x)).collect()
}

fn vnorm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `count` Rayleigh points of the tuple at random unit vectors.
pub fn jnr_sample(hs: &[HermitianMatrix], count: usize, seed: u64) -> Result<JointSample> {
    let n = check_tuple(hs)?;
    let mut rng = rng_for(seed, 0x6a6e_7200);
    let vectors: Vec<Vec<C64>> = (0..count).map(|_| random_unit_vector(&mut rng, n)).collect();
    let points = vectors.iter().map(|x| point_of(hs, x)).collect();
    Ok(JointSample { points, vectors })
}

#[derive(Debug, Clone)]
struct Atom {
    point: Vec<f64>,
    vector: Vec<C64>,
}

struct HullOracle<'a> {
    hs: &'a [HermitianMatrix],
    refs: Vec<&'a HermitianMatrix>,
}

impl<'a> HullOracle<'a> {
    fn new(hs: &'a [HermitianMatrix]) -> Self {
        Self { hs, refs: hs.iter().collect() }
    }

    /// `(lambda_min(sum c_i H_i), argmin point)`.
    fn probe(&self, c: &[f64]) -> Result<(f64, Atom)> {
        let combo = HermitianMatrix::combination(c, &self.refs);
        let eig = hermitian_eig(&combo)?;
        let vector = eig.min_vector();
        let point = point_of(self.hs, &vector);
        Ok((eig.min(), Atom { point, vector }))
    }
}

/// Deterministic, well spread start directions (Halton sequence mapped to
/// the cube and projected to the sphere).
fn start_direction(index: usize, dim: usize, seed: u64) -> Vec<f64> {
    const PRIMES: [u64; MAX_FORMS] = [2, 3, 5, 7];
    let mut k = index as u64 + 1 + (seed % 1024) * 97;
    loop {
        let c: Vec<f64> = PRIMES[..dim].iter().map(|&p| 2.0 * radical_inverse(k, p) - 1.0).collect();
        let len = vnorm(&c);
        if len > 1e-3 {
            return c.iter().map(|v| v / len).collect();
        }
        k += 1;
    }
}

fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let (mut inv, mut out) = (1.0 / base as f64, 0.0);
    while k > 0 {
        out += (k % base) as f64 * inv;
        k /= base;
        inv /= base as f64;
    }
    out
}

struct Ascent {
    value: f64,
    direction: Vec<f64>,
    atoms: Vec<Atom>,
}

/// Projected supergradient ascent of `f` on the unit sphere.
fn ascend(oracle: &HullOracle, start: Vec<f64>, scale: f64, stop: f64) -> Result<Ascent> {
    let mut c = start;
    let (mut f, mut atom) = oracle.probe(&c)?;
    let mut atoms = vec![atom.clone()];
    let mut eta = 1.0 / scale;
    for _ in 0..ASCENT_STEPS {
        if f > stop {
            break;
        }
        let mut cand: Vec<f64> = c.iter().zip(&atom.point).map(|(ci, pi)| ci + eta * pi).collect();
        let len = vnorm(&cand);
        if len == 0.0 {
            break;
        }
        cand.iter_mut().for_each(|v| *v /= len);
        let (f2, atom2) = oracle.probe(&cand)?;
        atoms.push(atom2.clone());
        if f2 > f {
            c = cand;
            f = f2;
            atom = atom2;
            eta *= 1.5;
        } else {
            eta *= 0.3;
            if eta * scale < 1e-10 {
                break;
            }
        }
    }
    Ok(Ascent { value: f, direction: c, atoms })
}

/// Minimum-norm point of the affine hull of `pts`, as affine weights.
fn affine_min_norm(pts: &[&[f64]]) -> Option<Vec<f64>> {
    let k = pts.len();
    if k == 1 {
        return Some(vec![1.0]);
    }
    let base = pts[0];
    let dirs: Vec<Vec<f64>> = pts[1..].iter().map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    let d = k - 1;
    let mut gram = vec![0.0; d * d];
    let mut rhs = vec![0.0; d];
    for i in 0..d {
        for j in 0..d {
            gram[i * d + j] = dot(&dirs[i], &dirs[j]);
        }
        rhs[i] = -dot(&dirs[i], base);
    }
    let t = solve_dense(gram, rhs, d, 1e-12)?;
    let mut w = Vec::with_capacity(k);
    w.push(1.0 - t.iter().sum::<f64>());
    w.extend(t);
    Some(w)
}

fn combine(atoms: &[Atom], weights: &[f64], dim: usize) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    for (a, w) in atoms.iter().zip(weights) {
        for (xi, pi) in x.iter_mut().zip(&a.point) {
            *xi += w * pi;
        }
    }
    x
}

enum WolfeOutcome {
    InHull(Vec<Atom>, Vec<f64>, f64),
    Separated(Vec<f64>, f64),
    Stalled(Vec<Atom>, Vec<f64>, f64),
}

/// Wolfe's minimum-norm-point method with the eigenvalue oracle as the
/// linear minimisation step.
fn wolfe(oracle: &HullOracle, pool: &[Atom], dim: usize, tol: f64, separate: f64) -> Result<WolfeOutcome> {
    let first = pool
        .iter()
        .min_by(|a, b| vnorm(&a.point).total_cmp(&vnorm(&b.point)))
        .expect("non-empty pool")
        .clone();
    let mut corral = vec![first];
    let mut lambda = vec![1.0];
    let mut x = corral[0].point.clone();
    let mut best_margin = f64::NEG_INFINITY;

    for _ in 0..WOLFE_ITERS {
        let xn = vnorm(&x);
        if xn <= tol {
            return Ok(WolfeOutcome::InHull(corral, lambda, xn));
        }
        let c: Vec<f64> = x.iter().map(|v| v / xn).collect();
        let (f, q) = oracle.probe(&c)?;
        best_margin = best_margin.max(f);
        if f > separate {
            return Ok(WolfeOutcome::Separated(c, f));
        }
        // Optimality of x over the hull: x . q >= |x|^2.
        if xn * f >= xn * xn - 1e-14 * xn * xn.max(tol) || corral.len() > dim {
            return Ok(WolfeOutcome::Stalled(corral, lambda, best_margin));
        }
        corral.push(q);
        lambda.push(0.0);

        loop {
            let pts: Vec<&[f64]> = corral.iter().map(|a| a.point.as_slice()).collect();
            let Some(mu) = affine_min_norm(&pts) else {
                corral.pop();
                lambda.pop();
                return Ok(WolfeOutcome::Stalled(corral, lambda, best_margin));
            };
            if mu.iter().all(|&m| m > 1e-12) {
                lambda = mu;
                break;
            }
            let mut theta = 1.0f64;
            for (l, m) in lambda.iter().zip(&mu) {
                if *m <= 1e-12 && l - m > 0.0 {
                    theta = theta.min(l / (l - m));
                }
            }
            for (l, m) in lambda.iter_mut().zip(&mu) {
                *l = (1.0 - theta) * *l + theta * m;
            }
            let mut keep = Vec::new();
            let mut keep_l = Vec::new();
            for (a, l) in corral.drain(..).zip(lambda.drain(..)) {
                if l > 1e-12 {
                    keep.push(a);
                    keep_l.push(l);
                }
            }
            if keep.is_empty() {
                return Ok(WolfeOutcome::Stalled(vec![first_of(pool)], vec![1.0], best_margin));
            }
            let s: f64 = keep_l.iter().sum();
            keep_l.iter_mut().for_each(|l| *l /= s);
            corral = keep;
            lambda = keep_l;
        }
        x = combine(&corral, &lambda, dim);
    }
    Ok(WolfeOutcome::Stalled(corral, lambda, best_margin))
}

fn first_of(pool: &[Atom]) -> Atom {
    pool[0].clone()
}

/// Decides whether the origin lies in the convex hull of the joint range of
/// `hs` (between one and four forms).
pub fn zero_in_hull(hs: &[HermitianMatrix], settings: &Settings) -> Result<HullCertificate> {
    let n = check_tuple(hs)?;
    let dim = hs.len();
    let scale = tuple_scale(hs);
    if scale == 0.0 {
        let vector = unit_vector(n, 0);
        let point = vec![0.0; dim];
        return Ok(HullCertificate::InHull { witnesses: vec![HullWitness { vector, point, weight: 1.0 }], residual: 0.0 });
    }
    let tol = settings.tol * scale;
    let separate = 10.0 * tol;
    let oracle = HullOracle::new(hs);

    let runs: Vec<Result<Ascent>> = exec::map_indexed(settings.restarts.max(1), settings.parallel, |i| {
        ascend(&oracle, start_direction(i, dim, settings.seed), scale, separate)
    });
    let mut runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let best_ascent = runs
        .iter()
        .enumerate()
        .reduce(|a, b| if b.1.value > a.1.value { b } else { a })
        .map(|(i, _)| i)
        .expect("at least one restart");
    let best = runs.swap_remove(best_ascent);
    if best.value > separate {
        return Ok(HullCertificate::NotInHull { separator: best.direction, margin: best.value });
    }
    let mut pool: Vec<Atom> = best.atoms.clone();
    for r in runs {
        pool.extend(r.atoms);
    }
    if let Some(a) = pool.iter().find(|a| vnorm(&a.point) <= tol) {
        let residual = vnorm(&a.point);
        return Ok(single(a.vector.clone(), a.point.clone(), residual));
    }

    let (corral, weights, margin) = match wolfe(&oracle, &pool, dim, tol, separate)? {
        WolfeOutcome::InHull(corral, weights, residual) => {
            let witnesses = corral
                .into_iter()
                .zip(weights)
                .map(|(a, weight)| HullWitness { vector: a.vector, point: a.point, weight })
                .collect();
            return Ok(HullCertificate::InHull { witnesses, residual });
        }
        WolfeOutcome::Separated(separator, margin) => return Ok(HullCertificate::NotInHull { separator, margin }),
        WolfeOutcome::Stalled(corral, weights, margin) => (corral, weights, margin.max(best.value)),
    };

    let mut starts: Vec<Vec<C64>> = Vec::new();
    let vectors: Vec<Vec<C64>> = corral.iter().map(|a| a.vector.clone()).collect();
    let mut rng = rng_for(settings.seed, 0x6875_6c6c);
    for _ in 0..PHASE_DRAWS {
        let phases: Vec<f64> = (0..vectors.len()).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect();
        starts.push(phase_combination(&vectors, &weights, &phases));
    }
    let mut near: Vec<&Atom> = pool.iter().collect();
    near.sort_by(|a, b| vnorm(&a.point).total_cmp(&vnorm(&b.point)));
    starts.extend(near.iter().take(4).map(|a| a.vector.clone()));
    starts.push(best.atoms[0].vector.clone());

    let refs: Vec<&HermitianMatrix> = hs.iter().collect();
    let found = exec::find_first(starts.len(), settings.parallel, |i| {
        let out = forms::polish(&refs, &starts[i], 1e-3 * tol, LM_STEPS);
        (out.residual <= tol).then_some(out)
    });
    if let Some(out) = found {
        let point = point_of(hs, &out.vector);
        return Ok(single(out.vector, point, out.residual));
    }
    Err(Error::Indeterminate { margin })
}

fn single(vector: Vec<C64>, point: Vec<f64>, residual: f64) -> HullCertificate {
    HullCertificate::InHull { witnesses: vec![HullWitness { vector, point, weight: 1.0 }], residual }
}

/// A unit `x` with `x* H_i x = 0` for all three forms, assuming the origin
/// is in their joint range and `n >= 3` (where the joint range is convex).
pub fn zero_point_recovery_convex(hs: &[HermitianMatrix; 3], settings: &Settings) -> Result<Vec<C64>> {
    let n = check_tuple(hs)?;
    if n < 3 {
        return Err(Error::InvalidInput(format!("convexity needs n >= 3, got {n}")));
    }
    let scale = tuple_scale(hs);
    if scale == 0.0 {
        return Ok(unit_vector(n, 0));
    }
    let tol = settings.tol * scale;
    let refs: Vec<&HermitianMatrix> = hs.iter().collect();
    let mut starts: Vec<Vec<C64>> = Vec::new();
    match zero_in_hull(hs, settings) {
        Ok(HullCertificate::NotInHull { margin, .. }) => {
            return Err(Error::InvalidInput(format!("origin is separated from the joint range (margin {margin:.3e})")));
        }
        Ok(HullCertificate::InHull { witnesses, .. }) => {
            if let [w] = witnesses.as_slice() {
                if vnorm(&w.point) <= tol {
                    return Ok(w.vector.clone());
                }
            }
            let vectors: Vec<Vec<C64>> = witnesses.iter().map(|w| w.vector.clone()).collect();
            let weights: Vec<f64> = witnesses.iter().map(|w| w.weight).collect();
            let mut rng = rng_for(settings.seed, 0x636f_6e76);
            for _ in 0..2 * PHASE_DRAWS {
                let phases: Vec<f64> = (0..vectors.len()).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect();
                starts.push(phase_combination(&vectors, &weights, &phases));
            }
        }
        Err(Error::Indeterminate { .. }) => {}
        Err(e) => return Err(e),
    }
    let fixed = starts.len();
    let found = exec::find_first(fixed + CONVEX_RESTARTS, settings.parallel, |i| {
        let start = if i < fixed {
            starts[i].clone()
        } else {
            let mut rng = rng_for(settings.seed, 0x6c6d_0000 + i as u64);
            random_unit_vector(&mut rng, n)
        };
        let out = forms::polish(&refs, &start, 1e-3 * tol, LM_STEPS);
        (out.residual <= tol).then_some(out.vector)
    });
    found.ok_or_else(|| {
        let residual = forms::residual_norm(&refs, &starts.first().cloned().unwrap_or_else(|| unit_vector(n, 0)));
        Error::FailedRecovery { residual, tol }
    })
}

/// Searches for a common isotropic vector `x* M_i x = 0` of general complex
/// matrices by restarted Gauss-Newton on their Hermitian and skew parts.
/// Returns `None` if no restart reaches `tol * max ||M_i||_F`.
pub fn isotropic_minimize(ms: &[ComplexMatrix], settings: &Settings) -> Result<Option<IsotropicWitness>> {
    let Some(first) = ms.first() else {
        return Err(Error::InvalidInput("no matrices given".into()));
    };
    let n = first.n();
    for m in ms {
        if m.n() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: m.n() });
        }
    }
    let scale = ms.iter().map(ComplexMatrix::frobenius_norm).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(Some(IsotropicWitness { vector: unit_vector(n, 0), residual: 0.0 }));
    }
    let tol = settings.tol * scale;
    let parts: Vec<HermitianMatrix> = ms
        .iter()
        .flat_map(|m| {
            let (h, k) = crate::linalg::cartesian_split(m);
            [h, k]
        })
        .collect();
    let refs: Vec<&HermitianMatrix> = parts.iter().collect();
    let found = exec::find_first(settings.restarts.max(1), settings.parallel, |i| {
        let mut rng = rng_for(settings.seed, 0x6973_0000 + i as u64);
        let start = random_unit_vector(&mut rng, n);
        let out = forms::polish(&refs, &start, 1e-3 * tol, LM_STEPS);
        (out.residual <= tol).then_some(IsotropicWitness { vector: out.vector, residual: out.residual })
    });
    Ok(found)
}
