//! Numerical range of a single complex matrix: support points, boundary
//! polygons, the decision `0 in W(M)` and recovery of a vector `x` with
//! `x* M x = 0`.
//!
//! Everything is driven by the support function. For an angle `theta`,
//! `g(theta) = lambda_min(Re(e^{i theta} M))` is the smallest value of
//! `Re(e^{i theta} z)` over `z in W(M)`, attained at the Rayleigh point of the
//! corresponding eigenvector. Zero lies outside `W(M)` exactly when some `g`
//! is positive.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::exec;
use crate::forms::{self, Polished};
use crate::linalg::{
    cartesian_split, hermitian_eig, inner, normalize, normalized, rayleigh, unit_vector, ComplexMatrix,
    HermitianMatrix, C64,
};
use crate::random::{random_unit_vector, rng_for};
use crate::settings::Settings;

const COARSE_ANGLES: usize = 16;
const GOLDEN_STEPS: usize = 48;
const LM_STEPS: usize = 400;

/// Outcome of [`contains_zero`].
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroInclusion {
    /// `witness` is a unit vector with `|witness* M witness| <= tol * ||M||_F`.
    Inside { witness: Vec<C64> },
    /// `Re(e^{i separator} z) >= margin > 0` for every `z` in the range.
    Outside { separator: f64, margin: f64 },
}

impl ZeroInclusion {
    pub fn is_inside(&self) -> bool {
        matches!(self, ZeroInclusion::Inside { .. })
    }
}

#[derive(Debug, Clone)]
pub struct BoundaryPolygon {
    pub vertices: Vec<C64>,
    pub angles: Vec<f64>,
}

impl BoundaryPolygon {
    /// Signed area by the shoelace formula.
    pub fn area(&self) -> f64 {
        let k = self.vertices.len();
        (0..k)
            .map(|j| {
                let (p, q) = (self.vertices[j], self.vertices[(j + 1) % k]);
                p.re * q.im - p.im * q.re
            })
            .sum::<f64>()
            / 2.0
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Probe {
    pub angle: f64,
    /// `lambda_min(Re(e^{i angle} M))`.
    pub value: f64,
    pub vector: Vec<C64>,
    pub point: C64,
}

/// Caches the Cartesian split so each probe is one Hermitian eigenproblem.
pub(crate) struct RangeOracle<'a> {
    m: &'a ComplexMatrix,
    h: HermitianMatrix,
    k: HermitianMatrix,
    pub scale: f64,
}

impl<'a> RangeOracle<'a> {
    pub fn new(m: &'a ComplexMatrix) -> Self {
        let (h, k) = cartesian_split(m);
        Self { m, h, k, scale: m.frobenius_norm() }
    }

    /// `Re(e^{i theta} M) = cos(theta) H - sin(theta) K`.
    pub fn probe(&self, angle: f64) -> Result<Probe> {
        let rot = HermitianMatrix::combination(&[angle.cos(), -angle.sin()], &[&self.h, &self.k]);
        let eig = hermitian_eig(&rot)?;
        let vector = eig.min_vector();
        let point = rayleigh(self.m, &vector)?;
        Ok(Probe { angle, value: eig.min(), vector, point })
    }

    fn grid(&self, count: usize, parallel: bool) -> Result<Vec<Probe>> {
        exec::map_indexed(count, parallel, |j| self.probe(TAU * j as f64 / count as f64))
            .into_iter()
            .collect()
    }

    /// Golden-section maximisation of `g` on `[lo, hi]`, starting from the
    /// best grid probe.
    fn refine(&self, best: &Probe, step: f64) -> Result<Probe> {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut lo, mut hi) = (best.angle - step, best.angle + step);
        let mut x1 = hi - inv_phi * (hi - lo);
        let mut x2 = lo + inv_phi * (hi - lo);
        let mut p1 = self.probe(x1)?;
        let mut p2 = self.probe(x2)?;
        let mut top = best.clone();
        for _ in 0..GOLDEN_STEPS {
            for p in [&p1, &p2] {
                if p.value > top.value {
                    top = p.clone();
                }
            }
            if p1.value >= p2.value {
                hi = x2;
                x2 = x1;
                p2 = p1;
                x1 = hi - inv_phi * (hi - lo);
                p1 = self.probe(x1)?;
            } else {
                lo = x1;
                x1 = x2;
                p1 = p2;
                x2 = lo + inv_phi * (hi - lo);
                p2 = self.probe(x2)?;
            }
        }
        for p in [p1, p2] {
            if p.value > top.value {
                top = p;
            }
        }
        Ok(top)
    }

    fn forms(&self) -> [&HermitianMatrix; 2] {
        [&self.h, &self.k]
    }
}

/// Point of `W(M)` extremal in direction `e^{i theta}`: the Rayleigh quotient
/// of the top eigenvector of `Re(e^{-i theta} M)`.
pub fn support_point(m: &ComplexMatrix, theta: f64) -> Result<C64> {
    let oracle = RangeOracle::new(m);
    Ok(oracle.probe(PI - theta)?.point)
}

/// Support points at `k` equally spaced directions, counter-clockwise.
pub fn boundary_polygon(m: &ComplexMatrix, k: usize) -> Result<BoundaryPolygon> {
    if k < 3 {
        return Err(Error::InvalidInput(format!("boundary polygon needs at least 3 vertices, got {k}")));
    }
    let oracle = RangeOracle::new(m);
    let angles: Vec<f64> = (0..k).map(|j| TAU * j as f64 / k as f64).collect();
    let vertices = angles
        .iter()
        .map(|&t| oracle.probe(PI - t).map(|p| p.point))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryPolygon { vertices, angles })
}

/// Decides whether `0 in W(M)`, returning a witness vector or a separating
/// direction.
pub fn contains_zero(m: &ComplexMatrix, settings: &Settings) -> Result<ZeroInclusion> {
    let n = m.n();
    let oracle = RangeOracle::new(m);
    if oracle.scale == 0.0 {
        return Ok(ZeroInclusion::Inside { witness: unit_vector(n, 0) });
    }
    let tol = settings.tol * oracle.scale;
    if n == 1 {
        let z = m[(0, 0)];
        return Ok(if z.norm() <= tol {
            ZeroInclusion::Inside { witness: unit_vector(1, 0) }
        } else {
            ZeroInclusion::Outside { separator: (-z.arg()).rem_euclid(TAU), margin: z.norm() }
        });
    }

    let coarse = oracle.grid(COARSE_ANGLES, settings.parallel)?;
    if let Some(best) = best_probe(&coarse).filter(|p| p.value > tol) {
        let top = oracle.refine(best, TAU / COARSE_ANGLES as f64)?;
        return Ok(outside(&top));
    }
    if let Some(w) = zero_from_probes(m, &oracle, &coarse, tol)? {
        return Ok(ZeroInclusion::Inside { witness: w });
    }

    let mut probes = oracle.grid(settings.angles.max(COARSE_ANGLES), settings.parallel)?;
    let best = best_probe(&probes).expect("non-empty grid").clone();
    let step = TAU / probes.len() as f64;
    let top = oracle.refine(&best, step)?;
    if top.value > tol {
        return Ok(outside(&top));
    }
    probes.push(top.clone());
    if let Some(w) = zero_from_probes(m, &oracle, &probes, tol)? {
        return Ok(ZeroInclusion::Inside { witness: w });
    }
    match lm_restarts(m, &oracle, &probes, tol, settings) {
        Ok(w) => Ok(ZeroInclusion::Inside { witness: w }),
        Err(residual) => {
            if top.value.abs() <= 10.0 * tol {
                Err(Error::BoundaryAmbiguous)
            } else {
                Err(Error::FailedRecovery { residual, tol })
            }
        }
    }
}

/// A unit vector `x` with `|x* M x| <= tol * ||M||_F`, assuming `0 in W(M)`.
pub fn recover_zero_vector(m: &ComplexMatrix, settings: &Settings) -> Result<Vec<C64>> {
    let oracle = RangeOracle::new(m);
    if oracle.scale == 0.0 {
        return Ok(unit_vector(m.n(), 0));
    }
    let tol = settings.tol * oracle.scale;
    let probes = oracle.grid(settings.angles.max(COARSE_ANGLES), settings.parallel)?;
    if let Some(w) = zero_from_probes(m, &oracle, &probes, tol)? {
        return Ok(w);
    }
    lm_restarts(m, &oracle, &probes, tol, settings).map_err(|residual| Error::FailedRecovery { residual, tol })
}

fn best_probe(probes: &[Probe]) -> Option<&Probe> {
    probes.iter().reduce(|a, b| if b.value > a.value { b } else { a })
}

fn outside(p: &Probe) -> ZeroInclusion {
    ZeroInclusion::Outside { separator: p.angle.rem_euclid(TAU), margin: p.value }
}

fn accept(m: &ComplexMatrix, oracle: &RangeOracle, v: Vec<C64>, tol: f64) -> Option<Vec<C64>> {
    let v = normalized(&v);
    if !v.iter().all(|z| z.is_finite()) {
        return None;
    }
    let r = m.quad_form(&v).norm();
    if r <= tol {
        return Some(v);
    }
    let out = forms::polish(&oracle.forms(), &v, 1e-3 * tol, LM_STEPS);
    (out.residual <= tol).then_some(out.vector)
}

/// Builds a zero of the form from support points whose convex hull contains
/// the origin.
fn zero_from_probes(m: &ComplexMatrix, oracle: &RangeOracle, probes: &[Probe], tol: f64) -> Result<Option<Vec<C64>>> {
    if let Some(p) = probes.iter().find(|p| p.point.norm() <= tol) {
        return Ok(Some(p.vector.clone()));
    }
    let mut order: Vec<usize> = (0..probes.len()).collect();
    order.sort_by(|&i, &j| probes[i].point.arg().total_cmp(&probes[j].point.arg()));
    let count = order.len();
    if count < 2 {
        return Ok(None);
    }
    let (mut gap, mut gap_at) = (0.0, 0);
    for s in 0..count {
        let a = probes[order[s]].point.arg();
        let b = probes[order[(s + 1) % count]].point.arg();
        let d = if s + 1 == count { b + TAU - a } else { b - a };
        if d > gap {
            gap = d;
            gap_at = s;
        }
    }
    if gap > PI + 1e-9 {
        return Ok(None);
    }
    if gap >= PI - 1e-9 {
        let x = &probes[order[gap_at]].vector;
        let y = &probes[order[(gap_at + 1) % count]].vector;
        let z = zero_on_segment(m, x, y);
        return Ok(accept(m, oracle, z, tol));
    }

    let a = probes
        .iter()
        .reduce(|a, b| if b.point.norm() > a.point.norm() { b } else { a })
        .expect("non-empty probes");
    let u = -a.point;
    for s in 0..count {
        let pb = &probes[order[s]];
        let pc = &probes[order[(s + 1) % count]];
        let (b, c) = (pb.point, pc.point);
        if cross(b, u) > 0.0 || cross(u, c) > 0.0 {
            continue;
        }
        let denom = cross(c - b, u);
        if denom == 0.0 {
            continue;
        }
        let tau = (-cross(b, u) / denom).clamp(0.0, 1.0);
        let r = b + (c - b) * tau;
        let shifted = ComplexMatrix::from_fn(m.n(), |i, j| if i == j { m[(i, j)] - r } else { m[(i, j)] });
        let zr = normalized(&zero_on_segment(&shifted, &pb.vector, &pc.vector));
        let z = zero_on_segment(m, &a.vector, &zr);
        if let Some(w) = accept(m, oracle, z, tol) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// For unit `x`, `y` whose Rayleigh points `p`, `q` have the origin on the
/// segment between them, returns `z` in `span{x, y}` with `z* M z ~ 0`.
pub(crate) fn zero_on_segment(m: &ComplexMatrix, x: &[C64], y: &[C64]) -> Vec<C64> {
    let (x, y) = (normalized(x), normalized(y));
    let p = m.quad_form(&x);
    let q = m.quad_form(&y);
    let len = (q - p).norm();
    if len == 0.0 {
        return x;
    }
    let d = (q - p) / len;
    let mx_y = inner(&x, &m.mul_vec(&y));
    let my_x = inner(&y, &m.mul_vec(&x));
    // x* L y for the Hermitian and skew parts of L = conj(d) M.
    let lxy = d.conj() * mx_y;
    let lyx = d.conj() * my_x;
    let cross_r = (lxy + lyx.conj()) / 2.0;
    let cross_i = (lxy - lyx.conj()) / C64::new(0.0, 2.0);
    let phase = if cross_i.norm() > 0.0 { C64::new(0.0, 1.0) * cross_i.conj() / cross_i.norm() } else { C64::new(1.0, 0.0) };
    let pr = (d.conj() * p).re;
    let qr = (d.conj() * q).re;
    let rr = (phase * cross_r).re;
    if pr >= 0.0 {
        return x;
    }
    if qr <= 0.0 {
        return y;
    }
    let disc = (rr * rr - pr * qr).max(0.0);
    let s = (-rr + disc.sqrt()) / qr;
    let mut z: Vec<C64> = x.iter().zip(&y).map(|(a, b)| a + phase * b * s).collect();
    if normalize(&mut z) == 0.0 {
        return x;
    }
    z
}

fn lm_restarts(
    m: &ComplexMatrix,
    oracle: &RangeOracle,
    probes: &[Probe],
    tol: f64,
    settings: &Settings,
) -> std::result::Result<Vec<C64>, f64> {
    let mats = oracle.forms();
    let mut seeds: Vec<&Probe> = probes.iter().collect();
    seeds.sort_by(|a, b| a.point.norm().total_cmp(&b.point.norm()));
    seeds.truncate(4);
    let starts: Vec<Vec<C64>> = seeds.iter().map(|p| p.vector.clone()).collect();
    let n = m.n();
    let total = starts.len() + settings.restarts;
    let runs = exec::map_indexed(total, settings.parallel, |i| {
        let start = if i < starts.len() {
            starts[i].clone()
        } else {
            let mut rng = rng_for(settings.seed, 0x6e72_0000 + i as u64);
            random_unit_vector(&mut rng, n)
        };
        forms::polish(&mats, &start, 1e-3 * tol, LM_STEPS)
    });
    let mut best: Option<Polished> = None;
    for run in runs {
        if run.residual <= tol {
            return Ok(run.vector);
        }
        if best.as_ref().is_none_or(|b| run.residual < b.residual) {
            best = Some(run);
        }
    }
    Err(best.map_or(f64::INFINITY, |b| b.residual))
}

/// `|x* M x|` for unit `x`.
pub fn form_residual(m: &ComplexMatrix, x: &[C64]) -> f64 {
    m.quad_form(x).norm() / inner(x, x).re.max(f64::MIN_POSITIVE)
}

/// Norm used for relative tolerances.
pub fn scale_of(m: &ComplexMatrix) -> f64 {
    m.frobenius_norm()
}
