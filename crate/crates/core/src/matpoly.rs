//! Matrix polynomials `P(lambda) = sum_i A_i lambda^i`.

use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{hermitian_eig, inner, ComplexMatrix, HermitianMatrix, C64};
use crate::numrange::{contains_zero, recover_zero_vector, ZeroInclusion};
use crate::settings::Settings;

/// Relative size below which a scalar coefficient counts as zero in
/// [`scalar_roots`].
pub const DEGREE_DROP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    coeffs: Vec<ComplexMatrix>,
}

impl MatrixPolynomial {
    /// Coefficients in ascending degree: `coeffs[i]` multiplies `lambda^i`.
    pub fn new(coeffs: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::InvalidInput("a matrix polynomial needs at least one coefficient".into()));
        };
        let n = first.n();
        for c in &coeffs {
            if c.n() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: c.n() });
            }
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn n(&self) -> usize {
        self.coeffs[0].n()
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.scale_real(-1.0)).collect() }
    }

    /// Horner evaluation.
    pub fn eval(&self, lambda: C64) -> ComplexMatrix {
        let mut acc = self.coeffs.last().expect("non-empty").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &acc.scale(lambda) + c;
        }
        acc
    }
}

pub fn membership(p: &MatrixPolynomial, lambda: C64, settings: &Settings) -> Result<bool> {
    Ok(contains_zero(&p.eval(lambda), settings)?.is_inside())
}

/// A unit `x` with `|x* P(lambda) x| <= tol * ||P(lambda)||_F`.
pub fn witness_for_point(p: &MatrixPolynomial, lambda: C64, settings: &Settings) -> Result<Vec<C64>> {
    recover_zero_vector(&p.eval(lambda), settings)
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Window {
    pub fn square(radius: f64) -> Self {
        Self { re: (-radius, radius), im: (-radius, radius) }
    }
}

/// Membership sampled on a uniform grid. `cells[j * re.len() + i]` refers to
/// the point `re[i] + i im[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionGrid {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub cells: Vec<bool>,
    /// Cells where the origin sat on the boundary of the range within
    /// tolerance; they are reported as inside.
    pub ambiguous: usize,
    pub tol: f64,
}

impl RegionGrid {
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[j * self.re.len() + i]
    }

    pub fn count_inside(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }
}

fn axis(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64).collect()
}

/// Cellwise membership over `window` at `resolution = (nx, ny)` points.
pub fn region_raster(p: &MatrixPolynomial, window: Window, resolution: (usize, usize), settings: &Settings) -> Result<RegionGrid> {
    let (nx, ny) = resolution;
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidInput(format!("raster resolution must be at least 2x2, got {nx}x{ny}")));
    }
    let re = axis(window.re.0, window.re.1, nx);
    let im = axis(window.im.0, window.im.1, ny);
    let inner_settings = Settings { parallel: false, ..settings.clone() };
    let results = exec::map_indexed(nx * ny, settings.parallel, |idx| {
        let z = C64::new(re[idx % nx], im[idx / nx]);
        match contains_zero(&p.eval(z), &inner_settings) {
            Ok(ZeroInclusion::Inside { .. }) => Ok((true, false)),
            Ok(ZeroInclusion::Outside { .. }) => Ok((false, false)),
            Err(Error::BoundaryAmbiguous) => Ok((true, true)),
            Err(e) => Err(e),
        }
    });
    let mut cells = Vec::with_capacity(nx * ny);
    let mut ambiguous = 0;
    for r in results {
        let (inside, amb) = r?;
        cells.push(inside);
        ambiguous += usize::from(amb);
    }
    Ok(RegionGrid { re, im, cells, ambiguous, tol: settings.tol })
}

/// Heuristic window `[-2R, 2R]^2` with
/// `R = max(1, sum_{i<k} ||A_i|| / dist(0, W(A_k)))`. When the leading
/// range contains the origin the distance is replaced by `||A_k||_F`.
pub fn auto_window(p: &MatrixPolynomial, settings: &Settings) -> Result<Window> {
    let k = p.degree();
    if k == 0 {
        return Ok(Window::square(2.0));
    }
    let lead = &p.coeffs[k];
    let rest: f64 = p.coeffs[..k].iter().map(ComplexMatrix::frobenius_norm).sum();
    let dist = match contains_zero(lead, settings) {
        Ok(ZeroInclusion::Outside { margin, .. }) => margin,
        _ => 0.0,
    };
    let r = if dist > 0.0 { (rest / dist).max(1.0) } else { (rest / lead.frobenius_norm().max(f64::MIN_POSITIVE)).max(1.0) };
    Ok(Window::square(2.0 * r))
}

/// Why a semidefinite quadratic fails to fill the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotFullPlaneReason {
    /// All forms share a sign pattern that keeps `x* P(lambda) x` away from
    /// zero on the open ray `sign * (0, inf)`.
    ExcludedRay { sign: i8 },
    /// The discriminant of every scalar quadratic is nonnegative, so the
    /// range lies on the real line.
    RealOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuadraticAnalysis {
    FullPlaneWithIsotropic(Vec<C64>),
    NotFullPlane { pattern: u8, reason: NotFullPlaneReason },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Sign {
    Psd,
    Nsd,
}

fn semidefinite_sign(h: &HermitianMatrix, index: usize, tol: f64) -> Result<Sign> {
    let eig = hermitian_eig(h)?;
    if eig.min() >= -tol {
        Ok(Sign::Psd)
    } else if eig.max() <= tol {
        Ok(Sign::Nsd)
    } else {
        Err(Error::NotSemidefinite { index })
    }
}

/// Analysis of `lambda^2 A + lambda B + C` for semidefinite `A`, `B`, `C`:
/// either a common isotropic vector, or a certificate that the range is not
/// the whole plane.
pub fn quadratic_semidefinite_analyze(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    c: &HermitianMatrix,
    settings: &Settings,
) -> Result<QuadraticAnalysis> {
    let n = a.n();
    for h in [b, c] {
        if h.n() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: h.n() });
        }
    }
    let scale = [a, b, c].iter().map(|h| h.frobenius_norm()).fold(0.0, f64::max);
    let tol = settings.tol * scale.max(f64::MIN_POSITIVE);
    let mut signs = [Sign::Psd; 3];
    for (i, h) in [a, b, c].into_iter().enumerate() {
        signs[i] = semidefinite_sign(h, i, tol)?;
    }
    // W(P) = W(-P): make the leading coefficient positive semidefinite.
    let flip = signs[0] == Sign::Nsd;
    if flip {
        for s in &mut signs {
            *s = if *s == Sign::Psd { Sign::Nsd } else { Sign::Psd };
        }
    }
    let (a, b, c) = if flip { (a.neg(), b.neg(), c.neg()) } else { (a.clone(), b.clone(), c.clone()) };
    let abs_of = |h: &HermitianMatrix, s: Sign| if s == Sign::Psd { h.clone() } else { h.neg() };

    // Semidefinite forms vanish together exactly on the kernel of the sum of
    // their absolute values.
    let total = a.add(&abs_of(&b, signs[1])).add(&abs_of(&c, signs[2]));
    let eig = hermitian_eig(&total)?;
    if eig.min() <= tol {
        let v = eig.min_vector();
        if [&a, &b, &c].iter().all(|h| h.form(&v).abs() <= tol) {
            return Ok(QuadraticAnalysis::FullPlaneWithIsotropic(v));
        }
    }

    let p = MatrixPolynomial::new(vec![c.clone().into_matrix(), b.clone().into_matrix(), a.clone().into_matrix()])?;
    let (pattern, reason, probe) = match (signs[1], signs[2]) {
        (Sign::Psd, Sign::Psd) => (1, NotFullPlaneReason::ExcludedRay { sign: 1 }, C64::new(1.0, 0.0)),
        (Sign::Nsd, Sign::Psd) => (2, NotFullPlaneReason::ExcludedRay { sign: -1 }, C64::new(-1.0, 0.0)),
        (Sign::Psd, Sign::Nsd) => (3, NotFullPlaneReason::RealOnly, C64::new(0.0, 1.0)),
        (Sign::Nsd, Sign::Nsd) => (4, NotFullPlaneReason::RealOnly, C64::new(0.0, 1.0)),
    };
    match membership(&p, probe, settings) {
        Ok(false) => Ok(QuadraticAnalysis::NotFullPlane { pattern, reason }),
        Ok(true) => Err(Error::Unresolved(format!("pattern {pattern}: {probe} is numerically in the range"))),
        Err(Error::BoundaryAmbiguous) => Err(Error::Unresolved(format!("pattern {pattern}: {probe} is on the boundary"))),
        Err(e) => Err(e),
    }
}

/// Roots of the scalar quadratic `(x* A_2 x) l^2 + (x* A_1 x) l + x* A_0 x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarRoots {
    Two(C64, C64),
    /// The leading form vanished.
    One(C64),
    /// Only the constant form is nonzero.
    None,
}

impl ScalarRoots {
    pub fn to_vec(self) -> Vec<C64> {
        match self {
            ScalarRoots::Two(a, b) => vec![a, b],
            ScalarRoots::One(a) => vec![a],
            ScalarRoots::None => Vec::new(),
        }
    }
}

pub fn scalar_roots(p: &MatrixPolynomial, x: &[C64]) -> Result<ScalarRoots> {
    if p.degree() != 2 {
        return Err(Error::InvalidInput(format!("scalar roots need degree 2, got {}", p.degree())));
    }
    if x.len() != p.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), actual: x.len() });
    }
    let xx = inner(x, x).re;
    if xx == 0.0 {
        return Err(Error::InvalidInput("zero vector".into()));
    }
    let forms: Vec<C64> = p.coeffs.iter().map(|m| m.quad_form(x)).collect();
    let small: Vec<bool> =
        p.coeffs.iter().zip(&forms).map(|(m, f)| f.norm() <= DEGREE_DROP_TOL * m.frobenius_norm() * xx).collect();
    let (c0, c1, c2) = (forms[0], forms[1], forms[2]);
    if small[2] {
        if small[1] {
            return if small[0] { Err(Error::AllFormsZero) } else { Ok(ScalarRoots::None) };
        }
        return Ok(ScalarRoots::One(-c0 / c1));
    }
    let mut sq = (c1 * c1 - c2 * c0 * 4.0).sqrt();
    if (c1.conj() * sq).re < 0.0 {
        sq = -sq;
    }
    let q = -(c1 + sq) / 2.0;
    if q.norm() == 0.0 {
        return Ok(ScalarRoots::Two(C64::new(0.0, 0.0), C64::new(0.0, 0.0)));
    }
    Ok(ScalarRoots::Two(q / c2, c0 / q))
}
