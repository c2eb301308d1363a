use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(n: usize, data: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("matrix dimension must be positive".into()));
        }
        if data.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix must be square".into()));
        }
        Self::new(n, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![ONE; n])
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self::from_diag(&diag.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds `sum_i c_i M_i`; panics on an empty list or mismatched sizes.
    pub fn linear_combination(coeffs: &[C64], mats: &[&ComplexMatrix]) -> Self {
        assert_eq!(coeffs.len(), mats.len());
        let n = mats[0].n;
        let mut out = Self::zeros(n);
        for (c, m) in coeffs.iter().zip(mats) {
            assert_eq!(m.n, n, "dimension mismatch in linear combination");
            for (o, x) in out.data.iter_mut().zip(&m.data) {
                *o += c * x;
            }
        }
        out
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[C64]) {
        for (i, &v) in col.iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        debug_assert_eq!(x.len(), self.n);
        self.data
            .chunks(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x* M x` without normalization.
    pub fn quad_form(&self, x: &[C64]) -> C64 {
        let mut acc = ZERO;
        for (i, row) in self.data.chunks(self.n).enumerate() {
            let mut s = ZERO;
            for (a, b) in row.iter().zip(x) {
                s += a * b;
            }
            acc += x[i].conj() * s;
        }
        acc
    }

    /// `X* M X`.
    pub fn congruence(&self, x: &ComplexMatrix) -> Self {
        &(&x.adjoint() * self) * x
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        (0..self.n).all(|i| (i..self.n).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tol * scale))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.n, self.n)?;
        for row in self.data.chunks(self.n) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Hermitian matrix; the upper and lower triangles are exact conjugates.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

/// Largest anti-Hermitian residual accepted by [`HermitianMatrix::new`],
/// relative to the max entry.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-8;

impl HermitianMatrix {
    /// Validates and symmetrizes; rejects inputs that are not Hermitian to
    /// within [`HERMITIAN_INPUT_TOL`].
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_hermitian(HERMITIAN_INPUT_TOL) {
            return Err(Error::InvalidInput("matrix is not Hermitian".into()));
        }
        Ok(Self::hermitian_part(&m))
    }

    /// `(M + M*) / 2`, the orthogonal projection onto Hermitian matrices.
    pub fn hermitian_part(m: &ComplexMatrix) -> Self {
        let n = m.n();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            out[(i, i)] = C64::new(m[(i, i)].re, 0.0);
            for j in i + 1..n {
                let v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        Self(out)
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_real_diag(diag))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    /// `sum_i c_i H_i` with real coefficients.
    pub fn combination(coeffs: &[f64], mats: &[&HermitianMatrix]) -> Self {
        assert_eq!(coeffs.len(), mats.len());
        let n = mats[0].n();
        let mut data = vec![ZERO; n * n];
        for (&c, m) in coeffs.iter().zip(mats) {
            assert_eq!(m.n(), n, "dimension mismatch in combination");
            if c == 0.0 {
                continue;
            }
            for (o, x) in data.iter_mut().zip(m.0.as_slice()) {
                *o += x * c;
            }
        }
        Self(ComplexMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Real quadratic form `x* H x` (unnormalized).
    pub fn form(&self, x: &[C64]) -> f64 {
        self.0.quad_form(x).re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale_real(s))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn add(&self, other: &HermitianMatrix) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Self {
        Self(&self.0 - &other.0)
    }

    /// `X* H X`, Hermitian by construction.
    pub fn congruence(&self, x: &ComplexMatrix) -> Self {
        Self::hermitian_part(&self.0.congruence(x))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.0)
    }
}

/// Splits `M = H + iK` with `H = (M+M*)/2`, `K = (M-M*)/(2i)`.
pub fn cartesian_split(m: &ComplexMatrix) -> (HermitianMatrix, HermitianMatrix) {
    let h = HermitianMatrix::hermitian_part(m);
    let k = HermitianMatrix::hermitian_part(&m.scale(-I));
    (h, k)
}

/// Reassembles `H + iK`.
pub fn cartesian_join(h: &HermitianMatrix, k: &HermitianMatrix) -> ComplexMatrix {
    h.as_matrix() + &k.as_matrix().scale(I)
}

// Vector helpers. Vectors are plain slices of `C64`.

/// `a* b`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(x: &mut [C64]) -> f64 {
    let nrm = norm(x);
    if nrm > 0.0 {
        for z in x.iter_mut() {
            *z /= nrm;
        }
    }
    nrm
}

pub fn normalized(x: &[C64]) -> Vec<C64> {
    let mut v = x.to_vec();
    normalize(&mut v);
    v
}

pub fn unit_vector(n: usize, k: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[k] = ONE;
    v
}

/// Normalized Rayleigh quotient `x* M x / x* x`.
pub fn rayleigh(m: &ComplexMatrix, x: &[C64]) -> Result<C64> {
    if x.len() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            actual: x.len(),
        });
    }
    let xx = inner(x, x).re;
    if xx == 0.0 || !xx.is_finite() {
        return Err(Error::InvalidInput("Rayleigh quotient of a zero vector".into()));
    }
    Ok(m.quad_form(x) / xx)
}
