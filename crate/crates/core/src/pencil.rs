//! General linear pencils `P(lambda) = lambda A + B`.

use crate::error::{Error, Result};
use crate::jointrange::{isotropic_minimize, zero_in_hull, zero_point_recovery_convex, HullCertificate, IsotropicWitness};
use crate::linalg::{cartesian_split, hermitian_eig, psd_projection, ComplexMatrix, HermitianMatrix, C64};
use crate::numrange::contains_zero;
use crate::random::{random_unit_vector, rng_for};
use crate::settings::Settings;

/// Relative tolerance on the smallest eigenvalue of the real parts in the
/// dissipative precondition.
pub const DISSIPATIVE_PSD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Pencil {
    a: ComplexMatrix,
    b: ComplexMatrix,
}

impl Pencil {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::DimensionMismatch { expected: a.n(), actual: b.n() });
        }
        Ok(Self { a, b })
    }

    /// The pencil `lambda A - B`, written in the `lambda A + B` convention.
    pub fn minus(a: ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        Self::new(a, b.scale_real(-1.0))
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn eval(&self, lambda: C64) -> ComplexMatrix {
        ComplexMatrix::linear_combination(&[lambda, C64::new(1.0, 0.0)], &[&self.a, &self.b])
    }

    /// `lambda B + A`.
    pub fn swapped(&self) -> Self {
        Self { a: self.b.clone(), b: self.a.clone() }
    }

    /// Hermitian parts `[A_1, A_2, B_1, B_2]` with `A = A_1 + i A_2` and
    /// `B = B_1 + i B_2`.
    pub fn hermitian_parts(&self) -> [HermitianMatrix; 4] {
        let (a1, a2) = cartesian_split(&self.a);
        let (b1, b2) = cartesian_split(&self.b);
        [a1, a2, b1, b2]
    }

    fn scale(&self) -> f64 {
        self.a.frobenius_norm().max(self.b.frobenius_norm())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FullPlane {
    FullPlane(HullCertificate),
    NotFullPlane { certificate: HullCertificate, excluded: C64 },
}

impl FullPlane {
    pub fn is_full_plane(&self) -> bool {
        matches!(self, FullPlane::FullPlane(_))
    }

    pub fn certificate(&self) -> &HullCertificate {
        match self {
            FullPlane::FullPlane(c) | FullPlane::NotFullPlane { certificate: c, .. } => c,
        }
    }
}

/// `W(P) = C` iff the origin lies in the convex hull of the joint range of
/// the four Hermitian parts.
pub fn full_plane_test(p: &Pencil, settings: &Settings) -> Result<FullPlane> {
    let parts = p.hermitian_parts();
    let cert = zero_in_hull(&parts, settings)?;
    match &cert {
        HullCertificate::InHull { .. } => Ok(FullPlane::FullPlane(cert)),
        HullCertificate::NotInHull { separator, .. } => {
            let excluded = excluded_point(p, separator, settings)?;
            Ok(FullPlane::NotFullPlane { certificate: cert, excluded })
        }
    }
}

/// Whether `lambda` lies in the numerical range of the pencil.
pub fn membership(p: &Pencil, lambda: C64, settings: &Settings) -> Result<bool> {
    Ok(contains_zero(&p.eval(lambda), settings)?.is_inside())
}

/// Points `lambda = -x* B x / x* A x` for random unit `x`; draws with
/// `|x* A x|` below tolerance are skipped.
pub fn range_sample(p: &Pencil, count: usize, seed: u64, settings: &Settings) -> Vec<C64> {
    let mut rng = rng_for(seed, 0x7261_6e67);
    let floor = settings.tol * p.scale();
    (0..count)
        .filter_map(|_| {
            let x = random_unit_vector(&mut rng, p.n());
            let ax = p.a.quad_form(&x);
            (ax.norm() >= floor && ax.norm() > 0.0).then(|| -p.b.quad_form(&x) / ax)
        })
        .collect()
}

/// A point outside the numerical range built from a separating direction
/// `c` of the hull test (coordinates for `A_1, A_2, B_1, B_2`). Each
/// candidate is verified before it is returned.
pub fn excluded_point(p: &Pencil, separator: &[f64], settings: &Settings) -> Result<C64> {
    let &[a1, a2, a3, a4] = separator else {
        return Err(Error::InvalidInput(format!("separator must have 4 entries, got {}", separator.len())));
    };
    let det = a3 * a3 + a4 * a4;
    let excluded = |z: C64| -> Result<bool> {
        match membership(p, z, settings) {
            Ok(m) => Ok(!m),
            Err(Error::BoundaryAmbiguous) | Err(Error::FailedRecovery { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    };
    if det > 1e-12 {
        let mut inv_k = 1.0;
        for step in 0..=17 {
            if step == 17 {
                inv_k = 0.0;
            }
            let (u, v) = (inv_k - a1, inv_k - a2);
            let z = C64::new((a3 * u + a4 * v) / det, (a4 * u - a3 * v) / det);
            for cand in [-z, z] {
                if excluded(cand)? {
                    return Ok(cand);
                }
            }
            inv_k /= 2.0;
        }
    } else {
        // The separator only involves A, so W(A) avoids the origin and large
        // |lambda| escape the range.
        let mut radius = 2.0 * p.b.frobenius_norm() / separator_margin(p, separator)?.max(f64::MIN_POSITIVE) + 1.0;
        for _ in 0..40 {
            for k in 0..8 {
                let cand = C64::from_polar(radius, std::f64::consts::TAU * k as f64 / 8.0);
                if excluded(cand)? {
                    return Ok(cand);
                }
            }
            radius *= 2.0;
        }
    }
    Err(Error::VerificationFailed)
}

fn separator_margin(p: &Pencil, c: &[f64]) -> Result<f64> {
    let parts = p.hermitian_parts();
    let refs: Vec<&HermitianMatrix> = parts.iter().collect();
    Ok(hermitian_eig(&HermitianMatrix::combination(c, &refs))?.min())
}

/// `A = R_1 + J_1`, `B = R_2 + J_2` with `R_i` Hermitian and `J_i` skew;
/// the skew parts are stored as the Hermitian matrices `K_i = -i J_i`.
#[derive(Debug, Clone)]
pub struct DissipativeSplit {
    pub r1: HermitianMatrix,
    pub r2: HermitianMatrix,
    pub k1: HermitianMatrix,
    pub k2: HermitianMatrix,
}

impl DissipativeSplit {
    /// Splits the pencil and checks that both real parts are positive
    /// semidefinite up to `DISSIPATIVE_PSD_TOL`.
    pub fn new(p: &Pencil) -> Result<Self> {
        let (r1, k1) = cartesian_split(&p.a);
        let (r2, k2) = cartesian_split(&p.b);
        for r in [&r1, &r2] {
            let min = hermitian_eig(r)?.min();
            if min < -DISSIPATIVE_PSD_TOL * r.frobenius_norm() {
                return Err(Error::NotDissipative { min_eigenvalue: min });
            }
        }
        Ok(Self { r1, r2, k1, k2 })
    }
}

/// A common isotropic vector of a dissipative pencil whose numerical range
/// is the whole plane.
pub fn dissipative_isotropic(p: &Pencil, settings: &Settings) -> Result<IsotropicWitness> {
    let n = p.n();
    let split = DissipativeSplit::new(p)?;
    let scale = p.scale();
    let tol = settings.tol * scale;
    if n <= 2 {
        return isotropic_minimize(&[p.a.clone(), p.b.clone()], settings)?
            .ok_or_else(|| Error::Unproven(format!("no isotropic vector found for n = {n}")));
    }
    // The origin sits on the boundary of the hull whenever the range is the
    // whole plane, so the hull test may land in its tolerance band; a
    // verified witness below settles the question either way.
    match full_plane_test(p, settings) {
        Ok(FullPlane::NotFullPlane { .. }) => return Err(Error::NotFullPlane),
        Ok(FullPlane::FullPlane(_)) | Err(Error::Indeterminate { .. }) => {}
        Err(e) => return Err(e),
    }
    let r1 = psd_projection(&split.r1)?;
    let r2 = psd_projection(&split.r2)?;
    let sum = r1.add(&r2).scale(std::f64::consts::FRAC_1_SQRT_2);
    let v = zero_point_recovery_convex(&[sum, split.k1, split.k2], settings)?;
    let (ra, rb) = (p.a.quad_form(&v).norm(), p.b.quad_form(&v).norm());
    let residual = ra.hypot(rb);
    if ra > tol || rb > tol {
        return Err(Error::FailedRecovery { residual, tol });
    }
    Ok(IsotropicWitness { vector: v, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I;
    use crate::random::{random_complex_matrix, random_psd_with_kernel};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ex2x2() -> Pencil {
        Pencil::new(
            ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[2.0, 0.0]]).unwrap(),
            ComplexMatrix::from_real_diag(&[1.0, -1.0]),
        )
        .unwrap()
    }

    fn forbebiano() -> Pencil {
        Pencil::minus(ComplexMatrix::from_real_diag(&[1.0, -1.0]), &ComplexMatrix::from_real_diag(&[2.0, -1.0])).unwrap()
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert!(Pencil::new(ComplexMatrix::identity(2), ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn nilpotent_pencil_fills_plane() {
        let s = Settings::default();
        assert!(full_plane_test(&ex2x2(), &s).unwrap().is_full_plane());
        assert!(membership(&ex2x2(), c(1.0, 1.0), &s).unwrap());
    }

    #[test]
    fn identity_pencil_is_a_point() {
        let s = Settings::default();
        let p = Pencil::new(ComplexMatrix::identity(2), ComplexMatrix::identity(2)).unwrap();
        match full_plane_test(&p, &s).unwrap() {
            FullPlane::NotFullPlane { excluded, .. } => {
                assert!((excluded + 1.0).norm() > 1e-6);
                assert!(!membership(&p, excluded, &s).unwrap());
            }
            other => panic!("{other:?}"),
        }
        assert!(membership(&p, c(-1.0, 0.0), &s).unwrap());
    }

    #[test]
    fn real_gap_of_hermitian_pencil() {
        let s = Settings::default();
        let p = forbebiano();
        assert!(!membership(&p, c(1.5, 0.0), &s).unwrap());
        for l in [1.0, 2.0, 0.0, 3.0] {
            assert!(membership(&p, c(l, 0.0), &s).unwrap(), "{l}");
        }
        let samples = range_sample(&p, 10_000, 1, &s);
        assert!(samples.iter().all(|z| !(z.re > 1.0 + 1e-9 && z.re < 2.0 - 1e-9) && z.im.abs() < 1e-12));
    }

    #[test]
    fn samples_of_nilpotent_pencil_follow_parametrisation() {
        let p = ex2x2();
        // x = (r e^{-i phi}, 1) normalised gives lambda = (1 - r^2)/(2r) e^{i phi}.
        for (r, phi) in [(0.5, 0.3), (2.0, -1.0), (1.0, 2.0)] {
            let x = crate::linalg::normalized(&[C64::from_polar(r, -phi), c(1.0, 0.0)]);
            let lambda = -p.b().quad_form(&x) / p.a().quad_form(&x);
            let expect = C64::from_polar((1.0 - r * r) / (2.0 * r), phi);
            assert!((lambda - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn excluded_point_for_scaled_identity() {
        let s = Settings::default();
        let p = Pencil::new(ComplexMatrix::from_real_diag(&[1.0, 2.0]), ComplexMatrix::identity(2)).unwrap();
        let FullPlane::NotFullPlane { excluded, certificate } = full_plane_test(&p, &s).unwrap() else {
            panic!("expected NotFullPlane");
        };
        assert!(!membership(&p, excluded, &s).unwrap());
        let HullCertificate::NotInHull { separator, .. } = certificate else { panic!() };
        let again = excluded_point(&p, &separator, &s).unwrap();
        assert_eq!(again, excluded);
    }

    #[test]
    fn swap_symmetry_on_random_pencils() {
        let s = Settings::default().with_restarts(16);
        for seed in 0..6 {
            let mut rng = rng_for(seed, 4);
            let a = random_complex_matrix(&mut rng, 3);
            let mut b = random_complex_matrix(&mut rng, 3);
            if seed % 2 == 0 {
                b = &b + &ComplexMatrix::identity(3).scale(c(4.0, 4.0));
            }
            let p = Pencil::new(a.clone(), b).unwrap();
            let x = full_plane_test(&p, &s).unwrap().is_full_plane();
            let y = full_plane_test(&p.swapped(), &s).unwrap().is_full_plane();
            assert_eq!(x, y, "seed {seed}");
        }
    }

    #[test]
    fn skew_pencil_has_isotropic_kernel_vector() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[-1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]).unwrap();
        let b = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), I, c(0.0, 0.0)],
            vec![I, c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0); 3],
        ])
        .unwrap();
        let p = Pencil::new(a.clone(), b.clone()).unwrap();
        let w = dissipative_isotropic(&p, &Settings::default()).unwrap();
        assert!(a.quad_form(&w.vector).norm() < 1e-9 * 2f64.sqrt());
        assert!(b.quad_form(&w.vector).norm() < 1e-9 * 2f64.sqrt());
    }

    #[test]
    fn planted_dissipative_kernel_is_recovered() {
        let mut rng = rng_for(21, 0);
        let n = 4;
        let w = random_unit_vector(&mut rng, n);
        let r1 = random_psd_with_kernel(&mut rng, n, n - 1, std::slice::from_ref(&w));
        let r2 = random_psd_with_kernel(&mut rng, n, n - 2, std::slice::from_ref(&w));
        let skew = |rng: &mut crate::random::SeededRng| {
            let k = crate::random::random_hermitian(rng, n);
            let kw = k.form(&w);
            let outer = ComplexMatrix::from_fn(n, |i, j| w[i] * w[j].conj() * kw);
            HermitianMatrix::hermitian_part(&(k.as_matrix() - &outer))
        };
        let (k1, k2) = (skew(&mut rng), skew(&mut rng));
        let a = crate::linalg::cartesian_join(&r1, &k1);
        let b = crate::linalg::cartesian_join(&r2, &k2);
        let p = Pencil::new(a.clone(), b.clone()).unwrap();
        let v = dissipative_isotropic(&p, &Settings::default()).unwrap();
        assert!(v.residual < 1e-8);
    }

    #[test]
    fn definite_real_part_is_not_full_plane() {
        let p = Pencil::new(ComplexMatrix::identity(3), ComplexMatrix::from_real_diag(&[1.0, -1.0, 0.0])).unwrap();
        assert!(matches!(dissipative_isotropic(&p, &Settings::default()), Err(Error::NotDissipative { .. })));
        let q = Pencil::new(ComplexMatrix::identity(3), ComplexMatrix::identity(3)).unwrap();
        assert_eq!(dissipative_isotropic(&q, &Settings::default()), Err(Error::NotFullPlane));
    }
}
