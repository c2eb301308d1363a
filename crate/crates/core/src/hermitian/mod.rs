//! Hermitian pencils `lambda A - B`.
//!
//! For Hermitian `A`, `B` the pair of forms `(x* A x, x* B x)` has a convex
//! range, equal to `W(A + iB)` in the plane. A common isotropic vector exists
//! iff that set contains the origin, and otherwise some combination
//! `alpha A + beta B` is positive definite, which yields a simultaneous
//! congruence diagonalisation and an exact description of the range.

mod descriptor;
mod thompson;

use std::f64::consts::TAU;

pub use descriptor::{format_number, Provenance, RangeDescriptor, RangeKind};
pub use thompson::{ThompsonForm, AMBIGUITY_BAND, CANONICAL_ZERO};

use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{cartesian_join, hermitian_eig, inv_sqrt_pd, lambda_extremes, HermitianMatrix, C64};
use crate::numrange::{contains_zero, ZeroInclusion};
use crate::settings::Settings;

const GOLDEN_STEPS: usize = 60;

fn check_pair(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), actual: b.n() });
    }
    Ok(a.frobenius_norm().max(b.frobenius_norm()))
}

/// A unit vector with `x* A x = x* B x = 0`, or `None` when the pair has no
/// common isotropic vector. Because the joint range of two Hermitian forms
/// is convex, `None` is a proof of nonexistence.
pub fn common_isotropic_hermitian(a: &HermitianMatrix, b: &HermitianMatrix, settings: &Settings) -> Result<Option<Vec<C64>>> {
    let scale = check_pair(a, b)?;
    let m = cartesian_join(a, b);
    match contains_zero(&m, settings)? {
        ZeroInclusion::Inside { witness } => {
            let tol = settings.tol * scale * 2f64.sqrt();
            if a.form(&witness).abs() > tol || b.form(&witness).abs() > tol {
                let residual = a.form(&witness).hypot(b.form(&witness));
                return Err(Error::FailedRecovery { residual, tol });
            }
            Ok(Some(witness))
        }
        ZeroInclusion::Outside { .. } => Ok(None),
    }
}

fn combo_min(a: &HermitianMatrix, b: &HermitianMatrix, theta: f64) -> Result<f64> {
    Ok(hermitian_eig(&HermitianMatrix::combination(&[theta.cos(), theta.sin()], &[a, b]))?.min())
}

/// `(alpha, beta)` on the unit circle maximising `lambda_min(alpha A + beta B)`.
pub fn definite_combination(a: &HermitianMatrix, b: &HermitianMatrix, settings: &Settings) -> Result<(f64, f64)> {
    let scale = check_pair(a, b)?;
    let count = settings.angles.max(16);
    let grid: Vec<f64> = exec::map_indexed(count, settings.parallel, |j| combo_min(a, b, TAU * j as f64 / count as f64))
        .into_iter()
        .collect::<Result<_>>()?;
    let (best, _) = grid
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (j, &v)| if v > acc.1 { (j, v) } else { acc });
    let step = TAU / count as f64;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = ((best as f64 - 1.0) * step, (best as f64 + 1.0) * step);
    let (mut top_t, mut top_v) = (best as f64 * step, grid[best]);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = combo_min(a, b, x1)?;
    let mut f2 = combo_min(a, b, x2)?;
    for _ in 0..GOLDEN_STEPS {
        for (t, v) in [(x1, f1), (x2, f2)] {
            if v > top_v {
                top_t = t;
                top_v = v;
            }
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = combo_min(a, b, x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = combo_min(a, b, x2)?;
        }
    }
    if top_v <= settings.tol * scale {
        return Err(Error::NotSeparable { margin: top_v });
    }
    Ok((top_t.cos(), top_t.sin()))
}

/// Canonical form `X* A X = I_n + (-I_m) + 0_k`, `X* B X = diag(a, b, c)`
/// with `n >= m`.
pub fn thompson_canonical(a: &HermitianMatrix, b: &HermitianMatrix, settings: &Settings) -> Result<ThompsonForm> {
    if common_isotropic_hermitian(a, b, settings)?.is_some() {
        return Err(Error::HasIsotropicVector);
    }
    let (alpha, beta) = definite_combination(a, b, settings)?;
    thompson::from_combination(a, b, alpha, beta)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Inertia {
    PositiveDefinite,
    NegativeDefinite,
    PositiveSingular,
    NegativeSingular,
    Indefinite,
}

fn inertia(values: &[f64]) -> Inertia {
    let big = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let zero = 1e-9 * big;
    let pos = values.iter().filter(|&&v| v > zero).count();
    let neg = values.iter().filter(|&&v| v < -zero).count();
    let len = values.len();
    match (pos, neg) {
        (p, 0) if p == len => Inertia::PositiveDefinite,
        (0, q) if q == len => Inertia::NegativeDefinite,
        (_, 0) => Inertia::PositiveSingular,
        (0, _) => Inertia::NegativeSingular,
        _ => Inertia::Indefinite,
    }
}

/// Exact description of the numerical range of `lambda A - B`.
pub fn classify(a: &HermitianMatrix, b: &HermitianMatrix, settings: &Settings) -> Result<RangeDescriptor> {
    let scale = check_pair(a, b)?;
    if common_isotropic_hermitian(a, b, settings)?.is_some() {
        return Ok(RangeDescriptor { kind: RangeKind::FullPlane, provenance: Provenance::Isotropic });
    }
    if a.frobenius_norm() <= settings.tol * scale {
        return Ok(RangeDescriptor { kind: RangeKind::Empty, provenance: Provenance::ZeroLeading });
    }
    let (alpha, beta) = definite_combination(a, b, settings)?;
    let tf = thompson::from_combination(a, b, alpha, beta)?;
    classify_canonical(a, b, &tf, settings)
}

fn classify_canonical(a: &HermitianMatrix, b: &HermitianMatrix, tf: &ThompsonForm, settings: &Settings) -> Result<RangeDescriptor> {
    let (n, m, k) = tf.signs();
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    if m == 0 && k == 0 {
        let (lo, hi) = (min(&tf.a), max(&tf.a));
        let kind = if hi - lo <= 1e-12 * lo.abs().max(hi.abs()).max(1.0) {
            RangeKind::Point { at: (lo + hi) / 2.0 }
        } else {
            RangeKind::Segment { lo, hi }
        };
        return Ok(RangeDescriptor { kind, provenance: Provenance::CaseA });
    }
    if m == 0 {
        debug_assert!(n > 0);
        let kind = if tf.c[0] > 0.0 { RangeKind::HalfLineUp { lo: min(&tf.a) } } else { RangeKind::HalfLineDown { hi: max(&tf.a) } };
        return Ok(RangeDescriptor { kind, provenance: Provenance::CaseB });
    }

    // The canonical entries describe the possibly negated pair.
    let (a, b) = if tf.negated { (a.neg(), b.neg()) } else { (a.clone(), b.clone()) };
    match inertia(&tf.b_diagonal()) {
        Inertia::PositiveDefinite | Inertia::NegativeDefinite => {
            let negative = inertia(&tf.b_diagonal()) == Inertia::NegativeDefinite;
            let (sa, sb) = if negative { (a.neg(), b.neg()) } else { (a, b) };
            let s = inv_sqrt_pd(&sb, 1e-13)?;
            let (lo, hi) = lambda_extremes(&sa.congruence(s.as_matrix()))?;
            let kind = RangeKind::RealComplementOfInterval { lo: 1.0 / lo, hi: 1.0 / hi };
            Ok(RangeDescriptor { kind, provenance: Provenance::CaseC })
        }
        Inertia::PositiveSingular | Inertia::NegativeSingular => {
            let negative = inertia(&tf.b_diagonal()) == Inertia::NegativeSingular;
            let (sa, sb) = if negative { (a.neg(), b.neg()) } else { (a, b) };
            let inner = classify(&sb, &sa, settings)?;
            let materialized = invert(&inner.kind)?;
            let kind = RangeKind::InverseImage { inner: Box::new(inner), materialized: Box::new(materialized) };
            Ok(RangeDescriptor { kind, provenance: Provenance::CaseD })
        }
        Inertia::Indefinite => {
            // The endpoint formula assumes the zero block of B is positive.
            let (pa, pb) = if k > 0 && tf.c[0] < 0.0 {
                (tf.b.iter().map(|v| -v).collect::<Vec<_>>(), tf.a.iter().map(|v| -v).collect::<Vec<_>>())
            } else {
                (tf.a.clone(), tf.b.clone())
            };
            let (a1, b1, a2, b2) = (min(&pa), max(&pa), min(&pb), max(&pb));
            let kind = if k > 0 || a1 + a2 > 0.0 {
                RangeKind::RealComplementOfInterval { lo: -a2, hi: a1 }
            } else {
                RangeKind::RealComplementOfInterval { lo: b1, hi: -b2 }
            };
            Ok(RangeDescriptor { kind, provenance: Provenance::CaseE })
        }
    }
}

/// `{1/mu : mu in inner, mu != 0} U {0}` for a half-line `inner`.
fn invert(inner: &RangeKind) -> Result<RangeKind> {
    Ok(match *inner.resolved() {
        RangeKind::HalfLineUp { lo } if lo < 0.0 => RangeKind::RealComplementOfInterval { lo: 1.0 / lo, hi: 0.0 },
        RangeKind::HalfLineUp { lo: 0.0 } => RangeKind::HalfLineUp { lo: 0.0 },
        RangeKind::HalfLineUp { lo } => RangeKind::Segment { lo: 0.0, hi: 1.0 / lo },
        RangeKind::HalfLineDown { hi } if hi > 0.0 => RangeKind::RealComplementOfInterval { lo: 0.0, hi: 1.0 / hi },
        RangeKind::HalfLineDown { hi: 0.0 } => RangeKind::HalfLineDown { hi: 0.0 },
        RangeKind::HalfLineDown { hi } => RangeKind::Segment { lo: 1.0 / hi, hi: 0.0 },
        ref other => return Err(Error::Unresolved(format!("unexpected inner range {other} for a semidefinite leading term"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, random_nonsingular, rng_for};

    fn d(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diag(v)
    }

    fn s() -> Settings {
        Settings::default()
    }

    fn kind(a: &[f64], b: &[f64]) -> RangeKind {
        classify(&d(a), &d(b), &s()).unwrap().kind
    }

    #[test]
    fn isotropic_examples() {
        let v = common_isotropic_hermitian(&d(&[1.0, -1.0]), &d(&[1.0, -1.0]), &s()).unwrap().unwrap();
        assert!((v[0].norm() - v[1].norm()).abs() < 1e-6);
        assert!(common_isotropic_hermitian(&d(&[1.0, -1.0]), &d(&[2.0, -1.0]), &s()).unwrap().is_none());
        let v = common_isotropic_hermitian(&d(&[1.0, -1.0, 0.0]), &d(&[1.0, 1.0, 0.0]), &s()).unwrap().unwrap();
        assert!(v[2].norm() > 1.0 - 1e-9);
    }

    #[test]
    fn definite_combination_examples() {
        let (a, b) = definite_combination(&d(&[1.0, -1.0]), &d(&[2.0, -1.0]), &s()).unwrap();
        let c = HermitianMatrix::combination(&[a, b], &[&d(&[1.0, -1.0]), &d(&[2.0, -1.0])]);
        assert!(hermitian_eig(&c).unwrap().min() > 0.0);
        let (a, b) = definite_combination(&HermitianMatrix::identity(3), &HermitianMatrix::zeros(3), &s()).unwrap();
        assert!((a - 1.0).abs() < 1e-9 && b.abs() < 1e-6);
        assert!(matches!(
            definite_combination(&d(&[1.0, -1.0]), &d(&[1.0, -1.0]), &s()),
            Err(Error::NotSeparable { .. })
        ));
    }

    #[test]
    fn canonical_example_is_its_own_form() {
        let tf = thompson_canonical(&d(&[1.0, -1.0]), &d(&[2.0, -1.0]), &s()).unwrap();
        assert_eq!(tf.signs(), (1, 1, 0));
        assert!((tf.a[0] - 2.0).abs() < 1e-9 && (tf.b[0] + 1.0).abs() < 1e-9);
        assert!(matches!(thompson_canonical(&d(&[1.0, -1.0]), &d(&[1.0, -1.0]), &s()), Err(Error::HasIsotropicVector)));
    }

    #[test]
    fn identity_leading_term_gives_spectrum_of_b() {
        let mut rng = rng_for(4, 0);
        let b = random_hermitian(&mut rng, 4);
        let tf = thompson_canonical(&HermitianMatrix::identity(4), &b, &s()).unwrap();
        let eig = hermitian_eig(&b).unwrap();
        assert_eq!(tf.signs(), (4, 0, 0));
        for (x, y) in tf.a.iter().zip(&eig.eigenvalues) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(kind(&[1.0, -1.0], &[2.0, -1.0]).to_string(), "R \\ (1,2)");
        let RangeKind::RealComplementOfInterval { lo, hi } = kind(&[1.0, -1.0], &[1.0, 1.0]) else { panic!() };
        assert!((lo + 1.0).abs() < 1e-9 && (hi - 1.0).abs() < 1e-9);
        let RangeKind::RealComplementOfInterval { lo, hi } = kind(&[1.0, -1.0, 0.0], &[1.0, -0.5, 2.0]) else { panic!() };
        assert!((lo - 0.5).abs() < 1e-9 && (hi - 1.0).abs() < 1e-9);
        let RangeKind::Segment { lo, hi } = kind(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]) else { panic!() };
        assert!((lo - 1.0).abs() < 1e-9 && (hi - 3.0).abs() < 1e-9);
        assert_eq!(kind(&[2.0, 2.0], &[4.0, 4.0]), RangeKind::Point { at: 2.0 });
        assert_eq!(kind(&[1.0, -1.0], &[1.0, -1.0]), RangeKind::FullPlane);
        assert_eq!(kind(&[0.0, 0.0], &[1.0, 2.0]), RangeKind::Empty);
    }

    #[test]
    fn half_lines_and_inverse_images() {
        let RangeKind::HalfLineUp { lo } = kind(&[1.0, 0.0], &[3.0, 1.0]) else { panic!() };
        assert!((lo - 3.0).abs() < 1e-12);
        let RangeKind::HalfLineDown { hi } = kind(&[1.0, 0.0], &[3.0, -1.0]) else { panic!() };
        assert!((hi - 3.0).abs() < 1e-12);
        // B = diag(1, 0) singular, A indefinite.
        let desc = classify(&d(&[1.0, -1.0]), &d(&[0.5, 0.0]), &s()).unwrap();
        assert_eq!(desc.provenance, Provenance::CaseD);
        for x in [-3.0, -0.5, 0.0, 0.25, 2.0] {
            let inside = brute_contains(&d(&[1.0, -1.0]), &d(&[0.5, 0.0]), x);
            assert_eq!(desc.contains(C64::new(x, 0.0), 1e-9), inside, "{x}: {desc}");
        }
    }

    /// Whether `xA - B` has a unit isotropic vector: for a Hermitian matrix
    /// the origin must lie between the extreme eigenvalues.
    fn brute_contains(a: &HermitianMatrix, b: &HermitianMatrix, x: f64) -> bool {
        let m = HermitianMatrix::combination(&[x, -1.0], &[a, b]);
        let e = hermitian_eig(&m).unwrap();
        e.min() <= 1e-12 && e.max() >= -1e-12
    }

    #[test]
    fn congruence_invariance() {
        let mut rng = rng_for(8, 0);
        let cases: [(&[f64], &[f64]); 4] = [
            (&[1.0, -1.0], &[2.0, -1.0]),
            (&[1.0, 1.0, -1.0], &[0.5, 3.0, 1.0]),
            (&[1.0, -1.0, 0.0], &[1.0, -0.5, 2.0]),
            (&[1.0, 1.0, 0.0], &[-1.0, 2.0, -1.0]),
        ];
        for (a0, b0) in cases {
            let (a0, b0) = (d(a0), d(b0));
            let base = classify(&a0, &b0, &s()).unwrap();
            let x = random_nonsingular(&mut rng, a0.n(), 50.0);
            let moved = classify(&a0.congruence(&x), &b0.congruence(&x), &s()).unwrap();
            let (e0, e1) = (base.kind.endpoints(), moved.kind.endpoints());
            assert_eq!(e0.len(), e1.len());
            for (p, q) in e0.iter().zip(&e1) {
                assert!((p - q).abs() < 1e-6, "{base} vs {moved}");
            }
        }
    }

    #[test]
    fn non_full_plane_descriptors_exclude_a_real_point() {
        let mut rng = rng_for(10, 0);
        for _ in 0..20 {
            let a = random_hermitian(&mut rng, 3);
            let b = random_hermitian(&mut rng, 3).add(&HermitianMatrix::identity(3).scale(4.0));
            let desc = classify(&a, &b, &s()).unwrap();
            if let Some(x) = desc.kind.excluded_real_point() {
                assert!(!brute_contains(&a, &b, x) || desc.is_full_plane(), "{desc} at {x}");
            }
        }
    }
}
