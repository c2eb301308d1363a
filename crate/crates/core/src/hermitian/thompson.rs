//! Simultaneous congruence diagonalisation of a Hermitian pair without a
//! common isotropic vector.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, inv_sqrt_pd, ComplexMatrix, HermitianMatrix};

/// Below this ratio `|d| / hypot(d, e)` a diagonal entry of `A` is zero.
pub const CANONICAL_ZERO: f64 = 1e-6;
/// Ratios in `[CANONICAL_ZERO, AMBIGUITY_BAND)` are rejected as ambiguous.
pub const AMBIGUITY_BAND: f64 = 1e-4;

/// `X* A X = I_n + (-I_m) + 0_k` and `X* B X = diag(a, b, c)`.
///
/// When `negated` is set the form describes `(-A, -B)`; the numerical range
/// of `lambda A - B` is the same for both pairs.
#[derive(Debug, Clone)]
pub struct ThompsonForm {
    pub x: ComplexMatrix,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Entries of the zero block, normalised to `+1` or `-1`.
    pub c: Vec<f64>,
    pub negated: bool,
}

impl ThompsonForm {
    /// Block sizes `(n, m, k)`.
    pub fn signs(&self) -> (usize, usize, usize) {
        (self.a.len(), self.b.len(), self.c.len())
    }

    /// Diagonal of `X* B X` in block order.
    pub fn b_diagonal(&self) -> Vec<f64> {
        self.a.iter().chain(&self.b).chain(&self.c).copied().collect()
    }

    /// Diagonal of `X* A X` in block order.
    pub fn a_diagonal(&self) -> Vec<f64> {
        let (n, m, k) = self.signs();
        std::iter::repeat_n(1.0, n).chain(std::iter::repeat_n(-1.0, m)).chain(std::iter::repeat_n(0.0, k)).collect()
    }

    /// `min |a_i + b_j|`, which stays away from zero when no isotropic
    /// vector exists.
    pub fn min_pair_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for a in &self.a {
            for b in &self.b {
                gap = gap.min((a + b).abs());
            }
        }
        gap
    }
}

struct Column {
    sign: i8,
    entry: f64,
    vector: Vec<crate::linalg::C64>,
}

/// Builds the canonical form from a definite combination
/// `alpha A + beta B > 0`.
pub(crate) fn from_combination(a: &HermitianMatrix, b: &HermitianMatrix, alpha: f64, beta: f64) -> Result<ThompsonForm> {
    let n = a.n();
    let c = HermitianMatrix::combination(&[alpha, beta], &[a, b]);
    let s = inv_sqrt_pd(&c, 1e-13)?;
    let sm = s.as_matrix();
    let a1 = a.congruence(sm);
    let b1 = b.congruence(sm);
    // alpha A1 + beta B1 = I, so the eigenvectors of either diagonalise both;
    // use the one with the larger coefficient for conditioning.
    let eig = if beta.abs() >= alpha.abs() { hermitian_eig(&a1)? } else { hermitian_eig(&b1)? };
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let u = eig.vector(i);
        let d = a1.form(&u);
        let e = b1.form(&u);
        let ratio = d.abs() / d.hypot(e);
        let v = sm.mul_vec(&u);
        if ratio < CANONICAL_ZERO {
            let sc = 1.0 / e.abs().sqrt();
            cols.push(Column { sign: 0, entry: e.signum(), vector: v.iter().map(|z| z * sc).collect() });
        } else if ratio < AMBIGUITY_BAND {
            return Err(Error::NumericallySingular { ratio });
        } else {
            let sc = 1.0 / d.abs().sqrt();
            cols.push(Column { sign: if d > 0.0 { 1 } else { -1 }, entry: e / d.abs(), vector: v.iter().map(|z| z * sc).collect() });
        }
    }
    let npos = cols.iter().filter(|c| c.sign > 0).count();
    let nneg = cols.iter().filter(|c| c.sign < 0).count();
    let negated = nneg > npos;
    if negated {
        for col in &mut cols {
            col.sign = -col.sign;
            col.entry = -col.entry;
        }
    }
    let rank = |s: i8| match s {
        1 => 0,
        -1 => 1,
        _ => 2,
    };
    cols.sort_by(|p, q| rank(p.sign).cmp(&rank(q.sign)).then(p.entry.total_cmp(&q.entry)));
    let mut x = ComplexMatrix::zeros(n);
    for (j, col) in cols.iter().enumerate() {
        x.set_column(j, &col.vector);
    }
    let pick = |s: i8| cols.iter().filter(|c| c.sign == s).map(|c| c.entry).collect::<Vec<_>>();
    Ok(ThompsonForm { x, a: pick(1), b: pick(-1), c: pick(0), negated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_nonsingular, rng_for};

    fn check(a: &HermitianMatrix, b: &HermitianMatrix, tf: &ThompsonForm) {
        let (sa, sb) = if tf.negated { (a.neg(), b.neg()) } else { (a.clone(), b.clone()) };
        let ca = sa.congruence(&tf.x);
        let cb = sb.congruence(&tf.x);
        let da = HermitianMatrix::from_real_diag(&tf.a_diagonal());
        let db = HermitianMatrix::from_real_diag(&tf.b_diagonal());
        assert!(ca.sub(&da).frobenius_norm() <= 1e-7 * a.frobenius_norm().max(1.0));
        assert!(cb.sub(&db).frobenius_norm() <= 1e-7 * b.frobenius_norm().max(1.0) * 10.0);
    }

    #[test]
    fn recovers_planted_blocks() {
        let mut rng = rng_for(3, 0);
        let a0 = HermitianMatrix::from_real_diag(&[1.0, 1.0, -1.0, 0.0]);
        let b0 = HermitianMatrix::from_real_diag(&[0.5, 2.0, 1.0, 1.0]);
        let x0 = random_nonsingular(&mut rng, 4, 10.0);
        let a = a0.congruence(&x0);
        let b = b0.congruence(&x0);
        let (alpha, beta) = crate::hermitian::definite_combination(&a, &b, &Default::default()).unwrap();
        let tf = from_combination(&a, &b, alpha, beta).unwrap();
        assert_eq!(tf.signs(), (2, 1, 1));
        assert!((tf.a[0] - 0.5).abs() < 1e-8 && (tf.a[1] - 2.0).abs() < 1e-8);
        assert!((tf.b[0] - 1.0).abs() < 1e-8);
        assert_eq!(tf.c, vec![1.0]);
        assert!(!tf.negated);
        check(&a, &b, &tf);
    }

    #[test]
    fn negates_when_negative_block_dominates() {
        let a = HermitianMatrix::from_real_diag(&[-1.0, -1.0, 1.0]);
        let b = HermitianMatrix::from_real_diag(&[3.0, 1.0, 0.5]);
        let (alpha, beta) = crate::hermitian::definite_combination(&a, &b, &Default::default()).unwrap();
        let tf = from_combination(&a, &b, alpha, beta).unwrap();
        assert!(tf.negated);
        assert_eq!(tf.signs(), (2, 1, 0));
        assert!((tf.a[0] + 3.0).abs() < 1e-9 && (tf.a[1] + 1.0).abs() < 1e-9);
        assert!((tf.b[0] + 0.5).abs() < 1e-9);
        check(&a, &b, &tf);
    }

    #[test]
    fn ambiguous_scale_is_rejected() {
        let a = HermitianMatrix::from_real_diag(&[1.0, 1e-5]);
        let b = HermitianMatrix::from_real_diag(&[0.0, 1.0]);
        assert!(matches!(from_combination(&a, &b, 0.6, 0.8), Err(Error::NumericallySingular { .. })));
    }
}
