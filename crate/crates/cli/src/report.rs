//! JSON analysis reports and their independent re-verification.

use pencilrange::linalg::{cartesian_split, hermitian_eig};
use pencilrange::{ComplexMatrix, HermitianMatrix, Pencil, Settings, C64};
use serde::{Deserialize, Serialize};

use crate::io::{digest, pairs_to_vector, MatrixFile};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub name: String,
    pub sha256: String,
    pub matrix: MatrixFile,
}

impl InputRecord {
    pub fn new(name: &str, m: &ComplexMatrix) -> Self {
        Self { name: name.to_string(), sha256: digest(m), matrix: MatrixFile::from_matrix(m) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub vector: Vec<[f64; 2]>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CertificateRecord {
    InHull { witnesses: Vec<WitnessRecord>, residual: f64 },
    NotInHull { separator: Vec<f64>, margin: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub operation: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub convention: Option<String>,
    pub inputs: Vec<InputRecord>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<CertificateRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub excluded_point: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub descriptor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub case: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<[f64; 2]>>,
    /// Set when a search came up empty without proving nonexistence.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exhaustive: Option<bool>,
    pub tol: f64,
    pub seed: u64,
    pub restarts: usize,
    pub angles: usize,
    pub wall_time_ms: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn settings(&self) -> Settings {
        Settings { tol: self.tol, seed: self.seed, restarts: self.restarts, angles: self.angles, ..Settings::default() }
    }

    fn matrices(&self) -> Result<Vec<ComplexMatrix>, CliError> {
        self.inputs
            .iter()
            .map(|rec| {
                let m = rec.matrix.to_matrix()?;
                if digest(&m) != rec.sha256 {
                    return Err(CliError::Verification(format!("digest mismatch for input {}", rec.name)));
                }
                Ok(m)
            })
            .collect()
    }
}

/// Outcome of re-checking a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub checks: Vec<(String, f64, f64)>,
}

impl Verification {
    fn push(&mut self, what: &str, value: f64, bound: f64) -> Result<(), CliError> {
        self.checks.push((what.to_string(), value, bound));
        if value.is_finite() && value <= bound {
            Ok(())
        } else {
            Err(CliError::Verification(format!("{what}: {value:.3e} exceeds {bound:.3e}")))
        }
    }
}

fn unit_residual(m: &ComplexMatrix, v: &[C64]) -> f64 {
    let nn: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    m.quad_form(v).norm() / nn
}

/// The pencil `lambda A + B` a report describes.
pub fn report_pencil(a: &ComplexMatrix, b: &ComplexMatrix, convention: Option<&str>) -> Result<Pencil, CliError> {
    Ok(match convention {
        Some("minus") => Pencil::minus(a.clone(), b)?,
        _ => Pencil::new(a.clone(), b.clone())?,
    })
}

/// Re-checks every witness and certificate in `report` against its embedded
/// inputs using only direct evaluations.
pub fn verify(report: &Report) -> Result<Verification, CliError> {
    let mats = report.matrices()?;
    let mut out = Verification { checks: Vec::new() };
    let scale = mats.iter().map(ComplexMatrix::frobenius_norm).fold(0.0, f64::max);
    let bound = report.tol * scale;

    if let Some(w) = &report.witness {
        let v = pairs_to_vector(w);
        if v.len() != mats[0].n() {
            return Err(CliError::Verification("witness has the wrong length".into()));
        }
        for (rec, m) in report.inputs.iter().zip(&mats) {
            out.push(&format!("witness form {}", rec.name), unit_residual(m, &v), bound)?;
        }
    }

    if report.operation == "pencil-analyze" {
        let p = report_pencil(&mats[0], &mats[1], report.convention.as_deref())?;
        let parts = p.hermitian_parts();
        match &report.certificate {
            Some(CertificateRecord::InHull { witnesses, .. }) => {
                let total: f64 = witnesses.iter().map(|w| w.weight).sum();
                out.push("hull weights sum", (total - 1.0).abs(), 1e-9)?;
                let mut acc = [0.0; 4];
                for w in witnesses {
                    if w.weight < 0.0 {
                        return Err(CliError::Verification("negative hull weight".into()));
                    }
                    let v = pairs_to_vector(&w.vector);
                    let nn: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                    for (a, h) in acc.iter_mut().zip(&parts) {
                        *a += w.weight * h.form(&v) / nn;
                    }
                }
                let r = acc.iter().map(|x| x * x).sum::<f64>().sqrt();
                out.push("hull combination", r, bound)?;
            }
            Some(CertificateRecord::NotInHull { separator, margin }) => {
                let refs: Vec<&HermitianMatrix> = parts.iter().collect();
                let min = hermitian_eig(&HermitianMatrix::combination(separator, &refs))?.min();
                out.push("separator margin deficit", margin - min, 1e-9 * scale.max(1.0))?;
                out.push("separator positivity", -min, 0.0)?;
            }
            None => {}
        }
        if let Some([re, im]) = report.excluded_point {
            let m = p.eval(C64::new(re, im));
            // Outside the range iff some rotation of the Hermitian part is
            // positive definite; check the rotation the solver proposes.
            let best = match pencilrange::contains_zero(&m, &report.settings())? {
                pencilrange::ZeroInclusion::Outside { separator, .. } => {
                    let (h, k) = cartesian_split(&m);
                    let rot = HermitianMatrix::combination(&[separator.cos(), -separator.sin()], &[&h, &k]);
                    hermitian_eig(&rot)?.min()
                }
                pencilrange::ZeroInclusion::Inside { .. } => f64::NEG_INFINITY,
            };
            out.push("excluded point separation", -best, 0.0)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let a = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let b = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Report {
            operation: "isotropic".into(),
            convention: None,
            inputs: vec![InputRecord::new("A", &a), InputRecord::new("B", &b)],
            status: "Found".into(),
            method: Some("hermitian".into()),
            certificate: None,
            excluded_point: None,
            descriptor: None,
            case: None,
            witness: Some(vec![[s, 0.0], [s, 0.0]]),
            exhaustive: None,
            tol: 1e-9,
            seed: 0,
            restarts: 64,
            angles: 720,
            wall_time_ms: 0.0,
        }
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(r, back);
    }

    #[test]
    fn verifies_good_witness_and_rejects_bad_one() {
        let r = sample();
        assert!(verify(&r).is_ok());
        let mut bad = r.clone();
        bad.witness = Some(vec![[1.0, 0.0], [0.0, 0.0]]);
        assert!(matches!(verify(&bad), Err(CliError::Verification(_))));
        let mut tampered = r;
        tampered.inputs[0].sha256 = "00".into();
        assert!(verify(&tampered).is_err());
    }
}
