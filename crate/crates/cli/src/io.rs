//! Matrix files and digests.

use std::fs;
use std::path::Path;

use pencilrange::{ComplexMatrix, C64};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

/// On-disk matrix: either full entries or a diagonal shorthand, each entry a
/// `[re, im]` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixFile {
    Full { n: usize, entries: Vec<Vec<[f64; 2]>> },
    Diag { diag: Vec<[f64; 2]> },
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let entries = m.rows().into_iter().map(|row| row.into_iter().map(|z| [z.re, z.im]).collect()).collect();
        MatrixFile::Full { n: m.n(), entries }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        let pair = |p: &[f64; 2]| C64::new(p[0], p[1]);
        let m = match self {
            MatrixFile::Full { n, entries } => {
                if entries.len() != *n || entries.iter().any(|r| r.len() != *n) {
                    return Err(CliError::Input(format!("expected a {n}x{n} entries array")));
                }
                let rows: Vec<Vec<C64>> = entries.iter().map(|r| r.iter().map(pair).collect()).collect();
                ComplexMatrix::from_rows(&rows)?
            }
            MatrixFile::Diag { diag } => {
                if diag.is_empty() {
                    return Err(CliError::Input("empty diagonal".into()));
                }
                let d: Vec<C64> = diag.iter().map(pair).collect();
                if d.iter().any(|z| !z.is_finite()) {
                    return Err(CliError::Input("non-finite diagonal entry".into()));
                }
                ComplexMatrix::from_diag(&d)
            }
        };
        Ok(m)
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, CliError> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid matrix JSON: {e}")))?;
    file.to_matrix()
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// SHA-256 over the dimension and the little-endian bytes of every entry,
/// so the digest depends only on the matrix values.
pub fn digest(m: &ComplexMatrix) -> String {
    let mut h = Sha256::new();
    h.update((m.n() as u64).to_le_bytes());
    for z in m.as_slice() {
        h.update(z.re.to_le_bytes());
        h.update(z.im.to_le_bytes());
    }
    hex::encode(h.finalize())
}

pub fn vector_to_pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn pairs_to_vector(p: &[[f64; 2]]) -> Vec<C64> {
    p.iter().map(|q| C64::new(q[0], q[1])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_and_diagonal_forms() {
        let full = parse_matrix(r#"{"n": 2, "entries": [[[0,0],[0,0]],[[2,0],[0,0]]]}"#).unwrap();
        assert_eq!(full[(1, 0)], C64::new(2.0, 0.0));
        let d = parse_matrix(r#"{"diag": [[1,0],[-1,0.5]]}"#).unwrap();
        assert_eq!(d[(1, 1)], C64::new(-1.0, 0.5));
        assert_eq!(d[(0, 1)], C64::new(0.0, 0.0));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_matrix(r#"{"n": 2, "entries": [[[0,0]]]}"#).is_err());
        assert!(parse_matrix(r#"{"diag": []}"#).is_err());
        assert!(parse_matrix("not json").is_err());
    }

    #[test]
    fn round_trip_and_digest() {
        let m = parse_matrix(r#"{"diag": [[1,2],[3,4]]}"#).unwrap();
        let back = MatrixFile::from_matrix(&m).to_matrix().unwrap();
        assert_eq!(m, back);
        assert_eq!(digest(&m), digest(&back));
        assert_eq!(digest(&m).len(), 64);
        let other = parse_matrix(r#"{"diag": [[1,2],[3,4.5]]}"#).unwrap();
        assert_ne!(digest(&m), digest(&other));
    }
}
