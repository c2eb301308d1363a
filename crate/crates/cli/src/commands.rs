use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use pencilrange::linalg::HERMITIAN_INPUT_TOL;
use pencilrange::pencil::DissipativeSplit;
use pencilrange::{
    auto_window, boundary_polygon, classify, common_isotropic_hermitian, dissipative_isotropic, full_plane_test,
    isotropic_minimize, region_raster, ComplexMatrix, Error, FullPlane, HermitianMatrix, HullCertificate,
    MatrixPolynomial, Settings, Window, C64,
};

use crate::io::{read_matrix, vector_to_pairs};
use crate::report::{report_pencil, verify, CertificateRecord, InputRecord, Report, WitnessRecord};
use crate::{exit, CliError};

#[derive(Debug, Parser)]
#[command(name = "pencilrange", version, about = "Numerical ranges of matrix pencils and polynomials")]
pub struct Cli {
    /// Relative tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Optimizer restarts.
    #[arg(long, global = true, default_value_t = 64)]
    pub restarts: usize,
    /// Angles in support-function scans and boundary polygons.
    #[arg(long, global = true, default_value_t = 720)]
    pub angles: usize,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    /// lambda A + B
    Plus,
    /// lambda A - B
    Minus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the pencil's numerical range is the whole plane; for
    /// Hermitian pairs also describe the range exactly.
    PencilAnalyze {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Convention::Plus)]
        convention: Convention,
    },
    /// Search for a common isotropic vector.
    Isotropic {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
    },
    /// Boundary polygon of a matrix's numerical range as CSV.
    Boundary { file: PathBuf },
    /// Membership raster of a matrix polynomial (coefficients in ascending
    /// degree) as CSV.
    Raster {
        #[arg(required = true)]
        coeffs: Vec<PathBuf>,
        /// re0,re1,im0,im1
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// nx,ny
        #[arg(long, default_value = "101,101")]
        res: String,
    },
    /// Re-check the witnesses and certificates in a report.
    Verify { report: PathBuf },
}

/// Text to emit and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

impl Cli {
    fn settings(&self) -> Settings {
        Settings { tol: self.tol, seed: self.seed, restarts: self.restarts, angles: self.angles, ..Settings::default() }
    }

    fn report(&self, operation: &str, inputs: Vec<InputRecord>, status: &str) -> Report {
        Report {
            operation: operation.into(),
            convention: None,
            inputs,
            status: status.into(),
            method: None,
            certificate: None,
            excluded_point: None,
            descriptor: None,
            case: None,
            witness: None,
            exhaustive: None,
            tol: self.tol,
            seed: self.seed,
            restarts: self.restarts,
            angles: self.angles,
            wall_time_ms: 0.0,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Input(format!("--tol must be positive, got {}", cli.tol)));
    }
    if cli.angles < 3 {
        return Err(CliError::Input("--angles must be at least 3".into()));
    }
    let start = Instant::now();
    let mut outcome = match &cli.command {
        Command::PencilAnalyze { a, b, convention } => pencil_analyze(cli, a, b, *convention),
        Command::Isotropic { files } => isotropic(cli, files),
        Command::Boundary { file } => boundary(cli, file),
        Command::Raster { coeffs, window, res } => raster(cli, coeffs, window.as_deref(), res),
        Command::Verify { report } => verify_file(report),
    }?;
    if let Some(report) = outcome.report.as_mut() {
        report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        outcome.text = report.to_json();
    }
    Ok(Outcome { text: outcome.text, code: outcome.code })
}

struct Partial {
    text: String,
    code: u8,
    report: Option<Report>,
}

fn done(report: Report, code: u8) -> Result<Partial, CliError> {
    Ok(Partial { text: String::new(), code, report: Some(report) })
}

fn hermitian(m: &ComplexMatrix) -> Option<HermitianMatrix> {
    m.is_hermitian(HERMITIAN_INPUT_TOL).then(|| HermitianMatrix::hermitian_part(m))
}

fn certificate_record(cert: &HullCertificate) -> CertificateRecord {
    match cert {
        HullCertificate::InHull { witnesses, residual } => CertificateRecord::InHull {
            witnesses: witnesses
                .iter()
                .map(|w| WitnessRecord { vector: vector_to_pairs(&w.vector), weight: w.weight })
                .collect(),
            residual: *residual,
        },
        HullCertificate::NotInHull { separator, margin } => {
            CertificateRecord::NotInHull { separator: separator.clone(), margin: *margin }
        }
    }
}

fn pencil_analyze(cli: &Cli, a_path: &Path, b_path: &Path, convention: Convention) -> Result<Partial, CliError> {
    let a = read_matrix(a_path)?;
    let b = read_matrix(b_path)?;
    let inputs = vec![InputRecord::new("A", &a), InputRecord::new("B", &b)];
    let conv = match convention {
        Convention::Plus => "plus",
        Convention::Minus => "minus",
    };
    let pencil = report_pencil(&a, &b, Some(conv))?;
    let settings = cli.settings();
    let mut report = cli.report("pencil-analyze", inputs, "");
    report.convention = Some(conv.into());

    match full_plane_test(&pencil, &settings) {
        Ok(FullPlane::FullPlane(cert)) => {
            report.status = "FullPlane".into();
            report.certificate = Some(certificate_record(&cert));
        }
        Ok(FullPlane::NotFullPlane { certificate, excluded }) => {
            report.status = "NotFullPlane".into();
            report.certificate = Some(certificate_record(&certificate));
            report.excluded_point = Some([excluded.re, excluded.im]);
        }
        Err(Error::Indeterminate { .. }) | Err(Error::BoundaryAmbiguous) => {
            report.status = "Indeterminate".into();
            return done(report, exit::INDETERMINATE);
        }
        Err(e) => return Err(e.into()),
    }

    if let (Some(ha), Some(hb)) = (hermitian(&a), hermitian(&b)) {
        // The classifier works with lambda A - B.
        let hb_minus = if convention == Convention::Plus { hb.neg() } else { hb };
        let desc = classify(&ha, &hb_minus, &settings)?;
        report.descriptor = Some(desc.to_string());
        report.case = Some(desc.provenance.to_string());
        if desc.is_full_plane() {
            let w = common_isotropic_hermitian(&ha, &hb_minus, &settings)?;
            report.witness = w.as_deref().map(vector_to_pairs);
        }
    }
    done(report, exit::ANALYZED)
}

fn isotropic(cli: &Cli, files: &[PathBuf]) -> Result<Partial, CliError> {
    let mats = files.iter().map(|f| read_matrix(f)).collect::<Result<Vec<_>, _>>()?;
    let n = mats[0].n();
    if let Some(m) = mats.iter().find(|m| m.n() != n) {
        return Err(Error::DimensionMismatch { expected: n, actual: m.n() }.into());
    }
    let names = ["A", "B", "C", "D", "E", "F", "G", "H"];
    let inputs = mats
        .iter()
        .enumerate()
        .map(|(i, m)| InputRecord::new(names.get(i).copied().unwrap_or("M"), m))
        .collect();
    let settings = cli.settings();
    let mut report = cli.report("isotropic", inputs, "");

    if mats.len() == 2 {
        if let (Some(ha), Some(hb)) = (hermitian(&mats[0]), hermitian(&mats[1])) {
            report.method = Some("hermitian".into());
            report.exhaustive = Some(true);
            match common_isotropic_hermitian(&ha, &hb, &settings)? {
                Some(v) => {
                    report.status = "Found".into();
                    report.witness = Some(vector_to_pairs(&v));
                }
                None => report.status = "NoneExists".into(),
            }
            return done(report, exit::ANALYZED);
        }
        let pencil = pencilrange::Pencil::new(mats[0].clone(), mats[1].clone())?;
        if DissipativeSplit::new(&pencil).is_ok() {
            report.method = Some("dissipative".into());
            match dissipative_isotropic(&pencil, &settings) {
                Ok(w) => {
                    report.status = "Found".into();
                    report.exhaustive = Some(true);
                    report.witness = Some(vector_to_pairs(&w.vector));
                    return done(report, exit::ANALYZED);
                }
                Err(Error::NotFullPlane) => {
                    // An isotropic vector would make the range the whole plane.
                    report.status = "NoneExists".into();
                    report.exhaustive = Some(true);
                    return done(report, exit::ANALYZED);
                }
                Err(Error::FailedRecovery { .. }) => {
                    report.status = "FailedRecovery".into();
                    return done(report, exit::RECOVERY_FAILED);
                }
                Err(Error::Unproven(_)) | Err(Error::Indeterminate { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    report.method = Some("optimizer".into());
    match isotropic_minimize(&mats, &settings)? {
        Some(w) => {
            report.status = "Found".into();
            report.exhaustive = Some(true);
            report.witness = Some(vector_to_pairs(&w.vector));
        }
        None => {
            report.status = "NotFound".into();
            report.exhaustive = Some(false);
        }
    }
    done(report, exit::ANALYZED)
}

fn boundary(cli: &Cli, file: &Path) -> Result<Partial, CliError> {
    let m = read_matrix(file)?;
    let poly = boundary_polygon(&m, cli.angles)?;
    let mut text = String::from("theta,re,im\n");
    for (t, z) in poly.angles.iter().zip(&poly.vertices) {
        writeln!(text, "{t},{},{}", z.re, z.im).expect("write to string");
    }
    Ok(Partial { text, code: exit::ANALYZED, report: None })
}

fn parse_list(s: &str, count: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Input(format!("{what}: {e}")))?;
    if vals.len() != count || vals.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Input(format!("{what} needs {count} finite comma-separated numbers")));
    }
    Ok(vals)
}

fn raster(cli: &Cli, coeffs: &[PathBuf], window: Option<&str>, res: &str) -> Result<Partial, CliError> {
    let mats = coeffs.iter().map(|f| read_matrix(f)).collect::<Result<Vec<_>, _>>()?;
    let p = MatrixPolynomial::new(mats)?;
    let settings = cli.settings();
    let window = match window {
        Some(w) => {
            let v = parse_list(w, 4, "--window")?;
            Window { re: (v[0], v[1]), im: (v[2], v[3]) }
        }
        None => auto_window(&p, &settings)?,
    };
    let r = parse_list(res, 2, "--res")?;
    if r.iter().any(|v| v.fract() != 0.0 || *v < 2.0) {
        return Err(CliError::Input("--res needs two integers >= 2".into()));
    }
    let grid = region_raster(&p, window, (r[0] as usize, r[1] as usize), &settings)?;
    let mut text = String::from("re,im,inside\n");
    for (j, im) in grid.im.iter().enumerate() {
        for (i, re) in grid.re.iter().enumerate() {
            writeln!(text, "{re},{im},{}", u8::from(grid.get(i, j))).expect("write to string");
        }
    }
    Ok(Partial { text, code: exit::ANALYZED, report: None })
}

fn verify_file(path: &Path) -> Result<Partial, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let report: Report = serde_json::from_str(&text)?;
    let checks = verify(&report)?;
    let mut out = String::new();
    for (what, value, bound) in &checks.checks {
        writeln!(out, "ok {what}: {value:.3e} <= {bound:.3e}").expect("write to string");
    }
    writeln!(out, "verified {} checks", checks.checks.len()).expect("write to string");
    Ok(Partial { text: out, code: exit::ANALYZED, report: None })
}

/// Parses `C64` literals of the form `re,im`; used by tests and scripts.
pub fn parse_complex(s: &str) -> Result<C64, CliError> {
    let v = parse_list(s, 2, "complex number")?;
    Ok(C64::new(v[0], v[1]))
}
