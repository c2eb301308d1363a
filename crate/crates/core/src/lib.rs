//! Numerical ranges of matrix pencils and matrix polynomials.
//!
//! The numerical range of a matrix polynomial `P(lambda) = sum_i A_i lambda^i`
//! is the set of `lambda` for which `x* P(lambda) x = 0` has a unit solution
//! `x`. This crate decides membership, recovers witness vectors, detects when
//! the range is the whole complex plane, and classifies the range of Hermitian
//! pencils exactly.

pub mod error;
pub mod exec;
mod forms;
pub mod hermitian;
pub mod jointrange;
pub mod linalg;
pub mod matpoly;
pub mod numrange;
pub mod pencil;
pub mod random;
pub mod settings;

pub use error::{Error, Result};
pub use hermitian::{
    classify, common_isotropic_hermitian, definite_combination, thompson_canonical, Provenance, RangeDescriptor, RangeKind,
    ThompsonForm,
};
pub use jointrange::{
    isotropic_minimize, jnr_sample, zero_in_hull, zero_point_recovery_convex, HullCertificate, HullWitness, IsotropicWitness,
    JointSample,
};
pub use linalg::{ComplexMatrix, HermitianMatrix, C64};
pub use matpoly::{
    auto_window, quadratic_semidefinite_analyze, region_raster, scalar_roots, witness_for_point, MatrixPolynomial,
    NotFullPlaneReason, QuadraticAnalysis, RegionGrid, ScalarRoots, Window,
};
pub use numrange::{boundary_polygon, contains_zero, recover_zero_vector, support_point, BoundaryPolygon, ZeroInclusion};
pub use pencil::{dissipative_isotropic, excluded_point, full_plane_test, range_sample, DissipativeSplit, FullPlane, Pencil};
pub use settings::Settings;
