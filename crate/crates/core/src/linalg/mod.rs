//! Dense complex and Hermitian matrix primitives.

mod eig;
mod matrix;
mod small;

pub use eig::{hermitian_eig, inv_sqrt_pd, lambda_extremes, psd_projection, spectral_function, EigenDecomposition};
pub use matrix::{
    cartesian_join, cartesian_split, inner, norm, normalize, normalized, rayleigh, unit_vector, ComplexMatrix,
    HermitianMatrix, C64, HERMITIAN_INPUT_TOL, I, ONE, ZERO,
};
pub(crate) use small::solve_dense;
