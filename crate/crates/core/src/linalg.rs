//! Dense complex matrix helpers used throughout the crate.
//!
//! Fiber dimensions are small (n of order a few to ~16), so everything here
//! is a dense eigendecomposition or a handful of matrix products. Hermitian
//! eigenproblems go through nalgebra's `symmetric_eigen`, which for complex
//! matrices is the Hermitian eigendecomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, the value type of every field.
pub type CMat = DMatrix<Complex64>;

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(n: usize) -> CMat {
    CMat::zeros(n, n)
}

/// (M + M*)/2.
pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Operator norm (largest singular value), via the Hermitian eigenproblem of M*M.
pub fn op_norm(m: &CMat) -> f64 {
    let gram = m.adjoint() * m;
    let eig = hermitize(&gram).symmetric_eigen();
    eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.max(0.0))).sqrt()
}

/// Smallest singular value.
pub fn min_singular(m: &CMat) -> f64 {
    let gram = m.adjoint() * m;
    let eig = hermitize(&gram).symmetric_eigen();
    eig.eigenvalues.iter().fold(f64::INFINITY, |a, &l| a.min(l.max(0.0))).sqrt()
}

/// ‖M − M*‖ relative to ‖M‖ (0 for exactly Hermitian matrices).
pub fn hermitian_defect(m: &CMat) -> f64 {
    let scale = op_norm(m);
    if scale == 0.0 {
        return 0.0;
    }
    op_norm(&(m - m.adjoint())) / scale
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues (ascending) and
/// the unitary of eigenvectors, columns matching the eigenvalue order.
pub fn herm_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = hermitize(m).symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = zeros(n);
    for (col, &k) in order.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(k));
    }
    (vals, vecs)
}

pub fn min_eig_herm(m: &CMat) -> f64 {
    let eig = hermitize(m).symmetric_eigen();
    eig.eigenvalues.iter().fold(f64::INFINITY, |a, &l| a.min(l))
}

pub fn max_eig_herm(m: &CMat) -> f64 {
    let eig = hermitize(m).symmetric_eigen();
    eig.eigenvalues.iter().fold(f64::NEG_INFINITY, |a, &l| a.max(l))
}

/// Apply a scalar function to a Hermitian matrix through its eigenvalues.
pub fn herm_fn(m: &CMat, f: impl Fn(f64) -> Complex64) -> CMat {
    let (vals, vecs) = herm_eigen(m);
    let diag = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&l| f(l)),
    ));
    &vecs * diag * vecs.adjoint()
}

/// Positive square root of a Hermitian positive-definite matrix.
pub fn herm_sqrt(m: &CMat) -> Result<CMat> {
    let (vals, _) = herm_eigen(m);
    if vals[0] <= 0.0 {
        return Err(Error::invalid(format!(
            "matrix is not positive definite (lambda_min = {:.3e})",
            vals[0]
        )));
    }
    Ok(herm_fn(m, |l| Complex64::new(l.sqrt(), 0.0)))
}

/// Inverse positive square root of a Hermitian positive-definite matrix.
pub fn herm_inv_sqrt(m: &CMat) -> Result<CMat> {
    let (vals, _) = herm_eigen(m);
    if vals[0] <= 0.0 {
        return Err(Error::invalid(format!(
            "matrix is not positive definite (lambda_min = {:.3e})",
            vals[0]
        )));
    }
    Ok(herm_fn(m, |l| Complex64::new(1.0 / l.sqrt(), 0.0)))
}

/// exp(z·A) for Hermitian A and a complex scalar z (z·A is normal, so the
/// Hermitian eigenbasis of A diagonalizes it).
pub fn exp_herm_scaled(a: &CMat, z: Complex64) -> CMat {
    herm_fn(a, |l| (z * l).exp())
}

/// Unitary polar factor U = M (M*M)^{-1/2}.
pub fn polar_unitary(m: &CMat) -> Result<CMat> {
    let gram = m.adjoint() * m;
    let inv_sqrt = herm_inv_sqrt(&gram)
        .map_err(|_| Error::invalid("polar factor of a singular matrix".to_string()))?;
    Ok(m * inv_sqrt)
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::invalid("singular matrix has no inverse".to_string()))
}
