//! Small dense linear-algebra helpers shared by the solvers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn lambda_max(a: &DMatrix<f64>) -> f64 {
    a.clone().symmetric_eigenvalues().iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub fn lambda_min(a: &DMatrix<f64>) -> f64 {
    a.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Largest absolute eigenvalue of a symmetric matrix.
pub fn sym_spectral_norm(a: &DMatrix<f64>) -> f64 {
    a.clone().symmetric_eigenvalues().iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Singular values, descending.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return vec![];
    }
    let mut sv: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

pub fn complex_singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return vec![];
    }
    let mut sv: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Numerical rank with the usual `max(m, n) * eps * σ_1` threshold, floored
/// at an absolute `1e-12`.
pub fn rank(a: &DMatrix<f64>) -> usize {
    let sv = singular_values(a);
    let Some(&top) = sv.first() else { return 0 };
    let thresh = (a.nrows().max(a.ncols()) as f64 * f64::EPSILON * top).max(1e-12);
    sv.iter().filter(|&&s| s > thresh).count()
}

pub fn unit(v: &DVector<f64>) -> DVector<f64> {
    let n = v.norm();
    if n == 0.0 {
        v.clone()
    } else {
        v / n
    }
}
