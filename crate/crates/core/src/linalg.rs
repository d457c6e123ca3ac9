//! Dense linear-algebra helpers shared by the physics modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::ops::Range;

pub type C64 = Complex64;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (DVector<f64>, DMatrix<C64>) {
    let eig = m.clone().symmetric_eigen();
    sort_eigen(eig.eigenvalues, eig.eigenvectors)
}

/// Eigen-decomposition of a real symmetric matrix, eigenvalues ascending.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = m.clone().symmetric_eigen();
    sort_eigen(eig.eigenvalues, eig.eigenvectors)
}

fn sort_eigen<T: nalgebra::Scalar>(
    values: DVector<f64>,
    vectors: DMatrix<T>,
) -> (DVector<f64>, DMatrix<T>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_values = DVector::from_iterator(values.len(), order.iter().map(|&k| values[k]));
    let sorted_vectors = DMatrix::from_fn(vectors.nrows(), vectors.ncols(), |r, c| {
        vectors[(r, order[c])].clone()
    });
    (sorted_values, sorted_vectors)
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Groups an ascending list of eigenvalues into clusters whose neighbours are
/// closer than `tol`.
pub fn degenerate_groups(values: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > tol {
            if k > start {
                groups.push(start..k);
            }
            start = k;
        }
    }
    groups
}

/// Frobenius norm of `ab - ba`.
pub fn commutator_norm(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a * b - b * a).norm()
}

/// Largest entrywise deviation of `m` from its adjoint.
pub fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values, descending.
pub fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `rel_tol` times the largest.
pub fn numeric_rank(m: &DMatrix<C64>, rel_tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > rel_tol * top).count(),
        _ => 0,
    }
}

/// Orthogonal projector onto the span of the given orthonormal columns.
pub fn projector(columns: &DMatrix<C64>) -> DMatrix<C64> {
    columns * columns.adjoint()
}

/// How far the eigenspaces of `a` are from being invariant under `b`:
/// the maximum over eigenvalue clusters `P` of `a` of `‖(1 - P) b P‖_F`.
///
/// Zero exactly when every eigenspace of `a` is mapped into itself by `b`,
/// i.e. when a common eigenbasis exists.
pub fn eigenspace_invariance_residual(a: &DMatrix<C64>, b: &DMatrix<C64>, tol: f64) -> f64 {
    let (values, vectors) = hermitian_eigen(a);
    let vals: Vec<f64> = values.iter().copied().collect();
    let dim = a.nrows();
    let identity = DMatrix::<C64>::identity(dim, dim);
    degenerate_groups(&vals, tol)
        .into_iter()
        .map(|g| {
            let cols = vectors.columns(g.start, g.len()).into_owned();
            let p = projector(&cols);
            ((&identity - &p) * b * &cols).norm()
        })
        .fold(0.0, f64::max)
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// Minimum eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(0.0)
}
