//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Column-major flattening.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    CMatrix::from_column_slice(n, n, v.as_slice())
}

/// Frobenius norm.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Operator (spectral) norm, from the top eigenvalue of `M†M`.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let eig = gram.symmetric_eigen();
    eig.eigenvalues.iter().copied().fold(0.0, f64::max).max(0.0).sqrt()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
    (values, vectors)
}

/// Eigenvalues of a general complex matrix, from the diagonal of its Schur form.
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let (_, t) = nalgebra::linalg::Schur::new(m.clone()).unpack();
    t.diagonal().iter().copied().collect()
}

/// Full SVD data `(σ, V)` with `V` square (`ncols × ncols`); rows are padded
/// with zeros so the right singular vectors span the whole domain.
fn right_svd(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let (r, c) = m.shape();
    let padded = if r < c {
        let mut p = CMatrix::zeros(c, c);
        p.rows_mut(0, r).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v = svd.v_t.expect("requested").adjoint();
    (svd.singular_values.iter().copied().collect(), v)
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Singular values at or below this are zero regardless of scale.
pub const ABS_FLOOR: f64 = 1e-13;

/// Numerical rank with threshold `rel_tol × σ_max` (and [`ABS_FLOOR`]).
pub fn rank(m: &CMatrix, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&x| x > (rel_tol * top).max(ABS_FLOOR)).count()
}

/// Orthonormal basis of `{x : m x = 0}`; singular values at or below
/// `tol × max(σ_max, 1)` count as zero.
pub fn null_space(m: &CMatrix, tol: f64) -> Vec<CVector> {
    let c = m.ncols();
    if c == 0 {
        return Vec::new();
    }
    if m.nrows() == 0 {
        return (0..c).map(|i| CVector::from_fn(c, |j, _| if i == j { ONE } else { ZERO })).collect();
    }
    let (s, v) = right_svd(m);
    let top = s.iter().copied().fold(1.0, f64::max);
    (0..c)
        .filter(|&i| s[i] <= tol * top)
        .map(|i| v.column(i).into_owned())
        .collect()
}

/// Orthonormal basis of the span of `columns`.
pub fn column_space(columns: &[CVector], rel_tol: f64) -> Vec<CVector> {
    if columns.is_empty() {
        return Vec::new();
    }
    let m = CMatrix::from_columns(columns);
    let svd = m.svd(true, false);
    let u = svd.u.expect("requested");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > (rel_tol * top).max(ABS_FLOOR))
        .map(|(i, _)| u.column(i).into_owned())
        .collect()
}

/// Block-diagonal direct sum.
pub fn direct_sum(blocks: &[CMatrix]) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, at), b.shape()).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Greedy matching of two multisets of complex numbers; returns the largest
/// pairing distance, or `None` when the sizes differ.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}
