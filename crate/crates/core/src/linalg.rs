//! Thin helpers over `faer` for the dense matrices used throughout.

use faer::linalg::solvers::DenseSolveCore;
use faer::{Mat, Side};
use num_complex::Complex64 as c64;

use crate::error::{Error, Result};

pub type CMat = Mat<c64>;

pub fn zeros(rows: usize, cols: usize) -> CMat {
    Mat::zeros(rows, cols)
}

pub fn identity(n: usize) -> CMat {
    Mat::from_fn(n, n, |i, j| if i == j { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) })
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

/// max |M − Mᴴ|.
pub fn hermiticity_residual(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut best = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            best = best.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    best
}

/// ½(M + Mᴴ).
pub fn hermitian_part(m: &CMat) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

/// D^{1/2} M D^{−1/2} for a positive diagonal D given by `d`.
pub fn similarity_scale(m: &CMat, d: &[f64]) -> CMat {
    let s: Vec<f64> = d.iter().map(|x| x.sqrt()).collect();
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * (s[i] / s[j]))
}

/// Eigenvalues of a Hermitian matrix in ascending order (lower triangle is read).
pub fn hermitian_eigenvalues(m: &CMat) -> Result<Vec<f64>> {
    let mut ev = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Convergence(format!("Hermitian eigensolver failed: {e:?}")))?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Convergence(format!("Hermitian eigensolver failed: {e:?}")))?;
    let n = m.nrows();
    let vals: Vec<f64> = (0..n).map(|k| evd.S()[k].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let u = evd.U();
    let vecs = Mat::from_fn(n, n, |i, k| u[(i, order[k])]);
    Ok((order.iter().map(|&k| vals[k]).collect(), vecs))
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    let mut s = m
        .singular_values()
        .map_err(|e| Error::Convergence(format!("SVD failed: {e:?}")))?;
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// The `k` smallest singular values (ascending) with their right singular vectors as columns.
pub fn smallest_singular_vectors(m: &CMat, k: usize) -> Result<(Vec<f64>, CMat)> {
    let svd = m.svd().map_err(|e| Error::Convergence(format!("SVD failed: {e:?}")))?;
    let n = m.ncols();
    let s: Vec<f64> = (0..n.min(m.nrows())).map(|i| svd.S()[i].re).collect();
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
    order.truncate(k);
    let v = svd.V();
    Ok((order.iter().map(|&i| s[i]).collect(), Mat::from_fn(n, order.len(), |r, c| v[(r, order[c])])))
}

/// Eigenvalues of a general square matrix, unordered.
pub fn general_eigenvalues(m: &CMat) -> Result<Vec<c64>> {
    m.eigenvalues().map_err(|e| Error::Convergence(format!("eigensolver failed: {e:?}")))
}

/// Spectral norm.
pub fn op_norm(m: &CMat) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// 2-norm condition number σ_max/σ_min.
pub fn condition_number(m: &CMat) -> Result<f64> {
    let s = singular_values(m)?;
    let (hi, lo) = (s[0], s[s.len() - 1]);
    Ok(if lo == 0.0 { f64::INFINITY } else { hi / lo })
}

/// Inverse by LU with partial pivoting.
pub fn inverse(m: &CMat) -> CMat {
    m.partial_piv_lu().inverse()
}

/// Phase of det(M) as a unit complex number, and log|det M|, from the LU factors.
pub fn det_phase_and_log_abs(m: &CMat) -> (c64, f64) {
    let lu = m.partial_piv_lu();
    let u = lu.U();
    let mut phase = c64::new(1.0, 0.0);
    let mut log_abs = 0.0;
    for k in 0..m.nrows() {
        let d = u[(k, k)];
        let a = d.norm();
        if a == 0.0 {
            return (c64::new(0.0, 0.0), f64::NEG_INFINITY);
        }
        phase *= d / a;
        log_abs += a.ln();
    }
    // Row permutation parity.
    let perm = lu.P().arrays().0;
    let mut seen = vec![false; perm.len()];
    let mut parity = false;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut k = start;
        let mut len = 0;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len % 2 == 0 {
            parity = !parity;
        }
    }
    if parity {
        phase = -phase;
    }
    (phase, log_abs)
}

pub fn matvec(m: &CMat, v: &[c64]) -> Vec<c64> {
    let mut out = vec![c64::new(0.0, 0.0); m.nrows()];
    for j in 0..m.ncols() {
        let vj = v[j];
        if vj == c64::new(0.0, 0.0) {
            continue;
        }
        let col = m.col(j);
        for i in 0..m.nrows() {
            out[i] += col[i] * vj;
        }
    }
    out
}
