//! Small-matrix floating-point kernels on top of nalgebra: SVD-based ranks,
//! extreme singular pairs, null spaces, pseudo-inverses, inverses with
//! condition reporting.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mat::Mat;

/// Relative threshold under which a singular value counts as zero.
pub const RANK_TOL: f64 = 1e-9;

pub fn to_na(m: &Mat) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.real_at(i, j))
}

pub fn from_na(m: &DMatrix<f64>) -> Mat {
    Mat::from_fn_real(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Numerical rank: singular values below RANK_TOL x max(sigma_max, 1) are zero.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let cutoff = RANK_TOL * sv.max().max(1.0);
    sv.iter().filter(|s| **s > cutoff).count()
}

/// Largest singular value (spectral norm); 0 for empty matrices.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// Smallest singular value together with its left/right singular vectors.
pub fn min_singular_triple(m: &DMatrix<f64>) -> (f64, DVector<f64>, DVector<f64>) {
    let svd = m.clone().svd(true, true);
    let sv = &svd.singular_values;
    let mut k = 0;
    for i in 1..sv.len() {
        if sv[i] < sv[k] {
            k = i;
        }
    }
    let u = svd.u.as_ref().expect("u requested").column(k).into_owned();
    let v = svd.v_t.as_ref().expect("v_t requested").row(k).transpose();
    (sv[k], u, v)
}

/// Smallest singular value of M over the full column space together with a
/// minimizing unit right vector: min over unit x of |Mx|. Wide matrices are
/// padded with zero rows so that exact null directions are reachable.
pub fn min_sv_right(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let padded = if m.nrows() < m.ncols() {
        let mut sq = DMatrix::zeros(m.ncols(), m.ncols());
        sq.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
        sq
    } else {
        m.clone()
    };
    let (sigma, _, v) = min_singular_triple(&padded);
    (sigma, v)
}

/// Smallest singular value only.
pub fn min_singular(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().singular_values();
    let mut out = f64::INFINITY;
    for s in sv.iter() {
        out = out.min(*s);
    }
    out
}

/// Orthonormal basis of the (numerical) null space, as columns.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    // nalgebra produces a thin SVD; pad wide matrices with zero rows so v_t
    // spans the whole column space
    let padded = if m.nrows() < m.ncols() {
        let mut sq = DMatrix::zeros(m.ncols(), m.ncols());
        sq.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
        sq
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let sv = &svd.singular_values;
    let cutoff = rel_tol * sv.max().max(1.0);
    let ncols = m.ncols();
    let cols: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] <= cutoff).collect();
    let mut out = DMatrix::zeros(ncols, cols.len());
    for (c, &i) in cols.iter().enumerate() {
        out.set_column(c, &v_t.row(i).transpose());
    }
    out
}

/// Moore-Penrose pseudo-inverse with the crate-wide rank tolerance.
pub fn pinv(m: &DMatrix<f64>) -> DMatrix<f64> {
    m.clone()
        .svd(true, true)
        .pseudo_inverse(RANK_TOL * spectral_norm(m).max(1.0))
        .expect("svd converged")
}

/// Inverse plus 2-norm condition number; error when numerically singular.
pub fn inverse_with_cond(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    let sv = m.clone().singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    if smin <= RANK_TOL * smax.max(1.0) {
        return Err(Error::DomainError(format!(
            "matrix numerically singular (sigma_min {smin:.3e}, sigma_max {smax:.3e})"
        )));
    }
    let inv = m
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::DomainError("matrix inversion failed".into()))?;
    Ok((inv, smax / smin))
}

/// 2-norm condition number (infinite when singular).
pub fn cond2(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}
