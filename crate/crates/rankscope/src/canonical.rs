//! Canonicalization of generic s x t x u tensors (s < t) to staircase normal
//! forms, returning explicit invertible transforms with verified residuals.
//!
//! For two slices the normal form is ((E_s, O); (O, E_s)). For u >= 2 slices
//! with (u-1)s < t and v = t - (u-1)s, the form is
//!
//!   ((E_s, O_{s x v}, M); X_2; ...; X_u)
//!
//! where X_k carries E_s at column offset v + (k-2)s and M is an s x (u-2)s
//! block whose top min(v, s) rows vanish (so M = O entirely when t >= us).
//!
//! No closed-form transform is used; each function solves the defining linear
//! system, picks the solution nearest the identity (which makes canonical
//! inputs fixed points), falls back to seeded random elements of the solution
//! space when that element is singular, and always verifies the postcondition
//! by recomputing the sandwich product.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mat::{block_diag, Kind, Mat};
use crate::numeric;
use crate::seeds;
use crate::tensor::{sandwich, Tensor3};

/// Residual accepted by the canonicalizers.
pub const CANON_TOL: f64 = 1e-8;

/// An invertible transform pair with its verified canonical output.
#[derive(Debug, Clone)]
pub struct CanonResult {
    /// Left transform (rows).
    pub pmat: Mat,
    /// Right transform (columns).
    pub qmat: Mat,
    /// sandwich(pmat, input, qmat), recomputed after construction.
    pub canonical: Tensor3,
    /// Max-abs deviation from the 0/1 target pattern over constrained entries.
    pub residual: f64,
    /// 2-norm condition number of pmat.
    pub cond_p: f64,
    /// 2-norm condition number of qmat.
    pub cond_q: f64,
}

/// Target value at (slice k, row i, column j); None marks an unconstrained
/// entry (the free part of the M block).
type Pattern = Box<dyn Fn(usize, usize, usize) -> Option<f64>>;

fn staircase_pattern(s: usize, tdim: usize, u: usize) -> Pattern {
    let v = tdim - (u - 1) * s;
    let constrained_m_rows = v.min(s);
    Box::new(move |k, i, j| {
        if k == 0 {
            if j < s {
                Some(if i == j { 1.0 } else { 0.0 })
            } else if j < s + v {
                Some(0.0)
            } else if i < constrained_m_rows {
                Some(0.0)
            } else {
                None
            }
        } else {
            let off = v + (k - 1) * s;
            Some(if j >= off && j < off + s && j - off == i { 1.0 } else { 0.0 })
        }
    })
}

fn last_slice_pattern(s: usize, tdim: usize, u: usize) -> Pattern {
    Box::new(move |k, i, j| {
        if k + 1 == u {
            Some(if j >= tdim - s && j - (tdim - s) == i { 1.0 } else { 0.0 })
        } else {
            None
        }
    })
}

fn pattern_residual(t: &Tensor3, pattern: &Pattern) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..t.p() {
        for i in 0..t.m() {
            for j in 0..t.n() {
                if let Some(target) = pattern(k, i, j) {
                    worst = worst.max((t.slice(k).real_at(i, j) - target).abs());
                }
            }
        }
    }
    worst
}

/// The exact staircase pattern tensor X = (X_1; ...; X_u) of shape s x t x u.
pub fn staircase_tensor(s: usize, tdim: usize, u: usize) -> Result<Tensor3> {
    if u < 2 || (u - 1) * s >= tdim {
        return Err(Error::BadShape(format!(
            "staircase needs u >= 2 and (u-1)s < t, got s={s}, t={tdim}, u={u}"
        )));
    }
    let v = tdim - (u - 1) * s;
    let mut slices = Vec::with_capacity(u);
    slices.push(Mat::from_fn_int(s, tdim, |i, j| (i == j) as i64));
    for k in 1..u {
        let off = v + (k - 1) * s;
        slices.push(Mat::from_fn_int(s, tdim, move |i, j| (j == off + i) as i64));
    }
    Tensor3::new(slices)
}

/// Normalize the last slice of an s x t x u tensor (s < t, full row rank
/// last slice) to (O, E_s) by an invertible column transform; pmat stays E_s.
/// An input whose last slice already equals (O, E_s) returns qmat = E_t.
pub fn last_slice_normalize(t: &Tensor3, seed: u64) -> Result<CanonResult> {
    let (s, tdim, u) = (t.m(), t.n(), t.p());
    if s >= tdim {
        return Err(Error::BadShape(format!(
            "last_slice_normalize needs s < t, got {s}x{tdim}"
        )));
    }
    let tr = t.to_real();
    let scale = tr.max_abs();
    if scale == 0.0 {
        return Err(Error::DomainError("zero tensor has no full-row-rank slice".into()));
    }
    let last = numeric::to_na(tr.slice(u - 1));
    let sv = last.clone().singular_values();
    if sv.min() <= numeric::RANK_TOL * sv.max().max(1.0) {
        return Err(Error::DomainError("last slice is rank deficient".into()));
    }

    // target C with A_u Q = C; general solution Q = Q0 + N Theta
    let mut target = DMatrix::<f64>::zeros(s, tdim);
    for i in 0..s {
        target[(i, tdim - s + i)] = 1.0;
    }
    let q0 = DMatrix::<f64>::identity(tdim, tdim) + numeric::pinv(&last) * (&target - &last);
    let null = numeric::null_space(&last, numeric::RANK_TOL);
    let pattern = last_slice_pattern(s, tdim, u);
    let pmat = Mat::identity(s, Kind::Real);

    let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(seed, 0x15_0001, 0));
    for attempt in 0..8 {
        let q = if attempt == 0 {
            q0.clone()
        } else {
            let theta = DMatrix::from_fn(null.ncols(), tdim, |_, _| {
                rng.sample::<f64, _>(rand_distr::StandardNormal)
            });
            &q0 + &null * theta
        };
        if numeric::cond2(&q) > 1e10 {
            continue;
        }
        let qmat = numeric::from_na(&q);
        let canonical = sandwich(&pmat, &tr, &qmat)?;
        let residual = pattern_residual(&canonical, &pattern);
        if residual <= CANON_TOL {
            let cond_q = numeric::cond2(&q);
            return Ok(CanonResult { pmat, qmat, canonical, residual, cond_p: 1.0, cond_q });
        }
    }
    Err(Error::DomainError(
        "no invertible column transform normalizes the last slice".into(),
    ))
}

/// Canonicalize an s x t x 2 tensor (0 < s < t) to ((E_s, O); (O, E_s)).
///
/// Solves the homogeneous system A_1 Q = (R, O), A_2 Q = (O, R) in (Q, R);
/// the solution space has dimension (t-s)^2 generically. The element nearest
/// (E_t, E_s) is tried first, then seeded random elements; pmat = R^{-1}.
pub fn pencil_canonicalize(t: &Tensor3, seed: u64) -> Result<CanonResult> {
    let (s, tdim, u) = (t.m(), t.n(), t.p());
    if u != 2 {
        return Err(Error::BadShape(format!("pencil canonicalization needs 2 slices, got {u}")));
    }
    if s == 0 || s >= tdim {
        return Err(Error::BadShape(format!("pencil needs 0 < s < t, got {s}x{tdim}")));
    }
    let tr = t.to_real();
    let scale = tr.max_abs();
    if scale == 0.0 {
        return Err(Error::DomainError("zero pencil is outside the generic domain".into()));
    }
    let a1 = numeric::to_na(tr.slice(0)) / scale;
    let a2 = numeric::to_na(tr.slice(1)) / scale;

    // unknown vector: vec(Q) row-major (t^2) then vec(R) row-major (s^2)
    let unknowns = tdim * tdim + s * s;
    let mut k = DMatrix::<f64>::zeros(2 * s * tdim, unknowns);
    for i in 0..s {
        for j in 0..tdim {
            let row1 = i * tdim + j;
            let row2 = s * tdim + i * tdim + j;
            for a in 0..tdim {
                k[(row1, a * tdim + j)] = a1[(i, a)];
                k[(row2, a * tdim + j)] = a2[(i, a)];
            }
            if j < s {
                k[(row1, tdim * tdim + i * s + j)] = -1.0;
            }
            if j >= tdim - s {
                k[(row2, tdim * tdim + i * s + (j - (tdim - s)))] = -1.0;
            }
        }
    }
    let null = numeric::null_space(&k, 1e-10);
    if null.ncols() == 0 {
        return Err(Error::DomainError("pencil solution space is empty".into()));
    }

    let mut ident = DVector::<f64>::zeros(unknowns);
    for a in 0..tdim {
        ident[a * tdim + a] = 1.0;
    }
    for c in 0..s {
        ident[tdim * tdim + c * s + c] = 1.0;
    }
    let projection = &null * (null.transpose() * &ident);

    let pattern = staircase_pattern(s, tdim, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(seed, 0x9E_0002, 0));
    for attempt in 0..8 {
        let z = if attempt == 0 {
            projection.clone()
        } else {
            let theta = DVector::from_fn(null.ncols(), |_, _| {
                rng.sample::<f64, _>(rand_distr::StandardNormal)
            });
            &null * theta
        };
        let mut q = DMatrix::<f64>::zeros(tdim, tdim);
        for a in 0..tdim {
            for b in 0..tdim {
                q[(a, b)] = z[a * tdim + b];
            }
        }
        let mut r = DMatrix::<f64>::zeros(s, s);
        for c in 0..s {
            for d in 0..s {
                r[(c, d)] = z[tdim * tdim + c * s + d];
            }
        }
        let rnorm = r.norm();
        if rnorm < 1e-12 {
            continue;
        }
        // joint rescale keeps the pair in the solution space
        let lambda = (s as f64).sqrt() / rnorm;
        q *= lambda;
        r *= lambda;
        if numeric::cond2(&q) > 1e10 || numeric::cond2(&r) > 1e10 {
            continue;
        }
        let Ok((rinv, _)) = numeric::inverse_with_cond(&r) else { continue };
        let pmat = numeric::from_na(&(rinv / scale));
        let qmat = numeric::from_na(&q);
        let canonical = sandwich(&pmat, &tr, &qmat)?;
        let residual = pattern_residual(&canonical, &pattern);
        if residual <= CANON_TOL {
            let cond_p = numeric::cond2(&numeric::to_na(&pmat));
            let cond_q = numeric::cond2(&q);
            return Ok(CanonResult { pmat, qmat, canonical, residual, cond_p, cond_q });
        }
    }
    Err(Error::DomainError("pencil outside the generic canonicalization domain".into()))
}

/// Canonicalize an s x t x u tensor (u >= 2, (u-1)s < t) to the staircase
/// form. Recursive peel: normalize the last slice, canonicalize the
/// s x (t-s) x (u-1) prefix, lift, then clear the trailing column block with
/// column operations through the identity blocks. The postcondition is
/// verified by recomputation; inputs already in canonical form come back with
/// identity transforms.
pub fn multi_canonicalize(t: &Tensor3, seed: u64) -> Result<CanonResult> {
    let (s, tdim, u) = (t.m(), t.n(), t.p());
    if u < 2 {
        return Err(Error::BadShape("multi canonicalization needs at least 2 slices".into()));
    }
    if (u - 1) * s >= tdim {
        return Err(Error::BadShape(format!(
            "staircase form needs (u-1)s < t, got s={s}, t={tdim}, u={u}"
        )));
    }
    let mut last_err = None;
    for attempt in 0..4 {
        let attempt_seed = seeds::derive(seed, 0x3117, attempt);
        match multi_canonicalize_once(t, attempt_seed) {
            Ok(res) => return Ok(res),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::DomainError("multi canonicalization failed".into())))
}

fn multi_canonicalize_once(t: &Tensor3, seed: u64) -> Result<CanonResult> {
    let (s, tdim, u) = (t.m(), t.n(), t.p());
    let pattern = staircase_pattern(s, tdim, u);
    if u == 2 {
        let res = pencil_canonicalize(t, seed)?;
        // identical target, re-expressed through the staircase mask
        let residual = pattern_residual(&res.canonical, &pattern);
        return Ok(CanonResult { residual, ..res });
    }

    let tr = t.to_real();
    let v = tdim - (u - 1) * s;

    // 1. move the last slice to (O, E_s)
    let lsn = last_slice_normalize(&tr, seeds::derive(seed, 1, 0))?;
    let t1 = lsn.canonical;

    // 2. recurse on the first t-s columns of the first u-1 slices
    let prefix = t1.slice_range(0, u - 1)?.cols_prefix(tdim - s)?;
    let rec = multi_canonicalize(&prefix, seeds::derive(seed, 2, 0))?;

    // 3. lift the recursive transforms; the inverse of the left transform on
    // the trailing columns keeps the last slice equal to (O, E_s)
    let p_rec = numeric::to_na(&rec.pmat);
    let (p_rec_inv, _) = numeric::inverse_with_cond(&p_rec)?;
    let q1 = block_diag(&[rec.qmat.clone(), numeric::from_na(&p_rec_inv)])?;
    let t2 = sandwich(&rec.pmat, &t1, &q1)?;

    // 4. clear the trailing s columns of the middle slices through their
    // identity blocks
    let mut cmat = Mat::identity(tdim, Kind::Real);
    for k in 1..(u - 1) {
        let g = t2.slice(k).block(0, tdim - s, s, s)?;
        let off = v + (k - 1) * s;
        for r in 0..s {
            for c in 0..s {
                cmat.set_real(off + r, tdim - s + c, -g.real_at(r, c));
            }
        }
    }
    let t3 = sandwich(&Mat::identity(s, Kind::Real), &t2, &cmat)?;

    // 5. clear the constrained top rows of the trailing block of slice 1
    // through its leading identity block
    let m_last = t3.slice(0).block(0, tdim - s, s, s)?;
    let clear_rows = v.min(s);
    let mut c2 = Mat::identity(tdim, Kind::Real);
    for r in 0..clear_rows {
        for c in 0..s {
            c2.set_real(r, tdim - s + c, -m_last.real_at(r, c));
        }
    }

    let qmat_na = numeric::to_na(&lsn.qmat)
        * numeric::to_na(&q1)
        * numeric::to_na(&cmat)
        * numeric::to_na(&c2);
    let qmat = numeric::from_na(&qmat_na);
    let pmat = rec.pmat.clone();

    let canonical = sandwich(&pmat, &tr, &qmat)?;
    let residual = pattern_residual(&canonical, &pattern);
    if residual > CANON_TOL {
        return Err(Error::DomainError(format!(
            "staircase residual {residual:.3e} exceeds {CANON_TOL:.0e}"
        )));
    }
    let cond_p = numeric::cond2(&numeric::to_na(&pmat));
    let cond_q = numeric::cond2(&qmat_na);
    Ok(CanonResult { pmat, qmat, canonical, residual, cond_p, cond_q })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_tensor(m: usize, n: usize, p: usize, seed: u64) -> Tensor3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let slices = (0..p)
            .map(|_| {
                Mat::from_fn_real(m, n, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal))
            })
            .collect();
        Tensor3::new(slices).unwrap()
    }

    fn max_dev_from_identity(m: &Mat) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((m.real_at(i, j) - target).abs());
            }
        }
        worst
    }

    #[test]
    fn last_slice_fixed_point_is_exact() {
        // (A_1; A_2; (O, E_2)) comes back with qmat = E_t and residual 0
        let mut slices = vec![
            gaussian_tensor(2, 4, 1, 5).slice(0).clone(),
            gaussian_tensor(2, 4, 1, 6).slice(0).clone(),
        ];
        slices.push(Mat::from_fn_real(2, 4, |i, j| if j == 2 + i { 1.0 } else { 0.0 }));
        let t = Tensor3::new(slices).unwrap();
        let res = last_slice_normalize(&t, 0).unwrap();
        assert_eq!(res.residual, 0.0);
        assert_eq!(max_dev_from_identity(&res.qmat), 0.0);
    }

    #[test]
    fn last_slice_normalizes_random_tensors() {
        for seed in 0..10 {
            let t = gaussian_tensor(2, 4, 3, 100 + seed);
            let res = last_slice_normalize(&t, seed).unwrap();
            assert!(res.residual <= 1e-10, "seed {seed}: residual {}", res.residual);
            // the last slice of the canonical output is (O, E_2)
            let last = res.canonical.slice(2);
            assert!((last.real_at(0, 2) - 1.0).abs() < 1e-10);
            assert!((last.real_at(1, 3) - 1.0).abs() < 1e-10);
            assert!(last.real_at(0, 0).abs() < 1e-10);
        }
    }

    #[test]
    fn last_slice_rejects_rank_deficient() {
        let t = Tensor3::new(vec![
            Mat::from_fn_real(2, 4, |_, _| 1.0),
            Mat::zeros(2, 4, Kind::Real),
        ])
        .unwrap();
        assert!(matches!(last_slice_normalize(&t, 0), Err(Error::DomainError(_))));
    }

    #[test]
    fn pencil_fixed_point() {
        let x = staircase_tensor(2, 3, 2).unwrap();
        let res = pencil_canonicalize(&x, 0).unwrap();
        assert!(res.residual <= 1e-12, "residual {}", res.residual);
        assert!(max_dev_from_identity(&res.pmat) <= 1e-12);
        assert!(max_dev_from_identity(&res.qmat) <= 1e-12);
    }

    #[test]
    fn pencil_canonicalizes_random_gaussian() {
        for (s, tdim) in [(2usize, 3usize), (3, 5), (3, 7)] {
            let mut ok = 0;
            for seed in 0..50 {
                let t = gaussian_tensor(s, tdim, 2, 1000 + seed);
                if let Ok(res) = pencil_canonicalize(&t, seed) {
                    assert!(res.residual <= CANON_TOL);
                    ok += 1;
                }
            }
            assert!(ok >= 49, "pencil {s}x{tdim}: {ok}/50");
        }
    }

    #[test]
    fn pencil_rejects_zero() {
        let z = Tensor3::new(vec![Mat::zeros(2, 3, Kind::Real); 2]).unwrap();
        assert!(matches!(pencil_canonicalize(&z, 0), Err(Error::DomainError(_))));
    }

    #[test]
    fn pencil_preserves_flatten_ranks() {
        let t = gaussian_tensor(3, 5, 2, 77);
        let res = pencil_canonicalize(&t, 0).unwrap();
        assert_eq!(
            crate::tensor::flatten_ranks(&t),
            crate::tensor::flatten_ranks(&res.canonical)
        );
    }

    #[test]
    fn multi_fixed_point() {
        let x = staircase_tensor(2, 5, 3).unwrap();
        let res = multi_canonicalize(&x, 0).unwrap();
        assert!(res.residual <= 1e-12, "residual {}", res.residual);
        assert!(max_dev_from_identity(&res.pmat) <= 1e-11);
        assert!(max_dev_from_identity(&res.qmat) <= 1e-11);
    }

    #[test]
    fn multi_canonicalizes_random_gaussian() {
        // shapes exercise the recursion (u >= 3) and the boundary t = us
        for (s, tdim, u) in [(2usize, 5usize, 3usize), (3, 7, 3), (2, 6, 3), (2, 7, 4)] {
            let mut ok = 0;
            for seed in 0..25 {
                let t = gaussian_tensor(s, tdim, u, 2000 + seed);
                if let Ok(res) = multi_canonicalize(&t, seed) {
                    assert!(res.residual <= CANON_TOL, "{s}x{tdim}x{u}: {}", res.residual);
                    ok += 1;
                }
            }
            assert!(ok >= 24, "multi {s}x{tdim}x{u}: {ok}/25");
        }
    }

    #[test]
    fn multi_m_block_vanishes_at_boundary() {
        // t >= us forces the whole trailing M block of slice 1 to zero
        let t = gaussian_tensor(2, 6, 3, 31);
        let res = multi_canonicalize(&t, 0).unwrap();
        let m = res.canonical.slice(0).block(0, 4, 2, 2).unwrap();
        assert!(m.max_abs() <= CANON_TOL, "M = {m:?}");
    }

    #[test]
    fn multi_rejects_shape_outside_staircase_domain() {
        let t = gaussian_tensor(3, 5, 3, 1);
        assert!(matches!(multi_canonicalize(&t, 0), Err(Error::BadShape(_))));
    }
}
