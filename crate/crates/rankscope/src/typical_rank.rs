//! The rank detector for n x p x m tensors with (m-2)n < p <= (m-1)n,
//! auxiliary rank oracles, and the Monte Carlo harness that exhibits plural
//! typical ranks.
//!
//! The detector canonicalizes the first m-1 slices to the staircase form,
//! derives the block matrices (B_i, C_i) from the last slice, assembles a
//! 2n x n x m stacked tensor, and checks it for absolute full column rank.
//! A non-falsified stacked tensor places the input in an open set on which
//! every tensor has rank strictly greater than p; a falsified one yields no
//! conclusion about the rank.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::afr::{afr_check_with, AfrOptions, Policy};
use crate::canonical::{multi_canonicalize, staircase_tensor};
use crate::constructions::CondSeq;
use crate::error::{Error, Result};
use crate::mat::{hstack, vstack, Kind, Mat};
use crate::numeric;
use crate::seeds;
use crate::tensor::{flatten_ranks, sandwich, Tensor3};

/// Detector outcome classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorStatus {
    /// The stacked tensor was not falsified: the input lies in the open set
    /// and has real rank > p.
    HigherRank,
    /// The stacked tensor was falsified: no conclusion about the rank.
    NotInU,
    /// Canonicalization failed or the block matrix was singular
    /// (a measure-zero boundary).
    DomainError,
}

/// Diagnostics recorded along the detector pipeline.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DetectorTranscript {
    /// Residual of the staircase canonicalization of the leading slices.
    pub canon_residual: Option<f64>,
    /// Condition number of the inverted block matrix V.
    pub v_cond: Option<f64>,
    /// Failure description when the status is a domain error.
    pub note: Option<String>,
}

/// Full detector verdict.
#[derive(Debug, Clone)]
pub struct DetectorVerdict {
    pub status: DetectorStatus,
    /// True when the AFR verdict on the stacked tensor was certified (exact
    /// or grid) rather than merely not falsified.
    pub certified: bool,
    /// The 2n x n x m stacked tensor that was tested, when it was built.
    pub stacked: Option<Tensor3>,
    pub transcript: DetectorTranscript,
}

/// Detector knobs; the AFR options govern the stacked-tensor check.
#[derive(Debug, Clone, Default)]
pub struct DetectorOptions {
    pub afr: AfrOptions,
    pub seed: u64,
}

fn split_cols(m: &Mat, widths: &[usize]) -> Result<Vec<Mat>> {
    let mut out = Vec::with_capacity(widths.len());
    let mut c0 = 0;
    for &w in widths {
        out.push(m.block(0, c0, m.rows(), w)?);
        c0 += w;
    }
    if c0 != m.cols() {
        return Err(Error::BadShape("split widths do not cover the matrix".into()));
    }
    Ok(out)
}

/// Run the detector with default options.
pub fn detector(t: &Tensor3) -> Result<DetectorVerdict> {
    detector_with(t, &DetectorOptions::default())
}

/// Run the detector on an n x p x m tensor with m >= 3 and
/// (m-2)n < p <= (m-1)n.
pub fn detector_with(t: &Tensor3, opts: &DetectorOptions) -> Result<DetectorVerdict> {
    let (n, p, m) = (t.m(), t.n(), t.p());
    if m < 3 || p <= (m - 2) * n || p > (m - 1) * n {
        return Err(Error::BadShape(format!(
            "detector needs n x p x m with m >= 3 and (m-2)n < p <= (m-1)n, got {n}x{p}x{m}"
        )));
    }
    let l = (m - 1) * n - p;
    let mut transcript = DetectorTranscript::default();

    // canonicalize the leading m-1 slices to the staircase form
    let leading = t.slice_range(0, m - 1)?;
    let canon = match multi_canonicalize(&leading, seeds::derive(opts.seed, 0xCA40, 0)) {
        Ok(c) => c,
        Err(Error::DomainError(msg)) => {
            transcript.note = Some(msg);
            return Ok(DetectorVerdict {
                status: DetectorStatus::DomainError,
                certified: false,
                stacked: None,
                transcript,
            });
        }
        Err(e) => return Err(e),
    };
    transcript.canon_residual = Some(canon.residual);
    let z = sandwich(&canon.pmat, &t.to_real(), &canon.qmat)?;

    // V = inverse of slice 1 stacked over (O | E_{p-n})
    let mut v_inv = DMatrix::<f64>::zeros(p, p);
    v_inv.view_mut((0, 0), (n, p)).copy_from(&numeric::to_na(z.slice(0)));
    for i in 0..(p - n) {
        v_inv[(n + i, n + i)] = 1.0;
    }
    let (v, v_cond) = match numeric::inverse_with_cond(&v_inv) {
        Ok(ok) => ok,
        Err(Error::DomainError(msg)) => {
            transcript.note = Some(msg);
            return Ok(DetectorVerdict {
                status: DetectorStatus::DomainError,
                certified: false,
                stacked: None,
                transcript,
            });
        }
        Err(e) => return Err(e),
    };
    transcript.v_cond = Some(v_cond);

    // split the last slice and its V-image into the block widths
    let mut widths = vec![n - l, l, n - l];
    widths.extend(std::iter::repeat(n).take(m - 3));
    let zm = z.slice(m - 1).clone();
    let zmv = zm.matmul(&numeric::from_na(&v))?;
    let b = split_cols(&zm, &widths)?;
    let c = split_cols(&zmv, &widths)?;

    // assemble the stacked tensor
    let zero_l = Mat::zeros(n, l, Kind::Real);
    let e_n = Mat::identity(n, Kind::Real);
    let mut slices = Vec::with_capacity(m);
    slices.push(vstack(&[
        hstack(&[b[0].clone(), zero_l.clone()])?,
        hstack(&[c[0].clone(), c[1].clone()])?,
    ])?);
    slices.push(vstack(&[
        hstack(&[b[1].clone(), b[2].clone()])?,
        hstack(&[zero_l, c[2].clone()])?,
    ])?);
    for k in 3..m {
        slices.push(vstack(&[b[k].clone(), c[k].clone()])?);
    }
    slices.push(vstack(&[e_n.clone(), e_n])?);
    let stacked = Tensor3::new(slices)?;

    let mut afr_opts = opts.afr.clone();
    afr_opts.seed = seeds::derive(opts.seed, 0xAF4, 0);
    let verdict = afr_check_with(&stacked, Policy::ExactFirst, &afr_opts);
    let status = if verdict.is_falsified() {
        DetectorStatus::NotInU
    } else {
        DetectorStatus::HigherRank
    };
    Ok(DetectorVerdict {
        status,
        certified: verdict.is_certified(),
        stacked: Some(stacked),
        transcript,
    })
}

/// Assemble the n x p x (m) tensor whose leading slices are the staircase
/// patterns and whose last slice is (A, A_3, ..., A_{m-1}), from a sequence
/// whose final extra is the identity. Feeding it to the detector reproduces
/// the stacked tensor of the sequence.
pub fn witness_from_seq(seq: &CondSeq) -> Result<Tensor3> {
    let (n, l, m) = (seq.n(), seq.l(), seq.m());
    let p = (m - 1) * n - l;
    let e_n = Mat::identity(n, seq.a().kind());
    let last_dev = match seq.a().kind() {
        Kind::ExactInt => {
            if *seq.extras().last().expect("m >= 3") == e_n {
                0.0
            } else {
                1.0
            }
        }
        Kind::Real => seq.extras().last().expect("m >= 3").sub(&e_n)?.max_abs(),
    };
    if last_dev > 1e-9 {
        return Err(Error::DomainError(
            "witness assembly needs the final extra matrix to be the identity".into(),
        ));
    }
    let stair = staircase_tensor(n, p, m - 1)?;
    let stair = match seq.a().kind() {
        Kind::ExactInt => stair,
        Kind::Real => stair.to_real(),
    };
    let mut last_parts = vec![seq.a().clone()];
    last_parts.extend(seq.extras()[..m - 3].iter().cloned());
    let y_m = hstack(&last_parts)?;
    let mut slices: Vec<Mat> = stair.slices().to_vec();
    slices.push(y_m);
    Tensor3::new(slices)
}

/// Verdict of the two-slice eigenvalue rank rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank2 {
    Rank(usize),
    /// Numerically borderline (near-defective or near-singular) input.
    Indeterminate,
}

/// Rank of an n x n x 2 tensor with invertible first slice via the spectrum
/// of A_1^{-1} A_2: n when diagonalizable with a real spectrum, n + 1 when
/// the spectrum is robustly non-real, n + 1 for the robustly defective 2 x 2
/// case, and Indeterminate in the numerical gray zone.
pub fn rank_nn2(t: &Tensor3) -> Result<Rank2> {
    let n = t.m();
    if t.n() != n || t.p() != 2 {
        return Err(Error::BadShape(format!(
            "two-slice rank rule needs n x n x 2, got {}x{}x{}",
            t.m(),
            t.n(),
            t.p()
        )));
    }
    let a1 = numeric::to_na(t.slice(0));
    let sv = a1.clone().singular_values();
    if sv.min() <= numeric::RANK_TOL * sv.max().max(1.0) {
        return Ok(Rank2::Indeterminate);
    }
    let a2 = numeric::to_na(t.slice(1));
    let m = a1.lu().solve(&a2).ok_or_else(|| Error::DomainError("slice solve failed".into()))?;
    let eig = m.clone().complex_eigenvalues();
    let radius = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let imag_max = eig.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag_max > 1e-8 * radius.max(1e-300) {
        return Ok(Rank2::Rank(n + 1));
    }

    // real spectrum: group eigenvalues and check geometric multiplicities
    let mut reals: Vec<f64> = eig.iter().map(|z| z.re).collect();
    reals.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let gap = 1e-8 * radius.max(1.0);
    let mut idx = 0;
    while idx < reals.len() {
        let mut end = idx + 1;
        while end < reals.len() && reals[end] - reals[end - 1] <= gap {
            end += 1;
        }
        let mult = end - idx;
        if mult >= 2 {
            let center = reals[idx..end].iter().sum::<f64>() / mult as f64;
            let shifted = &m - DMatrix::<f64>::identity(n, n) * center;
            let mut sv: Vec<f64> = shifted.singular_values().iter().copied().collect();
            sv.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            let pivot = sv[mult - 1];
            let scale = radius.max(1.0);
            if pivot > 1e-8 * scale {
                if pivot >= 1e-4 * scale && n == 2 {
                    // a 2 x 2 with repeated eigenvalue is diagonalizable only
                    // when it is that multiple of the identity
                    return Ok(Rank2::Rank(3));
                }
                return Ok(Rank2::Indeterminate);
            }
        }
        idx = end;
    }
    Ok(Rank2::Rank(n))
}

/// Outcome of a rank <= r least-squares fit search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitOutcome {
    /// A factorization with relative residual <= 1e-6 was found: evidence of
    /// rank <= r.
    FitFound { residual: f64 },
    /// No fit reached the tolerance; NOT a proof of rank > r.
    NoFit { best_residual: f64 },
}

impl FitOutcome {
    pub fn found(&self) -> bool {
        matches!(self, FitOutcome::FitFound { .. })
    }
}

/// Relative residual under which a factorization counts as a fit.
pub const FIT_TOL: f64 = 1e-6;

/// Multistart alternating least squares search for a rank-r factorization
/// sum_{i<=r} a_i (x) b_i (x) c_i.
pub fn rank_leq_oracle(t: &Tensor3, r: usize, restarts: usize, seed: u64) -> FitOutcome {
    let (d1, d2, d3) = (t.m(), t.n(), t.p());
    let r = r.max(1);
    // mode unfoldings, built once
    let mut u1 = DMatrix::<f64>::zeros(d1, d2 * d3);
    let mut u2 = DMatrix::<f64>::zeros(d2, d1 * d3);
    let mut u3 = DMatrix::<f64>::zeros(d3, d1 * d2);
    for k in 0..d3 {
        for i in 0..d1 {
            for j in 0..d2 {
                let x = t.slice(k).real_at(i, j);
                u1[(i, k * d2 + j)] = x;
                u2[(j, k * d1 + i)] = x;
                u3[(k, j * d1 + i)] = x;
            }
        }
    }
    let norm = u1.norm();
    if norm == 0.0 {
        return FitOutcome::FitFound { residual: 0.0 };
    }

    let kr = |x: &DMatrix<f64>, y: &DMatrix<f64>| -> DMatrix<f64> {
        // Khatri-Rao product with row blocks indexed (x-row, y-row)
        let mut out = DMatrix::zeros(x.nrows() * y.nrows(), r);
        for a in 0..x.nrows() {
            for b in 0..y.nrows() {
                for s in 0..r {
                    out[(a * y.nrows() + b, s)] = x[(a, s)] * y[(b, s)];
                }
            }
        }
        out
    };
    let solve_mode = |unfold: &DMatrix<f64>, f1: &DMatrix<f64>, f2: &DMatrix<f64>| {
        let gram =
            (f1.transpose() * f1).component_mul(&(f2.transpose() * f2));
        let pinv = gram
            .svd(true, true)
            .pseudo_inverse(1e-12 * gram.amax().max(1.0))
            .expect("svd converged");
        unfold * kr(f1, f2) * pinv
    };

    let mut best = f64::INFINITY;
    for restart in 0..restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(seed, 0xCB, restart as u64));
        let mut gauss =
            |rows: usize| DMatrix::from_fn(rows, r, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
        let mut fa = gauss(d1);
        let mut fb = gauss(d2);
        let mut fc = gauss(d3);
        let mut prev = f64::INFINITY;
        for _ in 0..500 {
            fa = solve_mode(&u1, &fc, &fb);
            fb = solve_mode(&u2, &fc, &fa);
            fc = solve_mode(&u3, &fb, &fa);
            let residual = (&u1 - &fa * kr(&fc, &fb).transpose()).norm() / norm;
            if residual <= FIT_TOL {
                return FitOutcome::FitFound { residual };
            }
            if prev - residual <= 1e-12 {
                best = best.min(residual);
                break;
            }
            prev = residual;
            best = best.min(residual);
        }
    }
    FitOutcome::NoFit { best_residual: best }
}

/// True iff the smallest r with a found fit is at least
/// max(crank, rrank); both flattening ranks lower-bound the tensor rank, so
/// this must hold whenever the fit oracle is truthful.
pub fn lower_bound_check(t: &Tensor3) -> bool {
    let (crank, rrank) = flatten_ranks(t);
    let bound = crank.max(rrank);
    if bound == 0 {
        return true;
    }
    let cap = (t.m() * t.n()).min(t.n() * t.p()).min(t.m() * t.p());
    for r in 1..=cap {
        if rank_leq_oracle(t, r, 8, 0x10BB).found() {
            return r >= bound;
        }
    }
    false
}

/// Standard Gaussian rows x cols x slices tensor from a fixed seed.
pub fn gaussian_tensor(rows: usize, cols: usize, slices: usize, seed: u64) -> Tensor3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mats = (0..slices)
        .map(|_| {
            Mat::from_fn_real(rows, cols, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal))
        })
        .collect();
    Tensor3::new(mats).expect("positive dimensions")
}

/// Tallies of detector outcomes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct McCounts {
    pub higher_rank: usize,
    pub not_in_u: usize,
    pub domain_error: usize,
}

/// Summary of a Monte Carlo run over i.i.d. Gaussian n x p x m tensors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub samples: usize,
    pub seed: u64,
    pub counts: McCounts,
    /// Samples whose rank-p fit search succeeded (0 without crosscheck).
    pub fit_found_p: usize,
    pub fraction_higher: f64,
    pub fraction_fit_p: f64,
    /// Wall-clock seconds; the only schedule-dependent field.
    pub runtime_seconds: f64,
}

impl McSummary {
    /// Copy with the wall-clock field zeroed, for reproducibility comparisons.
    pub fn without_runtime(&self) -> McSummary {
        McSummary { runtime_seconds: 0.0, ..self.clone() }
    }
}

/// Monte Carlo experiment with the default thread pool.
pub fn mc_experiment(
    m: usize,
    n: usize,
    p: usize,
    samples: usize,
    seed: u64,
    crosscheck: bool,
) -> Result<McSummary> {
    mc_experiment_with_workers(m, n, p, samples, seed, crosscheck, None)
}

/// Monte Carlo experiment over samples of i.i.d. standard Gaussian n x p x m
/// tensors. Every per-sample stream is derived from (seed, index), so the
/// tallies are identical for any worker count.
pub fn mc_experiment_with_workers(
    m: usize,
    n: usize,
    p: usize,
    samples: usize,
    seed: u64,
    crosscheck: bool,
    workers: Option<usize>,
) -> Result<McSummary> {
    if m < 3 || p <= (m - 2) * n || p > (m - 1) * n {
        return Err(Error::BadShape(format!(
            "experiment shape needs m >= 3 and (m-2)n < p <= (m-1)n, got m={m}, n={n}, p={p}"
        )));
    }
    let start = Instant::now();
    let run_sample = |i: usize| -> (DetectorStatus, bool) {
        let t = gaussian_tensor(n, p, m, seeds::derive(seed, 0x5A3917E, i as u64));
        let opts = DetectorOptions {
            afr: AfrOptions::default(),
            seed: seeds::derive(seed, 0xDE7EC7, i as u64),
        };
        let status = match detector_with(&t, &opts) {
            Ok(v) => v.status,
            Err(_) => DetectorStatus::DomainError,
        };
        let fit = if crosscheck && status == DetectorStatus::NotInU {
            rank_leq_oracle(&t, p, 10, seeds::derive(seed, 0xCC0, i as u64)).found()
        } else {
            false
        };
        (status, fit)
    };
    let collect = || -> Vec<(DetectorStatus, bool)> {
        (0..samples).into_par_iter().map(run_sample).collect()
    };
    let outcomes = match workers {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?
            .install(collect),
        None => collect(),
    };

    let mut counts = McCounts::default();
    let mut fit_found_p = 0;
    for (status, fit) in &outcomes {
        match status {
            DetectorStatus::HigherRank => counts.higher_rank += 1,
            DetectorStatus::NotInU => counts.not_in_u += 1,
            DetectorStatus::DomainError => counts.domain_error += 1,
        }
        if *fit {
            fit_found_p += 1;
        }
    }
    let denom = samples.max(1) as f64;
    Ok(McSummary {
        m,
        n,
        p,
        samples,
        seed,
        counts,
        fit_found_p,
        fraction_higher: counts.higher_rank as f64 / denom,
        fraction_fit_p: fit_found_p as f64 / denom,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_misc, sp_afr_to_seq, MiscCase};
    use crate::hurwitz::gen_a;

    fn coarse_opts(seed: u64) -> DetectorOptions {
        DetectorOptions { afr: AfrOptions { mesh: 0.05, ..AfrOptions::default() }, seed }
    }

    #[test]
    fn rank_nn2_examples() {
        let e2 = Mat::identity(2, Kind::ExactInt);
        let t = Tensor3::new(vec![e2.clone(), gen_a()]).unwrap();
        assert_eq!(rank_nn2(&t).unwrap(), Rank2::Rank(3));

        let diag12 = Mat::from_int_rows(&[vec![1, 0], vec![0, 2]]).unwrap();
        let t = Tensor3::new(vec![e2.clone(), diag12]).unwrap();
        assert_eq!(rank_nn2(&t).unwrap(), Rank2::Rank(2));

        let nilp = Mat::from_int_rows(&[vec![0, 1], vec![0, 0]]).unwrap();
        let t = Tensor3::new(vec![e2.clone(), nilp]).unwrap();
        assert_eq!(rank_nn2(&t).unwrap(), Rank2::Rank(3));

        let t = Tensor3::new(vec![e2.clone(), e2.clone()]).unwrap();
        assert_eq!(rank_nn2(&t).unwrap(), Rank2::Rank(2));

        let singular = Mat::from_int_rows(&[vec![1, 0], vec![0, 0]]).unwrap();
        let t = Tensor3::new(vec![singular, e2]).unwrap();
        assert_eq!(rank_nn2(&t).unwrap(), Rank2::Indeterminate);
    }

    #[test]
    fn fit_oracle_rank_one() {
        let a = [1.0f64, -2.0];
        let b = [0.5f64, 1.0, 2.0];
        let c = [3.0f64, 1.0];
        let slices = c
            .iter()
            .map(|ck| Mat::from_fn_real(2, 3, |i, j| a[i] * b[j] * ck))
            .collect();
        let t = Tensor3::new(slices).unwrap();
        match rank_leq_oracle(&t, 1, 4, 0) {
            FitOutcome::FitFound { residual } => assert!(residual <= 1e-10),
            other => panic!("rank-1 tensor must fit at r = 1, got {other:?}"),
        }
    }

    #[test]
    fn fit_oracle_separates_rotation_pair() {
        let t = Tensor3::new(vec![Mat::identity(2, Kind::ExactInt), gen_a()]).unwrap();
        match rank_leq_oracle(&t, 2, 10, 0) {
            FitOutcome::NoFit { best_residual } => {
                assert!(best_residual >= 0.05, "best {best_residual}")
            }
            other => panic!("rank 3 over the reals, got {other:?}"),
        }
        assert!(rank_leq_oracle(&t, 3, 10, 0).found());
    }

    #[test]
    fn detector_accepts_the_witness() {
        let seq = sp_afr_to_seq(&build_misc(MiscCase::M3, 3).unwrap(), 1, 0).unwrap();
        let y = witness_from_seq(&seq).unwrap();
        assert_eq!((y.m(), y.n(), y.p()), (3, 5, 3));
        let verdict = detector_with(&y, &coarse_opts(0)).unwrap();
        assert_eq!(verdict.status, DetectorStatus::HigherRank);
        assert!(verdict.certified, "transcript: {:?}", verdict.transcript);
    }

    #[test]
    fn detector_rejects_zero_first_slice() {
        let mut slices = gaussian_tensor(3, 5, 3, 4).slices().to_vec();
        slices[0] = Mat::zeros(3, 5, Kind::Real);
        let t = Tensor3::new(slices).unwrap();
        let verdict = detector_with(&t, &coarse_opts(0)).unwrap();
        assert_eq!(verdict.status, DetectorStatus::DomainError);
    }

    #[test]
    fn detector_rejects_bad_shapes() {
        let t = gaussian_tensor(3, 3, 3, 1);
        assert!(matches!(detector(&t), Err(Error::BadShape(_))));
    }

    #[test]
    fn mc_smoke_both_classes_appear() {
        let s = mc_experiment_with_workers(3, 3, 5, 40, 42, false, Some(2)).unwrap();
        assert_eq!(
            s.counts.higher_rank + s.counts.not_in_u + s.counts.domain_error,
            40
        );
        assert!(s.counts.higher_rank > 0);
        assert!(s.counts.not_in_u > 0);
    }

    #[test]
    fn mc_reproducible_across_worker_counts() {
        let a = mc_experiment_with_workers(3, 3, 5, 16, 7, true, Some(1)).unwrap();
        let b = mc_experiment_with_workers(3, 3, 5, 16, 7, true, Some(4)).unwrap();
        assert_eq!(a.without_runtime(), b.without_runtime());
    }

    #[test]
    fn mc_rejects_boundary_shape() {
        assert!(matches!(
            mc_experiment(3, 3, 3, 4, 0, false),
            Err(Error::BadShape(_))
        ));
    }

    #[test]
    fn cross_oracle_2x2x2() {
        let mut checked = 0;
        for seed in 0..40 {
            let t = gaussian_tensor(2, 2, 2, 900 + seed);
            let Rank2::Rank(r) = rank_nn2(&t).unwrap() else { continue };
            let mut smallest = None;
            for cand in 1..=4 {
                if rank_leq_oracle(&t, cand, 8, seed).found() {
                    smallest = Some(cand);
                    break;
                }
            }
            assert_eq!(smallest, Some(r), "seed {seed}");
            checked += 1;
        }
        assert!(checked >= 35, "only {checked} decidable samples");
    }

    #[test]
    fn lower_bound_holds_on_random_integer_tensors() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let slices = (0..2)
                .map(|_| Mat::from_fn_int(2, 2, |_, _| rng.random_range(-2..=2)))
                .collect();
            let t = Tensor3::new(slices).unwrap();
            assert!(lower_bound_check(&t));
        }
    }
}
