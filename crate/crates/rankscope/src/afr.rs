//! Absolutely-full-column-rank (AFR) decisions.
//!
//! An l x n x p tensor (A_1; ...; A_p) is AFR when every nonzero real
//! combination sum x_k A_k has full column rank n. Equivalently,
//! sum_i x_i A_i y != 0 for all unit vectors x, y. The set of AFR tensors is
//! open, so a positive certified margin is stable under small perturbations.
//!
//! Three complementary deciders live here:
//! - [`exact_certify`]: a sufficient orthogonality-system certificate checked
//!   in exact arithmetic (sufficient, not necessary);
//! - [`falsify`]: multistart alternating minimization of |sum x_i A_i y| over
//!   the product of unit spheres, producing an explicit witness when it finds
//!   a (near-)zero;
//! - [`grid_certify`]: a Lipschitz covering bound over the x-sphere giving a
//!   certified positive lower bound on the minimal n-th singular value.
//!
//! [`afr_check`] chains them into one sound pipeline, and [`transform`]
//! applies the four AFR-preserving reshapings (rotation, zero-row padding,
//! column cuts, Kronecker lifts).

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mat::{kron, vstack, Mat};
use crate::numeric;
use crate::seeds;
use crate::tensor::Tensor3;

/// An explicit pair of unit vectors with a small combination norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// Unit vector over the slices.
    pub x: Vec<f64>,
    /// Unit vector over the columns.
    pub y: Vec<f64>,
    /// |sum_i x_i A_i y| at the witness.
    pub residual: f64,
}

/// Outcome of an AFR check.
#[derive(Debug, Clone, PartialEq)]
pub enum AfrVerdict {
    /// The exact orthogonality certificate holds; the tensor is AFR.
    CertifiedExact,
    /// A grid covering certified min_x sigma_n >= margin > 0.
    CertifiedNumeric { margin: f64 },
    /// An explicit near-zero combination was found; the tensor is not AFR.
    Falsified { witness: Witness },
    /// Neither certified nor falsified.
    Inconclusive,
}

impl AfrVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, AfrVerdict::CertifiedExact | AfrVerdict::CertifiedNumeric { .. })
    }

    pub fn is_falsified(&self) -> bool {
        matches!(self, AfrVerdict::Falsified { .. })
    }
}

/// Check order inside [`afr_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Try the exact certificate before any numerics.
    ExactFirst,
    /// Skip the exact certificate.
    NumericOnly,
}

/// Tunable knobs for the numeric deciders; the defaults match the CLI.
#[derive(Debug, Clone)]
pub struct AfrOptions {
    /// Multistart count for falsification.
    pub restarts: usize,
    /// Relative witness tolerance: accept |sum x_i A_i y| <= tol * max_i |A_i|_2.
    pub falsify_tol: f64,
    /// Iteration cap per restart.
    pub max_iters: usize,
    /// Covering radius of the certification net on the x-sphere.
    pub mesh: f64,
    /// Extra gap demanded beyond the Lipschitz slack before certifying.
    pub slack: f64,
    /// Base seed for all derived deterministic streams.
    pub seed: u64,
}

impl Default for AfrOptions {
    fn default() -> Self {
        AfrOptions {
            restarts: 32,
            falsify_tol: 1e-9,
            max_iters: 200,
            mesh: 0.01,
            slack: 1e-9,
            seed: 0,
        }
    }
}

/// Sufficient exact certificate: A_i^T A_i = E_n for every slice and
/// A_i^T A_j + A_j^T A_i = 0 for every pair. When it holds,
/// (sum x_i A_i)^T (sum x_i A_i) = |x|^2 E_n, so the tensor is AFR.
/// `false` means "no certificate", not "not AFR".
pub fn exact_certify(t: &Tensor3) -> Result<bool> {
    let (l, n) = (t.m(), t.n());
    if l < n {
        return Err(Error::BadShape(format!(
            "exact_certify needs at least as many rows as columns, got {l}x{n}"
        )));
    }
    match t.kind() {
        crate::mat::Kind::ExactInt => {
            let e = Mat::identity(n, crate::mat::Kind::ExactInt);
            let zero = Mat::zeros(n, n, crate::mat::Kind::ExactInt);
            for i in 0..t.p() {
                let gi = t.slice(i).transpose().matmul(t.slice(i))?;
                if gi != e {
                    return Ok(false);
                }
                for j in (i + 1)..t.p() {
                    let gij = t.slice(i).transpose().matmul(t.slice(j))?;
                    let gji = t.slice(j).transpose().matmul(t.slice(i))?;
                    if gij.add(&gji)? != zero {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        crate::mat::Kind::Real => {
            let s = t.max_abs();
            let tol = 1e-12 * (s * s).max(1.0);
            let slices: Vec<DMatrix<f64>> = t.slices().iter().map(numeric::to_na).collect();
            let e = DMatrix::<f64>::identity(n, n);
            for i in 0..slices.len() {
                if (slices[i].transpose() * &slices[i] - &e).amax() > tol {
                    return Ok(false);
                }
                for j in (i + 1)..slices.len() {
                    let cross =
                        slices[i].transpose() * &slices[j] + slices[j].transpose() * &slices[i];
                    if cross.amax() > tol {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

fn na_slices(t: &Tensor3) -> Vec<DMatrix<f64>> {
    t.slices().iter().map(numeric::to_na).collect()
}

fn slice_norm_scale(slices: &[DMatrix<f64>]) -> f64 {
    slices.iter().map(numeric::spectral_norm).fold(0.0, f64::max)
}

fn combine(slices: &[DMatrix<f64>], x: &DVector<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(slices[0].nrows(), slices[0].ncols());
    for (k, a) in slices.iter().enumerate() {
        m += a * x[k];
    }
    m
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
        let norm = v.norm();
        if norm > 1e-9 {
            return v / norm;
        }
    }
}

/// Multistart alternating minimization of f(x, y) = |sum_i x_i A_i y|^2 over
/// the product of unit spheres. For fixed x the optimal y is the least right
/// singular vector of sum x_i A_i; for fixed y the optimal x is the least
/// right singular vector of the matrix with columns A_i y. Returns the first
/// witness with residual <= tol * max_i |A_i|_2, searching restarts in a
/// fixed seeded order.
pub fn falsify(t: &Tensor3, restarts: usize, tol: f64, seed: u64) -> Option<Witness> {
    let slices = na_slices(t);
    let p = slices.len();
    let scale = slice_norm_scale(&slices);
    if scale == 0.0 {
        // the zero tensor: every combination is zero
        let mut x = vec![0.0; p];
        x[0] = 1.0;
        let mut y = vec![0.0; t.n()];
        y[0] = 1.0;
        return Some(Witness { x, y, residual: 0.0 });
    }
    let tol_abs = tol * scale;
    for r in 0..restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(seed, 0xFA15, r as u64));
        let mut x = random_unit(p, &mut rng);
        let mut prev = f64::INFINITY;
        for _ in 0..200 {
            let m = combine(&slices, &x);
            let (_, y) = numeric::min_sv_right(&m);
            let mut g = DMatrix::zeros(slices[0].nrows(), p);
            for k in 0..p {
                g.set_column(k, &(&slices[k] * &y));
            }
            let (sigma, xn) = numeric::min_sv_right(&g);
            x = xn;
            if sigma <= tol_abs {
                return Some(Witness {
                    x: x.iter().copied().collect(),
                    y: y.iter().copied().collect(),
                    residual: sigma,
                });
            }
            if (prev - sigma).abs() <= 1e-14 * scale {
                break;
            }
            prev = sigma;
        }
    }
    None
}

/// A finite net on the unit sphere S^{p-1} with covering radius <= mesh.
///
/// p = 2 uses a uniform angular grid. p = 3, 4 subdivide each facet of the
/// cross-polytope boundary into lattice simplices and project radially; on
/// the unit 1-norm sphere every point has 2-norm >= 1/sqrt(p) and radial
/// projection is (1/r)-Lipschitz outside radius r, so subdivision depth
/// d >= sqrt(2 p)/mesh suffices.
pub(crate) fn sphere_net(p: usize, mesh: f64) -> Result<Vec<DVector<f64>>> {
    if mesh <= 0.0 {
        return Err(Error::BadIndex("mesh must be positive".into()));
    }
    match p {
        1 => Ok(vec![DVector::from_vec(vec![1.0]), DVector::from_vec(vec![-1.0])]),
        2 => {
            let half = (mesh.min(1.0) / 2.0).asin();
            let count = ((std::f64::consts::PI / (2.0 * half)).ceil() as usize).max(4);
            Ok((0..count)
                .map(|k| {
                    let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                    DVector::from_vec(vec![theta.cos(), theta.sin()])
                })
                .collect())
        }
        3 | 4 => {
            let d = ((2.0 * p as f64).sqrt() / mesh).ceil() as usize;
            let mut points = Vec::new();
            let mut comp = vec![0usize; p];
            compositions(d, p, 0, &mut comp, &mut |c: &[usize]| {
                let support: Vec<usize> = (0..p).filter(|&i| c[i] > 0).collect();
                for mask in 0..(1u32 << support.len()) {
                    let mut v = DVector::zeros(p);
                    for (bit, &i) in support.iter().enumerate() {
                        let sign = if mask >> bit & 1 == 1 { -1.0 } else { 1.0 };
                        v[i] = sign * c[i] as f64 / d as f64;
                    }
                    let norm = v.norm();
                    points.push(v / norm);
                }
            });
            Ok(points)
        }
        _ => Err(Error::Unsupported(format!(
            "grid certification covers at most 4 slices, got {p}"
        ))),
    }
}

fn compositions(
    total: usize,
    parts: usize,
    idx: usize,
    buf: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if idx == parts - 1 {
        buf[idx] = total;
        f(buf);
        return;
    }
    for v in 0..=total {
        buf[idx] = v;
        compositions(total - v, parts, idx + 1, buf, f);
    }
}

/// Covering certification: evaluates sigma_n(sum x_i A_i) on a mesh-net over
/// the x-sphere. With Lipschitz constant L = sqrt(sum_i |A_i|_2^2) the n-th
/// singular value varies by at most L |x - x'|, so
/// min over the net >= L*mesh + slack certifies the positive margin
/// min_net - L*mesh over the whole sphere.
pub fn grid_certify(t: &Tensor3, mesh: f64, slack: f64, seed: u64) -> Result<AfrVerdict> {
    let p = t.p();
    if p > 4 {
        return Err(Error::Unsupported(format!(
            "grid certification covers at most 4 slices, got {p}"
        )));
    }
    let slices = na_slices(t);
    let scale = slice_norm_scale(&slices);
    let lipschitz = slices
        .iter()
        .map(|a| numeric::spectral_norm(a).powi(2))
        .sum::<f64>()
        .sqrt();
    let net = sphere_net(p, mesh)?;
    let mut min_sigma = f64::INFINITY;
    for x in &net {
        let m = combine(&slices, x);
        let (sigma, _) = numeric::min_sv_right(&m);
        min_sigma = min_sigma.min(sigma);
    }
    if min_sigma >= lipschitz * mesh + slack {
        return Ok(AfrVerdict::CertifiedNumeric { margin: min_sigma - lipschitz * mesh });
    }
    if min_sigma <= 1e-9 * scale.max(1.0) {
        if let Some(witness) = falsify(t, 32, 1e-9, seed) {
            return Ok(AfrVerdict::Falsified { witness });
        }
    }
    Ok(AfrVerdict::Inconclusive)
}

/// Full decision pipeline with default options.
pub fn afr_check(t: &Tensor3, policy: Policy) -> AfrVerdict {
    afr_check_with(t, policy, &AfrOptions::default())
}

/// Full decision pipeline:
/// fewer rows than columns falsifies trivially; then the exact certificate
/// (unless the policy skips it); then falsification; then grid certification
/// when p <= 4; otherwise inconclusive. A falsifiable tensor can never come
/// back certified because falsification runs before certification.
pub fn afr_check_with(t: &Tensor3, policy: Policy, opts: &AfrOptions) -> AfrVerdict {
    let (l, n) = (t.m(), t.n());
    if l < n {
        // rank of any combination is at most l < n: exhibit a kernel vector
        let a1 = numeric::to_na(t.slice(0));
        let ns = numeric::null_space(&a1, numeric::RANK_TOL);
        let y: DVector<f64> = if ns.ncols() > 0 {
            ns.column(0).into_owned()
        } else {
            DVector::from_fn(n, |i, _| if i == 0 { 1.0 } else { 0.0 })
        };
        let residual = (&a1 * &y).norm();
        let mut x = vec![0.0; t.p()];
        x[0] = 1.0;
        return AfrVerdict::Falsified {
            witness: Witness { x, y: y.iter().copied().collect(), residual },
        };
    }
    if policy == Policy::ExactFirst {
        if let Ok(true) = exact_certify(t) {
            return AfrVerdict::CertifiedExact;
        }
    }
    if let Some(witness) = falsify(t, opts.restarts, opts.falsify_tol, opts.seed) {
        return AfrVerdict::Falsified { witness };
    }
    if t.p() <= 4 {
        if let Ok(v) = grid_certify(t, opts.mesh, opts.slack, opts.seed) {
            return v;
        }
    }
    AfrVerdict::Inconclusive
}

/// The four AFR-preserving reshapings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// l x n x p -> l x p x n: slice j of the result collects column j of the
    /// input slices in reverse slice order. Preserves AFR in both directions.
    Rotate,
    /// Append k zero rows to every slice.
    PadRows(usize),
    /// Keep the first k columns (1 <= k <= n-1).
    CutCols(usize),
    /// Replace every slice A_i by E_u (x) A_i.
    KronLift(usize),
}

/// Apply an AFR-preserving transform; entry kind is preserved.
pub fn transform(t: &Tensor3, spec: Transform) -> Result<Tensor3> {
    match spec {
        Transform::Rotate => {
            let (l, n, p) = (t.m(), t.n(), t.p());
            let mut out = Vec::with_capacity(n);
            for j in 0..n {
                let mut b = Mat::zeros(l, p, t.kind());
                for k in 0..p {
                    let col = t.slice(p - 1 - k).block(0, j, l, 1)?;
                    b.paste(0, k, &col)?;
                }
                out.push(b);
            }
            Tensor3::new(out)
        }
        Transform::PadRows(k) => {
            if k == 0 {
                return Err(Error::BadIndex("pad_rows needs k >= 1".into()));
            }
            let zeros = Mat::zeros(k, t.n(), t.kind());
            let slices = t
                .slices()
                .iter()
                .map(|s| vstack(&[s.clone(), zeros.clone()]))
                .collect::<Result<Vec<_>>>()?;
            Tensor3::new(slices)
        }
        Transform::CutCols(k) => {
            if k == 0 || k >= t.n() {
                return Err(Error::BadIndex(format!(
                    "cut_cols needs 1 <= k <= {}, got {k}",
                    t.n() - 1
                )));
            }
            t.cols_prefix(k)
        }
        Transform::KronLift(u) => {
            if u == 0 {
                return Err(Error::BadIndex("kron_lift needs u >= 1".into()));
            }
            let e_u = Mat::identity(u, t.kind());
            let slices = t
                .slices()
                .iter()
                .map(|s| kron(&e_u, s))
                .collect::<Result<Vec<_>>>()?;
            Tensor3::new(slices)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::{ans_tensor, gen_a, gen_p};
    use crate::mat::Kind;

    fn pair(a: Mat, b: Mat) -> Tensor3 {
        Tensor3::new(vec![a, b]).unwrap()
    }

    fn a_e2() -> Tensor3 {
        pair(gen_a(), Mat::identity(2, Kind::ExactInt))
    }

    #[test]
    fn exact_certificate_examples() {
        assert!(exact_certify(&a_e2()).unwrap());

        let col1 = Mat::from_int_rows(&[vec![1], vec![0]]).unwrap();
        let col2 = Mat::from_int_rows(&[vec![0], vec![1]]).unwrap();
        assert!(exact_certify(&pair(col1, col2)).unwrap());

        let diag12 = Mat::from_int_rows(&[vec![1, 0], vec![0, 2]]).unwrap();
        assert!(!exact_certify(&pair(Mat::identity(2, Kind::ExactInt), diag12)).unwrap());

        let wide = Tensor3::new(vec![Mat::zeros(2, 3, Kind::ExactInt)]).unwrap();
        assert!(matches!(exact_certify(&wide), Err(Error::BadShape(_))));
    }

    #[test]
    fn falsify_finds_pencil_roots() {
        let diag12 = Mat::from_int_rows(&[vec![1, 0], vec![0, 2]]).unwrap();
        let t = pair(Mat::identity(2, Kind::ExactInt), diag12);
        let w = falsify(&t, 16, 1e-9, 0).expect("diagonal pencil has real roots");
        let xnorm: f64 = w.x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let ynorm: f64 = w.y.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((xnorm - 1.0).abs() < 1e-12);
        assert!((ynorm - 1.0).abs() < 1e-12);
        assert!(w.residual <= 1e-9 * 2.0);
        // the two singular directions are x ~ (1,-1)/sqrt2 at y = e1 and
        // x ~ (2,-1)/sqrt5 at y = e2
        let r1 = (w.x[0] + w.x[1]).abs() * w.y[0].abs();
        let r2 = (2.0 * w.x[0] + w.x[1]).abs() * w.y[1].abs();
        assert!(r1 < 1e-6 || r2 < 1e-6);
    }

    #[test]
    fn falsify_swap_pencil() {
        let t = pair(Mat::identity(2, Kind::ExactInt), gen_p());
        let w = falsify(&t, 16, 1e-9, 0).expect("x1^2 = x2^2 has real solutions");
        assert!(w.residual <= 1e-8);
    }

    #[test]
    fn falsify_cannot_break_rotation_pair() {
        assert!(falsify(&a_e2(), 16, 1e-9, 0).is_none());
    }

    #[test]
    fn grid_certifies_rotation_pair() {
        match grid_certify(&a_e2(), 0.01, 1e-9, 0).unwrap() {
            AfrVerdict::CertifiedNumeric { margin } => assert!(margin >= 0.9, "margin {margin}"),
            other => panic!("expected certification, got {other:?}"),
        }
    }

    #[test]
    fn grid_certifies_ans_4_3() {
        let t = ans_tensor(4, 3).unwrap();
        match grid_certify(&t, 0.02, 1e-9, 0).unwrap() {
            AfrVerdict::CertifiedNumeric { margin } => assert!(margin > 0.9),
            other => panic!("expected certification, got {other:?}"),
        }
    }

    #[test]
    fn grid_never_certifies_falsifiable() {
        let diag12 = Mat::from_int_rows(&[vec![1, 0], vec![0, 2]]).unwrap();
        let t = pair(Mat::identity(2, Kind::ExactInt), diag12);
        let v = grid_certify(&t, 0.01, 1e-9, 0).unwrap();
        assert!(!v.is_certified(), "got {v:?}");
    }

    #[test]
    fn afr_check_pipeline() {
        assert_eq!(
            afr_check(&ans_tensor(8, 8).unwrap(), Policy::ExactFirst),
            AfrVerdict::CertifiedExact
        );

        let e2 = Mat::identity(2, Kind::ExactInt);
        let v = afr_check(&pair(e2.clone(), e2.clone()), Policy::ExactFirst);
        match v {
            AfrVerdict::Falsified { witness } => {
                assert!((witness.x[0] + witness.x[1]).abs() < 1e-6);
            }
            other => panic!("equal slices must falsify, got {other:?}"),
        }

        let wide =
            Tensor3::new(vec![Mat::from_int_rows(&[vec![1, 0, 0], vec![0, 1, 0]]).unwrap()])
                .unwrap();
        assert!(afr_check(&wide, Policy::ExactFirst).is_falsified());
    }

    #[test]
    fn rotate_single_column_pair() {
        let col1 = Mat::from_int_rows(&[vec![1], vec![0]]).unwrap();
        let col2 = Mat::from_int_rows(&[vec![0], vec![1]]).unwrap();
        let r = transform(&pair(col1, col2), Transform::Rotate).unwrap();
        assert_eq!((r.m(), r.n(), r.p()), (2, 2, 1));
        assert_eq!(*r.slice(0), gen_p());
    }

    #[test]
    fn double_rotate_is_slice_and_column_reversal() {
        let t = Tensor3::new(vec![
            Mat::from_fn_int(2, 3, |i, j| (i * 3 + j) as i64),
            Mat::from_fn_int(2, 3, |i, j| (10 + i * 3 + j) as i64),
        ])
        .unwrap();
        let rr = transform(&transform(&t, Transform::Rotate).unwrap(), Transform::Rotate).unwrap();
        assert_eq!((rr.m(), rr.n(), rr.p()), (t.m(), t.n(), t.p()));
        for k in 0..t.p() {
            for i in 0..t.m() {
                for j in 0..t.n() {
                    assert_eq!(
                        rr.slice(k).int_at(i, j),
                        t.slice(t.p() - 1 - k).int_at(i, t.n() - 1 - j)
                    );
                }
            }
        }
    }

    #[test]
    fn cut_columns_of_ans_stays_exactly_certified() {
        let t = ans_tensor(4, 4).unwrap();
        let cut = transform(&t, Transform::CutCols(3)).unwrap();
        assert_eq!(afr_check(&cut, Policy::ExactFirst), AfrVerdict::CertifiedExact);
    }

    #[test]
    fn kron_lift_keeps_certificate() {
        let lifted = transform(&a_e2(), Transform::KronLift(2)).unwrap();
        assert_eq!((lifted.m(), lifted.n(), lifted.p()), (4, 4, 2));
        assert!(exact_certify(&lifted).unwrap());
    }

    #[test]
    fn pad_rows_keeps_certificate() {
        let padded = transform(&a_e2(), Transform::PadRows(2)).unwrap();
        assert_eq!((padded.m(), padded.n()), (4, 2));
        assert!(exact_certify(&padded).unwrap());
    }

    #[test]
    fn transform_bad_indices() {
        assert!(matches!(transform(&a_e2(), Transform::CutCols(0)), Err(Error::BadIndex(_))));
        assert!(matches!(transform(&a_e2(), Transform::CutCols(2)), Err(Error::BadIndex(_))));
        assert!(matches!(transform(&a_e2(), Transform::PadRows(0)), Err(Error::BadIndex(_))));
    }

    #[test]
    fn certified_margin_survives_small_perturbations() {
        let t = a_e2().to_real();
        let margin = match grid_certify(&t, 0.01, 1e-9, 0).unwrap() {
            AfrVerdict::CertifiedNumeric { margin } => margin,
            other => panic!("got {other:?}"),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let budget = 0.4 * margin;
            let slices: Vec<Mat> = t
                .slices()
                .iter()
                .map(|s| {
                    let noise = Mat::from_fn_real(s.rows(), s.cols(), |_, _| {
                        rng.sample::<f64, _>(rand_distr::StandardNormal)
                    });
                    let norm = numeric::spectral_norm(&numeric::to_na(&noise));
                    s.add(&noise.scale_real(budget / (2.0 * norm)).unwrap()).unwrap()
                })
                .collect();
            let perturbed = Tensor3::new(slices).unwrap();
            assert!(falsify(&perturbed, 16, 1e-9, 3).is_none());
        }
    }

    #[test]
    fn sphere_net_points_are_unit_and_cover_axes() {
        for p in [1usize, 2, 3, 4] {
            let net = sphere_net(p, 0.2).unwrap();
            for v in &net {
                assert!((v.norm() - 1.0).abs() < 1e-12);
            }
            // every signed axis direction is present exactly
            for i in 0..p {
                for sign in [1.0, -1.0] {
                    assert!(net.iter().any(|v| {
                        (0..p).all(|j| (v[j] - if j == i { sign } else { 0.0 }).abs() < 1e-12)
                    }));
                }
            }
        }
    }
}
