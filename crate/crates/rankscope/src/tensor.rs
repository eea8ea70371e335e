//! Three-way tensors stored as an ordered sequence of frontal slices
//! (A_1; ...; A_p), all of one shape and one entry kind.

use crate::error::{Error, Result};
use crate::mat::{hstack, vstack, Kind, Mat};
use crate::numeric;

/// An m x n x p tensor: p frontal slices of shape m x n.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    slices: Vec<Mat>,
}

impl Tensor3 {
    pub fn new(slices: Vec<Mat>) -> Result<Self> {
        if slices.is_empty() {
            return Err(Error::BadShape("tensor needs at least one slice".into()));
        }
        let (m, n, kind) = (slices[0].rows(), slices[0].cols(), slices[0].kind());
        if m == 0 || n == 0 {
            return Err(Error::BadShape("tensor slices must be nonempty".into()));
        }
        for s in &slices {
            if s.rows() != m || s.cols() != n {
                return Err(Error::BadShape(format!(
                    "slice shape {}x{} differs from {}x{}",
                    s.rows(),
                    s.cols(),
                    m,
                    n
                )));
            }
            if s.kind() != kind {
                return Err(Error::KindMismatch("tensor slices of mixed kinds".into()));
            }
        }
        Ok(Tensor3 { slices })
    }

    /// Rows per slice.
    pub fn m(&self) -> usize {
        self.slices[0].rows()
    }

    /// Columns per slice.
    pub fn n(&self) -> usize {
        self.slices[0].cols()
    }

    /// Number of slices.
    pub fn p(&self) -> usize {
        self.slices.len()
    }

    pub fn kind(&self) -> Kind {
        self.slices[0].kind()
    }

    pub fn slice(&self, k: usize) -> &Mat {
        &self.slices[k]
    }

    pub fn slices(&self) -> &[Mat] {
        &self.slices
    }

    pub fn to_real(&self) -> Tensor3 {
        Tensor3 { slices: self.slices.iter().map(Mat::to_real).collect() }
    }

    /// T_{<=j}: every slice restricted to its first j columns.
    pub fn cols_prefix(&self, j: usize) -> Result<Tensor3> {
        let slices = self
            .slices
            .iter()
            .map(|s| s.cols_prefix(j))
            .collect::<Result<Vec<_>>>()?;
        Tensor3::new(slices)
    }

    /// Sub-tensor of slices first..last (half-open range).
    pub fn slice_range(&self, first: usize, last: usize) -> Result<Tensor3> {
        if first >= last || last > self.p() {
            return Err(Error::BadIndex(format!(
                "slice range {first}..{last} of {} slices",
                self.p()
            )));
        }
        Tensor3::new(self.slices[first..last].to_vec())
    }

    /// Largest absolute entry over all slices.
    pub fn max_abs(&self) -> f64 {
        self.slices.iter().map(Mat::max_abs).fold(0.0, f64::max)
    }
}

/// P T Q: the slice-wise sandwich product (P A_1 Q; ...; P A_p Q).
pub fn sandwich(pmat: &Mat, t: &Tensor3, qmat: &Mat) -> Result<Tensor3> {
    let slices = t
        .slices
        .iter()
        .map(|a| pmat.matmul(a)?.matmul(qmat))
        .collect::<Result<Vec<_>>>()?;
    Tensor3::new(slices)
}

/// (crank, rrank): ranks of the vertically stacked and horizontally aligned
/// slice flattenings. Exact over the rationals for exact tensors, numerical
/// (singular values below 1e-9 x max(sigma_max, 1) count as zero) for real.
pub fn flatten_ranks(t: &Tensor3) -> (usize, usize) {
    let stacked = vstack(t.slices()).expect("uniform slices");
    let aligned = hstack(t.slices()).expect("uniform slices");
    match t.kind() {
        Kind::ExactInt => (
            stacked.rank_exact().expect("exact"),
            aligned.rank_exact().expect("exact"),
        ),
        Kind::Real => (
            numeric::numerical_rank(&numeric::to_na(&stacked)),
            numeric::numerical_rank(&numeric::to_na(&aligned)),
        ),
    }
}
