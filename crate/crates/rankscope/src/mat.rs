//! Dense matrices with two entry kinds: exact arbitrary-precision integers
//! and double-precision reals.
//!
//! Every construction in this crate (Hurwitz-Radon members, identity blocks,
//! Kronecker assemblies) lives in exact integers until a numerical routine
//! explicitly converts with [`Mat::to_real`]. Mixed-kind arithmetic is an
//! error, never a silent coercion.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Entry kind of a [`Mat`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    ExactInt,
    Real,
}

#[derive(Debug, Clone, PartialEq)]
enum Store {
    Int(Vec<BigInt>),
    Real(Vec<f64>),
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    store: Store,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, kind: Kind) -> Self {
        let store = match kind {
            Kind::ExactInt => Store::Int(vec![BigInt::zero(); rows * cols]),
            Kind::Real => Store::Real(vec![0.0; rows * cols]),
        };
        Mat { rows, cols, store }
    }

    /// The n x n identity matrix E_n.
    pub fn identity(n: usize, kind: Kind) -> Self {
        let mut m = Mat::zeros(n, n, kind);
        for i in 0..n {
            m.set_one(i, i);
        }
        m
    }

    pub fn from_fn_int(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(BigInt::from(f(i, j)));
            }
        }
        Mat { rows, cols, store: Store::Int(data) }
    }

    pub fn from_fn_real(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, store: Store::Real(data) }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::BadShape("matrix needs at least one row".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::BadShape("ragged rows".into()));
        }
        Ok(Mat::from_fn_int(r, c, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::BadShape("matrix needs at least one row".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::BadShape("ragged rows".into()));
        }
        Ok(Mat::from_fn_real(r, c, |i, j| rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn kind(&self) -> Kind {
        match self.store {
            Store::Int(_) => Kind::ExactInt,
            Store::Real(_) => Kind::Real,
        }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.rows && j < self.cols);
        i * self.cols + j
    }

    fn set_one(&mut self, i: usize, j: usize) {
        let k = self.idx(i, j);
        match &mut self.store {
            Store::Int(v) => v[k] = BigInt::from(1),
            Store::Real(v) => v[k] = 1.0,
        }
    }

    /// Exact entry accessor; panics if the matrix is real.
    pub fn int_at(&self, i: usize, j: usize) -> &BigInt {
        match &self.store {
            Store::Int(v) => &v[self.idx(i, j)],
            Store::Real(_) => panic!("int_at on a real matrix"),
        }
    }

    /// Entry as f64 regardless of kind (lossy for huge integers).
    pub fn real_at(&self, i: usize, j: usize) -> f64 {
        let k = self.idx(i, j);
        match &self.store {
            Store::Int(v) => bigint_to_f64(&v[k]),
            Store::Real(v) => v[k],
        }
    }

    pub fn set_int(&mut self, i: usize, j: usize, value: BigInt) {
        let k = self.idx(i, j);
        match &mut self.store {
            Store::Int(v) => v[k] = value,
            Store::Real(_) => panic!("set_int on a real matrix"),
        }
    }

    pub fn set_real(&mut self, i: usize, j: usize, value: f64) {
        let k = self.idx(i, j);
        match &mut self.store {
            Store::Real(v) => v[k] = value,
            Store::Int(_) => panic!("set_real on an exact matrix"),
        }
    }

    /// Explicit conversion to the floating kind.
    pub fn to_real(&self) -> Mat {
        match &self.store {
            Store::Real(_) => self.clone(),
            Store::Int(v) => Mat {
                rows: self.rows,
                cols: self.cols,
                store: Store::Real(v.iter().map(bigint_to_f64).collect()),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.store {
            Store::Int(v) => v.iter().all(|x| x.is_zero()),
            Store::Real(v) => v.iter().all(|x| *x == 0.0),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match &self.store {
            Store::Int(v) => v.iter().map(|x| bigint_to_f64(&x.abs())).fold(0.0, f64::max),
            Store::Real(v) => v.iter().map(|x| x.abs()).fold(0.0, f64::max),
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows, self.kind());
        for i in 0..self.rows {
            for j in 0..self.cols {
                match (&self.store, &mut out.store) {
                    (Store::Int(a), Store::Int(b)) => b[j * self.rows + i] = a[self.idx(i, j)].clone(),
                    (Store::Real(a), Store::Real(b)) => b[j * self.rows + i] = a[self.idx(i, j)],
                    _ => unreachable!(),
                }
            }
        }
        out
    }

    pub fn neg(&self) -> Mat {
        let store = match &self.store {
            Store::Int(v) => Store::Int(v.iter().map(|x| -x).collect()),
            Store::Real(v) => Store::Real(v.iter().map(|x| -x).collect()),
        };
        Mat { rows: self.rows, cols: self.cols, store }
    }

    fn check_same_kind(&self, other: &Mat, op: &str) -> Result<()> {
        if self.kind() != other.kind() {
            return Err(Error::KindMismatch(format!("{op} on mixed exact/real matrices")));
        }
        Ok(())
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.check_same_kind(other, "add")?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::BadShape(format!(
                "add: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let store = match (&self.store, &other.store) {
            (Store::Int(a), Store::Int(b)) => {
                Store::Int(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Store::Real(a), Store::Real(b)) => {
                Store::Real(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => unreachable!(),
        };
        Ok(Mat { rows: self.rows, cols: self.cols, store })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.add(&other.neg())
    }

    pub fn scale_int(&self, factor: i64) -> Mat {
        let f = BigInt::from(factor);
        match &self.store {
            Store::Int(v) => Mat {
                rows: self.rows,
                cols: self.cols,
                store: Store::Int(v.iter().map(|x| x * &f).collect()),
            },
            Store::Real(v) => Mat {
                rows: self.rows,
                cols: self.cols,
                store: Store::Real(v.iter().map(|x| x * factor as f64).collect()),
            },
        }
    }

    pub fn scale_real(&self, factor: f64) -> Result<Mat> {
        match &self.store {
            Store::Real(v) => Ok(Mat {
                rows: self.rows,
                cols: self.cols,
                store: Store::Real(v.iter().map(|x| x * factor).collect()),
            }),
            Store::Int(_) => Err(Error::KindMismatch(
                "real scaling of an exact matrix; convert with to_real first".into(),
            )),
        }
    }

    pub fn matmul(&self, other: &Mat) -> Result<Mat> {
        self.check_same_kind(other, "matmul")?;
        if self.cols != other.rows {
            return Err(Error::BadShape(format!(
                "matmul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols, self.kind());
        match (&self.store, &other.store, &mut out.store) {
            (Store::Int(a), Store::Int(b), Store::Int(c)) => {
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let aik = &a[i * self.cols + k];
                        if aik.is_zero() {
                            continue;
                        }
                        for j in 0..other.cols {
                            let t = aik * &b[k * other.cols + j];
                            c[i * other.cols + j] += t;
                        }
                    }
                }
            }
            (Store::Real(a), Store::Real(b), Store::Real(c)) => {
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let aik = a[i * self.cols + k];
                        if aik == 0.0 {
                            continue;
                        }
                        for j in 0..other.cols {
                            c[i * other.cols + j] += aik * b[k * other.cols + j];
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        Ok(out)
    }

    /// General rectangular sub-block starting at (r0, c0).
    pub fn block(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> Result<Mat> {
        if r0 + nrows > self.rows || c0 + ncols > self.cols {
            return Err(Error::BadIndex(format!(
                "block ({r0},{c0}) size {nrows}x{ncols} out of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut out = Mat::zeros(nrows, ncols, self.kind());
        for i in 0..nrows {
            for j in 0..ncols {
                match (&self.store, &mut out.store) {
                    (Store::Int(a), Store::Int(b)) => {
                        b[i * ncols + j] = a[(r0 + i) * self.cols + c0 + j].clone()
                    }
                    (Store::Real(a), Store::Real(b)) => {
                        b[i * ncols + j] = a[(r0 + i) * self.cols + c0 + j]
                    }
                    _ => unreachable!(),
                }
            }
        }
        Ok(out)
    }

    /// First j columns, written M_{<=j} elsewhere.
    pub fn cols_prefix(&self, j: usize) -> Result<Mat> {
        if j > self.cols {
            return Err(Error::BadIndex(format!("cols_prefix {j} of {} columns", self.cols)));
        }
        self.block(0, 0, self.rows, j)
    }

    /// Columns after the first j.
    pub fn cols_suffix(&self, j: usize) -> Result<Mat> {
        if j > self.cols {
            return Err(Error::BadIndex(format!("cols_suffix {j} of {} columns", self.cols)));
        }
        self.block(0, j, self.rows, self.cols - j)
    }

    /// First i rows.
    pub fn rows_prefix(&self, i: usize) -> Result<Mat> {
        if i > self.rows {
            return Err(Error::BadIndex(format!("rows_prefix {i} of {} rows", self.rows)));
        }
        self.block(0, 0, i, self.cols)
    }

    /// Rows after the first i.
    pub fn rows_suffix(&self, i: usize) -> Result<Mat> {
        if i > self.rows {
            return Err(Error::BadIndex(format!("rows_suffix {i} of {} rows", self.rows)));
        }
        self.block(i, 0, self.rows - i, self.cols)
    }

    /// Paste `other` into self at (r0, c0); shapes must fit.
    pub fn paste(&mut self, r0: usize, c0: usize, other: &Mat) -> Result<()> {
        self.check_same_kind(other, "paste")?;
        if r0 + other.rows > self.rows || c0 + other.cols > self.cols {
            return Err(Error::BadIndex("paste target out of range".into()));
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                let dst = (r0 + i) * self.cols + c0 + j;
                match (&mut self.store, &other.store) {
                    (Store::Int(a), Store::Int(b)) => a[dst] = b[i * other.cols + j].clone(),
                    (Store::Real(a), Store::Real(b)) => a[dst] = b[i * other.cols + j],
                    _ => unreachable!(),
                }
            }
        }
        Ok(())
    }

    /// Exact rank over the rationals (Bareiss fraction-free elimination).
    /// Only available for exact matrices.
    pub fn rank_exact(&self) -> Result<usize> {
        let data = match &self.store {
            Store::Int(v) => v.clone(),
            Store::Real(_) => {
                return Err(Error::KindMismatch("rank_exact needs an exact matrix".into()))
            }
        };
        Ok(bareiss_rank(data, self.rows, self.cols))
    }
}

/// Kronecker product a (x) b; block (i,j) equals a[i,j] * b.
pub fn kron(a: &Mat, b: &Mat) -> Result<Mat> {
    a.check_same_kind(b, "kron")?;
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = Mat::zeros(rows, cols, a.kind());
    for i in 0..a.rows {
        for j in 0..a.cols {
            for k in 0..b.rows {
                for l in 0..b.cols {
                    let r = i * b.rows + k;
                    let c = j * b.cols + l;
                    match (&a.store, &b.store, &mut out.store) {
                        (Store::Int(x), Store::Int(y), Store::Int(z)) => {
                            z[r * cols + c] = &x[i * a.cols + j] * &y[k * b.cols + l];
                        }
                        (Store::Real(x), Store::Real(y), Store::Real(z)) => {
                            z[r * cols + c] = x[i * a.cols + j] * y[k * b.cols + l];
                        }
                        _ => unreachable!(),
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Block-diagonal assembly of a nonempty uniform-kind sequence.
pub fn block_diag(parts: &[Mat]) -> Result<Mat> {
    if parts.is_empty() {
        return Err(Error::BadShape("block_diag of an empty sequence".into()));
    }
    let kind = parts[0].kind();
    if parts.iter().any(|p| p.kind() != kind) {
        return Err(Error::KindMismatch("block_diag over mixed kinds".into()));
    }
    let rows = parts.iter().map(|p| p.rows).sum();
    let cols = parts.iter().map(|p| p.cols).sum();
    let mut out = Mat::zeros(rows, cols, kind);
    let (mut r0, mut c0) = (0, 0);
    for p in parts {
        out.paste(r0, c0, p)?;
        r0 += p.rows;
        c0 += p.cols;
    }
    Ok(out)
}

/// Horizontal concatenation (A_1, ..., A_p).
pub fn hstack(parts: &[Mat]) -> Result<Mat> {
    if parts.is_empty() {
        return Err(Error::BadShape("hstack of an empty sequence".into()));
    }
    let kind = parts[0].kind();
    let rows = parts[0].rows;
    if parts.iter().any(|p| p.kind() != kind) {
        return Err(Error::KindMismatch("hstack over mixed kinds".into()));
    }
    if parts.iter().any(|p| p.rows != rows) {
        return Err(Error::BadShape("hstack over mismatched row counts".into()));
    }
    let cols = parts.iter().map(|p| p.cols).sum();
    let mut out = Mat::zeros(rows, cols, kind);
    let mut c0 = 0;
    for p in parts {
        out.paste(0, c0, p)?;
        c0 += p.cols;
    }
    Ok(out)
}

/// Vertical concatenation (A_1; ...; A_p) as one matrix.
pub fn vstack(parts: &[Mat]) -> Result<Mat> {
    if parts.is_empty() {
        return Err(Error::BadShape("vstack of an empty sequence".into()));
    }
    let kind = parts[0].kind();
    let cols = parts[0].cols;
    if parts.iter().any(|p| p.kind() != kind) {
        return Err(Error::KindMismatch("vstack over mixed kinds".into()));
    }
    if parts.iter().any(|p| p.cols != cols) {
        return Err(Error::BadShape("vstack over mismatched column counts".into()));
    }
    let rows = parts.iter().map(|p| p.rows).sum();
    let mut out = Mat::zeros(rows, cols, kind);
    let mut r0 = 0;
    for p in parts {
        out.paste(r0, 0, p)?;
        r0 += p.rows;
    }
    Ok(out)
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Rank by fraction-free Gaussian elimination; divisions are exact.
fn bareiss_rank(mut a: Vec<BigInt>, rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    let mut col = 0;
    while rank < rows && col < cols {
        // pivot search in the current column
        let pivot_row = (rank..rows).find(|&i| !a[i * cols + col].is_zero());
        let Some(pr) = pivot_row else {
            col += 1;
            continue;
        };
        if pr != rank {
            for j in 0..cols {
                a.swap(pr * cols + j, rank * cols + j);
            }
        }
        let pivot = a[rank * cols + col].clone();
        for i in (rank + 1)..rows {
            let head = a[i * cols + col].clone();
            for j in (col + 1)..cols {
                let num = &a[i * cols + j] * &pivot - &head * &a[rank * cols + j];
                debug_assert!((&num % &prev).is_zero());
                a[i * cols + j] = num / &prev;
            }
            a[i * cols + col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        col += 1;
    }
    rank
}
