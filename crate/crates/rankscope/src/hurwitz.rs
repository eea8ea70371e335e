//! Hurwitz-Radon machinery: the function rho, validated families of
//! anticommuting antisymmetric orthogonal integer matrices for every order,
//! and absolutely nonsingular tensors built from them.
//!
//! A family {A_1, ..., A_s} of n x n matrices is Hurwitz-Radon when
//! A_i A_i^T = E_n, A_i = -A_i^T, and A_i A_j = -A_j A_i for i != j.
//! A maximal family of order n has rho(n) - 1 members, where
//! rho((2a+1) * 2^(b+4c)) = 8c + 2^b with 0 <= b < 4.

use crate::error::{Error, Result};
use crate::mat::{kron, Kind, Mat};
use crate::tensor::Tensor3;

/// A = [[0,1],[-1,0]]: the antisymmetric rotation generator.
pub fn gen_a() -> Mat {
    Mat::from_int_rows(&[vec![0, 1], vec![-1, 0]]).expect("static")
}

/// P = [[0,1],[1,0]]: the swap involution.
pub fn gen_p() -> Mat {
    Mat::from_int_rows(&[vec![0, 1], vec![1, 0]]).expect("static")
}

/// Q = [[1,0],[0,-1]]: the sign involution.
pub fn gen_q() -> Mat {
    Mat::from_int_rows(&[vec![1, 0], vec![0, -1]]).expect("static")
}

/// The Hurwitz-Radon function: for n = (2a+1) * 2^(b+4c) with 0 <= b < 4,
/// rho(n) = 8c + 2^b.
pub fn rho(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::BadIndex("rho(0) is undefined".into()));
    }
    let v = n.trailing_zeros() as usize;
    let (c, b) = (v / 4, v % 4);
    Ok(8 * c + (1usize << b))
}

/// A validated family of anticommuting antisymmetric orthogonal matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct HRFamily {
    order: usize,
    members: Vec<Mat>,
}

impl HRFamily {
    /// Wrap matrices as a family; shapes are checked, axioms are not.
    pub fn new(order: usize, members: Vec<Mat>) -> Result<Self> {
        for m in &members {
            if m.rows() != order || m.cols() != order {
                return Err(Error::BadShape(format!(
                    "family member is {}x{}, expected order {order}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.kind() != Kind::ExactInt {
                return Err(Error::KindMismatch("family members must be exact".into()));
            }
        }
        Ok(HRFamily { order, members })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn members(&self) -> &[Mat] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Exact check of all three axioms over all pairs.
    pub fn validate(&self) -> Result<bool> {
        validate_hr(self)
    }
}

/// Exact check that all three family axioms hold for every member pair.
pub fn validate_hr(fam: &HRFamily) -> Result<bool> {
    let n = fam.order;
    let e = Mat::identity(n, Kind::ExactInt);
    for m in &fam.members {
        if m.rows() != n || m.cols() != n {
            return Err(Error::BadShape("family member shape mismatch".into()));
        }
    }
    for m in &fam.members {
        let mt = m.transpose();
        if m.matmul(&mt)? != e {
            return Ok(false);
        }
        if *m != mt.neg() {
            return Ok(false);
        }
    }
    for i in 0..fam.members.len() {
        for j in (i + 1)..fam.members.len() {
            let ij = fam.members[i].matmul(&fam.members[j])?;
            let ji = fam.members[j].matmul(&fam.members[i])?;
            if ij != ji.neg() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The literal base families of orders 2, 4 and 8.
pub fn hr_base(order: usize) -> Result<HRFamily> {
    let (a, p, q) = (gen_a(), gen_p(), gen_q());
    let e2 = Mat::identity(2, Kind::ExactInt);
    let members = match order {
        2 => vec![a],
        4 => vec![kron(&a, &e2)?, kron(&p, &a)?, kron(&q, &a)?],
        8 => {
            let k3 = |x: &Mat, y: &Mat, z: &Mat| -> Result<Mat> { kron(&kron(x, y)?, z) };
            vec![
                k3(&e2, &a, &e2)?,
                k3(&e2, &p, &a)?,
                k3(&q, &q, &a)?,
                k3(&p, &q, &a)?,
                k3(&a, &p, &q)?,
                k3(&a, &p, &p)?,
                k3(&a, &q, &e2)?,
            ]
        }
        other => {
            return Err(Error::BadIndex(format!(
                "hr_base supports orders 2, 4, 8; got {other}"
            )))
        }
    };
    HRFamily::new(order, members)
}

/// Doubling: {M_1..M_s} of order n yields {A (x) E_n, Q (x) M_1, ..., Q (x) M_s}
/// of order 2n with s + 1 members.
pub fn hr_double(fam: &HRFamily) -> Result<HRFamily> {
    if !validate_hr(fam)? {
        return Err(Error::InvalidFamily("hr_double input fails the axioms".into()));
    }
    let e_n = Mat::identity(fam.order, Kind::ExactInt);
    let mut members = vec![kron(&gen_a(), &e_n)?];
    for m in &fam.members {
        members.push(kron(&gen_q(), m)?);
    }
    HRFamily::new(2 * fam.order, members)
}

/// Composition: families of orders n (s members) and m (t members) yield a
/// family of order 2nm with s + t + 1 members
/// {P (x) M_i (x) E_m} + {Q (x) E_n (x) L_j} + {A (x) E_nm}.
pub fn hr_compose(fam_n: &HRFamily, fam_m: &HRFamily) -> Result<HRFamily> {
    if !validate_hr(fam_n)? || !validate_hr(fam_m)? {
        return Err(Error::InvalidFamily("hr_compose input fails the axioms".into()));
    }
    let (n, m) = (fam_n.order, fam_m.order);
    let e_n = Mat::identity(n, Kind::ExactInt);
    let e_m = Mat::identity(m, Kind::ExactInt);
    let e_nm = Mat::identity(n * m, Kind::ExactInt);
    let mut members = Vec::with_capacity(fam_n.len() + fam_m.len() + 1);
    for mi in &fam_n.members {
        members.push(kron(&kron(&gen_p(), mi)?, &e_m)?);
    }
    for lj in &fam_m.members {
        members.push(kron(&kron(&gen_q(), &e_n)?, lj)?);
    }
    members.push(kron(&gen_a(), &e_nm)?);
    HRFamily::new(2 * n * m, members)
}

/// A maximal family for every order: exactly rho(order) - 1 members.
///
/// Write order = (2a+1) * 2^k. The 2^k part uses the base families for
/// k <= 3 and the composition with the order-8 base for k >= 4 (which is
/// what realizes rho(2^k) = rho(2^(k-4)) + 8 members). The odd part enters
/// as a left Kronecker factor E_{2a+1}, which preserves all three axioms.
pub fn hr_family(order: usize) -> Result<HRFamily> {
    if order == 0 {
        return Err(Error::BadIndex("hr_family(0) is undefined".into()));
    }
    let k = order.trailing_zeros() as usize;
    let odd = order >> k;
    let pow2 = pow2_family(k)?;
    if odd == 1 {
        return Ok(pow2);
    }
    let e_odd = Mat::identity(odd, Kind::ExactInt);
    let members = pow2
        .members
        .iter()
        .map(|m| kron(&e_odd, m))
        .collect::<Result<Vec<_>>>()?;
    HRFamily::new(order, members)
}

fn pow2_family(k: usize) -> Result<HRFamily> {
    match k {
        0 => HRFamily::new(1, Vec::new()),
        1 => hr_base(2),
        2 => hr_base(4),
        3 => hr_base(8),
        _ => hr_compose(&hr_base(8)?, &pow2_family(k - 4)?),
    }
}

/// The n x n x p absolutely nonsingular tensor (A_1; ...; A_{p-1}; E_n) built
/// from the first p - 1 members of the maximal family of order n.
/// Exists exactly when p <= rho(n).
pub fn ans_tensor(n: usize, p: usize) -> Result<Tensor3> {
    if n == 0 || p == 0 {
        return Err(Error::BadIndex("ans_tensor needs n >= 1 and p >= 1".into()));
    }
    let bound = rho(n)?;
    if p > bound {
        return Err(Error::NotConstructible(format!(
            "no n x n x p absolutely nonsingular tensor with n={n}, p={p}: p exceeds rho({n})={bound}"
        )));
    }
    let fam = hr_family(n)?;
    let mut slices: Vec<Mat> = fam.members[..p - 1].to_vec();
    slices.push(Mat::identity(n, Kind::ExactInt));
    Tensor3::new(slices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rho_values() {
        assert_eq!(rho(1).unwrap(), 1);
        assert_eq!(rho(12).unwrap(), 4);
        assert_eq!(rho(16).unwrap(), 9);
        assert_eq!(rho(32).unwrap(), 10);
        assert_eq!(rho(64).unwrap(), 12);
        assert!(matches!(rho(0), Err(Error::BadIndex(_))));
    }

    #[test]
    fn base_families_validate() {
        let f2 = hr_base(2).unwrap();
        assert_eq!(f2.members(), &[gen_a()]);
        let f4 = hr_base(4).unwrap();
        assert_eq!(f4.len(), 3);
        assert!(f4.validate().unwrap());
        let f8 = hr_base(8).unwrap();
        assert_eq!(f8.len(), 7);
        assert!(f8.validate().unwrap());
        assert!(matches!(hr_base(6), Err(Error::BadIndex(_))));
    }

    #[test]
    fn validate_rejects_non_families() {
        let e2 = Mat::identity(2, Kind::ExactInt);
        let not_antisym = HRFamily::new(2, vec![e2]).unwrap();
        assert!(!validate_hr(&not_antisym).unwrap());
        let repeated = HRFamily::new(2, vec![gen_a(), gen_a()]).unwrap();
        assert!(!validate_hr(&repeated).unwrap());
    }

    #[test]
    fn doubling_and_composition_counts() {
        let f4 = hr_double(&hr_base(2).unwrap()).unwrap();
        assert_eq!((f4.order(), f4.len()), (4, 2));
        assert!(f4.validate().unwrap());

        let empty1 = HRFamily::new(1, Vec::new()).unwrap();
        let f2 = hr_double(&empty1).unwrap();
        assert_eq!((f2.order(), f2.len()), (2, 1));
        assert_eq!(f2.members()[0], gen_a());

        let f16d = hr_double(&hr_base(8).unwrap()).unwrap();
        assert_eq!((f16d.order(), f16d.len()), (16, 8));
        assert!(f16d.validate().unwrap());

        let f16 = hr_compose(&hr_base(8).unwrap(), &HRFamily::new(1, Vec::new()).unwrap()).unwrap();
        assert_eq!((f16.order(), f16.len()), (16, 8));
        assert!(f16.validate().unwrap());

        let f32 = hr_compose(&hr_base(8).unwrap(), &hr_base(2).unwrap()).unwrap();
        assert_eq!((f32.order(), f32.len()), (32, 9));
        assert!(f32.validate().unwrap());
    }

    #[test]
    fn maximal_families_hit_rho_minus_one() {
        for order in [1usize, 2, 4, 6, 8, 12, 16, 24, 32, 64] {
            let fam = hr_family(order).unwrap();
            assert_eq!(fam.order(), order);
            assert_eq!(fam.len(), rho(order).unwrap() - 1, "order {order}");
            assert!(fam.validate().unwrap(), "order {order}");
        }
    }

    #[test]
    fn hr_family_6_is_e3_kron_a() {
        let fam = hr_family(6).unwrap();
        assert_eq!(fam.len(), 1);
        let e3 = Mat::identity(3, Kind::ExactInt);
        assert_eq!(fam.members()[0], kron(&e3, &gen_a()).unwrap());
    }

    #[test]
    fn subfamilies_validate() {
        let f8 = hr_base(8).unwrap();
        let sub = HRFamily::new(8, f8.members()[2..5].to_vec()).unwrap();
        assert!(sub.validate().unwrap());
    }

    #[test]
    fn ans_tensor_shapes_and_bounds() {
        let t = ans_tensor(2, 2).unwrap();
        assert_eq!((t.m(), t.n(), t.p()), (2, 2, 2));
        assert_eq!(*t.slice(0), gen_a());
        assert_eq!(*t.slice(1), Mat::identity(2, Kind::ExactInt));

        let t1 = ans_tensor(5, 1).unwrap();
        assert_eq!(*t1.slice(0), Mat::identity(5, Kind::ExactInt));

        assert!(matches!(ans_tensor(4, 5), Err(Error::NotConstructible(_))));
    }

    #[test]
    fn ans_sum_identity_exact() {
        // (sum x_k A_k)(sum x_k A_k)^T = |x|^2 E_n, checked entrywise in
        // exact arithmetic for random integer weight vectors.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 4, 8] {
            let p = rho(n).unwrap();
            let t = ans_tensor(n, p).unwrap();
            for _ in 0..20 {
                let x: Vec<i64> = (0..p).map(|_| rng.random_range(-5..=5)).collect();
                let mut sum = Mat::zeros(n, n, Kind::ExactInt);
                for (k, xk) in x.iter().enumerate() {
                    sum = sum.add(&t.slice(k).scale_int(*xk)).unwrap();
                }
                let gram = sum.matmul(&sum.transpose()).unwrap();
                let norm2: i64 = x.iter().map(|v| v * v).sum();
                assert_eq!(gram, Mat::identity(n, Kind::ExactInt).scale_int(norm2));
            }
        }
    }
}
