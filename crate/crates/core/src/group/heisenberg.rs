use num_bigint::BigInt;
use num_traits::Zero;

use super::{GeneratorIndex, GroupElement};
use crate::{Error, Result};

/// Coordinates of an element of `H_k`, read off its normal form
/// `c^p b_k^{m_k} a_k^{n_k} ... b_1^{m_1} a_1^{n_1}`.
///
/// As a `(k+2) x (k+2)` matrix the first row is `(1, n_1, ..., n_k, p)` and
/// the last column is `(p, m_1, ..., m_k, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeisenbergForm {
    pub k: usize,
    /// `n_1 ..= n_k`
    pub a_exps: Vec<BigInt>,
    /// `m_1 ..= m_k`
    pub b_exps: Vec<BigInt>,
    /// `p`
    pub c_exp: BigInt,
}

/// `a_i` is the entry `(1, i+1)`.
pub fn heisenberg_a(k: usize, i: usize) -> GeneratorIndex {
    debug_assert!(i >= 1 && i <= k);
    GeneratorIndex::raw(1, i + 1)
}

/// `b_i` is the entry `(i+1, k+2)`.
pub fn heisenberg_b(k: usize, i: usize) -> GeneratorIndex {
    debug_assert!(i >= 1 && i <= k);
    GeneratorIndex::raw(i + 1, k + 2)
}

/// `c` is the corner entry `(1, k+2)`.
pub fn heisenberg_c(k: usize) -> GeneratorIndex {
    GeneratorIndex::raw(1, k + 2)
}

impl HeisenbergForm {
    pub fn zero(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidArgument(
                "Heisenberg index k must be >= 1".into(),
            ));
        }
        Ok(HeisenbergForm {
            k,
            a_exps: vec![BigInt::zero(); k],
            b_exps: vec![BigInt::zero(); k],
            c_exp: BigInt::zero(),
        })
    }

    pub fn dim(&self) -> usize {
        self.k + 2
    }

    pub fn is_identity(&self) -> bool {
        self.c_exp.is_zero()
            && self.a_exps.iter().all(Zero::is_zero)
            && self.b_exps.iter().all(Zero::is_zero)
    }

    pub fn to_matrix(&self) -> GroupElement {
        heisenberg_to_matrix(self)
    }
}

pub fn heisenberg_to_matrix(h: &HeisenbergForm) -> GroupElement {
    let k = h.k;
    assert_eq!(h.a_exps.len(), k, "a_exps must have k entries");
    assert_eq!(h.b_exps.len(), k, "b_exps must have k entries");
    let mut x = GroupElement::identity(k + 2).expect("k >= 1 gives dim >= 3");
    for i in 1..=k {
        x.set(heisenberg_a(k, i), h.a_exps[i - 1].clone());
        x.set(heisenberg_b(k, i), h.b_exps[i - 1].clone());
    }
    x.set(heisenberg_c(k), h.c_exp.clone());
    x
}

/// Reads `n_i, m_j, p` back from a matrix. Any nonzero entry outside the first
/// row and last column is rejected.
pub fn matrix_to_heisenberg(x: &GroupElement, k: usize) -> Result<HeisenbergForm> {
    if x.dim() != k + 2 {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: k + 2,
        });
    }
    let mut h = HeisenbergForm::zero(k)?;
    for (g, v) in x.entries() {
        if g.i() == 1 && g.j() == k + 2 {
            h.c_exp = v.clone();
        } else if g.i() == 1 {
            h.a_exps[g.j() - 2] = v.clone();
        } else if g.j() == k + 2 {
            h.b_exps[g.i() - 2] = v.clone();
        } else {
            return Err(Error::NotInSubgroup { i: g.i(), j: g.j() });
        }
    }
    Ok(h)
}

/// True when every nonzero entry of `x` lies in the Heisenberg pattern.
pub fn is_heisenberg(x: &GroupElement) -> bool {
    let n = x.dim();
    x.entries().all(|(g, _)| g.i() == 1 || g.j() == n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: usize, j: usize) -> GeneratorIndex {
        GeneratorIndex::raw(i, j)
    }

    #[test]
    fn a1_is_e12() {
        let mut h = HeisenbergForm::zero(1).unwrap();
        h.a_exps[0] = 1.into();
        assert_eq!(
            heisenberg_to_matrix(&h),
            GroupElement::generator(3, g(1, 2), 1).unwrap()
        );
    }

    #[test]
    fn c_is_corner() {
        let mut h = HeisenbergForm::zero(2).unwrap();
        h.c_exp = 3.into();
        let x = heisenberg_to_matrix(&h);
        assert_eq!(x.dim(), 4);
        assert_eq!(x, GroupElement::generator(4, g(1, 4), 3).unwrap());
    }

    #[test]
    fn reading_back() {
        let id = GroupElement::identity(4).unwrap();
        assert_eq!(
            matrix_to_heisenberg(&id, 2).unwrap(),
            HeisenbergForm::zero(2).unwrap()
        );
        let x = GroupElement::generator(4, g(2, 4), 5).unwrap();
        let h = matrix_to_heisenberg(&x, 2).unwrap();
        assert_eq!(h.b_exps[0], BigInt::from(5));
        let bad = GroupElement::generator(4, g(2, 3), 1).unwrap();
        assert_eq!(
            matrix_to_heisenberg(&bad, 2),
            Err(Error::NotInSubgroup { i: 2, j: 3 })
        );
        assert!(!is_heisenberg(&bad));
    }

    #[test]
    fn roundtrip() {
        let h = HeisenbergForm {
            k: 3,
            a_exps: vec![1.into(), (-4).into(), 9.into()],
            b_exps: vec![0.into(), 2.into(), (-3).into()],
            c_exp: 17.into(),
        };
        assert_eq!(
            matrix_to_heisenberg(&heisenberg_to_matrix(&h), 3).unwrap(),
            h
        );
    }
}
