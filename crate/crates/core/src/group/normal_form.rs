use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{GeneratorIndex, GroupElement, Word};
use crate::Result;

/// Exponents `m_ij` of the unique product `prod a_ij^{m_ij}` taken in
/// decreasing generator order. Only nonzero exponents are stored.
///
/// For `n <= 3` and on the first diagonal the exponents are the matrix
/// entries. In general they are not: in `T_4` the factors `a_13^x a_34^y`
/// appear in that order and add `xy` to the `(1, 4)` entry. [`NormalForm::of`]
/// peels the factors off one diagonal at a time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    dim: usize,
    exponents: BTreeMap<GeneratorIndex, BigInt>,
}

impl NormalForm {
    pub fn of(x: &GroupElement) -> NormalForm {
        // Factors of span >= s multiply into spans >= 2s, so after the
        // diagonals below s are divided off on the right, the span-s entries
        // are the span-s exponents.
        let dim = x.dim();
        let mut y = x.clone();
        let mut exponents = BTreeMap::new();
        for s in 1..dim {
            let diagonal: Vec<GeneratorIndex> = (1..=dim - s)
                .map(|i| GeneratorIndex::raw(i, i + s))
                .collect();
            for &g in &diagonal {
                let m = y.entry(g);
                if !m.is_zero() {
                    exponents.insert(g, m.clone());
                }
            }
            if s + 1 < dim {
                for &g in &diagonal {
                    if let Some(m) = exponents.get(&g) {
                        y.mul_generator_right(g, &-m);
                    }
                }
            }
        }
        NormalForm { dim, exponents }
    }

    pub fn from_exponents<I>(dim: usize, exponents: I) -> Result<NormalForm>
    where
        I: IntoIterator<Item = (GeneratorIndex, BigInt)>,
    {
        GroupElement::identity(dim)?;
        let mut map = BTreeMap::new();
        for (g, e) in exponents {
            g.check(dim)?;
            if !e.is_zero() {
                *map.entry(g).or_insert_with(BigInt::zero) += e;
            }
        }
        map.retain(|_, e: &mut BigInt| !e.is_zero());
        Ok(NormalForm {
            dim,
            exponents: map,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exponent(&self, g: GeneratorIndex) -> BigInt {
        self.exponents.get(&g).cloned().unwrap_or_default()
    }

    /// Nonzero exponents, greatest generator first.
    pub fn iter(&self) -> impl Iterator<Item = (GeneratorIndex, &BigInt)> + '_ {
        self.exponents.iter().rev().map(|(g, e)| (*g, e))
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }

    /// The ordered word `prod a_ij^{m_ij}`, greatest generator first.
    pub fn to_word(&self) -> Word {
        let mut w = Word::new();
        for (g, e) in self.iter() {
            w.push_power(g, e.clone());
        }
        w
    }

    pub fn to_element(&self) -> GroupElement {
        self.to_word()
            .evaluate(self.dim)
            .expect("normal form indices are valid for its dimension")
    }
}

/// Normal form of `x`.
pub fn normal_form(x: &GroupElement) -> NormalForm {
    NormalForm::of(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: usize, j: usize) -> GeneratorIndex {
        GeneratorIndex::raw(i, j)
    }

    #[test]
    fn exponents_are_entries() {
        let x = GroupElement::generator(3, g(1, 3), 7).unwrap();
        let nf = NormalForm::of(&x);
        assert_eq!(nf.exponent(g(1, 3)), BigInt::from(7));
        assert_eq!(nf.exponent(g(1, 2)), BigInt::zero());
        assert!(NormalForm::of(&GroupElement::identity(4).unwrap()).is_trivial());
    }

    #[test]
    fn ordered_word_reproduces_element() {
        let x = GroupElement::from_entries(
            4,
            [
                (g(1, 2), 3),
                (g(2, 3), -2),
                (g(3, 4), 4),
                (g(1, 3), 5),
                (g(2, 4), -7),
                (g(1, 4), 11),
            ],
        )
        .unwrap();
        let nf = NormalForm::of(&x);
        let w = nf.to_word();
        let order: Vec<_> = w.letters().iter().map(|l| l.gen).collect();
        assert!(order.windows(2).all(|p| p[0] > p[1]));
        assert_eq!(w.evaluate(4).unwrap(), x);
        assert_eq!(nf.to_element(), x);
    }
}
