//! Exact arithmetic in `T_n` (unipotent upper-triangular integer matrices)
//! and in the Heisenberg groups `H_k`, which sit inside `T_{k+2}` as the
//! matrices supported on the first row and the last column.
//!
//! Commutators follow the convention `[x, y] = x^-1 y^-1 x y`, under which
//! `[a_ik, a_kj] = a_ij`.

mod element;
mod heisenberg;
mod normal_form;
mod presentation;
mod word;

use std::cmp::Ordering;
use std::fmt;

pub use element::GroupElement;
pub use heisenberg::{
    heisenberg_a, heisenberg_b, heisenberg_c, heisenberg_to_matrix, is_heisenberg,
    matrix_to_heisenberg, HeisenbergForm,
};
pub use normal_form::{normal_form, NormalForm};
pub use presentation::{heisenberg_relators, triangular_relators};
pub use word::{commutator, evaluate_word, iterated_commutator, Letter, Word};

use crate::{Error, Result};

/// Generator `a_ij`, the elementary matrix with a 1 at `(i, j)`. Indices are
/// 1-based with `i < j`.
///
/// `Ord` is the normal-form order: a generator is greater when it lies on a
/// diagonal farther from the main one, and within a diagonal when its column
/// is larger. Normal forms list generators from greatest to smallest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorIndex {
    i: usize,
    j: usize,
}

impl GeneratorIndex {
    pub fn new(i: usize, j: usize, dim: usize) -> Result<Self> {
        if i < 1 || i >= j || j > dim {
            return Err(Error::InvalidGenerator { i, j, dim });
        }
        Ok(GeneratorIndex { i, j })
    }

    /// Unchecked against a dimension; still requires `1 <= i < j`.
    pub(crate) fn raw(i: usize, j: usize) -> Self {
        debug_assert!(i >= 1 && i < j);
        GeneratorIndex { i, j }
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// Distance from the main diagonal, `j - i`.
    pub fn span(&self) -> usize {
        self.j - self.i
    }

    pub fn fits(&self, dim: usize) -> bool {
        self.j <= dim
    }

    pub(crate) fn check(&self, dim: usize) -> Result<()> {
        if self.fits(dim) {
            Ok(())
        } else {
            Err(Error::InvalidGenerator {
                i: self.i,
                j: self.j,
                dim,
            })
        }
    }

    /// All generators of `T_dim`, greatest first.
    pub fn all_decreasing(dim: usize) -> Vec<GeneratorIndex> {
        let mut out = Vec::with_capacity(dim * dim.saturating_sub(1) / 2);
        for span in (1..dim).rev() {
            for j in (span + 1..=dim).rev() {
                out.push(GeneratorIndex { i: j - span, j });
            }
        }
        out
    }

    /// The first-diagonal generators `a_{i,i+1}`, in increasing `i`.
    pub fn first_diagonal(dim: usize) -> Vec<GeneratorIndex> {
        (1..dim).map(|i| GeneratorIndex { i, j: i + 1 }).collect()
    }
}

impl Ord for GeneratorIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.span()
            .cmp(&other.span())
            .then_with(|| self.j.cmp(&other.j))
    }
}

impl PartialOrd for GeneratorIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GeneratorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a[{},{}]", self.i, self.j)
    }
}

/// One member of either family: `T_n` or `H_k` (the latter realised inside
/// `T_{k+2}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Triangular(usize),
    Heisenberg(usize),
}

impl GroupSpec {
    pub fn triangular(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(GroupSpec::Triangular(n))
    }

    pub fn heisenberg(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidArgument(
                "Heisenberg index k must be >= 1".into(),
            ));
        }
        Ok(GroupSpec::Heisenberg(k))
    }

    /// Size of the matrices.
    pub fn dim(&self) -> usize {
        match *self {
            GroupSpec::Triangular(n) => n,
            GroupSpec::Heisenberg(k) => k + 2,
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.dim() == self.dim()
            && match self {
                GroupSpec::Triangular(_) => true,
                GroupSpec::Heisenberg(_) => is_heisenberg(x),
            }
    }

    pub fn contains_generator(&self, g: GeneratorIndex) -> bool {
        g.fits(self.dim())
            && match self {
                GroupSpec::Triangular(_) => true,
                GroupSpec::Heisenberg(k) => g.i() == 1 || g.j() == k + 2,
            }
    }

    /// The generating set of the presentation: every `a_ij` for `T_n`, and
    /// `a_i, b_i, c` for `H_k`. Greatest generator first.
    pub fn standard_generators(&self) -> Vec<GeneratorIndex> {
        GeneratorIndex::all_decreasing(self.dim())
            .into_iter()
            .filter(|g| self.contains_generator(*g))
            .collect()
    }

    /// The generators off the corner: first-diagonal `a_{i,i+1}` for `T_n`,
    /// `a_i, b_i` (no `c`) for `H_k`.
    pub fn small_generators(&self) -> Vec<GeneratorIndex> {
        match *self {
            GroupSpec::Triangular(n) => GeneratorIndex::first_diagonal(n),
            GroupSpec::Heisenberg(k) => self
                .standard_generators()
                .into_iter()
                .filter(|g| *g != heisenberg_c(k))
                .collect(),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Triangular(n) => write!(f, "T{n}"),
            GroupSpec::Heisenberg(k) => write!(f, "H{k}"),
        }
    }
}

/// Compares two generators in the normal-form order.
pub fn generator_order(g1: GeneratorIndex, g2: GeneratorIndex) -> Ordering {
    g1.cmp(&g2)
}
