use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use super::{GeneratorIndex, GroupElement};
use crate::{Error, Result};

/// A run of one generator: `a_gen^exp` with `exp != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: GeneratorIndex,
    pub exp: BigInt,
}

impl Letter {
    pub fn new(gen: GeneratorIndex, exp: impl Into<BigInt>) -> Result<Self> {
        let exp = exp.into();
        if exp.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "letter {gen} has zero exponent"
            )));
        }
        Ok(Letter { gen, exp })
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            gen: self.gen,
            exp: -&self.exp,
        }
    }
}

/// A run-length encoded word in the generators `a_ij`.
///
/// Adjacent letters never share a generator and no letter has exponent 0, so
/// two words are equal exactly when they are equal as free-group words.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Word::new();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Single-letter word `a_g^e` (empty when `e == 0`).
    pub fn power(g: GeneratorIndex, e: impl Into<BigInt>) -> Self {
        let mut w = Word::new();
        w.push_power(g, e.into());
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Word length: the sum of `|exp|` over all letters.
    pub fn length(&self) -> BigUint {
        self.letters.iter().map(|l| l.exp.magnitude().clone()).sum()
    }

    pub fn push(&mut self, letter: Letter) {
        self.push_power(letter.gen, letter.exp);
    }

    /// Appends `a_g^e`, merging with the last letter and dropping it if the
    /// exponents cancel.
    pub fn push_power(&mut self, g: GeneratorIndex, e: BigInt) {
        if e.is_zero() {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.gen == g {
                last.exp += e;
                if last.exp.is_zero() {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(Letter { gen: g, exp: e });
    }

    pub fn append(&mut self, other: &Word) {
        for l in &other.letters {
            self.push_power(l.gen, l.exp.clone());
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.append(other);
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// Largest `j` among the letters, i.e. the smallest dimension the word
    /// lives in (at least 2).
    pub fn min_dim(&self) -> usize {
        self.letters.iter().map(|l| l.gen.j()).max().unwrap_or(2)
    }

    /// Product of the letters, left to right, as a matrix of size `dim`.
    pub fn evaluate(&self, dim: usize) -> Result<GroupElement> {
        let mut x = GroupElement::identity(dim)?;
        for l in &self.letters {
            l.gen.check(dim)?;
            x.mul_generator_right(l.gen, &l.exp);
        }
        Ok(x)
    }

    /// Letters expanded into unit letters `a_g^{+-1}`.
    pub fn unit_letters(&self) -> impl Iterator<Item = (GeneratorIndex, bool)> + '_ {
        self.letters.iter().flat_map(|l| {
            let n = l.exp.magnitude();
            let count: usize = n.try_into().expect("unit expansion of a huge exponent");
            std::iter::repeat_n((l.gen, l.exp.is_positive()), count)
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, l) in self.letters.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}^{}", l.gen, l.exp)?;
        }
        Ok(())
    }
}

/// `[x, y] = x^-1 y^-1 x y`, freely reduced.
pub fn commutator(x: &Word, y: &Word) -> Word {
    let mut w = x.inverse();
    w.append(&y.inverse());
    w.append(x);
    w.append(y);
    w
}

/// `[x_1, ..., x_k]`, defined recursively as `[[x_1, ..., x_{k-1}], x_k]`.
/// A single argument is returned unchanged.
pub fn iterated_commutator(args: &[Word]) -> Word {
    let mut iter = args.iter();
    let mut acc = match iter.next() {
        Some(first) => first.clone(),
        None => return Word::new(),
    };
    for next in iter {
        acc = commutator(&acc, next);
    }
    acc
}

/// Convenience: evaluate a word in `dim`.
pub fn evaluate_word(w: &Word, dim: usize) -> Result<GroupElement> {
    w.evaluate(dim)
}
