use num_bigint::BigInt;

use super::{commutator, heisenberg_a, heisenberg_b, heisenberg_c, GeneratorIndex, Word};
use crate::{Error, Result};

fn gen_word(g: GeneratorIndex) -> Word {
    Word::power(g, 1)
}

/// Relators of the nilpotent presentation of `T_n`, as words that must
/// evaluate to the identity:
/// `[a_ij, a_kl]` when `j != k` and `i != l`, and `[a_ik, a_kj] a_ij^-1`.
pub fn triangular_relators(n: usize) -> Result<Vec<Word>> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let gens = GeneratorIndex::all_decreasing(n);
    let mut out = Vec::new();
    for (idx, &x) in gens.iter().enumerate() {
        for &y in &gens[idx + 1..] {
            if x.j() != y.i() && x.i() != y.j() {
                out.push(commutator(&gen_word(x), &gen_word(y)));
            }
        }
    }
    for i in 1..=n {
        for k in i + 1..=n {
            for j in k + 1..=n {
                let mut w = commutator(
                    &gen_word(GeneratorIndex::raw(i, k)),
                    &gen_word(GeneratorIndex::raw(k, j)),
                );
                w.push_power(GeneratorIndex::raw(i, j), BigInt::from(-1));
                out.push(w);
            }
        }
    }
    Ok(out)
}

/// Relators of `H_k` written in the letters of `T_{k+2}`:
/// `[a_i, b_i] c^-1` and the commutation relations among the `a_i`, `b_j`
/// and `c`.
pub fn heisenberg_relators(k: usize) -> Result<Vec<Word>> {
    if k < 1 {
        return Err(Error::InvalidArgument(
            "Heisenberg index k must be >= 1".into(),
        ));
    }
    let a = |i| gen_word(heisenberg_a(k, i));
    let b = |i| gen_word(heisenberg_b(k, i));
    let c = gen_word(heisenberg_c(k));
    let mut out = Vec::new();
    for i in 1..=k {
        let mut w = commutator(&a(i), &b(i));
        w.push_power(heisenberg_c(k), BigInt::from(-1));
        out.push(w);
        out.push(commutator(&a(i), &c));
        out.push(commutator(&b(i), &c));
        for j in 1..=k {
            if i < j {
                out.push(commutator(&a(i), &a(j)));
                out.push(commutator(&b(i), &b(j)));
            }
            if i != j {
                out.push(commutator(&a(i), &b(j)));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relator_counts() {
        // T_3: a12, a23, a13; commuting pairs (a13,a23), (a13,a12); one
        // relator [a12, a23] a13^-1.
        assert_eq!(triangular_relators(3).unwrap().len(), 3);
        // H_1: [a,b]c^-1, [a,c], [b,c]
        assert_eq!(heisenberg_relators(1).unwrap().len(), 3);
    }

    #[test]
    fn relators_hold() {
        for n in 2..=6 {
            for w in triangular_relators(n).unwrap() {
                assert!(w.evaluate(n).unwrap().is_identity(), "{w:?}");
            }
        }
        for k in 1..=4 {
            for w in heisenberg_relators(k).unwrap() {
                assert!(w.evaluate(k + 2).unwrap().is_identity(), "{w:?}");
            }
        }
    }
}
