//! Short words that realise the upper bound of the metric estimates.
//!
//! An entry `m` of `a_ij` with `j - i = s >= 2` is split into `s`-th powers
//! `|m| = q_1^s + ... + q_r^s`, and each `a_ij^{q^s}` is written as the
//! iterated commutator `[a_{i,i+1}^q, a_{i+1,i+2}^q, ..., a_{j-1,j}^q]`,
//! whose length is linear in `q`. First-diagonal entries are kept literally.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, ToPrimitive};

use crate::group::{
    commutator, heisenberg_a, heisenberg_b, iterated_commutator, GeneratorIndex, GroupElement,
    HeisenbergForm, NormalForm, Word,
};
use crate::{Error, Result};

/// Default largest integer the dynamic-programming Waring table will cover.
pub const WARING_CAP: u64 = 10_000_000;

/// `|target| = sum q^k` over `parts`, with the sign kept apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerDecomposition {
    pub target: BigInt,
    pub k: u32,
    /// Nonincreasing positive bases.
    pub parts: Vec<u64>,
    pub sign: i8,
}

impl PowerDecomposition {
    fn new(target: BigInt, k: u32, mut parts: Vec<u64>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let sign = if target.is_negative() { -1 } else { 1 };
        PowerDecomposition {
            target,
            k,
            parts,
            sign,
        }
    }

    /// `sum q^k`, exactly.
    pub fn total(&self) -> BigInt {
        self.parts
            .iter()
            .map(|&q| num_traits::pow(BigInt::from(q), self.k as usize))
            .sum()
    }
}

/// Waring's `g(k)`: every positive integer is a sum of at most `g(k)` `k`-th
/// powers. `2^k + floor((3/2)^k) - 2`, which gives 1, 4, 9, 19, 37, 73, ...
pub fn waring_g(k: u32) -> u64 {
    assert!((1..=40).contains(&k), "g(k) tabulated for 1 <= k <= 40");
    let three_k = num_traits::pow(BigInt::from(3), k as usize);
    let two_k = num_traits::pow(BigInt::from(2), k as usize);
    (&two_k + &three_k / &two_k - 2u32)
        .to_u64()
        .expect("g(k) fits in u64 for k <= 40")
}

fn is_square(n: u64) -> Option<u64> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

fn two_squares(n: u64) -> Option<(u64, u64)> {
    let mut a = n.sqrt();
    while a * a >= n - a * a {
        if let Some(b) = is_square(n - a * a) {
            return Some((a, b));
        }
        if a == 0 {
            break;
        }
        a -= 1;
    }
    None
}

/// Needs four squares exactly when `n = 4^a (8b + 7)`.
fn needs_four(mut n: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(4) {
        n /= 4;
    }
    n % 8 == 7
}

fn three_squares(n: u64) -> Vec<u64> {
    debug_assert!(!needs_four(n));
    if n == 0 {
        return vec![];
    }
    if let Some(r) = is_square(n) {
        return vec![r];
    }
    if let Some((a, b)) = two_squares(n) {
        return vec![a, b];
    }
    let mut a = n.sqrt();
    loop {
        if let Some((b, c)) = two_squares(n - a * a) {
            return vec![a, b, c];
        }
        a -= 1;
    }
}

/// A shortest decomposition of `p` into squares (at most four), with
/// nonincreasing parts.
pub fn four_squares(p: u64) -> PowerDecomposition {
    let parts = if needs_four(p) {
        let mut a = p.sqrt();
        loop {
            let rest = p - a * a;
            if !needs_four(rest) {
                let mut v = vec![a];
                v.extend(three_squares(rest));
                break v;
            }
            a -= 1;
        }
    } else {
        three_squares(p)
    };
    PowerDecomposition::new(BigInt::from(p), 2, parts)
}

/// Per-exponent tables of the least number of `k`-th powers summing to each
/// `m`, grown on demand.
fn waring_tables() -> &'static RwLock<HashMap<u32, Vec<u8>>> {
    static TABLES: OnceLock<RwLock<HashMap<u32, Vec<u8>>>> = OnceLock::new();
    TABLES.get_or_init(|| RwLock::new(HashMap::new()))
}

fn kth_powers(k: u32, upto: u64) -> Vec<u64> {
    (1u64..)
        .map(|q| q.checked_pow(k))
        .take_while(|p| p.is_some_and(|p| p <= upto))
        .map(Option::unwrap)
        .collect()
}

fn ensure_table(k: u32, m: u64, cap: u64) {
    if let Some(t) = waring_tables().read().expect("table lock").get(&k) {
        if t.len() as u64 > m {
            return;
        }
    }
    let mut tables = waring_tables().write().expect("table lock");
    let table = tables.entry(k).or_insert_with(|| vec![0u8]);
    if table.len() as u64 > m {
        return;
    }
    let target = (m.max(1024).saturating_mul(2)).min(cap).max(m);
    let powers = kth_powers(k, target);
    let start = table.len();
    table.reserve((target as usize + 1) - start);
    for n in start as u64..=target {
        let best = powers
            .iter()
            .take_while(|&&p| p <= n)
            .map(|&p| table[(n - p) as usize])
            .min()
            .expect("1 is always a k-th power");
        table.push(best + 1);
    }
}

/// Shortest decomposition of `m` into `k`-th powers.
///
/// `k = 1` and `k = 2` are solved directly (the latter through
/// [`four_squares`]); larger `k` use a dynamic-programming table covering
/// `0..=cap`. Values above `cap` fail with a resource limit.
pub fn waring_decompose_with_cap(m: u64, k: u32, cap: u64) -> Result<PowerDecomposition> {
    match k {
        0 => Err(Error::InvalidArgument("power must be positive".into())),
        1 => Ok(PowerDecomposition::new(
            BigInt::from(m),
            1,
            if m == 0 { vec![] } else { vec![m] },
        )),
        2 => Ok(four_squares(m)),
        _ if k > 40 => Err(Error::InvalidArgument(format!("power {k} too large"))),
        _ => {
            if m > cap {
                return Err(Error::resource(format!(
                    "Waring decomposition of {m} exceeds the table cap {cap}"
                )));
            }
            ensure_table(k, m, cap);
            let tables = waring_tables().read().expect("table lock");
            let table = &tables[&k];
            let powers = kth_powers(k, m);
            let mut parts = Vec::with_capacity(table[m as usize] as usize);
            let mut rest = m;
            while rest > 0 {
                let need = table[rest as usize] - 1;
                let (q, p) = powers
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, &p)| p <= rest)
                    .find(|(_, &p)| table[(rest - p) as usize] == need)
                    .map(|(idx, &p)| (idx as u64 + 1, p))
                    .expect("table is consistent");
                parts.push(q);
                rest -= p;
            }
            Ok(PowerDecomposition::new(BigInt::from(m), k, parts))
        }
    }
}

pub fn waring_decompose(m: u64, k: u32) -> Result<PowerDecomposition> {
    waring_decompose_with_cap(m, k, WARING_CAP)
}

/// Expanded iterated commutator
/// `[a_{i,i+1}^q, a_{i+1,i+2}^q, ..., a_{j-1,j}^q] = a_ij^{q^(j-i)}`.
///
/// With `sign = -1` the two arguments of the outermost commutator are
/// exchanged, which inverts the result: `a_ij^{-q^(j-i)}`.
pub fn commutator_word(i: usize, j: usize, q: u64, sign: i8, dim: usize) -> Result<Word> {
    GeneratorIndex::new(i, j, dim)?;
    if j - i < 2 {
        return Err(Error::InvalidSpan { i, j });
    }
    if q == 0 {
        return Err(Error::InvalidArgument(
            "commutator base must be positive".into(),
        ));
    }
    let args: Vec<Word> = (i..j)
        .map(|t| Word::power(GeneratorIndex::raw(t, t + 1), q))
        .collect();
    match sign {
        1 => Ok(iterated_commutator(&args)),
        -1 => {
            let (last, init) = args.split_last().expect("span >= 2");
            Ok(commutator(last, &iterated_commutator(init)))
        }
        _ => Err(Error::InvalidArgument(format!(
            "sign must be +1 or -1, got {sign}"
        ))),
    }
}

/// Length of [`commutator_word`] for span `s`: `(3 * 2^(s-1) - 2) q`.
pub fn commutator_length_factor(span: usize) -> u64 {
    assert!(span >= 2);
    3 * (1u64 << (span - 1)) - 2
}

/// A constant `K` with `length(short_word(x)) <= K * E(x)` for every `x` in
/// `T_dim`: the worst over spans `s` of `g(s)` commutators of length factor
/// [`commutator_length_factor`].
pub fn short_word_constant(dim: usize) -> u64 {
    (2..dim)
        .map(|s| waring_g(s as u32) * commutator_length_factor(s))
        .max()
        .unwrap_or(1)
        .max(1)
}

fn magnitude_u64(m: &BigInt) -> Result<u64> {
    m.magnitude()
        .to_u64()
        .ok_or_else(|| Error::resource(format!("exponent {m} does not fit in 64 bits")))
}

/// A word for `x` built from its normal form: first-diagonal terms literally,
/// every other term through power decompositions and commutators.
pub fn short_word(x: &GroupElement) -> Result<Word> {
    let dim = x.dim();
    let mut w = Word::new();
    for (g, m) in NormalForm::of(x).iter() {
        if g.span() == 1 {
            w.push_power(g, m.clone());
            continue;
        }
        let sign = if m.is_negative() { -1 } else { 1 };
        let dec = waring_decompose(magnitude_u64(m)?, g.span() as u32)?;
        for q in dec.parts {
            w.append(&commutator_word(g.i(), g.j(), q, sign, dim)?);
        }
    }
    Ok(w)
}

/// A word for an element of `H_k` in the letters `a_i, b_i` only:
/// `c^p` becomes at most four commutators `[a_1^q, b_1^q]` (exchanged when
/// `p < 0`), followed by `b_k^{m_k} a_k^{n_k} ... b_1^{m_1} a_1^{n_1}`.
pub fn short_word_h(h: &HeisenbergForm) -> Result<Word> {
    let k = h.k;
    if h.a_exps.len() != k || h.b_exps.len() != k || k == 0 {
        return Err(Error::InvalidArgument("malformed Heisenberg form".into()));
    }
    let a1 = heisenberg_a(k, 1);
    let b1 = heisenberg_b(k, 1);
    let mut w = Word::new();
    for q in four_squares(magnitude_u64(&h.c_exp)?).parts {
        let (x, y) = (Word::power(a1, q), Word::power(b1, q));
        let c = if h.c_exp.is_negative() {
            commutator(&y, &x)
        } else {
            commutator(&x, &y)
        };
        w.append(&c);
    }
    for i in (1..=k).rev() {
        w.push_power(heisenberg_b(k, i), h.b_exps[i - 1].clone());
        w.push_power(heisenberg_a(k, i), h.a_exps[i - 1].clone());
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::heisenberg_to_matrix;
    use num_bigint::BigUint;

    fn g(i: usize, j: usize) -> GeneratorIndex {
        GeneratorIndex::raw(i, j)
    }

    /// Least number of k-th powers summing to m, by exhaustive search over
    /// nonincreasing bases.
    fn brute_min_parts(m: u64, k: u32, max_base: u64, depth: u32) -> Option<u32> {
        if m == 0 {
            return Some(0);
        }
        if depth == 0 {
            return None;
        }
        let mut best: Option<u32> = None;
        for q in (1..=max_base).rev() {
            let p = q.pow(k);
            if p > m {
                continue;
            }
            if let Some(r) = brute_min_parts(m - p, k, q, depth - 1) {
                best = Some(best.map_or(r + 1, |b| b.min(r + 1)));
            }
        }
        best
    }

    #[test]
    fn g_values() {
        let known = [1, 4, 9, 19, 37, 73, 143, 279];
        for (k, &v) in known.iter().enumerate() {
            assert_eq!(waring_g(k as u32 + 1), v);
        }
    }

    #[test]
    fn four_squares_examples() {
        assert_eq!(four_squares(7).parts, vec![2, 1, 1, 1]);
        assert_eq!(four_squares(4).parts, vec![2]);
        assert!(four_squares(0).parts.is_empty());
        assert_eq!(four_squares(100).parts, vec![10]);
    }

    #[test]
    fn four_squares_is_minimal_and_exact() {
        for p in 0..=2000u64 {
            let d = four_squares(p);
            assert_eq!(d.total(), BigInt::from(p));
            assert!(d.parts.len() <= 4);
            assert!(d.parts.iter().all(|&q| q * q <= p));
            let want = brute_min_parts(p, 2, p.sqrt(), 4).unwrap();
            assert_eq!(d.parts.len() as u32, want, "p = {p}");
        }
    }

    #[test]
    fn waring_examples() {
        assert_eq!(
            waring_decompose(23, 3).unwrap().parts,
            vec![2, 2, 1, 1, 1, 1, 1, 1, 1]
        );
        assert_eq!(waring_decompose(41, 1).unwrap().parts, vec![41]);
        assert_eq!(waring_decompose(16, 4).unwrap().parts, vec![2]);
        assert!(waring_decompose(0, 5).unwrap().parts.is_empty());
        assert!(matches!(
            waring_decompose(WARING_CAP + 1, 3),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn waring_matches_exhaustive_search() {
        for k in 3..=5u32 {
            for m in 0..=300u64 {
                let d = waring_decompose(m, k).unwrap();
                assert_eq!(d.total(), BigInt::from(m));
                assert!(d.parts.len() as u64 <= waring_g(k));
                let want = brute_min_parts(m, k, m.nth_root(k), waring_g(k) as u32).unwrap();
                assert_eq!(d.parts.len() as u32, want, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn commutator_word_examples() {
        let w = commutator_word(1, 3, 2, 1, 3).unwrap();
        let expected = Word::from_letters([
            crate::Letter::new(g(1, 2), -2).unwrap(),
            crate::Letter::new(g(2, 3), -2).unwrap(),
            crate::Letter::new(g(1, 2), 2).unwrap(),
            crate::Letter::new(g(2, 3), 2).unwrap(),
        ]);
        assert_eq!(w, expected);
        assert_eq!(
            w.evaluate(3).unwrap(),
            GroupElement::generator(3, g(1, 3), 4).unwrap()
        );
        assert_eq!(
            commutator_word(1, 3, 1, 1, 3).unwrap().evaluate(3).unwrap(),
            GroupElement::generator(3, g(1, 3), 1).unwrap()
        );
        assert_eq!(
            commutator_word(1, 4, 2, 1, 4).unwrap().evaluate(4).unwrap(),
            GroupElement::generator(4, g(1, 4), 8).unwrap()
        );
        assert_eq!(
            commutator_word(1, 4, 2, -1, 4)
                .unwrap()
                .evaluate(4)
                .unwrap(),
            GroupElement::generator(4, g(1, 4), -8).unwrap()
        );
        assert!(matches!(
            commutator_word(1, 2, 3, 1, 3),
            Err(Error::InvalidSpan { .. })
        ));
        assert!(commutator_word(1, 3, 3, 0, 3).is_err());
    }

    #[test]
    fn commutator_lengths_follow_factor() {
        for span in 2..=5 {
            for q in [1u64, 2, 7] {
                let w = commutator_word(1, 1 + span, q, 1, 6).unwrap();
                assert_eq!(
                    w.length(),
                    BigUint::from(commutator_length_factor(span) * q)
                );
            }
        }
    }

    #[test]
    fn short_word_examples() {
        let x = GroupElement::generator(3, g(1, 3), 100).unwrap();
        let w = short_word(&x).unwrap();
        assert_eq!(w.length(), BigUint::from(40u32));
        assert_eq!(w.evaluate(3).unwrap(), x);
        let a = GroupElement::generator(4, g(2, 3), 1).unwrap();
        assert_eq!(short_word(&a).unwrap(), Word::power(g(2, 3), 1));
        assert!(short_word(&GroupElement::identity(5).unwrap())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn short_word_h_examples() {
        let mut h = HeisenbergForm::zero(1).unwrap();
        h.c_exp = 4.into();
        let w = short_word_h(&h).unwrap();
        assert_eq!(w.length(), BigUint::from(8u32));
        assert_eq!(w.evaluate(3).unwrap(), heisenberg_to_matrix(&h));

        assert!(short_word_h(&HeisenbergForm::zero(2).unwrap())
            .unwrap()
            .is_empty());

        let mut h = HeisenbergForm::zero(2).unwrap();
        h.a_exps[0] = 3.into();
        h.c_exp = 7.into();
        let w = short_word_h(&h).unwrap();
        assert_eq!(w.evaluate(4).unwrap(), heisenberg_to_matrix(&h));
        let len = w.length().to_f64().unwrap();
        assert!(len <= 3.0 + 16.0 * 7f64.sqrt());
        assert!(w.letters().iter().all(|l| l.gen != g(1, 4)));

        h.c_exp = (-7).into();
        assert_eq!(
            short_word_h(&h).unwrap().evaluate(4).unwrap(),
            heisenberg_to_matrix(&h)
        );
    }
}
