#![allow(dead_code)]

use nilmetric::{GeneratorIndex, GroupElement, Word};
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn element(dim: usize, max_abs: i64) -> impl Strategy<Value = GroupElement> {
    let n = dim * (dim - 1) / 2;
    proptest::collection::vec(-max_abs..=max_abs, n).prop_map(move |vals| {
        let gens = GeneratorIndex::all_decreasing(dim);
        GroupElement::from_entries(
            dim,
            gens.into_iter().zip(vals.into_iter().map(BigInt::from)),
        )
        .unwrap()
    })
}

pub fn word(dim: usize, max_letters: usize, max_exp: i64) -> impl Strategy<Value = Word> {
    let gens = GeneratorIndex::all_decreasing(dim);
    let k = gens.len();
    proptest::collection::vec((0..k, -max_exp..=max_exp), 0..=max_letters).prop_map(move |ls| {
        let mut w = Word::new();
        for (g, e) in ls {
            w.push_power(gens[g], BigInt::from(e));
        }
        w
    })
}

pub fn dim_and_element(max_dim: usize, max_abs: i64) -> impl Strategy<Value = GroupElement> {
    (2..=max_dim).prop_flat_map(move |d| element(d, max_abs))
}
