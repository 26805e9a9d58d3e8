mod common;

use common::{element, word};
use nilmetric::group::{
    heisenberg_relators, heisenberg_to_matrix, matrix_to_heisenberg, triangular_relators,
};
use nilmetric::text::{element_document, format_word, parse_element_document, parse_word};
use nilmetric::{GeneratorIndex, GroupElement, HeisenbergForm, NormalForm};
use num_bigint::BigInt;
use proptest::prelude::*;

fn g(i: usize, j: usize) -> GeneratorIndex {
    GeneratorIndex::new(i, j, j).unwrap()
}

#[test]
fn convention_matrix_identity() {
    // (I - E_ik)(I - E_kj)(I + E_ik)(I + E_kj) = I + E_ij
    for n in 3..=6 {
        for i in 1..=n {
            for k in i + 1..=n {
                for j in k + 1..=n {
                    let a = GroupElement::generator(n, g(i, k), 1).unwrap();
                    let b = GroupElement::generator(n, g(k, j), 1).unwrap();
                    let c = a
                        .inverse()
                        .multiply(&b.inverse())
                        .unwrap()
                        .multiply(&a)
                        .unwrap()
                        .multiply(&b)
                        .unwrap();
                    assert_eq!(c, GroupElement::generator(n, g(i, j), 1).unwrap());
                }
            }
        }
    }
}

#[test]
fn relators_are_trivial() {
    for n in 2..=6 {
        for r in triangular_relators(n).unwrap() {
            assert!(r.evaluate(n).unwrap().is_identity());
        }
    }
    for k in 1..=4 {
        for r in heisenberg_relators(k).unwrap() {
            assert!(r.evaluate(k + 2).unwrap().is_identity());
        }
    }
}

#[test]
fn spec_products() {
    let x = GroupElement::generator(3, g(1, 2), 1)
        .unwrap()
        .multiply(&GroupElement::generator(3, g(2, 3), 1).unwrap())
        .unwrap();
    assert_eq!(
        x,
        GroupElement::from_entries(3, [(g(1, 2), 1), (g(2, 3), 1), (g(1, 3), 1)]).unwrap()
    );
    let y = GroupElement::generator(3, g(2, 3), 1)
        .unwrap()
        .multiply(&GroupElement::generator(3, g(1, 2), 1).unwrap())
        .unwrap();
    assert_eq!(
        y,
        GroupElement::from_entries(3, [(g(1, 2), 1), (g(2, 3), 1)]).unwrap()
    );
    assert_eq!(
        x.inverse(),
        GroupElement::from_entries(3, [(g(1, 2), -1), (g(2, 3), -1)]).unwrap()
    );
    assert_eq!(
        GroupElement::generator(4, g(2, 4), 2).unwrap(),
        parse_word("a[2,4] a[2,4]", None)
            .unwrap()
            .evaluate(4)
            .unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn associativity((x, y, z) in (2usize..=6).prop_flat_map(|d| (element(d, 1_000_000), element(d, 1_000_000), element(d, 1_000_000)))) {
        let lhs = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let rhs = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_and_inverse(x in (2usize..=6).prop_flat_map(|d| element(d, 1_000_000))) {
        let id = GroupElement::identity(x.dim()).unwrap();
        prop_assert_eq!(&id.multiply(&x).unwrap(), &x);
        prop_assert_eq!(&x.multiply(&id).unwrap(), &x);
        prop_assert!(x.multiply(&x.inverse()).unwrap().is_identity());
        prop_assert!(x.inverse().multiply(&x).unwrap().is_identity());
    }

    #[test]
    fn normal_form_round_trip(x in (2usize..=6).prop_flat_map(|d| element(d, 1_000_000))) {
        let nf = NormalForm::of(&x);
        let w = nf.to_word();
        prop_assert_eq!(&w.evaluate(x.dim()).unwrap(), &x);
        let order: Vec<_> = w.letters().iter().map(|l| l.gen).collect();
        prop_assert!(order.windows(2).all(|p| p[0] > p[1]));
        prop_assert_eq!(NormalForm::from_exponents(x.dim(), nf.iter().map(|(g, e)| (g, e.clone()))).unwrap(), nf.clone());
        // the first diagonal is always read off directly
        for g in GeneratorIndex::first_diagonal(x.dim()) {
            prop_assert_eq!(&nf.exponent(g), x.entry(g));
        }
    }

    #[test]
    fn pow_matches_repeated_product(x in element(4, 50), e in -12i64..=12) {
        let mut y = GroupElement::identity(4).unwrap();
        let base = if e >= 0 { x.clone() } else { x.inverse() };
        for _ in 0..e.unsigned_abs() {
            y = y.multiply(&base).unwrap();
        }
        prop_assert_eq!(x.pow(e), y);
    }

    #[test]
    fn canonical_encoding_round_trip(x in (2usize..=6).prop_flat_map(|d| element(d, i64::MAX))) {
        let bytes = x.canonical_encoding();
        prop_assert_eq!(GroupElement::from_canonical_encoding(&bytes).unwrap(), x);
    }

    #[test]
    fn heisenberg_round_trip(k in 1usize..=4, vals in proptest::collection::vec(-10_000i64..=10_000, 9)) {
        let h = HeisenbergForm {
            k,
            a_exps: vals[..k].iter().map(|&v| BigInt::from(v)).collect(),
            b_exps: vals[4..4 + k].iter().map(|&v| BigInt::from(v)).collect(),
            c_exp: BigInt::from(vals[8]),
        };
        prop_assert_eq!(matrix_to_heisenberg(&heisenberg_to_matrix(&h), k).unwrap(), h);
    }

    #[test]
    fn word_text_round_trip(w in word(5, 20, 1000)) {
        let text = format_word(&w, None);
        prop_assert_eq!(parse_word(&text, None).unwrap(), w);
    }

    #[test]
    fn heisenberg_alias_round_trip(k in 1usize..=4, letters in proptest::collection::vec((0usize..3, 1usize..=4, -50i64..=50), 0..12)) {
        let mut text = Vec::new();
        for (kind, i, e) in letters {
            let i = 1 + (i - 1) % k;
            let tok = match kind { 0 => format!("a_{i}"), 1 => format!("b_{i}"), _ => "c".to_string() };
            text.push(format!("{tok}^{e}"));
        }
        let w = parse_word(&text.join(" "), Some(k)).unwrap();
        prop_assert_eq!(parse_word(&format_word(&w, Some(k)), Some(k)).unwrap(), w);
    }

    #[test]
    fn element_document_round_trip(x in (2usize..=6).prop_flat_map(|d| element(d, i64::MAX))) {
        let doc = element_document(&x);
        prop_assert_eq!(parse_element_document(&doc).unwrap(), x);
    }
}
