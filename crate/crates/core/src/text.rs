//! Text formats: the word syntax `a[i,j]^e ...` (with the Heisenberg aliases
//! `a_i`, `b_i`, `c`) and the JSON element document
//! `{"dim":3,"entries":[[1,3,9]]}`.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{Number, Value};

use crate::group::{
    heisenberg_a, heisenberg_b, heisenberg_c, matrix_to_heisenberg, GeneratorIndex, GroupElement,
    HeisenbergForm, NormalForm, Word,
};
use crate::{Error, Result};

fn parse_err(tok: &str, why: &str) -> Error {
    Error::Parse(format!("`{tok}`: {why}"))
}

fn parse_usize(s: &str, tok: &str) -> Result<usize> {
    s.parse().map_err(|_| parse_err(tok, "bad index"))
}

fn parse_token(tok: &str, heis: Option<usize>) -> Result<(GeneratorIndex, BigInt)> {
    let (base, exp) = match tok.split_once('^') {
        Some((b, e)) => (
            b,
            BigInt::from_str(e).map_err(|_| parse_err(tok, "bad exponent"))?,
        ),
        None => (tok, BigInt::from(1)),
    };
    if let Some(inner) = base.strip_prefix("a[").and_then(|r| r.strip_suffix(']')) {
        let (i, j) = inner
            .split_once(',')
            .ok_or_else(|| parse_err(tok, "expected a[i,j]"))?;
        let (i, j) = (parse_usize(i, tok)?, parse_usize(j, tok)?);
        if i < 1 || j <= i {
            return Err(parse_err(tok, "need 1 <= i < j"));
        }
        return Ok((GeneratorIndex::raw(i, j), exp));
    }
    let Some(k) = heis else {
        return Err(parse_err(tok, "expected a[i,j]^e"));
    };
    let alias = |idx: &str| -> Result<usize> {
        let i = parse_usize(idx, tok)?;
        if i < 1 || i > k {
            return Err(parse_err(tok, "alias index out of range"));
        }
        Ok(i)
    };
    let g = if base == "c" {
        heisenberg_c(k)
    } else if let Some(i) = base.strip_prefix("a_") {
        heisenberg_a(k, alias(i)?)
    } else if let Some(i) = base.strip_prefix("b_") {
        heisenberg_b(k, alias(i)?)
    } else {
        return Err(parse_err(tok, "expected a[i,j], a_i, b_i or c"));
    };
    Ok((g, exp))
}

/// Parses whitespace-separated tokens `a[i,j]^e` (the exponent defaults to
/// 1). With `heis = Some(k)` the aliases `a_i`, `b_i`, `c` of `H_k` are also
/// accepted.
pub fn parse_word(text: &str, heis: Option<usize>) -> Result<Word> {
    let mut w = Word::new();
    for tok in text.split_whitespace() {
        let (g, e) = parse_token(tok, heis)?;
        w.push_power(g, e);
    }
    Ok(w)
}

fn alias_name(g: GeneratorIndex, heis: Option<usize>) -> String {
    match heis {
        Some(k) if g == heisenberg_c(k) => "c".to_string(),
        Some(k) if g.i() == 1 && g.j() <= k + 1 => format!("a_{}", g.j() - 1),
        Some(k) if g.j() == k + 2 && g.i() >= 2 => format!("b_{}", g.i() - 1),
        _ => g.to_string(),
    }
}

/// Inverse of [`parse_word`]; aliases are used for the Heisenberg pattern
/// when `heis` is set.
pub fn format_word(w: &Word, heis: Option<usize>) -> String {
    w.letters()
        .iter()
        .map(|l| format!("{}^{}", alias_name(l.gen, heis), l.exp))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Normal form as a word: greatest generator first, or
/// `c^p b_k^m_k a_k^n_k ... b_1^m_1 a_1^n_1` for `H_k`.
pub fn format_normal_form(nf: &NormalForm, heis: Option<usize>) -> Result<String> {
    match heis {
        None => Ok(format_word(&nf.to_word(), None)),
        Some(k) => Ok(format_word(
            &heisenberg_word(&matrix_to_heisenberg(&nf.to_element(), k)?),
            Some(k),
        )),
    }
}

/// `c^p b_k^m_k a_k^n_k ... b_1^m_1 a_1^n_1`.
pub fn heisenberg_word(h: &HeisenbergForm) -> Word {
    let k = h.k;
    let mut w = Word::power(heisenberg_c(k), h.c_exp.clone());
    for i in (1..=k).rev() {
        w.push_power(heisenberg_b(k, i), h.b_exps[i - 1].clone());
        w.push_power(heisenberg_a(k, i), h.a_exps[i - 1].clone());
    }
    w
}

fn as_bigint(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string())
            .map_err(|_| Error::Parse(format!("{what} must be an integer, got {n}"))),
        other => Err(Error::Parse(format!(
            "{what} must be a number, got {other}"
        ))),
    }
}

fn as_index(v: &Value, what: &str) -> Result<usize> {
    as_bigint(v, what)?
        .try_into()
        .map_err(|_| Error::Parse(format!("{what} out of range")))
}

/// Reads `{"dim": n, "entries": [[i, j, value], ...]}`.
pub fn parse_element_document(text: &str) -> Result<GroupElement> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Parse("element document must be an object".into()))?;
    let dim = as_index(
        obj.get("dim")
            .ok_or_else(|| Error::Parse("missing `dim`".into()))?,
        "dim",
    )?;
    let entries = match obj.get("entries") {
        None => Vec::new(),
        Some(Value::Array(a)) => a.clone(),
        Some(_) => return Err(Error::Parse("`entries` must be an array".into())),
    };
    let mut triples = Vec::with_capacity(entries.len());
    for e in &entries {
        let t = e
            .as_array()
            .filter(|t| t.len() == 3)
            .ok_or_else(|| Error::Parse(format!("entry {e} must be [i, j, value]")))?;
        let g = GeneratorIndex::new(as_index(&t[0], "i")?, as_index(&t[1], "j")?, dim)?;
        triples.push((g, as_bigint(&t[2], "value")?));
    }
    GroupElement::from_entries(dim, triples)
}

fn number(v: impl ToString) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("integers are valid JSON numbers"))
}

/// Writes `x` as an element document, entries in decreasing generator order.
pub fn element_document(x: &GroupElement) -> String {
    let entries: Vec<Value> = x
        .entries()
        .map(|(g, v)| Value::Array(vec![number(g.i()), number(g.j()), number(v)]))
        .collect();
    let mut obj = serde_json::Map::new();
    obj.insert("dim".into(), number(x.dim()));
    obj.insert("entries".into(), Value::Array(entries));
    Value::Object(obj).to_string()
}
