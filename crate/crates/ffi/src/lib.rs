//! C ABI over `nilmetric`.
//!
//! Every function returns an [`NmStatus`]; results come back through out
//! pointers. On failure [`nm_last_error_message`] describes the error.
//! Handles are opaque and must be released with their `*_free` function;
//! strings returned by the library must be released with [`nm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nilmetric::distortion::{
    cyclic_exponent_t, distortion_profile, embed_composed_split, embed_heis_in_t,
    embed_heis_subset, embed_t_block, embed_t_corner, SamplerSpec,
};
use nilmetric::exact_metric::{bfs_ball, exact_length, BallTable};
use nilmetric::group::matrix_to_heisenberg;
use nilmetric::quasimetric::estimate;
use nilmetric::synthesis::{short_word, short_word_h};
use nilmetric::text::{
    element_document, format_normal_form, format_word, parse_element_document, parse_word,
};
use nilmetric::{Error, GeneratorIndex, GroupElement, GroupSpec, NormalForm, Word};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Group element, an upper unitriangular integer matrix.
pub struct NmElement(GroupElement);

/// Word in the generators `a[i,j]`.
pub struct NmWord(Word);

/// Exact word lengths of a ball in the Cayley graph.
pub struct NmBall(BallTable);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    DimensionMismatch = 5,
    InvalidEmbedding = 6,
    ResourceLimit = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NmEmbeddingKind {
    HeisSubset = 0,
    HeisInT = 1,
    Corner = 2,
    Block = 3,
    Composed = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(NmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) => NmStatus::ParseError,
            Error::DimensionMismatch { .. } => NmStatus::DimensionMismatch,
            Error::InvalidEmbedding(_) => NmStatus::InvalidEmbedding,
            Error::ResourceLimit { .. } => NmStatus::ResourceLimit,
            _ => NmStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(NmStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NmStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal error: panic inside nilmetric".into());
            NmStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(NmStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(NmStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(NmStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(NmStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure(NmStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("library output has no nul bytes")
        .into_raw()
}

fn heis(k: usize) -> Option<usize> {
    (k > 0).then_some(k)
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn nm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out_elem` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nm_element_identity(
    dim: usize,
    out_elem: *mut *mut NmElement,
) -> NmStatus {
    guard(|| {
        let slot = out(out_elem, "out_elem")?;
        *slot = boxed(NmElement(GroupElement::identity(dim)?));
        Ok(())
    })
}

/// Builds an element from `n` triples `(is[t], js[t], values[t])`.
///
/// # Safety
/// The three arrays must hold `n` items each.
#[no_mangle]
pub unsafe extern "C" fn nm_element_from_entries(
    dim: usize,
    is: *const usize,
    js: *const usize,
    values: *const i64,
    n: usize,
    out_elem: *mut *mut NmElement,
) -> NmStatus {
    guard(|| {
        let (is, js, vs) = (
            slice(is, n, "is")?,
            slice(js, n, "js")?,
            slice(values, n, "values")?,
        );
        let mut entries = Vec::with_capacity(n);
        for t in 0..n {
            entries.push((GeneratorIndex::new(is[t], js[t], dim)?, BigInt::from(vs[t])));
        }
        let x = GroupElement::from_entries(dim, entries)?;
        *out(out_elem, "out_elem")? = boxed(NmElement(x));
        Ok(())
    })
}

/// Parses a JSON element document `{"dim":3,"entries":[[1,3,9]]}`.
///
/// # Safety
/// `json` must be a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn nm_element_from_json(
    json: *const c_char,
    out_elem: *mut *mut NmElement,
) -> NmStatus {
    guard(|| {
        let x = parse_element_document(text(json, "json")?)?;
        *out(out_elem, "out_elem")? = boxed(NmElement(x));
        Ok(())
    })
}

/// # Safety
/// `elem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_element_to_json(
    elem: *const NmElement,
    out_json: *mut *mut c_char,
) -> NmStatus {
    guard(|| {
        let x = deref(elem, "elem")?;
        *out(out_json, "out_json")? = owned_string(element_document(&x.0));
        Ok(())
    })
}

/// Dimension of the matrix, or 0 for a null handle.
///
/// # Safety
/// `elem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_element_dim(elem: *const NmElement) -> usize {
    elem.as_ref().map_or(0, |x| x.0.dim())
}

/// Entry `(i, j)` as a decimal string.
///
/// # Safety
/// `elem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_element_entry(
    elem: *const NmElement,
    i: usize,
    j: usize,
    out_value: *mut *mut c_char,
) -> NmStatus {
    guard(|| {
        let x = &deref(elem, "elem")?.0;
        let g = GeneratorIndex::new(i, j, x.dim())?;
        *out(out_value, "out_value")? = owned_string(x.entry(g).to_string());
        Ok(())
    })
}

/// Entry `(i, j)` as an `int64_t`; fails with `InvalidArgument` on overflow.
///
/// # Safety
/// `elem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_element_entry_i64(
    elem: *const NmElement,
    i: usize,
    j: usize,
    out_value: *mut i64,
) -> NmStatus {
    guard(|| {
        let x = &deref(elem, "elem")?.0;
        let g = GeneratorIndex::new(i, j, x.dim())?;
        let v = x
            .entry(g)
            .to_i64()
            .ok_or_else(|| invalid(format!("entry {g} does not fit in 64 bits")))?;
        *out(out_value, "out_value")? = v;
        Ok(())
    })
}

/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn nm_element_multiply(
    a: *const NmElement,
    b: *const NmElement,
    out_elem: *mut *mut NmElement,
) -> NmStatus {
    guard(|| {
        let x = deref(a, "a")?.0.multiply(&deref(b, "b")?.0)?;
        *out(out_elem, "out_elem")? = boxed(NmElement(x));
        Ok(())
    })
}

/// # Safety
/// `elem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_element_inverse(
    elem: *const NmElement,
    out_elem: *mut *mut NmElement,
) -> NmStatus {
    guard(|| {
        let x = deref(elem, "elem")?.0.inverse();
        *out(out_elem, "out_elem")? = boxed(NmElement(x));
        Ok(())
    })
}

/// # Safety
/// `elem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_element_pow(
    elem: *const NmElement,
    e: i64,
    out_elem: *mut *mut NmElement,
) -> NmStatus {
    guard(|| {
        let x = deref(elem, "elem")?.0.pow(e);
        *out(out_elem, "out_elem")? = boxed(NmElement(x));
        Ok(())
    })
}

/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn nm_element_equal(
    a: *const NmElement,
    b: *const NmElement,
    out_equal: *mut bool,
) -> NmStatus {
    guard(|| {
        let eq = deref(a, "a")?.0 == deref(b, "b")?.0;
        *out(out_equal, "out_equal")? = eq;
        Ok(())
    })
}

/// # Safety
/// `elem` must be null or a handle that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn nm_element_free(elem: *mut NmElement) {
    if !elem.is_null() {
        drop(Box::from_raw(elem));
    }
}

/// Parses `a[i,j]^e ...`. With `heisenberg_k > 0` the aliases `a_i`, `b_i`,
/// `c` of `H_k` are accepted too.
///
/// # Safety
/// `word_text` must be a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn nm_word_parse(
    word_text: *const c_char,
    heisenberg_k: usize,
    out_word: *mut *mut NmWord,
) -> NmStatus {
    guard(|| {
        let w = parse_word(text(word_text, "word_text")?, heis(heisenberg_k))?;
        *out(out_word, "out_word")? = boxed(NmWord(w));
        Ok(())
    })
}

/// # Safety
/// `word` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_word_format(
    word: *const NmWord,
    heisenberg_k: usize,
    out_text: *mut *mut c_char,
) -> NmStatus {
    guard(|| {
        let s = format_word(&deref(word, "word")?.0, heis(heisenberg_k));
        *out(out_text, "out_text")? = owned_string(s);
        Ok(())
    })
}

/// Sum of the absolute exponents.
///
/// # Safety
/// `word` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_word_length(word: *const NmWord, out_length: *mut u64) -> NmStatus {
    guard(|| {
        let len = deref(word, "word")?.0.length();
        let len = len
            .to_u64()
            .ok_or_else(|| invalid(format!("length {len} does not fit in 64 bits")))?;
        *out(out_length, "out_length")? = len;
        Ok(())
    })
}

/// # Safety
/// `word` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_word_evaluate(
    word: *const NmWord,
    dim: usize,
    out_elem: *mut *mut NmElement,
) -> NmStatus {
    guard(|| {
        let x = deref(word, "word")?.0.evaluate(dim)?;
        *out(out_elem, "out_elem")? = boxed(NmElement(x));
        Ok(())
    })
}

/// # Safety
/// `word` must be null or a handle that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn nm_word_free(word: *mut NmWord) {
    if !word.is_null() {
        drop(Box::from_raw(word));
    }
}

fn group_of(x: &GroupElement, heisenberg_k: usize) -> Result<GroupSpec, Failure> {
    let group = match heis(heisenberg_k) {
        Some(k) => GroupSpec::heisenberg(k)?,
        None => GroupSpec::triangular(x.dim())?,
    };
    if group.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: group.dim(),
        }
        .into());
    }
    if !group.contains(x) {
        return Err(invalid(format!("{x} is not in {group}")));
    }
    Ok(group)
}

/// Normal form as text, greatest generator first (Heisenberg aliases when
/// `heisenberg_k > 0`).
///
/// # Safety
/// `elem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_normal_form_string(
    elem: *const NmElement,
    heisenberg_k: usize,
    out_text: *mut *mut c_char,
) -> NmStatus {
    guard(|| {
        let x = &deref(elem, "elem")?.0;
        group_of(x, heisenberg_k)?;
        let s = format_normal_form(&NormalForm::of(x), heis(heisenberg_k))?;
        *out(out_text, "out_text")? = owned_string(s);
        Ok(())
    })
}

/// Metric estimate in `T_dim`, or in `H_k` when `heisenberg_k > 0`.
///
/// # Safety
/// `elem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_estimate(
    elem: *const NmElement,
    heisenberg_k: usize,
    out_value: *mut f64,
) -> NmStatus {
    guard(|| {
        let x = &deref(elem, "elem")?.0;
        let v = estimate(group_of(x, heisenberg_k)?, x)?.value;
        *out(out_value, "out_value")? = v;
        Ok(())
    })
}

/// Short word for `elem`, built from its normal form.
///
/// # Safety
/// `elem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_short_word(
    elem: *const NmElement,
    heisenberg_k: usize,
    out_word: *mut *mut NmWord,
) -> NmStatus {
    guard(|| {
        let x = &deref(elem, "elem")?.0;
        let w = match group_of(x, heisenberg_k)? {
            GroupSpec::Heisenberg(k) => short_word_h(&matrix_to_heisenberg(x, k)?)?,
            GroupSpec::Triangular(_) => short_word(x)?,
        };
        *out(out_word, "out_word")? = boxed(NmWord(w));
        Ok(())
    })
}

/// Collects `word` into normal form, returning the element and the number of
/// swaps performed.
///
/// # Safety
/// `word` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_collect(
    word: *const NmWord,
    dim: usize,
    out_elem: *mut *mut NmElement,
    out_swaps: *mut u64,
) -> NmStatus {
    guard(|| {
        let trace = nilmetric::collection::collect(&deref(word, "word")?.0, dim)?;
        let swaps = trace
            .swap_count
            .to_u64()
            .ok_or_else(|| invalid("swap count does not fit in 64 bits"))?;
        let slot = out(out_elem, "out_elem")?;
        *out(out_swaps, "out_swaps")? = swaps;
        *slot = boxed(NmElement(trace.result.to_element()));
        Ok(())
    })
}

/// Breadth-first ball of `radius` in `T_dim` for the generators
/// `(gens[2t], gens[2t+1])`, `t < n_gens`. Storing more than `budget`
/// elements fails with `ResourceLimit`.
///
/// # Safety
/// `gens` must hold `2 * n_gens` items.
#[no_mangle]
pub unsafe extern "C" fn nm_ball_new(
    dim: usize,
    gens: *const usize,
    n_gens: usize,
    radius: u32,
    budget: usize,
    out_ball: *mut *mut NmBall,
) -> NmStatus {
    guard(|| {
        let pairs = slice(gens, 2 * n_gens, "gens")?;
        let gens = pairs
            .chunks(2)
            .map(|p| GeneratorIndex::new(p[0], p[1], dim))
            .collect::<nilmetric::Result<Vec<_>>>()?;
        let table = bfs_ball(dim, &gens, radius, budget)?;
        *out(out_ball, "out_ball")? = boxed(NmBall(table));
        Ok(())
    })
}

/// Number of elements in the ball, or 0 for a null handle.
///
/// # Safety
/// `ball` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_ball_size(ball: *const NmBall) -> usize {
    ball.as_ref().map_or(0, |b| b.0.len())
}

/// Exact word length of `elem`, or -1 when it lies outside the ball.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn nm_ball_exact_length(
    ball: *const NmBall,
    elem: *const NmElement,
    out_length: *mut i64,
) -> NmStatus {
    guard(|| {
        let len = exact_length(&deref(elem, "elem")?.0, &deref(ball, "ball")?.0)?;
        *out(out_length, "out_length")? = len.map_or(-1, i64::from);
        Ok(())
    })
}

/// # Safety
/// `ball` must be null or a handle that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn nm_ball_free(ball: *mut NmBall) {
    if !ball.is_null() {
        drop(Box::from_raw(ball));
    }
}

/// Exponent `j - i` of the smallest generator in the normal form of `elem`.
///
/// # Safety
/// `elem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nm_cyclic_exponent(
    elem: *const NmElement,
    out_exponent: *mut u32,
) -> NmStatus {
    guard(|| {
        let p = cyclic_exponent_t(&deref(elem, "elem")?.0)?;
        *out(out_exponent, "out_exponent")? = p;
        Ok(())
    })
}

/// Fits the distortion exponent of an embedding on the grid up to `n_max`.
/// `subset` is only read for `HeisSubset`, `a` for `Block` and `Composed`,
/// `r` for `Composed`. A fit that cannot be made reports NaN.
///
/// # Safety
/// `subset` must hold `subset_len` items.
#[no_mangle]
pub unsafe extern "C" fn nm_distortion_fit(
    kind: NmEmbeddingKind,
    k: usize,
    l: usize,
    a: usize,
    r: usize,
    subset: *const usize,
    subset_len: usize,
    n_max: u64,
    random_samples: usize,
    seed: u64,
    out_fitted: *mut f64,
    out_predicted: *mut u32,
) -> NmStatus {
    guard(|| {
        let e = match kind {
            NmEmbeddingKind::HeisSubset => {
                embed_heis_subset(k, l, slice(subset, subset_len, "subset")?)?
            }
            NmEmbeddingKind::HeisInT => embed_heis_in_t(k)?,
            NmEmbeddingKind::Corner => embed_t_corner(k, l)?,
            NmEmbeddingKind::Block => embed_t_block(k, l, a)?,
            NmEmbeddingKind::Composed => embed_composed_split(k, l, r, a)?,
        };
        let profile = distortion_profile(
            &e,
            n_max,
            SamplerSpec {
                random_samples,
                seed,
            },
        )?;
        let fitted = out(out_fitted, "out_fitted")?;
        *out(out_predicted, "out_predicted")? = e.predicted_exponent;
        *fitted = profile.fitted_exponent.unwrap_or(f64::NAN);
        Ok(())
    })
}
