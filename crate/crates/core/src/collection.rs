//! Collection: rewriting a word into normal form using only the relations of
//! the presentation, while counting how many instances of each generator are
//! present along the way.
//!
//! The strategy is deterministic leftmost collection. At every step the
//! leftmost adjacent pair that is out of decreasing order is swapped, using
//!
//! ```text
//! u^s v^t = v^t u^s [u^s, v^t]
//! ```
//!
//! and the correction `[u^s, v^t]` (trivial unless the pair is
//! `a_ik, a_kj` in some order) is inserted immediately after the swapped
//! pair. Adjacent letters of the same generator are merged.
//!
//! Everything left of the scan position is already sorted, so the process is
//! run as an insertion into a sorted prefix plus a stack of pending letters:
//! a letter bubbles left past every smaller letter of the prefix, leaving the
//! passed letters and their corrections on the stack in their original order.
//! That replays the leftmost strategy exactly.
//!
//! Letters keep their run-length exponents. Swapping `u^s` past `v^t`
//! produces the single correction `a_ij^{st}`, which is what `|s t|` unit
//! swaps would produce in total, and instance counts are sums of `|exp|`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::fit::loglog_slope;
use crate::group::{GeneratorIndex, NormalForm, Word};
use crate::{Error, Result};

/// Record of one collection run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectionTrace {
    /// Word length `L` of the input.
    pub input_length: BigUint,
    /// Peak number of instances of each generator (both signs) present at
    /// any step, for every generator of the dimension.
    pub max_counts: BTreeMap<GeneratorIndex, BigUint>,
    /// Number of adjacent transpositions performed.
    pub swap_count: u64,
    /// Number of correction letters inserted.
    pub corrections: u64,
    pub result: NormalForm,
}

/// The correction letter for `u^s v^t = v^t u^s [u^s, v^t]`, if nontrivial.
///
/// `[a_ik^s, a_kj^t] = a_ij^{st}` and `[a_kj^s, a_ik^t] = a_ij^{-st}`; every
/// other pair of generators commutes.
pub fn swap_correction(
    u: GeneratorIndex,
    s: &BigInt,
    v: GeneratorIndex,
    t: &BigInt,
) -> Option<(GeneratorIndex, BigInt)> {
    if u.j() == v.i() {
        Some((GeneratorIndex::raw(u.i(), v.j()), s * t))
    } else if v.j() == u.i() {
        Some((GeneratorIndex::raw(v.i(), u.j()), -(s * t)))
    } else {
        None
    }
}

#[cfg(debug_assertions)]
fn assert_swap_sound(
    u: GeneratorIndex,
    s: &BigInt,
    v: GeneratorIndex,
    t: &BigInt,
    corr: &Option<(GeneratorIndex, BigInt)>,
) {
    let dim = u.j().max(v.j());
    let before = Word::from_letters([
        crate::Letter {
            gen: u,
            exp: s.clone(),
        },
        crate::Letter {
            gen: v,
            exp: t.clone(),
        },
    ]);
    let mut after = Word::power(v, t.clone());
    after.push_power(u, s.clone());
    if let Some((g, e)) = corr {
        after.push_power(*g, e.clone());
    }
    debug_assert_eq!(
        before.evaluate(dim).unwrap(),
        after.evaluate(dim).unwrap(),
        "unsound swap of {u}^{s} and {v}^{t}"
    );
}

struct Collector {
    index: BTreeMap<GeneratorIndex, usize>,
    counts: Vec<BigUint>,
    peaks: Vec<BigUint>,
    /// Sorted prefix, strictly decreasing generators.
    sorted: Vec<(GeneratorIndex, BigInt)>,
    /// Letters still to be placed; the next one is on top.
    pending: Vec<(GeneratorIndex, BigInt)>,
    swaps: u64,
    corrections: u64,
}

impl Collector {
    fn add(&mut self, g: GeneratorIndex, e: &BigInt) {
        self.counts[self.index[&g]] += e.magnitude();
    }

    fn sub(&mut self, g: GeneratorIndex, amount: &BigUint) {
        self.counts[self.index[&g]] -= amount;
    }

    fn record_peaks(&mut self) {
        for (c, p) in self.counts.iter().zip(self.peaks.iter_mut()) {
            if c > p {
                *p = c.clone();
            }
        }
    }

    fn step(&mut self, v: GeneratorIndex, t: BigInt) {
        let split = self
            .sorted
            .iter()
            .position(|(g, _)| *g < v)
            .unwrap_or(self.sorted.len());
        let passed: Vec<(GeneratorIndex, BigInt)> = self.sorted.drain(split..).collect();

        // Bubble v leftwards past passed[r], r = last..=0.
        let mut requeue = Vec::with_capacity(2 * passed.len());
        for (u, s) in passed.iter().rev() {
            let corr = swap_correction(*u, s, v, &t);
            #[cfg(debug_assertions)]
            assert_swap_sound(*u, s, v, &t, &corr);
            self.swaps += 1;
            if let Some((g, e)) = corr {
                self.add(g, &e);
                self.corrections += 1;
                requeue.push((g, e));
            }
            requeue.push((*u, s.clone()));
        }
        // Corrections only ever add instances; the merge below can only
        // remove them, so the peak is reached here.
        self.record_peaks();

        match self.sorted.last_mut() {
            Some((g, e)) if *g == v => {
                let before = e.magnitude() + t.magnitude();
                *e += &t;
                let after = e.magnitude().clone();
                let emptied = e.is_zero();
                self.sub(v, &(before - after));
                if emptied {
                    self.sorted.pop();
                }
            }
            _ => self.sorted.push((v, t)),
        }
        // `requeue` was built right-to-left, so its last element is the
        // leftmost letter and lands on top of the stack.
        self.pending.extend(requeue);
    }
}

/// Collects `w` into normal form in `T_dim`.
pub fn collect(w: &Word, dim: usize) -> Result<CollectionTrace> {
    crate::GroupElement::identity(dim)?;
    for l in w.letters() {
        l.gen.check(dim)?;
    }
    let gens = GeneratorIndex::all_decreasing(dim);
    let index: BTreeMap<_, _> = gens.iter().enumerate().map(|(k, g)| (*g, k)).collect();
    let mut c = Collector {
        counts: vec![BigUint::zero(); gens.len()],
        peaks: vec![BigUint::zero(); gens.len()],
        index,
        sorted: Vec::new(),
        pending: Vec::with_capacity(w.letters().len()),
        swaps: 0,
        corrections: 0,
    };
    for l in w.letters().iter().rev() {
        c.add(l.gen, &l.exp);
        c.pending.push((l.gen, l.exp.clone()));
    }
    c.record_peaks();

    while let Some((v, t)) = c.pending.pop() {
        c.step(v, t);
    }

    let result = NormalForm::from_exponents(dim, c.sorted.drain(..))?;
    Ok(CollectionTrace {
        input_length: w.length(),
        max_counts: gens
            .iter()
            .map(|g| (*g, c.peaks[c.index[g]].clone()))
            .collect(),
        swap_count: c.swaps,
        corrections: c.corrections,
        result,
    })
}

/// Per-generator fit of peak instance counts against input length.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaFit {
    /// Smallest `C` with `max_count <= C * L^(j-i)` over all samples.
    pub constants: BTreeMap<GeneratorIndex, f64>,
    /// Log-log slope of the largest peak count at each distinct input length.
    /// `None` when fewer than two lengths have a nonzero count.
    pub slopes: BTreeMap<GeneratorIndex, Option<f64>>,
    /// Generators whose fitted slope exceeds `j - i` by more than
    /// [`SLOPE_TOLERANCE`].
    pub violations: Vec<GeneratorIndex>,
}

pub const SLOPE_TOLERANCE: f64 = 0.2;

fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Collects every sample and fits the instance-count bound `C_ij L^(j-i)`.
pub fn verify_lemma_bound(samples: &[Word], dim: usize) -> Result<LemmaFit> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no sample words".into()));
    }
    let gens = GeneratorIndex::all_decreasing(dim);
    let mut constants: BTreeMap<GeneratorIndex, f64> = gens.iter().map(|g| (*g, 0.0)).collect();
    // per generator: input length -> largest peak at that length
    let mut by_length: BTreeMap<GeneratorIndex, BTreeMap<BigUint, BigUint>> = BTreeMap::new();

    for w in samples {
        let trace = collect(w, dim)?;
        let len = trace.input_length.clone();
        if len.is_zero() {
            continue;
        }
        let lf = big_to_f64(&len);
        for (g, peak) in &trace.max_counts {
            let c = big_to_f64(peak) / lf.powi(g.span() as i32);
            let slot = constants.get_mut(g).expect("all generators present");
            if c > *slot {
                *slot = c;
            }
            let best = by_length
                .entry(*g)
                .or_default()
                .entry(len.clone())
                .or_default();
            if peak > best {
                *best = peak.clone();
            }
        }
    }

    let mut slopes = BTreeMap::new();
    let mut violations = Vec::new();
    for g in &gens {
        let pts: Vec<(f64, f64)> = by_length
            .get(g)
            .map(|m| {
                m.iter()
                    .map(|(l, c)| (big_to_f64(l), big_to_f64(c)))
                    .collect()
            })
            .unwrap_or_default();
        let slope = loglog_slope(&pts);
        if let Some(s) = slope {
            if s > g.span() as f64 + SLOPE_TOLERANCE {
                violations.push(*g);
            }
        }
        slopes.insert(*g, slope);
    }
    Ok(LemmaFit {
        constants,
        slopes,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{normal_form, Letter};
    use crate::GroupElement;

    fn g(i: usize, j: usize) -> GeneratorIndex {
        GeneratorIndex::raw(i, j)
    }

    fn word(letters: &[(usize, usize, i64)]) -> Word {
        Word::from_letters(
            letters
                .iter()
                .map(|&(i, j, e)| Letter::new(g(i, j), e).unwrap()),
        )
    }

    #[test]
    fn swap_table_covers_all_sign_cases() {
        for s in [-2i64, -1, 1, 3] {
            for t in [-3i64, -1, 1, 2] {
                let (s, t) = (BigInt::from(s), BigInt::from(t));
                for (u, v) in [(g(1, 2), g(2, 4)), (g(2, 4), g(1, 2)), (g(1, 3), g(2, 4))] {
                    let corr = swap_correction(u, &s, v, &t);
                    let lhs = Word::power(u, s.clone()).concat(&Word::power(v, t.clone()));
                    let mut rhs = Word::power(v, t.clone());
                    rhs.push_power(u, s.clone());
                    if let Some((cg, ce)) = corr {
                        rhs.push_power(cg, ce);
                    }
                    assert_eq!(lhs.evaluate(4).unwrap(), rhs.evaluate(4).unwrap());
                }
            }
        }
    }

    #[test]
    fn a12_a23() {
        let t = collect(&word(&[(1, 2, 1), (2, 3, 1)]), 3).unwrap();
        let expected =
            GroupElement::from_entries(3, [(g(1, 2), 1), (g(2, 3), 1), (g(1, 3), 1)]).unwrap();
        assert_eq!(t.result, normal_form(&expected));
        assert_eq!(t.swap_count, 3);
        assert_eq!(t.corrections, 1);
    }

    #[test]
    fn a23_a12_needs_no_swaps() {
        let t = collect(&word(&[(2, 3, 1), (1, 2, 1)]), 3).unwrap();
        let expected = GroupElement::from_entries(3, [(g(1, 2), 1), (g(2, 3), 1)]).unwrap();
        assert_eq!(t.result, normal_form(&expected));
        assert_eq!(t.swap_count, 0);
    }

    #[test]
    fn normal_words_are_fixed_points() {
        let x = GroupElement::from_entries(
            4,
            [
                (g(1, 4), 3),
                (g(2, 4), -1),
                (g(1, 3), 2),
                (g(3, 4), 5),
                (g(1, 2), -7),
            ],
        )
        .unwrap();
        let nf = normal_form(&x);
        let t = collect(&nf.to_word(), 4).unwrap();
        assert_eq!(t.result, nf);
        assert_eq!(t.swap_count, 0);
        for (gen, peak) in &t.max_counts {
            assert_eq!(*peak, nf.exponent(*gen).magnitude().clone());
        }
    }

    #[test]
    fn counts_bound_result_and_input() {
        let w = word(&[
            (1, 2, 3),
            (2, 3, -2),
            (3, 4, 4),
            (1, 2, -1),
            (2, 4, 1),
            (2, 3, 5),
        ]);
        let t = collect(&w, 4).unwrap();
        assert_eq!(t.input_length, BigUint::from(16u32));
        for (gen, peak) in &t.max_counts {
            assert!(*peak >= t.result.exponent(*gen).magnitude().clone());
            if gen.span() == 1 {
                assert!(*peak <= t.input_length);
            }
        }
        assert_eq!(t.result, normal_form(&w.evaluate(4).unwrap()));
    }

    #[test]
    fn rejects_bad_letters() {
        assert!(matches!(
            collect(&word(&[(1, 4, 1)]), 3),
            Err(Error::InvalidGenerator { .. })
        ));
    }

    #[test]
    fn single_generator_words_fit_constant_one() {
        let samples: Vec<Word> = (1..=20).map(|n| word(&[(1, 2, n)])).collect();
        let fit = verify_lemma_bound(&samples, 3).unwrap();
        assert_eq!(fit.constants[&g(1, 2)], 1.0);
        assert_eq!(fit.constants[&g(1, 3)], 0.0);
        assert!(fit.violations.is_empty());
        assert!(verify_lemma_bound(&[], 3).is_err());
    }

    #[test]
    fn alternating_word_has_quadratic_corner_count() {
        // (a12 a23)^m collects to a13^{m(m+1)/2} a23^m a12^m.
        let samples: Vec<Word> = [8usize, 16, 32, 64, 128]
            .iter()
            .map(|&m| {
                let mut w = Word::new();
                for _ in 0..m {
                    w.push_power(g(1, 2), 1.into());
                    w.push_power(g(2, 3), 1.into());
                }
                w
            })
            .collect();
        for w in &samples {
            let m = w.letters().len() as i64 / 2;
            let t = collect(w, 3).unwrap();
            assert_eq!(t.result.exponent(g(1, 3)), BigInt::from(m * (m + 1) / 2));
        }
        let fit = verify_lemma_bound(&samples, 3).unwrap();
        let slope = fit.slopes[&g(1, 3)].unwrap();
        assert!((slope - 2.0).abs() <= 0.2, "slope {slope}");
    }
}
