//! Embeddings between the two families and empirical distortion profiles.
//!
//! Every embedding here is induced by an increasing map of matrix indices
//! `sigma`, sending the entry `(i, j)` to `(sigma(i), sigma(j))`. Such a
//! relabelling preserves matrix products, so it is an injective homomorphism.
//!
//! A profile approximates `Delta(n) = max { E_inner(x) : E_outer(image x) <= n }`
//! over declared families: powers `g^t` of each source generator (the
//! witnesses) and a fixed pool of random elements.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact_metric::{exact_length, BallTable};
use crate::fit::loglog_slope;
use crate::group::{
    heisenberg_a, heisenberg_relators, triangular_relators, GeneratorIndex, GroupElement,
    GroupSpec, NormalForm, Word,
};
use crate::quasimetric::estimate;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmbeddingKind {
    /// `H_k` into `H_l` through a subset of the `a_i, b_i`.
    HeisSubset,
    /// `H_k` inside `T_{k+2}`.
    HeisIntoT,
    /// `T_k` as the upper-left block of `T_l`.
    TCorner,
    /// `T_k` split into two diagonal blocks of `T_l` with an identity block
    /// between them.
    TBlock,
    /// A block embedding followed by a corner embedding.
    Composed,
}

impl EmbeddingKind {
    pub fn name(&self) -> &'static str {
        match self {
            EmbeddingKind::HeisSubset => "heis-subset",
            EmbeddingKind::HeisIntoT => "heis-in-T",
            EmbeddingKind::TCorner => "corner",
            EmbeddingKind::TBlock => "block",
            EmbeddingKind::Composed => "composed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub kind: EmbeddingKind,
    pub source: GroupSpec,
    pub target: GroupSpec,
    /// `index_map[i - 1] = sigma(i)` for `i = 1..=source.dim()`.
    pub index_map: Vec<usize>,
    /// The exponent `p` with `Delta(n) ~ n^p`.
    pub predicted_exponent: u32,
    /// Source generator whose powers realise the predicted exponent.
    pub witness: GeneratorIndex,
    /// Constituent embeddings, first applied first (composed kind only).
    pub parts: Vec<Embedding>,
    pub description: String,
}

impl Embedding {
    pub fn map_generator(&self, g: GeneratorIndex) -> GeneratorIndex {
        GeneratorIndex::raw(self.index_map[g.i() - 1], self.index_map[g.j() - 1])
    }

    /// Image of `x`, which must lie in the source group.
    pub fn map(&self, x: &GroupElement) -> Result<GroupElement> {
        if !self.source.contains(x) {
            return Err(Error::InvalidArgument(format!(
                "element of dimension {} is not in {}",
                x.dim(),
                self.source
            )));
        }
        GroupElement::from_entries(
            self.target.dim(),
            x.entries().map(|(g, v)| (self.map_generator(g), v.clone())),
        )
    }

    /// Image of a word, letter by letter.
    pub fn map_word(&self, w: &Word) -> Word {
        let mut out = Word::new();
        for l in w.letters() {
            out.push_power(self.map_generator(l.gen), l.exp.clone());
        }
        out
    }

    /// Applies the constituent embeddings one after the other.
    pub fn map_through_parts(&self, x: &GroupElement) -> Result<GroupElement> {
        if self.parts.is_empty() {
            return self.map(x);
        }
        let mut y = x.clone();
        for p in &self.parts {
            y = p.map(&y)?;
        }
        Ok(y)
    }

    /// Checks that relator images are trivial and that `pairs` random
    /// products are preserved.
    pub fn check_homomorphism(&self, pairs: usize, seed: u64) -> Result<()> {
        let fail = |what: String| {
            Err(Error::InvalidEmbedding(format!(
                "{}: {what}",
                self.description
            )))
        };
        let relators = match self.source {
            GroupSpec::Triangular(n) => triangular_relators(n)?,
            GroupSpec::Heisenberg(k) => heisenberg_relators(k)?,
        };
        for r in &relators {
            if !self.map_word(r).evaluate(self.target.dim())?.is_identity() {
                return fail("relator image is not trivial".to_string());
            }
        }
        let id = GroupElement::identity(self.source.dim())?;
        if !self.map(&id)?.is_identity() {
            return fail("identity not preserved".into());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..pairs {
            let x = random_element(self.source, 1000, &mut rng);
            let y = random_element(self.source, 1000, &mut rng);
            let lhs = self.map(&x.multiply(&y)?)?;
            let rhs = self.map(&x)?.multiply(&self.map(&y)?)?;
            if lhs != rhs {
                return fail(format!("product of {x} and {y} not preserved"));
            }
            let image = self.map(&x)?;
            if image.is_identity() != x.is_identity()
                || image.entries().count() != x.entries().count()
            {
                return fail(format!("{x} collapses"));
            }
        }
        Ok(())
    }
}

fn check_index_map(source: GroupSpec, target: GroupSpec, map: &[usize]) -> Result<()> {
    let ok = map.len() == source.dim()
        && map.windows(2).all(|w| w[0] < w[1])
        && map.first() == Some(&1)
        && map.last().is_some_and(|&m| m <= target.dim());
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidEmbedding(format!(
            "index map {map:?} from {source} to {target}"
        )))
    }
}

/// `H_k` into `H_l`: `a_i, b_i` go to `a_{K_i}, b_{K_i}` (with `K` sorted)
/// and `c` to `c`.
pub fn embed_heis_subset(k: usize, l: usize, subset: &[usize]) -> Result<Embedding> {
    let bad = |why: &str| {
        Err(Error::InvalidEmbedding(format!(
            "H{k} -> H{l} with K={subset:?}: {why}"
        )))
    };
    if k < 1 || k > l {
        return bad("need 1 <= k <= l");
    }
    let mut ks = subset.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if ks.len() != subset.len() || ks.len() != k {
        return bad("K must hold k distinct indices");
    }
    if ks.iter().any(|&i| i < 1 || i > l) {
        return bad("indices must lie in 1..=l");
    }
    let source = GroupSpec::heisenberg(k)?;
    let target = GroupSpec::heisenberg(l)?;
    let mut index_map = vec![1];
    index_map.extend(ks.iter().map(|&i| i + 1));
    index_map.push(l + 2);
    check_index_map(source, target, &index_map)?;
    Ok(Embedding {
        kind: EmbeddingKind::HeisSubset,
        source,
        target,
        index_map,
        predicted_exponent: 1,
        witness: heisenberg_a(k, 1),
        parts: vec![],
        description: format!("H{k} -> H{l} on K={ks:?}"),
    })
}

/// `H_k` as a subgroup of `T_{k+2}`.
pub fn embed_heis_in_t(k: usize) -> Result<Embedding> {
    let source = GroupSpec::heisenberg(k)?;
    let target = GroupSpec::triangular(k + 2)?;
    Ok(Embedding {
        kind: EmbeddingKind::HeisIntoT,
        source,
        target,
        index_map: (1..=k + 2).collect(),
        predicted_exponent: k as u32,
        witness: heisenberg_a(k, k),
        parts: vec![],
        description: format!("H{k} -> T{}", k + 2),
    })
}

/// `T_k` as the upper-left block of `T_l`.
pub fn embed_t_corner(k: usize, l: usize) -> Result<Embedding> {
    if k < 2 || k > l {
        return Err(Error::InvalidEmbedding(format!(
            "corner T{k} -> T{l} needs 2 <= k <= l"
        )));
    }
    Ok(Embedding {
        kind: EmbeddingKind::TCorner,
        source: GroupSpec::triangular(k)?,
        target: GroupSpec::triangular(l)?,
        index_map: (1..=k).collect(),
        predicted_exponent: 1,
        witness: GeneratorIndex::raw(1, 2),
        parts: vec![],
        description: format!("T{k} -> T{l} corner"),
    })
}

/// `T_k` into `T_l` with indices `1..=a` fixed and `a+1..=k` shifted by
/// `l - k`, so `a_{a,a+1}` lands on span `l - k + 1`.
pub fn embed_t_block(k: usize, l: usize, a: usize) -> Result<Embedding> {
    if k < 2 || k >= l || a < 1 || a >= k {
        return Err(Error::InvalidEmbedding(format!(
            "block T{k} -> T{l} with a={a} needs k < l and 1 <= a <= k-1"
        )));
    }
    let index_map: Vec<usize> = (1..=k)
        .map(|i| if i <= a { i } else { i + l - k })
        .collect();
    Ok(Embedding {
        kind: EmbeddingKind::TBlock,
        source: GroupSpec::triangular(k)?,
        target: GroupSpec::triangular(l)?,
        index_map,
        predicted_exponent: (l - k + 1) as u32,
        witness: GeneratorIndex::raw(a, a + 1),
        parts: vec![],
        description: format!("T{k} -> T{l} block a={a}"),
    })
}

/// `T_k` into `T_l` with distortion `n^r`, split at `a = 1`.
pub fn embed_composed(k: usize, l: usize, r: usize) -> Result<Embedding> {
    embed_composed_split(k, l, r, 1)
}

/// `embed_t_block(k, k + r - 1, a)` followed by `embed_t_corner(k + r - 1, l)`;
/// the corner embedding alone when `r = 1`.
pub fn embed_composed_split(k: usize, l: usize, r: usize, a: usize) -> Result<Embedding> {
    if k < 2 || k > l || r < 1 || r > l - k + 1 {
        return Err(Error::InvalidEmbedding(format!(
            "composed T{k} -> T{l} with r={r} needs 1 <= r <= l-k+1"
        )));
    }
    if r == 1 {
        return embed_t_corner(k, l);
    }
    let block = embed_t_block(k, k + r - 1, a)?;
    let corner = embed_t_corner(k + r - 1, l)?;
    let index_map = block
        .index_map
        .iter()
        .map(|&i| corner.index_map[i - 1])
        .collect();
    Ok(Embedding {
        kind: EmbeddingKind::Composed,
        source: block.source,
        target: corner.target,
        index_map,
        predicted_exponent: r as u32,
        witness: block.witness,
        description: format!("T{k} -> T{} -> T{l} (r={r}, a={a})", k + r - 1),
        parts: vec![block, corner],
    })
}

/// `j - i` of the smallest generator with a nonzero exponent in the normal
/// form of `x`: the cyclic subgroup `<x>` has distortion `n^(j-i)`.
pub fn cyclic_exponent_t(x: &GroupElement) -> Result<u32> {
    NormalForm::of(x)
        .iter()
        .map(|(g, _)| g)
        .min()
        .map(|g| g.span() as u32)
        .ok_or_else(|| Error::InvalidArgument("the identity generates a trivial subgroup".into()))
}

/// A random element of `group` with entries uniform in `[-max_abs, max_abs]`.
pub fn random_element<R: Rng>(group: GroupSpec, max_abs: u64, rng: &mut R) -> GroupElement {
    let m = max_abs.min(i64::MAX as u64) as i64;
    let entries: Vec<(GeneratorIndex, BigInt)> = group
        .standard_generators()
        .into_iter()
        .map(|g| (g, BigInt::from(rng.gen_range(-m..=m))))
        .collect();
    GroupElement::from_entries(group.dim(), entries).expect("generators fit the group")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerSpec {
    /// Size of the random pool added to the witness families.
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for SamplerSpec {
    fn default() -> Self {
        SamplerSpec {
            random_samples: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionProfile {
    /// `(n, max inner size)`; `None` when nothing was feasible at `n`.
    pub samples: Vec<(u64, Option<f64>)>,
    /// Log-log slope over the upper half of the grid.
    pub fitted_exponent: Option<f64>,
    pub description: String,
    pub predicted_exponent: u32,
}

impl DistortionProfile {
    fn new(samples: Vec<(u64, Option<f64>)>, description: String, predicted: u32) -> Self {
        let upper = &samples[samples.len() / 2..];
        let pts: Vec<(f64, f64)> = upper
            .iter()
            .filter_map(|&(n, v)| v.map(|v| (n as f64, v)))
            .collect();
        DistortionProfile {
            fitted_exponent: loglog_slope(&pts),
            samples,
            description,
            predicted_exponent: predicted,
        }
    }

    /// `# description, predicted exponent` then CSV with columns
    /// `n, max_inner_estimate, log_n, log_max`. Missing samples leave
    /// `max_inner_estimate` and `log_max` empty.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "# {}, predicted exponent {}",
            self.description, self.predicted_exponent
        )?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "max_inner_estimate", "log_n", "log_max"])?;
        for &(n, v) in &self.samples {
            let nf = n as f64;
            let (v, lv) = match v {
                Some(v) => (v.to_string(), v.ln().to_string()),
                None => (String::new(), String::new()),
            };
            w.write_record([n.to_string(), v, nf.ln().to_string(), lv])?;
        }
        w.flush()
    }
}

/// `4, 8, 16, ...` up to `n_max`.
pub fn geometric_grid(n_max: u64) -> Vec<u64> {
    std::iter::successors(Some(4u64), |&n| n.checked_mul(2))
        .take_while(|&n| n <= n_max)
        .collect()
}

const FEASIBILITY_RTOL: f64 = 1e-9;

/// Largest `t` (capped at `2^120`) with `outer(t) <= bound`, assuming `outer`
/// is nondecreasing.
fn largest_feasible(bound: f64, outer: impl Fn(u128) -> Result<f64>) -> Result<Option<u128>> {
    if outer(1)? > bound {
        return Ok(None);
    }
    let cap = 1u128 << 120;
    let mut lo = 1u128;
    let mut hi = 2u128;
    while hi < cap && outer(hi)? <= bound {
        lo = hi;
        hi *= 2;
    }
    if hi >= cap && outer(cap)? <= bound {
        return Ok(Some(cap));
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if outer(mid)? <= bound {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

fn power_of_generator(dim: usize, g: GeneratorIndex, t: u128) -> GroupElement {
    GroupElement::generator(dim, g, BigInt::from(t)).expect("generator fits")
}

/// Estimate-based distortion profile of `e` on the grid up to `n_max`.
pub fn distortion_profile(
    e: &Embedding,
    n_max: u64,
    sampler: SamplerSpec,
) -> Result<DistortionProfile> {
    if n_max < 4 {
        return Err(Error::InvalidArgument(format!(
            "n_max must be >= 4, got {n_max}"
        )));
    }
    let grid = geometric_grid(n_max);
    let sdim = e.source.dim();
    let inner_of = |x: &GroupElement| estimate(e.source, x).map(|m| m.value);
    let outer_of = |x: &GroupElement| estimate(e.target, &e.map(x)?).map(|m| m.value);

    // random pool: magnitudes spread log-uniformly up to n_max^(p+1)
    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    let top_bits = ((n_max as f64).log2() * (e.predicted_exponent + 1) as f64).min(62.0) as u32;
    let mut pool = Vec::with_capacity(sampler.random_samples);
    for _ in 0..sampler.random_samples {
        let bits = rng.gen_range(0..=top_bits);
        let x = random_element(e.source, 1u64 << bits, &mut rng);
        if !x.is_identity() {
            pool.push((inner_of(&x)?, outer_of(&x)?));
        }
    }

    let gens = e.source.standard_generators();
    let mut samples = Vec::with_capacity(grid.len());
    for &n in &grid {
        let bound = n as f64 * (1.0 + FEASIBILITY_RTOL);
        let mut best: Option<f64> = None;
        for &g in &gens {
            let outer = |t: u128| outer_of(&power_of_generator(sdim, g, t));
            if let Some(t) = largest_feasible(bound, outer)? {
                let v = inner_of(&power_of_generator(sdim, g, t))?;
                best = Some(best.map_or(v, |b: f64| b.max(v)));
            }
        }
        for &(inner, outer) in &pool {
            if outer <= bound {
                best = Some(best.map_or(inner, |b: f64| b.max(inner)));
            }
        }
        samples.push((n, best));
    }
    Ok(DistortionProfile::new(
        samples,
        format!("{} ({})", e.description, e.kind.name()),
        e.predicted_exponent,
    ))
}

/// `log E_inner / log E_outer` for the witness power `g^t` with
/// `E_outer = n` (up to rounding), `n > 1`.
pub fn witness_ratio(e: &Embedding, n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("witness ratio needs n >= 2".into()));
    }
    let sdim = e.source.dim();
    let outer = |t: u128| {
        estimate(e.target, &e.map(&power_of_generator(sdim, e.witness, t))?).map(|m| m.value)
    };
    let t = largest_feasible(n as f64 * (1.0 + FEASIBILITY_RTOL), outer)?
        .ok_or_else(|| Error::InvalidArgument(format!("no witness power with estimate <= {n}")))?;
    let x = power_of_generator(sdim, e.witness, t);
    let inner = estimate(e.source, &x)?.value;
    Ok(inner.ln() / outer(t)?.ln())
}

/// Estimate-based profile of the cyclic subgroup `<x>` of `T_dim`: the
/// largest `|t|` with `E(x^t) <= n`.
pub fn cyclic_profile(x: &GroupElement, n_max: u64) -> Result<DistortionProfile> {
    let p = cyclic_exponent_t(x)?;
    if n_max < 4 {
        return Err(Error::InvalidArgument(format!(
            "n_max must be >= 4, got {n_max}"
        )));
    }
    let group = GroupSpec::triangular(x.dim())?;
    let outer = |t: u128| estimate(group, &x.pow(BigInt::from(t))).map(|m| m.value);
    let mut samples = Vec::new();
    for n in geometric_grid(n_max) {
        let t = largest_feasible(n as f64 * (1.0 + FEASIBILITY_RTOL), outer)?;
        samples.push((n, t.map(|t| t as f64)));
    }
    Ok(DistortionProfile::new(
        samples,
        format!("<{x}> in T{}", x.dim()),
        p,
    ))
}

/// Largest number of `x^t` scanned by [`exact_cyclic_profile`].
pub const EXACT_SCAN_LIMIT: u64 = 10_000_000;

/// Profile of `<x>` with exact lengths from `table`, for every `n` in
/// `1..=radius`.
///
/// An entry of span `s` in a word of length `r` is at most `(r+1)^s` in
/// absolute value, so powers beyond that bound cannot lie in the ball and the
/// scan is exhaustive.
pub fn exact_cyclic_profile(x: &GroupElement, table: &BallTable) -> Result<DistortionProfile> {
    let p = cyclic_exponent_t(x)?;
    let radius = table.radius();
    let smallest = NormalForm::of(x)
        .iter()
        .map(|(g, _)| g)
        .min()
        .expect("nontrivial");
    let m = x.entry(smallest).abs();
    let bound = BigInt::from(radius as u64 + 1).pow(p) / m;
    let t_max = bound
        .to_u64()
        .filter(|&t| t <= EXACT_SCAN_LIMIT)
        .ok_or_else(|| Error::resource(format!("cyclic scan up to {bound} powers")))?;
    let mut best = vec![0u64; radius as usize + 1];
    let mut y = GroupElement::identity(x.dim())?;
    for t in 1..=t_max {
        y = y.multiply(x)?;
        if let Some(len) = exact_length(&y, table)? {
            let slot = &mut best[len as usize];
            *slot = (*slot).max(t);
        }
    }
    let mut running = 0u64;
    let mut samples = Vec::new();
    for n in 1..=radius {
        running = running.max(best[n as usize]);
        samples.push((n as u64, (running > 0).then_some(running as f64)));
    }
    Ok(DistortionProfile::new(
        samples,
        format!("<{x}> in T{} (exact, radius {radius})", x.dim()),
        p,
    ))
}

/// Profile of `e` with exact lengths on both sides, restricted to the source
/// ball: `Delta(n)` is the largest source length among ball elements whose
/// image has length `<= n`. Values that reach the source radius are dropped
/// as saturated.
pub fn exact_profile(
    e: &Embedding,
    source_table: &BallTable,
    target_table: &BallTable,
) -> Result<DistortionProfile> {
    if source_table.dim() != e.source.dim() || target_table.dim() != e.target.dim() {
        return Err(Error::DimensionMismatch {
            left: source_table.dim(),
            right: e.source.dim(),
        });
    }
    let radius = target_table.radius();
    let mut best = vec![0u32; radius as usize + 1];
    for (x, inner) in source_table.iter() {
        if let Some(outer) = exact_length(&e.map(x)?, target_table)? {
            let slot = &mut best[outer as usize];
            *slot = (*slot).max(inner);
        }
    }
    let mut running = 0u32;
    let mut samples = Vec::new();
    for n in 1..=radius {
        running = running.max(best[n as usize]);
        let v = (running > 0 && running < source_table.radius()).then_some(running as f64);
        samples.push((n as u64, v));
    }
    Ok(DistortionProfile::new(
        samples,
        format!("{} (exact, radius {radius})", e.description),
        e.predicted_exponent,
    ))
}

/// `true` when `E_H(x) <= slack * E_T(image x)^k` for the Heisenberg
/// inclusion.
pub fn heis_upper_bound_holds(e: &Embedding, x: &GroupElement, slack: f64) -> Result<bool> {
    let inner = estimate(e.source, x)?.value;
    let outer = estimate(e.target, &e.map(x)?)?.value;
    Ok(inner <= slack * outer.powi(e.predicted_exponent as i32) + 1e-9 * (1.0 + inner))
}
