//! Exact word lengths by breadth-first search in the Cayley graph.
//!
//! A [`BallTable`] holds every element within a radius of the identity for a
//! chosen generating set (each generator contributes itself and its inverse as
//! edges), keyed by [`GroupElement::canonical_encoding`].

use std::collections::HashMap;
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_traits::One;

use crate::fit::loglog_slope;
use crate::group::{GeneratorIndex, GroupElement, Word};
use crate::{Error, Result};

/// Default cap on the number of stored elements.
pub const DEFAULT_BUDGET: usize = 50_000_000;

/// Magic first line of the ball export format.
pub const BALL_MAGIC: &str = "NILBALL1";

#[derive(Debug, Clone)]
pub struct BallTable {
    dim: usize,
    gens: Vec<GeneratorIndex>,
    radius: u32,
    /// Elements in BFS order: nondecreasing length.
    elements: Vec<GroupElement>,
    lengths: Vec<u32>,
    index: HashMap<Vec<u8>, usize>,
    sphere_sizes: Vec<u64>,
}

impl BallTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[GeneratorIndex] {
        &self.gens
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Number of elements at each exact length `0..=radius`.
    pub fn sphere_sizes(&self) -> &[u64] {
        &self.sphere_sizes
    }

    pub fn get(&self, idx: usize) -> (&GroupElement, u32) {
        (&self.elements[idx], self.lengths[idx])
    }

    /// Elements with their exact lengths, in nondecreasing length.
    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, u32)> + '_ {
        self.elements.iter().zip(self.lengths.iter().copied())
    }

    /// `(canonical encoding, exact length)` pairs.
    pub fn lengths(&self) -> impl Iterator<Item = (Vec<u8>, u32)> + '_ {
        self.iter().map(|(x, l)| (x.canonical_encoding(), l))
    }

    fn length_of(&self, x: &GroupElement) -> Option<u32> {
        self.index
            .get(&x.canonical_encoding())
            .map(|&idx| self.lengths[idx])
    }

    fn insert(&mut self, x: GroupElement, len: u32) {
        let key = x.canonical_encoding();
        self.index.insert(key, self.elements.len());
        self.elements.push(x);
        self.lengths.push(len);
        if self.sphere_sizes.len() <= len as usize {
            self.sphere_sizes.resize(len as usize + 1, 0);
        }
        self.sphere_sizes[len as usize] += 1;
    }

    /// Signed edges in a fixed order: each generator, `+1` before `-1`.
    fn edges(&self) -> Vec<(GeneratorIndex, BigInt)> {
        edge_list(&self.gens)
    }
}

fn edge_list(gens: &[GeneratorIndex]) -> Vec<(GeneratorIndex, BigInt)> {
    gens.iter()
        .flat_map(|g| [(*g, BigInt::one()), (*g, -BigInt::one())])
        .collect()
}

fn check_gens(dim: usize, gens: &[GeneratorIndex]) -> Result<()> {
    if gens.is_empty() {
        return Err(Error::InvalidArgument("empty generating set".into()));
    }
    for (k, g) in gens.iter().enumerate() {
        g.check(dim)?;
        if gens[..k].contains(g) {
            return Err(Error::InvalidArgument(format!(
                "generator {g} listed twice"
            )));
        }
    }
    Ok(())
}

/// The complete ball of `radius` around the identity of `T_dim` for `gens`.
///
/// Fails with [`Error::ResourceLimit`] once more than `budget` elements would
/// be stored; `partial_radius` is then the largest radius that was completed.
pub fn bfs_ball(
    dim: usize,
    gens: &[GeneratorIndex],
    radius: u32,
    budget: usize,
) -> Result<BallTable> {
    let id = GroupElement::identity(dim)?;
    check_gens(dim, gens)?;
    let mut table = BallTable {
        dim,
        gens: gens.to_vec(),
        radius,
        elements: Vec::new(),
        lengths: Vec::new(),
        index: HashMap::new(),
        sphere_sizes: Vec::new(),
    };
    if budget == 0 {
        return Err(Error::ResourceLimit {
            what: "BFS budget of 0 elements".into(),
            partial_radius: None,
        });
    }
    table.insert(id, 0);
    let edges = table.edges();
    let mut frontier = 0..1;
    for r in 1..=radius {
        let start = table.len();
        for idx in frontier.clone() {
            for (g, e) in &edges {
                let mut y = table.elements[idx].clone();
                y.mul_generator_right(*g, e);
                let key = y.canonical_encoding();
                if table.index.contains_key(&key) {
                    continue;
                }
                if table.len() >= budget {
                    return Err(Error::ResourceLimit {
                        what: format!("BFS ball exceeded {budget} elements at radius {r}"),
                        partial_radius: Some(r - 1),
                    });
                }
                table.index.insert(key, table.elements.len());
                table.elements.push(y);
                table.lengths.push(r);
            }
        }
        let end = table.len();
        table.sphere_sizes.push((end - start) as u64);
        frontier = start..end;
    }
    if table.sphere_sizes.len() < radius as usize + 1 {
        table.sphere_sizes.resize(radius as usize + 1, 0);
    }
    Ok(table)
}

/// Exact word length of `x`, or `None` when it lies beyond the table's radius.
pub fn exact_length(x: &GroupElement, table: &BallTable) -> Result<Option<u32>> {
    if x.dim() != table.dim {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: table.dim,
        });
    }
    Ok(table.length_of(x))
}

/// A geodesic word for `x`, found by walking back through neighbours one step
/// closer to the identity. `None` when `x` is beyond the radius.
pub fn witness_word(x: &GroupElement, table: &BallTable) -> Result<Option<Word>> {
    let Some(mut len) = exact_length(x, table)? else {
        return Ok(None);
    };
    let edges = table.edges();
    let mut cur = x.clone();
    let mut rev = Vec::with_capacity(len as usize);
    while len > 0 {
        let step = edges.iter().find_map(|(g, e)| {
            let mut p = cur.clone();
            p.mul_generator_right(*g, &-e);
            (table.length_of(&p) == Some(len - 1)).then_some((p, *g, e.clone()))
        });
        let (p, g, e) = step.ok_or_else(|| {
            Error::InvalidArgument(format!("ball table is not closed: no parent for {cur}"))
        })?;
        rev.push((g, e));
        cur = p;
        len -= 1;
    }
    let mut w = Word::new();
    for (g, e) in rev.into_iter().rev() {
        w.push_power(g, e);
    }
    Ok(Some(w))
}

/// `(radius, number of elements at exactly that length)`.
pub fn sphere_growth(table: &BallTable) -> Vec<(u32, u64)> {
    table
        .sphere_sizes
        .iter()
        .enumerate()
        .map(|(r, &c)| (r as u32, c))
        .collect()
}

/// Log-log slope of the cumulative ball size against the radius, over radii
/// `from..=radius`.
pub fn ball_growth_slope(table: &BallTable, from: u32) -> Option<f64> {
    let mut total = 0u64;
    let mut pts = Vec::new();
    for (r, c) in sphere_growth(table) {
        total += c;
        if r >= from.max(1) {
            pts.push((r as f64, total as f64));
        }
    }
    loglog_slope(&pts)
}

/// Writes the line-oriented `NILBALL1` format:
///
/// ```text
/// NILBALL1
/// dim <n>
/// gens <i>,<j> <i>,<j> ...
/// radius <r>
/// elements <count>
/// <hex canonical encoding> <length>     (one per element, BFS order)
/// ```
pub fn write_ball<W: Write>(table: &BallTable, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{BALL_MAGIC}")?;
    writeln!(out, "dim {}", table.dim)?;
    let gens: Vec<String> = table
        .gens
        .iter()
        .map(|g| format!("{},{}", g.i(), g.j()))
        .collect();
    writeln!(out, "gens {}", gens.join(" "))?;
    writeln!(out, "radius {}", table.radius)?;
    writeln!(out, "elements {}", table.len())?;
    for (x, len) in table.iter() {
        let hex: String = x
            .canonical_encoding()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        writeln!(out, "{hex} {len}")?;
    }
    Ok(())
}

fn header_value<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str> {
    let line = line.ok_or_else(|| Error::Parse(format!("missing `{key}` line")))?;
    line.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| Error::Parse(format!("expected `{key} ...`, got `{line}`")))
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what}: `{s}`")))
}

/// Reads a table written by [`write_ball`].
pub fn read_ball<R: BufRead>(input: R) -> Result<BallTable> {
    let lines: Vec<String> = input
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::Parse(e.to_string()))?;
    let mut it = lines.iter().map(String::as_str);
    if it.next() != Some(BALL_MAGIC) {
        return Err(Error::Parse(format!("missing {BALL_MAGIC} header")));
    }
    let dim: usize = parse_num(header_value(it.next(), "dim")?, "dimension")?;
    let mut gens = Vec::new();
    for tok in header_value(it.next(), "gens")?.split_whitespace() {
        let (i, j) = tok
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad generator `{tok}`")))?;
        gens.push(GeneratorIndex::new(
            parse_num(i, "generator row")?,
            parse_num(j, "generator column")?,
            dim,
        )?);
    }
    check_gens(dim, &gens)?;
    let radius: u32 = parse_num(header_value(it.next(), "radius")?, "radius")?;
    let count: usize = parse_num(header_value(it.next(), "elements")?, "element count")?;

    let mut table = BallTable {
        dim,
        gens,
        radius,
        elements: Vec::with_capacity(count),
        lengths: Vec::with_capacity(count),
        index: HashMap::with_capacity(count),
        sphere_sizes: vec![0; radius as usize + 1],
    };
    for line in it.by_ref().take(count) {
        let (hex, len) = line
            .split_once(' ')
            .ok_or_else(|| Error::Parse(format!("bad record `{line}`")))?;
        if hex.len() % 2 != 0 {
            return Err(Error::Parse(format!("odd-length hex `{hex}`")));
        }
        let bytes = (0..hex.len())
            .step_by(2)
            .map(|k| u8::from_str_radix(&hex[k..k + 2], 16))
            .collect::<std::result::Result<Vec<u8>, _>>()
            .map_err(|_| Error::Parse(format!("bad hex `{hex}`")))?;
        let x = GroupElement::from_canonical_encoding(&bytes)?;
        if x.dim() != dim {
            return Err(Error::Parse(format!(
                "record of dimension {} in a dim {dim} table",
                x.dim()
            )));
        }
        let len: u32 = parse_num(len, "length")?;
        if len > radius {
            return Err(Error::Parse(format!("length {len} beyond radius {radius}")));
        }
        table.insert(x, len);
    }
    if table.len() != count {
        return Err(Error::Parse(format!(
            "expected {count} records, found {}",
            table.len()
        )));
    }
    if it.any(|l| !l.trim().is_empty()) {
        return Err(Error::Parse("trailing data after records".into()));
    }
    Ok(table)
}
