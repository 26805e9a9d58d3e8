//! Metric estimates for `T_n` and `H_k`, and their calibration against exact
//! word lengths.
//!
//! For `T_n` the estimate of `prod a_ij^{m_ij}` is `sum |m_ij|^(1/(j-i))`.
//! For `H_k` it is `sum |n_i| + sum |m_j| + sqrt|p|`. Both agree with the
//! word metric up to constants `C, D` in the sense
//! `E(x)/C - D <= |x| <= C E(x) + D`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, Signed, ToPrimitive, Zero};

use crate::exact_metric::{bfs_ball, BallTable};
use crate::group::{
    matrix_to_heisenberg, GeneratorIndex, GroupElement, GroupSpec, HeisenbergForm, NormalForm,
};
use crate::{Error, Result};

/// Exact `floor(m^(1/k))`.
pub fn integer_kth_root(m: &BigUint, k: u32) -> BigUint {
    assert!(k >= 1, "root index must be positive");
    m.nth_root(k)
}

/// `|m|^(1/k)` as a double. Perfect powers come out exact.
pub fn root_f64(m: &BigInt, k: u32) -> f64 {
    let mag = m.magnitude();
    if mag.is_zero() {
        return 0.0;
    }
    let r = integer_kth_root(mag, k);
    if Pow::pow(&r, k) == *mag {
        return r.to_f64().unwrap_or(f64::INFINITY);
    }
    match mag.to_f64() {
        Some(f) if f.is_finite() => f.powf(1.0 / k as f64),
        _ => {
            // ln via the top 64 bits
            let bits = mag.bits();
            let shift = bits.saturating_sub(64);
            let top = (mag >> shift).to_f64().expect("fits in 64 bits");
            ((top.ln() + shift as f64 * std::f64::consts::LN_2) / k as f64).exp()
        }
    }
}

/// A contribution to an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EstimateTerm {
    /// `|m_ij|^(1/(j-i))` in `T_n`.
    Entry(GeneratorIndex),
    /// `|n_i|` in `H_k`.
    HeisA(usize),
    /// `|m_i|` in `H_k`.
    HeisB(usize),
    /// `sqrt|p|` in `H_k`.
    HeisC,
}

impl fmt::Display for EstimateTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimateTerm::Entry(g) => write!(f, "{g}"),
            EstimateTerm::HeisA(i) => write!(f, "a_{i}"),
            EstimateTerm::HeisB(i) => write!(f, "b_{i}"),
            EstimateTerm::HeisC => write!(f, "c"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricEstimate {
    pub value: f64,
    /// Nonzero contributions only.
    pub terms: BTreeMap<EstimateTerm, f64>,
}

impl MetricEstimate {
    fn from_terms(terms: BTreeMap<EstimateTerm, f64>) -> Self {
        MetricEstimate {
            value: terms.values().fold(0.0, |a, b| a + b),
            terms,
        }
    }
}

/// Estimate for `T_n`: `sum |m_ij|^(1/(j-i))`.
pub fn estimate_t(nf: &NormalForm) -> MetricEstimate {
    MetricEstimate::from_terms(
        nf.iter()
            .map(|(g, m)| (EstimateTerm::Entry(g), root_f64(m, g.span() as u32)))
            .collect(),
    )
}

/// `sum floor(|m_ij|^(1/(j-i)))`, an exact integer within the number of
/// nonzero entries of [`estimate_t`].
pub fn estimate_t_floor(nf: &NormalForm) -> BigUint {
    nf.iter()
        .map(|(g, m)| integer_kth_root(m.magnitude(), g.span() as u32))
        .sum()
}

/// Estimate for `H_k`: `sum |n_i| + sum |m_j| + sqrt|p|`.
pub fn estimate_h(h: &HeisenbergForm) -> MetricEstimate {
    let mut terms = BTreeMap::new();
    let as_f64 = |v: &BigInt| v.abs().to_f64().unwrap_or(f64::INFINITY);
    for (i, n) in h.a_exps.iter().enumerate() {
        if !n.is_zero() {
            terms.insert(EstimateTerm::HeisA(i + 1), as_f64(n));
        }
    }
    for (i, m) in h.b_exps.iter().enumerate() {
        if !m.is_zero() {
            terms.insert(EstimateTerm::HeisB(i + 1), as_f64(m));
        }
    }
    if !h.c_exp.is_zero() {
        terms.insert(EstimateTerm::HeisC, root_f64(&h.c_exp, 2));
    }
    MetricEstimate::from_terms(terms)
}

/// The estimate appropriate to `group`, evaluated on `x`.
pub fn estimate(group: GroupSpec, x: &GroupElement) -> Result<MetricEstimate> {
    if x.dim() != group.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: group.dim(),
        });
    }
    match group {
        GroupSpec::Triangular(_) => Ok(estimate_t(&NormalForm::of(x))),
        GroupSpec::Heisenberg(k) => Ok(estimate_h(&matrix_to_heisenberg(x, k)?)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiMetricConstants {
    pub c: f64,
    pub d: f64,
}

/// Relative slack when comparing floating estimates with integer lengths.
pub const SANDWICH_RTOL: f64 = 1e-9;

impl QuasiMetricConstants {
    /// `E/C - D <= len <= C E + D`, up to [`SANDWICH_RTOL`].
    pub fn sandwich_holds(&self, estimate: f64, length: f64) -> bool {
        let slack = SANDWICH_RTOL * (1.0 + estimate.abs() + length.abs());
        estimate / self.c - self.d <= length + slack && length <= self.c * estimate + self.d + slack
    }
}

/// Minimal `C` for one value of `D`, with the elements that force it.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationRow {
    pub d: u32,
    pub c: f64,
    /// Element maximising `E / (len + D)` (forces the lower bound).
    pub lower_witness: Option<(GroupElement, f64, u32)>,
    /// Element maximising `(len - D) / E` (forces the upper bound).
    pub upper_witness: Option<(GroupElement, f64, u32)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub group: GroupSpec,
    pub radius: u32,
    pub ball_size: usize,
    pub rows: Vec<CalibrationRow>,
    /// Row with the smallest `C` (ties go to the smaller `D`).
    pub best: QuasiMetricConstants,
}

/// Values of `D` tried by [`calibrate`].
pub const D_GRID: std::ops::RangeInclusive<u32> = 0..=8;

/// Builds the exact ball of `radius` for `gens` and finds, for each `D` in
/// [`D_GRID`], the least `C >= 1` such that every ball element satisfies the
/// sandwich.
pub fn calibrate(
    group: GroupSpec,
    gens: &[GeneratorIndex],
    radius: u32,
    budget: usize,
) -> Result<Calibration> {
    if let Some(g) = gens.iter().find(|g| !group.contains_generator(**g)) {
        return Err(Error::InvalidArgument(format!(
            "{g} is not a generator of {group}"
        )));
    }
    let table = bfs_ball(group.dim(), gens, radius, budget)?;
    calibrate_on_table(group, &table)
}

pub fn calibrate_on_table(group: GroupSpec, table: &BallTable) -> Result<Calibration> {
    let mut points = Vec::with_capacity(table.len());
    for (x, len) in table.iter() {
        points.push((estimate(group, x)?.value, len));
    }

    let mut rows = Vec::new();
    for d in D_GRID {
        let df = d as f64;
        let mut c = 1.0f64;
        let mut lower: Option<(usize, f64)> = None;
        let mut upper: Option<(usize, f64)> = None;
        for (idx, &(e, len)) in points.iter().enumerate() {
            let l = len as f64;
            if l + df > 0.0 {
                let need = e / (l + df);
                if lower.is_none_or(|(_, best)| need > best) {
                    lower = Some((idx, need));
                }
                c = c.max(need);
            } else if e > 0.0 {
                return Err(Error::InvalidArgument(
                    "nonidentity element of length 0 in ball".into(),
                ));
            }
            if l > df {
                if e <= 0.0 {
                    return Err(Error::InvalidArgument(
                        "element with zero estimate outside the identity".into(),
                    ));
                }
                let need = (l - df) / e;
                if upper.is_none_or(|(_, best)| need > best) {
                    upper = Some((idx, need));
                }
                c = c.max(need);
            }
        }
        let witness = |w: Option<(usize, f64)>| {
            w.map(|(idx, _)| {
                let (x, len) = table.get(idx);
                (x.clone(), points[idx].0, len)
            })
        };
        rows.push(CalibrationRow {
            d,
            c,
            lower_witness: witness(lower),
            upper_witness: witness(upper),
        });
    }
    let best = rows
        .iter()
        .min_by(|a, b| a.c.total_cmp(&b.c).then(a.d.cmp(&b.d)))
        .map(|r| QuasiMetricConstants {
            c: r.c,
            d: r.d as f64,
        })
        .expect("D grid is nonempty");
    Ok(Calibration {
        group,
        radius: table.radius(),
        ball_size: table.len(),
        rows,
        best,
    })
}

/// `true` when `x` has estimate 0 exactly when it is the identity.
pub fn estimate_is_definite(group: GroupSpec, x: &GroupElement) -> Result<bool> {
    let e = estimate(group, x)?.value;
    Ok((e == 0.0) == x.is_identity())
}
