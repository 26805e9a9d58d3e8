use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use super::GeneratorIndex;
use crate::{Error, Result};

/// A unipotent upper-triangular integer matrix.
///
/// Only the strictly upper-triangular part is stored, densely and row-major;
/// the diagonal is implicitly 1 and everything below it is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    dim: usize,
    upper: Vec<BigInt>,
}

#[inline]
fn offset(dim: usize, i: usize, j: usize) -> usize {
    (i - 1) * dim - (i - 1) * i / 2 + (j - i - 1)
}

impl GroupElement {
    pub fn identity(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(GroupElement {
            dim,
            upper: vec![BigInt::zero(); dim * (dim - 1) / 2],
        })
    }

    /// The identity plus `e` at position `g`, i.e. `a_g^e`.
    pub fn generator(dim: usize, g: GeneratorIndex, e: impl Into<BigInt>) -> Result<Self> {
        let mut x = Self::identity(dim)?;
        g.check(dim)?;
        x.set(g, e.into());
        Ok(x)
    }

    /// Builds an element from `(generator, value)` pairs. Repeated positions
    /// are rejected.
    pub fn from_entries<I, V>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GeneratorIndex, V)>,
        V: Into<BigInt>,
    {
        let mut x = Self::identity(dim)?;
        let mut seen = vec![false; x.upper.len()];
        for (g, v) in entries {
            g.check(dim)?;
            let k = offset(dim, g.i(), g.j());
            if seen[k] {
                return Err(Error::InvalidArgument(format!("duplicate entry {g}")));
            }
            seen[k] = true;
            x.upper[k] = v.into();
        }
        Ok(x)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, g: GeneratorIndex) -> &BigInt {
        &self.upper[offset(self.dim, g.i(), g.j())]
    }

    /// Entry at 1-based `(i, j)` of the full matrix, diagonal and lower part
    /// included.
    pub fn get(&self, i: usize, j: usize) -> BigInt {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[offset(self.dim, i, j)].clone(),
            std::cmp::Ordering::Equal => BigInt::one(),
            std::cmp::Ordering::Greater => BigInt::zero(),
        }
    }

    pub(crate) fn set(&mut self, g: GeneratorIndex, v: BigInt) {
        let k = offset(self.dim, g.i(), g.j());
        self.upper[k] = v;
    }

    /// Nonzero off-diagonal entries, greatest generator first.
    pub fn entries(&self) -> impl Iterator<Item = (GeneratorIndex, &BigInt)> + '_ {
        GeneratorIndex::all_decreasing(self.dim)
            .into_iter()
            .map(move |g| (g, self.entry(g)))
            .filter(|(_, v)| !v.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.upper.iter().all(Zero::is_zero)
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::identity(n)?;
        for i in 1..n {
            for j in i + 1..=n {
                let mut acc = &self.upper[offset(n, i, j)] + &other.upper[offset(n, i, j)];
                for k in i + 1..j {
                    let a = &self.upper[offset(n, i, k)];
                    let b = &other.upper[offset(n, k, j)];
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                out.upper[offset(n, i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// Exact inverse by back-substitution on `x * z = I`, one diagonal at a
    /// time.
    pub fn inverse(&self) -> GroupElement {
        let n = self.dim;
        let mut z = GroupElement {
            dim: n,
            upper: vec![BigInt::zero(); self.upper.len()],
        };
        for span in 1..n {
            for i in 1..=n - span {
                let j = i + span;
                let mut acc = -&self.upper[offset(n, i, j)];
                for k in i + 1..j {
                    let a = &self.upper[offset(n, i, k)];
                    let b = &z.upper[offset(n, k, j)];
                    if !a.is_zero() && !b.is_zero() {
                        acc -= a * b;
                    }
                }
                z.upper[offset(n, i, j)] = acc;
            }
        }
        z
    }

    /// `self * a_g^e` in place: column `g.j` gains `e` times column `g.i`.
    pub fn mul_generator_right(&mut self, g: GeneratorIndex, e: &BigInt) {
        let n = self.dim;
        let (a, b) = (g.i(), g.j());
        for r in 1..a {
            let src = &self.upper[offset(n, r, a)];
            if !src.is_zero() {
                let delta = src * e;
                self.upper[offset(n, r, b)] += delta;
            }
        }
        self.upper[offset(n, a, b)] += e;
    }

    /// `a_g^e * self` in place: row `g.i` gains `e` times row `g.j`.
    pub fn mul_generator_left(&mut self, g: GeneratorIndex, e: &BigInt) {
        let n = self.dim;
        let (a, b) = (g.i(), g.j());
        for c in b + 1..=n {
            let src = &self.upper[offset(n, b, c)];
            if !src.is_zero() {
                let delta = src * e;
                self.upper[offset(n, a, c)] += delta;
            }
        }
        self.upper[offset(n, a, b)] += e;
    }

    pub fn commutator(&self, other: &GroupElement) -> Result<GroupElement> {
        self.inverse()
            .multiply(&other.inverse())?
            .multiply(self)?
            .multiply(other)
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, e: impl Into<BigInt>) -> GroupElement {
        let e: BigInt = e.into();
        let mut base = if e.sign() == Sign::Minus {
            self.inverse()
        } else {
            self.clone()
        };
        let mut acc = GroupElement {
            dim: self.dim,
            upper: vec![BigInt::zero(); self.upper.len()],
        };
        let bits = e.magnitude().bits();
        for bit in 0..bits {
            if e.magnitude().bit(bit) {
                acc = acc.multiply(&base).expect("same dimension");
            }
            if bit + 1 < bits {
                base = base.multiply(&base).expect("same dimension");
            }
        }
        acc
    }

    /// Injective byte encoding used as a hash key: the dimension, then every
    /// off-diagonal entry in normal-form order (greatest generator first), each
    /// as a zigzag LEB128 varint.
    pub fn canonical_encoding(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(1 + self.upper.len());
        write_varint_u64(&mut out, self.dim as u64);
        for g in GeneratorIndex::all_decreasing(self.dim) {
            write_zigzag(&mut out, self.entry(g));
        }
        out
    }

    pub fn from_canonical_encoding(bytes: &[u8]) -> Result<Self> {
        let mut pos = 0;
        let dim = read_varint(bytes, &mut pos)?
            .to_usize()
            .ok_or_else(|| Error::Parse("dimension out of range".into()))?;
        if dim > 4096 {
            return Err(Error::Parse(format!("implausible dimension {dim}")));
        }
        let mut x = Self::identity(dim).map_err(|e| Error::Parse(e.to_string()))?;
        for g in GeneratorIndex::all_decreasing(dim) {
            let z = read_varint(bytes, &mut pos)?;
            let v = if (&z & BigUint::one()).is_zero() {
                BigInt::from(z >> 1u32)
            } else {
                -BigInt::from(z >> 1u32) - 1
            };
            x.set(g, v);
        }
        if pos != bytes.len() {
            return Err(Error::Parse("trailing bytes in element encoding".into()));
        }
        Ok(x)
    }
}

fn write_varint_u64(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn write_zigzag(out: &mut Vec<u8>, v: &BigInt) {
    if let Some(small) = v.to_i64() {
        let z = ((small << 1) ^ (small >> 63)) as u64;
        write_varint_u64(out, z);
        return;
    }
    let mag = v.magnitude();
    let mut z: BigUint = if v.sign() == Sign::Minus {
        (mag << 1u32) - 1u32
    } else {
        mag << 1u32
    };
    let mask = BigUint::from(0x7fu32);
    loop {
        let byte = (&z & &mask).to_u8().expect("masked to 7 bits");
        z >>= 7u32;
        if z.is_zero() {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn read_varint(bytes: &[u8], pos: &mut usize) -> Result<BigUint> {
    let mut acc = BigUint::zero();
    let mut shift = 0u64;
    loop {
        let byte = *bytes
            .get(*pos)
            .ok_or_else(|| Error::Parse("truncated element encoding".into()))?;
        *pos += 1;
        acc |= BigUint::from(byte & 0x7f) << shift;
        shift += 7;
        if byte & 0x80 == 0 {
            return Ok(acc);
        }
    }
}

impl fmt::Display for GroupElement {
    /// Writes the element as `{dim; (i,j)=v, ...}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{dim {}", self.dim)?;
        for (g, v) in self.entries() {
            write!(f, "; ({},{})={}", g.i(), g.j(), v)?;
        }
        write!(f, "}}")
    }
}
