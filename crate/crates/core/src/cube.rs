//! Bit-level model of the n-dimensional hypercube.
//!
//! A vertex is an `n`-bit label `x_1 x_2 … x_n`. Coordinates are 1-indexed
//! from the left, so coordinate `i` lives at bit position `n - i` of the
//! integer label. Subcubes are written as patterns over `{0, 1, *}` with the
//! same left-to-right convention, e.g. `0*1` is the edge `{001, 011}` of Q_3.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{arg_err, Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: u8 = 30;

/// Mask with the low `n` bits set.
#[inline]
pub(crate) fn full_mask(n: u8) -> u32 {
    if n == 0 {
        0
    } else {
        u32::MAX >> (32 - n as u32)
    }
}

/// Bit of coordinate `i` (1-based, `x_1` most significant) in an `n`-bit label.
#[inline]
pub(crate) fn coord_bit(n: u8, i: u8) -> u32 {
    1 << (n - i)
}

/// Inverse of [`coord_bit`] for a single-bit mask.
#[inline]
pub(crate) fn bit_coord(n: u8, bit: u32) -> u8 {
    n - bit.trailing_zeros() as u8
}

/// Iterates the set bits of `mask` in ascending coordinate order
/// (most significant bit first).
pub(crate) fn coord_bits(mask: u32) -> impl Iterator<Item = u32> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let top = 1u32 << (31 - rest.leading_zeros());
        rest &= !top;
        Some(top)
    })
}

fn check_dim(n: u8) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(arg_err!("dimension {n} outside 1..={MAX_DIM}"));
    }
    Ok(())
}

fn check_coord(n: u8, i: u8) -> Result<()> {
    if i == 0 || i > n {
        return Err(arg_err!("coordinate {i} outside 1..={n}"));
    }
    Ok(())
}

/// A vertex of Q_n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Vertex {
    bits: u32,
    dim: u8,
}

impl Vertex {
    pub fn new(bits: u32, dim: u8) -> Result<Self> {
        check_dim(dim)?;
        if bits & !full_mask(dim) != 0 {
            return Err(arg_err!("label {bits:#b} has bits beyond width {dim}"));
        }
        Ok(Vertex { bits, dim })
    }

    /// Construct without range checks; callers guarantee the invariants.
    #[inline]
    pub(crate) fn from_raw(bits: u32, dim: u8) -> Self {
        debug_assert!(bits & !full_mask(dim) == 0);
        Vertex { bits, dim }
    }

    pub fn zero(dim: u8) -> Result<Self> {
        Vertex::new(0, dim)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn dim(self) -> u8 {
        self.dim
    }

    /// Value of coordinate `i` (1-based).
    pub fn coordinate(self, i: u8) -> Result<bool> {
        check_coord(self.dim, i)?;
        Ok(self.bits & coord_bit(self.dim, i) != 0)
    }

    /// The dimension-`i` neighbor `(v)^i`.
    pub fn neighbor(self, i: u8) -> Result<Vertex> {
        check_coord(self.dim, i)?;
        Ok(Vertex::from_raw(self.bits ^ coord_bit(self.dim, i), self.dim))
    }

    /// The bitwise complement, i.e. the unique symmetric partner.
    pub fn complement(self) -> Vertex {
        Vertex::from_raw(!self.bits & full_mask(self.dim), self.dim)
    }

    /// All `n` neighbors in ascending coordinate order.
    pub fn neighbors(self) -> impl Iterator<Item = Vertex> {
        let n = self.dim;
        (1..=n).map(move |i| Vertex::from_raw(self.bits ^ coord_bit(n, i), n))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.bits, width = self.dim as usize)
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cube: Subcube = s.parse()?;
        if cube.dim() != 0 {
            return Err(Error::Parse(format!("vertex `{s}` contains free coordinates")));
        }
        Ok(Vertex::from_raw(cube.base, cube.ambient))
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `(v)^i`.
pub fn neighbor(v: Vertex, i: u8) -> Result<Vertex> {
    v.neighbor(i)
}

/// Hamming distance, which is also the fault-free shortest-path distance.
pub fn hamming(u: Vertex, v: Vertex) -> Result<u32> {
    if u.dim != v.dim {
        return Err(arg_err!("dimension mismatch: {} vs {}", u.dim, v.dim));
    }
    Ok((u.bits ^ v.bits).count_ones())
}

/// True iff `u` and `v` differ in every coordinate.
pub fn is_symmetric_pair(u: Vertex, v: Vertex) -> Result<bool> {
    Ok(hamming(u, v)? == u.dim as u32)
}

/// `N(u) ∩ N(v)` in ascending label order.
///
/// Two vertices share neighbors only at Hamming distance 2, and then share
/// exactly the two vertices obtained by flipping one of the two differing
/// coordinates of `u`.
pub fn common_neighbors(u: Vertex, v: Vertex) -> Result<Vec<Vertex>> {
    if u == v {
        return Err(arg_err!("common neighbors of a vertex with itself"));
    }
    let diff = u.bits ^ v.bits;
    if hamming(u, v)? != 2 {
        return Ok(Vec::new());
    }
    let low = diff & diff.wrapping_neg();
    let high = diff & !low;
    let mut out = vec![
        Vertex::from_raw(u.bits ^ low, u.dim),
        Vertex::from_raw(u.bits ^ high, u.dim),
    ];
    out.sort();
    Ok(out)
}

/// An induced subcube: coordinates in `free` range over `{0,1}`, all others
/// are fixed to the corresponding bits of `base`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Subcube {
    free: u32,
    base: u32,
    ambient: u8,
}

impl Subcube {
    pub fn new(free: u32, base: u32, ambient: u8) -> Result<Self> {
        check_dim(ambient)?;
        let mask = full_mask(ambient);
        if free & !mask != 0 || base & !mask != 0 {
            return Err(arg_err!("subcube masks exceed width {ambient}"));
        }
        if free & base != 0 {
            return Err(arg_err!("subcube base has bits set on free coordinates"));
        }
        Ok(Subcube { free, base, ambient })
    }

    #[inline]
    pub(crate) fn from_raw(free: u32, base: u32, ambient: u8) -> Self {
        debug_assert!(free & base == 0);
        Subcube { free, base, ambient }
    }

    /// The whole of Q_n.
    pub fn whole(n: u8) -> Result<Self> {
        Subcube::new(full_mask(n), 0, n)
    }

    /// The Q_0 subcube `{v}`.
    pub fn point(v: Vertex) -> Self {
        Subcube::from_raw(0, v.bits, v.dim)
    }

    #[inline]
    pub fn free_mask(&self) -> u32 {
        self.free
    }

    #[inline]
    pub fn base(&self) -> u32 {
        self.base
    }

    #[inline]
    pub fn ambient(&self) -> u8 {
        self.ambient
    }

    /// Dimension `k` of the subcube.
    #[inline]
    pub fn dim(&self) -> u8 {
        self.free.count_ones() as u8
    }

    #[inline]
    pub fn len(&self) -> u64 {
        1u64 << self.dim()
    }

    /// A subcube always holds at least one vertex.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Whether coordinate `i` (1-based) is free.
    pub fn is_free(&self, i: u8) -> Result<bool> {
        check_coord(self.ambient, i)?;
        Ok(self.free & coord_bit(self.ambient, i) != 0)
    }

    /// Free coordinates in ascending order (1-based).
    pub fn free_coordinates(&self) -> Vec<u8> {
        coord_bits(self.free).map(|b| bit_coord(self.ambient, b)).collect()
    }

    #[inline]
    pub(crate) fn contains_bits(&self, bits: u32) -> bool {
        (bits ^ self.base) & !self.free == 0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.dim == self.ambient && self.contains_bits(v.bits)
    }

    /// Whether the two subcubes share a vertex.
    #[inline]
    pub fn intersects(&self, other: &Subcube) -> bool {
        (self.base ^ other.base) & !self.free & !other.free == 0
    }

    pub fn intersection(&self, other: &Subcube) -> Option<Subcube> {
        if !self.intersects(other) {
            return None;
        }
        let free = self.free & other.free;
        let base = (self.base | other.base) & !free;
        Some(Subcube::from_raw(free, base, self.ambient))
    }

    pub fn is_subset_of(&self, other: &Subcube) -> bool {
        self.free & !other.free == 0 && other.contains_bits(self.base)
    }

    /// The half of this subcube with free bit `bit` fixed to `value`.
    pub(crate) fn fix_bit(&self, bit: u32, value: bool) -> Subcube {
        debug_assert!(self.free & bit != 0);
        let base = if value { self.base | bit } else { self.base };
        Subcube::from_raw(self.free & !bit, base, self.ambient)
    }

    /// Position of `bits` among this subcube's vertices, obtained by
    /// compressing the free coordinates.
    pub(crate) fn local_index(&self, bits: u32) -> usize {
        let mut idx = 0usize;
        let mut out = 1usize;
        let mut rest = self.free;
        while rest != 0 {
            let low = rest & rest.wrapping_neg();
            if bits & low != 0 {
                idx |= out;
            }
            out <<= 1;
            rest &= !low;
        }
        idx
    }

    /// Inverse of [`Subcube::local_index`].
    pub(crate) fn vertex_at(&self, local: usize) -> u32 {
        let mut bits = self.base;
        let mut src = 1usize;
        let mut rest = self.free;
        while rest != 0 {
            let low = rest & rest.wrapping_neg();
            if local & src != 0 {
                bits |= low;
            }
            src <<= 1;
            rest &= !low;
        }
        bits
    }

    /// Vertex labels in ascending order.
    pub(crate) fn labels(&self) -> impl Iterator<Item = u32> {
        let free = self.free;
        let base = self.base;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let sub = next?;
            // Standard ascending sub-mask walk over `free`.
            next = if sub == free { None } else { Some((sub | !free).wrapping_add(1) & free) };
            Some(base | sub)
        })
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        let n = self.ambient;
        self.labels().map(move |b| Vertex::from_raw(b, n))
    }

    /// Canonical sort key: free mask first, then base.
    #[inline]
    pub fn canonical_key(&self) -> (u32, u32) {
        (self.free, self.base)
    }
}

impl PartialOrd for Subcube {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subcube {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ambient, self.free, self.base).cmp(&(other.ambient, other.free, other.base))
    }
}

impl fmt::Display for Subcube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.ambient;
        let s: String = (1..=n)
            .map(|i| {
                let bit = coord_bit(n, i);
                if self.free & bit != 0 {
                    '*'
                } else if self.base & bit != 0 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        f.write_str(&s)
    }
}

impl FromStr for Subcube {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let n = s.chars().count();
        if n == 0 || n > MAX_DIM as usize {
            return Err(Error::Parse(format!("pattern `{s}` must have 1..={MAX_DIM} characters")));
        }
        let n = n as u8;
        let (mut free, mut base) = (0u32, 0u32);
        for (pos, c) in s.chars().enumerate() {
            let bit = coord_bit(n, pos as u8 + 1);
            match c {
                '0' => {}
                '1' => base |= bit,
                '*' => free |= bit,
                other => {
                    return Err(Error::Parse(format!("unexpected `{other}` in pattern `{s}`")));
                }
            }
        }
        Ok(Subcube::from_raw(free, base, n))
    }
}

impl Serialize for Subcube {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Subcube {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every vertex of `s`, ascending.
pub fn subcube_vertices(s: &Subcube) -> Vec<Vertex> {
    s.vertices().collect()
}

/// All dimension-`k` subcubes of Q_n in canonical order
/// (free mask ascending, then base ascending).
pub fn enumerate_subcubes(n: u8, k: u8) -> Result<SubcubeIter> {
    check_dim(n)?;
    if k > n {
        return Err(arg_err!("subcube dimension {k} exceeds ambient dimension {n}"));
    }
    Ok(SubcubeIter {
        n,
        free: Some(if k == 0 { 0 } else { (1u64 << k) - 1 }),
        base: 0,
    })
}

/// Iterator returned by [`enumerate_subcubes`].
pub struct SubcubeIter {
    n: u8,
    free: Option<u64>,
    base: u32,
}

impl Iterator for SubcubeIter {
    type Item = Subcube;

    fn next(&mut self) -> Option<Subcube> {
        let free = self.free? as u32;
        let fixed = full_mask(self.n) & !free;
        let out = Subcube::from_raw(free, self.base, self.n);
        if self.base == fixed {
            self.base = 0;
            self.free = next_same_popcount(free as u64).filter(|&f| f < 1u64 << self.n);
            if free == 0 {
                self.free = None;
            }
        } else {
            self.base = (self.base | !fixed).wrapping_add(1) & fixed;
        }
        Some(out)
    }
}

/// Next larger integer with the same number of set bits.
fn next_same_popcount(x: u64) -> Option<u64> {
    if x == 0 {
        return None;
    }
    let c = x & x.wrapping_neg();
    let r = x + c;
    Some((((r ^ x) >> 2) / c) | r)
}

/// Partition of Q_n into the two halves with coordinate `split_dim` fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfSplit {
    pub split_dim: u8,
    pub half_zero: Subcube,
    pub half_one: Subcube,
}

impl HalfSplit {
    /// The perfect matching between the halves, listed from the zero side.
    pub fn crossing_edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> {
        let bit = coord_bit(self.half_zero.ambient, self.split_dim);
        self.half_zero
            .vertices()
            .map(move |v| (v, Vertex::from_raw(v.bits ^ bit, v.dim)))
    }
}

pub fn split(n: u8, d: u8) -> Result<HalfSplit> {
    check_dim(n)?;
    if n < 2 {
        return Err(arg_err!("cannot split Q_{n}; need n >= 2"));
    }
    check_coord(n, d)?;
    let whole = Subcube::whole(n)?;
    let bit = coord_bit(n, d);
    Ok(HalfSplit {
        split_dim: d,
        half_zero: whole.fix_bit(bit, false),
        half_one: whole.fix_bit(bit, true),
    })
}

/// A walk along hypercube edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Path {
    vertices: Vec<Vertex>,
}

impl Path {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(arg_err!("a path needs at least one vertex"));
        };
        for w in vertices.windows(2) {
            if w[1].dim != first.dim || hamming(w[0], w[1])? != 1 {
                return Err(arg_err!("{} and {} are not adjacent", w[0], w[1]));
            }
        }
        Ok(Path { vertices })
    }

    pub(crate) fn from_labels(labels: &[u32], n: u8) -> Result<Self> {
        Path::new(labels.iter().map(|&b| Vertex::from_raw(b, n)).collect())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Edge count `l(P)`.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn end(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }
}
