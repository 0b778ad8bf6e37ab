//! Vertex-disjoint families of faulty subcubes.

mod adversary;
pub(crate) mod enumerate;
mod io;

pub use adversary::{adversarial_q1_family, adversarial_subcube_family};
pub use enumerate::{admissible_elements, enumerate_families, sample_families, FamilyIter, MAX_SAMPLE_ATTEMPTS};
pub use io::{parse_family_file, read_family_file, render_family_file, write_family_file};

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::cube::{coord_bit, Subcube, Vertex};
use crate::error::{arg_err, Error, Result};

/// Which element shapes a family may contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FaultMode {
    /// Every element is exactly a Q_m.
    Structure(u8),
    /// Every element is a Q_0 or a Q_1 (connected subgraphs of K_2).
    Substructure,
    /// Every element is a subcube of dimension at most m.
    SubcubeFamily(u8),
}

impl FaultMode {
    /// Whether an element of dimension `k` is admissible.
    pub fn admits(&self, k: u8) -> bool {
        match *self {
            FaultMode::Structure(m) => k == m,
            FaultMode::Substructure => k <= 1,
            FaultMode::SubcubeFamily(m) => k <= m,
        }
    }

    /// Largest admissible element dimension.
    pub fn max_element_dim(&self) -> u8 {
        match *self {
            FaultMode::Structure(m) | FaultMode::SubcubeFamily(m) => m,
            FaultMode::Substructure => 1,
        }
    }

    /// Known connectivity of Q_n for this mode: `n - m` for Q_m structures
    /// and subcube families (`m <= n - 2`), `n - 1` for Q_1 substructures
    /// (`n >= 3`). `None` outside those ranges.
    pub fn kappa(&self, n: u8) -> Option<usize> {
        match *self {
            FaultMode::Structure(m) | FaultMode::SubcubeFamily(m) => {
                (n >= 2 && m + 2 <= n).then(|| (n - m) as usize)
            }
            FaultMode::Substructure => (n >= 3).then(|| n as usize - 1),
        }
    }
}

impl fmt::Display for FaultMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaultMode::Structure(m) => write!(f, "structure:{m}"),
            FaultMode::Substructure => f.write_str("substructure"),
            FaultMode::SubcubeFamily(m) => write!(f, "subcube:{m}"),
        }
    }
}

impl FromStr for FaultMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, m) = match s.split_once(':') {
            Some((k, m)) => {
                let m: u8 = m
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad subcube dimension in mode `{s}`")))?;
                (k, Some(m))
            }
            None => (s, None),
        };
        match (kind, m) {
            ("structure", Some(m)) => Ok(FaultMode::Structure(m)),
            ("subcube", Some(m)) => Ok(FaultMode::SubcubeFamily(m)),
            ("substructure", None) => Ok(FaultMode::Substructure),
            _ => Err(Error::Parse(format!(
                "unknown mode `{s}` (expected structure:<m>, substructure or subcube:<m>)"
            ))),
        }
    }
}

impl Serialize for FaultMode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Why a family is not admissible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    AmbientMismatch { element: Subcube, ambient: u8 },
    ModeMismatch { element: Subcube, mode: FaultMode },
    Overlap { first: Subcube, second: Subcube },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AmbientMismatch { element, ambient } => {
                write!(f, "element {element} does not live in Q_{ambient}")
            }
            Violation::ModeMismatch { element, mode } => {
                write!(f, "element {element} (dimension {}) is not admissible in mode {mode}", element.dim())
            }
            Violation::Overlap { first, second } => write!(f, "elements {first} and {second} share a vertex"),
        }
    }
}

/// A list of faulty subcubes of Q_n, kept in canonical element order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FaultFamily {
    ambient: u8,
    mode: FaultMode,
    elements: Vec<Subcube>,
}

impl FaultFamily {
    /// Builds a family without validating it; see [`FaultFamily::try_new`].
    pub fn new(ambient: u8, mode: FaultMode, mut elements: Vec<Subcube>) -> Self {
        elements.sort();
        FaultFamily { ambient, mode, elements }
    }

    /// Builds a family and rejects it unless [`validate_family`] passes.
    pub fn try_new(ambient: u8, mode: FaultMode, elements: Vec<Subcube>) -> Result<Self> {
        let family = FaultFamily::new(ambient, mode, elements);
        validate_family(&family).map_err(|v| arg_err!("{v}"))?;
        Ok(family)
    }

    pub fn empty(ambient: u8, mode: FaultMode) -> Self {
        FaultFamily::new(ambient, mode, Vec::new())
    }

    pub fn ambient(&self) -> u8 {
        self.ambient
    }

    pub fn mode(&self) -> FaultMode {
        self.mode
    }

    pub fn elements(&self) -> &[Subcube] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Total number of faulty vertices, `Σ 2^{k_i}`.
    pub fn fault_count(&self) -> u64 {
        self.elements.iter().map(Subcube::len).sum()
    }

    pub fn covers(&self, v: Vertex) -> bool {
        self.elements.iter().any(|e| e.contains(v))
    }

    pub fn with_mode(mut self, mode: FaultMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn patterns(&self) -> Vec<String> {
        self.elements.iter().map(ToString::to_string).collect()
    }
}

/// Checks ambient dimension, mode conformity and pairwise disjointness,
/// reporting the first offending element or pair.
pub fn validate_family(f: &FaultFamily) -> std::result::Result<(), Violation> {
    for (i, e) in f.elements.iter().enumerate() {
        if e.ambient() != f.ambient {
            return Err(Violation::AmbientMismatch { element: *e, ambient: f.ambient });
        }
        if !f.mode.admits(e.dim()) {
            return Err(Violation::ModeMismatch { element: *e, mode: f.mode });
        }
        if let Some(prev) = f.elements[..i].iter().find(|p| p.intersects(e)) {
            return Err(Violation::Overlap { first: *prev, second: *e });
        }
    }
    Ok(())
}

/// Union of all element vertex sets, ascending.
pub fn fault_vertices(f: &FaultFamily) -> Result<Vec<Vertex>> {
    validate_family(f).map_err(|v| arg_err!("{v}"))?;
    let mut out: Vec<Vertex> = f.elements.iter().flat_map(|e| e.vertices()).collect();
    out.sort();
    Ok(out)
}

/// A family partitioned relative to a split coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitClassification {
    pub split_dim: u8,
    /// Elements with the split coordinate fixed to 0.
    pub in_zero: Vec<Subcube>,
    /// Elements with the split coordinate fixed to 1.
    pub in_one: Vec<Subcube>,
    /// Elements free in the split coordinate; they meet both halves.
    pub straddling: Vec<Subcube>,
}

impl SplitClassification {
    /// Elements that occupy half `h`, with straddling elements replaced by
    /// their one-lower-dimensional intersection with that half.
    pub fn projected(&self, h: bool) -> Vec<Subcube> {
        let n = self.straddling.first().map(|s| s.ambient());
        let own = if h { &self.in_one } else { &self.in_zero };
        let mut out = own.clone();
        if let Some(n) = n {
            let bit = coord_bit(n, self.split_dim);
            out.extend(self.straddling.iter().map(|s| s.fix_bit(bit, h)));
        }
        out.sort();
        out
    }
}

pub fn classify_along(f: &FaultFamily, d: u8) -> Result<SplitClassification> {
    validate_family(f).map_err(|v| arg_err!("{v}"))?;
    if d == 0 || d > f.ambient {
        return Err(arg_err!("split coordinate {d} outside 1..={}", f.ambient));
    }
    let bit = coord_bit(f.ambient, d);
    let mut out = SplitClassification {
        split_dim: d,
        in_zero: Vec::new(),
        in_one: Vec::new(),
        straddling: Vec::new(),
    };
    for &e in &f.elements {
        if e.free_mask() & bit != 0 {
            out.straddling.push(e);
        } else if e.base() & bit != 0 {
            out.in_one.push(e);
        } else {
            out.in_zero.push(e);
        }
    }
    Ok(out)
}
