//! Exhaustive and sampled search spaces of fault families.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FaultFamily, FaultMode};
use crate::cube::{enumerate_subcubes, full_mask, Subcube, MAX_DIM};
use crate::error::{arg_err, Error, Result};

/// Rejection-sampling attempts allowed per requested family.
pub const MAX_SAMPLE_ATTEMPTS: usize = 10_000;

fn admissible_dims(n: u8, mode: FaultMode) -> Vec<u8> {
    (0..=n).filter(|&k| mode.admits(k)).collect()
}

/// Every subcube of Q_n admissible under `mode`, in canonical order.
pub fn admissible_elements(n: u8, mode: FaultMode) -> Result<Vec<Subcube>> {
    let mut out = Vec::new();
    for k in admissible_dims(n, mode) {
        out.extend(enumerate_subcubes(n, k)?);
    }
    out.sort();
    Ok(out)
}

/// Every family of exactly `size` pairwise-disjoint admissible elements.
///
/// Elements inside a family are in canonical order and families come out in
/// lexicographic order of their element indices.
pub fn enumerate_families(n: u8, mode: FaultMode, size: usize) -> Result<FamilyIter> {
    Ok(FamilyIter {
        n,
        mode,
        size,
        elements: admissible_elements(n, mode)?,
        chosen: Vec::with_capacity(size),
        started: false,
    })
}

/// Iterator returned by [`enumerate_families`].
pub struct FamilyIter {
    n: u8,
    mode: FaultMode,
    size: usize,
    elements: Vec<Subcube>,
    chosen: Vec<usize>,
    started: bool,
}

impl FamilyIter {
    /// Extends `chosen` to a full family using indices `>= start`,
    /// backtracking as needed. Returns false once the space is exhausted.
    fn fill(&mut self, mut start: usize) -> bool {
        let total = self.elements.len();
        loop {
            if self.chosen.len() == self.size {
                return true;
            }
            let need = self.size - self.chosen.len();
            let found = (start..total).take_while(|&i| total - i >= need).find(|&i| {
                let e = &self.elements[i];
                self.chosen.iter().all(|&j| !self.elements[j].intersects(e))
            });
            match found {
                Some(i) => {
                    self.chosen.push(i);
                    start = i + 1;
                }
                None => match self.chosen.pop() {
                    Some(last) => start = last + 1,
                    None => return false,
                },
            }
        }
    }
}

impl Iterator for FamilyIter {
    type Item = FaultFamily;

    fn next(&mut self) -> Option<FaultFamily> {
        let ok = if !self.started {
            self.started = true;
            self.fill(0)
        } else if self.size == 0 {
            false
        } else {
            let last = self.chosen.pop()?;
            self.fill(last + 1)
        };
        if !ok {
            self.chosen.clear();
            self.size = 0;
            return None;
        }
        let elements = self.chosen.iter().map(|&i| self.elements[i]).collect();
        Some(FaultFamily::new(self.n, self.mode, elements))
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Draws `count` valid families by rejection sampling with a seeded ChaCha
/// generator. Elements are uniform over all admissible subcubes.
pub fn sample_families(
    n: u8,
    mode: FaultMode,
    size: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<FaultFamily>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = ElementSampler::new(n, mode)?;
    if count == 0 {
        return Err(arg_err!("sample count must be at least 1"));
    }
    (0..count).map(|_| sampler.family(&mut rng, size)).collect()
}

/// Uniform sampler over the admissible elements of one mode.
pub(crate) struct ElementSampler {
    n: u8,
    mode: FaultMode,
    dims: Vec<u8>,
    weights: WeightedIndex<u64>,
}

impl ElementSampler {
    pub(crate) fn new(n: u8, mode: FaultMode) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(arg_err!("dimension {n} outside 1..={MAX_DIM}"));
        }
        let dims = admissible_dims(n, mode);
        if dims.is_empty() {
            return Err(arg_err!("mode {mode} admits no subcube of Q_{n}"));
        }
        let weights = dims
            .iter()
            .map(|&k| binomial(n as u64, k as u64) << (n - k))
            .collect::<Vec<_>>();
        let weights = WeightedIndex::new(weights).map_err(|e| arg_err!("{e}"))?;
        Ok(ElementSampler { n, mode, dims, weights })
    }

    pub(crate) fn element<R: Rng>(&self, rng: &mut R) -> Subcube {
        let k = self.dims[self.weights.sample(rng)];
        let free = index::sample(rng, self.n as usize, k as usize)
            .into_iter()
            .fold(0u32, |acc, b| acc | 1 << b);
        let base = rng.gen::<u32>() & full_mask(self.n) & !free;
        Subcube::from_raw(free, base, self.n)
    }

    pub(crate) fn family<R: Rng>(&self, rng: &mut R, size: usize) -> Result<FaultFamily> {
        let mut picked: Vec<Subcube> = Vec::with_capacity(size);
        for _ in 0..MAX_SAMPLE_ATTEMPTS {
            picked.clear();
            let ok = (0..size).all(|_| {
                let e = self.element(rng);
                let fits = picked.iter().all(|p| !p.intersects(&e));
                picked.push(e);
                fits
            });
            if ok {
                return Ok(FaultFamily::new(self.n, self.mode, picked));
            }
        }
        Err(Error::Resource(format!(
            "no disjoint {mode} family of size {size} in Q_{n} after {MAX_SAMPLE_ATTEMPTS} attempts",
            mode = self.mode,
            n = self.n
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fault::validate_family;
    use std::collections::BTreeSet;

    #[test]
    fn single_element_counts() {
        assert_eq!(enumerate_families(3, FaultMode::Structure(1), 1).unwrap().count(), 12);
        assert_eq!(enumerate_families(3, FaultMode::Substructure, 1).unwrap().count(), 20);
        assert_eq!(enumerate_families(3, FaultMode::Substructure, 0).unwrap().count(), 1);
    }

    /// Independent pair count: ordered double loop over all edges.
    fn disjoint_edge_pairs(n: u8) -> BTreeSet<(String, String)> {
        let edges: Vec<Subcube> = enumerate_subcubes(n, 1).unwrap().collect();
        let mut out = BTreeSet::new();
        for a in &edges {
            for b in &edges {
                let va: BTreeSet<_> = a.vertices().collect();
                if a < b && b.vertices().all(|v| !va.contains(&v)) {
                    out.insert((a.to_string(), b.to_string()));
                }
            }
        }
        out
    }

    #[test]
    fn pair_enumeration_matches_double_loop() {
        for n in [3u8, 4] {
            let got: BTreeSet<(String, String)> = enumerate_families(n, FaultMode::Structure(1), 2)
                .unwrap()
                .map(|f| (f.elements()[0].to_string(), f.elements()[1].to_string()))
                .collect();
            let expected = disjoint_edge_pairs(n);
            assert_eq!(got, expected);
            assert_eq!(
                enumerate_families(n, FaultMode::Structure(1), 2).unwrap().count(),
                expected.len()
            );
        }
    }

    #[test]
    fn families_are_unique_valid_and_ordered() {
        for mode in [FaultMode::Structure(1), FaultMode::Substructure, FaultMode::SubcubeFamily(2)] {
            for size in 0..=3 {
                let all: Vec<FaultFamily> = enumerate_families(4, mode, size).unwrap().collect();
                let uniq: BTreeSet<Vec<String>> = all.iter().map(|f| f.patterns()).collect();
                assert_eq!(uniq.len(), all.len());
                for f in &all {
                    assert_eq!(f.len(), size);
                    assert_eq!(validate_family(f), Ok(()));
                }
            }
        }
    }

    #[test]
    fn structure_families_are_subcube_families() {
        for n in 3..=4u8 {
            for m in 0..=n - 2 {
                for size in 1..=3 {
                    let wide: BTreeSet<Vec<String>> = enumerate_families(n, FaultMode::SubcubeFamily(m), size)
                        .unwrap()
                        .map(|f| f.patterns())
                        .collect();
                    for f in enumerate_families(n, FaultMode::Structure(m), size).unwrap() {
                        assert!(wide.contains(&f.patterns()));
                    }
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let a = sample_families(5, FaultMode::Substructure, 3, 50, 7).unwrap();
        let b = sample_families(5, FaultMode::Substructure, 3, 50, 7).unwrap();
        assert_eq!(a, b);
        let many = sample_families(6, FaultMode::SubcubeFamily(2), 3, 1000, 1).unwrap();
        assert_eq!(many.len(), 1000);
        for f in &many {
            assert_eq!(validate_family(f), Ok(()));
            assert_eq!(f.len(), 3);
        }
        assert!(sample_families(3, FaultMode::Structure(2), 3, 1, 0).is_err());
        assert!(sample_families(3, FaultMode::Structure(4), 1, 1, 0).is_err());
        assert!(sample_families(3, FaultMode::Structure(1), 1, 0, 0).is_err());
    }
}
