//! Brute-force ground truth for structure connectivity and fault diameters.
//!
//! Exhaustive searches walk every vertex-disjoint packing of admissible
//! subcubes up to the requested size, evaluating each survival graph with
//! the word-parallel BFS in [`crate::metrics::BitCube`]. Work is split by
//! the index of the first element and reduced in canonical order, so
//! results and witnesses do not depend on the thread count.

mod claims;

pub use claims::{
    parse_claim_scope, registered_claims, verify_claims, ClaimId, ClaimKind, ClaimRecord, ClaimStatus, Relation,
    RANDOM_CASES,
};

use std::ops::ControlFlow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cube::Subcube;
use crate::error::{arg_err, Error, Result};
use crate::fault::enumerate::ElementSampler;
use crate::fault::{admissible_elements, FaultFamily, FaultMode};
use crate::metrics::{BitCube, Diameter, SurvivalGraph};

/// Largest dimension for exhaustive searches.
pub const EXHAUSTIVE_MAX_DIM: u8 = 7;

/// Upper bound on `Σ C(E, t)` candidate index tuples an exhaustive search
/// may visit, where `E` is the number of admissible elements.
pub const EXHAUSTIVE_FAMILY_LIMIT: u64 = 20_000_000;

/// How the family space is searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Search {
    Exhaustive,
    Sampled { seed: u64, draws: usize },
}

/// Minimum number of admissible elements whose removal disconnects Q_n.
#[derive(Clone, Debug, Serialize)]
pub struct ConnectivityResult {
    pub n: u8,
    pub mode: FaultMode,
    pub kappa: usize,
    /// First disconnecting family of size `kappa` in canonical order.
    pub witness: FaultFamily,
}

/// Largest survival-graph diameter over the searched families.
#[derive(Clone, Debug, Serialize)]
pub struct FaultDiameterResult {
    pub n: u8,
    pub mode: FaultMode,
    pub value: usize,
    pub witness: FaultFamily,
    pub budget: usize,
    pub search: Search,
    pub families: u64,
}

fn binomial_saturating(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Admissible elements of one mode with their vertex sets as bit masks.
struct Packings {
    n: u8,
    mode: FaultMode,
    cube: BitCube,
    elements: Vec<Subcube>,
    sets: Vec<u128>,
}

impl Packings {
    fn new(n: u8, mode: FaultMode) -> Result<Self> {
        if n > EXHAUSTIVE_MAX_DIM {
            return Err(Error::Resource(format!(
                "exhaustive search is limited to n <= {EXHAUSTIVE_MAX_DIM}; use sampled search for Q_{n}"
            )));
        }
        let cube = BitCube::new(n)?;
        let elements = admissible_elements(n, mode)?;
        let sets = elements.iter().map(|e| cube.subcube_set(e)).collect();
        Ok(Packings { n, mode, cube, elements, sets })
    }

    fn candidates(&self, size: usize) -> u64 {
        binomial_saturating(self.elements.len() as u64, size as u64)
    }

    fn check_budget(&self, sizes: impl Iterator<Item = usize>) -> Result<()> {
        let total = sizes.fold(0u64, |acc, t| acc.saturating_add(self.candidates(t)));
        if total > EXHAUSTIVE_FAMILY_LIMIT {
            return Err(Error::Resource(format!(
                "exhaustive {} search in Q_{} would visit up to {total} families (limit {EXHAUSTIVE_FAMILY_LIMIT}); use sampled search",
                self.mode, self.n
            )));
        }
        Ok(())
    }

    fn family(&self, idx: &[usize]) -> FaultFamily {
        FaultFamily::new(self.n, self.mode, idx.iter().map(|&i| self.elements[i]).collect())
    }

    /// Visits every disjoint packing of exactly `size` elements whose first
    /// element is `first`, in lexicographic index order. The visitor gets
    /// the indices and the union of the vertex sets.
    fn visit_from<F>(&self, first: usize, size: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize], u128) -> ControlFlow<()>,
    {
        let mut idx = Vec::with_capacity(size);
        idx.push(first);
        self.extend(&mut idx, self.sets[first], first + 1, size, visit)
    }

    fn extend<F>(&self, idx: &mut Vec<usize>, dead: u128, start: usize, size: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize], u128) -> ControlFlow<()>,
    {
        if idx.len() == size {
            return visit(idx, dead);
        }
        let need = size - idx.len();
        let total = self.elements.len();
        for i in start..total {
            if total - i < need {
                break;
            }
            if self.sets[i] & dead == 0 {
                idx.push(i);
                let flow = self.extend(idx, dead | self.sets[i], i + 1, size, visit);
                idx.pop();
                flow?;
            }
        }
        ControlFlow::Continue(())
    }

    /// First (canonical order) family of `size` elements whose removal
    /// leaves a nonempty disconnected graph.
    fn first_disconnecting(&self, size: usize) -> Option<Vec<usize>> {
        let full = self.cube.full();
        (0..self.elements.len()).into_par_iter().find_map_first(|first| {
            let mut found = None;
            let _ = self.visit_from(first, size, &mut |idx, dead| {
                let alive = full & !dead;
                if alive != 0 && !self.cube.is_connected(alive) {
                    found = Some(idx.to_vec());
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
            found
        })
    }
}

fn check_mode(n: u8, mode: FaultMode) -> Result<()> {
    if let FaultMode::Structure(m) | FaultMode::SubcubeFamily(m) = mode {
        if m + 2 > n {
            return Err(arg_err!("mode {mode} needs m <= n - 2 (n = {n})"));
        }
    }
    if mode == FaultMode::Substructure && n < 3 {
        return Err(arg_err!("substructure connectivity needs n >= 3"));
    }
    Ok(())
}

/// Smallest `t` such that some size-`t` family of `mode` disconnects Q_n,
/// found by trying `t = 1, 2, …` in order.
pub fn connectivity_bruteforce(n: u8, mode: FaultMode) -> Result<ConnectivityResult> {
    check_mode(n, mode)?;
    let packings = Packings::new(n, mode)?;
    for t in 1..=packings.elements.len() {
        packings.check_budget(1..=t)?;
        if let Some(idx) = packings.first_disconnecting(t) {
            return Ok(ConnectivityResult { n, mode, kappa: t, witness: packings.family(&idx) });
        }
        if packings.candidates(t) == 0 {
            break;
        }
    }
    Err(arg_err!("no {mode} family disconnects Q_{n}"))
}

/// Outcome of evaluating one chunk of families.
enum ChunkBest {
    Best(usize, Vec<usize>, u64),
    Broken(Vec<usize>),
}

fn disconnected_error(n: u8, mode: FaultMode, budget: usize, witness: &FaultFamily) -> Error {
    let pats = witness.patterns().join(",");
    match mode.kappa(n) {
        Some(k) if budget < k => Error::Invariant(format!(
            "family {{{pats}}} of size {} <= kappa - 1 = {} disconnects Q_{n} in mode {mode}",
            witness.len(),
            k - 1
        )),
        _ => arg_err!("budget {budget} admits the disconnecting {mode} family {{{pats}}}; the fault diameter is undefined"),
    }
}

/// Maximum diameter of `Q_n - F` over families `F` of at most `budget`
/// elements (the empty family included).
pub fn fault_diameter_bruteforce(n: u8, mode: FaultMode, budget: usize, search: Search) -> Result<FaultDiameterResult> {
    check_mode(n, mode)?;
    match search {
        Search::Exhaustive => exhaustive_fault_diameter(n, mode, budget),
        Search::Sampled { seed, draws } => sampled_fault_diameter(n, mode, budget, seed, draws),
    }
}

fn exhaustive_fault_diameter(n: u8, mode: FaultMode, budget: usize) -> Result<FaultDiameterResult> {
    let packings = Packings::new(n, mode)?;
    packings.check_budget(0..=budget)?;
    let full = packings.cube.full();
    let mut best = (n as usize, Vec::new());
    let mut families = 1u64;
    for size in 1..=budget {
        let chunks: Vec<ChunkBest> = (0..packings.elements.len())
            .into_par_iter()
            .map(|first| {
                let mut local: Option<(usize, Vec<usize>)> = None;
                let mut count = 0u64;
                let mut broken = None;
                let _ = packings.visit_from(first, size, &mut |idx, dead| {
                    count += 1;
                    let alive = full & !dead;
                    let d = if alive == 0 { Diameter::Disconnected } else { packings.cube.diameter(alive) };
                    match d {
                        Diameter::Finite(d) => {
                            if local.as_ref().is_none_or(|(b, _)| d > *b) {
                                local = Some((d, idx.to_vec()));
                            }
                            ControlFlow::Continue(())
                        }
                        Diameter::Disconnected => {
                            broken = Some(idx.to_vec());
                            ControlFlow::Break(())
                        }
                    }
                });
                match (broken, local) {
                    (Some(w), _) => ChunkBest::Broken(w),
                    (None, Some((d, w))) => ChunkBest::Best(d, w, count),
                    (None, None) => ChunkBest::Best(0, Vec::new(), count),
                }
            })
            .collect();
        for chunk in chunks {
            match chunk {
                ChunkBest::Broken(w) => return Err(disconnected_error(n, mode, budget, &packings.family(&w))),
                ChunkBest::Best(d, w, count) => {
                    families += count;
                    if count > 0 && d > best.0 {
                        best = (d, w);
                    }
                }
            }
        }
    }
    Ok(FaultDiameterResult {
        n,
        mode,
        value: best.0,
        witness: packings.family(&best.1),
        budget,
        search: Search::Exhaustive,
        families,
    })
}

fn sampled_fault_diameter(n: u8, mode: FaultMode, budget: usize, seed: u64, draws: usize) -> Result<FaultDiameterResult> {
    let sampler = ElementSampler::new(n, mode)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drawn = vec![FaultFamily::empty(n, mode)];
    for _ in 0..draws {
        drawn.push(sampler.family(&mut rng, budget)?);
    }
    let cube = (n <= EXHAUSTIVE_MAX_DIM).then(|| BitCube::new(n)).transpose()?;
    let diameters: Vec<Result<Diameter>> = drawn
        .par_iter()
        .map(|f| match &cube {
            Some(c) => {
                let dead = f.elements().iter().fold(0u128, |acc, e| acc | c.subcube_set(e));
                let alive = c.full() & !dead;
                Ok(if alive == 0 { Diameter::Disconnected } else { c.diameter(alive) })
            }
            None => SurvivalGraph::new(f)?.diameter(),
        })
        .collect();
    let mut best = (0usize, 0usize);
    for (i, d) in diameters.into_iter().enumerate() {
        match d? {
            Diameter::Finite(d) if i == 0 || d > best.0 => best = (d, i),
            Diameter::Finite(_) => {}
            Diameter::Disconnected => return Err(disconnected_error(n, mode, budget, &drawn[i])),
        }
    }
    Ok(FaultDiameterResult {
        n,
        mode,
        value: best.0,
        witness: drawn.swap_remove(best.1),
        budget,
        search: Search::Sampled { seed, draws },
        families: draws as u64 + 1,
    })
}
