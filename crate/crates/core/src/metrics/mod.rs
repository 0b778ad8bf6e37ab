//! Distances, diameter and connectivity of Q_n after removing faults.

mod bitcube;

pub use bitcube::BitCube;

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::cube::{Path, Subcube, Vertex};
use crate::error::{arg_err, Result};
use crate::fault::{validate_family, FaultFamily};

/// Diameter of a survival graph. A disconnected graph has no finite
/// diameter and is kept apart from every numeric value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Diameter {
    Finite(usize),
    Disconnected,
}

impl Diameter {
    pub fn finite(self) -> Option<usize> {
        match self {
            Diameter::Finite(d) => Some(d),
            Diameter::Disconnected => None,
        }
    }
}

const UNSEEN: u32 = u32::MAX;

/// The subgraph of a (sub)cube induced by the vertices that survive a set
/// of faults. Vertices are addressed by their index inside `domain`, so the
/// domain is itself a Q_k and neighbors are single-bit flips of the index.
#[derive(Clone, Debug)]
pub struct SurvivalGraph {
    domain: Subcube,
    removed: Vec<bool>,
    survivors: usize,
}

impl SurvivalGraph {
    /// `Q_n - f` for a valid family.
    pub fn new(f: &FaultFamily) -> Result<Self> {
        validate_family(f).map_err(|v| arg_err!("{v}"))?;
        Ok(Self::within(Subcube::whole(f.ambient())?, f.elements()))
    }

    pub fn fault_free(n: u8) -> Result<Self> {
        Ok(Self::within(Subcube::whole(n)?, &[]))
    }

    /// `Q_n - S` for an arbitrary vertex set `S`.
    pub fn without_vertices(n: u8, removed: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let whole = Subcube::whole(n)?;
        let mut g = Self::within(whole, &[]);
        for v in removed {
            if v.dim() != n {
                return Err(arg_err!("vertex {v} is not in Q_{n}"));
            }
            g.remove(v.bits());
        }
        Ok(g)
    }

    /// `domain - faults`; faults may overlap the domain partially.
    pub fn within(domain: Subcube, faults: &[Subcube]) -> Self {
        let size = domain.len() as usize;
        let mut g = SurvivalGraph { domain, removed: vec![false; size], survivors: size };
        for f in faults {
            if let Some(part) = domain.intersection(f) {
                for b in part.labels() {
                    g.remove(b);
                }
            }
        }
        g
    }

    fn remove(&mut self, bits: u32) {
        let i = self.domain.local_index(bits);
        if !self.removed[i] {
            self.removed[i] = true;
            self.survivors -= 1;
        }
    }

    pub fn ambient(&self) -> u8 {
        self.domain.ambient()
    }

    pub fn domain(&self) -> Subcube {
        self.domain
    }

    pub fn survivor_count(&self) -> usize {
        self.survivors
    }

    pub fn is_survivor(&self, v: Vertex) -> bool {
        self.domain.contains(v) && !self.removed[self.domain.local_index(v.bits())]
    }

    fn local_of(&self, v: Vertex) -> Result<usize> {
        if !self.is_survivor(v) {
            return Err(arg_err!("{v} is not a surviving vertex of {}", self.domain));
        }
        Ok(self.domain.local_index(v.bits()))
    }

    /// Single-source BFS over local indices. Returns (reached, eccentricity).
    fn bfs(&self, src: usize, dist: &mut [u32], queue: &mut VecDeque<usize>, stop_at: Option<usize>) -> (usize, u32) {
        let k = self.domain.dim();
        dist.fill(UNSEEN);
        queue.clear();
        dist[src] = 0;
        queue.push_back(src);
        let (mut reached, mut ecc) = (1usize, 0u32);
        while let Some(x) = queue.pop_front() {
            if Some(x) == stop_at {
                break;
            }
            let dx = dist[x];
            for j in 0..k {
                let y = x ^ (1 << j);
                if !self.removed[y] && dist[y] == UNSEEN {
                    dist[y] = dx + 1;
                    ecc = dx + 1;
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        (reached, ecc)
    }

    /// Exact distance in the survival graph, `None` when unreachable.
    pub fn bfs_distance(&self, u: Vertex, v: Vertex) -> Result<Option<usize>> {
        let (a, b) = (self.local_of(u)?, self.local_of(v)?);
        let mut dist = vec![UNSEEN; self.removed.len()];
        self.bfs(a, &mut dist, &mut VecDeque::new(), Some(b));
        Ok((dist[b] != UNSEEN).then(|| dist[b] as usize))
    }

    /// A shortest path, preferring lower coordinates when breaking ties.
    pub fn shortest_path(&self, u: Vertex, v: Vertex) -> Result<Option<Path>> {
        let (a, b) = (self.local_of(u)?, self.local_of(v)?);
        let mut dist = vec![UNSEEN; self.removed.len()];
        // Search from the target so the walk below can greedily descend.
        self.bfs(b, &mut dist, &mut VecDeque::new(), Some(a));
        if dist[a] == UNSEEN {
            return Ok(None);
        }
        let k = self.domain.dim();
        let mut labels = vec![self.domain.vertex_at(a)];
        let mut x = a;
        while x != b {
            // highest local bit corresponds to the lowest free coordinate
            x = (0..k)
                .rev()
                .map(|j| x ^ (1 << j))
                .find(|&y| dist[y] != UNSEEN && dist[y] + 1 == dist[x])
                .expect("BFS layers are consistent");
            labels.push(self.domain.vertex_at(x));
        }
        Path::from_labels(&labels, self.ambient()).map(Some)
    }

    fn first_survivor(&self) -> Result<usize> {
        self.removed
            .iter()
            .position(|r| !r)
            .ok_or_else(|| arg_err!("survival graph has no vertices"))
    }

    pub fn is_connected(&self) -> Result<bool> {
        let src = self.first_survivor()?;
        let mut dist = vec![UNSEEN; self.removed.len()];
        let (reached, _) = self.bfs(src, &mut dist, &mut VecDeque::new(), None);
        Ok(reached == self.survivors)
    }

    /// Eccentricity of `v`, or `None` if some survivor is unreachable from it.
    pub fn eccentricity(&self, v: Vertex) -> Result<Option<usize>> {
        let src = self.local_of(v)?;
        let mut dist = vec![UNSEEN; self.removed.len()];
        let (reached, ecc) = self.bfs(src, &mut dist, &mut VecDeque::new(), None);
        Ok((reached == self.survivors).then_some(ecc as usize))
    }

    /// The connected component of `v`, ascending.
    pub fn component(&self, v: Vertex) -> Result<Vec<Vertex>> {
        let src = self.local_of(v)?;
        let mut dist = vec![UNSEEN; self.removed.len()];
        self.bfs(src, &mut dist, &mut VecDeque::new(), None);
        let n = self.ambient();
        let mut out: Vec<Vertex> = (0..dist.len())
            .filter(|&i| dist[i] != UNSEEN)
            .map(|i| Vertex::from_raw(self.domain.vertex_at(i), n))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Maximum eccentricity over all survivors.
    pub fn diameter(&self) -> Result<Diameter> {
        if !self.is_connected()? {
            return Ok(Diameter::Disconnected);
        }
        let sources: Vec<usize> = (0..self.removed.len()).filter(|&i| !self.removed[i]).collect();
        let ecc_chunk = |chunk: &[usize]| {
            let mut dist = vec![UNSEEN; self.removed.len()];
            let mut queue = VecDeque::new();
            chunk.iter().map(|&s| self.bfs(s, &mut dist, &mut queue, None).1).max().unwrap_or(0)
        };
        let max = if sources.len() >= 512 {
            sources.par_chunks(64).map(ecc_chunk).max().unwrap_or(0)
        } else {
            ecc_chunk(&sources)
        };
        Ok(Diameter::Finite(max as usize))
    }
}

/// `d(u, v)` in `Q_n - f`.
pub fn bfs_distance(g: &SurvivalGraph, u: Vertex, v: Vertex) -> Result<Option<usize>> {
    g.bfs_distance(u, v)
}

pub fn diameter(g: &SurvivalGraph) -> Result<Diameter> {
    g.diameter()
}

pub fn is_connected(g: &SurvivalGraph) -> Result<bool> {
    g.is_connected()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fault::{adversarial_q1_family, FaultMode};

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    #[test]
    fn distances() {
        let g = SurvivalGraph::fault_free(4).unwrap();
        assert_eq!(g.bfs_distance(v("0000"), v("1111")).unwrap(), Some(4));
        assert_eq!(g.bfs_distance(v("0110"), v("0110")).unwrap(), Some(0));
        let g = SurvivalGraph::new(&adversarial_q1_family(4).unwrap()).unwrap();
        assert_eq!(g.bfs_distance(v("0000"), v("1110")).unwrap(), Some(5));
        assert!(g.bfs_distance(v("0100"), v("1110")).is_err());
        let p = g.shortest_path(v("0000"), v("1110")).unwrap().unwrap();
        assert_eq!(p.len(), 5);
        assert!(p.vertices().iter().all(|&x| g.is_survivor(x)));
    }

    #[test]
    fn diameters() {
        assert_eq!(SurvivalGraph::fault_free(3).unwrap().diameter().unwrap(), Diameter::Finite(3));
        let f = FaultFamily::try_new(3, FaultMode::Structure(1), vec!["00*".parse().unwrap()]).unwrap();
        assert_eq!(SurvivalGraph::new(&f).unwrap().diameter().unwrap(), Diameter::Finite(3));
        let g = SurvivalGraph::new(&adversarial_q1_family(4).unwrap()).unwrap();
        assert_eq!(g.survivor_count(), 12);
        assert_eq!(g.diameter().unwrap(), Diameter::Finite(5));
        assert!(g.is_connected().unwrap());
        let all = SurvivalGraph::without_vertices(2, Subcube::whole(2).unwrap().vertices()).unwrap();
        assert!(all.diameter().is_err());
        assert!(all.is_connected().is_err());
        let cut = SurvivalGraph::without_vertices(2, [v("01"), v("10")]).unwrap();
        assert_eq!(cut.diameter().unwrap(), Diameter::Disconnected);
        assert_eq!(cut.bfs_distance(v("00"), v("11")).unwrap(), None);
    }

    #[test]
    fn half_minus_adversary_is_cut() {
        let f = adversarial_q1_family(4).unwrap();
        let half = "***0".parse().unwrap();
        let g = SurvivalGraph::within(half, f.elements());
        assert!(!g.is_connected().unwrap());
        assert_eq!(g.component(v("0000")).unwrap(), vec![v("0000"), v("1000")]);
        assert!(SurvivalGraph::fault_free(5).unwrap().is_connected().unwrap());
    }

    #[test]
    fn large_diameter_uses_parallel_path() {
        let g = SurvivalGraph::new(&adversarial_q1_family(10).unwrap()).unwrap();
        assert_eq!(g.diameter().unwrap(), Diameter::Finite(11));
    }
}
