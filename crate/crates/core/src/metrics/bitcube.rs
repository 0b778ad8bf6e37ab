//! Word-parallel BFS for n <= 7, with a vertex set held in one `u128`.
//!
//! Brute-force searches evaluate millions of survival graphs; expanding a
//! whole BFS frontier with `2n` shifts beats per-vertex queues by a wide
//! margin at these sizes.

use super::Diameter;
use crate::cube::{Subcube, Vertex};
use crate::error::{arg_err, Result};

/// Largest dimension a `u128` vertex set can hold.
pub const BITCUBE_MAX_DIM: u8 = 7;

#[derive(Clone, Debug)]
pub struct BitCube {
    n: u8,
    /// `bit_sets[b]` holds every label with bit `b` set.
    bit_sets: [u128; BITCUBE_MAX_DIM as usize],
    full: u128,
}

impl BitCube {
    pub fn new(n: u8) -> Result<Self> {
        if n == 0 || n > BITCUBE_MAX_DIM {
            return Err(arg_err!("bit-parallel cube supports 1..={BITCUBE_MAX_DIM}, got {n}"));
        }
        let mut bit_sets = [0u128; BITCUBE_MAX_DIM as usize];
        for (b, set) in bit_sets.iter_mut().enumerate().take(n as usize) {
            for x in 0..1u32 << n {
                if x >> b & 1 == 1 {
                    *set |= 1 << x;
                }
            }
        }
        let full = if n == 7 { u128::MAX } else { (1u128 << (1u32 << n)) - 1 };
        Ok(BitCube { n, bit_sets, full })
    }

    pub fn dim(&self) -> u8 {
        self.n
    }

    pub fn full(&self) -> u128 {
        self.full
    }

    pub fn subcube_set(&self, s: &Subcube) -> u128 {
        s.labels().fold(0u128, |acc, b| acc | 1 << b)
    }

    pub fn vertex_set(&self, vs: impl IntoIterator<Item = Vertex>) -> u128 {
        vs.into_iter().fold(0u128, |acc, v| acc | 1 << v.bits())
    }

    /// All neighbors of `set`, not intersected with anything.
    #[inline]
    fn expand(&self, set: u128) -> u128 {
        let mut out = 0u128;
        for b in 0..self.n as usize {
            let shift = 1u32 << b;
            let high = self.bit_sets[b];
            out |= ((set & !high) << shift) | ((set & high) >> shift);
        }
        out
    }

    /// BFS from `src` inside `alive`: (reached set, eccentricity).
    #[inline]
    fn sweep(&self, alive: u128, src: u32) -> (u128, usize) {
        let mut seen = 1u128 << src;
        let mut frontier = seen;
        let mut depth = 0;
        loop {
            let next = self.expand(frontier) & alive & !seen;
            if next == 0 {
                return (seen, depth);
            }
            seen |= next;
            frontier = next;
            depth += 1;
        }
    }

    /// Connectivity of the graph induced by `alive` (must be nonempty).
    #[inline]
    pub fn is_connected(&self, alive: u128) -> bool {
        debug_assert!(alive != 0);
        let (seen, _) = self.sweep(alive, alive.trailing_zeros());
        seen == alive
    }

    pub fn diameter(&self, alive: u128) -> Diameter {
        debug_assert!(alive != 0);
        if !self.is_connected(alive) {
            return Diameter::Disconnected;
        }
        let mut rest = alive;
        let mut best = 0;
        while rest != 0 {
            let s = rest.trailing_zeros();
            rest &= rest - 1;
            best = best.max(self.sweep(alive, s).1);
        }
        Diameter::Finite(best)
    }

    pub fn distance(&self, alive: u128, u: u32, v: u32) -> Option<usize> {
        let target = 1u128 << v;
        let mut seen = 1u128 << u;
        let mut frontier = seen;
        let mut depth = 0;
        while seen & target == 0 {
            let next = self.expand(frontier) & alive & !seen;
            if next == 0 {
                return None;
            }
            seen |= next;
            frontier = next;
            depth += 1;
        }
        Some(depth)
    }
}
