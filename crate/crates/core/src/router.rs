//! Fault-avoiding routing with guaranteed path lengths.
//!
//! The router recursively halves the cube. At each level it classifies the
//! faults against a split coordinate and considers the few ways a path can
//! be assembled: stay inside the half holding both endpoints, or hop across
//! the split once or twice and finish inside the other half. Every option
//! carries a length guarantee derived from the fault-diameter bounds of the
//! half it recurses into, and the router takes the option with the smallest
//! guarantee. Small subcubes are solved exactly by BFS.
//!
//! Length guarantees for a subcube of dimension `k` holding `c` disjoint
//! faulty subcubes of dimension at most `m`:
//!
//! * `c = 0`: `k` (Hamming distance);
//! * `c = 1`, or `c <= k - m - 2`: `k`;
//! * `c = k - m - 1`: `k + 1`;
//! * a faulty half (dimension `k - 1`) leaves the other half to recurse on;
//! * anything larger may disconnect and has no guarantee.

use serde::Serialize;

use crate::cube::{coord_bits, full_mask, Path, Subcube, Vertex};
use crate::error::{arg_err, Error, Result};
use crate::fault::{validate_family, FaultFamily, FaultMode};
use crate::metrics::SurvivalGraph;

/// The longest path the router may return for a mode and dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RouteBound {
    pub n: u8,
    pub mode: FaultMode,
    pub bound: usize,
}

/// `n` when `n = m + 2`, `n + 1` when `n >= m + 3`; Q_1 substructures
/// give 3 in Q_3 and `n + 1` from Q_4 on.
pub fn route_bound(n: u8, mode: FaultMode) -> Result<RouteBound> {
    let bound = match mode {
        FaultMode::Structure(m) | FaultMode::SubcubeFamily(m) => {
            if n < 2 || m + 2 > n {
                return Err(arg_err!("no routing bound for mode {mode} in Q_{n}"));
            }
            if n == m + 2 {
                n as usize
            } else {
                n as usize + 1
            }
        }
        FaultMode::Substructure => match n {
            0..=2 => return Err(arg_err!("no routing bound for substructure faults in Q_{n}")),
            3 => 3,
            _ => n as usize + 1,
        },
    };
    Ok(RouteBound { n, mode, bound })
}

#[inline]
fn covered(elems: &[Subcube], bits: u32) -> bool {
    elems.iter().any(|e| e.contains_bits(bits))
}

fn restrict(half: &Subcube, elems: &[Subcube]) -> Vec<Subcube> {
    elems.iter().filter_map(|e| half.intersection(e)).collect()
}

/// The half of `ctx` not covered by `big`, a faulty subcube of dimension
/// `ctx.dim() - 1`.
fn opposite_half(ctx: &Subcube, big: &Subcube) -> Subcube {
    let bit = ctx.free_mask() & !big.free_mask();
    ctx.fix_bit(bit, big.base() & bit == 0)
}

/// Length guarantee for any two survivors of `ctx - elems`; `elems` must
/// lie inside `ctx` and be pairwise disjoint.
pub(crate) fn guarantee(ctx: &Subcube, elems: &[Subcube]) -> Option<usize> {
    let k = ctx.dim() as usize;
    if elems.is_empty() {
        return Some(k);
    }
    if let Some(big) = elems.iter().find(|e| e.dim() as usize + 1 >= k) {
        if big.dim() as usize == k {
            return None;
        }
        let rest: Vec<Subcube> = elems.iter().filter(|e| *e != big).copied().collect();
        return guarantee(&opposite_half(ctx, big), &rest);
    }
    let c = elems.len();
    let m = elems.iter().map(|e| e.dim() as usize).max().unwrap_or(0);
    if c == 1 || c + m + 2 <= k {
        Some(k)
    } else if c + m + 1 == k {
        Some(k + 1)
    } else {
        None
    }
}

/// Smallest coordinate `j` with `(u)^j` and `(v)^j` both fault-free.
///
/// For a symmetric pair every fault subcube of dimension at most `n - 3`
/// blocks at most one of the `2n` candidates `(u)^j`, `(v)^j`, and only one
/// per coordinate pair, so `n - 1` faults always leave some `j` open.
pub fn pick_crossing_dimension(u: Vertex, v: Vertex, f: &FaultFamily) -> Result<u8> {
    validate_family(f).map_err(|e| arg_err!("{e}"))?;
    let n = f.ambient();
    if u.dim() != n || v.dim() != n {
        return Err(arg_err!("vertices and family live in different cubes"));
    }
    if u.bits() ^ v.bits() != full_mask(n) {
        return Err(arg_err!("{u} and {v} are not a symmetric pair"));
    }
    if let Some(e) = f.elements().iter().find(|e| e.dim() + 3 > n) {
        return Err(arg_err!("element {e} has dimension above n - 3 = {}", n as i32 - 3));
    }
    if f.len() + 1 > n as usize {
        return Err(arg_err!("{} faults exceed n - 1 = {}", f.len(), n - 1));
    }
    if f.covers(u) || f.covers(v) {
        return Err(arg_err!("endpoints must survive"));
    }
    let whole = Subcube::whole(n)?;
    crossing_bit(&whole, f.elements(), u.bits(), v.bits())
        .map(|bit| crate::cube::bit_coord(n, bit))
        .ok_or_else(|| {
            Error::Invariant(format!(
                "no fault-free crossing pair for {u}, {v} under {{{}}}",
                f.patterns().join(",")
            ))
        })
}

fn crossing_bit(ctx: &Subcube, elems: &[Subcube], u: u32, v: u32) -> Option<u32> {
    coord_bits(ctx.free_mask()).find(|&b| !covered(elems, u ^ b) && !covered(elems, v ^ b))
}

/// Tunables for [`Router`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RouterConfig {
    /// Subcubes of at most this dimension are routed by exact BFS.
    pub base_dim: u8,
}

impl Default for RouterConfig {
    fn default() -> Self {
        RouterConfig { base_dim: 4 }
    }
}

/// A routed path together with the bound it was checked against.
#[derive(Clone, Debug, Serialize)]
pub struct Route {
    pub path: Path,
    pub bound: usize,
    /// Recursion steps where no case plan met the guarantee and BFS on the
    /// current subcube was used instead.
    pub fallbacks: usize,
}

/// One way of assembling a path: fixed hops, then a recursive route inside
/// `half`, then more fixed hops.
struct Plan {
    lead: Vec<u32>,
    half: Subcube,
    from: u32,
    to: u32,
    tail: Vec<u32>,
    guarantee: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Router {
    config: RouterConfig,
}

impl Router {
    pub fn new(config: RouterConfig) -> Self {
        Router { config }
    }

    /// Routes from `u` to `v` in `Q_n - f`. The family must be valid and hold
    /// fewer elements than its mode's connectivity.
    pub fn route(&self, u: Vertex, v: Vertex, f: &FaultFamily) -> Result<Route> {
        validate_family(f).map_err(|e| arg_err!("{e}"))?;
        let n = f.ambient();
        if u.dim() != n || v.dim() != n {
            return Err(arg_err!("vertices and family live in different cubes"));
        }
        let kappa = f
            .mode()
            .kappa(n)
            .ok_or_else(|| arg_err!("mode {} has no connectivity in Q_{n}", f.mode()))?;
        if f.len() >= kappa {
            return Err(arg_err!("{} faults reach the connectivity {kappa} of mode {}", f.len(), f.mode()));
        }
        if f.covers(u) || f.covers(v) {
            return Err(arg_err!("endpoints must survive"));
        }
        let bound = route_bound(n, f.mode())?.bound;
        let mut fallbacks = 0;
        let whole = Subcube::whole(n)?;
        let labels = self.route_in(&whole, f.elements(), u.bits(), v.bits(), &mut fallbacks)?;
        let path = Path::from_labels(&labels, n).map_err(|e| Error::Invariant(e.to_string()))?;
        if let Some(bad) = path.vertices().iter().find(|&&x| f.covers(x)) {
            return Err(Error::Invariant(format!("route passes through faulty vertex {bad}")));
        }
        if path.start() != u || path.end() != v {
            return Err(Error::Invariant("route has wrong endpoints".into()));
        }
        if path.len() > bound {
            return Err(Error::Invariant(format!("route of length {} exceeds bound {bound}", path.len())));
        }
        Ok(Route { path, bound, fallbacks })
    }

    fn route_in(&self, ctx: &Subcube, elems: &[Subcube], u: u32, v: u32, fallbacks: &mut usize) -> Result<Vec<u32>> {
        if u == v {
            return Ok(vec![u]);
        }
        if elems.is_empty() {
            return Ok(hamming_walk(u, v));
        }
        let k = ctx.dim();
        if let Some(big) = elems.iter().find(|e| e.dim() + 1 == k) {
            let half = opposite_half(ctx, big);
            return self.route_in(&half, &restrict(&half, elems), u, v, fallbacks);
        }
        if k <= self.config.base_dim {
            return bfs_walk(ctx, elems, u, v);
        }
        let Some(target) = guarantee(ctx, elems) else {
            *fallbacks += 1;
            return bfs_walk(ctx, elems, u, v);
        };
        let best = self
            .plans(ctx, elems, u, v)?
            .into_iter()
            .filter(|p| p.guarantee <= target)
            .min_by_key(|p| p.guarantee);
        let Some(plan) = best else {
            *fallbacks += 1;
            let walk = bfs_walk(ctx, elems, u, v)?;
            if walk.len() - 1 > target {
                return Err(Error::Invariant(format!(
                    "shortest path of length {} in {ctx} exceeds guarantee {target}",
                    walk.len() - 1
                )));
            }
            return Ok(walk);
        };
        let inner = self.route_in(&plan.half, &restrict(&plan.half, elems), plan.from, plan.to, fallbacks)?;
        let mut out = plan.lead;
        out.extend(inner);
        out.extend(plan.tail);
        if out.len() - 1 > plan.guarantee {
            return Err(Error::Invariant(format!(
                "sub-route in {} overran its guarantee {}",
                plan.half, plan.guarantee
            )));
        }
        Ok(out)
    }

    /// Candidate plans for one split, in tie-break order.
    fn plans(&self, ctx: &Subcube, elems: &[Subcube], u: u32, v: u32) -> Result<Vec<Plan>> {
        let Some(bit) = split_bit(ctx, elems, u, v)? else {
            return Ok(Vec::new());
        };
        let own = ctx.fix_bit(bit, u & bit != 0);
        let other = ctx.fix_bit(bit, u & bit == 0);
        let own_elems = restrict(&own, elems);
        let other_elems = restrict(&other, elems);
        let alive = |x: u32| !covered(elems, x);
        let mut plans = Vec::new();
        let mut push = |lead: Vec<u32>, half: Subcube, from: u32, to: u32, tail: Vec<u32>, inner: Option<usize>| {
            if let Some(g) = inner {
                let guarantee = g + lead.len() + tail.len();
                plans.push(Plan { lead, half, from, to, tail, guarantee });
            }
        };
        let (u_x, v_x) = (u ^ bit, v ^ bit);
        let own_g = guarantee(&own, &own_elems);
        let other_g = guarantee(&other, &other_elems);
        if (u ^ v) & bit == 0 {
            push(vec![], own, u, v, vec![], own_g);
            if alive(u_x) && alive(v_x) {
                push(vec![u], other, u_x, v_x, vec![v], other_g);
            }
        } else {
            if alive(u_x) {
                push(vec![u], other, u_x, v, vec![], other_g);
            }
            if alive(v_x) {
                push(vec![], own, u, v_x, vec![v], own_g);
            }
            let side_bits = || coord_bits(ctx.free_mask() & !bit);
            if let Some(w) = side_bits().map(|b| u ^ b).find(|&w| alive(w) && alive(w ^ bit)) {
                push(vec![u, w], other, w ^ bit, v, vec![], other_g);
            }
            if let Some(w) = side_bits().map(|b| v ^ b).find(|&w| alive(w) && alive(w ^ bit)) {
                push(vec![], own, u, w ^ bit, vec![w, v], own_g);
            }
        }
        Ok(plans)
    }
}

/// Split coordinate for one recursion step: the first crossing pair
/// coordinate for symmetric endpoints, otherwise the first coordinate on
/// which the endpoints agree. Symmetric endpoints facing a single large
/// fault instead split along a coordinate the fault keeps fixed.
fn split_bit(ctx: &Subcube, elems: &[Subcube], u: u32, v: u32) -> Result<Option<u32>> {
    let k = ctx.dim() as usize;
    let free = ctx.free_mask();
    if (u ^ v) & free != free {
        return Ok(coord_bits(free & !(u ^ v)).next());
    }
    let m = elems.iter().map(|e| e.dim() as usize).max().unwrap_or(0);
    if m + 3 <= k && elems.len() < k {
        return crossing_bit(ctx, elems, u, v).map(Some).ok_or_else(|| {
            Error::Invariant(format!("no fault-free crossing pair inside {ctx}"))
        });
    }
    let fixed_by_all = elems.iter().fold(free, |acc, e| acc & !e.free_mask());
    Ok(coord_bits(fixed_by_all).next())
}

/// Flips the differing coordinates of `u` in ascending order.
fn hamming_walk(u: u32, v: u32) -> Vec<u32> {
    let mut out = vec![u];
    let mut x = u;
    for b in coord_bits(u ^ v) {
        x ^= b;
        out.push(x);
    }
    out
}

fn bfs_walk(ctx: &Subcube, elems: &[Subcube], u: u32, v: u32) -> Result<Vec<u32>> {
    let g = SurvivalGraph::within(*ctx, elems);
    let n = ctx.ambient();
    let path = g
        .shortest_path(Vertex::from_raw(u, n), Vertex::from_raw(v, n))?
        .ok_or_else(|| Error::Invariant(format!("no fault-free path inside {ctx}")))?;
    Ok(path.vertices().iter().map(|x| x.bits()).collect())
}

/// Routes with the default configuration and returns only the path.
pub fn guided_route(u: Vertex, v: Vertex, f: &FaultFamily) -> Result<Path> {
    Router::default().route(u, v, f).map(|r| r.path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fault::{adversarial_q1_family, adversarial_subcube_family, enumerate_families, sample_families};
    use crate::metrics::Diameter;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    #[test]
    fn bounds_table() {
        assert_eq!(route_bound(4, FaultMode::Structure(2)).unwrap().bound, 4);
        assert_eq!(route_bound(5, FaultMode::Structure(2)).unwrap().bound, 6);
        assert_eq!(route_bound(5, FaultMode::SubcubeFamily(1)).unwrap().bound, 6);
        assert_eq!(route_bound(3, FaultMode::Substructure).unwrap().bound, 3);
        assert_eq!(route_bound(6, FaultMode::Substructure).unwrap().bound, 7);
        assert!(route_bound(4, FaultMode::Structure(3)).is_err());
        assert!(route_bound(2, FaultMode::Substructure).is_err());
    }

    #[test]
    fn crossing_dimension_examples() {
        let empty = FaultFamily::empty(4, FaultMode::Structure(0));
        assert_eq!(pick_crossing_dimension(v("0000"), v("1111"), &empty).unwrap(), 1);
        let u = v("000000");
        let blockers = (1..=5).map(|i| Subcube::point(u.neighbor(i).unwrap())).collect();
        let f = FaultFamily::try_new(6, FaultMode::Structure(0), blockers).unwrap();
        assert_eq!(pick_crossing_dimension(u, v("111111"), &f).unwrap(), 6);
        assert!(pick_crossing_dimension(u, v("111110"), &f).is_err());
        let big = FaultFamily::try_new(4, FaultMode::Structure(2), vec!["01**".parse().unwrap()]).unwrap();
        assert!(pick_crossing_dimension(v("0000"), v("1111"), &big).is_err());
    }

    /// Soundness of `guarantee` against exact diameters of small subcube
    /// families, including elements up to dimension k - 1.
    #[test]
    fn guarantee_bounds_true_diameter() {
        for k in 2..=5u8 {
            let max_size = if k <= 4 { 3 } else { 2 };
            for m in 0..k {
                for size in 0..=max_size {
                    for f in enumerate_families(k, FaultMode::SubcubeFamily(m), size).unwrap() {
                        let ctx = Subcube::whole(k).unwrap();
                        if let Some(g) = guarantee(&ctx, f.elements()) {
                            let d = SurvivalGraph::new(&f).unwrap().diameter().unwrap();
                            match d {
                                Diameter::Finite(d) => assert!(d <= g, "{:?}: {d} > {g}", f.patterns()),
                                Diameter::Disconnected => panic!("{:?} disconnected, guarantee {g}", f.patterns()),
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fault_free_routes_are_geodesic() {
        let f = FaultFamily::empty(5, FaultMode::Structure(1));
        for a in 0..32 {
            for b in 0..32 {
                let (x, y) = (Vertex::new(a, 5).unwrap(), Vertex::new(b, 5).unwrap());
                let p = guided_route(x, y, &f).unwrap();
                assert_eq!(p.len() as u32, crate::cube::hamming(x, y).unwrap());
            }
        }
    }

    #[test]
    fn adversarial_examples() {
        let f = adversarial_q1_family(4).unwrap();
        assert_eq!(guided_route(v("0000"), v("1110"), &f).unwrap().len(), 5);
        let f = adversarial_subcube_family(5, 2).unwrap();
        assert_eq!(guided_route(v("00000"), v("11110"), &f).unwrap().len(), 6);
        let f = adversarial_q1_family(5).unwrap();
        assert_eq!(guided_route(v("00000"), v("11110"), &f).unwrap().len(), 6);
        for n in 6..=12 {
            let f = adversarial_q1_family(n).unwrap();
            let x = Vertex::zero(n).unwrap();
            let y = Vertex::new(full_mask(n) & !1, n).unwrap();
            let r = Router::default().route(x, y, &f).unwrap();
            assert_eq!(r.path.len(), n as usize + 1);
        }
    }

    #[test]
    fn single_q2_in_q4_all_pairs() {
        for f in enumerate_families(4, FaultMode::Structure(2), 1).unwrap() {
            let g = SurvivalGraph::new(&f).unwrap();
            for a in 0..16 {
                for b in 0..16 {
                    let (x, y) = (Vertex::new(a, 4).unwrap(), Vertex::new(b, 4).unwrap());
                    if g.is_survivor(x) && g.is_survivor(y) {
                        assert!(guided_route(x, y, &f).unwrap().len() <= 4);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_requests() {
        let f = adversarial_q1_family(4).unwrap();
        assert!(guided_route(v("0100"), v("1110"), &f).is_err());
        let over = FaultFamily::new(
            4,
            FaultMode::Structure(1),
            vec!["000*".parse().unwrap(), "011*".parse().unwrap(), "110*".parse().unwrap()],
        );
        assert!(guided_route(v("1111"), v("1010"), &over).is_err());
        assert!(guided_route(v("00000"), v("1110"), &f).is_err());
    }

    /// Small base dimension forces the case analysis to run on Q_3 and up.
    #[test]
    fn recursion_respects_bounds_with_small_base() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for base_dim in [1u8, 2, 3] {
            let router = Router::new(RouterConfig { base_dim });
            for n in 4..=7u8 {
                for mode in [FaultMode::Substructure, FaultMode::Structure(1), FaultMode::SubcubeFamily(n - 3)] {
                    let size = mode.kappa(n).unwrap() - 1;
                    for f in sample_families(n, mode, size, 150, rng.gen()).unwrap() {
                        let g = SurvivalGraph::new(&f).unwrap();
                        let pick = |rng: &mut ChaCha8Rng| loop {
                            let x = Vertex::new(rng.gen::<u32>() & full_mask(n), n).unwrap();
                            if g.is_survivor(x) {
                                break x;
                            }
                        };
                        let (x, y) = (pick(&mut rng), pick(&mut rng));
                        let r = router.route(x, y, &f).unwrap();
                        assert!(r.path.len() <= r.bound);
                        let y2 = x.complement();
                        if g.is_survivor(y2) {
                            let r = router.route(x, y2, &f).unwrap();
                            assert!(r.path.len() <= r.bound);
                        }
                    }
                }
            }
        }
    }
}
