//! Property tests across modules.

use cube_faultlab::cube::hamming;
use cube_faultlab::fault::{classify_along, parse_family_file, render_family_file, sample_families};
use cube_faultlab::metrics::BitCube;
use cube_faultlab::router::{route_bound, Router};
use cube_faultlab::{FaultFamily, FaultMode, SurvivalGraph, Vertex};
use proptest::prelude::*;

fn mode_strategy(n: u8) -> impl Strategy<Value = FaultMode> {
    prop_oneof![
        (0..=n - 2).prop_map(FaultMode::Structure),
        (0..=n - 2).prop_map(FaultMode::SubcubeFamily),
        Just(FaultMode::Substructure),
    ]
}

/// A valid family of at most `kappa - 1` elements.
fn family_strategy(max_n: u8) -> impl Strategy<Value = FaultFamily> {
    (4..=max_n)
        .prop_flat_map(|n| (Just(n), mode_strategy(n), any::<u64>()))
        .prop_flat_map(|(n, mode, seed)| {
            let kappa = mode.kappa(n).unwrap();
            (Just(n), Just(mode), 0..kappa, Just(seed))
        })
        .prop_map(|(n, mode, size, seed)| sample_families(n, mode, size, 1, seed).unwrap().remove(0))
}

fn survivor(f: &FaultFamily, raw: u32) -> Option<Vertex> {
    let n = f.ambient();
    (0..1u32 << n).map(|k| (raw.wrapping_add(k)) & ((1 << n) - 1)).map(|b| Vertex::new(b, n).unwrap()).find(|v| !f.covers(*v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_is_a_metric(f in family_strategy(7), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let g = SurvivalGraph::new(&f).unwrap();
        let (x, y, z) = (survivor(&f, a).unwrap(), survivor(&f, b).unwrap(), survivor(&f, c).unwrap());
        let d = |p, q| g.bfs_distance(p, q).unwrap().expect("budget families keep Q_n connected");
        prop_assert_eq!(d(x, y), d(y, x));
        prop_assert!(d(x, z) <= d(x, y) + d(y, z));
        prop_assert!(d(x, y) >= hamming(x, y).unwrap() as usize);
    }

    #[test]
    fn bitcube_matches_queue_bfs(f in family_strategy(7)) {
        let cube = BitCube::new(f.ambient()).unwrap();
        let dead = f.elements().iter().fold(0u128, |acc, e| acc | cube.subcube_set(e));
        let g = SurvivalGraph::new(&f).unwrap();
        prop_assert_eq!(cube.diameter(cube.full() & !dead), g.diameter().unwrap());
    }

    #[test]
    fn family_file_round_trip(f in family_strategy(9)) {
        let text = render_family_file(&f);
        prop_assert_eq!(parse_family_file(&text).unwrap(), f);
    }

    #[test]
    fn split_classification_partitions(f in family_strategy(8), d in 1u8..=8) {
        let d = d.min(f.ambient());
        let c = classify_along(&f, d).unwrap();
        prop_assert_eq!(c.in_zero.len() + c.in_one.len() + c.straddling.len(), f.len());
        for s in &c.straddling {
            prop_assert!(s.is_free(d).unwrap());
        }
    }

    #[test]
    fn routes_stay_within_bound(f in family_strategy(10), a in any::<u32>(), b in any::<u32>(), flip in any::<bool>()) {
        let u = survivor(&f, a).unwrap();
        let v = if flip && !f.covers(u.complement()) { u.complement() } else { survivor(&f, b).unwrap() };
        let r = Router::default().route(u, v, &f).unwrap();
        prop_assert!(r.path.len() <= route_bound(f.ambient(), f.mode()).unwrap().bound);
        prop_assert!(r.path.vertices().iter().all(|x| !f.covers(*x)));
        prop_assert_eq!((r.path.start(), r.path.end()), (u, v));
        let d = SurvivalGraph::new(&f).unwrap().bfs_distance(u, v).unwrap().unwrap();
        prop_assert!(r.path.len() >= d);
    }
}
