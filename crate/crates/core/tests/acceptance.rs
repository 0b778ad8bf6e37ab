//! Acceptance criteria 1-7. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use cube_faultlab::cube::{hamming, Path};
use cube_faultlab::fault::{adversarial_q1_family, adversarial_subcube_family, enumerate_families, sample_families};
use cube_faultlab::oracle::{
    connectivity_bruteforce, fault_diameter_bruteforce, parse_claim_scope, verify_claims, ClaimStatus, Search,
};
use cube_faultlab::router::{pick_crossing_dimension, route_bound, Router, RouterConfig};
use cube_faultlab::{Diameter, FaultFamily, FaultMode, SurvivalGraph, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn expect_eq(what: &str, got: usize, want: usize) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, expected {want}"))
    }
}

fn exhaustive(n: u8, mode: FaultMode, budget: usize) -> Result<usize, String> {
    fault_diameter_bruteforce(n, mode, budget, Search::Exhaustive)
        .map(|r| r.value)
        .map_err(|e| format!("Q_{n} {mode}: {e}"))
}

fn criterion_1() -> Check {
    for (n, m) in [(3u8, 1u8), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3)] {
        for mode in [FaultMode::Structure(m), FaultMode::SubcubeFamily(m)] {
            let r = connectivity_bruteforce(n, mode).map_err(|e| e.to_string())?;
            expect_eq(&format!("kappa(Q_{n}, {mode})"), r.kappa, (n - m) as usize)?;
            if SurvivalGraph::new(&r.witness).and_then(|g| g.is_connected()).map_err(|e| e.to_string())? {
                return Err(format!("witness for Q_{n} {mode} does not disconnect"));
            }
        }
    }
    for n in 3..=5u8 {
        let r = connectivity_bruteforce(n, FaultMode::Substructure).map_err(|e| e.to_string())?;
        expect_eq(&format!("kappa^s(Q_{n}, Q_1)"), r.kappa, n as usize - 1)?;
    }
    Ok("structure, subcube and substructure connectivity match n-m and n-1".into())
}

fn criterion_2() -> Check {
    expect_eq("D^s_f(Q_3;Q_1)", exhaustive(3, FaultMode::Substructure, 1)?, 3)?;
    expect_eq("D_f(Q_4;Q_1)", exhaustive(4, FaultMode::Structure(1), 2)?, 5)?;
    expect_eq("D^s_f(Q_4;Q_1)", exhaustive(4, FaultMode::Substructure, 2)?, 5)?;
    expect_eq("D_f(Q_5;Q_1)", exhaustive(5, FaultMode::Structure(1), 3)?, 6)?;
    Ok("Q_1 fault diameters 3, 5, 5, 6".into())
}

fn criterion_3() -> Check {
    expect_eq("D_f(Q_4;Q_2)", exhaustive(4, FaultMode::Structure(2), 1)?, 4)?;
    expect_eq("D_f(Q_5;Q_3)", exhaustive(5, FaultMode::Structure(3), 1)?, 5)?;
    expect_eq("D_f(Q_5;Q_2)", exhaustive(5, FaultMode::Structure(2), 2)?, 6)?;
    expect_eq("D^sc_f(Q_4;Q_2)", exhaustive(4, FaultMode::SubcubeFamily(2), 1)?, 4)?;
    expect_eq("D^sc_f(Q_5;Q_2)", exhaustive(5, FaultMode::SubcubeFamily(2), 2)?, 6)?;
    Ok("Q_m fault diameters 4, 5, 6, 4, 6".into())
}

fn criterion_4() -> Check {
    for n in 4..=8u8 {
        let f = adversarial_q1_family(n).map_err(|e| e.to_string())?;
        let d = SurvivalGraph::new(&f).and_then(|g| g.diameter()).map_err(|e| e.to_string())?;
        if d != Diameter::Finite(n as usize + 1) {
            return Err(format!("diameter of Q_{n} minus the Q_1 family is {d:?}"));
        }
    }
    for (n, m) in [(4u8, 1u8), (5, 1), (5, 2), (6, 2), (6, 3)] {
        let f = adversarial_subcube_family(n, m).map_err(|e| e.to_string())?;
        let g = SurvivalGraph::new(&f).map_err(|e| e.to_string())?;
        let x = Vertex::zero(n).unwrap();
        let y = Vertex::new(((1u32 << n) - 1) & !1, n).unwrap();
        match g.bfs_distance(x, y).map_err(|e| e.to_string())? {
            Some(d) if d > n as usize => {}
            other => return Err(format!("Q_{n} m={m}: distance {other:?} below n+1")),
        }
    }
    Ok("adversarial families reach n+1".into())
}

/// Minimum diameter over connected `Q_n - S` with `|S| < 2^(n-1)`, from the
/// definition with queue BFS.
fn removal_min_diameter(n: u8) -> Result<usize, String> {
    let size = 1u32 << n;
    let mut best = usize::MAX;
    for mask in 0u32..1 << size {
        if mask.count_ones() >= size / 2 {
            continue;
        }
        let removed = (0..size).filter(|x| mask >> x & 1 == 1).map(|x| Vertex::new(x, n).unwrap());
        let g = SurvivalGraph::without_vertices(n, removed).map_err(|e| e.to_string())?;
        if let Diameter::Finite(d) = g.diameter().map_err(|e| e.to_string())? {
            best = best.min(d);
        }
    }
    Ok(best)
}

fn criterion_5() -> Check {
    for n in 3..=4u8 {
        expect_eq(&format!("D_f(Q_{n})"), exhaustive(n, FaultMode::Structure(0), n as usize - 1)?, n as usize + 1)?;
        for t in 0..=(n as usize - 2) {
            for f in enumerate_families(n, FaultMode::Structure(0), t).map_err(|e| e.to_string())? {
                let d = SurvivalGraph::new(&f).and_then(|g| g.diameter()).map_err(|e| e.to_string())?;
                if d != Diameter::Finite(n as usize) {
                    return Err(format!("Q_{n} minus {:?} has diameter {d:?}", f.patterns()));
                }
            }
        }
    }
    let d = removal_min_diameter(3)?;
    if d < 3 {
        return Err(format!("a connected Q_3 - S with |S| < 4 has diameter {d}"));
    }
    Ok("vertex-fault diameter n+1, few removals keep n, large removals keep >= n".into())
}

const ROUTER_CASES: usize = 10_000;

fn router_modes(n: u8) -> Vec<FaultMode> {
    let mut modes: Vec<FaultMode> = (0..=n - 2).map(FaultMode::Structure).collect();
    modes.extend((0..=n - 2).map(FaultMode::SubcubeFamily));
    modes.push(FaultMode::Substructure);
    modes
}

fn random_survivor(rng: &mut ChaCha8Rng, f: &FaultFamily) -> Vertex {
    let n = f.ambient();
    loop {
        let v = Vertex::new(rng.gen::<u32>() & ((1 << n) - 1), n).unwrap();
        if !f.covers(v) {
            return v;
        }
    }
}

struct SuiteStats {
    routes: usize,
    configs: usize,
    fallback_routes: usize,
    fallback_steps: usize,
}

fn router_suite(router: &Router) -> Result<SuiteStats, String> {
    let mut stats = SuiteStats { routes: 0, configs: 0, fallback_routes: 0, fallback_steps: 0 };
    let mut seed = 0u64;
    for n in 4..=6u8 {
        for mode in router_modes(n) {
            stats.configs += 1;
            seed += 1;
            let budget = mode.kappa(n).unwrap() - 1;
            let bound = route_bound(n, mode).map_err(|e| e.to_string())?.bound;
            let families = sample_families(n, mode, budget, ROUTER_CASES, seed).map_err(|e| e.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for (i, f) in families.iter().enumerate() {
                let g = SurvivalGraph::new(f).map_err(|e| e.to_string())?;
                let u = random_survivor(&mut rng, f);
                // every other case tries the symmetric partner first
                let v = if i % 2 == 0 && !f.covers(u.complement()) { u.complement() } else { random_survivor(&mut rng, f) };
                let ctx = || format!("Q_{n} {mode} {:?} {u}->{v}", f.patterns());
                let route = router.route(u, v, f).map_err(|e| format!("{}: {e}", ctx()))?;
                let path = Path::new(route.path.vertices().to_vec()).map_err(|e| e.to_string())?;
                if path.start() != u || path.end() != v || path.vertices().iter().any(|&x| f.covers(x)) {
                    return Err(format!("{}: invalid path", ctx()));
                }
                if path.len() > bound {
                    return Err(format!("{}: length {} above bound {bound}", ctx(), path.len()));
                }
                let d = g.bfs_distance(u, v).map_err(|e| e.to_string())?.ok_or_else(|| format!("{}: unreachable", ctx()))?;
                if path.len() < d || path.len() < hamming(u, v).unwrap() as usize {
                    return Err(format!("{}: length {} below distance {d}", ctx(), path.len()));
                }
                stats.routes += 1;
                stats.fallback_steps += route.fallbacks;
                stats.fallback_routes += (route.fallbacks > 0) as usize;
            }
        }
    }
    Ok(stats)
}

fn criterion_6() -> Check {
    let mut report = Vec::new();
    for base_dim in [RouterConfig::default().base_dim, 2] {
        let s = router_suite(&Router::new(RouterConfig { base_dim }))?;
        report.push(format!(
            "base dim {base_dim}: {} routes over {} configurations within bound, BFS fallback in {} routes ({:.3}%)",
            s.routes,
            s.configs,
            s.fallback_routes,
            100.0 * s.fallback_routes as f64 / s.routes as f64
        ));
    }
    Ok(report.join("; "))
}

fn criterion_7() -> Check {
    let scope = parse_claim_scope("lem2.5,cor2.6,lem3.1").map_err(|e| e.to_string())?;
    let records = verify_claims(&scope, Some(6)).map_err(|e| e.to_string())?;
    if let Some(r) = records.iter().find(|r| r.status != ClaimStatus::Pass) {
        return Err(format!("{} failed: {}", r.id, r.detail));
    }
    // crossing pairs in Q_6 for every element dimension up to 3 and every family size up to 5
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
    let mut checked = 0;
    while checked < 10_000 {
        let m = rng.gen_range(0..=3u8);
        let size = rng.gen_range(0..=5usize);
        let f = &sample_families(6, FaultMode::SubcubeFamily(m), size, 1, rng.gen()).map_err(|e| e.to_string())?[0];
        let u = random_survivor(&mut rng, f);
        if f.covers(u.complement()) {
            continue;
        }
        let j = pick_crossing_dimension(u, u.complement(), f).map_err(|e| format!("{:?} {u}: {e}", f.patterns()))?;
        let (a, b) = (u.neighbor(j).unwrap(), u.complement().neighbor(j).unwrap());
        if f.covers(a) || f.covers(b) {
            return Err(format!("crossing dimension {j} hits a fault in {:?}", f.patterns()));
        }
        checked += 1;
    }
    Ok(format!("{} claim instances and {checked} random Q_6 crossing pairs, zero violations", records.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("connectivity values", criterion_1),
        ("Q_1 fault diameters", criterion_2),
        ("Q_m fault diameters", criterion_3),
        ("adversarial tightness", criterion_4),
        ("classical baselines", criterion_5),
        ("router property suite", criterion_6),
        ("structural suite", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("PASS criterion {} ({name}, {secs:.1}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}, {secs:.1}s): {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
