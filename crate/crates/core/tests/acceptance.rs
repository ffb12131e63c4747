//! Acceptance suite. Runs without the libtest harness so that the criteria run
//! one after another in a single thread and the allocation counter used by
//! the scaling check sees only the solve it measures.

mod common;

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regular_games::solver_dp::{
    dp1_table, extract_regions, extract_regions_from_p1, partition_dp2, solve_cmuller_dp2,
};
use regular_games::solver_rec::{solve_cmuller_rec, solve_rec};
use regular_games::setfam::enumerate_downsets_counted;
use regular_games::transforms::{
    kl_to_muller, mcnaughton_to_cmuller, muller_to_cmuller, rabin_to_kl, to_muller,
};
use regular_games::{
    generate, recursion_bound, solve, Algorithm, BitTrie, Condition, GameType, GenSpec, Player,
    RegularGame, VertexSet,
};

use common::*;

struct Counting;

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            let now = CURRENT.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = System.realloc(ptr, layout, new_size);
        if !p.is_null() {
            if new_size >= layout.size() {
                let now = CURRENT.fetch_add(new_size - layout.size(), Ordering::Relaxed)
                    + new_size
                    - layout.size();
                PEAK.fetch_max(now, Ordering::Relaxed);
            } else {
                CURRENT.fetch_sub(layout.size() - new_size, Ordering::Relaxed);
            }
        }
        p
    }
}

#[global_allocator]
static ALLOC: Counting = Counting;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn label(g: &RegularGame) -> String {
    format!("{} n={}", g.game_type().name(), g.num_vertices())
}

fn regions(g: &RegularGame, a: Algorithm) -> Result<(VertexSet, VertexSet), String> {
    solve(g, a)
        .map(|(r, _)| (r.win0, r.win1))
        .map_err(|e| format!("{} {a}: {e}", label(g)))
}

/// Criterion 1: rec, dp1 and dp2 match the oracle on 500 games per type, n in 2..=6.
fn oracle_equivalence() -> Outcome {
    let mut games = 0;
    let mut split = 0;
    for ty in GameType::ALL {
        for g in corpus(ty, 2, 6, 500) {
            let want = regions(&g, Algorithm::Oracle)?;
            split += usize::from(!want.0.is_empty() && !want.1.is_empty());
            for a in [Algorithm::Rec, Algorithm::Dp1, Algorithm::Dp2] {
                let got = regions(&g, a)?;
                check(got == want, || {
                    format!("{} {a}: {got:?} but oracle says {want:?}", label(&g))
                })?;
            }
            games += 1;
        }
    }
    Ok(format!("{games} games ({split} with both regions non-empty), 3 solvers each, exact"))
}

/// Criterion 2: rec, dp1 and dp2 agree on 1000 games per type, n in 2..=10.
fn cross_solver() -> Outcome {
    let mut games = 0;
    for ty in GameType::ALL {
        for g in corpus(ty, 2, 10, 1000) {
            let rec = regions(&g, Algorithm::Rec)?;
            let dp1 = regions(&g, Algorithm::Dp1)?;
            let dp2 = regions(&g, Algorithm::Dp2)?;
            check(rec == dp1 && dp1 == dp2, || {
                format!("{}: rec {rec:?} dp1 {dp1:?} dp2 {dp2:?}", label(&g))
            })?;
            games += 1;
        }
    }
    Ok(format!("{games} games, pairwise exact"))
}

/// Criterion 3: Instrumented recursion counts never exceed the bound.
fn recursion_count() -> Outcome {
    let mut checked = 0;
    let mut worst = 0.0f64;
    for ty in GameType::ALL {
        for g in corpus(ty, 2, 10, 1000) {
            let n = g.num_vertices();
            let (_, stats) = solve_rec(&g).map_err(|e| e.to_string())?;
            let bound = match &g.condition {
                Condition::ColouredMuller { colouring, .. } => {
                    let used = colouring.colours_of(g.arena.vertices()).len();
                    recursion_bound(used, n)
                }
                Condition::McNaughton { .. } => {
                    let cm = mcnaughton_to_cmuller(&g).map_err(|e| e.to_string())?;
                    let Condition::ColouredMuller { colouring, .. } = &cm.condition else {
                        unreachable!()
                    };
                    recursion_bound(colouring.colours_of(g.arena.vertices()).len(), n)
                }
                _ => recursion_bound(n, n),
            };
            check(stats.recursive_calls <= bound, || {
                format!("{}: {} calls > bound {bound}", label(&g), stats.recursive_calls)
            })?;
            worst = worst.max(stats.recursive_calls as f64 / bound as f64);
            checked += 1;
        }
    }
    Ok(format!("{checked} games, zero violations, max calls/bound = {worst:.4}"))
}

/// Criterion 4: Downward closure equals brute force and stays within the visit bound.
fn enumeration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut max_ratio = 0.0f64;
    for n in 1..=12usize {
        for _ in 0..100 {
            let density: f64 = rng.gen_range(0.0..=1.0);
            let density = density * density;
            let members: Vec<u32> = (0..1u32 << n).filter(|_| rng.gen_bool(density)).collect();
            let family = BitTrie::from_masks(n, members.iter().copied()).unwrap();
            let (closed, visits) = enumerate_downsets_counted(&family);
            let want = brute_downsets(&members, n);
            check(closed.to_vec() == want, || {
                format!("n={n}: closure of {} sets differs from brute force", members.len())
            })?;
            let bound = 4 * (1u64 << n) * (n as u64 + 1);
            check(visits <= bound, || format!("n={n}: {visits} visits > {bound}"))?;
            max_ratio = max_ratio.max(visits as f64 / bound as f64);
        }
    }
    Ok(format!("1200 families, exact, max visits/bound = {max_ratio:.4}"))
}

fn agree_pointwise(a: &RegularGame, b: &RegularGame, what: &str) -> Result<(), String> {
    let n = a.num_vertices();
    for x in 1..1u32 << n {
        let x = VertexSet(x);
        let wa = a.winner_of_infset(x).map_err(|e| e.to_string())?;
        let wb = b.winner_of_infset(x).map_err(|e| e.to_string())?;
        check(wa == wb, || format!("{} {what}: X={x:?} {wa} vs {wb}", label(a)))?;
    }
    Ok(())
}

/// Criterion 5: Every transform preserves the winner of every infinity set.
fn transform_preservation() -> Outcome {
    let mut checks = 0;
    let err = |e: regular_games::transforms::TransformError| e.to_string();
    for ty in [GameType::Rabin, GameType::Streett, GameType::Kl, GameType::McNaughton] {
        for g in corpus(ty, 2, 10, 300) {
            match ty {
                GameType::Rabin => {
                    let kl = rabin_to_kl(&g).map_err(err)?;
                    agree_pointwise(&g, &kl, "rabin_to_kl")?;
                    let m = kl_to_muller(&kl).map_err(err)?;
                    agree_pointwise(&g, &m, "kl_to_muller")?;
                    agree_pointwise(&g, &muller_to_cmuller(&m).map_err(err)?, "muller_to_cmuller")?;
                    checks += 3;
                }
                GameType::Streett => {
                    let m = to_muller(&g).map_err(err)?;
                    agree_pointwise(&g, &m, "to_muller")?;
                    agree_pointwise(&g, &muller_to_cmuller(&m).map_err(err)?, "muller_to_cmuller")?;
                    checks += 2;
                }
                GameType::Kl => {
                    let m = kl_to_muller(&g).map_err(err)?;
                    agree_pointwise(&g, &m, "kl_to_muller")?;
                    agree_pointwise(&g, &muller_to_cmuller(&m).map_err(err)?, "muller_to_cmuller")?;
                    checks += 2;
                }
                _ => {
                    agree_pointwise(&g, &mcnaughton_to_cmuller(&g).map_err(err)?, "mcnaughton_to_cmuller")?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} transform applications, every non-empty subset, exact"))
}

/// Criterion 6: The partition matches per-subgame full-win status, and both extraction
/// routes agree with Algorithm 1.
fn trichotomy() -> Outcome {
    let mut masks = 0;
    let mut games = 0;
    let mut kinds = [0usize; 3];
    for g in corpus(GameType::ColouredMuller, 2, 8, 300) {
        let (part, _) = partition_dp2(&g).map_err(|e| e.to_string())?;
        let n = g.num_vertices();
        for m in 1..1u32 << n {
            let s = VertexSet(m);
            if !g.arena.is_subarena(s) {
                check(!part.contains(s), || format!("{}: non-subarena {s:?} classified", label(&g)))?;
                continue;
            }
            let (r, _) = solve_cmuller_rec(&g, s).map_err(|e| e.to_string())?;
            let want = if r.win0 == s {
                Some(Player::Zero)
            } else if r.win1 == s {
                Some(Player::One)
            } else {
                None
            };
            kinds[want.map_or(2, |p| p.index())] += 1;
            let got = part.full_winner(s);
            let in_q = part.q.contains(m);
            check(got == want && in_q == want.is_none(), || {
                format!("{}: mask {s:?} classified {got:?}, rec says {want:?}", label(&g))
            })?;
            masks += 1;
        }
        let (table, _) = dp1_table(&g).map_err(|e| e.to_string())?;
        let dp1 = table.get(g.arena.vertices()).ok_or("dp1 has no entry for V")?;
        let from_p0 = extract_regions(&g, &part).map_err(|e| e.to_string())?;
        let from_p1 = extract_regions_from_p1(&g, &part).map_err(|e| e.to_string())?;
        check(from_p0.win0 == dp1.win0, || format!("{}: P0 extraction differs from dp1", label(&g)))?;
        check(from_p1.win1 == dp1.win1, || format!("{}: P1 extraction differs from dp1", label(&g)))?;
        games += 1;
    }
    Ok(format!(
        "{games} games, {masks} subarena masks (P0 {}, P1 {}, Q {}), exact",
        kinds[0], kinds[1], kinds[2]
    ))
}

/// Criterion 7: dp2 on an 18-vertex Muller game with about 2^12 sets in F0.
fn scaling() -> Outcome {
    let n = 18;
    let spec = GenSpec {
        edge_density: 0.3,
        f0_density: 1.0 / 64.0,
        ..GenSpec::new(GameType::Muller, n, 2024)
    };
    let game = generate(&spec).map_err(|e| e.to_string())?;
    let Condition::Muller { f0 } = &game.condition else {
        unreachable!()
    };
    let f0_len = f0.len();
    check((2048..=8192).contains(&f0_len), || format!("|F0| = {f0_len} is not about 2^12"))?;
    let cm = muller_to_cmuller(&game).map_err(|e| e.to_string())?;

    let base = CURRENT.load(Ordering::SeqCst);
    PEAK.store(base, Ordering::SeqCst);
    let start = Instant::now();
    let (r, stats) = solve_cmuller_dp2(&cm).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let peak = PEAK.load(Ordering::SeqCst) - base;

    let budget = (1usize << n) * 64;
    check(r.win0.union(r.win1) == game.arena.vertices(), || "regions do not cover V".into())?;
    check(elapsed <= Duration::from_secs(120), || format!("took {elapsed:?} > 120 s"))?;
    check(peak <= budget, || format!("peak additional memory {peak} B > {budget} B"))?;
    Ok(format!(
        "n=18, |E|={}, |F0|={f0_len}, {:.2} s, peak +{:.1} MiB (budget {:.1} MiB), {} subarenas",
        game.arena.num_edges(),
        elapsed.as_secs_f64(),
        peak as f64 / (1 << 20) as f64,
        budget as f64 / (1 << 20) as f64,
        stats.table_entries
    ))
}

/// Criterion 8: Attractor and trap invariants on random arenas, targets and players.
fn attractor_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..1000 {
        let n = rng.gen_range(2..=12);
        let arena = random_arena(&mut rng, n);
        let all = arena.vertices();
        let p = if rng.gen_bool(0.5) { Player::Zero } else { Player::One };
        let t = VertexSet(rng.gen::<u32>() & all.bits());
        let bigger = t.union(VertexSet(rng.gen::<u32>() & all.bits()));
        let attr = arena.attractor(all, p, t).map_err(|e| e.to_string())?;
        let ctx = || format!("triple {i}: n={n} {p} T={t:?}");
        check(attr == naive_attractor(&arena, all, p, t), || format!("{}: differs from naive fixpoint", ctx()))?;
        check(t.is_subset(attr), || format!("{}: not extensive", ctx()))?;
        let attr_big = arena.attractor(all, p, bigger).map_err(|e| e.to_string())?;
        check(attr.is_subset(attr_big), || format!("{}: not monotone", ctx()))?;
        let again = arena.attractor(all, p, attr).map_err(|e| e.to_string())?;
        check(again == attr, || format!("{}: not idempotent", ctx()))?;
        let rest = all.difference(attr);
        check(naive_is_trap(&arena, all, rest, p), || format!("{}: complement is not a {p}-trap", ctx()))?;
        check(arena.is_trap(all, rest, p), || format!("{}: is_trap disagrees", ctx()))?;
        check(rest.is_empty() || naive_is_subarena(&arena, rest), || {
            format!("{}: complement does not induce a subarena", ctx())
        })?;
    }
    Ok("1000 triples, n <= 12, exact".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("cross-solver differential", cross_solver),
        ("recursion-count bound", recursion_count),
        ("downset enumeration", enumeration),
        ("transform preservation", transform_preservation),
        ("trichotomy consistency", trichotomy),
        ("scaling smoke test", scaling),
        ("attractor/trap properties", attractor_suite),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} [{secs:.1} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {detail} [{secs:.1} s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
