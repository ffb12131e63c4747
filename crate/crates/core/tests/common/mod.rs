//! Brute-force references and the seeded corpus shared by integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regular_games::{generate, Arena, GameType, GenSpec, Player, RegularGame, VertexSet};

/// Attractor by the textbook iteration `W_{i+1} = W_i ∪ {v : ...}` until
/// nothing changes.
pub fn naive_attractor(arena: &Arena, scope: VertexSet, p: Player, target: VertexSet) -> VertexSet {
    let mut w = target.intersection(scope);
    loop {
        let mut next = w;
        for v in scope.difference(w).iter() {
            let succ: Vec<usize> = arena
                .successors(v)
                .iter()
                .copied()
                .filter(|&u| scope.contains(u))
                .collect();
            let joins = if arena.owner(v) == p {
                succ.iter().any(|&u| w.contains(u))
            } else {
                !succ.is_empty() && succ.iter().all(|&u| w.contains(u))
            };
            if joins {
                next = next.with(v);
            }
        }
        if next == w {
            return w;
        }
        w = next;
    }
}

/// `X` is a `p`-trap within `scope`: `p` cannot leave it, the opponent can
/// always stay.
pub fn naive_is_trap(arena: &Arena, scope: VertexSet, x: VertexSet, p: Player) -> bool {
    x.iter().all(|v| {
        let inside = |u: &usize| x.contains(*u);
        let succ: Vec<usize> = arena
            .successors(v)
            .iter()
            .copied()
            .filter(|&u| scope.contains(u))
            .collect();
        if arena.owner(v) == p {
            succ.iter().all(inside)
        } else {
            succ.iter().any(inside)
        }
    })
}

pub fn naive_is_subarena(arena: &Arena, x: VertexSet) -> bool {
    !x.is_empty()
        && x
            .iter()
            .all(|v| arena.successors(v).iter().any(|&u| x.contains(u)))
}

/// Downward closure by enumerating the submasks of every member.
pub fn brute_downsets(family: &[u32], n: usize) -> Vec<u32> {
    let mut hit = vec![false; 1 << n];
    for &s in family {
        if hit[s as usize] {
            continue;
        }
        let mut sub = s;
        loop {
            hit[sub as usize] = true;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & s;
        }
    }
    (0..1u32 << n).filter(|&x| hit[x as usize]).collect()
}

/// A random game whose generator knobs are themselves drawn from `seed`.
pub fn corpus_game(ty: GameType, n_lo: usize, n_hi: usize, seed: u64) -> RegularGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0000 ^ (ty as u64) << 40);
    let n = rng.gen_range(n_lo..=n_hi);
    let spec = GenSpec {
        game_type: ty,
        n,
        // sparse arenas dominate: they have more non-trivial splits
        edge_density: rng.gen_range(0.0f64..=1.0).powi(3).max(0.01),
        f0_density: rng.gen_range(0.05..=0.95),
        colors: Some(rng.gen_range(1..=n)),
        pairs: rng.gen_range(0..=6),
        seed: rng.gen(),
    };
    generate(&spec).expect("corpus spec is feasible")
}

pub fn corpus(ty: GameType, n_lo: usize, n_hi: usize, count: u64) -> impl Iterator<Item = RegularGame> {
    (0..count).map(move |s| corpus_game(ty, n_lo, n_hi, s))
}

/// Random arena with both owners present and no dead ends.
pub fn random_arena(rng: &mut ChaCha8Rng, n: usize) -> Arena {
    let spec = GenSpec {
        edge_density: rng.gen_range(0.05..=1.0),
        ..GenSpec::new(GameType::Muller, n, rng.gen())
    };
    generate(&spec).unwrap().arena
}
