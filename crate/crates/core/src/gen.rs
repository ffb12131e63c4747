//! Seeded random games.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arena::{Arena, Player};
use crate::conditions::{Colouring, Condition, GameType, KlPair, RabinPair, RegularGame};
use crate::mask::{VertexSet, MASK_BITS};
use crate::setfam::BitTrie;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub game_type: GameType,
    pub n: usize,
    /// Probability of each extra cross-owner edge, in `(0, 1]`.
    pub edge_density: f64,
    /// Probability of each candidate set joining `F0`.
    pub f0_density: f64,
    /// Colour count for coloured Muller games; random in `1..=n` when unset.
    pub colors: Option<usize>,
    /// Pair count for Rabin, Streett and KL games.
    pub pairs: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(game_type: GameType, n: usize, seed: u64) -> GenSpec {
        GenSpec {
            game_type,
            n,
            edge_density: 0.3,
            f0_density: 0.5,
            colors: None,
            pairs: 3,
            seed,
        }
    }

    fn check(&self) -> Result<(), GenError> {
        let bad = |m: String| Err(GenError::InfeasibleSpec(m));
        if self.n < 2 {
            return bad(format!("n = {} leaves one player without vertices", self.n));
        }
        if self.n > crate::io::DEFAULT_VERTEX_LIMIT {
            return bad(format!(
                "n = {} is above the vertex limit {}",
                self.n,
                crate::io::DEFAULT_VERTEX_LIMIT
            ));
        }
        if !(self.edge_density > 0.0 && self.edge_density <= 1.0) {
            return bad(format!("edge density {} is outside (0, 1]", self.edge_density));
        }
        if !(0.0..=1.0).contains(&self.f0_density) {
            return bad(format!("F0 density {} is outside [0, 1]", self.f0_density));
        }
        if let Some(k) = self.colors {
            if k == 0 || k > MASK_BITS.min(24) {
                return bad(format!("colour count {k} is outside 1..=24"));
            }
        }
        Ok(())
    }
}

fn random_set(rng: &mut ChaCha8Rng, n: usize, p: f64) -> VertexSet {
    VertexSet::from_indices((0..n).filter(|_| rng.gen_bool(p)))
}

fn random_family(rng: &mut ChaCha8Rng, width: usize, p: f64, candidates: impl Iterator<Item = u32>) -> BitTrie {
    let mut f0 = BitTrie::new(width);
    for m in candidates {
        if rng.gen_bool(p) {
            f0.insert(m).expect("candidate fits");
        }
    }
    f0
}

/// Builds a random game. The same spec always gives the same game.
///
/// Owners are uniform with both players forced to appear. Every vertex first
/// gets one uniformly chosen successor of the other owner, then every further
/// cross-owner edge is added with probability `edge_density`.
pub fn generate(spec: &GenSpec) -> Result<RegularGame, GenError> {
    spec.check()?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut owners: Vec<Player> = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Player::One } else { Player::Zero })
        .collect();
    if owners.iter().all(|&p| p == owners[0]) {
        let v = rng.gen_range(0..n);
        owners[v] = owners[v].opponent();
    }
    let mut edges = Vec::new();
    for u in 0..n {
        let others: Vec<usize> = (0..n).filter(|&w| owners[w] != owners[u]).collect();
        let first = *others.choose(&mut rng).expect("both owners present");
        edges.push((u, first));
        for w in others {
            if w != first && rng.gen_bool(spec.edge_density) {
                edges.push((u, w));
            }
        }
    }
    let arena = Arena::new(owners, &edges).expect("generated arena is valid");

    let full = 1u32.checked_shl(n as u32).unwrap_or(0).wrapping_sub(1);
    let condition = match spec.game_type {
        GameType::ColouredMuller => {
            let k = spec.colors.unwrap_or_else(|| rng.gen_range(1..=n));
            let colour_of = (0..n).map(|_| rng.gen_range(0..k)).collect();
            let colouring = Colouring::new(k, colour_of).expect("colours in range");
            let f0 = random_family(&mut rng, k, spec.f0_density, 1..1u32 << k);
            Condition::ColouredMuller { colouring, f0 }
        }
        GameType::Muller => Condition::Muller {
            f0: random_family(&mut rng, n, spec.f0_density, 1..=full),
        },
        GameType::McNaughton => {
            let w = random_set(&mut rng, n, 0.5);
            // every subset of W, the empty one included
            let subsets = (0..1u32 << w.len()).map(|i| {
                VertexSet::from_indices(w.iter().enumerate().filter(|(j, _)| i >> j & 1 == 1).map(|(_, v)| v)).bits()
            });
            let subsets: Vec<u32> = subsets.collect();
            let f0 = random_family(&mut rng, n, spec.f0_density, subsets.into_iter());
            Condition::McNaughton { w, f0 }
        }
        GameType::Rabin | GameType::Streett => {
            let pairs = (0..spec.pairs)
                .map(|_| RabinPair {
                    u: random_set(&mut rng, n, 0.3),
                    v: random_set(&mut rng, n, 0.3),
                })
                .collect();
            if spec.game_type == GameType::Rabin {
                Condition::Rabin { pairs }
            } else {
                Condition::Streett { pairs }
            }
        }
        GameType::Kl => {
            let pairs = (0..spec.pairs)
                .map(|_| {
                    let u = rng.gen_range(0..n);
                    KlPair {
                        u,
                        s: random_set(&mut rng, n, 0.5).with(u),
                    }
                })
                .collect();
            Condition::Kl { pairs }
        }
    };
    Ok(RegularGame::new(arena, condition).expect("generated condition is valid"))
}
