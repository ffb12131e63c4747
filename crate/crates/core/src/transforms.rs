//! Conversions between condition types that preserve the winner of every
//! infinity set.

use thiserror::Error;

use crate::arena::Arena;
use crate::conditions::{Colouring, Condition, ConditionError, GameType, KlPair, RegularGame};
use crate::mask::{ColorSet, VertexSet};
use crate::setfam::{enumerate_downsets_counted, BitTrie};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("cannot transform a {from} game into a {to} game")]
    Unsupported { from: &'static str, to: &'static str },
    #[error(transparent)]
    Condition(#[from] ConditionError),
}

fn unsupported(game: &RegularGame, to: GameType) -> TransformError {
    TransformError::Unsupported {
        from: game.game_type().name(),
        to: to.name(),
    }
}

/// Identity colouring; the `F0` family is reused as a colour-set family.
pub fn muller_to_cmuller(game: &RegularGame) -> Result<RegularGame, TransformError> {
    let Condition::Muller { f0 } = &game.condition else {
        return Err(unsupported(game, GameType::ColouredMuller));
    };
    let n = game.num_vertices();
    let condition = Condition::ColouredMuller {
        colouring: Colouring::identity(n),
        f0: f0.clone(),
    };
    Ok(RegularGame::new(game.arena.clone(), condition)?)
}

/// Vertices of `W` get colours `0..|W|` in ascending vertex order; everything
/// else shares the fresh colour `|W|`. A colour set is in `F0` iff its `W` part
/// is, regardless of the fresh colour.
pub fn mcnaughton_to_cmuller(game: &RegularGame) -> Result<RegularGame, TransformError> {
    let Condition::McNaughton { w, f0 } = &game.condition else {
        return Err(unsupported(game, GameType::ColouredMuller));
    };
    let n = game.num_vertices();
    let fresh = w.len();
    let mut colour_of = vec![fresh; n];
    for (c, v) in w.iter().enumerate() {
        colour_of[v] = c;
    }
    let colouring = Colouring::new(fresh + 1, colour_of)?;
    let mut family = BitTrie::new(fresh + 1);
    for m in f0.iter() {
        let cs = ColorSet::from_indices(VertexSet(m).iter().map(|v| colouring.colour_of(v)));
        family.insert(cs.bits()).expect("colour set fits");
        family.insert(cs.with(fresh).bits()).expect("colour set fits");
    }
    let condition = Condition::ColouredMuller {
        colouring,
        f0: family,
    };
    Ok(RegularGame::new(game.arena.clone(), condition)?)
}

/// Each Rabin pair `(U, V)` becomes the KL pairs `(u, V^c)` for `u ∈ U \ V`.
/// Repeated KL pairs are emitted once.
pub fn rabin_to_kl(game: &RegularGame) -> Result<RegularGame, TransformError> {
    let Condition::Rabin { pairs } = &game.condition else {
        return Err(unsupported(game, GameType::Kl));
    };
    let n = game.num_vertices();
    let all = VertexSet::full(n);
    let mut seen: Vec<BitTrie> = (0..n).map(|_| BitTrie::new(n)).collect();
    let mut out = Vec::new();
    for p in pairs {
        let y = p.u.difference(p.v);
        let z = all.difference(p.v);
        for u in y.iter() {
            if seen[u].insert(z.bits()).expect("mask fits") {
                out.push(KlPair { u, s: z });
            }
        }
    }
    debug_assert!(out.len() <= pairs.len() * n);
    Ok(RegularGame::new(
        game.arena.clone(),
        Condition::Kl { pairs: out },
    )?)
}

/// KL to Muller, also returning the trie node visits spent in the downward
/// closure enumerations.
pub fn kl_to_muller_counted(game: &RegularGame) -> Result<(RegularGame, u64), TransformError> {
    let Condition::Kl { pairs } = &game.condition else {
        return Err(unsupported(game, GameType::Muller));
    };
    let n = game.num_vertices();
    let mut families: Vec<BitTrie> = (0..n).map(|_| BitTrie::new(n)).collect();
    for p in pairs {
        families[p.u].insert(p.s.bits()).expect("mask fits");
    }
    let mut f0 = BitTrie::new(n);
    let mut visits = 0;
    for (u, family) in families.iter().enumerate() {
        if family.is_empty() {
            continue;
        }
        let (closed, v) = enumerate_downsets_counted(family);
        visits += v;
        let hit = closed.filter_bit_set(u).expect("u < n");
        f0 = f0.union(&hit).expect("same width");
    }
    let game = RegularGame::new(game.arena.clone(), Condition::Muller { f0 })?;
    Ok((game, visits))
}

/// `F0 = { X : some pair has u ∈ X ⊆ S }`.
pub fn kl_to_muller(game: &RegularGame) -> Result<RegularGame, TransformError> {
    kl_to_muller_counted(game).map(|(g, _)| g)
}

/// The dual of a Streett game: the Rabin game on the same pairs with the two
/// players' vertices exchanged. Player 0 of the dual plays Player 1's part, so
/// the returned flag says winners must be swapped after solving.
pub fn streett_as_dual_rabin(game: &RegularGame) -> Result<(RegularGame, bool), TransformError> {
    let Condition::Streett { pairs } = &game.condition else {
        return Err(unsupported(game, GameType::Rabin));
    };
    let owners = game.arena.owners().iter().map(|p| p.opponent()).collect();
    let edges: Vec<(usize, usize)> = game.arena.edges().collect();
    let arena = Arena::with_limit(owners, &edges, game.num_vertices())
        .expect("exchanging owners keeps the arena valid");
    let rabin = RegularGame::new(
        arena,
        Condition::Rabin {
            pairs: pairs.clone(),
        },
    )?;
    Ok((rabin, true))
}

/// Rabin reading of a Streett condition on the unchanged arena. It classifies
/// every infinity set the opposite way.
fn streett_pairs_as_rabin(game: &RegularGame) -> Result<RegularGame, TransformError> {
    let Condition::Streett { pairs } = &game.condition else {
        return Err(unsupported(game, GameType::Rabin));
    };
    Ok(RegularGame::new(
        game.arena.clone(),
        Condition::Rabin {
            pairs: pairs.clone(),
        },
    )?)
}

/// Muller form of a Muller, Rabin, Streett or KL game, with the node visits
/// spent enumerating downward closures.
pub fn to_muller_counted(game: &RegularGame) -> Result<(RegularGame, u64), TransformError> {
    match game.game_type() {
        GameType::Muller => Ok((game.clone(), 0)),
        GameType::Kl => kl_to_muller_counted(game),
        GameType::Rabin => kl_to_muller_counted(&rabin_to_kl(game)?),
        GameType::Streett => {
            let rabin = streett_pairs_as_rabin(game)?;
            let (muller, visits) = kl_to_muller_counted(&rabin_to_kl(&rabin)?)?;
            let Condition::Muller { f0 } = muller.condition else {
                unreachable!()
            };
            let flipped = RegularGame::new(
                muller.arena,
                Condition::Muller {
                    f0: f0.complement(),
                },
            )?;
            Ok((flipped, visits))
        }
        _ => Err(unsupported(game, GameType::Muller)),
    }
}

pub fn to_muller(game: &RegularGame) -> Result<RegularGame, TransformError> {
    to_muller_counted(game).map(|(g, _)| g)
}

/// Coloured Muller form of any game.
pub fn to_cmuller_counted(game: &RegularGame) -> Result<(RegularGame, u64), TransformError> {
    match game.game_type() {
        GameType::ColouredMuller => Ok((game.clone(), 0)),
        GameType::McNaughton => Ok((mcnaughton_to_cmuller(game)?, 0)),
        _ => {
            let (muller, visits) = to_muller_counted(game)?;
            Ok((muller_to_cmuller(&muller)?, visits))
        }
    }
}

pub fn to_cmuller(game: &RegularGame) -> Result<RegularGame, TransformError> {
    to_cmuller_counted(game).map(|(g, _)| g)
}
