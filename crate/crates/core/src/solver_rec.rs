//! Recursive solvers.
//!
//! One engine serves every condition type. At a scope `V'` the engine finds the
//! player `σ` who wins plays visiting all of `V'` infinitely often, then walks
//! a list of targets (colour classes for coloured Muller games, single vertices
//! otherwise). For each target it solves the subgame outside `σ`'s attractor of
//! the target. If `σ` fails to win that subgame everywhere, the opponent's
//! winning part is attracted and the rest is solved recursively; `σ`'s region
//! there is `σ`'s region of the whole scope. If every target passes, `σ` wins
//! all of `V'`.

use thiserror::Error;

use crate::arena::{Arena, AttractorScratch, Player, VertexSet};
use crate::conditions::{ColorSet, Colouring, Condition, GameType, RegularGame};
use crate::setfam::BitTrie;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("this solver does not accept {0} games")]
    UnsupportedType(&'static str),
    #[error("scope does not induce a subarena")]
    ScopeNotSubarena,
    #[error("internal consistency check failed: {0}")]
    Inconsistent(&'static str),
}

/// Winning regions of a (sub)game.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SolveResult {
    pub win0: VertexSet,
    pub win1: VertexSet,
}

impl SolveResult {
    /// `player` wins `region`; the opponent wins the rest of `scope`.
    pub fn won_by(player: Player, region: VertexSet, scope: VertexSet) -> SolveResult {
        let other = scope.difference(region);
        match player {
            Player::Zero => SolveResult {
                win0: region,
                win1: other,
            },
            Player::One => SolveResult {
                win0: other,
                win1: region,
            },
        }
    }

    #[inline]
    pub fn region(&self, player: Player) -> VertexSet {
        match player {
            Player::Zero => self.win0,
            Player::One => self.win1,
        }
    }

    pub fn swapped(self) -> SolveResult {
        SolveResult {
            win0: self.win1,
            win1: self.win0,
        }
    }

    pub fn scope(&self) -> VertexSet {
        self.win0.union(self.win1)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RecStats {
    /// Calls on non-empty scopes, the top-level call included.
    pub recursive_calls: u64,
    pub max_depth: u32,
    pub attractor_visits: u64,
}

/// `|C|! * C(n, |C|) * n + 1`, the ceiling on `recursive_calls` for a game
/// with `n` vertices and `colours` colours in use. Saturates at `u64::MAX`.
pub fn recursion_bound(colours: usize, n: usize) -> u64 {
    if colours > n {
        return 1;
    }
    // |C|! * C(n,|C|) = n! / (n-|C|)!
    let mut falling: u64 = 1;
    for i in 0..colours {
        falling = falling.saturating_mul((n - i) as u64);
    }
    falling.saturating_mul(n as u64).saturating_add(1)
}

enum Targets<'g> {
    Colours { colouring: &'g Colouring, f0: &'g BitTrie },
    Vertices { condition: &'g Condition },
}

impl Targets<'_> {
    fn sigma(&self, scope: VertexSet) -> Player {
        match self {
            Targets::Colours { colouring, f0 } => {
                if f0.contains(colouring.colours_of(scope).bits()) {
                    Player::Zero
                } else {
                    Player::One
                }
            }
            Targets::Vertices { condition } => condition.winner(scope),
        }
    }

    fn collect(&self, scope: VertexSet, out: &mut Vec<VertexSet>) {
        out.clear();
        match self {
            Targets::Colours { colouring, .. } => {
                let used: ColorSet = colouring.colours_of(scope);
                out.extend(used.iter().map(|c| colouring.class(c).intersection(scope)));
            }
            Targets::Vertices { .. } => out.extend(scope.iter().map(VertexSet::singleton)),
        }
    }
}

struct Engine<'g> {
    arena: &'g Arena,
    targets: Targets<'g>,
    scratch: AttractorScratch,
    stats: RecStats,
}

impl Engine<'_> {
    fn attr(&mut self, scope: VertexSet, p: Player, t: VertexSet) -> VertexSet {
        self.arena.attractor_with(&mut self.scratch, scope, p, t)
    }

    fn solve(&mut self, scope: VertexSet, depth: u32) -> SolveResult {
        if scope.is_empty() {
            return SolveResult::default();
        }
        debug_assert!(self.arena.is_subarena(scope));
        self.stats.recursive_calls += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);

        let sigma = self.targets.sigma(scope);
        let opp = sigma.opponent();
        let mut list = Vec::new();
        self.targets.collect(scope, &mut list);
        for target in list {
            let rest = scope.difference(self.attr(scope, sigma, target));
            let sub = self.solve(rest, depth + 1);
            if sub.region(sigma) != rest {
                let x = self.attr(scope, opp, sub.region(opp));
                let remaining = scope.difference(x);
                let inner = self.solve(remaining, depth + 1);
                let result = SolveResult::won_by(sigma, inner.region(sigma), scope);
                debug_assert_eq!(result.win0.intersection(result.win1), VertexSet::EMPTY);
                return result;
            }
        }
        SolveResult::won_by(sigma, scope, scope)
    }
}

fn run(
    arena: &Arena,
    targets: Targets<'_>,
    scope: VertexSet,
) -> Result<(SolveResult, RecStats), SolveError> {
    if !scope.is_empty() && !(scope.fits(arena.num_vertices()) && arena.is_subarena(scope)) {
        return Err(SolveError::ScopeNotSubarena);
    }
    let mut engine = Engine {
        arena,
        targets,
        scratch: AttractorScratch::new(arena.num_vertices()),
        stats: RecStats::default(),
    };
    let result = engine.solve(scope, 0);
    if result.scope() != scope || result.win0.intersects(result.win1) {
        return Err(SolveError::Inconsistent("regions do not partition the scope"));
    }
    engine.stats.attractor_visits = engine.scratch.visits;
    Ok((result, engine.stats))
}

/// Solves a coloured Muller game restricted to `scope` by recursing on colours.
pub fn solve_cmuller_rec(
    game: &RegularGame,
    scope: VertexSet,
) -> Result<(SolveResult, RecStats), SolveError> {
    match &game.condition {
        Condition::ColouredMuller { colouring, f0 } => {
            run(&game.arena, Targets::Colours { colouring, f0 }, scope)
        }
        other => Err(SolveError::UnsupportedType(other.game_type().name())),
    }
}

/// Solves any game restricted to `scope` by recursing on single vertices, with
/// `σ` taken from the condition's classifier on the current scope.
///
/// Intended for Muller, Rabin, Streett and KL games; coloured Muller and
/// McNaughton games are accepted too since the vertex recursion only needs
/// the classifier.
pub fn solve_regular_rec(
    game: &RegularGame,
    scope: VertexSet,
) -> Result<(SolveResult, RecStats), SolveError> {
    run(
        &game.arena,
        Targets::Vertices {
            condition: &game.condition,
        },
        scope,
    )
}

/// Whole-game recursive solve: colour recursion for coloured Muller games
/// (McNaughton games are first recoloured), vertex recursion otherwise.
pub fn solve_rec(game: &RegularGame) -> Result<(SolveResult, RecStats), SolveError> {
    let all = game.arena.vertices();
    match game.game_type() {
        GameType::ColouredMuller => solve_cmuller_rec(game, all),
        GameType::McNaughton => {
            let reduced = crate::transforms::mcnaughton_to_cmuller(game)
                .map_err(|_| SolveError::Inconsistent("McNaughton reduction failed"))?;
            solve_cmuller_rec(&reduced, all)
        }
        _ => solve_regular_rec(game, all),
    }
}
