//! Dynamic programming over all vertex subsets.
//!
//! Both algorithms visit masks `1 .. 2^n` in increasing order and skip masks
//! that do not induce a subarena. Every subgame they consult is a proper
//! subset of the current mask and therefore already decided.
//!
//! * Algorithm 1 records the winning regions of every subgame in a dense
//!   table.
//! * Algorithm 2 only records which player, if any, wins the subgame from
//!   every vertex, and recovers the regions of the full game from the
//!   fully-won 1-traps.

use crate::arena::{Arena, AttractorScratch, Player, VertexSet};
use crate::conditions::{Colouring, Condition, GameType, RegularGame};
use crate::setfam::BitTrie;
use crate::solver_rec::{SolveError, SolveResult};
use crate::transforms;

const UNDEFINED: u32 = u32::MAX;

/// Instrumentation shared by the DP solvers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DpStats {
    /// Subarena masks decided.
    pub table_entries: u64,
    /// Table or partition lookups of smaller subgames.
    pub lookups: u64,
    pub attractor_visits: u64,
    /// Node visits spent transforming the condition beforehand.
    pub transform_visits: u64,
    /// Bytes held by the table or partition tries at the end of the run.
    pub table_bytes: u64,
}

/// `Win_0` of every subarena-inducing mask; `Win_1` is the complement within
/// the mask.
#[derive(Debug, Clone)]
pub struct RegionTable {
    win0: Vec<u32>,
}

impl RegionTable {
    pub fn get(&self, mask: VertexSet) -> Option<SolveResult> {
        let w0 = *self.win0.get(mask.bits() as usize)?;
        (w0 != UNDEFINED).then(|| SolveResult {
            win0: VertexSet(w0),
            win1: mask.difference(VertexSet(w0)),
        })
    }

    /// Number of masks with an entry.
    pub fn len(&self) -> usize {
        self.win0.iter().filter(|&&w| w != UNDEFINED).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    fn region(&self, mask: VertexSet, player: Player, current: u32) -> Result<VertexSet, SolveError> {
        if mask.is_empty() {
            return Ok(VertexSet::EMPTY);
        }
        if mask.bits() >= current {
            return Err(SolveError::Inconsistent("lookup of an undecided mask"));
        }
        let w0 = self.win0[mask.bits() as usize];
        if w0 == UNDEFINED {
            return Err(SolveError::Inconsistent("lookup of a non-subarena mask"));
        }
        Ok(match player {
            Player::Zero => VertexSet(w0),
            Player::One => mask.difference(VertexSet(w0)),
        })
    }
}

fn cmuller_parts(game: &RegularGame) -> Result<(&Colouring, &BitTrie), SolveError> {
    match &game.condition {
        Condition::ColouredMuller { colouring, f0 } => Ok((colouring, f0)),
        other => Err(SolveError::UnsupportedType(other.game_type().name())),
    }
}

#[inline]
fn sigma_of(colouring: &Colouring, f0: &BitTrie, s: VertexSet) -> Player {
    if f0.contains(colouring.colours_of(s).bits()) {
        Player::Zero
    } else {
        Player::One
    }
}

/// Algorithm 1: fills the region table for a coloured Muller game.
pub fn dp1_table(game: &RegularGame) -> Result<(RegionTable, DpStats), SolveError> {
    let (colouring, f0) = cmuller_parts(game)?;
    let arena = &game.arena;
    let n = arena.num_vertices();
    let mut table = RegionTable {
        win0: vec![UNDEFINED; 1usize << n],
    };
    let mut stats = DpStats::default();
    let mut scratch = AttractorScratch::new(n);
    for i in 1..(1u32 << n) {
        let s = VertexSet(i);
        if !arena.is_subarena(s) {
            continue;
        }
        let sigma = sigma_of(colouring, f0, s);
        let opp = sigma.opponent();
        let mut region = s;
        for c in colouring.colours_of(s).iter() {
            let target = colouring.class(c).intersection(s);
            let attr = arena.attractor_with(&mut scratch, s, sigma, target);
            if attr == s {
                continue;
            }
            let rest = s.difference(attr);
            stats.lookups += 1;
            let sub_sigma = table.region(rest, sigma, i)?;
            if sub_sigma != rest {
                let x = arena.attractor_with(&mut scratch, s, opp, rest.difference(sub_sigma));
                stats.lookups += 1;
                region = table.region(s.difference(x), sigma, i)?;
                break;
            }
        }
        let win0 = match sigma {
            Player::Zero => region,
            Player::One => s.difference(region),
        };
        table.win0[i as usize] = win0.bits();
        stats.table_entries += 1;
    }
    stats.attractor_visits = scratch.visits;
    stats.table_bytes = (table.win0.len() * std::mem::size_of::<u32>()) as u64;
    Ok((table, stats))
}

/// Algorithm 1 for a coloured Muller game.
pub fn solve_cmuller_dp1(game: &RegularGame) -> Result<SolveResult, SolveError> {
    let (table, _) = dp1_table(game)?;
    table
        .get(game.arena.vertices())
        .ok_or(SolveError::Inconsistent("full vertex set has no entry"))
}

/// Subarena masks split by which player, if any, wins the subgame from every
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub p0: BitTrie,
    pub p1: BitTrie,
    pub q: BitTrie,
}

impl Partition {
    pub fn fully_won_by(&self, player: Player) -> &BitTrie {
        match player {
            Player::Zero => &self.p0,
            Player::One => &self.p1,
        }
    }

    /// The player who fully wins `G(mask)`, if the mask was classified and one
    /// does.
    pub fn full_winner(&self, mask: VertexSet) -> Option<Player> {
        if self.p0.contains(mask.bits()) {
            Some(Player::Zero)
        } else if self.p1.contains(mask.bits()) {
            Some(Player::One)
        } else {
            None
        }
    }

    pub fn contains(&self, mask: VertexSet) -> bool {
        self.p0.contains(mask.bits()) || self.p1.contains(mask.bits()) || self.q.contains(mask.bits())
    }

    fn bytes(&self) -> u64 {
        ((self.p0.node_count() + self.p1.node_count() + self.q.node_count()) * 8) as u64
    }
}

/// Checks that for every target `t`, `player` either attracts all of `s` to
/// `t` or fully wins the subgame outside that attractor.
fn all_attr(
    arena: &Arena,
    scratch: &mut AttractorScratch,
    fully_won: &BitTrie,
    s: VertexSet,
    player: Player,
    targets: impl Iterator<Item = VertexSet>,
    stats: &mut DpStats,
) -> bool {
    for t in targets {
        let attr = arena.attractor_with(scratch, s, player, t);
        if attr == s {
            continue;
        }
        let rest = s.difference(attr);
        debug_assert!(rest.bits() < s.bits());
        stats.lookups += 1;
        if !fully_won.contains(rest.bits()) {
            return false;
        }
    }
    true
}

/// Algorithm 2: classifies every subarena mask into `P0`, `P1` or `Q`.
pub fn partition_dp2(game: &RegularGame) -> Result<(Partition, DpStats), SolveError> {
    let (colouring, f0) = cmuller_parts(game)?;
    let arena = &game.arena;
    let n = arena.num_vertices();
    let mut part = Partition {
        p0: BitTrie::new(n),
        p1: BitTrie::new(n),
        q: BitTrie::new(n),
    };
    let mut stats = DpStats::default();
    let mut scratch = AttractorScratch::new(n);
    for i in 1..(1u32 << n) {
        let s = VertexSet(i);
        if !arena.is_subarena(s) {
            continue;
        }
        let sigma = sigma_of(colouring, f0, s);
        let opp = sigma.opponent();
        let colour_targets = colouring
            .colours_of(s)
            .iter()
            .map(|c| colouring.class(c).intersection(s));
        let slot = if all_attr(
            arena,
            &mut scratch,
            part.fully_won_by(sigma),
            s,
            sigma,
            colour_targets,
            &mut stats,
        ) {
            Some(sigma)
        } else if all_attr(
            arena,
            &mut scratch,
            part.fully_won_by(opp),
            s,
            opp,
            s.iter().map(VertexSet::singleton),
            &mut stats,
        ) {
            Some(opp)
        } else {
            None
        };
        let trie = match slot {
            Some(Player::Zero) => &mut part.p0,
            Some(Player::One) => &mut part.p1,
            None => &mut part.q,
        };
        trie.insert(i).expect("mask fits");
        stats.table_entries += 1;
    }
    stats.attractor_visits = scratch.visits;
    stats.table_bytes = part.bytes();
    Ok((part, stats))
}

/// Union of the members of `fully_won` that are `trapped`-traps of the whole
/// arena; that union is itself such a member, or empty.
fn union_of_traps(
    arena: &Arena,
    fully_won: &BitTrie,
    trapped: Player,
) -> Result<VertexSet, SolveError> {
    let all = arena.vertices();
    let mut acc = VertexSet::EMPTY;
    for m in fully_won.iter() {
        let s = VertexSet(m);
        if arena.is_trap(all, s, trapped) {
            acc = acc.union(s);
        }
    }
    if !acc.is_empty() && !fully_won.contains(acc.bits()) {
        return Err(SolveError::Inconsistent(
            "union of fully won traps is not fully won",
        ));
    }
    Ok(acc)
}

/// `Win_0` is the largest 1-trap in `P0` (empty if there is none).
pub fn extract_regions(game: &RegularGame, part: &Partition) -> Result<SolveResult, SolveError> {
    let all = game.arena.vertices();
    let win0 = union_of_traps(&game.arena, &part.p0, Player::One)?;
    Ok(SolveResult::won_by(Player::Zero, win0, all))
}

/// The mirror construction: `Win_1` is the largest 0-trap in `P1`.
pub fn extract_regions_from_p1(
    game: &RegularGame,
    part: &Partition,
) -> Result<SolveResult, SolveError> {
    let all = game.arena.vertices();
    let win1 = union_of_traps(&game.arena, &part.p1, Player::Zero)?;
    Ok(SolveResult::won_by(Player::One, win1, all))
}

/// Algorithm 2 followed by region extraction.
pub fn solve_cmuller_dp2(game: &RegularGame) -> Result<(SolveResult, DpStats), SolveError> {
    let (part, stats) = partition_dp2(game)?;
    Ok((extract_regions(game, &part)?, stats))
}

pub fn solve_muller_dp(game: &RegularGame) -> Result<SolveResult, SolveError> {
    let cm = transforms::muller_to_cmuller(game)
        .map_err(|_| SolveError::UnsupportedType(game.game_type().name()))?;
    Ok(solve_cmuller_dp2(&cm)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McNaughtonVariant {
    /// Region table (Algorithm 1).
    Table,
    /// Trichotomy partition (Algorithm 2).
    Partition,
}

pub fn solve_mcnaughton_dp(
    game: &RegularGame,
    variant: McNaughtonVariant,
) -> Result<SolveResult, SolveError> {
    let cm = transforms::mcnaughton_to_cmuller(game)
        .map_err(|_| SolveError::UnsupportedType(game.game_type().name()))?;
    match variant {
        McNaughtonVariant::Table => solve_cmuller_dp1(&cm),
        McNaughtonVariant::Partition => Ok(solve_cmuller_dp2(&cm)?.0),
    }
}

/// Rabin games go through KL and Muller; Streett games are solved as the Rabin
/// game on the same pairs with the regions swapped.
pub fn solve_rabin_streett_dp(game: &RegularGame) -> Result<SolveResult, SolveError> {
    let fail = |_| SolveError::UnsupportedType(game.game_type().name());
    match game.game_type() {
        GameType::Rabin => {
            let kl = transforms::rabin_to_kl(game).map_err(fail)?;
            let muller = transforms::kl_to_muller(&kl).map_err(fail)?;
            solve_muller_dp(&muller)
        }
        GameType::Streett => {
            let (rabin, swap) = transforms::streett_as_dual_rabin(game).map_err(fail)?;
            let r = solve_rabin_streett_dp(&rabin)?;
            Ok(if swap { r.swapped() } else { r })
        }
        other => Err(SolveError::UnsupportedType(other.name())),
    }
}

pub fn solve_kl_dp(game: &RegularGame) -> Result<SolveResult, SolveError> {
    let muller = transforms::kl_to_muller(game)
        .map_err(|_| SolveError::UnsupportedType(game.game_type().name()))?;
    solve_muller_dp(&muller)
}
