//! Bipartite game graphs, subarenas, traps and attractors.

use std::fmt;

use thiserror::Error;

pub use crate::mask::VertexSet;
use crate::mask::MASK_BITS;

/// Default cap on the number of vertices. Dense DP tables are `2^n` entries.
pub const DEFAULT_MAX_VERTICES: usize = 24;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Zero,
    One,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::Zero, Player::One];

    #[inline]
    pub fn opponent(self) -> Player {
        match self {
            Player::Zero => Player::One,
            Player::One => Player::Zero,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Player> {
        match i {
            0 => Some(Player::Zero),
            1 => Some(Player::One),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Errors raised while building an arena or querying it with bad sets.
///
/// Vertex fields are 0-based; `Display` renders them 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArenaError {
    #[error("an arena needs at least one vertex")]
    NoVertices,
    #[error("{n} vertices exceeds the configured limit of {limit}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("expected {expected} owners, got {got}")]
    OwnerCount { expected: usize, got: usize },
    #[error("edge endpoint {} is not a vertex", .0 + 1)]
    BadIndex(usize),
    #[error("edge {} -> {} joins two vertices of the same owner", .0 + 1, .1 + 1)]
    NonBipartiteEdge(usize, usize),
    #[error("vertex {} has no outgoing edge", .0 + 1)]
    DeadEnd(usize),
    #[error("target set is not contained in the scope")]
    TargetNotInScope,
    #[error("set mentions vertices outside the arena")]
    SetOutOfRange,
}

/// A bipartite directed graph in which every vertex has a successor.
///
/// Immutable after construction. Adjacency is stored both as lists (for the
/// backward attractor sweep) and as successor masks (for constant-time
/// subarena tests).
#[derive(Clone, PartialEq, Eq)]
pub struct Arena {
    owner: Vec<Player>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    succ_mask: Vec<VertexSet>,
    owned: [VertexSet; 2],
}

impl fmt::Debug for Arena {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Arena")
            .field("owner", &self.owner)
            .field("succ", &self.succ)
            .finish()
    }
}

impl Arena {
    /// Validates a raw graph with the default vertex cap.
    pub fn new(owners: Vec<Player>, edges: &[(usize, usize)]) -> Result<Arena, ArenaError> {
        Self::with_limit(owners, edges, DEFAULT_MAX_VERTICES)
    }

    /// Validates a raw graph. Edges are 0-based `(from, to)` pairs; duplicates
    /// are collapsed.
    pub fn with_limit(
        owners: Vec<Player>,
        edges: &[(usize, usize)],
        limit: usize,
    ) -> Result<Arena, ArenaError> {
        let n = owners.len();
        if n == 0 {
            return Err(ArenaError::NoVertices);
        }
        let limit = limit.min(MASK_BITS);
        if n > limit {
            return Err(ArenaError::TooManyVertices { n, limit });
        }
        let mut succ_mask = vec![VertexSet::EMPTY; n];
        for &(u, w) in edges {
            if u >= n {
                return Err(ArenaError::BadIndex(u));
            }
            if w >= n {
                return Err(ArenaError::BadIndex(w));
            }
            if owners[u] == owners[w] {
                return Err(ArenaError::NonBipartiteEdge(u, w));
            }
            succ_mask[u] = succ_mask[u].with(w);
        }
        if let Some(v) = succ_mask.iter().position(|m| m.is_empty()) {
            return Err(ArenaError::DeadEnd(v));
        }
        let succ: Vec<Vec<usize>> = succ_mask.iter().map(|m| m.iter().collect()).collect();
        let mut pred = vec![Vec::new(); n];
        for (u, ws) in succ.iter().enumerate() {
            for &w in ws {
                pred[w].push(u);
            }
        }
        let mut owned = [VertexSet::EMPTY; 2];
        for (v, p) in owners.iter().enumerate() {
            owned[p.index()] = owned[p.index()].with(v);
        }
        Ok(Arena {
            owner: owners,
            succ,
            pred,
            succ_mask,
            owned,
        })
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.num_vertices())
    }

    #[inline]
    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owner
    }

    /// Vertices owned by `p`.
    #[inline]
    pub fn owned_by(&self, p: Player) -> VertexSet {
        self.owned[p.index()]
    }

    #[inline]
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    #[inline]
    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    #[inline]
    pub fn successor_set(&self, v: usize) -> VertexSet {
        self.succ_mask[v]
    }

    /// All edges in ascending `(from, to)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, ws)| ws.iter().map(move |&w| (u, w)))
    }

    /// Number of edges with both endpoints in `scope`.
    pub fn edges_within(&self, scope: VertexSet) -> usize {
        scope
            .iter()
            .map(|v| self.succ_mask[v].intersection(scope).len())
            .sum()
    }

    /// True iff `x` is non-empty and every member has a successor in `x`.
    #[inline]
    pub fn is_subarena(&self, x: VertexSet) -> bool {
        !x.is_empty() && x.iter().all(|v| self.succ_mask[v].intersects(x))
    }

    /// Restricts the arena to `scope` if that yields an arena.
    pub fn subarena(&self, scope: VertexSet) -> Option<SubArenaView<'_>> {
        if scope.fits(self.num_vertices()) && self.is_subarena(scope) {
            Some(SubArenaView { base: self, scope })
        } else {
            None
        }
    }

    /// `x` is a `player`-trap inside `scope`: the opponent's vertices of `x` keep
    /// some successor in `x`, and `player`'s vertices have every in-scope
    /// successor in `x`. The empty set is a trap.
    pub fn is_trap(&self, scope: VertexSet, x: VertexSet, player: Player) -> bool {
        debug_assert!(x.is_subset(scope));
        x.iter().all(|v| {
            let inside = self.succ_mask[v].intersection(scope);
            if self.owner[v] == player {
                inside.is_subset(x)
            } else {
                inside.intersects(x)
            }
        })
    }

    /// `Attr_player(target)` in the arena restricted to `scope`.
    pub fn attractor(
        &self,
        scope: VertexSet,
        player: Player,
        target: VertexSet,
    ) -> Result<VertexSet, ArenaError> {
        if !scope.fits(self.num_vertices()) {
            return Err(ArenaError::SetOutOfRange);
        }
        if !target.is_subset(scope) {
            return Err(ArenaError::TargetNotInScope);
        }
        let mut scratch = AttractorScratch::new(self.num_vertices());
        Ok(self.attractor_with(&mut scratch, scope, player, target))
    }

    /// Unchecked attractor using caller-owned scratch space.
    ///
    /// Backward sweep from `target`. Opponent vertices carry a counter of
    /// in-scope successors not yet attracted; counters are initialised lazily
    /// so the cost is linear in the edges inside `scope`.
    pub fn attractor_with(
        &self,
        scratch: &mut AttractorScratch,
        scope: VertexSet,
        player: Player,
        target: VertexSet,
    ) -> VertexSet {
        debug_assert!(target.is_subset(scope));
        scratch.begin(self.num_vertices());
        let epoch = scratch.epoch;
        let mut attr = target;
        scratch.queue.clear();
        scratch.queue.extend(target.iter());
        let mut head = 0;
        while head < scratch.queue.len() {
            let u = scratch.queue[head];
            head += 1;
            scratch.visits += 1;
            for &p in &self.pred[u] {
                if !scope.contains(p) {
                    continue;
                }
                scratch.visits += 1;
                if attr.contains(p) {
                    continue;
                }
                let take = if self.owner[p] == player {
                    true
                } else {
                    if scratch.stamp[p] != epoch {
                        scratch.stamp[p] = epoch;
                        scratch.remaining[p] = self.succ_mask[p].intersection(scope).len() as u32;
                    }
                    scratch.remaining[p] -= 1;
                    scratch.remaining[p] == 0
                };
                if take {
                    attr = attr.with(p);
                    scratch.queue.push(p);
                }
            }
        }
        attr
    }
}

/// Reusable buffers for [`Arena::attractor_with`].
#[derive(Debug, Default, Clone)]
pub struct AttractorScratch {
    remaining: Vec<u32>,
    stamp: Vec<u32>,
    queue: Vec<usize>,
    epoch: u32,
    /// Vertices dequeued plus in-scope edges examined, summed over all calls.
    pub visits: u64,
}

impl AttractorScratch {
    pub fn new(n: usize) -> Self {
        AttractorScratch {
            remaining: vec![0; n],
            stamp: vec![0; n],
            queue: Vec::with_capacity(n),
            epoch: 0,
            visits: 0,
        }
    }

    fn begin(&mut self, n: usize) {
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
            self.remaining.resize(n, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }
}

/// An arena restricted to a vertex set that is itself an arena.
#[derive(Debug, Clone, Copy)]
pub struct SubArenaView<'a> {
    base: &'a Arena,
    scope: VertexSet,
}

impl<'a> SubArenaView<'a> {
    pub fn base(&self) -> &'a Arena {
        self.base
    }

    pub fn scope(&self) -> VertexSet {
        self.scope
    }

    pub fn attractor(&self, player: Player, target: VertexSet) -> Result<VertexSet, ArenaError> {
        self.base.attractor(self.scope, player, target)
    }

    pub fn is_trap(&self, x: VertexSet, player: Player) -> bool {
        x.is_subset(self.scope) && self.base.is_trap(self.scope, x, player)
    }

    pub fn is_subarena(&self, x: VertexSet) -> bool {
        x.is_subset(self.scope) && self.base.is_subarena(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Player::*;

    fn two_cycle() -> Arena {
        Arena::new(vec![Zero, One], &[(0, 1), (1, 0)]).unwrap()
    }

    /// Direct iteration of `W_{i+1} = W_i ∪ {σ-vertices with an edge into W_i}
    /// ∪ {σ̄-vertices with all edges into W_i}` restricted to `scope`.
    fn naive_attractor(a: &Arena, scope: VertexSet, p: Player, t: VertexSet) -> VertexSet {
        let mut w = t;
        loop {
            let mut next = w;
            for v in scope.difference(w).iter() {
                let out = a.successor_set(v).intersection(scope);
                let ok = if a.owner(v) == p {
                    out.intersects(w)
                } else {
                    out.is_subset(w)
                };
                if ok {
                    next = next.with(v);
                }
            }
            if next == w {
                return w;
            }
            w = next;
        }
    }

    #[test]
    fn minimal_arena_is_valid() {
        let a = two_cycle();
        assert_eq!(a.num_vertices(), 2);
        assert_eq!(a.predecessors(0), &[1]);
        assert_eq!(a.predecessors(1), &[0]);
    }

    #[test]
    fn same_owner_edge_rejected() {
        let err = Arena::new(vec![Zero, Zero], &[(0, 1), (1, 0)]).unwrap_err();
        assert_eq!(err, ArenaError::NonBipartiteEdge(0, 1));
        assert!(err.to_string().contains("1 -> 2"));
    }

    #[test]
    fn dead_end_rejected() {
        let err = Arena::new(vec![Zero, One], &[(0, 1)]).unwrap_err();
        assert_eq!(err, ArenaError::DeadEnd(1));
        assert_eq!(err.to_string(), "vertex 2 has no outgoing edge");
    }

    #[test]
    fn bad_index_and_limits() {
        assert_eq!(
            Arena::new(vec![Zero, One], &[(0, 2)]).unwrap_err(),
            ArenaError::BadIndex(2)
        );
        assert_eq!(Arena::new(vec![], &[]).unwrap_err(), ArenaError::NoVertices);
        let owners = vec![Zero, One, Zero, One];
        let edges = [(0, 1), (1, 0), (2, 3), (3, 2)];
        assert!(matches!(
            Arena::with_limit(owners, &edges, 3),
            Err(ArenaError::TooManyVertices { n: 4, limit: 3 })
        ));
    }

    #[test]
    fn subarena_cases() {
        let a = two_cycle();
        assert!(a.is_subarena(a.vertices()));
        assert!(!a.is_subarena(VertexSet::EMPTY));
        assert!(!a.is_subarena(VertexSet::singleton(0)));
        assert!(a.subarena(VertexSet::singleton(0)).is_none());
    }

    #[test]
    fn attractor_examples() {
        let a = two_cycle();
        let v = a.vertices();
        for p in Player::BOTH {
            assert_eq!(a.attractor(v, p, VertexSet::EMPTY).unwrap(), VertexSet::EMPTY);
            assert_eq!(a.attractor(v, p, v).unwrap(), v);
        }
        let t = VertexSet::singleton(1);
        assert_eq!(a.attractor(v, Zero, t).unwrap(), v);
        assert_eq!(naive_attractor(&a, v, Zero, t), v);
        assert_eq!(
            a.attractor(VertexSet::singleton(0), Zero, t),
            Err(ArenaError::TargetNotInScope)
        );
    }

    #[test]
    fn attractor_respects_scope() {
        // 0 -> {1,3}, 2 -> {1}, 1 -> {0,2}, 3 -> {0}
        let a = Arena::new(
            vec![Zero, One, Zero, One],
            &[(0, 1), (0, 3), (2, 1), (1, 0), (1, 2), (3, 0)],
        )
        .unwrap();
        // Player 1 cannot force vertex 3 from 0 in the full arena.
        let full = a.vertices();
        let t = VertexSet::singleton(3);
        assert_eq!(a.attractor(full, One, t).unwrap(), t);
        // Inside {0,1,3} player 0 is forced from 1 only if 1's in-scope edges all
        // go into the target; 1 -> 0 stays, so nothing new.
        let scope = VertexSet::from_indices([0, 1, 3]);
        assert_eq!(
            a.attractor(scope, Zero, VertexSet::singleton(0)).unwrap(),
            scope
        );
        assert_eq!(
            naive_attractor(&a, scope, Zero, VertexSet::singleton(0)),
            scope
        );
    }

    #[test]
    fn trap_cases() {
        let a = two_cycle();
        let v = a.vertices();
        for p in Player::BOTH {
            assert!(a.is_trap(v, v, p));
            assert!(a.is_trap(v, VertexSet::EMPTY, p));
            assert!(!a.is_trap(v, VertexSet::singleton(0), p));
        }
    }

    #[test]
    fn scratch_reuse_across_scopes() {
        let a = Arena::new(
            vec![Zero, One, Zero, One],
            &[(0, 1), (0, 3), (2, 1), (1, 0), (1, 2), (3, 0)],
        )
        .unwrap();
        let mut s = AttractorScratch::new(4);
        for _ in 0..3 {
            for scope in 1u32..16 {
                let scope = VertexSet(scope);
                if !a.is_subarena(scope) {
                    continue;
                }
                for t in 0u32..16 {
                    let t = VertexSet(t).intersection(scope);
                    for p in Player::BOTH {
                        assert_eq!(
                            a.attractor_with(&mut s, scope, p, t),
                            naive_attractor(&a, scope, p, t)
                        );
                    }
                }
            }
        }
    }
}
