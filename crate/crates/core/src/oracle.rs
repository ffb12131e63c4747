//! Brute-force reference solver for tiny games.
//!
//! Any condition is first flattened into an explicit table `X -> winner` by
//! asking the condition's classifier about every non-empty vertex set. The
//! Muller game given by that table is turned into a parity game with a
//! latest-appearance-record product, and the parity game is solved either by
//! enumerating Player 0's positional strategies (when there are few enough) or
//! by the classical recursive parity algorithm. Nothing here calls the
//! attractor, trie or solver code it is meant to check.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::arena::{Arena, Player};
use crate::conditions::{Condition, RegularGame};
use crate::mask::VertexSet;
use crate::solver_rec::SolveResult;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} is {value}, above the oracle cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },
    #[error("expected a {0} game")]
    WrongType(&'static str),
    #[error("parity game state {0} has no successor")]
    DeadEnd(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_vertices: usize,
    /// Largest parity game handled by positional strategy enumeration.
    pub brute_state_cap: usize,
    /// Largest number of Player 0 positional strategies enumerated.
    pub strategy_cap: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_vertices: 6,
            brute_state_cap: 64,
            strategy_cap: 1 << 16,
        }
    }
}

/// A max-parity game: Player 0 wins a play iff the largest priority seen
/// infinitely often is even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityGame {
    owner: Vec<Player>,
    succ: Vec<Vec<usize>>,
    priority: Vec<usize>,
}

impl ParityGame {
    pub fn new(
        owner: Vec<Player>,
        succ: Vec<Vec<usize>>,
        priority: Vec<usize>,
    ) -> Result<ParityGame, OracleError> {
        assert_eq!(owner.len(), succ.len());
        assert_eq!(owner.len(), priority.len());
        if let Some(s) = succ.iter().position(Vec::is_empty) {
            return Err(OracleError::DeadEnd(s));
        }
        Ok(ParityGame {
            owner,
            succ,
            priority,
        })
    }

    pub fn num_states(&self) -> usize {
        self.owner.len()
    }

    pub fn owner(&self, s: usize) -> Player {
        self.owner[s]
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.succ[s]
    }

    pub fn priority(&self, s: usize) -> usize {
        self.priority[s]
    }

    /// Number of positional strategies of Player 0, saturating.
    pub fn strategy_count(&self) -> u64 {
        (0..self.num_states())
            .filter(|&s| self.owner[s] == Player::Zero)
            .fold(1u64, |acc, s| acc.saturating_mul(self.succ[s].len() as u64))
    }

    fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.num_states()];
        for (s, ts) in self.succ.iter().enumerate() {
            for &t in ts {
                pred[t].push(s);
            }
        }
        pred
    }
}

/// The product of an arena with latest appearance records.
#[derive(Debug, Clone)]
pub struct LarProduct {
    pub game: ParityGame,
    /// Arena vertex of each product state.
    pub vertex_of: Vec<usize>,
    /// Product state a play from each arena vertex starts in.
    pub initial: Vec<usize>,
    /// Distinct records (vertex permutations) reached.
    pub records: usize,
}

/// Builds the product for the Muller condition whose `F0` membership is
/// `zero_wins[x]` for every mask `x`.
///
/// A state is a record (all vertices, most recently visited first) plus the
/// position the current vertex held in the previous record. When that position
/// is `h`, the first `h + 1` record entries are exactly the vertices seen since
/// the current vertex was last visited; the state's priority is `2(h+1)` if
/// that set is in `F0` and `2(h+1)+1` otherwise.
pub fn lar_product(arena: &Arena, zero_wins: &[bool]) -> LarProduct {
    let n = arena.num_vertices();
    assert_eq!(zero_wins.len(), 1 << n);
    let mut index: HashMap<(Vec<u8>, u8), usize> = HashMap::new();
    let mut keys: Vec<(Vec<u8>, u8)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |key: (Vec<u8>, u8), keys: &mut Vec<(Vec<u8>, u8)>, queue: &mut VecDeque<usize>| {
        *index.entry(key.clone()).or_insert_with(|| {
            keys.push(key);
            queue.push_back(keys.len() - 1);
            keys.len() - 1
        })
    };
    let mut initial = Vec::with_capacity(n);
    for v in 0..n {
        let mut record = vec![v as u8];
        record.extend((0..n as u8).filter(|&u| u as usize != v));
        initial.push(intern((record, 0), &mut keys, &mut queue));
    }
    let mut succ: Vec<Vec<usize>> = Vec::new();
    while let Some(s) = queue.pop_front() {
        let (record, _) = keys[s].clone();
        let v = record[0] as usize;
        let mut out = Vec::new();
        for &w in arena.successors(v) {
            let pos = record.iter().position(|&u| u as usize == w).unwrap();
            let mut next = Vec::with_capacity(n);
            next.push(w as u8);
            next.extend(record.iter().copied().filter(|&u| u as usize != w));
            out.push(intern((next, pos as u8), &mut keys, &mut queue));
        }
        if succ.len() <= s {
            succ.resize(s + 1, Vec::new());
        }
        succ[s] = out;
    }
    succ.resize(keys.len(), Vec::new());
    let mut owner = Vec::with_capacity(keys.len());
    let mut priority = Vec::with_capacity(keys.len());
    let mut vertex_of = Vec::with_capacity(keys.len());
    let mut distinct = std::collections::HashSet::new();
    for (record, h) in &keys {
        let v = record[0] as usize;
        let h = *h as usize;
        let seen = record[..=h]
            .iter()
            .fold(0usize, |m, &u| m | 1 << u);
        owner.push(arena.owner(v));
        vertex_of.push(v);
        priority.push(2 * (h + 1) + usize::from(!zero_wins[seen]));
        distinct.insert(record.clone());
    }
    LarProduct {
        game: ParityGame::new(owner, succ, priority).expect("arena has no dead ends"),
        vertex_of,
        initial,
        records: distinct.len(),
    }
}

/// Latest-appearance-record reduction of a Muller game.
pub fn lar_reduce(game: &RegularGame, cfg: &OracleConfig) -> Result<LarProduct, OracleError> {
    let Condition::Muller { f0 } = &game.condition else {
        return Err(OracleError::WrongType("muller"));
    };
    let n = check_size(game.num_vertices(), cfg)?;
    let zero_wins: Vec<bool> = (0..1u32 << n).map(|x| f0.contains(x)).collect();
    Ok(lar_product(&game.arena, &zero_wins))
}

fn check_size(n: usize, cfg: &OracleConfig) -> Result<usize, OracleError> {
    if n > cfg.max_vertices {
        return Err(OracleError::CapExceeded {
            what: "vertex count",
            value: n as u64,
            cap: cfg.max_vertices as u64,
        });
    }
    Ok(n)
}

/// Exact parity solve by trying every positional strategy of Player 0 and
/// searching for Player 1's best reply. Returns Player 0's winning states.
pub fn parity_brute(p: &ParityGame, cfg: &OracleConfig) -> Result<Vec<bool>, OracleError> {
    let n = p.num_states();
    if n > cfg.brute_state_cap {
        return Err(OracleError::CapExceeded {
            what: "parity state count",
            value: n as u64,
            cap: cfg.brute_state_cap as u64,
        });
    }
    let count = p.strategy_count();
    if count > cfg.strategy_cap {
        return Err(OracleError::CapExceeded {
            what: "strategy count",
            value: count,
            cap: cfg.strategy_cap,
        });
    }
    let choosers: Vec<usize> = (0..n).filter(|&s| p.owner(s) == Player::Zero).collect();
    let mut choice = vec![0usize; n];
    let mut win0 = vec![false; n];
    loop {
        let graph: Vec<Vec<usize>> = (0..n)
            .map(|s| match p.owner(s) {
                Player::Zero => vec![p.succ[s][choice[s]]],
                Player::One => p.succ[s].clone(),
            })
            .collect();
        let lost = odd_cycle_reachers(&graph, &p.priority);
        for s in 0..n {
            win0[s] |= !lost[s];
        }
        // next strategy in mixed radix
        let mut i = 0;
        loop {
            if i == choosers.len() {
                return Ok(win0);
            }
            let s = choosers[i];
            choice[s] += 1;
            if choice[s] < p.succ[s].len() {
                break;
            }
            choice[s] = 0;
            i += 1;
        }
    }
}

/// States of a one-player graph that can reach a cycle whose largest priority
/// is odd.
fn odd_cycle_reachers(graph: &[Vec<usize>], priority: &[usize]) -> Vec<bool> {
    let n = graph.len();
    let mut bad = vec![false; n];
    let mut odd: Vec<usize> = priority.iter().copied().filter(|p| p % 2 == 1).collect();
    odd.sort_unstable();
    odd.dedup();
    for &p in &odd {
        let keep: Vec<bool> = priority.iter().map(|&q| q <= p).collect();
        for comp in sccs(graph, &keep) {
            let cyclic = comp.len() > 1 || graph[comp[0]].contains(&comp[0]);
            if cyclic && comp.iter().any(|&s| priority[s] == p) {
                for &s in &comp {
                    bad[s] = true;
                }
            }
        }
    }
    // backward closure
    let mut pred = vec![Vec::new(); n];
    for (s, ts) in graph.iter().enumerate() {
        for &t in ts {
            pred[t].push(s);
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&s| bad[s]).collect();
    while let Some(t) = stack.pop() {
        for &s in &pred[t] {
            if !bad[s] {
                bad[s] = true;
                stack.push(s);
            }
        }
    }
    bad
}

/// Strongly connected components of the subgraph induced by `keep`
/// (iterative Tarjan).
fn sccs(graph: &[Vec<usize>], keep: &[bool]) -> Vec<Vec<usize>> {
    let n = graph.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if !keep[root] || index[root] != usize::MAX {
            continue;
        }
        let mut work = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = work.last_mut() {
            if *next < graph[v].len() {
                let w = graph[v][*next];
                *next += 1;
                if !keep[w] {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(u, _)) = work.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Recursive parity solver over explicit state sets. Returns Player 0's
/// winning states.
pub fn parity_recursive(p: &ParityGame) -> Vec<bool> {
    let pred = p.predecessors();
    let all = vec![true; p.num_states()];
    parity_rec(p, &pred, all).0
}

fn parity_attr(
    p: &ParityGame,
    pred: &[Vec<usize>],
    within: &[bool],
    player: Player,
    target: &[bool],
) -> Vec<bool> {
    let n = p.num_states();
    let mut attr = target.to_vec();
    let mut left: Vec<usize> = (0..n)
        .map(|s| p.succ[s].iter().filter(|&&t| within[t]).count())
        .collect();
    let mut queue: Vec<usize> = (0..n).filter(|&s| attr[s]).collect();
    while let Some(t) = queue.pop() {
        for &s in &pred[t] {
            if !within[s] || attr[s] {
                continue;
            }
            let take = if p.owner[s] == player {
                true
            } else {
                left[s] -= 1;
                left[s] == 0
            };
            if take {
                attr[s] = true;
                queue.push(s);
            }
        }
    }
    attr
}

fn parity_rec(p: &ParityGame, pred: &[Vec<usize>], set: Vec<bool>) -> (Vec<bool>, Vec<bool>) {
    let n = p.num_states();
    let Some(top) = (0..n).filter(|&s| set[s]).map(|s| p.priority[s]).max() else {
        return (vec![false; n], vec![false; n]);
    };
    let alpha = if top % 2 == 0 { Player::Zero } else { Player::One };
    let target: Vec<bool> = (0..n).map(|s| set[s] && p.priority[s] == top).collect();
    let a = parity_attr(p, pred, &set, alpha, &target);
    let rest: Vec<bool> = (0..n).map(|s| set[s] && !a[s]).collect();
    let (w0, w1) = parity_rec(p, pred, rest);
    let (w_alpha, w_beta) = match alpha {
        Player::Zero => (w0, w1),
        Player::One => (w1, w0),
    };
    let (res_alpha, res_beta) = if !w_beta.iter().any(|&b| b) {
        (set.clone(), vec![false; n])
    } else {
        let _ = w_alpha;
        let b = parity_attr(p, pred, &set, alpha.opponent(), &w_beta);
        let rest: Vec<bool> = (0..n).map(|s| set[s] && !b[s]).collect();
        let (v0, v1) = parity_rec(p, pred, rest);
        let (v_alpha, v_beta) = match alpha {
            Player::Zero => (v0, v1),
            Player::One => (v1, v0),
        };
        let beta: Vec<bool> = (0..n).map(|s| v_beta[s] || b[s]).collect();
        (v_alpha, beta)
    };
    match alpha {
        Player::Zero => (res_alpha, res_beta),
        Player::One => (res_beta, res_alpha),
    }
}

/// Solves the Muller game on `arena` whose `F0` membership table is
/// `zero_wins`.
pub fn oracle_solve_table(
    arena: &Arena,
    zero_wins: &[bool],
    cfg: &OracleConfig,
) -> Result<SolveResult, OracleError> {
    check_size(arena.num_vertices(), cfg)?;
    let product = lar_product(arena, zero_wins);
    let g = &product.game;
    let win = if g.num_states() <= cfg.brute_state_cap && g.strategy_count() <= cfg.strategy_cap {
        parity_brute(g, cfg)?
    } else {
        parity_recursive(g)
    };
    let all = arena.vertices();
    let win0 = VertexSet::from_indices((0..arena.num_vertices()).filter(|&v| win[product.initial[v]]));
    Ok(SolveResult::won_by(Player::Zero, win0, all))
}

/// Winner table of a condition, built by classifying every non-empty set.
pub fn classification_table(game: &RegularGame) -> Vec<bool> {
    let n = game.num_vertices();
    let mut t = vec![false; 1 << n];
    for x in 1..1u32 << n {
        t[x as usize] = game.condition.winner(VertexSet(x)) == Player::Zero;
    }
    t
}

/// Reference winning regions for a game of any type.
pub fn oracle_solve(game: &RegularGame, cfg: &OracleConfig) -> Result<SolveResult, OracleError> {
    check_size(game.num_vertices(), cfg)?;
    oracle_solve_table(&game.arena, &classification_table(game), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::BitTrie;
    use Player::*;

    fn cycle_game(priorities: &[usize]) -> ParityGame {
        let n = priorities.len();
        let owner = (0..n).map(|i| if i % 2 == 0 { Zero } else { One }).collect();
        let succ = (0..n).map(|i| vec![(i + 1) % n]).collect();
        ParityGame::new(owner, succ, priorities.to_vec()).unwrap()
    }

    #[test]
    fn parity_trivial_cases() {
        let cfg = OracleConfig::default();
        let even = cycle_game(&[2, 4, 0, 2]);
        assert_eq!(parity_brute(&even, &cfg).unwrap(), vec![true; 4]);
        assert_eq!(parity_recursive(&even), vec![true; 4]);
        let odd = cycle_game(&[1, 3, 5, 1]);
        assert_eq!(parity_brute(&odd, &cfg).unwrap(), vec![false; 4]);
        assert_eq!(parity_recursive(&odd), vec![false; 4]);
        let mixed = cycle_game(&[1, 6, 3, 2]);
        assert_eq!(parity_brute(&mixed, &cfg).unwrap(), vec![true; 4]);
        assert_eq!(parity_recursive(&mixed), vec![true; 4]);
    }

    #[test]
    fn parity_choice_matters() {
        // 0 (P0) -> 1 or 2; 1 (P1) -> 0, priority 1; 2 (P1) -> 0, priority 2.
        let g = ParityGame::new(
            vec![Zero, One, One],
            vec![vec![1, 2], vec![0], vec![0]],
            vec![0, 1, 2],
        )
        .unwrap();
        let cfg = OracleConfig::default();
        assert_eq!(parity_brute(&g, &cfg).unwrap(), vec![true; 3]);
        assert_eq!(parity_recursive(&g), vec![true; 3]);
    }

    #[test]
    fn parity_caps() {
        let cfg = OracleConfig {
            brute_state_cap: 2,
            ..OracleConfig::default()
        };
        assert!(matches!(
            parity_brute(&cycle_game(&[0, 0, 0]), &cfg),
            Err(OracleError::CapExceeded { .. })
        ));
        assert_eq!(
            ParityGame::new(vec![Zero], vec![vec![]], vec![0]),
            Err(OracleError::DeadEnd(0))
        );
    }

    fn two_cycle_muller(f0: &[u32]) -> RegularGame {
        let arena = Arena::new(vec![Zero, One], &[(0, 1), (1, 0)]).unwrap();
        RegularGame::new(
            arena,
            Condition::Muller {
                f0: BitTrie::from_masks(2, f0.iter().copied()).unwrap(),
            },
        )
        .unwrap()
    }

    #[test]
    fn lar_on_single_play() {
        let cfg = OracleConfig::default();
        let g = two_cycle_muller(&[0b11]);
        let p = lar_reduce(&g, &cfg).unwrap();
        assert!(p.game.num_states() <= 4);
        assert!(p.records <= 2);
        let r = oracle_solve(&g, &cfg).unwrap();
        assert_eq!(r.win0, VertexSet(0b11));
        let r = oracle_solve(&two_cycle_muller(&[0b01, 0b10]), &cfg).unwrap();
        assert_eq!(r.win1, VertexSet(0b11));
    }

    #[test]
    fn four_vertex_reference() {
        let arena = Arena::new(
            vec![Zero, One, Zero, One],
            &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 2), (3, 0)],
        )
        .unwrap();
        let g = RegularGame::new(
            arena,
            Condition::Muller {
                f0: BitTrie::from_masks(4, [0b0011]).unwrap(),
            },
        )
        .unwrap();
        let r = oracle_solve(&g, &OracleConfig::default()).unwrap();
        assert_eq!(r.win0, VertexSet::EMPTY);
        assert_eq!(r.win1, VertexSet(0b1111));
    }

    #[test]
    fn size_cap() {
        let cfg = OracleConfig {
            max_vertices: 1,
            ..OracleConfig::default()
        };
        assert!(matches!(
            oracle_solve(&two_cycle_muller(&[]), &cfg),
            Err(OracleError::CapExceeded { what: "vertex count", .. })
        ));
    }
}
