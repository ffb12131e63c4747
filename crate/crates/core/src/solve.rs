//! One entry point over every solver.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::conditions::{GameType, RegularGame};
use crate::oracle::{self, OracleConfig, OracleError};
use crate::solver_dp::{self, DpStats};
use crate::solver_rec::{self, RecStats, SolveError, SolveResult};
use crate::transforms::{self, TransformError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Rec,
    Dp1,
    Dp2,
    Oracle,
    /// `dp2` for explicit families (coloured Muller, Muller, McNaughton),
    /// `rec` otherwise.
    Auto,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Rec,
        Algorithm::Dp1,
        Algorithm::Dp2,
        Algorithm::Oracle,
        Algorithm::Auto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Rec => "rec",
            Algorithm::Dp1 => "dp1",
            Algorithm::Dp2 => "dp2",
            Algorithm::Oracle => "oracle",
            Algorithm::Auto => "auto",
        }
    }

    /// What `Auto` resolves to for `ty`; other variants map to themselves.
    pub fn resolve(self, ty: GameType) -> Algorithm {
        match self {
            Algorithm::Auto if ty.is_explicit() => Algorithm::Dp2,
            Algorithm::Auto => Algorithm::Rec,
            other => other,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Counters from one solve. Fields a solver does not touch stay zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub micros: u64,
    pub recursive_calls: u64,
    pub max_depth: u32,
    pub attractor_visits: u64,
    /// Trie node visits spent building the explicit condition.
    pub node_visits: u64,
    pub table_entries: u64,
    pub lookups: u64,
    pub table_bytes: u64,
}

impl SolveStats {
    fn from_rec(r: RecStats) -> Self {
        SolveStats {
            recursive_calls: r.recursive_calls,
            max_depth: r.max_depth,
            attractor_visits: r.attractor_visits,
            ..Self::default()
        }
    }

    fn from_dp(d: DpStats) -> Self {
        SolveStats {
            attractor_visits: d.attractor_visits,
            node_visits: d.transform_visits,
            table_entries: d.table_entries,
            lookups: d.lookups,
            table_bytes: d.table_bytes,
            ..Self::default()
        }
    }
}

impl fmt::Display for SolveStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "micros {}\nrecursive_calls {}\nmax_depth {}\nattractor_visits {}\nnode_visits {}\ntable_entries {}\nlookups {}\ntable_bytes {}",
            self.micros,
            self.recursive_calls,
            self.max_depth,
            self.attractor_visits,
            self.node_visits,
            self.table_entries,
            self.lookups,
            self.table_bytes
        )
    }
}

/// Coloured Muller form used by the DP solvers, plus whether the regions must
/// be swapped afterwards (Streett games go through the dual Rabin game).
fn dp_input(game: &RegularGame) -> Result<(RegularGame, u64, bool), TransformError> {
    if game.game_type() == GameType::Streett {
        let (rabin, swap) = transforms::streett_as_dual_rabin(game)?;
        let (cm, visits) = transforms::to_cmuller_counted(&rabin)?;
        return Ok((cm, visits, swap));
    }
    let (cm, visits) = transforms::to_cmuller_counted(game)?;
    Ok((cm, visits, false))
}

pub fn solve(game: &RegularGame, algo: Algorithm) -> Result<(SolveResult, SolveStats), RunError> {
    let start = Instant::now();
    let (result, mut stats) = match algo.resolve(game.game_type()) {
        Algorithm::Rec => {
            let (r, s) = solver_rec::solve_rec(game)?;
            (r, SolveStats::from_rec(s))
        }
        Algorithm::Dp1 => {
            let (cm, visits, swap) = dp_input(game)?;
            let (table, dp) = solver_dp::dp1_table(&cm)?;
            let r = table
                .get(cm.arena.vertices())
                .ok_or(SolveError::Inconsistent("full vertex set has no entry"))?;
            let mut s = SolveStats::from_dp(dp);
            s.node_visits += visits;
            (if swap { r.swapped() } else { r }, s)
        }
        Algorithm::Dp2 => {
            let (cm, visits, swap) = dp_input(game)?;
            let (r, dp) = solver_dp::solve_cmuller_dp2(&cm)?;
            let mut s = SolveStats::from_dp(dp);
            s.node_visits += visits;
            (if swap { r.swapped() } else { r }, s)
        }
        Algorithm::Oracle => {
            let r = oracle::oracle_solve(game, &OracleConfig::default())?;
            (r, SolveStats::default())
        }
        Algorithm::Auto => unreachable!("resolved above"),
    };
    stats.micros = start.elapsed().as_micros() as u64;
    Ok((result, stats))
}
