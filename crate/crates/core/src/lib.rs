//! Solvers for regular games on finite bipartite arenas.
//!
//! Six winning conditions are supported: coloured Muller, Muller, McNaughton,
//! Rabin, Streett and KL. Vertex sets are `u32` bitmasks, so arenas hold at
//! most 32 vertices (24 by default).

pub mod arena;
pub mod cli;
pub mod conditions;
pub mod gen;
pub mod io;
pub mod mask;
pub mod oracle;
pub mod setfam;
pub mod solve;
pub mod solver_dp;
pub mod solver_rec;
pub mod transforms;

pub use arena::{Arena, ArenaError, AttractorScratch, Player};
pub use conditions::{Colouring, Condition, ConditionError, GameType, KlPair, RabinPair, RegularGame};
pub use mask::{ColorSet, VertexSet};
pub use setfam::{enumerate_downsets, BitTrie, TrieError};
pub use solver_rec::{recursion_bound, RecStats, SolveError, SolveResult};
pub use gen::{generate, GenError, GenSpec};
pub use io::{emit_game, parse_game, ParseError};
pub use solve::{solve, Algorithm, RunError, SolveStats};
