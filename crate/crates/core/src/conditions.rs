//! Winning conditions and the games built from them.

use thiserror::Error;

use crate::arena::{Arena, Player};
pub use crate::mask::ColorSet;
use crate::mask::{VertexSet, MASK_BITS};
use crate::setfam::BitTrie;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("condition width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("infinity sets are non-empty")]
    EmptyInfinitySet,
    #[error("vertex {} has colour {colour}, outside 1..={num_colors}", .vertex + 1)]
    ColourOutOfRange {
        vertex: usize,
        colour: usize,
        num_colors: usize,
    },
    #[error("colour count {0} is outside 1..=32")]
    BadColourCount(usize),
    #[error("F0 member is not a subset of W")]
    F0MemberOutsideW,
    #[error("pair {index} mentions vertices outside the arena")]
    PairOutOfRange { index: usize },
}

/// Assignment of colours `0..num_colors` to vertices.
///
/// Colours are 0-based here; the text format uses `1..=num_colors`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    num_colors: usize,
    colour_of: Vec<usize>,
    classes: Vec<VertexSet>,
}

impl Colouring {
    pub fn new(num_colors: usize, colour_of: Vec<usize>) -> Result<Colouring, ConditionError> {
        if num_colors == 0 || num_colors > MASK_BITS {
            return Err(ConditionError::BadColourCount(num_colors));
        }
        let mut classes = vec![VertexSet::EMPTY; num_colors];
        for (v, &c) in colour_of.iter().enumerate() {
            if c >= num_colors {
                return Err(ConditionError::ColourOutOfRange {
                    vertex: v,
                    colour: c + 1,
                    num_colors,
                });
            }
            classes[c] = classes[c].with(v);
        }
        Ok(Colouring {
            num_colors,
            colour_of,
            classes,
        })
    }

    /// One colour per vertex, colour `i` on vertex `i`.
    pub fn identity(n: usize) -> Colouring {
        Colouring::new(n, (0..n).collect()).expect("identity colouring")
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn num_vertices(&self) -> usize {
        self.colour_of.len()
    }

    #[inline]
    pub fn colour_of(&self, v: usize) -> usize {
        self.colour_of[v]
    }

    pub fn colours(&self) -> &[usize] {
        &self.colour_of
    }

    /// `c^{-1}(colour)`.
    #[inline]
    pub fn class(&self, colour: usize) -> VertexSet {
        self.classes[colour]
    }

    /// `c(x)`.
    #[inline]
    pub fn colours_of(&self, x: VertexSet) -> ColorSet {
        let mut cs = ColorSet::EMPTY;
        for (c, class) in self.classes.iter().enumerate() {
            if class.intersects(x) {
                cs = cs.with(c);
            }
        }
        cs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RabinPair {
    pub u: VertexSet,
    pub v: VertexSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KlPair {
    pub u: usize,
    pub s: VertexSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameType {
    ColouredMuller,
    Muller,
    McNaughton,
    Rabin,
    Streett,
    Kl,
}

impl GameType {
    pub const ALL: [GameType; 6] = [
        GameType::ColouredMuller,
        GameType::Muller,
        GameType::McNaughton,
        GameType::Rabin,
        GameType::Streett,
        GameType::Kl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GameType::ColouredMuller => "cmuller",
            GameType::Muller => "muller",
            GameType::McNaughton => "mcnaughton",
            GameType::Rabin => "rabin",
            GameType::Streett => "streett",
            GameType::Kl => "kl",
        }
    }

    pub fn from_name(s: &str) -> Option<GameType> {
        GameType::ALL.into_iter().find(|t| t.name() == s)
    }

    /// Conditions listing `F0` explicitly.
    pub fn is_explicit(self) -> bool {
        matches!(
            self,
            GameType::ColouredMuller | GameType::Muller | GameType::McNaughton
        )
    }
}

/// A winning condition. `F1` is never stored: it is the complement of `F0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    ColouredMuller { colouring: Colouring, f0: BitTrie },
    Muller { f0: BitTrie },
    McNaughton { w: VertexSet, f0: BitTrie },
    Rabin { pairs: Vec<RabinPair> },
    Streett { pairs: Vec<RabinPair> },
    Kl { pairs: Vec<KlPair> },
}

impl Condition {
    pub fn game_type(&self) -> GameType {
        match self {
            Condition::ColouredMuller { .. } => GameType::ColouredMuller,
            Condition::Muller { .. } => GameType::Muller,
            Condition::McNaughton { .. } => GameType::McNaughton,
            Condition::Rabin { .. } => GameType::Rabin,
            Condition::Streett { .. } => GameType::Streett,
            Condition::Kl { .. } => GameType::Kl,
        }
    }

    /// `|C|`, `n`, `|W|`, `k` or `t` depending on the variant.
    pub fn parameter(&self) -> usize {
        match self {
            Condition::ColouredMuller { colouring, .. } => colouring.num_colors(),
            Condition::Muller { f0 } => f0.width(),
            Condition::McNaughton { w, .. } => w.len(),
            Condition::Rabin { pairs } | Condition::Streett { pairs } => pairs.len(),
            Condition::Kl { pairs } => pairs.len(),
        }
    }

    /// Checks every width and subset invariant against an arena of `n` vertices.
    pub fn validate(&self, n: usize) -> Result<(), ConditionError> {
        let width = |expected: usize, got: usize| {
            if expected == got {
                Ok(())
            } else {
                Err(ConditionError::WidthMismatch { expected, got })
            }
        };
        match self {
            Condition::ColouredMuller { colouring, f0 } => {
                width(n, colouring.num_vertices())?;
                width(colouring.num_colors(), f0.width())
            }
            Condition::Muller { f0 } => width(n, f0.width()),
            Condition::McNaughton { w, f0 } => {
                width(n, f0.width())?;
                if !w.fits(n) {
                    return Err(ConditionError::WidthMismatch {
                        expected: n,
                        got: 32 - w.bits().leading_zeros() as usize,
                    });
                }
                if f0.iter().any(|m| !VertexSet(m).is_subset(*w)) {
                    return Err(ConditionError::F0MemberOutsideW);
                }
                Ok(())
            }
            Condition::Rabin { pairs } | Condition::Streett { pairs } => {
                match pairs.iter().position(|p| !p.u.fits(n) || !p.v.fits(n)) {
                    Some(index) => Err(ConditionError::PairOutOfRange { index }),
                    None => Ok(()),
                }
            }
            Condition::Kl { pairs } => {
                match pairs.iter().position(|p| p.u >= n || !p.s.fits(n)) {
                    Some(index) => Err(ConditionError::PairOutOfRange { index }),
                    None => Ok(()),
                }
            }
        }
    }

    /// Winner of every play whose infinity set is `x`, for an arena of `n`
    /// vertices.
    pub fn winner_of_infset(&self, n: usize, x: VertexSet) -> Result<Player, ConditionError> {
        if x.is_empty() {
            return Err(ConditionError::EmptyInfinitySet);
        }
        if !x.fits(n) {
            return Err(ConditionError::WidthMismatch {
                expected: n,
                got: 32 - x.bits().leading_zeros() as usize,
            });
        }
        Ok(self.winner(x))
    }

    /// Unchecked classifier; `x` must be a non-empty set of valid vertices.
    pub fn winner(&self, x: VertexSet) -> Player {
        let zero_wins = match self {
            Condition::ColouredMuller { colouring, f0 } => {
                f0.contains(colouring.colours_of(x).bits())
            }
            Condition::Muller { f0 } => f0.contains(x.bits()),
            Condition::McNaughton { w, f0 } => f0.contains(x.intersection(*w).bits()),
            Condition::Rabin { pairs } => rabin_holds(pairs, x),
            Condition::Streett { pairs } => !rabin_holds(pairs, x),
            Condition::Kl { pairs } => pairs.iter().any(|p| x.contains(p.u) && x.is_subset(p.s)),
        };
        if zero_wins {
            Player::Zero
        } else {
            Player::One
        }
    }
}

fn rabin_holds(pairs: &[RabinPair], x: VertexSet) -> bool {
    pairs.iter().any(|p| x.intersects(p.u) && !x.intersects(p.v))
}

/// An arena together with a condition of matching width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularGame {
    pub arena: Arena,
    pub condition: Condition,
}

impl RegularGame {
    pub fn new(arena: Arena, condition: Condition) -> Result<RegularGame, ConditionError> {
        condition.validate(arena.num_vertices())?;
        Ok(RegularGame { arena, condition })
    }

    pub fn num_vertices(&self) -> usize {
        self.arena.num_vertices()
    }

    pub fn game_type(&self) -> GameType {
        self.condition.game_type()
    }

    pub fn winner_of_infset(&self, x: VertexSet) -> Result<Player, ConditionError> {
        self.condition.winner_of_infset(self.num_vertices(), x)
    }
}
