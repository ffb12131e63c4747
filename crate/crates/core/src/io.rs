//! Text format for games.
//!
//! ```text
//! regulargame v1
//! type muller
//! n 2
//! owners 01
//! edges 2
//! 1 2
//! 2 1
//! f0 1
//! 11
//! ```
//!
//! Vertices and colours are 1-based in the file. Masks are bit strings with
//! element 1 leftmost. `#` starts a comment. [`emit_game`] writes the
//! canonical form: edges sorted, `F0` masks sorted by their numeric value.

use std::fmt::Write as _;

use thiserror::Error;

use crate::arena::{Arena, ArenaError, Player};
use crate::conditions::{
    Colouring, Condition, ConditionError, GameType, KlPair, RabinPair, RegularGame,
};
use crate::mask::{ColorSet, VertexSet};
use crate::setfam::BitTrie;

/// Vertex limit applied by [`parse_game`].
pub const DEFAULT_VERTEX_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEof(&'static str),
    #[error("line {line}: {source}")]
    ArenaAt { line: usize, source: ArenaError },
    #[error(transparent)]
    Arena(#[from] ArenaError),
    #[error("line {line}: {source}")]
    ConditionAt { line: usize, source: ConditionError },
    #[error(transparent)]
    Condition(#[from] ConditionError),
}

impl ParseError {
    /// Line the error was detected on, if it is tied to one.
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::ArenaAt { line, .. }
            | ParseError::ConditionAt { line, .. } => Some(*line),
            _ => None,
        }
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            line: 0,
        }
    }

    fn next_content(&mut self, what: &'static str) -> Result<Vec<&'a str>, ParseError> {
        for (i, raw) in self.inner.by_ref() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if !content.is_empty() {
                self.line = i + 1;
                return Ok(content.split_whitespace().collect());
            }
        }
        Err(ParseError::UnexpectedEof(what))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            line: self.line,
            msg: msg.into(),
        })
    }

    /// A line of the form `<keyword> <one value>`.
    fn keyed(&mut self, keyword: &'static str) -> Result<&'a str, ParseError> {
        let toks = self.next_content(keyword)?;
        match toks.as_slice() {
            [k, v] if *k == keyword => Ok(v),
            _ => self.err(format!("expected `{keyword} <value>`")),
        }
    }

    fn keyed_number(&mut self, keyword: &'static str) -> Result<usize, ParseError> {
        let v = self.keyed(keyword)?;
        self.number(v)
    }

    fn number(&self, tok: &str) -> Result<usize, ParseError> {
        match tok.parse::<usize>() {
            Ok(x) => Ok(x),
            Err(_) => self.err(format!("`{tok}` is not a non-negative integer")),
        }
    }

    fn mask(&self, tok: &str, width: usize) -> Result<u32, ParseError> {
        if tok.len() != width {
            return self.err(format!(
                "mask `{tok}` has length {}, expected {width}",
                tok.len()
            ));
        }
        match VertexSet::parse_bit_string(tok) {
            Some(m) => Ok(m.bits()),
            None => self.err(format!("mask `{tok}` is not a string of 0 and 1")),
        }
    }

    /// 1-based index in `1..=bound`, returned 0-based.
    fn index(&self, tok: &str, bound: usize, what: &str) -> Result<usize, ParseError> {
        let i = self.number(tok)?;
        if i == 0 || i > bound {
            return self.err(format!("{what} {i} is outside 1..={bound}"));
        }
        Ok(i - 1)
    }

    fn family(&mut self, width: usize) -> Result<BitTrie, ParseError> {
        let count = self.keyed_number("f0")?;
        let mut f0 = BitTrie::new(width);
        for _ in 0..count {
            let toks = self.next_content("an F0 mask")?;
            let [tok] = toks.as_slice() else {
                return self.err("expected one mask per line");
            };
            let m = self.mask(tok, width)?;
            f0.insert(m).expect("mask checked against width");
        }
        Ok(f0)
    }

    fn end(&mut self) -> Result<(), ParseError> {
        match self.next_content("") {
            Err(_) => Ok(()),
            Ok(_) => self.err("trailing content after the condition section"),
        }
    }
}

/// Parses a game with the default vertex limit.
pub fn parse_game(text: &str) -> Result<RegularGame, ParseError> {
    parse_game_with_limit(text, DEFAULT_VERTEX_LIMIT)
}

pub fn parse_game_with_limit(text: &str, limit: usize) -> Result<RegularGame, ParseError> {
    let mut lines = Lines::new(text);
    let header = lines.next_content("`regulargame v1`")?;
    if header != ["regulargame", "v1"] {
        return lines.err("expected header `regulargame v1`");
    }
    let name = lines.keyed("type")?;
    let Some(ty) = GameType::from_name(name) else {
        return lines.err(format!("unknown game type `{name}`"));
    };
    let n = lines.keyed_number("n")?;
    if n == 0 {
        return Err(ParseError::ArenaAt {
            line: lines.line,
            source: ArenaError::NoVertices,
        });
    }
    if n > limit {
        return Err(ParseError::ArenaAt {
            line: lines.line,
            source: ArenaError::TooManyVertices { n, limit },
        });
    }
    let owner_str = lines.keyed("owners")?;
    if owner_str.len() != n || !owner_str.bytes().all(|b| b == b'0' || b == b'1') {
        return lines.err(format!("owners must be {n} characters of 0 and 1"));
    }
    let owners: Vec<Player> = owner_str
        .bytes()
        .map(|b| if b == b'0' { Player::Zero } else { Player::One })
        .collect();

    let m = lines.keyed_number("edges")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let toks = lines.next_content("an edge")?;
        let [a, b] = toks.as_slice() else {
            return lines.err("expected an edge `<u> <w>`");
        };
        let u = lines.index(a, n, "vertex")?;
        let w = lines.index(b, n, "vertex")?;
        if owners[u] == owners[w] {
            return Err(ParseError::ArenaAt {
                line: lines.line,
                source: ArenaError::NonBipartiteEdge(u, w),
            });
        }
        edges.push((u, w));
    }
    let arena = Arena::with_limit(owners, &edges, limit)?;

    let condition = match ty {
        GameType::ColouredMuller => {
            let k = lines.keyed_number("colors")?;
            if k == 0 || k > crate::mask::MASK_BITS {
                return Err(ParseError::ConditionAt {
                    line: lines.line,
                    source: ConditionError::BadColourCount(k),
                });
            }
            let toks = lines.next_content("`colormap`")?;
            if toks.first() != Some(&"colormap") || toks.len() != n + 1 {
                return lines.err(format!("expected `colormap` followed by {n} colours"));
            }
            let colours = toks[1..]
                .iter()
                .map(|t| lines.index(t, k, "colour"))
                .collect::<Result<Vec<_>, _>>()?;
            let colouring = Colouring::new(k, colours).map_err(|source| ParseError::ConditionAt {
                line: lines.line,
                source,
            })?;
            let f0 = lines.family(k)?;
            Condition::ColouredMuller { colouring, f0 }
        }
        GameType::Muller => Condition::Muller {
            f0: lines.family(n)?,
        },
        GameType::McNaughton => {
            let tok = lines.keyed("w")?;
            let w = VertexSet(lines.mask(tok, n)?);
            let f0 = lines.family(n)?;
            if f0.iter().any(|m| !VertexSet(m).is_subset(w)) {
                return Err(ParseError::ConditionAt {
                    line: lines.line,
                    source: ConditionError::F0MemberOutsideW,
                });
            }
            Condition::McNaughton { w, f0 }
        }
        GameType::Rabin | GameType::Streett => {
            let k = lines.keyed_number("pairs")?;
            let mut pairs = Vec::with_capacity(k);
            for _ in 0..k {
                let toks = lines.next_content("a pair")?;
                let [a, b] = toks.as_slice() else {
                    return lines.err("expected a pair `<Umask> <Vmask>`");
                };
                pairs.push(RabinPair {
                    u: VertexSet(lines.mask(a, n)?),
                    v: VertexSet(lines.mask(b, n)?),
                });
            }
            if ty == GameType::Rabin {
                Condition::Rabin { pairs }
            } else {
                Condition::Streett { pairs }
            }
        }
        GameType::Kl => {
            let t = lines.keyed_number("pairs")?;
            let mut pairs = Vec::with_capacity(t);
            for _ in 0..t {
                let toks = lines.next_content("a pair")?;
                let [a, b] = toks.as_slice() else {
                    return lines.err("expected a pair `<u> <Smask>`");
                };
                pairs.push(KlPair {
                    u: lines.index(a, n, "vertex")?,
                    s: VertexSet(lines.mask(b, n)?),
                });
            }
            Condition::Kl { pairs }
        }
    };
    lines.end()?;
    Ok(RegularGame::new(arena, condition)?)
}

/// Canonical text of a game.
pub fn emit_game(game: &RegularGame) -> String {
    let n = game.num_vertices();
    let arena = &game.arena;
    let mut out = String::new();
    let owners: String = arena
        .owners()
        .iter()
        .map(|p| if *p == Player::Zero { '0' } else { '1' })
        .collect();
    let mut edges: Vec<(usize, usize)> = arena.edges().collect();
    edges.sort_unstable();
    writeln!(out, "regulargame v1").unwrap();
    writeln!(out, "type {}", game.game_type().name()).unwrap();
    writeln!(out, "n {n}").unwrap();
    writeln!(out, "owners {owners}").unwrap();
    writeln!(out, "edges {}", edges.len()).unwrap();
    for (u, w) in edges {
        writeln!(out, "{} {}", u + 1, w + 1).unwrap();
    }
    let family = |out: &mut String, f0: &BitTrie, width: usize| {
        writeln!(out, "f0 {}", f0.len()).unwrap();
        for m in f0.iter() {
            writeln!(out, "{}", VertexSet(m).to_bit_string(width)).unwrap();
        }
    };
    match &game.condition {
        Condition::ColouredMuller { colouring, f0 } => {
            let k = colouring.num_colors();
            writeln!(out, "colors {k}").unwrap();
            let map: Vec<String> = colouring.colours().iter().map(|c| (c + 1).to_string()).collect();
            writeln!(out, "colormap {}", map.join(" ")).unwrap();
            writeln!(out, "f0 {}", f0.len()).unwrap();
            for m in f0.iter() {
                writeln!(out, "{}", ColorSet(m).to_bit_string(k)).unwrap();
            }
        }
        Condition::Muller { f0 } => family(&mut out, f0, n),
        Condition::McNaughton { w, f0 } => {
            writeln!(out, "w {}", w.to_bit_string(n)).unwrap();
            family(&mut out, f0, n);
        }
        Condition::Rabin { pairs } | Condition::Streett { pairs } => {
            writeln!(out, "pairs {}", pairs.len()).unwrap();
            for p in pairs {
                writeln!(out, "{} {}", p.u.to_bit_string(n), p.v.to_bit_string(n)).unwrap();
            }
        }
        Condition::Kl { pairs } => {
            writeln!(out, "pairs {}", pairs.len()).unwrap();
            for p in pairs {
                writeln!(out, "{} {}", p.u + 1, p.s.to_bit_string(n)).unwrap();
            }
        }
    }
    out
}
