//! The `regames` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::conditions::{GameType, RegularGame};
use crate::gen::{generate, GenSpec};
use crate::io::{emit_game, parse_game};
use crate::solve::{solve, Algorithm};
use crate::solver_dp::partition_dp2;
use crate::transforms;
use crate::VertexSet;

#[derive(Debug, Parser)]
#[command(name = "regames", version, about = "Solve regular games on bipartite arenas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgoArg {
    Rec,
    Dp1,
    Dp2,
    Oracle,
    Auto,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Rec => Algorithm::Rec,
            AlgoArg::Dp1 => Algorithm::Dp1,
            AlgoArg::Dp2 => Algorithm::Dp2,
            AlgoArg::Oracle => Algorithm::Oracle,
            AlgoArg::Auto => Algorithm::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Target {
    Kl,
    Muller,
    Cmuller,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TypeArg {
    Cmuller,
    Muller,
    Mcnaughton,
    Rabin,
    Streett,
    Kl,
}

impl From<TypeArg> for GameType {
    fn from(t: TypeArg) -> Self {
        match t {
            TypeArg::Cmuller => GameType::ColouredMuller,
            TypeArg::Muller => GameType::Muller,
            TypeArg::Mcnaughton => GameType::McNaughton,
            TypeArg::Rabin => GameType::Rabin,
            TypeArg::Streett => GameType::Streett,
            TypeArg::Kl => GameType::Kl,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    /// Every game type at n = 6 under every algorithm.
    Smoke,
    /// Muller games of growing size under dp2 and rec.
    Scaling,
    /// Rabin and Streett games with a growing number of pairs.
    Pairs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print both winning regions.
    Solve {
        #[arg(long, value_enum, default_value = "auto")]
        algo: AlgoArg,
        /// Also print solver counters to stderr.
        #[arg(long)]
        stats: bool,
        file: PathBuf,
    },
    /// Rewrite the winning condition in another form.
    Transform {
        #[arg(long, value_enum)]
        to: Target,
        file: PathBuf,
    },
    /// Sizes of the fully-won/undecided partition of all subarenas.
    Partition {
        /// List the member masks as well.
        #[arg(long)]
        members: bool,
        file: PathBuf,
    },
    /// Write a random game.
    Gen {
        #[arg(long = "type", value_enum)]
        game_type: TypeArg,
        #[arg(short, long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        edge_density: f64,
        #[arg(long, default_value_t = 0.5)]
        f0_density: f64,
        #[arg(long)]
        colors: Option<usize>,
        #[arg(long, default_value_t = 3)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout if absent).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Validate a game file.
    Check { file: PathBuf },
    /// Time solvers on generated games and print CSV.
    Bench {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub const BENCH_HEADER: &str = "game,algo,n,colors_or_pairs,micros,recursive_calls,node_visits";

fn load(path: &Path) -> Result<RegularGame, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_game(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn bench_rows(suite: Suite, seeds: u64, base: u64) -> Vec<(GenSpec, Vec<Algorithm>)> {
    let mut rows = Vec::new();
    let every = vec![Algorithm::Rec, Algorithm::Dp1, Algorithm::Dp2, Algorithm::Oracle];
    for s in 0..seeds {
        let seed = base + s;
        match suite {
            Suite::Smoke => {
                for ty in GameType::ALL {
                    rows.push((GenSpec::new(ty, 6, seed), every.clone()));
                }
            }
            Suite::Scaling => {
                for n in (8..=16).step_by(2) {
                    let spec = GenSpec {
                        f0_density: 0.05,
                        ..GenSpec::new(GameType::Muller, n, seed)
                    };
                    rows.push((spec, vec![Algorithm::Dp2, Algorithm::Rec]));
                }
            }
            Suite::Pairs => {
                for ty in [GameType::Rabin, GameType::Streett] {
                    for k in [1, 4, 16, 64] {
                        let spec = GenSpec {
                            pairs: k,
                            ..GenSpec::new(ty, 8, seed)
                        };
                        rows.push((spec, vec![Algorithm::Rec, Algorithm::Dp2]));
                    }
                }
            }
        }
    }
    rows
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), String> {
    let w = |r: std::io::Result<()>| r.map_err(|e| e.to_string());
    match cli.command {
        Command::Solve { algo, stats, file } => {
            let game = load(&file)?;
            let (r, s) = solve(&game, algo.into()).map_err(|e| e.to_string())?;
            let n = game.num_vertices();
            w(writeln!(out, "win0 {}", r.win0.to_bit_string(n)))?;
            w(writeln!(out, "win1 {}", r.win1.to_bit_string(n)))?;
            if stats {
                let algo: Algorithm = algo.into();
                w(writeln!(err, "algo {}", algo.resolve(game.game_type())))?;
                w(writeln!(err, "{s}"))?;
            }
        }
        Command::Transform { to, file } => {
            let game = load(&file)?;
            let result = match to {
                Target::Kl => match game.game_type() {
                    GameType::Kl => Ok(game.clone()),
                    _ => transforms::rabin_to_kl(&game),
                },
                Target::Muller => transforms::to_muller(&game),
                Target::Cmuller => transforms::to_cmuller(&game),
            };
            let g = result.map_err(|e| e.to_string())?;
            w(write!(out, "{}", emit_game(&g)))?;
        }
        Command::Partition { members, file } => {
            let game = load(&file)?;
            let cm = transforms::to_cmuller(&game).map_err(|e| e.to_string())?;
            let (part, _) = partition_dp2(&cm).map_err(|e| e.to_string())?;
            let n = game.num_vertices();
            for (name, trie) in [("p0", &part.p0), ("p1", &part.p1), ("q", &part.q)] {
                w(writeln!(out, "{name} {}", trie.len()))?;
            }
            if members {
                for (name, trie) in [("p0", &part.p0), ("p1", &part.p1), ("q", &part.q)] {
                    for m in trie.iter() {
                        w(writeln!(out, "member {name} {}", VertexSet(m).to_bit_string(n)))?;
                    }
                }
            }
        }
        Command::Gen {
            game_type,
            n,
            edge_density,
            f0_density,
            colors,
            pairs,
            seed,
            output,
        } => {
            let spec = GenSpec {
                game_type: game_type.into(),
                n,
                edge_density,
                f0_density,
                colors,
                pairs,
                seed,
            };
            let text = emit_game(&generate(&spec).map_err(|e| e.to_string())?);
            match output {
                Some(path) => std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?,
                None => w(write!(out, "{text}"))?,
            }
        }
        Command::Check { file } => {
            let game = load(&file)?;
            w(writeln!(
                out,
                "ok {} n={} edges={} param={}",
                game.game_type().name(),
                game.num_vertices(),
                game.arena.num_edges(),
                game.condition.parameter()
            ))?;
        }
        Command::Bench { suite, seeds, seed } => {
            w(writeln!(out, "{BENCH_HEADER}"))?;
            for (spec, algos) in bench_rows(suite, seeds, seed) {
                let game = generate(&spec).map_err(|e| e.to_string())?;
                let label = format!("{}-n{}-s{}", spec.game_type.name(), spec.n, spec.seed);
                for algo in algos {
                    let (_, s) = solve(&game, algo).map_err(|e| format!("{label} {algo}: {e}"))?;
                    w(writeln!(
                        out,
                        "{label},{algo},{},{},{},{},{}",
                        spec.n,
                        game.condition.parameter(),
                        s.micros,
                        s.recursive_calls,
                        s.node_visits
                    ))?;
                }
            }
        }
    }
    Ok(())
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn bench_header_and_rows() {
        let (code, out, _) = run_str(&["regames", "bench", "--suite", "smoke", "--seeds", "1"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some(BENCH_HEADER));
        assert_eq!(lines.count(), 6 * 4);
    }

    #[test]
    fn usage_errors_exit_nonzero() {
        let (code, _, err) = run_str(&["regames", "solve", "--algo", "zielonka", "x"]);
        assert_ne!(code, 0);
        assert!(!err.is_empty());
        let (code, _, err) = run_str(&["regames", "check", "/nonexistent/game.txt"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error:"));
    }
}
