//! Python bindings. Vertex sets cross the boundary as bit strings with vertex
//! 1 leftmost, the same convention as the text format and the CLI.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use regular_games::solver_dp::partition_dp2;
use regular_games::{self as rg, transforms, Algorithm, BitTrie, GameType, GenSpec, VertexSet};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_mask(s: &str, width: usize) -> PyResult<VertexSet> {
    if s.len() != width {
        return Err(value_err(format!("mask `{s}` should have {width} characters")));
    }
    VertexSet::parse_bit_string(s).ok_or_else(|| value_err(format!("mask `{s}` is not a bit string")))
}

/// A regular game: arena plus winning condition.
#[pyclass(name = "Game", module = "regular_games", frozen)]
struct PyGame {
    inner: rg::RegularGame,
}

/// Winning regions and solver counters.
#[pyclass(name = "Solution", module = "regular_games", frozen, get_all)]
struct PySolution {
    /// Player 0's winning region as a bit string.
    win0: String,
    /// Player 1's winning region as a bit string.
    win1: String,
    /// The algorithm that actually ran (`auto` resolved).
    algo: String,
    micros: u64,
    recursive_calls: u64,
    node_visits: u64,
    table_entries: u64,
}

#[pymethods]
impl PySolution {
    fn __repr__(&self) -> String {
        format!("Solution(win0='{}', win1='{}', algo='{}')", self.win0, self.win1, self.algo)
    }
}

#[pymethods]
impl PyGame {
    /// Parses the text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<PyGame> {
        rg::parse_game(text).map(|inner| PyGame { inner }).map_err(value_err)
    }

    /// Canonical text form.
    fn to_text(&self) -> String {
        rg::emit_game(&self.inner)
    }

    #[getter]
    fn game_type(&self) -> &'static str {
        self.inner.game_type().name()
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.arena.num_edges()
    }

    /// `|C|`, `n`, `|W|`, `k` or `t` depending on the game type.
    #[getter]
    fn parameter(&self) -> usize {
        self.inner.condition.parameter()
    }

    /// 0 or 1: who wins plays whose infinity set is `mask`.
    fn winner_of_infset(&self, mask: &str) -> PyResult<usize> {
        let x = parse_mask(mask, self.inner.num_vertices())?;
        self.inner.winner_of_infset(x).map(|p| p.index()).map_err(value_err)
    }

    /// Solves with `rec`, `dp1`, `dp2`, `oracle` or `auto`.
    #[pyo3(signature = (algo = "auto"))]
    fn solve(&self, py: Python<'_>, algo: &str) -> PyResult<PySolution> {
        let a: Algorithm = algo.parse().map_err(PyValueError::new_err)?;
        let game = &self.inner;
        let (r, s) = py.detach(|| rg::solve(game, a)).map_err(value_err)?;
        let n = game.num_vertices();
        Ok(PySolution {
            win0: r.win0.to_bit_string(n),
            win1: r.win1.to_bit_string(n),
            algo: a.resolve(game.game_type()).name().to_owned(),
            micros: s.micros,
            recursive_calls: s.recursive_calls,
            node_visits: s.node_visits,
            table_entries: s.table_entries,
        })
    }

    /// Rewrites the condition as `kl`, `muller` or `cmuller`.
    fn transform(&self, to: &str) -> PyResult<PyGame> {
        let g = &self.inner;
        let out = match to {
            "kl" if g.game_type() == GameType::Kl => Ok(g.clone()),
            "kl" => transforms::rabin_to_kl(g),
            "muller" => transforms::to_muller(g),
            "cmuller" => transforms::to_cmuller(g),
            other => return Err(value_err(format!("unknown target `{other}`"))),
        };
        out.map(|inner| PyGame { inner }).map_err(value_err)
    }

    /// Sizes of the P0 / P1 / Q partition of all subarenas.
    fn partition<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let cm = transforms::to_cmuller(&self.inner).map_err(value_err)?;
        let (part, _) = partition_dp2(&cm).map_err(value_err)?;
        let d = PyDict::new(py);
        d.set_item("p0", part.p0.len())?;
        d.set_item("p1", part.p1.len())?;
        d.set_item("q", part.q.len())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Game(type='{}', n={}, edges={})",
            self.game_type(),
            self.num_vertices(),
            self.num_edges()
        )
    }
}

/// Seeded random game.
#[pyfunction]
#[pyo3(signature = (game_type, n, seed = 0, edge_density = 0.3, f0_density = 0.5, colors = None, pairs = 3))]
fn generate(
    game_type: &str,
    n: usize,
    seed: u64,
    edge_density: f64,
    f0_density: f64,
    colors: Option<usize>,
    pairs: usize,
) -> PyResult<PyGame> {
    let ty = GameType::from_name(game_type)
        .ok_or_else(|| value_err(format!("unknown game type `{game_type}`")))?;
    let spec = GenSpec {
        game_type: ty,
        n,
        edge_density,
        f0_density,
        colors,
        pairs,
        seed,
    };
    rg::generate(&spec).map(|inner| PyGame { inner }).map_err(value_err)
}

/// All subsets of members of `masks`, as sorted bit strings of length `width`.
#[pyfunction]
fn enumerate_downsets(width: usize, masks: Vec<String>) -> PyResult<Vec<String>> {
    if width == 0 || width > 24 {
        return Err(value_err("width must be in 1..=24"));
    }
    let bits = masks
        .iter()
        .map(|m| parse_mask(m, width).map(VertexSet::bits))
        .collect::<PyResult<Vec<u32>>>()?;
    let family = BitTrie::from_masks(width, bits).map_err(value_err)?;
    Ok(rg::enumerate_downsets(&family)
        .iter()
        .map(|m| VertexSet(m).to_bit_string(width))
        .collect())
}

/// Upper bound on recursive calls for `colours` colours on `n` vertices.
#[pyfunction]
fn recursion_bound(colours: usize, n: usize) -> u64 {
    rg::recursion_bound(colours, n)
}

#[pymodule]
#[pyo3(name = "regular_games")]
fn regular_games_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGame>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_downsets, m)?)?;
    m.add_function(wrap_pyfunction!(recursion_bound, m)?)?;
    m.add("ALGORITHMS", ["rec", "dp1", "dp2", "oracle", "auto"])?;
    Ok(())
}
