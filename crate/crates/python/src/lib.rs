//! Python bindings: games, agents, single plays, concepts, bandit scores,
//! tournaments and preprocessing.

use pyo3::prelude::*;

#[pymodule]
mod mcts_atlas {
    use std::path::PathBuf;

    use mcts_atlas_core::concepts::{compute_concepts as concepts_for, FEATURE_NAMES};
    use mcts_atlas_core::game::{utilities_from_ranks as ranks_to_utilities, Move, RankVector};
    use mcts_atlas_core::mcts::scores::{self, EdgeStats, MoveStats, GRAVE_BIAS, PH_WEIGHT};
    use mcts_atlas_core::preprocess::{preprocess as run_preprocess, GameCatalog, RawDataset, TARGET_COLUMN};
    use mcts_atlas_core::tournament::{self, RunOptions};
    use mcts_atlas_core::{AgentSpec as CoreAgent, GameId, GameState, MctsSpec, PlaySettings, SearchBudget};
    use pyo3::exceptions::{PyRuntimeError, PyValueError};
    use pyo3::prelude::*;
    use pyo3::types::PyDict;

    fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
        PyValueError::new_err(e.to_string())
    }

    fn game_id(name: &str) -> PyResult<GameId> {
        name.parse().map_err(value_err)
    }

    fn move_tuple(m: Move) -> (u32, String) {
        (m.code, m.tag.to_string())
    }

    /// Name, seat count and rule flags of every built-in game.
    #[pyfunction]
    fn list_games(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
        GameId::ALL
            .iter()
            .map(|g| {
                let d = g.descriptor();
                let out = PyDict::new(py);
                out.set_item("name", d.name)?;
                out.set_item("players", d.players)?;
                out.set_item("zero_sum", d.zero_sum)?;
                out.set_item("stochastic", d.stochastic)?;
                Ok(out)
            })
            .collect()
    }

    #[pyclass(frozen, eq, hash, str, from_py_object)]
    #[derive(Clone, PartialEq, Eq, Hash)]
    struct AgentSpec {
        inner: CoreAgent,
    }

    impl std::fmt::Display for AgentSpec {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            self.inner.fmt(f)
        }
    }

    #[pymethods]
    impl AgentSpec {
        #[new]
        fn new(text: &str) -> PyResult<Self> {
            Ok(Self { inner: text.parse().map_err(value_err)? })
        }

        /// The 60-agent MCTS grid in canonical order.
        #[staticmethod]
        fn grid() -> Vec<AgentSpec> {
            MctsSpec::grid()
                .into_iter()
                .map(|m| AgentSpec { inner: CoreAgent::Mcts(m) })
                .collect()
        }

        #[getter]
        fn is_random(&self) -> bool {
            matches!(self.inner, CoreAgent::Random)
        }

        #[getter]
        fn selection(&self) -> Option<&'static str> {
            self.inner.mcts().map(|m| m.selection.name())
        }

        #[getter]
        fn exploration(&self) -> Option<f64> {
            self.inner.mcts().map(|m| m.exploration.value())
        }

        #[getter]
        fn playout(&self) -> Option<&'static str> {
            self.inner.mcts().map(|m| m.playout.name())
        }

        fn __repr__(&self) -> String {
            format!("AgentSpec('{}')", self.inner)
        }
    }

    trait DynState: Send + Sync {
        fn mover(&self) -> usize;
        fn is_terminal(&self) -> bool;
        fn legal_moves(&self) -> Vec<Move>;
        fn play_code(&mut self, code: u32) -> Result<(), String>;
        fn utilities(&self) -> Option<Vec<f64>>;
        fn snapshot(&self) -> String;
    }

    impl<S: GameState> DynState for S {
        fn mover(&self) -> usize {
            GameState::mover(self)
        }
        fn is_terminal(&self) -> bool {
            GameState::is_terminal(self)
        }
        fn legal_moves(&self) -> Vec<Move> {
            GameState::legal_moves(self)
        }
        fn play_code(&mut self, code: u32) -> Result<(), String> {
            let mv = self
                .find_move(code)
                .ok_or_else(|| format!("move {code} is not legal here"))?;
            self.play(mv);
            Ok(())
        }
        fn utilities(&self) -> Option<Vec<f64>> {
            GameState::utilities(self).map(|u| u.into_vec())
        }
        fn snapshot(&self) -> String {
            GameState::snapshot(self)
        }
    }

    /// A mutable game position. Moves are addressed by their integer code.
    #[pyclass]
    struct Game {
        id: GameId,
        state: Box<dyn DynState>,
    }

    #[pymethods]
    impl Game {
        #[new]
        #[pyo3(signature = (name, seed=0))]
        fn new(name: &str, seed: u64) -> PyResult<Self> {
            let id = game_id(name)?;
            let state: Box<dyn DynState> =
                mcts_atlas_core::with_game!(id, G => Box::new(G::new_game(seed)));
            Ok(Self { id, state })
        }

        #[getter]
        fn name(&self) -> &'static str {
            self.id.name()
        }

        #[getter]
        fn players(&self) -> usize {
            self.id.players()
        }

        #[getter]
        fn mover(&self) -> usize {
            self.state.mover()
        }

        fn is_terminal(&self) -> bool {
            self.state.is_terminal()
        }

        /// `(code, tag)` pairs for the player to move.
        fn legal_moves(&self) -> Vec<(u32, String)> {
            self.state.legal_moves().into_iter().map(move_tuple).collect()
        }

        fn play(&mut self, code: u32) -> PyResult<()> {
            self.state.play_code(code).map_err(PyValueError::new_err)
        }

        /// Per-seat utilities once the game is over, else None.
        fn utilities(&self) -> Option<Vec<f64>> {
            self.state.utilities()
        }

        fn __str__(&self) -> String {
            self.state.snapshot()
        }
    }

    fn parse_agents(agents: Vec<String>) -> PyResult<Vec<CoreAgent>> {
        agents.iter().map(|a| a.parse().map_err(value_err)).collect()
    }

    fn play_settings(iterations: Option<u64>, seconds: Option<f64>, threads: usize, move_cap: Option<usize>) -> PyResult<PlaySettings> {
        let budget = match (iterations, seconds) {
            (Some(_), Some(_)) => return Err(PyValueError::new_err("give iterations or seconds, not both")),
            (Some(n), None) => SearchBudget::Iterations { count: n, threads },
            (None, Some(s)) => SearchBudget::WallClock { seconds: s, threads },
            (None, None) => SearchBudget::Iterations { count: 1000, threads },
        };
        let mut settings = PlaySettings { budget, ..PlaySettings::default() };
        if let Some(cap) = move_cap {
            settings.move_cap = cap;
        }
        Ok(settings)
    }

    /// Plays one game and returns utilities, length, cap flag and the move list.
    #[pyfunction]
    #[pyo3(signature = (game, agents, seed, iterations=None, seconds=None, threads=1, move_cap=None))]
    #[allow(clippy::too_many_arguments)]
    fn run_play<'py>(
        py: Python<'py>,
        game: &str,
        agents: Vec<String>,
        seed: u64,
        iterations: Option<u64>,
        seconds: Option<f64>,
        threads: usize,
        move_cap: Option<usize>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let id = game_id(game)?;
        let agents = parse_agents(agents)?;
        let settings = play_settings(iterations, seconds, threads, move_cap)?;
        let rec = py
            .detach(|| mcts_atlas_core::run_play_dyn(id, &agents, &settings, seed))
            .map_err(value_err)?;
        let out = PyDict::new(py);
        out.set_item("game", rec.game.name())?;
        out.set_item("agents", rec.agents.iter().map(ToString::to_string).collect::<Vec<_>>())?;
        out.set_item("utilities", rec.utilities.into_vec())?;
        out.set_item("length", rec.length)?;
        out.set_item("capped", rec.capped)?;
        out.set_item("fallbacks", rec.fallbacks)?;
        let moves: Vec<(usize, u32, String)> =
            rec.moves.iter().map(|&(s, m)| (s, m.code, m.tag.to_string())).collect();
        out.set_item("moves", moves)?;
        Ok(out)
    }

    #[pyfunction]
    fn feature_names() -> Vec<&'static str> {
        FEATURE_NAMES.to_vec()
    }

    /// Concept vector from `trials` uniformly random plays, keyed by feature name.
    #[pyfunction]
    #[pyo3(signature = (game, seed, trials=1000))]
    fn compute_concepts<'py>(
        py: Python<'py>,
        game: &str,
        seed: u64,
        trials: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let id = game_id(game)?;
        if trials == 0 {
            return Err(PyValueError::new_err("trials must be at least 1"));
        }
        let c = py.detach(|| concepts_for(id, trials, seed));
        let out = PyDict::new(py);
        for (k, v) in c.iter() {
            out.set_item(k, v)?;
        }
        Ok(out)
    }

    #[pyfunction]
    fn ucb1_score(visits: f64, value_sum: f64, parent_visits: f64, c: f64) -> f64 {
        scores::ucb1_score(EdgeStats::new(visits, value_sum, 0.0), parent_visits, c)
    }

    #[pyfunction]
    fn ucb1_tuned_score(visits: f64, value_sum: f64, squared_sum: f64, parent_visits: f64, c: f64) -> f64 {
        scores::ucb1_tuned_score(EdgeStats::new(visits, value_sum, squared_sum), parent_visits, c)
    }

    #[pyfunction]
    #[pyo3(signature = (visits, value_sum, parent_visits, c, amaf_visits, amaf_value_sum, bias=GRAVE_BIAS))]
    fn grave_score(
        visits: f64,
        value_sum: f64,
        parent_visits: f64,
        c: f64,
        amaf_visits: f64,
        amaf_value_sum: f64,
        bias: f64,
    ) -> f64 {
        scores::grave_score(
            EdgeStats::new(visits, value_sum, 0.0),
            parent_visits,
            c,
            MoveStats::new(amaf_visits, amaf_value_sum),
            bias,
        )
    }

    #[pyfunction]
    #[pyo3(signature = (visits, value_sum, parent_visits, c, history_count, history_value_sum, weight=PH_WEIGHT))]
    fn progressive_history_score(
        visits: f64,
        value_sum: f64,
        parent_visits: f64,
        c: f64,
        history_count: f64,
        history_value_sum: f64,
        weight: f64,
    ) -> f64 {
        scores::progressive_history_score(
            EdgeStats::new(visits, value_sum, 0.0),
            parent_visits,
            c,
            MoveStats::new(history_count, history_value_sum),
            weight,
        )
    }

    /// Maps ranks (1 = best, ties share the mean rank) to utilities in [-1, 1].
    #[pyfunction]
    fn utilities_from_ranks(ranks: Vec<f64>) -> PyResult<Vec<f64>> {
        let r = RankVector::new(ranks).map_err(value_err)?;
        Ok(ranks_to_utilities(&r).map_err(value_err)?.into_vec())
    }

    /// C(a + k - 1, k) as an exact Python integer.
    #[pyfunction]
    fn count_matchups(py: Python<'_>, agents: u64, players: u64) -> PyResult<Bound<'_, PyAny>> {
        let digits = tournament::count_matchups(agents, players).to_string();
        py.get_type::<pyo3::types::PyInt>().call1((digits,))
    }

    /// Runs the matchup schedule and writes the dataset CSV to `out`.
    #[pyfunction]
    #[pyo3(signature = (out, seed, games=None, agents=None, iterations=1000, sample=1.0, workers=None, trials=1000, max_jobs=None))]
    #[allow(clippy::too_many_arguments)]
    fn run_tournament(
        py: Python<'_>,
        out: PathBuf,
        seed: u64,
        games: Option<Vec<String>>,
        agents: Option<Vec<String>>,
        iterations: u64,
        sample: f64,
        workers: Option<usize>,
        trials: usize,
        max_jobs: Option<usize>,
    ) -> PyResult<Bound<'_, PyDict>> {
        let games: Vec<GameId> = match games {
            Some(g) => g.iter().map(|n| game_id(n)).collect::<PyResult<_>>()?,
            None => GameId::ALL.to_vec(),
        };
        let pool: Vec<MctsSpec> = match agents {
            Some(a) => parse_agents(a)?.iter().filter_map(|x| x.mcts().copied()).collect(),
            None => MctsSpec::grid(),
        };
        if pool.is_empty() {
            return Err(PyValueError::new_err("agent pool has no MCTS agents"));
        }
        if !(sample > 0.0 && sample <= 1.0) {
            return Err(PyValueError::new_err("sample must be in (0, 1]"));
        }
        let mut opts = RunOptions::new(out, PlaySettings::iterations(iterations));
        opts.sample_fraction = sample;
        opts.workers = workers;
        opts.concept_trials = trials;
        opts.concept_seed = seed;
        opts.max_jobs = max_jobs;
        let jobs = tournament::generate_jobs(&games, &pool, seed);
        let report = py
            .detach(|| tournament::run_jobs(&jobs, &opts))
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        let d = PyDict::new(py);
        d.set_item("jobs_scheduled", report.jobs_scheduled)?;
        d.set_item("jobs_run", report.jobs_run)?;
        d.set_item("jobs_resumed", report.jobs_resumed)?;
        d.set_item("plays_done", report.plays_done)?;
        d.set_item("plays_failed", report.plays_failed)?;
        Ok(d)
    }

    /// Filters, merges, drops and encodes a dataset CSV. Returns the model
    /// table columns plus the drop report; writes the table when `out` is set.
    #[pyfunction]
    #[pyo3(signature = (input, out=None))]
    fn preprocess(py: Python<'_>, input: PathBuf, out: Option<PathBuf>) -> PyResult<Bound<'_, PyDict>> {
        let raw = RawDataset::read(&input).map_err(value_err)?;
        let (table, drops) = run_preprocess(&raw, &GameCatalog::builtin()).map_err(value_err)?;
        if let Some(p) = out {
            table.write_path(&p).map_err(value_err)?;
        }
        let d = PyDict::new(py);
        d.set_item("header", &table.header)?;
        d.set_item("games", &table.games)?;
        d.set_item("rows", &table.rows)?;
        d.set_item("target", TARGET_COLUMN)?;
        d.set_item("dropped_constant", &drops.constant)?;
        d.set_item("dropped_missing", &drops.missing)?;
        d.set_item("kept", &drops.kept)?;
        Ok(d)
    }
}
