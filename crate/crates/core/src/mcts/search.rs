//! Select / expand / playout / backpropagate loop with tree parallelisation.
//!
//! Workers share one [`SearchTree`]. Each iteration clones the root state,
//! reseeds its chance stream, descends with the agent's selection strategy
//! (adding a virtual loss to every edge it takes), expands one new node,
//! runs a playout and backs the result up. Iteration budgets are claimed
//! from a shared counter, so the root ends with exactly the budgeted number
//! of visits regardless of thread count.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::game::{GameState, Move, Seat, UtilityVector};
use crate::mcts::playout::run_playout;
use crate::mcts::scores::{
    grave_score, progressive_history_score, ucb1_score, ucb1_tuned_score, EdgeStats, MoveStats,
    GRAVE_BIAS, GRAVE_REF, PH_WEIGHT,
};
use crate::mcts::spec::{MctsSpec, Playout, Selection};
use crate::mcts::tables::{NGram, PolicyTables, MAX_NGRAM};
use crate::mcts::tree::{Node, SearchTree};

pub const DEFAULT_THREADS: usize = 4;
pub const DEFAULT_SECONDS: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("search started from a terminal state")]
    TerminalRoot,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid budget `{0}` (expected time:<seconds> or iters:<count>)")]
pub struct ParseBudgetError(pub String);

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SearchBudget {
    WallClock { seconds: f64, threads: usize },
    Iterations { count: u64, threads: usize },
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::WallClock {
            seconds: DEFAULT_SECONDS,
            threads: DEFAULT_THREADS,
        }
    }
}

impl SearchBudget {
    /// Single-threaded iteration budget (bit-reproducible).
    pub fn iterations(count: u64) -> Self {
        SearchBudget::Iterations { count, threads: 1 }
    }

    pub fn seconds(seconds: f64) -> Self {
        SearchBudget::WallClock {
            seconds,
            threads: DEFAULT_THREADS,
        }
    }

    pub fn threads(&self) -> usize {
        match *self {
            SearchBudget::WallClock { threads, .. } | SearchBudget::Iterations { threads, .. } => {
                threads.max(1)
            }
        }
    }

    pub fn with_threads(self, threads: usize) -> Self {
        match self {
            SearchBudget::WallClock { seconds, .. } => SearchBudget::WallClock { seconds, threads },
            SearchBudget::Iterations { count, .. } => SearchBudget::Iterations { count, threads },
        }
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self, SearchBudget::Iterations { threads: 1, .. })
    }
}

impl fmt::Display for SearchBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchBudget::WallClock { seconds, .. } => write!(f, "time:{seconds}"),
            SearchBudget::Iterations { count, .. } => write!(f, "iters:{count}"),
        }
    }
}

impl FromStr for SearchBudget {
    type Err = ParseBudgetError;

    /// `time:<seconds>` (4 threads) or `iters:<count>` (1 thread).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseBudgetError(s.to_string());
        let (kind, value) = s.trim().split_once(':').ok_or_else(err)?;
        match kind.trim() {
            "time" => {
                let secs: f64 = value.trim().parse().map_err(|_| err())?;
                if !(secs.is_finite() && secs >= 0.0) {
                    return Err(err());
                }
                Ok(SearchBudget::seconds(secs))
            }
            "iters" | "iterations" => Ok(SearchBudget::iterations(
                value.trim().parse().map_err(|_| err())?,
            )),
            _ => Err(err()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOutcome {
    pub chosen: Move,
    pub iterations: u64,
    /// True when no iteration completed and the move was drawn uniformly.
    pub fallback: bool,
}

/// Which tree-wide statistics an agent maintains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpdateFlags {
    pub amaf: bool,
    pub mast: bool,
    pub nst: bool,
}

impl UpdateFlags {
    pub fn for_spec(spec: &MctsSpec) -> Self {
        Self {
            amaf: spec.selection == Selection::Ucb1Grave,
            // Progressive History reads the MAST table as its history table
            mast: spec.playout == Playout::Mast || spec.selection == Selection::ProgressiveHistory,
            nst: spec.playout == Playout::Nst,
        }
    }

    pub fn all() -> Self {
        Self {
            amaf: true,
            mast: true,
            nst: true,
        }
    }
}

fn edge_score(
    selection: Selection,
    edge: EdgeStats,
    parent_visits: f64,
    c: f64,
    amaf: MoveStats,
    history: MoveStats,
) -> f64 {
    match selection {
        Selection::Ucb1 => ucb1_score(edge, parent_visits, c),
        Selection::Ucb1Tuned => ucb1_tuned_score(edge, parent_visits, c),
        Selection::Ucb1Grave => grave_score(edge, parent_visits, c, amaf, GRAVE_BIAS),
        Selection::ProgressiveHistory => {
            progressive_history_score(edge, parent_visits, c, history, PH_WEIGHT)
        }
    }
}

/// Index into `moves` of the edge maximising the strategy's score at `node`
/// for `seat`; exact ties are broken uniformly. `amaf_source` supplies GRAVE's
/// AMAF statistics.
#[allow(clippy::too_many_arguments)]
pub fn select_child<R: Rng + ?Sized>(
    node: &Node,
    seat: Seat,
    moves: &[Move],
    selection: Selection,
    c: f64,
    amaf_source: &Node,
    tables: &PolicyTables,
    rng: &mut R,
) -> usize {
    let children = node.children_guard();
    let parent_visits = node.effective_visits();
    let amaf = (selection == Selection::Ucb1Grave).then(|| amaf_source.amaf_guard());
    let mut best = f64::NEG_INFINITY;
    let mut pick = 0;
    let mut ties = 0u32;
    for (i, mv) in moves.iter().enumerate() {
        let edge = Node::find_in(&children, seat, mv.code)
            .map(|n| n.effective_stats())
            .unwrap_or_default();
        let amaf_stats = amaf
            .as_ref()
            .and_then(|t| t.get(&(seat as u8, mv.code)).copied())
            .unwrap_or_default();
        let history = if selection == Selection::ProgressiveHistory {
            tables.mast(seat, mv.code)
        } else {
            MoveStats::default()
        };
        let score = edge_score(selection, edge, parent_visits, c, amaf_stats, history);
        if score > best {
            best = score;
            pick = i;
            ties = 1;
        } else if score == best {
            ties += 1;
            if rng.random_range(0..ties) == 0 {
                pick = i;
            }
        }
    }
    pick
}

/// Backs `utilities` up along `path` (root first; `path[i + 1]` is reached
/// by `sequence[i]`), removes the virtual losses taken on descent and updates
/// the statistics selected by `flags`:
///
/// * AMAF: every path node credits each distinct (seat, move) played at or
///   after it, tree and playout moves alike, with that seat's utility.
/// * MAST: every move in `sequence`, credited to its mover.
/// * NST: every 1-, 2- and 3-gram in `sequence`, credited to the mover of its
///   last move.
pub fn backpropagate(
    path: &[Arc<Node>],
    sequence: &[(Seat, Move)],
    utilities: &UtilityVector,
    tables: &PolicyTables,
    flags: UpdateFlags,
) {
    let u = utilities.as_slice();
    for (i, node) in path.iter().enumerate() {
        node.record(node.perspective(u));
        if i > 0 {
            node.remove_virtual_loss();
        }
    }
    if flags.amaf {
        let mut later: FxHashSet<(u8, u32)> = FxHashSet::default();
        let mut j = sequence.len();
        for i in (0..path.len()).rev() {
            while j > i {
                j -= 1;
                later.insert((sequence[j].0 as u8, sequence[j].1.code));
            }
            if later.is_empty() {
                continue;
            }
            let mut amaf = path[i].amaf_guard();
            for &(seat, code) in &later {
                let e = amaf.entry((seat, code)).or_default();
                e.count += 1.0;
                e.value_sum += u[seat as usize];
            }
        }
    }
    if flags.mast {
        for &(seat, mv) in sequence {
            tables.record_mast(seat, mv.code, u[seat]);
        }
    }
    if flags.nst {
        for (end, &(seat, _)) in sequence.iter().enumerate() {
            for n in 1..=MAX_NGRAM {
                if let Some(gram) = NGram::ending_at(sequence, end, n) {
                    tables.record_nst(gram, u[seat]);
                }
            }
        }
    }
}

struct Worker<'a, S> {
    spec: &'a MctsSpec,
    c: f64,
    flags: UpdateFlags,
    root: &'a Arc<Node>,
    tables: &'a PolicyTables,
    root_state: &'a S,
    path: Vec<Arc<Node>>,
    sequence: Vec<(Seat, Move)>,
    moves: Vec<Move>,
}

impl<'a, S: GameState> Worker<'a, S> {
    fn new(spec: &'a MctsSpec, tree: &'a SearchTree, root_state: &'a S) -> Self {
        Self {
            spec,
            c: spec.exploration.value(),
            flags: UpdateFlags::for_spec(spec),
            root: tree.root(),
            tables: tree.tables(),
            root_state,
            path: Vec::new(),
            sequence: Vec::new(),
            moves: Vec::new(),
        }
    }

    fn iterate<R: Rng>(&mut self, rng: &mut R) {
        let mut state = self.root_state.clone();
        if S::descriptor().stochastic {
            state.reseed_chance(rng.random());
        }
        self.path.clear();
        self.sequence.clear();
        let mut node = self.root.clone();
        let mut amaf_source = self.root.clone();
        self.path.push(node.clone());
        while !state.is_terminal() {
            if self.flags.amaf && node.visits() >= GRAVE_REF {
                amaf_source = node.clone();
            }
            let seat = state.mover();
            state.legal_moves_into(&mut self.moves);
            let idx = select_child(
                &node,
                seat,
                &self.moves,
                self.spec.selection,
                self.c,
                &amaf_source,
                self.tables,
                rng,
            );
            let mv = self.moves[idx];
            let (child, created) = node.get_or_insert_child(seat, mv.code);
            child.add_virtual_loss();
            state.play(mv);
            self.sequence.push((seat, mv));
            self.path.push(child.clone());
            node = child;
            if created {
                break;
            }
        }
        let utilities = if state.is_terminal() {
            state.utilities().expect("terminal state has utilities")
        } else {
            run_playout(
                &mut state,
                self.spec.playout,
                self.tables,
                &mut self.sequence,
                rng,
            )
        };
        backpropagate(&self.path, &self.sequence, &utilities, self.tables, self.flags);
    }
}

#[allow(clippy::too_many_arguments)]
fn run_worker<S: GameState>(
    spec: &MctsSpec,
    tree: &SearchTree,
    root_state: &S,
    budget: &SearchBudget,
    claimed: &AtomicU64,
    completed: &AtomicU64,
    deadline: Option<Instant>,
    seed: u64,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worker = Worker::new(spec, tree, root_state);
    loop {
        match *budget {
            SearchBudget::Iterations { count, .. } => {
                if claimed.fetch_add(1, Ordering::Relaxed) >= count {
                    break;
                }
            }
            SearchBudget::WallClock { .. } => {
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    break;
                }
            }
        }
        worker.iterate(&mut rng);
        completed.fetch_add(1, Ordering::Relaxed);
    }
}

/// Runs a search from `root_state` into `tree` (fresh or already advanced to
/// this state) and returns the robust child: most visits, then higher mean,
/// then uniform. A state with one legal move returns it without searching.
pub fn search<S: GameState, R: Rng + ?Sized>(
    root_state: &S,
    spec: &MctsSpec,
    budget: &SearchBudget,
    tree: &mut SearchTree,
    rng: &mut R,
) -> Result<SearchOutcome, SearchError> {
    if root_state.is_terminal() {
        return Err(SearchError::TerminalRoot);
    }
    let legal = root_state.legal_moves();
    if legal.len() == 1 {
        return Ok(SearchOutcome {
            chosen: legal[0],
            iterations: 0,
            fallback: false,
        });
    }

    let threads = budget.threads();
    let seeds: Vec<u64> = (0..threads).map(|_| rng.random()).collect();
    let claimed = AtomicU64::new(0);
    let completed = AtomicU64::new(0);
    let deadline = match *budget {
        SearchBudget::WallClock { seconds, .. } => {
            Some(Instant::now() + Duration::from_secs_f64(seconds))
        }
        SearchBudget::Iterations { .. } => None,
    };
    {
        let tree = &*tree;
        let work = |seed| {
            run_worker(
                spec, tree, root_state, budget, &claimed, &completed, deadline, seed,
            )
        };
        if threads == 1 {
            work(seeds[0]);
        } else {
            std::thread::scope(|scope| {
                for &seed in &seeds[1..] {
                    scope.spawn(move || work(seed));
                }
                work(seeds[0]);
            });
        }
    }
    let iterations = completed.load(Ordering::Relaxed);

    let seat = root_state.mover();
    let root = tree.root();
    let mut best: Option<(u64, f64)> = None;
    let mut pick = None;
    let mut ties = 0u32;
    for mv in &legal {
        let Some(child) = root.child(seat, mv.code) else {
            continue;
        };
        let key = (child.visits(), child.stats().mean());
        if key.0 == 0 {
            continue;
        }
        let better = match best {
            None => true,
            Some((v, q)) => key.0 > v || (key.0 == v && key.1 > q),
        };
        if better {
            best = Some(key);
            pick = Some(*mv);
            ties = 1;
        } else if best == Some(key) {
            ties += 1;
            if rng.random_range(0..ties) == 0 {
                pick = Some(*mv);
            }
        }
    }
    Ok(match pick {
        Some(chosen) => SearchOutcome {
            chosen,
            iterations,
            fallback: false,
        },
        None => SearchOutcome {
            chosen: legal[rng.random_range(0..legal.len())],
            iterations,
            fallback: true,
        },
    })
}
