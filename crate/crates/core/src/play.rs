//! Running one complete play between seated agents.

use std::fmt;

use rand::seq::IndexedRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::game::{GameState, Move, Seat, UtilityVector};
use crate::games::GameId;
use crate::mcts::{search, AgentSpec, MctsSpec, SearchBudget, SearchError, SearchTree};

pub const DEFAULT_MOVE_CAP: usize = 5000;

/// Independent 64-bit seed for sub-stream `stream` of `base`.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(stream);
    rng.next_u64()
}

#[derive(Debug, Error)]
pub enum PlayError {
    #[error("game needs {expected} agents, got {got}")]
    WrongAgentCount { expected: usize, got: usize },
    #[error("agent in seat {seat} failed: {source}")]
    Agent {
        seat: Seat,
        #[source]
        source: SearchError,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaySettings {
    pub budget: SearchBudget,
    pub move_cap: usize,
}

impl Default for PlaySettings {
    fn default() -> Self {
        Self {
            budget: SearchBudget::default(),
            move_cap: DEFAULT_MOVE_CAP,
        }
    }
}

impl PlaySettings {
    pub fn iterations(count: u64) -> Self {
        Self {
            budget: SearchBudget::iterations(count),
            move_cap: DEFAULT_MOVE_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlayRecord {
    pub game: GameId,
    pub agents: Vec<AgentSpec>,
    pub utilities: UtilityVector,
    pub length: usize,
    /// The global move cap ended the play; utilities are all zero.
    pub capped: bool,
    pub moves: Vec<(Seat, Move)>,
    /// Searches that completed no iteration and fell back to a random move.
    pub fallbacks: usize,
}

/// One realized move, handed to a play observer.
pub struct PlayStep<'a> {
    pub ply: usize,
    pub seat: Seat,
    pub agent: &'a AgentSpec,
    pub mv: Move,
    pub iterations: u64,
    pub state: &'a dyn fmt::Debug,
}

enum Player {
    Random(ChaCha8Rng),
    Mcts {
        spec: MctsSpec,
        tree: SearchTree,
        /// Moves realized since this agent last searched.
        pending: Vec<(Seat, u32)>,
        rng: ChaCha8Rng,
    },
}

impl Player {
    fn new(agent: &AgentSpec, seed: u64) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(seed);
        match agent {
            AgentSpec::Random => Player::Random(rng),
            AgentSpec::Mcts(spec) => Player::Mcts {
                spec: *spec,
                tree: SearchTree::new(),
                pending: Vec::new(),
                rng,
            },
        }
    }

    fn choose<S: GameState>(
        &mut self,
        state: &S,
        budget: &SearchBudget,
    ) -> Result<(Move, u64, bool), SearchError> {
        match self {
            Player::Random(rng) => {
                let moves = state.legal_moves();
                let mv = *moves.choose(rng).ok_or(SearchError::TerminalRoot)?;
                Ok((mv, 0, false))
            }
            Player::Mcts {
                spec,
                tree,
                pending,
                rng,
            } => {
                if !pending.is_empty() {
                    tree.advance_root(pending);
                    pending.clear();
                }
                let out = search(state, spec, budget, tree, rng)?;
                Ok((out.chosen, out.iterations, out.fallback))
            }
        }
    }

    fn observe(&mut self, seat: Seat, mv: Move) {
        if let Player::Mcts { pending, .. } = self {
            pending.push((seat, mv.code));
        }
    }
}

/// Plays one game of `S` with `agents[i]` in seat `i`.
pub fn run_play<S: GameState>(
    agents: &[AgentSpec],
    settings: &PlaySettings,
    seed: u64,
) -> Result<PlayRecord, PlayError> {
    run_play_observed::<S>(agents, settings, seed, &mut |_| {})
}

pub fn run_play_observed<S: GameState>(
    agents: &[AgentSpec],
    settings: &PlaySettings,
    seed: u64,
    observer: &mut dyn FnMut(&PlayStep<'_>),
) -> Result<PlayRecord, PlayError> {
    let desc = S::descriptor();
    if agents.len() != desc.players {
        return Err(PlayError::WrongAgentCount {
            expected: desc.players,
            got: agents.len(),
        });
    }
    let mut players: Vec<Player> = agents
        .iter()
        .enumerate()
        .map(|(i, a)| Player::new(a, derive_seed(seed, 1 + i as u64)))
        .collect();
    let mut state = S::new_game(derive_seed(seed, 0));
    let mut moves = Vec::new();
    let mut fallbacks = 0;
    while !state.is_terminal() && moves.len() < settings.move_cap {
        let seat = state.mover();
        let (mv, iterations, fallback) = players[seat]
            .choose(&state, &settings.budget)
            .map_err(|source| PlayError::Agent { seat, source })?;
        fallbacks += usize::from(fallback);
        state.play(mv);
        moves.push((seat, mv));
        for p in &mut players {
            p.observe(seat, mv);
        }
        observer(&PlayStep {
            ply: moves.len(),
            seat,
            agent: &agents[seat],
            mv,
            iterations,
            state: &state,
        });
    }
    let (utilities, capped) = match state.utilities() {
        Some(u) => (u, false),
        None => (UtilityVector::zeros(desc.players), true),
    };
    Ok(PlayRecord {
        game: desc.id,
        agents: agents.to_vec(),
        utilities,
        length: moves.len(),
        capped,
        moves,
        fallbacks,
    })
}

/// [`run_play`] for a game chosen at runtime.
pub fn run_play_dyn(
    game: GameId,
    agents: &[AgentSpec],
    settings: &PlaySettings,
    seed: u64,
) -> Result<PlayRecord, PlayError> {
    crate::with_game!(game, G => run_play::<G>(agents, settings, seed))
}

pub fn run_play_dyn_observed(
    game: GameId,
    agents: &[AgentSpec],
    settings: &PlaySettings,
    seed: u64,
    observer: &mut dyn FnMut(&PlayStep<'_>),
) -> Result<PlayRecord, PlayError> {
    crate::with_game!(game, G => run_play_observed::<G>(agents, settings, seed, observer))
}
