//! Monte-Carlo Tree Search variant grid, a small built-in game suite, a
//! tournament runner that emits an outcome dataset, and the preprocessing
//! that turns that dataset into a model-ready table.

pub mod game;
pub mod games;
pub mod mcts;
pub mod play;
pub mod concepts;
pub mod tournament;
pub mod preprocess;
pub mod config;
pub mod cli;

pub use game::{GameState, Move, MoveTag, RankVector, UtilityVector};
pub use games::GameId;
pub use mcts::{AgentSpec, MctsSpec, SearchBudget};
pub use play::{run_play, run_play_dyn, PlayRecord, PlaySettings};
