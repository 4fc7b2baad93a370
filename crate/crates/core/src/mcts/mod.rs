//! MCTS agents: the variant grid, bandit scores, playout policies and the
//! parallel search itself.

pub mod playout;
pub mod scores;
pub mod search;
pub mod spec;
pub mod tables;
pub mod tree;

pub use search::{
    backpropagate, search, select_child, ParseBudgetError, SearchBudget, SearchError,
    SearchOutcome, UpdateFlags,
};
pub use spec::{AgentSpec, Exploration, MctsSpec, ParseAgentError, Playout, Selection};
pub use tables::{NGram, PolicyTables};
pub use tree::{Node, SearchTree, DECAY};
