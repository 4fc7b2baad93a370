//! Game abstraction shared by the engine, the tournament runner and the
//! concept extractor.
//!
//! Games are plain structs implementing [`GameState`]. Chance events (dice)
//! are resolved inside [`GameState::play`] by drawing from the state's own
//! [`ChanceStream`], so callers never observe a chance node: `mover()` always
//! names a real seat.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::games::GameId;

/// Zero-based seat index. Seat 0 is "player 1" in the dataset.
pub type Seat = usize;

/// Utility tolerance used for range and zero-sum checks.
pub const UTILITY_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("illegal move {code} ({tag}) in state {state}")]
    IllegalMove {
        state: String,
        code: u32,
        tag: MoveTag,
    },
    #[error("utility {0} outside [-1, 1]")]
    UtilityOutOfRange(f64),
    #[error("invalid ranking {0:?}")]
    InvalidRanks(Vec<f64>),
    #[error("rank-to-utility mapping needs at least two players, got {0}")]
    TooFewPlayers(usize),
    #[error("unknown game `{0}`")]
    UnknownGame(String),
}

/// Categorical move label, used for move-type frequency concepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveTag {
    Place,
    Step,
    Capture,
    Remove,
    Roll,
    Pass,
}

impl MoveTag {
    pub const ALL: [MoveTag; 6] = [
        MoveTag::Place,
        MoveTag::Step,
        MoveTag::Capture,
        MoveTag::Remove,
        MoveTag::Roll,
        MoveTag::Pass,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            MoveTag::Place => "PLACE",
            MoveTag::Step => "STEP",
            MoveTag::Capture => "CAPTURE",
            MoveTag::Remove => "REMOVE",
            MoveTag::Roll => "ROLL",
            MoveTag::Pass => "PASS",
        }
    }
}

impl fmt::Display for MoveTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A legal move. `code` is the game's stable serialization of the move
/// (cell, column, source/destination pair, ...) and is what playout tables
/// and tree edges are keyed by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub code: u32,
    pub tag: MoveTag,
}

impl Move {
    pub const fn new(code: u32, tag: MoveTag) -> Self {
        Self { code, tag }
    }
}

/// Per-seat utilities in `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct UtilityVector(Vec<f64>);

impl UtilityVector {
    pub fn new(values: Vec<f64>) -> Result<Self, GameError> {
        for &u in &values {
            if !(-1.0 - UTILITY_EPS..=1.0 + UTILITY_EPS).contains(&u) {
                return Err(GameError::UtilityOutOfRange(u));
            }
        }
        Ok(Self(values))
    }

    pub fn zeros(players: usize) -> Self {
        Self(vec![0.0; players])
    }

    /// Two-player win for `winner`.
    pub fn win(winner: Seat) -> Self {
        let mut v = vec![-1.0; 2];
        v[winner] = 1.0;
        Self(v)
    }

    pub fn get(&self, seat: Seat) -> f64 {
        self.0[seat]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn is_zero_sum(&self) -> bool {
        self.sum().abs() <= UTILITY_EPS
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Per-seat ranks; ties share the mean of the ranks they occupy.
#[derive(Clone, Debug, PartialEq)]
pub struct RankVector(Vec<f64>);

impl RankVector {
    pub fn new(ranks: Vec<f64>) -> Result<Self, GameError> {
        let k = ranks.len() as f64;
        let expected = k * (k + 1.0) / 2.0;
        let valid = !ranks.is_empty()
            && ranks.iter().all(|&r| (1.0..=k).contains(&r))
            && (ranks.iter().sum::<f64>() - expected).abs() <= UTILITY_EPS;
        if valid {
            Ok(Self(ranks))
        } else {
            Err(GameError::InvalidRanks(ranks))
        }
    }

    /// Ranks from scores where a higher score is better.
    pub fn from_scores(scores: &[f64]) -> Self {
        let ranks = scores
            .iter()
            .map(|&s| {
                let better = scores.iter().filter(|&&o| o > s).count() as f64;
                let tied = scores.iter().filter(|&&o| o == s).count() as f64;
                // occupied ranks are better+1 ..= better+tied
                better + (tied + 1.0) / 2.0
            })
            .collect();
        Self(ranks)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Linear rank-to-utility map: rank 1 -> 1, rank k -> -1.
pub fn utilities_from_ranks(ranks: &RankVector) -> Result<UtilityVector, GameError> {
    let k = ranks.len();
    if k < 2 {
        return Err(GameError::TooFewPlayers(k));
    }
    let span = (k - 1) as f64;
    Ok(UtilityVector(
        ranks
            .as_slice()
            .iter()
            .map(|&r| 1.0 - 2.0 * (r - 1.0) / span)
            .collect(),
    ))
}

/// Seeded source of chance outcomes carried by stochastic game states.
#[derive(Clone, PartialEq)]
pub struct ChanceStream(ChaCha8Rng);

impl ChanceStream {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform die roll in `1..=sides`.
    pub fn roll(&mut self, sides: u8) -> u8 {
        self.0.random_range(1..=sides)
    }
}

impl fmt::Debug for ChanceStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ChanceStream({:02x?}@{})",
            self.0.get_seed(),
            self.0.get_word_pos()
        )
    }
}

/// Static rule properties of a game; the static slice of its concept vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RuleFlags {
    pub board: bool,
    pub square_tiling: bool,
    pub hex_tiling: bool,
    pub dice: bool,
    pub placement: bool,
    pub piece_movement: bool,
    pub capture: bool,
    pub line_goal: bool,
    pub connection_goal: bool,
    pub race_goal: bool,
    pub elimination_goal: bool,
    pub score_goal: bool,
    pub removal: bool,
}

impl RuleFlags {
    pub const NAMES: [&'static str; 13] = [
        "Board",
        "SquareTiling",
        "HexTiling",
        "Dice",
        "Placement",
        "PieceMovement",
        "Capture",
        "LineGoal",
        "ConnectionGoal",
        "RaceGoal",
        "EliminationGoal",
        "ScoreGoal",
        "Removal",
    ];

    pub fn values(&self) -> [bool; 13] {
        [
            self.board,
            self.square_tiling,
            self.hex_tiling,
            self.dice,
            self.placement,
            self.piece_movement,
            self.capture,
            self.line_goal,
            self.connection_goal,
            self.race_goal,
            self.elimination_goal,
            self.score_goal,
            self.removal,
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameDescriptor {
    pub id: GameId,
    pub name: &'static str,
    pub players: usize,
    pub zero_sum: bool,
    pub stochastic: bool,
    pub flags: RuleFlags,
}

/// A game position. Implementations must be cheap to clone: search clones
/// the root once per iteration and then mutates in place.
pub trait GameState: Clone + fmt::Debug + Send + Sync + 'static {
    fn descriptor() -> &'static GameDescriptor
    where
        Self: Sized;

    /// Initial position. `seed` initialises the chance stream of stochastic
    /// games and is ignored by deterministic ones.
    fn new_game(seed: u64) -> Self
    where
        Self: Sized;

    /// Seat to move. Meaningless once terminal.
    fn mover(&self) -> Seat;

    fn is_terminal(&self) -> bool;

    /// Appends legal moves to `out` (cleared first) in a deterministic order.
    fn legal_moves_into(&self, out: &mut Vec<Move>);

    /// Applies a move known to be legal, resolving any chance event it
    /// triggers.
    fn play(&mut self, mv: Move);

    /// `Some` iff terminal.
    fn utilities(&self) -> Option<UtilityVector>;

    /// Replaces the chance stream; no-op for deterministic games.
    fn reseed_chance(&mut self, _seed: u64) {}

    /// Canonical serialization; equal states give equal strings.
    fn snapshot(&self) -> String {
        format!("{self:?}")
    }

    fn legal_moves(&self) -> Vec<Move> {
        let mut out = Vec::new();
        self.legal_moves_into(&mut out);
        out
    }

    fn apply_move(&self, mv: Move) -> Result<Self, GameError>
    where
        Self: Sized,
    {
        if !self.legal_moves().contains(&mv) {
            return Err(GameError::IllegalMove {
                state: self.snapshot(),
                code: mv.code,
                tag: mv.tag,
            });
        }
        let mut next = self.clone();
        next.play(mv);
        Ok(next)
    }

    /// Looks a legal move up by its code.
    fn find_move(&self, code: u32) -> Option<Move> {
        self.legal_moves().into_iter().find(|m| m.code == code)
    }
}
