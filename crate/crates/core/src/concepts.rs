//! Per-game feature vectors: static rule flags plus statistics of plays
//! between uniform-random agents.

use std::fmt;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::game::{GameState, MoveTag, RuleFlags, UTILITY_EPS};
use crate::games::GameId;
use crate::play::{derive_seed, DEFAULT_MOVE_CAP};

pub const DEFAULT_TRIALS: usize = 1000;

pub const FEATURE_COUNT: usize = 32;

/// Column names, in vector order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "Players",
    "ZeroSum",
    "Stochastic",
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
    "BranchingFactorMean",
    "BranchingFactorMax",
    "PlayLengthMean",
    "PlayLengthStd",
    "DrawRate",
    "CompletionRate",
    "TimeoutRate",
    "AdvantageP1",
    "Balance",
    "Decisiveness",
    "PlaceFrequency",
    "StepFrequency",
    "CaptureFrequency",
    "RemoveFrequency",
    "RollFrequency",
    "PassFrequency",
];

const FLAGS_AT: usize = 3;
const STATS_AT: usize = FLAGS_AT + RuleFlags::NAMES.len();
const TAGS_AT: usize = STATS_AT + 10;

#[derive(Clone, Debug, PartialEq)]
pub struct ConceptVector {
    pub game: GameId,
    values: [f64; FEATURE_COUNT],
}

impl ConceptVector {
    pub fn names() -> &'static [&'static str] {
        &FEATURE_NAMES
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        FEATURE_NAMES.iter().copied().zip(self.values.iter().copied())
    }

    pub fn draw_rate(&self) -> f64 {
        self.values[STATS_AT + 4]
    }

    pub fn advantage_p1(&self) -> f64 {
        self.values[STATS_AT + 7]
    }

    /// Feature values formatted for CSV output.
    pub fn csv_fields(&self) -> Vec<String> {
        self.values.iter().map(|v| format_feature(*v)).collect()
    }
}

/// Shortest representation that round-trips; integers print without a
/// fractional part.
pub fn format_feature(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

impl fmt::Display for ConceptVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, v) in self.iter() {
            writeln!(f, "{name:>20} {v:.6}")?;
        }
        Ok(())
    }
}

/// Running totals over random plays.
#[derive(Default)]
struct Tally {
    decisions: f64,
    branching_sum: f64,
    branching_max: usize,
    length_sum: f64,
    length_sq_sum: f64,
    completed: usize,
    draws: usize,
    decisive: usize,
    seat_utility: Vec<f64>,
    tag_counts: [f64; MoveTag::ALL.len()],
    moves: f64,
}

fn random_play<S: GameState>(seed: u64, cap: usize, t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1));
    let mut state = S::new_game(derive_seed(seed, 0));
    let mut moves = Vec::new();
    let mut length = 0usize;
    while !state.is_terminal() && length < cap {
        state.legal_moves_into(&mut moves);
        t.decisions += 1.0;
        t.branching_sum += moves.len() as f64;
        t.branching_max = t.branching_max.max(moves.len());
        let mv = *moves.choose(&mut rng).expect("non-terminal state has moves");
        t.tag_counts[mv.tag.index()] += 1.0;
        t.moves += 1.0;
        state.play(mv);
        length += 1;
    }
    t.length_sum += length as f64;
    t.length_sq_sum += (length * length) as f64;
    let Some(u) = state.utilities() else {
        // cap reached: counts as a timeout with all-zero utilities
        return;
    };
    t.completed += 1;
    let u = u.as_slice();
    for (acc, x) in t.seat_utility.iter_mut().zip(u) {
        *acc += x;
    }
    let hi = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = u.iter().copied().fold(f64::INFINITY, f64::min);
    if u.len() >= 2 && hi - lo <= UTILITY_EPS {
        t.draws += 1;
    }
    let top = u.iter().filter(|x| hi - **x <= UTILITY_EPS).count();
    // a solo game is decided when it is won outright
    let decided = if u.len() == 1 { u[0] > 0.0 } else { top == 1 };
    if decided {
        t.decisive += 1;
    }
}

/// Feature vector of `S` from `trials` seeded random-vs-random plays, each
/// stopped at `move_cap` moves.
pub fn compute_concepts_for<S: GameState>(trials: usize, seed: u64, move_cap: usize) -> ConceptVector {
    let desc = S::descriptor();
    let trials = trials.max(1);
    let mut t = Tally {
        seat_utility: vec![0.0; desc.players],
        ..Tally::default()
    };
    for i in 0..trials {
        random_play::<S>(derive_seed(seed, i as u64), move_cap, &mut t);
    }

    let n = trials as f64;
    let mut v = [0.0; FEATURE_COUNT];
    v[0] = desc.players as f64;
    v[1] = f64::from(u8::from(desc.zero_sum));
    v[2] = f64::from(u8::from(desc.stochastic));
    for (i, flag) in desc.flags.values().into_iter().enumerate() {
        v[FLAGS_AT + i] = f64::from(u8::from(flag));
    }
    let seat_means: Vec<f64> = t.seat_utility.iter().map(|s| s / n).collect();
    let mean_len = t.length_sum / n;
    let s = &mut v[STATS_AT..TAGS_AT];
    s[0] = if t.decisions > 0.0 {
        t.branching_sum / t.decisions
    } else {
        0.0
    };
    s[1] = t.branching_max as f64;
    s[2] = mean_len;
    s[3] = (t.length_sq_sum / n - mean_len * mean_len).max(0.0).sqrt();
    s[4] = t.draws as f64 / n;
    s[5] = t.completed as f64 / n;
    s[6] = 1.0 - s[5];
    s[7] = seat_means[0];
    let hi = seat_means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = seat_means.iter().copied().fold(f64::INFINITY, f64::min);
    s[8] = 1.0 - (hi - lo) / 2.0;
    s[9] = t.decisive as f64 / n;
    for (i, c) in t.tag_counts.iter().enumerate() {
        v[TAGS_AT + i] = if t.moves > 0.0 { c / t.moves } else { 0.0 };
    }
    ConceptVector {
        game: desc.id,
        values: v,
    }
}

pub fn compute_concepts(game: GameId, trials: usize, seed: u64) -> ConceptVector {
    crate::with_game!(game, G => compute_concepts_for::<G>(trials, seed, DEFAULT_MOVE_CAP))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_consistent() {
        assert_eq!(&FEATURE_NAMES[FLAGS_AT..STATS_AT], &RuleFlags::NAMES);
        assert_eq!(FEATURE_NAMES[STATS_AT + 4], "DrawRate");
        assert_eq!(FEATURE_NAMES[STATS_AT + 7], "AdvantageP1");
        for (i, tag) in MoveTag::ALL.iter().enumerate() {
            let name = FEATURE_NAMES[TAGS_AT + i].to_ascii_uppercase();
            assert!(name.starts_with(tag.name()), "{name}");
        }
        assert_eq!(TAGS_AT + MoveTag::ALL.len(), FEATURE_COUNT);
    }

    #[test]
    fn hex_never_draws() {
        let c = compute_concepts(GameId::Hex, 200, 1);
        assert_eq!(c.draw_rate(), 0.0);
        assert_eq!(c.get("CompletionRate"), Some(1.0));
    }

    #[test]
    fn ranges_hold_for_every_game() {
        for g in GameId::ALL {
            let c = compute_concepts(g, 60, 4);
            for name in [
                "DrawRate",
                "CompletionRate",
                "TimeoutRate",
                "Balance",
                "Decisiveness",
            ] {
                let v = c.get(name).unwrap();
                assert!((0.0..=1.0).contains(&v), "{g} {name} {v}");
            }
            assert!(c.advantage_p1().abs() <= 1.0);
            assert!(c.get("PlayLengthMean").unwrap() >= 1.0);
            let freq: f64 = c.values()[TAGS_AT..].iter().sum();
            assert!((freq - 1.0).abs() < 1e-9, "{g}");
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            compute_concepts(GameId::Pig, 50, 9),
            compute_concepts(GameId::Pig, 50, 9)
        );
    }
}
