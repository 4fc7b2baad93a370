//! Playout phase: uniform random, MAST and NST move selection.

use rand::Rng;

use crate::game::{GameState, Move, Seat, UtilityVector};
use crate::mcts::spec::Playout;
use crate::mcts::tables::{NGram, PolicyTables, MAX_NGRAM};

/// Exploration rate of the epsilon-greedy MAST and NST policies.
pub const EPSILON: f64 = 0.1;

/// NST only trusts n-grams seen at least this many times.
pub const NST_MIN_COUNT: u64 = 7;

/// NST estimate for `mv`: the mean over the 1/2/3-grams ending in `mv`
/// observed at least [`NST_MIN_COUNT`] times; otherwise the 1-gram mean when
/// it exists; otherwise 0.
pub fn nst_value(tables: &PolicyTables, history: &[(Seat, Move)], seat: Seat, mv: Move) -> f64 {
    let mut sum = 0.0;
    let mut qualifying = 0usize;
    let mut unigram = None;
    for n in 1..=MAX_NGRAM {
        let Some(gram) = NGram::extending(history, seat, mv, n) else {
            break;
        };
        let (stats, observed) = tables.nst_observed(&gram);
        if n == 1 {
            unigram = Some(stats);
        }
        if observed >= NST_MIN_COUNT {
            sum += stats.mean();
            qualifying += 1;
        }
    }
    if qualifying > 0 {
        sum / qualifying as f64
    } else {
        unigram.filter(|s| s.count > 0.0).map_or(0.0, |s| s.mean())
    }
}

fn greedy<R: Rng + ?Sized>(moves: &[Move], rng: &mut R, value: impl Fn(Move) -> f64) -> Move {
    let mut best = f64::NEG_INFINITY;
    let mut pick = moves[0];
    let mut ties = 0u32;
    for &m in moves {
        let v = value(m);
        if v > best {
            best = v;
            pick = m;
            ties = 1;
        } else if v == best {
            ties += 1;
            if rng.random_range(0..ties) == 0 {
                pick = m;
            }
        }
    }
    pick
}

/// Picks a playout move among `moves` (non-empty) for `seat`.
pub fn choose_playout_move<R: Rng + ?Sized>(
    moves: &[Move],
    seat: Seat,
    playout: Playout,
    tables: &PolicyTables,
    history: &[(Seat, Move)],
    epsilon: f64,
    rng: &mut R,
) -> Move {
    debug_assert!(!moves.is_empty());
    let uniform = |rng: &mut R| moves[rng.random_range(0..moves.len())];
    match playout {
        Playout::Random0 | Playout::Random4 | Playout::Random200 => uniform(rng),
        Playout::Mast => {
            if rng.random_bool(epsilon) {
                uniform(rng)
            } else {
                greedy(moves, rng, |m| tables.mast(seat, m.code).mean())
            }
        }
        Playout::Nst => {
            if rng.random_bool(epsilon) {
                uniform(rng)
            } else {
                greedy(moves, rng, |m| nst_value(tables, history, seat, m))
            }
        }
    }
}

/// Playout move for a non-terminal `state`.
pub fn playout_policy_move<S: GameState, R: Rng + ?Sized>(
    state: &S,
    playout: Playout,
    tables: &PolicyTables,
    history: &[(Seat, Move)],
    epsilon: f64,
    rng: &mut R,
) -> Move {
    let moves = state.legal_moves();
    choose_playout_move(&moves, state.mover(), playout, tables, history, epsilon, rng)
}

/// Plays from `state` until terminal or until the playout's move cap,
/// appending the moves to `sequence` (whose existing tail provides NST
/// context). Terminal states yield their utilities; a cap stop yields zeros.
pub fn run_playout<S: GameState, R: Rng + ?Sized>(
    state: &mut S,
    playout: Playout,
    tables: &PolicyTables,
    sequence: &mut Vec<(Seat, Move)>,
    rng: &mut R,
) -> UtilityVector {
    let mut moves = Vec::new();
    let cap = playout.max_moves();
    let mut played = 0;
    while !state.is_terminal() && played < cap {
        state.legal_moves_into(&mut moves);
        let seat = state.mover();
        let mv = choose_playout_move(&moves, seat, playout, tables, sequence, EPSILON, rng);
        state.play(mv);
        sequence.push((seat, mv));
        played += 1;
    }
    state
        .utilities()
        .unwrap_or_else(|| UtilityVector::zeros(S::descriptor().players))
}
