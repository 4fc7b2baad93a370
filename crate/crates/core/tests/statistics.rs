//! Seeded statistical checks and the worked examples of the operation
//! contracts.

use mcts_atlas_core::game::{utilities_from_ranks, GameState, Move, MoveTag, RankVector};
use mcts_atlas_core::games::{GameId, Hex, Pig, TicTacToe};
use mcts_atlas_core::mcts::playout::{choose_playout_move, run_playout};
use mcts_atlas_core::mcts::scores::{
    grave_beta, grave_score, progressive_history_bias, ucb1_score, ucb1_tuned_score, EdgeStats,
    MoveStats, GRAVE_BIAS, UNVISITED,
};
use mcts_atlas_core::mcts::{select_child, Node, Playout, PolicyTables, SearchTree, Selection};
use mcts_atlas_core::play::{run_play_dyn, PlaySettings};
use mcts_atlas_core::AgentSpec;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn score_examples() {
    // 0.5 + 0.6 * sqrt(ln 100 / 10)
    let u = ucb1_score(EdgeStats::new(10.0, 5.0, 5.0), 100.0, 0.6);
    assert!((u - 0.907_168_425_464_906_7).abs() < 1e-9);

    // variance 0.2 at n = 10, N = 100: V = 0.2 + sqrt(2 ln 100 / 10) > 1
    let e = EdgeStats::new(10.0, 5.0, 10.0 * (0.2 + 0.25));
    assert!((e.variance() - 0.2).abs() < 1e-12);
    assert!((ucb1_tuned_score(e, 100.0, 0.6) - ucb1_score(e, 100.0, 0.6)).abs() < 1e-9);

    // zero variance, single child with n = N = 50
    let e = EdgeStats::new(50.0, 25.0, 12.5);
    let ln = 50f64.ln();
    let oracle = 0.5 + 0.6 * ((ln / 50.0) * (2.0 * ln / 50.0).sqrt().min(1.0)).sqrt();
    assert!((ucb1_tuned_score(e, 50.0, 0.6) - oracle).abs() < 1e-9);

    // 90 / (10 + 90 + 1e-6 * 900)
    assert!((grave_beta(10.0, 90.0, GRAVE_BIAS) - 0.899_991_900_072_899_3).abs() < 1e-9);
    let e = EdgeStats::new(10.0, 2.0, 4.0);
    let amaf = MoveStats::new(90.0, 45.0);
    let b = 90.0 / (100.0 + 1e-6 * 900.0);
    let oracle = (1.0 - b) * 0.2 + b * 0.5 + 0.6 * (100f64.ln() / 10.0).sqrt();
    assert!((grave_score(e, 100.0, 0.6, amaf, GRAVE_BIAS) - oracle).abs() < 1e-9);

    // 0.2 * 3 / ((1 - 0.75) * 10 + 1)
    let bias = progressive_history_bias(EdgeStats::new(10.0, 5.0, 5.0), MoveStats::new(5.0, 1.0), 3.0);
    assert!((bias - 0.171_428_571_428_571_4).abs() < 1e-9);

    assert_eq!(ucb1_tuned_score(EdgeStats::default(), 3.0, 0.6), UNVISITED);
}

#[test]
fn rank_examples() {
    let u = |r: Vec<f64>| utilities_from_ranks(&RankVector::new(r).unwrap()).unwrap().into_vec();
    assert_eq!(u(vec![1.0, 2.0, 3.0, 4.0, 5.0])[4], -1.0);
    assert_eq!(u(vec![1.0, 2.0]), vec![1.0, -1.0]);
    assert_eq!(u(vec![1.0, 2.5, 2.5]), vec![1.0, -0.5, -0.5]);
}

#[test]
fn equal_scores_split_evenly() {
    let node = Node::root();
    let tables = PolicyTables::new();
    let moves = [Move::new(0, MoveTag::Place), Move::new(1, MoveTag::Place)];
    let mut r = rng(1);
    let first = (0..10_000)
        .filter(|_| select_child(&node, 0, &moves, Selection::Ucb1, 0.6, &node, &tables, &mut r) == 0)
        .count();
    let p = first as f64 / 10_000.0;
    assert!((p - 0.5).abs() <= 0.05, "{p}");
}

/// Pearson chi-square statistic against a uniform distribution.
fn chi_square(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    let e = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum()
}

#[test]
fn full_exploration_mast_is_uniform() {
    let tables = PolicyTables::new();
    // strongly prefer move 0 so a greedy leak would show
    tables.set_mast(0, 0, MoveStats::new(100.0, 100.0));
    let moves: Vec<Move> = (0..9).map(|c| Move::new(c, MoveTag::Place)).collect();
    let mut counts = [0usize; 9];
    let mut r = rng(2);
    for _ in 0..10_000 {
        let mv = choose_playout_move(&moves, 0, Playout::Mast, &tables, &[], 1.0, &mut r);
        counts[mv.code as usize] += 1;
    }
    // 8 degrees of freedom, 0.999 quantile
    assert!(chi_square(&counts) < 26.12, "{counts:?}");
}

#[test]
fn nst_with_empty_tables_is_uniform() {
    let tables = PolicyTables::new();
    let moves: Vec<Move> = (0..6).map(|c| Move::new(c, MoveTag::Step)).collect();
    let mut counts = [0usize; 6];
    let mut r = rng(3);
    for _ in 0..12_000 {
        let mv = choose_playout_move(&moves, 1, Playout::Nst, &tables, &[], 0.0, &mut r);
        counts[mv.code as usize] += 1;
    }
    // 5 degrees of freedom, 0.999 quantile
    assert!(chi_square(&counts) < 20.52, "{counts:?}");
}

#[test]
fn mast_greedy_picks_best_mean() {
    let tables = PolicyTables::new();
    tables.set_mast(0, 1, MoveStats::new(5.0, 1.0));
    tables.set_mast(0, 2, MoveStats::new(5.0, -0.5));
    let moves = [Move::new(1, MoveTag::Place), Move::new(2, MoveTag::Place)];
    let mv = choose_playout_move(&moves, 0, Playout::Mast, &tables, &[], 0.0, &mut rng(4));
    assert_eq!(mv.code, 1);
}

#[test]
fn random200_always_finishes_tic_tac_toe() {
    let tables = PolicyTables::new();
    for seed in 0..1000 {
        let mut s = TicTacToe::new_game(seed);
        let mut seq = Vec::new();
        let u = run_playout(&mut s, Playout::Random200, &tables, &mut seq, &mut rng(seed));
        assert!(s.is_terminal());
        assert!(seq.len() <= 9);
        assert!(u.is_zero_sum());
    }
}

#[test]
fn hex_never_draws() {
    let mut draws = 0;
    for seed in 0..10_000u64 {
        let mut r = rng(seed);
        let mut s = Hex::new_game(seed);
        let mut moves = Vec::new();
        while !s.is_terminal() {
            s.legal_moves_into(&mut moves);
            s.play(*moves.choose(&mut r).unwrap());
        }
        let u = s.utilities().unwrap();
        draws += usize::from(u.get(0) == u.get(1));
    }
    assert_eq!(draws, 0);
}

#[test]
fn every_game_terminates_under_random_play() {
    let settings = PlaySettings::default();
    for g in GameId::ALL {
        let agents = vec![AgentSpec::Random; g.players()];
        let finished = (0..1000)
            .filter(|&seed| !run_play_dyn(g, &agents, &settings, seed).unwrap().capped)
            .count();
        assert!(finished >= 990, "{g}: {finished}/1000");
    }
}

#[test]
fn dice_outcome_replays_with_seed() {
    let roll = |seed| {
        let s = Pig::new_game(seed);
        let mv = s.find_move(0).unwrap();
        assert_eq!(mv.tag, MoveTag::Roll);
        s.apply_move(mv).unwrap().snapshot()
    };
    assert_eq!(roll(42), roll(42));
    let distinct: std::collections::HashSet<String> = (0..40).map(roll).collect();
    assert!(distinct.len() > 1);
}

#[test]
fn advance_root_examples() {
    let mut tree = SearchTree::new();
    tree.tables().set_mast(0, 5, MoveStats::new(10.0, 4.0));
    let state = TicTacToe::new_game(0);
    let spec = "UCB1-0.6-Random200".parse().unwrap();
    mcts_atlas_core::mcts::search(
        &state,
        &spec,
        &mcts_atlas_core::SearchBudget::iterations(400),
        &mut tree,
        &mut rng(0),
    )
    .unwrap();
    let child = tree.root().child(0, 4).unwrap();
    let n = child.visits();
    assert!(n > 0);
    tree.advance_root(&[(0, 4)]);
    assert_eq!(tree.root().visits(), n);
    let m = tree.tables().mast(0, 5);
    assert!((m.count - 6.0).abs() < 1e-12 && (m.value_sum - 2.4).abs() < 1e-12);
    assert!((m.mean() - 0.4).abs() < 1e-12);
    // a never-expanded reply
    tree.advance_root(&[(1, 0), (0, 8), (1, 7), (0, 6)]);
    assert_eq!(tree.root().visits(), 0);
}
