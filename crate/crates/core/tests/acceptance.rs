//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Runs as a plain binary (`harness = false`).

mod common;

use std::time::Instant;

use mcts_atlas_core::concepts::compute_concepts;
use mcts_atlas_core::game::{Move, MoveTag, Seat};
use mcts_atlas_core::games::ConnectFour;
use mcts_atlas_core::mcts::playout::{choose_playout_move, nst_value};
use mcts_atlas_core::mcts::scores::{
    grave_beta, grave_score, progressive_history_bias, progressive_history_score, ucb1_score,
    ucb1_tuned_score, EdgeStats, MoveStats, GRAVE_BIAS, PH_WEIGHT,
};
use mcts_atlas_core::mcts::{search, Exploration, MctsSpec, NGram, Playout, SearchBudget, SearchTree, Selection};
use mcts_atlas_core::play::{run_play_dyn, PlaySettings};
use mcts_atlas_core::preprocess::{preprocess, GameCatalog, RawDataset, TARGET_COLUMN};
use mcts_atlas_core::tournament::{generate_jobs, run_jobs, RunOptions};
use mcts_atlas_core::{AgentSpec, GameId, GameState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn random_edge(r: &mut ChaCha8Rng) -> EdgeStats {
    let n = f64::from(r.random_range(1u32..5000));
    let q: f64 = r.random_range(-1.0..=1.0);
    let t: f64 = r.random_range(0.0..=1.0);
    EdgeStats::new(n, q * n, n * (q * q + t * (1.0 - q * q)))
}

fn bandit_suite() -> Check {
    let start = Instant::now();
    let mut bad = Vec::new();
    let examples = [
        ("ucb1", ucb1_score(EdgeStats::new(10.0, 5.0, 5.0), 100.0, 0.6), 0.907_168_425_464_906_7),
        ("grave_beta", grave_beta(10.0, 90.0, GRAVE_BIAS), 0.899_991_900_072_899_3),
        (
            "ph_bias",
            progressive_history_bias(EdgeStats::new(10.0, 5.0, 5.0), MoveStats::new(5.0, 1.0), 3.0),
            0.171_428_571_428_571_4,
        ),
    ];
    for (name, got, want) in examples {
        if !close(got, want, 1e-9) {
            bad.push(format!("{name} {got} != {want}"));
        }
    }
    let ln = 50f64.ln();
    let tuned_oracle = 0.5 + 0.6 * ((ln / 50.0) * (2.0 * ln / 50.0).sqrt().min(1.0)).sqrt();
    if !close(ucb1_tuned_score(EdgeStats::new(50.0, 25.0, 12.5), 50.0, 0.6), tuned_oracle, 1e-9) {
        bad.push("ucb1tuned example".into());
    }
    let b = 90.0 / (100.0 + 1e-6 * 900.0);
    let grave_oracle = (1.0 - b) * 0.2 + b * 0.5 + 0.6 * (100f64.ln() / 10.0).sqrt();
    let g = grave_score(EdgeStats::new(10.0, 2.0, 4.0), 100.0, 0.6, MoveStats::new(90.0, 45.0), GRAVE_BIAS);
    if !close(g, grave_oracle, 1e-9) {
        bad.push("grave example".into());
    }

    let mut r = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let e = random_edge(&mut r);
        let big_n = e.visits + f64::from(r.random_range(0u32..10_000));
        let c = r.random_range(0.0..2.0);
        let plain = ucb1_score(e, big_n, c);
        if grave_score(e, big_n, c, MoveStats::default(), GRAVE_BIAS) != plain {
            bad.push(format!("GRAVE->UCB1 {e:?}"));
        }
        if progressive_history_score(e, big_n, c, MoveStats::default(), PH_WEIGHT) != plain {
            bad.push(format!("PH->UCB1 {e:?}"));
        }
        let v = e.variance() + (2.0 * big_n.ln() / e.visits).sqrt();
        if v >= 1.0 && !close(ucb1_tuned_score(e, big_n, c), plain, 1e-12) {
            bad.push(format!("Tuned-cap->UCB1 {e:?}"));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 1.0 {
        bad.push(format!("runtime {elapsed:.3}s"));
    }
    ensure(
        bad.is_empty(),
        format!("5 examples, 3000 identity checks, {elapsed:.3}s {}", bad.join("; ")),
    )
}

fn seat_balanced_mean(game: GameId, a: AgentSpec, b: AgentSpec, plays: u64, settings: &PlaySettings, seed: u64) -> f64 {
    let mut total = 0.0;
    for p in 0..plays {
        let (agents, seat) = if p % 2 == 0 { ([a, b], 0) } else { ([b, a], 1) };
        let rec = run_play_dyn(game, &agents, settings, seed.wrapping_add(p)).expect("play");
        total += rec.utilities.get(seat);
    }
    total / plays as f64
}

fn strength() -> Check {
    let settings = PlaySettings::iterations(1000);
    let specs: Vec<MctsSpec> = MctsSpec::grid()
        .into_iter()
        .filter(|s| matches!(s.playout, Playout::Random200 | Playout::Mast | Playout::Nst))
        .collect();
    let mut worst = (f64::INFINITY, String::new());
    let mut failing = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let m = seat_balanced_mean(
            GameId::ConnectFour,
            AgentSpec::Mcts(*spec),
            AgentSpec::Random,
            50,
            &settings,
            10_000 * i as u64,
        );
        if m < worst.0 {
            worst = (m, spec.to_string());
        }
        if m < 0.8 {
            failing.push(format!("{spec}={m:.2}"));
        }
    }
    ensure(
        failing.is_empty() && specs.len() == 36,
        format!("{} specs, min {:.2} ({}) {}", specs.len(), worst.0, worst.1, failing.join(" ")),
    )
}

fn round_robin() -> Check {
    let settings = PlaySettings::iterations(1000);
    let mut pool = Vec::new();
    for s in Selection::ALL {
        for p in [Playout::Random0, Playout::Random4, Playout::Random200] {
            pool.push(MctsSpec::new(s, Exploration::C06, p));
        }
    }
    let mut sum = vec![0.0; pool.len()];
    let mut count = vec![0usize; pool.len()];
    let mut seed = 0u64;
    for game in [GameId::ConnectFour, GameId::Breakthrough] {
        for i in 0..pool.len() {
            for j in 0..pool.len() {
                if i == j {
                    continue;
                }
                for _ in 0..10 {
                    let agents = [AgentSpec::Mcts(pool[i]), AgentSpec::Mcts(pool[j])];
                    let rec = run_play_dyn(game, &agents, &settings, seed).expect("play");
                    seed += 1;
                    sum[i] += rec.utilities.get(0);
                    sum[j] += rec.utilities.get(1);
                    count[i] += 1;
                    count[j] += 1;
                }
            }
        }
    }
    let mean: Vec<f64> = sum.iter().zip(&count).map(|(s, &n)| s / n as f64).collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, s) in Selection::ALL.iter().enumerate() {
        let (r0, r4, r200) = (mean[3 * k], mean[3 * k + 1], mean[3 * k + 2]);
        let gap = r200 - r0.max(r4);
        ok &= gap >= 0.2;
        parts.push(format!("{}: R0 {r0:.2} R4 {r4:.2} R200 {r200:.2}", s.name()));
    }
    ensure(ok, parts.join(", "))
}

fn iteration_conservation() -> Check {
    let state = ConnectFour::new_game(7);
    let spec: MctsSpec = "UCB1GRAVE-0.6-NST".parse().unwrap();
    let mut seen = Vec::new();
    for threads in [1, 2, 4] {
        let mut tree = SearchTree::new();
        let budget = SearchBudget::Iterations { count: 10_000, threads };
        let mut rng = ChaCha8Rng::seed_from_u64(threads as u64);
        search(&state, &spec, &budget, &mut tree, &mut rng).map_err(|e| e.to_string())?;
        seen.push(tree.root().visits());
    }
    ensure(seen.iter().all(|&v| v == 10_000), format!("root visits {seen:?}"))
}

fn place(code: u32) -> Move {
    Move::new(code, MoveTag::Place)
}

fn decay_invariance() -> Check {
    let mut r = ChaCha8Rng::seed_from_u64(77);
    let moves: Vec<Move> = (0..12).map(place).collect();
    let mut bad = 0;
    for _ in 0..100 {
        let mut tree = SearchTree::new();
        for _ in 0..r.random_range(0..30) {
            let n = f64::from(r.random_range(1u32..40));
            let q: f64 = r.random_range(-1.0..=1.0);
            tree.tables().set_mast(r.random_range(0..2), r.random_range(0..12), MoveStats::new(n, q * n));
        }
        for _ in 0..r.random_range(0..60) {
            let len = r.random_range(1..=3);
            let codes: Vec<u32> = (0..len).map(|_| r.random_range(0..12)).collect();
            let n = f64::from(r.random_range(1u32..40));
            let q: f64 = r.random_range(-1.0..=1.0);
            tree.tables().set_nst(NGram::new(r.random_range(0..2), &codes), MoveStats::new(n, q * n));
        }
        let hlen = r.random_range(0..4);
        let hist: Vec<(Seat, Move)> =
            (0..hlen).map(|i| ((hlen - i) % 2, place(r.random_range(0..12)))).collect();

        let snapshot = |tree: &SearchTree| {
            let mut means: Vec<(String, f64)> = tree
                .tables()
                .mast_entries()
                .into_iter()
                .map(|(k, s)| (format!("m{k:?}"), s.mean()))
                .chain(tree.tables().nst_entries().into_iter().map(|(k, s)| (format!("n{k:?}"), s.mean())))
                .collect();
            means.sort_by(|a, b| a.0.cmp(&b.0));
            let values: Vec<f64> = (0..12).map(|c| nst_value(tree.tables(), &hist, 0, place(c))).collect();
            let mut picks = Vec::new();
            for playout in [Playout::Mast, Playout::Nst] {
                for seat in 0..2 {
                    let mut rng = ChaCha8Rng::seed_from_u64(99);
                    picks.push(choose_playout_move(&moves, seat, playout, tree.tables(), &hist, 0.0, &mut rng).code);
                }
            }
            (means, values, picks)
        };
        let before = snapshot(&tree);
        tree.advance_root(&[(0, 3)]);
        let after = snapshot(&tree);
        let means_ok = before.0.len() == after.0.len()
            && before.0.iter().zip(&after.0).all(|(a, b)| a.0 == b.0 && close(a.1, b.1, 1e-12));
        let values_ok = before.1.iter().zip(&after.1).all(|(a, b)| close(*a, *b, 1e-12));
        if !(means_ok && values_ok && before.2 == after.2) {
            bad += 1;
        }
    }
    ensure(bad == 0, format!("{bad}/100 tables changed"))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let games = [GameId::TicTacToe, GameId::ConnectFour, GameId::Pig];
    let agents: Vec<MctsSpec> = [
        "UCB1-0.6-Random200",
        "UCB1GRAVE-0.1-MAST",
        "ProgressiveHistory-1.41-NST",
        "UCB1Tuned-0.6-Random4",
        "UCB1-1.41-Random0",
        "UCB1Tuned-0.1-NST",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    let jobs = generate_jobs(&games, &agents, 123);
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let mut opts = RunOptions::new(dir.path().join(name), PlaySettings::iterations(50));
        opts.sample_fraction = 1.0;
        opts.concept_seed = 123;
        opts.concept_trials = 200;
        run_jobs(&jobs, &opts).map_err(|e| e.to_string())?;
        outputs.push(std::fs::read(&opts.out).map_err(|e| e.to_string())?);
    }
    let rows = outputs[0].iter().filter(|&&b| b == b'\n').count() - 1;
    ensure(
        outputs[0] == outputs[1] && rows == 3 * 6 * 2 * 20,
        format!("{} jobs, {rows} rows, {} bytes, identical: {}", jobs.len(), outputs[0].len(), outputs[0] == outputs[1]),
    )
}

fn preprocessing_oracle() -> Check {
    let raw = RawDataset::from_reader(common::FIVE_ROWS.as_bytes()).map_err(|e| e.to_string())?;
    let (table, _) = preprocess(&raw, &GameCatalog::builtin()).map_err(|e| e.to_string())?;
    let target = table.column(TARGET_COLUMN).unwrap_or_default();
    let games: Vec<&str> = table.games.iter().map(String::as_str).collect();
    let merged = (1.0 + 0.0) / 2.0;
    ensure(
        table.len() == 2
            && games == ["Breakthrough", "Breakthrough"]
            && close(target[0], merged, 1e-12)
            && close(target[1], -1.0, 1e-12)
            && table.column("agent1_selection_UCB1Tuned") == Some(vec![1.0, 0.0])
            && !table.header.iter().any(|h| h == "utility_agent2"),
        format!("{} rows, targets {target:?}", table.len()),
    )
}

fn concepts() -> Check {
    let ttt = compute_concepts(GameId::TicTacToe, 100_000, 5).draw_rate();
    let hex = compute_concepts(GameId::Hex, 10_000, 5).draw_rate();
    ensure(
        close(ttt, 8.0 / 63.0, 0.01) && hex == 0.0,
        format!("TicTacToe draw {ttt:.4} (oracle {:.4}), Hex draw {hex}", 8.0 / 63.0),
    )
}

fn main() {
    let checks: [Criterion; 8] = [
        ("bandit formulas", bandit_suite),
        ("strength vs Random", strength),
        ("playout depth round robin", round_robin),
        ("iteration conservation", iteration_conservation),
        ("decay invariance", decay_invariance),
        ("tournament determinism", determinism),
        ("preprocessing five-row example", preprocessing_oracle),
        ("concepts draw rates", concepts),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check) in checks {
        if !only.is_empty() && !only.iter().any(|o| name.contains(o.as_str())) {
            continue;
        }
        let start = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {name} [{:.1}s]: {detail}", start.elapsed().as_secs_f64());
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
