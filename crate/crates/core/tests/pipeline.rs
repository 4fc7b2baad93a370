mod common;

use mcts_atlas_core::games::GameId;
use mcts_atlas_core::mcts::MctsSpec;
use mcts_atlas_core::play::PlaySettings;
use mcts_atlas_core::preprocess::{
    drop_columns, encode_agents, filter_rows, merge_duplicates, parse_utilities, preprocess,
    GameCatalog, RawDataset, TARGET_COLUMN,
};
use mcts_atlas_core::tournament::{generate_jobs, run_jobs, RunOptions};
use mcts_atlas_core::UtilityVector;

fn tiny_agents() -> Vec<MctsSpec> {
    ["UCB1-0.6-Random200", "UCB1GRAVE-0.1-MAST", "ProgressiveHistory-1.41-NST", "UCB1Tuned-0.6-Random4"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

fn opts(dir: &std::path::Path, name: &str) -> RunOptions {
    let mut o = RunOptions::new(dir.join(name), PlaySettings::iterations(20));
    o.concept_trials = 50;
    o.concept_seed = 1;
    o
}

#[test]
fn five_row_example() {
    let raw = RawDataset::from_reader(common::FIVE_ROWS.as_bytes()).unwrap();
    let cat = GameCatalog::builtin();
    let filtered = filter_rows(&raw, &cat);
    assert_eq!(filtered.rows.len(), 3);
    let merged = merge_duplicates(&filtered).unwrap();
    assert_eq!(merged.rows.len(), 2);
    assert_eq!(merged.rows[0].utilities, vec![0.5, -0.5]);
    assert_eq!(merged.rows[1].utilities, vec![-1.0, 1.0]);
    let (reduced, report) = drop_columns(&merged);
    assert_eq!(report.constant.len(), 3);
    let table = encode_agents(&reduced).unwrap();
    assert_eq!(table.len(), 2);
    assert_eq!(table.column(TARGET_COLUMN).unwrap(), vec![0.5, -1.0]);
    assert_eq!(table.column("agent1_selection_UCB1Tuned").unwrap(), vec![1.0, 0.0]);

    // with Chess in the catalog the fourth row survives
    let with_chess = cat.with("Chess", 2, true);
    let (table, report) = preprocess(&raw, &with_chess).unwrap();
    assert_eq!(table.len(), 3);
    assert_eq!(report.kept, vec!["AlquerqueBoard".to_string(), "ChessBoard".to_string()]);
    assert_eq!(report.constant, vec!["Stochastic".to_string()]);
    for row in &table.rows {
        for g in [0..4, 5..10, 10..14, 15..20] {
            assert_eq!(row[g].iter().sum::<f64>(), 1.0);
        }
    }
}

#[test]
fn schedule_sizes() {
    let jobs = generate_jobs(&[GameId::ConnectFour], &MctsSpec::grid(), 8);
    assert_eq!(jobs.len(), 120);
    assert_eq!(jobs.iter().map(|j| j.plays).sum::<usize>(), 2400);
    let solo = generate_jobs(&[GameId::PigSolitaire], &MctsSpec::grid(), 8);
    assert_eq!(solo.len(), 60);
    assert!(solo.iter().all(|j| j.plays == 10));
}

#[test]
fn full_fraction_emits_one_row_per_play() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = generate_jobs(&[GameId::ConnectFour], &MctsSpec::grid(), 8);
    let mut o = opts(dir.path(), "c4.csv");
    o.settings = PlaySettings::iterations(2);
    let report = run_jobs(&jobs, &o).unwrap();
    assert_eq!(report.plays_done, 2400);
    let raw = RawDataset::read(&o.out).unwrap();
    assert_eq!(raw.rows.len(), 2400);
    for r in &raw.rows {
        assert!(UtilityVector::new(r.utilities.clone()).unwrap().is_zero_sum());
        assert_eq!(r.features, raw.rows[0].features);
    }
}

#[test]
fn sampled_prefix_is_ceiling() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = generate_jobs(&[GameId::Nim], &MctsSpec::grid(), 8);
    let mut o = opts(dir.path(), "nim.csv");
    o.sample_fraction = 0.1;
    let report = run_jobs(&jobs, &o).unwrap();
    assert_eq!(report.jobs_selected, 12);
    assert_eq!(report.jobs_run, 12);
    let journal = std::fs::read_to_string(o.journal_path()).unwrap();
    let ids: Vec<usize> = journal.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(ids, (0..12).collect::<Vec<_>>());
}

#[test]
fn resumed_run_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let games = [GameId::TicTacToe, GameId::Pig, GameId::TripleRace];
    let jobs = generate_jobs(&games, &tiny_agents(), 4);

    let whole = opts(dir.path(), "whole.csv");
    run_jobs(&jobs, &whole).unwrap();

    let mut part = opts(dir.path(), "part.csv");
    part.max_jobs = Some(5);
    let first = run_jobs(&jobs, &part).unwrap();
    assert_eq!(first.jobs_run, 5);
    part.max_jobs = None;
    part.workers = Some(3);
    let second = run_jobs(&jobs, &part).unwrap();
    assert_eq!(second.jobs_resumed, 5);
    assert_eq!(second.jobs_run, jobs.len() - 5);

    let a = std::fs::read(&whole.out).unwrap();
    let b = std::fs::read(&part.out).unwrap();
    assert_eq!(a, b);
}

#[test]
fn dataset_rows_are_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let games = [GameId::Hex, GameId::TripleRace, GameId::PigSolitaire];
    let jobs = generate_jobs(&games, &tiny_agents(), 2);
    let o = opts(dir.path(), "d.csv");
    let report = run_jobs(&jobs, &o).unwrap();
    let text = std::fs::read_to_string(&o.out).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().unwrap().clone();
    assert_eq!(&header[0], "game");
    assert_eq!(&header[1], "agents");
    assert_eq!(&header[header.len() - 1], "utilities");
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        assert_eq!(rec.len(), header.len());
        assert!(rec[1].starts_with('(') && rec[1].ends_with(')'));
        let u = parse_utilities(&rec[rec.len() - 1]).unwrap();
        let uv = UtilityVector::new(u).unwrap();
        let cell = &rec[rec.len() - 1];
        assert!(cell.split(';').all(|x| x.trim_matches(|c| c == '(' || c == ')').split('.').nth(1).unwrap().len() == 6));
        if rec[0] != *"PigSolitaire" {
            assert!(uv.is_zero_sum());
        }
        rows += 1;
    }
    assert_eq!(rows, report.plays_done);
    // every game appears
    for g in games {
        assert!(text.lines().any(|l| l.starts_with(g.name())));
    }
    // agents strings in quotes because of the comma
    assert!(text.contains("\"(UCB1"));
}
