//! Matchup scheduling, job execution and the raw dataset CSV.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use num_bigint::BigUint;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::concepts::{compute_concepts, ConceptVector, DEFAULT_TRIALS, FEATURE_NAMES};
use crate::game::UtilityVector;
use crate::games::GameId;
use crate::mcts::{AgentSpec, MctsSpec};
use crate::play::{derive_seed, run_play_dyn, PlayRecord, PlaySettings};

/// Plays per matchup are this many times the player count.
pub const PLAYS_PER_SEAT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchupJob {
    /// Position in the shuffled schedule.
    pub id: usize,
    pub game: GameId,
    /// Seat order.
    pub agents: Vec<AgentSpec>,
    pub plays: usize,
    pub seed: u64,
}

/// Builds the shuffled schedule: per game and per MCTS agent, a solo job
/// for one-player games, otherwise one job against Random copies and one
/// against `k - 1` agents drawn with replacement from `agents`. Seats are
/// permuted within every job.
pub fn generate_jobs(games: &[GameId], agents: &[MctsSpec], seed: u64) -> Vec<MatchupJob> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs = Vec::new();
    let mut push = |game: GameId, mut tuple: Vec<AgentSpec>, rng: &mut ChaCha8Rng| {
        tuple.shuffle(rng);
        jobs.push(MatchupJob {
            id: 0,
            game,
            plays: PLAYS_PER_SEAT * tuple.len(),
            agents: tuple,
            seed: rng.random(),
        });
    };
    for &game in games {
        let k = game.players();
        for &a in agents {
            if k == 1 {
                push(game, vec![a.into()], &mut rng);
                continue;
            }
            let mut vs_random = vec![AgentSpec::Mcts(a)];
            vs_random.extend(std::iter::repeat_n(AgentSpec::Random, k - 1));
            push(game, vs_random, &mut rng);
            let mut vs_sampled = vec![AgentSpec::Mcts(a)];
            for _ in 1..k {
                let b = *agents.choose(&mut rng).expect("agent pool is non-empty");
                vs_sampled.push(b.into());
            }
            push(game, vs_sampled, &mut rng);
        }
    }
    jobs.shuffle(&mut rng);
    for (i, j) in jobs.iter_mut().enumerate() {
        j.id = i;
    }
    jobs
}

/// Number of distinct agent multisets of size `k` from a pool of `a`:
/// C(a + k - 1, k).
pub fn count_matchups(a: u64, k: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 1..=k {
        acc *= BigUint::from(a + i - 1);
        acc /= BigUint::from(i);
    }
    acc
}

/// `(spec1, spec2)`.
pub fn format_agents(agents: &[AgentSpec]) -> String {
    let parts: Vec<String> = agents.iter().map(|a| a.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn format_utility(u: f64) -> String {
    let s = format!("{u:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// `(u1;u2)` with six decimals.
pub fn format_utilities(u: &UtilityVector) -> String {
    let parts: Vec<String> = u.as_slice().iter().map(|x| format_utility(*x)).collect();
    format!("({})", parts.join(";"))
}

pub fn dataset_header() -> Vec<String> {
    let mut h = vec!["game".to_string(), "agents".to_string()];
    h.extend(FEATURE_NAMES.iter().map(|s| s.to_string()));
    h.push("utilities".to_string());
    h
}

pub fn dataset_row(record: &PlayRecord, concepts: &ConceptVector) -> Vec<String> {
    let mut row = vec![record.game.name().to_string(), format_agents(&record.agents)];
    row.extend(concepts.csv_fields());
    row.push(format_utilities(&record.utilities));
    row
}

#[derive(Debug, Error)]
pub enum TournamentError {
    #[error("sample fraction must be in (0, 1], got {0}")]
    BadFraction(f64),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("journal {path} line {line}: `{text}` is not a job id")]
    Journal {
        path: PathBuf,
        line: usize,
        text: String,
    },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> TournamentError + '_ {
    move |source| TournamentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub settings: PlaySettings,
    pub sample_fraction: f64,
    pub out: PathBuf,
    /// Defaults to `<out>.journal`.
    pub journal: Option<PathBuf>,
    /// Parallel jobs; `None` means available cores / 4 (at least 1).
    pub workers: Option<usize>,
    pub concept_trials: usize,
    pub concept_seed: u64,
    /// Stop after committing this many jobs in this invocation.
    pub max_jobs: Option<usize>,
}

impl RunOptions {
    pub fn new(out: impl Into<PathBuf>, settings: PlaySettings) -> Self {
        Self {
            settings,
            sample_fraction: 1.0,
            out: out.into(),
            journal: None,
            workers: None,
            concept_trials: DEFAULT_TRIALS,
            concept_seed: 0,
            max_jobs: None,
        }
    }

    pub fn journal_path(&self) -> PathBuf {
        self.journal.clone().unwrap_or_else(|| {
            let mut p = self.out.clone().into_os_string();
            p.push(".journal");
            p.into()
        })
    }
}

pub fn default_workers() -> usize {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    (cores / 4).max(1)
}

/// Number of leading jobs run at `fraction`.
pub fn sample_size(jobs: usize, fraction: f64) -> usize {
    ((fraction * jobs as f64).ceil() as usize).min(jobs)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunReport {
    pub jobs_scheduled: usize,
    pub jobs_selected: usize,
    pub jobs_run: usize,
    pub jobs_resumed: usize,
    pub plays_done: usize,
    pub plays_failed: usize,
    pub cap_draws: usize,
    pub fallback_moves: usize,
    /// Plays per agent string (an agent seated twice counts twice).
    pub agent_plays: BTreeMap<String, usize>,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "jobs: {} scheduled, {} selected, {} run, {} already journaled",
            self.jobs_scheduled, self.jobs_selected, self.jobs_run, self.jobs_resumed
        )?;
        writeln!(
            f,
            "plays: {} done, {} failed, {} cap draws, {} fallback moves",
            self.plays_done, self.plays_failed, self.cap_draws, self.fallback_moves
        )?;
        for (agent, n) in &self.agent_plays {
            writeln!(f, "  {agent:<32} {n}")?;
        }
        Ok(())
    }
}

fn read_journal(path: &Path) -> Result<HashSet<usize>, TournamentError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(HashSet::new()),
        Err(e) => return Err(io_err(path)(e)),
    };
    let mut done = HashSet::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let id = text.parse().map_err(|_| TournamentError::Journal {
            path: path.to_path_buf(),
            line: i + 1,
            text: text.to_string(),
        })?;
        done.insert(id);
    }
    Ok(done)
}

struct JobResult {
    records: Vec<PlayRecord>,
    failed: usize,
}

fn execute(job: &MatchupJob, settings: &PlaySettings) -> JobResult {
    let mut records = Vec::with_capacity(job.plays);
    let mut failed = 0;
    for p in 0..job.plays {
        match run_play_dyn(job.game, &job.agents, settings, derive_seed(job.seed, p as u64)) {
            Ok(r) => records.push(r),
            Err(e) => {
                log::warn!("job {} play {p} on {} failed: {e}", job.id, job.game);
                failed += 1;
            }
        }
    }
    JobResult { records, failed }
}

/// Runs the first `ceil(fraction * jobs)` jobs, appending one CSV row per
/// play to `opts.out` and one id per finished job to the journal. Jobs
/// already in the journal are skipped, and rows are committed in schedule
/// order, so an interrupted run resumed with the same inputs produces the
/// same file as an uninterrupted one.
pub fn run_jobs(jobs: &[MatchupJob], opts: &RunOptions) -> Result<RunReport, TournamentError> {
    let f = opts.sample_fraction;
    if !(f > 0.0 && f <= 1.0) {
        return Err(TournamentError::BadFraction(f));
    }
    let selected = &jobs[..sample_size(jobs.len(), f)];
    let journal_path = opts.journal_path();
    let done = read_journal(&journal_path)?;
    let todo: Vec<&MatchupJob> = selected.iter().filter(|j| !done.contains(&j.id)).collect();
    let todo = &todo[..opts.max_jobs.map_or(todo.len(), |m| m.min(todo.len()))];

    let mut report = RunReport {
        jobs_scheduled: jobs.len(),
        jobs_selected: selected.len(),
        jobs_resumed: selected.len() - selected.iter().filter(|j| !done.contains(&j.id)).count(),
        ..RunReport::default()
    };

    let mut games: Vec<GameId> = todo.iter().map(|j| j.game).collect();
    games.sort();
    games.dedup();
    let concepts: HashMap<GameId, ConceptVector> = games
        .into_iter()
        .map(|g| (g, compute_concepts(g, opts.concept_trials, opts.concept_seed)))
        .collect();

    let fresh = !opts.out.exists() || fs::metadata(&opts.out).map_err(io_err(&opts.out))?.len() == 0;
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&opts.out)
        .map_err(io_err(&opts.out))?;
    let mut writer = csv::Writer::from_writer(file);
    if fresh {
        writer.write_record(dataset_header())?;
        writer.flush().map_err(io_err(&opts.out))?;
    }
    let mut journal = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&journal_path)
        .map_err(io_err(&journal_path))?;

    let mut commit = |job: &MatchupJob, res: JobResult| -> Result<(), TournamentError> {
        let concepts = &concepts[&job.game];
        for r in &res.records {
            writer.write_record(dataset_row(r, concepts))?;
            report.plays_done += 1;
            report.cap_draws += usize::from(r.capped);
            report.fallback_moves += r.fallbacks;
            for a in &r.agents {
                *report.agent_plays.entry(a.to_string()).or_default() += 1;
            }
        }
        report.plays_failed += res.failed;
        report.jobs_run += 1;
        writer.flush().map_err(io_err(&opts.out))?;
        writeln!(journal, "{}", job.id).map_err(io_err(&journal_path))?;
        journal.flush().map_err(io_err(&journal_path))?;
        log::info!("job {} ({}, {}) committed", job.id, job.game, format_agents(&job.agents));
        Ok(())
    };

    let workers = opts.workers.unwrap_or_else(default_workers).max(1);
    if workers == 1 {
        for job in todo {
            commit(job, execute(job, &opts.settings))?;
        }
        return Ok(report);
    }

    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, JobResult)>();
    std::thread::scope(|scope| -> Result<(), TournamentError> {
        for _ in 0..workers {
            let tx = tx.clone();
            let next = &next;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= todo.len() {
                    break;
                }
                if tx.send((i, execute(todo[i], &opts.settings))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut pending = BTreeMap::new();
        let mut cursor = 0;
        for (i, res) in rx {
            pending.insert(i, res);
            while let Some(res) = pending.remove(&cursor) {
                if let Err(e) = commit(todo[cursor], res) {
                    // stop handing out work; running jobs finish and are dropped
                    next.store(todo.len(), Ordering::Relaxed);
                    return Err(e);
                }
                cursor += 1;
            }
        }
        Ok(())
    })?;
    Ok(report)
}
