//! `mcts-atlas` command line.
//!
//! Exit status: 0 on success, 1 for usage errors, 2 for data errors.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::concepts::{compute_concepts, FEATURE_NAMES};
use crate::config::{parse_agents, parse_games, pick, resolve_budget, ConfigError, ConfigFile};
use crate::games::{registry, GameId};
use crate::mcts::{AgentSpec, MctsSpec, SearchBudget};
use crate::play::{run_play_dyn_observed, PlaySettings, DEFAULT_MOVE_CAP};
use crate::preprocess::{agent_means, preprocess, GameCatalog, RawDataset};
use crate::tournament::{format_utilities, generate_jobs, run_jobs, RunOptions};

#[derive(Debug, Parser)]
#[command(name = "mcts-atlas", version, about = "MCTS variant tournaments and dataset tools")]
pub struct Cli {
    /// key = value settings file; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in games
    ListGames,
    /// Play one game verbosely
    Play(PlayArgs),
    /// Compute concept vectors as CSV
    Concepts(ConceptArgs),
    /// Generate and run the matchup schedule
    Tournament(TournamentArgs),
    /// Turn a dataset CSV into a model table
    Preprocess(PreprocessArgs),
    /// Mean utility per agent and game
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// time:<seconds> or iters:<count>
    #[arg(long)]
    pub budget: Option<SearchBudget>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub move_cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PlayArgs {
    #[arg(long)]
    pub game: Option<String>,
    /// One agent per seat, comma separated
    #[arg(long)]
    pub agents: Option<String>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct ConceptArgs {
    #[arg(long)]
    pub games: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TournamentArgs {
    #[arg(long)]
    pub games: Option<String>,
    /// MCTS agents forming the pool (default: all 60)
    #[arg(long)]
    pub agents: Option<String>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long)]
    pub sample: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub journal: Option<PathBuf>,
    /// Concurrent jobs (default: cores / 4)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Random plays per game for the concept columns
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub max_jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the dropped-column report (default: standard error)
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Read { .. } => CliError::Data(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn data<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = io::stdout();
    match execute(cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let file = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    let file = file.as_ref();
    match cli.command {
        Command::ListGames => list_games(out),
        Command::Play(a) => play(a, file, out),
        Command::Concepts(a) => concepts(a, file, out),
        Command::Tournament(a) => tournament(a, file, out),
        Command::Preprocess(a) => preprocess_cmd(a, file, out),
        Command::Report(a) => report(a, file, out),
    }
}

fn io_data(e: io::Error) -> CliError {
    CliError::Data(e.to_string())
}

fn list_games(out: &mut dyn Write) -> Result<(), CliError> {
    for d in registry() {
        let flags: Vec<&str> = crate::game::RuleFlags::NAMES
            .iter()
            .zip(d.flags.values())
            .filter(|(_, on)| *on)
            .map(|(n, _)| *n)
            .collect();
        writeln!(
            out,
            "{:<14} k={} zero_sum={} stochastic={} flags={}",
            d.name,
            d.players,
            d.zero_sum,
            d.stochastic,
            flags.join("+")
        )
        .map_err(io_data)?;
    }
    Ok(())
}

fn required<T>(v: Option<T>, key: &'static str) -> Result<T, CliError> {
    v.ok_or_else(|| ConfigError::Missing(key).into())
}

fn settings(a: &SearchArgs, file: Option<&ConfigFile>) -> Result<(PlaySettings, u64), CliError> {
    let budget = pick(a.budget, file, "budget")?;
    let threads = pick(a.threads, file, "threads")?;
    let seed = required(pick(a.seed, file, "seed")?, "seed")?;
    let move_cap = pick(a.move_cap, file, "move_cap")?.unwrap_or(DEFAULT_MOVE_CAP);
    Ok((
        PlaySettings {
            budget: resolve_budget(budget, threads),
            move_cap,
        },
        seed,
    ))
}

fn play(a: PlayArgs, file: Option<&ConfigFile>, out: &mut dyn Write) -> Result<(), CliError> {
    let game: GameId = required(pick(a.game, file, "game")?, "game")?
        .parse()
        .map_err(|e: crate::game::GameError| CliError::Usage(e.to_string()))?;
    let agents = match pick(a.agents, file, "agents")? {
        Some(s) => parse_agents(&s)?,
        None => vec![AgentSpec::Random; game.players()],
    };
    let (settings, seed) = settings(&a.search, file)?;
    writeln!(out, "{game}: {}", crate::tournament::format_agents(&agents)).map_err(io_data)?;
    let mut failed = None;
    let rec = run_play_dyn_observed(game, &agents, &settings, seed, &mut |s| {
        if failed.is_none() {
            if let Err(e) = writeln!(
                out,
                "{:>4}  seat {}  {:<32} {:>6} {:<8} iters {}",
                s.ply,
                s.seat,
                s.agent.to_string(),
                s.mv.code,
                s.mv.tag,
                s.iterations
            ) {
                failed = Some(e);
            }
        }
    })
    .map_err(|e| match e {
        crate::play::PlayError::WrongAgentCount { .. } => CliError::Usage(e.to_string()),
        _ => data(e),
    })?;
    if let Some(e) = failed {
        return Err(io_data(e));
    }
    writeln!(
        out,
        "utilities {} length {}{}",
        format_utilities(&rec.utilities),
        rec.length,
        if rec.capped { " (move cap)" } else { "" }
    )
    .map_err(io_data)
}

fn open_out(path: Option<&Path>) -> Result<Option<std::fs::File>, CliError> {
    path.map(|p| std::fs::File::create(p).map_err(|e| data(format!("{}: {e}", p.display()))))
        .transpose()
}

fn concepts(a: ConceptArgs, file: Option<&ConfigFile>, out: &mut dyn Write) -> Result<(), CliError> {
    let games = parse_games(&pick(a.games, file, "games")?.unwrap_or_default())?;
    let trials = pick(a.trials, file, "trials")?.unwrap_or(crate::concepts::DEFAULT_TRIALS);
    if trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let seed = required(pick(a.seed, file, "seed")?, "seed")?;
    let target = open_out(pick(a.out, file, "out")?.as_deref())?;
    let sink: Box<dyn Write + '_> = match target {
        Some(f) => Box::new(f),
        None => Box::new(&mut *out),
    };
    let mut w = csv::Writer::from_writer(sink);
    let mut header = vec!["game"];
    header.extend(FEATURE_NAMES);
    w.write_record(&header).map_err(data)?;
    for g in games {
        let c = compute_concepts(g, trials, seed);
        let mut row = vec![g.name().to_string()];
        row.extend(c.csv_fields());
        w.write_record(&row).map_err(data)?;
    }
    w.flush().map_err(io_data)
}

fn tournament(
    a: TournamentArgs,
    file: Option<&ConfigFile>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let games = parse_games(&pick(a.games, file, "games")?.unwrap_or_default())?;
    let pool: Vec<MctsSpec> = match pick(a.agents, file, "agents")? {
        Some(s) => parse_agents(&s)?.iter().filter_map(|x| x.mcts().copied()).collect(),
        None => MctsSpec::grid(),
    };
    if pool.is_empty() {
        return Err(CliError::Usage("agent pool has no MCTS agents".into()));
    }
    let (settings, seed) = settings(&a.search, file)?;
    let out_path = pick(a.out, file, "out")?.unwrap_or_else(|| PathBuf::from("dataset.csv"));
    let mut opts = RunOptions::new(out_path, settings);
    opts.sample_fraction = pick(a.sample, file, "sample")?.unwrap_or(1.0);
    opts.journal = pick(a.journal, file, "journal")?;
    opts.workers = pick(a.workers, file, "workers")?;
    opts.concept_trials = pick(a.trials, file, "trials")?.unwrap_or(crate::concepts::DEFAULT_TRIALS);
    opts.concept_seed = seed;
    opts.max_jobs = pick(a.max_jobs, file, "max_jobs")?;
    if !(opts.sample_fraction > 0.0 && opts.sample_fraction <= 1.0) {
        return Err(CliError::Usage(format!(
            "sample must be in (0, 1], got {}",
            opts.sample_fraction
        )));
    }
    let jobs = generate_jobs(&games, &pool, seed);
    let report = run_jobs(&jobs, &opts).map_err(data)?;
    write!(out, "{report}").map_err(io_data)
}

fn preprocess_cmd(
    a: PreprocessArgs,
    file: Option<&ConfigFile>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let input = required(pick(a.input, file, "input")?, "input")?;
    let raw = RawDataset::read(&input).map_err(|e| data(format!("{}: {e}", input.display())))?;
    let (table, drops) = preprocess(&raw, &GameCatalog::builtin()).map_err(data)?;
    match pick(a.out, file, "out")? {
        Some(p) => table.write_path(&p).map_err(data)?,
        None => table.write(&mut *out).map_err(data)?,
    }
    match pick(a.report, file, "report")? {
        Some(p) => std::fs::write(&p, drops.to_string()).map_err(io_data)?,
        None => eprint!("{drops}"),
    }
    Ok(())
}

fn report(a: ReportArgs, file: Option<&ConfigFile>, out: &mut dyn Write) -> Result<(), CliError> {
    let input = required(pick(a.input, file, "input")?, "input")?;
    let raw = RawDataset::read(&input).map_err(|e| data(format!("{}: {e}", input.display())))?;
    let means = agent_means(&raw);
    if means.is_empty() {
        return Err(CliError::Data("dataset has no rows".into()));
    }
    writeln!(out, "{:<14} {:<32} {:>9} {:>6}", "game", "agent", "mean", "seats").map_err(io_data)?;
    for ((game, agent), (mean, n)) in means {
        writeln!(out, "{game:<14} {agent:<32} {mean:>9.4} {n:>6}").map_err(io_data)?;
    }
    Ok(())
}
