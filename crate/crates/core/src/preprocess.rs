//! Raw dataset -> model table: filter, merge duplicate matchups, drop
//! uninformative columns, one-hot encode the two agents.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io;
use std::path::Path;

use indexmap::IndexMap;
use thiserror::Error;

use crate::concepts::format_feature;
use crate::games::registry;
use crate::mcts::{AgentSpec, Playout, Selection};

#[derive(Debug, Error)]
pub enum PreprocessError {
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("dataset header must start with `game,agents` and end with `utilities`")]
    Header,
    #[error("row {row}: {message}")]
    Format { row: usize, message: String },
    #[error("feature `{column}` differs within group {game} {agents}")]
    Integrity {
        game: String,
        agents: String,
        column: String,
    },
    #[error("no rows after filtering")]
    NoRowsAfterFiltering,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawRow {
    pub game: String,
    pub agents: Vec<String>,
    /// `None` marks an empty cell.
    pub features: Vec<Option<f64>>,
    pub utilities: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawDataset {
    pub feature_names: Vec<String>,
    pub rows: Vec<RawRow>,
}

fn strip_parens(s: &str) -> Option<&str> {
    s.trim().strip_prefix('(')?.strip_suffix(')')
}

pub fn parse_agents(s: &str) -> Option<Vec<String>> {
    let inner = strip_parens(s)?;
    Some(inner.split(',').map(|a| a.trim().to_string()).collect())
}

pub fn parse_utilities(s: &str) -> Option<Vec<f64>> {
    let inner = strip_parens(s)?;
    inner.split(';').map(|u| u.trim().parse().ok()).collect()
}

impl RawDataset {
    pub fn from_reader<R: io::Read>(reader: R) -> Result<Self, PreprocessError> {
        let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.is_empty() {
            return Ok(RawDataset {
                feature_names: Vec::new(),
                rows: Vec::new(),
            });
        }
        let n = header.len();
        if n < 3 || &header[0] != "game" || &header[1] != "agents" || &header[n - 1] != "utilities" {
            return Err(PreprocessError::Header);
        }
        let feature_names = header.iter().skip(2).take(n - 3).map(String::from).collect();
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let err = |message: String| PreprocessError::Format { row: i, message };
            let agents = parse_agents(&rec[1]).ok_or_else(|| err(format!("bad agents `{}`", &rec[1])))?;
            let utilities = parse_utilities(&rec[n - 1])
                .ok_or_else(|| err(format!("bad utilities `{}`", &rec[n - 1])))?;
            let mut features = Vec::with_capacity(n - 3);
            for cell in rec.iter().skip(2).take(n - 3) {
                let cell = cell.trim();
                features.push(if cell.is_empty() {
                    None
                } else {
                    Some(cell.parse().map_err(|_| err(format!("bad feature `{cell}`")))?)
                });
            }
            rows.push(RawRow {
                game: rec[0].to_string(),
                agents,
                features,
                utilities,
            });
        }
        Ok(RawDataset {
            feature_names,
            rows,
        })
    }

    pub fn read(path: &Path) -> Result<Self, PreprocessError> {
        Self::from_reader(std::fs::File::open(path)?)
    }
}

/// Player count and zero-sum flag per game name.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GameCatalog(HashMap<String, (usize, bool)>);

impl GameCatalog {
    pub fn builtin() -> Self {
        let mut c = GameCatalog::default();
        for d in registry() {
            c.insert(d.name, d.players, d.zero_sum);
        }
        c
    }

    pub fn insert(&mut self, name: &str, players: usize, zero_sum: bool) {
        self.0.insert(name.to_string(), (players, zero_sum));
    }

    pub fn with(mut self, name: &str, players: usize, zero_sum: bool) -> Self {
        self.insert(name, players, zero_sum);
        self
    }

    pub fn get(&self, name: &str) -> Option<(usize, bool)> {
        self.0.get(name).copied()
    }
}

fn is_random(agent: &str) -> bool {
    matches!(agent.parse::<AgentSpec>(), Ok(AgentSpec::Random))
}

fn same_agent(a: &str, b: &str) -> bool {
    match (a.parse::<AgentSpec>(), b.parse::<AgentSpec>()) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

/// Keeps two-player zero-sum games (per `catalog`; unknown games are
/// dropped) played by two different non-Random agents.
pub fn filter_rows(data: &RawDataset, catalog: &GameCatalog) -> RawDataset {
    let rows = data
        .rows
        .iter()
        .filter(|r| catalog.get(&r.game) == Some((2, true)))
        .filter(|r| r.agents.len() == 2 && r.utilities.len() == 2)
        .filter(|r| !r.agents.iter().any(|a| is_random(a)))
        .filter(|r| !same_agent(&r.agents[0], &r.agents[1]))
        .cloned()
        .collect();
    RawDataset {
        feature_names: data.feature_names.clone(),
        rows,
    }
}

fn same_cell(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x.to_bits() == y.to_bits() || x == y,
        (None, None) => true,
        _ => false,
    }
}

type GroupKey = (String, Vec<String>);

/// One row per (game, ordered agent tuple), in first-seen order, with the
/// per-seat utilities averaged.
pub fn merge_duplicates(data: &RawDataset) -> Result<RawDataset, PreprocessError> {
    // (game, agents) -> (first row, utility sums, row count)
    let mut groups: IndexMap<GroupKey, (RawRow, Vec<f64>, usize)> = IndexMap::new();
    for r in &data.rows {
        let key = (r.game.clone(), r.agents.clone());
        match groups.get_mut(&key) {
            None => {
                groups.insert(key, (r.clone(), r.utilities.clone(), 1));
            }
            Some((first, sums, count)) => {
                for (j, (a, b)) in first.features.iter().zip(&r.features).enumerate() {
                    if !same_cell(*a, *b) {
                        return Err(PreprocessError::Integrity {
                            game: r.game.clone(),
                            agents: format!("({})", r.agents.join(", ")),
                            column: data.feature_names[j].clone(),
                        });
                    }
                }
                if sums.len() != r.utilities.len() {
                    return Err(PreprocessError::Integrity {
                        game: r.game.clone(),
                        agents: format!("({})", r.agents.join(", ")),
                        column: "utilities".to_string(),
                    });
                }
                for (s, u) in sums.iter_mut().zip(&r.utilities) {
                    *s += u;
                }
                *count += 1;
            }
        }
    }
    let rows = groups
        .into_values()
        .map(|(mut row, sums, count)| {
            row.utilities = sums.iter().map(|s| s / count as f64).collect();
            row
        })
        .collect();
    Ok(RawDataset {
        feature_names: data.feature_names.clone(),
        rows,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DropReport {
    pub constant: Vec<String>,
    pub missing: Vec<String>,
    pub kept: Vec<String>,
}

impl fmt::Display for DropReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let total = self.constant.len() + self.missing.len() + self.kept.len();
        writeln!(f, "feature columns: {total}")?;
        writeln!(f, "dropped constant: {}", self.constant.len())?;
        for c in &self.constant {
            writeln!(f, "  {c}")?;
        }
        writeln!(f, "dropped missing: {}", self.missing.len())?;
        for c in &self.missing {
            writeln!(f, "  {c}")?;
        }
        writeln!(f, "kept: {}", self.kept.len())
    }
}

/// Removes feature columns with any empty cell, then those holding a single
/// value across all rows.
pub fn drop_columns(data: &RawDataset) -> (RawDataset, DropReport) {
    let mut report = DropReport::default();
    let mut keep = Vec::new();
    for (j, name) in data.feature_names.iter().enumerate() {
        let col = || data.rows.iter().map(move |r| r.features[j]);
        if col().any(|c| c.is_none()) {
            report.missing.push(name.clone());
        } else if col().all(|c| same_cell(c, data.rows[0].features[j])) {
            report.constant.push(name.clone());
        } else {
            report.kept.push(name.clone());
            keep.push(j);
        }
    }
    let rows = data
        .rows
        .iter()
        .map(|r| RawRow {
            features: keep.iter().map(|&j| r.features[j]).collect(),
            ..r.clone()
        })
        .collect();
    (
        RawDataset {
            feature_names: report.kept.clone(),
            rows,
        },
        report,
    )
}

pub const TARGET_COLUMN: &str = "utility_agent1";

/// Numeric rows keyed by game; `header` excludes the leading `game` column.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelTable {
    pub header: Vec<String>,
    pub games: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Per-agent encoded columns: selection one-hot, exploration value, playout
/// one-hot, each group in the enum's declaration order.
pub fn agent_columns(prefix: &str) -> Vec<String> {
    let mut cols: Vec<String> = Selection::ALL
        .iter()
        .map(|s| format!("{prefix}_selection_{}", s.name()))
        .collect();
    cols.push(format!("{prefix}_exploration"));
    cols.extend(Playout::ALL.iter().map(|p| format!("{prefix}_playout_{}", p.name())));
    cols
}

pub fn encode_agent(agent: &AgentSpec) -> Option<Vec<f64>> {
    let m = agent.mcts()?;
    let mut v: Vec<f64> = Selection::ALL
        .iter()
        .map(|s| f64::from(u8::from(*s == m.selection)))
        .collect();
    v.push(m.exploration.value());
    v.extend(Playout::ALL.iter().map(|p| f64::from(u8::from(*p == m.playout))));
    Some(v)
}

pub fn encode_agents(data: &RawDataset) -> Result<ModelTable, PreprocessError> {
    let mut header = agent_columns("agent1");
    header.extend(agent_columns("agent2"));
    header.extend(data.feature_names.iter().cloned());
    header.push(TARGET_COLUMN.to_string());
    let mut rows = Vec::with_capacity(data.rows.len());
    for (i, r) in data.rows.iter().enumerate() {
        let err = |message: String| PreprocessError::Format { row: i, message };
        if r.agents.len() != 2 || r.utilities.len() != 2 {
            return Err(err("expected exactly two agents".to_string()));
        }
        let mut row = Vec::with_capacity(header.len());
        for a in &r.agents {
            let enc = a
                .parse::<AgentSpec>()
                .ok()
                .as_ref()
                .and_then(encode_agent)
                .ok_or_else(|| err(format!("cannot encode agent `{a}`")))?;
            row.extend(enc);
        }
        for (j, f) in r.features.iter().enumerate() {
            row.push(f.ok_or_else(|| err(format!("missing `{}`", data.feature_names[j])))?);
        }
        row.push(r.utilities[0]);
        rows.push(row);
    }
    Ok(ModelTable {
        header,
        games: data.rows.iter().map(|r| r.game.clone()).collect(),
        rows,
    })
}

impl ModelTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn write<W: io::Write>(&self, w: W) -> Result<(), PreprocessError> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut h = vec!["game".to_string()];
        h.extend(self.header.iter().cloned());
        wtr.write_record(&h)?;
        for (g, row) in self.games.iter().zip(&self.rows) {
            let mut rec = vec![g.clone()];
            rec.extend(row.iter().map(|v| format_feature(*v)));
            wtr.write_record(&rec)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn write_path(&self, path: &Path) -> Result<(), PreprocessError> {
        self.write(io::BufWriter::new(std::fs::File::create(path)?))
    }
}

/// filter -> merge -> drop -> encode.
pub fn preprocess(
    data: &RawDataset,
    catalog: &GameCatalog,
) -> Result<(ModelTable, DropReport), PreprocessError> {
    let filtered = filter_rows(data, catalog);
    if filtered.rows.is_empty() {
        return Err(PreprocessError::NoRowsAfterFiltering);
    }
    let merged = merge_duplicates(&filtered)?;
    let (reduced, report) = drop_columns(&merged);
    Ok((encode_agents(&reduced)?, report))
}

/// Mean utility per (game, agent) over every seat the agent occupied.
pub fn agent_means(data: &RawDataset) -> BTreeMap<(String, String), (f64, usize)> {
    let mut acc: BTreeMap<(String, String), (f64, usize)> = BTreeMap::new();
    for r in &data.rows {
        for (a, u) in r.agents.iter().zip(&r.utilities) {
            let e = acc.entry((r.game.clone(), a.clone())).or_default();
            e.0 += u;
            e.1 += 1;
        }
    }
    for v in acc.values_mut() {
        v.0 /= v.1 as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSV: &str = "\
game,agents,A,B,C,utilities
TicTacToe,\"(UCB1-0.6-MAST, UCB1Tuned-0.1-NST)\",1,0,2,(1.000000;-1.000000)
TicTacToe,\"(UCB1-0.6-MAST, UCB1Tuned-0.1-NST)\",1,0,,(0.000000;0.000000)
";

    #[test]
    fn parse_and_missing_cell() {
        let d = RawDataset::from_reader(CSV.as_bytes()).unwrap();
        assert_eq!(d.feature_names, ["A", "B", "C"]);
        assert_eq!(d.rows[1].features[2], None);
        assert_eq!(d.rows[0].agents[1], "UCB1Tuned-0.1-NST");
    }

    #[test]
    fn inconsistent_group_is_integrity_error() {
        let d = RawDataset::from_reader(CSV.as_bytes()).unwrap();
        assert!(matches!(
            merge_duplicates(&d),
            Err(PreprocessError::Integrity { ref column, .. }) if column == "C"
        ));
    }

    #[test]
    fn drop_constant_and_missing() {
        let d = RawDataset::from_reader(CSV.as_bytes()).unwrap();
        let (out, rep) = drop_columns(&d);
        assert_eq!(rep.constant, ["A", "B"]);
        assert_eq!(rep.missing, ["C"]);
        assert!(out.feature_names.is_empty());
    }

    #[test]
    fn encoding_layout() {
        let a: AgentSpec = "UCB1Tuned-0.1-MAST".parse().unwrap();
        assert_eq!(
            encode_agent(&a).unwrap(),
            vec![0.0, 0.0, 0.0, 1.0, 0.1, 0.0, 0.0, 0.0, 1.0, 0.0]
        );
        assert!(encode_agent(&AgentSpec::Random).is_none());
        assert_eq!(agent_columns("agent1").len(), 10);
    }

    #[test]
    fn empty_dataset_has_no_rows() {
        let d = RawDataset::from_reader("".as_bytes()).unwrap();
        assert!(matches!(
            preprocess(&d, &GameCatalog::builtin()),
            Err(PreprocessError::NoRowsAfterFiltering)
        ));
    }
}
