//! Plain-text run configuration and its merge with command-line flags.
//!
//! The file format is one `key = value` pair per line. Blank lines and lines
//! starting with `#` are ignored, keys accept `-` or `_`, and a later line
//! overrides an earlier one. Recognised keys:
//!
//! ```text
//! games = TicTacToe, Hex      # or `all`
//! agents = UCB1-0.6-MAST, UCB1GRAVE-1.41-NST
//! budget = iters:1000         # or time:<seconds>
//! threads = 4
//! sample = 0.1
//! seed = 42
//! trials = 1000
//! workers = 2
//! move_cap = 5000
//! out = dataset.csv
//! ```

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::games::GameId;
use crate::mcts::{AgentSpec, SearchBudget};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("invalid value for `{key}`: {message}")]
    Value { key: String, message: String },
    #[error("missing required setting `{0}`")]
    Missing(&'static str),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigFile(BTreeMap<String, String>);

fn normalise_key(k: &str) -> String {
    k.trim().replace('-', "_").to_ascii_lowercase()
}

impl FromStr for ConfigFile {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split_once('#').map_or(line, |(a, _)| a).trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            if k.trim().is_empty() {
                return Err(ConfigError::Syntax { line: i + 1 });
            }
            map.insert(normalise_key(k), v.trim().to_string());
        }
        Ok(ConfigFile(map))
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read {
                path: path.to_path_buf(),
                source,
            })?
            .parse()
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(&normalise_key(key)).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse().map_err(|e: T::Err| ConfigError::Value {
                    key: key.to_string(),
                    message: e.to_string(),
                })
            })
            .transpose()
    }
}

/// `flag` if given, else the config file's value for `key`.
pub fn pick<T: FromStr>(
    flag: Option<T>,
    file: Option<&ConfigFile>,
    key: &str,
) -> Result<Option<T>, ConfigError>
where
    T::Err: Display,
{
    match (flag, file) {
        (Some(v), _) => Ok(Some(v)),
        (None, Some(f)) => f.get(key),
        (None, None) => Ok(None),
    }
}

/// Comma-separated list; `all` (or an empty value) selects every game.
pub fn parse_games(s: &str) -> Result<Vec<GameId>, ConfigError> {
    let s = s.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("all") {
        return Ok(GameId::ALL.to_vec());
    }
    s.split(',')
        .map(|g| {
            g.parse().map_err(|e: crate::game::GameError| ConfigError::Value {
                key: "games".into(),
                message: e.to_string(),
            })
        })
        .collect()
}

/// Comma-separated agent strings; `all` selects the 61-agent pool.
pub fn parse_agents(s: &str) -> Result<Vec<AgentSpec>, ConfigError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("all") {
        return Ok(AgentSpec::all());
    }
    s.split(',')
        .map(|a| {
            a.parse().map_err(|e: crate::mcts::ParseAgentError| ConfigError::Value {
                key: "agents".into(),
                message: e.to_string(),
            })
        })
        .collect()
}

/// Applies an explicit thread count to a parsed budget.
pub fn resolve_budget(budget: Option<SearchBudget>, threads: Option<usize>) -> SearchBudget {
    let b = budget.unwrap_or_default();
    match threads {
        Some(t) => b.with_threads(t.max(1)),
        None => b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let c: ConfigFile = "# run\nseed = 4\nmove-cap=10 # short\n\nbudget = iters:20\n"
            .parse()
            .unwrap();
        assert_eq!(c.get::<u64>("seed").unwrap(), Some(4));
        assert_eq!(c.get::<usize>("move_cap").unwrap(), Some(10));
        assert_eq!(
            c.get::<SearchBudget>("budget").unwrap(),
            Some(SearchBudget::iterations(20))
        );
        assert_eq!(c.get::<u64>("trials").unwrap(), None);
    }

    #[test]
    fn bad_lines_rejected() {
        assert!(matches!(
            "seed 4".parse::<ConfigFile>(),
            Err(ConfigError::Syntax { line: 1 })
        ));
        let c: ConfigFile = "seed = x".parse().unwrap();
        assert!(c.get::<u64>("seed").is_err());
    }

    #[test]
    fn flags_win() {
        let c: ConfigFile = "seed = 4".parse().unwrap();
        assert_eq!(pick(Some(9u64), Some(&c), "seed").unwrap(), Some(9));
        assert_eq!(pick(None::<u64>, Some(&c), "seed").unwrap(), Some(4));
    }

    #[test]
    fn lists() {
        assert_eq!(parse_games("all").unwrap().len(), GameId::ALL.len());
        assert_eq!(
            parse_games("hex, nim").unwrap(),
            vec![GameId::Hex, GameId::Nim]
        );
        assert!(parse_games("chess").is_err());
        assert_eq!(parse_agents("Random, UCB1-0.1-NST").unwrap().len(), 2);
        assert_eq!(
            resolve_budget(Some(SearchBudget::iterations(5)), Some(2)).threads(),
            2
        );
    }
}
