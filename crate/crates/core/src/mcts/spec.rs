//! The agent grid: 4 selection strategies x 3 exploration constants x 5
//! playout strategies, plus the uniform Random agent.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse agent `{0}`")]
pub struct ParseAgentError(pub String);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Selection {
    Ucb1,
    Ucb1Grave,
    ProgressiveHistory,
    Ucb1Tuned,
}

impl Selection {
    pub const ALL: [Selection; 4] = [
        Selection::Ucb1,
        Selection::Ucb1Grave,
        Selection::ProgressiveHistory,
        Selection::Ucb1Tuned,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Selection::Ucb1 => "UCB1",
            Selection::Ucb1Grave => "UCB1GRAVE",
            Selection::ProgressiveHistory => "ProgressiveHistory",
            Selection::Ucb1Tuned => "UCB1Tuned",
        }
    }
}

/// Exploration constant C.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exploration {
    C01,
    C06,
    Sqrt2,
}

impl Exploration {
    pub const ALL: [Exploration; 3] = [Exploration::C01, Exploration::C06, Exploration::Sqrt2];

    pub fn value(self) -> f64 {
        match self {
            Exploration::C01 => 0.1,
            Exploration::C06 => 0.6,
            Exploration::Sqrt2 => std::f64::consts::SQRT_2,
        }
    }

    /// Dataset label; sqrt(2) is printed rounded to two decimals.
    pub fn label(self) -> &'static str {
        match self {
            Exploration::C01 => "0.1",
            Exploration::C06 => "0.6",
            Exploration::Sqrt2 => "1.41",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Playout {
    Random0,
    Random4,
    Random200,
    Mast,
    Nst,
}

impl Playout {
    pub const ALL: [Playout; 5] = [
        Playout::Random0,
        Playout::Random4,
        Playout::Random200,
        Playout::Mast,
        Playout::Nst,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Playout::Random0 => "Random0",
            Playout::Random4 => "Random4",
            Playout::Random200 => "Random200",
            Playout::Mast => "MAST",
            Playout::Nst => "NST",
        }
    }

    /// Playout length cap; a playout stopped by the cap backs up zeros.
    pub fn max_moves(self) -> usize {
        match self {
            Playout::Random0 => 0,
            Playout::Random4 => 4,
            Playout::Random200 | Playout::Mast | Playout::Nst => 200,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MctsSpec {
    pub selection: Selection,
    pub exploration: Exploration,
    pub playout: Playout,
}

impl MctsSpec {
    pub const fn new(selection: Selection, exploration: Exploration, playout: Playout) -> Self {
        Self {
            selection,
            exploration,
            playout,
        }
    }

    /// All 60 MCTS variants, selection-major.
    pub fn grid() -> Vec<MctsSpec> {
        let mut out = Vec::with_capacity(60);
        for s in Selection::ALL {
            for c in Exploration::ALL {
                for p in Playout::ALL {
                    out.push(MctsSpec::new(s, c, p));
                }
            }
        }
        out
    }
}

impl fmt::Display for MctsSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-{}-{}",
            self.selection.name(),
            self.exploration.label(),
            self.playout.name()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AgentSpec {
    Random,
    Mcts(MctsSpec),
}

impl AgentSpec {
    /// The 61 agents: every grid point plus Random (last).
    pub fn all() -> Vec<AgentSpec> {
        let mut v: Vec<AgentSpec> = MctsSpec::grid().into_iter().map(AgentSpec::Mcts).collect();
        v.push(AgentSpec::Random);
        v
    }

    pub fn mcts(&self) -> Option<&MctsSpec> {
        match self {
            AgentSpec::Mcts(m) => Some(m),
            AgentSpec::Random => None,
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, AgentSpec::Random)
    }
}

impl From<MctsSpec> for AgentSpec {
    fn from(m: MctsSpec) -> Self {
        AgentSpec::Mcts(m)
    }
}

impl fmt::Display for AgentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentSpec::Random => f.write_str("Random"),
            AgentSpec::Mcts(m) => m.fmt(f),
        }
    }
}

impl FromStr for Selection {
    type Err = ParseAgentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Selection::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ParseAgentError(s.to_string()))
    }
}

impl FromStr for Playout {
    type Err = ParseAgentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Playout::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ParseAgentError(s.to_string()))
    }
}

impl FromStr for Exploration {
    type Err = ParseAgentError;

    /// Accepts the printed labels and any value within 0.01 of a grid
    /// constant (so `1.414` and `1.4142135` parse as sqrt(2)).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: f64 = s.parse().map_err(|_| ParseAgentError(s.to_string()))?;
        Exploration::ALL
            .into_iter()
            .find(|x| (x.value() - v).abs() < 0.01)
            .ok_or_else(|| ParseAgentError(s.to_string()))
    }
}

impl FromStr for MctsSpec {
    type Err = ParseAgentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseAgentError(s.to_string());
        let mut parts = s.trim().splitn(3, '-');
        let (sel, c, play) = (
            parts.next().ok_or_else(err)?,
            parts.next().ok_or_else(err)?,
            parts.next().ok_or_else(err)?,
        );
        Ok(MctsSpec::new(
            sel.parse().map_err(|_| err())?,
            c.parse().map_err(|_| err())?,
            play.parse().map_err(|_| err())?,
        ))
    }
}

impl FromStr for AgentSpec {
    type Err = ParseAgentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("random") {
            Ok(AgentSpec::Random)
        } else {
            s.parse().map(AgentSpec::Mcts)
        }
    }
}
