//! Selection-phase bandit scores.
//!
//! All four strategies share the exploration constant `c`, which multiplies
//! the UCB1-style exploration term. Values live on the `[-1, 1]` utility
//! scale. Unvisited edges return [`UNVISITED`]; GRAVE scores an unvisited
//! edge that already has AMAF data in a tier just below that
//! ([`AMAF_TIER`] + AMAF mean), above every visited edge.

/// Priority of an edge with no visits and no other information.
pub const UNVISITED: f64 = f64::INFINITY;

/// Base of the GRAVE tier for unvisited edges with AMAF statistics.
pub const AMAF_TIER: f64 = 1e9;

/// GRAVE: ancestor must have at least this many visits to supply AMAF data.
pub const GRAVE_REF: u64 = 100;
pub const GRAVE_BIAS: f64 = 1e-6;
/// Progressive History bias weight W.
pub const PH_WEIGHT: f64 = 3.0;

/// Visit count and value sums of one tree edge, seen from the player who
/// chooses it.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EdgeStats {
    pub visits: f64,
    pub value_sum: f64,
    pub squared_sum: f64,
}

impl EdgeStats {
    pub fn new(visits: f64, value_sum: f64, squared_sum: f64) -> Self {
        Self {
            visits,
            value_sum,
            squared_sum,
        }
    }

    pub fn mean(&self) -> f64 {
        if self.visits > 0.0 {
            self.value_sum / self.visits
        } else {
            0.0
        }
    }

    /// Population variance of the backed-up values.
    pub fn variance(&self) -> f64 {
        if self.visits > 0.0 {
            let q = self.mean();
            (self.squared_sum / self.visits - q * q).max(0.0)
        } else {
            0.0
        }
    }
}

/// A (count, value-sum) pair: AMAF entries, history and playout tables.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MoveStats {
    pub count: f64,
    pub value_sum: f64,
}

impl MoveStats {
    pub fn new(count: f64, value_sum: f64) -> Self {
        Self { count, value_sum }
    }

    /// Mean value; 0 when nothing has been recorded.
    pub fn mean(&self) -> f64 {
        if self.count > 0.0 {
            self.value_sum / self.count
        } else {
            0.0
        }
    }
}

fn exploration(parent_visits: f64, visits: f64, c: f64) -> f64 {
    c * (parent_visits.max(1.0).ln() / visits).sqrt()
}

pub fn ucb1_score(edge: EdgeStats, parent_visits: f64, c: f64) -> f64 {
    if edge.visits <= 0.0 {
        return UNVISITED;
    }
    edge.mean() + exploration(parent_visits, edge.visits, c)
}

/// UCB1-Tuned with the variance bound capped at 1 (utilities span [-1, 1]).
pub fn ucb1_tuned_score(edge: EdgeStats, parent_visits: f64, c: f64) -> f64 {
    if edge.visits <= 0.0 {
        return UNVISITED;
    }
    let n = edge.visits;
    let ln_n = parent_visits.max(1.0).ln();
    let v = edge.variance() + (2.0 * ln_n / n).sqrt();
    edge.mean() + c * ((ln_n / n) * v.min(1.0)).sqrt()
}

/// GRAVE blending weight for the AMAF mean.
pub fn grave_beta(visits: f64, amaf_visits: f64, bias: f64) -> f64 {
    if amaf_visits <= 0.0 {
        return 0.0;
    }
    amaf_visits / (visits + amaf_visits + bias * visits * amaf_visits)
}

pub fn grave_score(edge: EdgeStats, parent_visits: f64, c: f64, amaf: MoveStats, bias: f64) -> f64 {
    if edge.visits <= 0.0 {
        return if amaf.count > 0.0 {
            AMAF_TIER + amaf.mean()
        } else {
            UNVISITED
        };
    }
    let beta = grave_beta(edge.visits, amaf.count, bias);
    (1.0 - beta) * edge.mean()
        + beta * amaf.mean()
        + exploration(parent_visits, edge.visits, c)
}

/// Progressive History bias term `H * W / ((1 - q) * n + 1)` where `q` is the
/// edge mean rescaled to `[0, 1]`.
pub fn progressive_history_bias(edge: EdgeStats, history: MoveStats, weight: f64) -> f64 {
    let q = (edge.mean() + 1.0) / 2.0;
    history.mean() * weight / ((1.0 - q) * edge.visits + 1.0)
}

pub fn progressive_history_score(
    edge: EdgeStats,
    parent_visits: f64,
    c: f64,
    history: MoveStats,
    weight: f64,
) -> f64 {
    if edge.visits <= 0.0 {
        return UNVISITED;
    }
    ucb1_score(edge, parent_visits, c) + progressive_history_bias(edge, history, weight)
}
