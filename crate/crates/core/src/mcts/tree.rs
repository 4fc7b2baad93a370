//! Shared search tree.
//!
//! Nodes are keyed by `(seat, move code)` of the edge leading into them, so
//! the tree is open-loop: in stochastic games one node aggregates every
//! chance outcome reached by the same move sequence. Statistics are atomic
//! per field; child lists and AMAF tables sit behind short-lived locks.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use rustc_hash::FxHashMap;

use crate::game::Seat;
use crate::mcts::scores::{EdgeStats, MoveStats};
use crate::mcts::tables::{AtomicF64, PolicyTables};

/// Factor applied to tree-wide playout tables when a tree is reused.
pub const DECAY: f64 = 0.6;

/// Seat marker for a root that was never reached through an edge.
pub(crate) const NO_SEAT: u8 = u8::MAX;

#[derive(Debug)]
pub struct Node {
    seat: u8,
    code: u32,
    visits: AtomicU64,
    value_sum: AtomicF64,
    squared_sum: AtomicF64,
    virtual_loss: AtomicU64,
    children: RwLock<Vec<Arc<Node>>>,
    amaf: Mutex<FxHashMap<(u8, u32), MoveStats>>,
}

impl Node {
    pub(crate) fn new(seat: u8, code: u32) -> Self {
        Self {
            seat,
            code,
            visits: AtomicU64::new(0),
            value_sum: AtomicF64::default(),
            squared_sum: AtomicF64::default(),
            virtual_loss: AtomicU64::new(0),
            children: RwLock::new(Vec::new()),
            amaf: Mutex::new(FxHashMap::default()),
        }
    }

    pub fn root() -> Self {
        Self::new(NO_SEAT, u32::MAX)
    }

    fn key(&self) -> (u8, u32) {
        (self.seat, self.code)
    }

    /// Seat whose move leads into this node, `None` for a fresh root.
    pub fn seat(&self) -> Option<Seat> {
        (self.seat != NO_SEAT).then_some(self.seat as Seat)
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn visits(&self) -> u64 {
        self.visits.load(Ordering::Relaxed)
    }

    /// Raw statistics, from the perspective of [`Node::seat`].
    pub fn stats(&self) -> EdgeStats {
        EdgeStats::new(
            self.visits() as f64,
            self.value_sum.load(),
            self.squared_sum.load(),
        )
    }

    /// Statistics with pending virtual losses counted as visits worth -1.
    pub fn effective_stats(&self) -> EdgeStats {
        let vl = self.virtual_loss.load(Ordering::Relaxed) as f64;
        let s = self.stats();
        EdgeStats::new(s.visits + vl, s.value_sum - vl, s.squared_sum + vl)
    }

    pub fn effective_visits(&self) -> f64 {
        (self.visits() + self.virtual_loss.load(Ordering::Relaxed)) as f64
    }

    pub(crate) fn add_virtual_loss(&self) {
        self.virtual_loss.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn remove_virtual_loss(&self) {
        self.virtual_loss.fetch_sub(1, Ordering::Relaxed);
    }

    pub fn pending_virtual_loss(&self) -> u64 {
        self.virtual_loss.load(Ordering::Relaxed)
    }

    pub(crate) fn record(&self, utility: Option<f64>) {
        self.visits.fetch_add(1, Ordering::Relaxed);
        if let Some(u) = utility {
            self.value_sum.add(u);
            self.squared_sum.add(u * u);
        }
    }

    /// Utility recorded for this node's seat, if it has one.
    pub(crate) fn perspective(&self, utilities: &[f64]) -> Option<f64> {
        self.seat().map(|s| utilities[s])
    }

    pub(crate) fn children_guard(&self) -> parking_lot::RwLockReadGuard<'_, Vec<Arc<Node>>> {
        self.children.read()
    }

    pub(crate) fn find_in(children: &[Arc<Node>], seat: Seat, code: u32) -> Option<&Arc<Node>> {
        let key = (seat as u8, code);
        children
            .binary_search_by(|c| c.key().cmp(&key))
            .ok()
            .map(|i| &children[i])
    }

    pub fn child(&self, seat: Seat, code: u32) -> Option<Arc<Node>> {
        Self::find_in(&self.children.read(), seat, code).cloned()
    }

    /// Returns the child for `(seat, code)`, creating it if needed; the flag
    /// is true iff this call created it.
    pub(crate) fn get_or_insert_child(&self, seat: Seat, code: u32) -> (Arc<Node>, bool) {
        let key = (seat as u8, code);
        let mut children = self.children.write();
        match children.binary_search_by(|c| c.key().cmp(&key)) {
            Ok(i) => (children[i].clone(), false),
            Err(i) => {
                let node = Arc::new(Node::new(key.0, key.1));
                children.insert(i, node.clone());
                (node, true)
            }
        }
    }

    pub fn children(&self) -> Vec<Arc<Node>> {
        self.children.read().clone()
    }

    pub fn amaf(&self, seat: Seat, code: u32) -> MoveStats {
        self.amaf
            .lock()
            .get(&(seat as u8, code))
            .copied()
            .unwrap_or_default()
    }

    pub(crate) fn amaf_guard(&self) -> parking_lot::MutexGuard<'_, FxHashMap<(u8, u32), MoveStats>> {
        self.amaf.lock()
    }

    /// Number of nodes in this subtree, including this one.
    pub fn subtree_size(&self) -> usize {
        1 + self
            .children
            .read()
            .iter()
            .map(|c| c.subtree_size())
            .sum::<usize>()
    }
}

/// Search tree plus the tree-wide playout tables that live as long as it.
#[derive(Debug)]
pub struct SearchTree {
    root: Arc<Node>,
    tables: PolicyTables,
}

impl Default for SearchTree {
    fn default() -> Self {
        Self::new()
    }
}

impl SearchTree {
    pub fn new() -> Self {
        Self {
            root: Arc::new(Node::root()),
            tables: PolicyTables::new(),
        }
    }

    pub fn root(&self) -> &Arc<Node> {
        &self.root
    }

    pub fn tables(&self) -> &PolicyTables {
        &self.tables
    }

    pub fn tables_mut(&mut self) -> &mut PolicyTables {
        &mut self.tables
    }

    /// Re-roots the tree at the node reached by `realized` moves (a fresh
    /// node if that path was never expanded) and decays the tree-wide
    /// tables by [`DECAY`]. Per-node AMAF data travels with its subtree.
    pub fn advance_root(&mut self, realized: &[(Seat, u32)]) {
        self.advance_root_with_decay(realized, DECAY);
    }

    pub fn advance_root_with_decay(&mut self, realized: &[(Seat, u32)], decay: f64) {
        let mut node = Some(self.root.clone());
        let mut last = None;
        for &(seat, code) in realized {
            node = node.and_then(|n| n.child(seat, code));
            last = Some((seat, code));
        }
        self.root = match (node, last) {
            (Some(n), _) => n,
            (None, Some((seat, code))) => Arc::new(Node::new(seat as u8, code)),
            (None, None) => Arc::new(Node::root()),
        };
        self.tables.decay(decay);
    }
}
