//! Tree-wide playout statistics shared by all search threads: the MAST
//! table (also used as the Progressive History table) and the NST n-gram
//! tables.

use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use rustc_hash::FxBuildHasher;

use crate::game::{Move, Seat};
use crate::mcts::scores::MoveStats;

/// Longest n-gram tracked by NST.
pub const MAX_NGRAM: usize = 3;

/// `f64` with lock-free add, stored as its bit pattern.
#[derive(Default, Debug)]
pub struct AtomicF64(AtomicU64);

impl AtomicF64 {
    pub fn new(v: f64) -> Self {
        Self(AtomicU64::new(v.to_bits()))
    }

    pub fn load(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Relaxed))
    }

    pub fn add(&self, v: f64) {
        let _ = self
            .0
            .fetch_update(Ordering::Relaxed, Ordering::Relaxed, |bits| {
                Some((f64::from_bits(bits) + v).to_bits())
            });
    }

    /// Only valid with exclusive access to the owner.
    pub fn scale(&mut self, factor: f64) {
        let v = f64::from_bits(*self.0.get_mut());
        *self.0.get_mut() = (v * factor).to_bits();
    }
}

/// Count and value sum updated field-by-field; a reader may see one field
/// ahead of the other. `observed` counts raw updates and is not decayed.
#[derive(Default, Debug)]
pub struct StatCell {
    count: AtomicF64,
    value_sum: AtomicF64,
    observed: AtomicU64,
}

impl StatCell {
    pub fn get(&self) -> MoveStats {
        MoveStats::new(self.count.load(), self.value_sum.load())
    }

    pub fn observed(&self) -> u64 {
        self.observed.load(Ordering::Relaxed)
    }

    pub fn record(&self, value: f64) {
        self.count.add(1.0);
        self.value_sum.add(value);
        self.observed.fetch_add(1, Ordering::Relaxed);
    }

    fn from_stats(stats: MoveStats) -> Self {
        Self {
            count: AtomicF64::new(stats.count),
            value_sum: AtomicF64::new(stats.value_sum),
            observed: AtomicU64::new(stats.count.round().max(0.0) as u64),
        }
    }

    fn scale(&mut self, factor: f64) {
        self.count.scale(factor);
        self.value_sum.scale(factor);
    }
}

/// A sequence of up to three move codes, attributed to the player who made
/// the last move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NGram {
    seat: u8,
    len: u8,
    codes: [u32; MAX_NGRAM],
}

impl NGram {
    pub fn new(seat: Seat, codes: &[u32]) -> Self {
        assert!((1..=MAX_NGRAM).contains(&codes.len()));
        let mut c = [0; MAX_NGRAM];
        c[..codes.len()].copy_from_slice(codes);
        Self {
            seat: seat as u8,
            len: codes.len() as u8,
            codes: c,
        }
    }

    /// The `n`-gram ending at `seq[end]`, if the sequence is long enough.
    pub fn ending_at(seq: &[(Seat, Move)], end: usize, n: usize) -> Option<Self> {
        if n == 0 || n > MAX_NGRAM || end + 1 < n {
            return None;
        }
        let mut codes = [0; MAX_NGRAM];
        for (k, &(_, mv)) in seq[end + 1 - n..=end].iter().enumerate() {
            codes[k] = mv.code;
        }
        Some(Self {
            seat: seq[end].0 as u8,
            len: n as u8,
            codes,
        })
    }

    /// The `n`-gram formed by the last `n - 1` moves of `history` followed by
    /// `mv` played by `seat`.
    pub fn extending(history: &[(Seat, Move)], seat: Seat, mv: Move, n: usize) -> Option<Self> {
        if n == 0 || n > MAX_NGRAM || history.len() + 1 < n {
            return None;
        }
        let mut codes = [0; MAX_NGRAM];
        let prefix = &history[history.len() + 1 - n..];
        for (k, &(_, m)) in prefix.iter().enumerate() {
            codes[k] = m.code;
        }
        codes[n - 1] = mv.code;
        Some(Self {
            seat: seat as u8,
            len: n as u8,
            codes,
        })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

#[derive(Default, Debug)]
pub struct PolicyTables {
    mast: DashMap<(u8, u32), StatCell, FxBuildHasher>,
    nst: DashMap<NGram, StatCell, FxBuildHasher>,
}

impl PolicyTables {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn mast(&self, seat: Seat, code: u32) -> MoveStats {
        self.mast
            .get(&(seat as u8, code))
            .map(|c| c.get())
            .unwrap_or_default()
    }

    pub fn record_mast(&self, seat: Seat, code: u32, value: f64) {
        let key = (seat as u8, code);
        if let Some(cell) = self.mast.get(&key) {
            cell.record(value);
            return;
        }
        self.mast.entry(key).or_default().record(value);
    }

    pub fn nst(&self, gram: &NGram) -> MoveStats {
        self.nst.get(gram).map(|c| c.get()).unwrap_or_default()
    }

    /// NST statistics plus the undecayed number of updates.
    pub fn nst_observed(&self, gram: &NGram) -> (MoveStats, u64) {
        self.nst
            .get(gram)
            .map_or((MoveStats::default(), 0), |c| (c.get(), c.observed()))
    }

    pub fn record_nst(&self, gram: NGram, value: f64) {
        if let Some(cell) = self.nst.get(&gram) {
            cell.record(value);
            return;
        }
        self.nst.entry(gram).or_default().record(value);
    }

    /// Overwrites a MAST entry; the observation count is set to the rounded
    /// count.
    pub fn set_mast(&self, seat: Seat, code: u32, stats: MoveStats) {
        self.mast.insert((seat as u8, code), StatCell::from_stats(stats));
    }

    /// Overwrites an NST entry (see [`PolicyTables::set_mast`]).
    pub fn set_nst(&self, gram: NGram, stats: MoveStats) {
        self.nst.insert(gram, StatCell::from_stats(stats));
    }

    /// Multiplies every count and value sum by `factor`; means and
    /// observation counts are unchanged.
    pub fn decay(&mut self, factor: f64) {
        for mut e in self.mast.iter_mut() {
            e.value_mut().scale(factor);
        }
        for mut e in self.nst.iter_mut() {
            e.value_mut().scale(factor);
        }
    }

    pub fn mast_entries(&self) -> Vec<((Seat, u32), MoveStats)> {
        let mut v: Vec<_> = self
            .mast
            .iter()
            .map(|e| ((e.key().0 as Seat, e.key().1), e.value().get()))
            .collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }

    pub fn nst_entries(&self) -> Vec<(NGram, MoveStats)> {
        self.nst.iter().map(|e| (*e.key(), e.value().get())).collect()
    }

    pub fn nst_len_by_order(&self) -> [usize; MAX_NGRAM] {
        let mut out = [0; MAX_NGRAM];
        for e in self.nst.iter() {
            out[e.key().len() - 1] += 1;
        }
        out
    }

    pub fn clear(&mut self) {
        self.mast.clear();
        self.nst.clear();
    }
}
