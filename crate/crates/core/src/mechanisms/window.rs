use std::collections::VecDeque;

/// A miner's most recent completed-round difficulties, oldest first.
/// Holds at most `N` entries; pushing onto a full window evicts the oldest.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RollingWindow {
    capacity: usize,
    entries: VecDeque<f64>,
}

impl RollingWindow {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "window length must be at least 1");
        Self {
            capacity,
            entries: VecDeque::with_capacity(capacity),
        }
    }

    /// A window pre-filled with `entries` (oldest first), keeping the last
    /// `capacity` of them.
    pub fn from_entries(capacity: usize, entries: impl IntoIterator<Item = f64>) -> Self {
        let mut w = Self::new(capacity);
        for d in entries {
            w.push(d);
        }
        w
    }

    pub fn push(&mut self, difficulty: f64) {
        if self.entries.len() == self.capacity {
            self.entries.pop_front();
        }
        self.entries.push_back(difficulty);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.entries.iter()
    }

    /// Sum and count of the newest `terms` entries (fewer if the window is
    /// shorter).
    pub fn recent(&self, terms: usize) -> (f64, usize) {
        let taken = terms.min(self.entries.len());
        let sum = self.entries.iter().rev().take(taken).sum();
        (sum, taken)
    }
}
