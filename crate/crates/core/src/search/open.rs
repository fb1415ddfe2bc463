use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::tree::NodeId;

#[derive(Debug, Clone, Copy)]
struct Entry {
    f: f64,
    seq: u64,
    node: NodeId,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // reversed: BinaryHeap is a max-heap, we pop the smallest (f, seq)
    fn cmp(&self, other: &Self) -> Ordering {
        other.f.total_cmp(&self.f).then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Min-priority queue on `(f, insertion sequence)`: lowest f first, ties
/// in FIFO order. Every push gets a fresh sequence number.
#[derive(Debug, Default)]
pub struct OpenList {
    heap: BinaryHeap<Entry>,
    next_seq: u64,
}

impl OpenList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, node: NodeId, f: f64) {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Entry { f, seq, node });
    }

    pub fn pop(&mut self) -> Option<(NodeId, f64)> {
        self.heap.pop().map(|e| (e.node, e.f))
    }

    pub fn peek_f(&self) -> Option<f64> {
        self.heap.peek().map(|e| e.f)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Stored `(node, f)` pairs in no particular order.
    pub fn entries(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.heap.iter().map(|e| (e.node, e.f))
    }
}
