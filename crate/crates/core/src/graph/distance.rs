use std::collections::VecDeque;
use std::sync::{Arc, Mutex, RwLock};

use super::{AdhocGraph, NodeId};

/// Row entry for a node that cannot be reached from the source.
pub const UNREACHABLE: u32 = u32::MAX;

/// Hop distances on the ad-hoc layer, one BFS row per source, filled lazily.
///
/// Rows are shared behind `Arc`, so callers in hot loops should fetch a row
/// once with [`row`](Self::row) and index it. Concurrent fills of the same row
/// may both run the BFS; the second write stores an identical row.
#[derive(Debug)]
pub struct DistanceOracle {
    adhoc: Arc<AdhocGraph>,
    rows: Vec<RwLock<Option<Arc<[u32]>>>>,
    capacity: Option<usize>,
    resident: Mutex<VecDeque<NodeId>>,
}

impl DistanceOracle {
    pub fn new(adhoc: Arc<AdhocGraph>) -> Self {
        Self::build(adhoc, None)
    }

    /// Keeps at most `rows` cached rows, evicting the oldest fill first.
    pub fn with_capacity(adhoc: Arc<AdhocGraph>, rows: usize) -> Self {
        Self::build(adhoc, Some(rows.max(1)))
    }

    fn build(adhoc: Arc<AdhocGraph>, capacity: Option<usize>) -> Self {
        let rows = (0..adhoc.node_count()).map(|_| RwLock::new(None)).collect();
        DistanceOracle {
            adhoc,
            rows,
            capacity,
            resident: Mutex::new(VecDeque::new()),
        }
    }

    pub fn adhoc(&self) -> &AdhocGraph {
        &self.adhoc
    }

    pub fn adhoc_arc(&self) -> &Arc<AdhocGraph> {
        &self.adhoc
    }

    pub fn cached_rows(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.read().unwrap().is_some())
            .count()
    }

    fn cached(&self, a: NodeId) -> Option<Arc<[u32]>> {
        self.rows[a.index()].read().unwrap().clone()
    }

    /// Distance row from `a`, indexed by ad-hoc node.
    pub fn row(&self, a: NodeId) -> Arc<[u32]> {
        if let Some(row) = self.cached(a) {
            return row;
        }
        let row: Arc<[u32]> = bfs(&self.adhoc, a).into();
        *self.rows[a.index()].write().unwrap() = Some(row.clone());
        if let Some(cap) = self.capacity {
            let mut resident = self.resident.lock().unwrap();
            resident.push_back(a);
            while resident.len() > cap {
                let old = resident.pop_front().unwrap();
                if old != a {
                    *self.rows[old.index()].write().unwrap() = None;
                }
            }
        }
        row
    }

    /// Hop count of a shortest path, `None` when disconnected.
    pub fn hop_distance(&self, a: NodeId, b: NodeId) -> Option<u32> {
        if a == b {
            return Some(0);
        }
        let d = match self.cached(b) {
            Some(row) => row[a.index()],
            None => self.row(a)[b.index()],
        };
        (d != UNREACHABLE).then_some(d)
    }
}

fn bfs(g: &AdhocGraph, source: NodeId) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; g.node_count()];
    let mut queue = VecDeque::new();
    dist[source.index()] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = dist[u.index()] + 1;
        for &v in g.neighbors(u) {
            if dist[v.index()] == UNREACHABLE {
                dist[v.index()] = next;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// A distance row viewed from the social layer: `get(v)` is the hop count
/// between the row's source and the ad-hoc host of social node `v`.
#[derive(Clone, Debug)]
pub struct HopRow<'a> {
    pub(super) row: Arc<[u32]>,
    pub(super) to_adhoc: &'a [NodeId],
}

impl HopRow<'_> {
    #[inline]
    pub fn get(&self, v: NodeId) -> Option<u32> {
        let d = self.row[self.to_adhoc[v.index()].index()];
        (d != UNREACHABLE).then_some(d)
    }

    /// Raw entry, [`UNREACHABLE`] when disconnected.
    #[inline]
    pub fn raw(&self, v: NodeId) -> u32 {
        self.row[self.to_adhoc[v.index()].index()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: u32) -> Arc<AdhocGraph> {
        Arc::new(
            AdhocGraph::from_edges(n as usize, (1..n).map(|i| (NodeId(i - 1), NodeId(i)))).unwrap(),
        )
    }

    #[test]
    fn path_distances() {
        let oracle = DistanceOracle::new(path(3));
        assert_eq!(oracle.hop_distance(NodeId(0), NodeId(2)), Some(2));
        assert_eq!(oracle.hop_distance(NodeId(1), NodeId(1)), Some(0));
    }

    #[test]
    fn disconnected_pairs_are_none() {
        let g = Arc::new(AdhocGraph::from_edges(3, [(NodeId(0), NodeId(1))]).unwrap());
        let oracle = DistanceOracle::new(g);
        assert_eq!(oracle.hop_distance(NodeId(0), NodeId(2)), None);
        assert_eq!(oracle.hop_distance(NodeId(2), NodeId(1)), None);
    }

    #[test]
    fn bounded_cache_evicts_but_stays_correct() {
        let oracle = DistanceOracle::with_capacity(path(10), 2);
        for a in 0..10 {
            for b in 0..10 {
                let expect = (a as i64 - b as i64).unsigned_abs() as u32;
                assert_eq!(oracle.hop_distance(NodeId(a), NodeId(b)), Some(expect));
            }
            assert!(oracle.cached_rows() <= 2);
        }
    }
}
