//! The two network layers and the identity mapping between them.
//!
//! Both graphs are stored in compressed sparse row form with node ids
//! compacted to `0..n`. The original labels from the input files are kept in
//! a side table so that output can be written with the labels the user knows.

mod distance;
mod instance;
pub mod io;
mod validate;

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use distance::{DistanceOracle, HopRow, UNREACHABLE};
pub use instance::Instance;
pub use validate::{validate_layers, LayerDiagnostics};

/// Dense node index shared by both layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    #[inline]
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Directed friendship graph. Each edge `(u, v)` carries the probability that
/// an active `u` activates `v`; an edge may lack a probability until a
/// [`ProbabilityModel`](crate::netgen::ProbabilityModel) is applied.
#[derive(Clone, Debug, PartialEq)]
pub struct SocialGraph {
    labels: Vec<u64>,
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    // NaN marks a missing probability.
    out_probs: Vec<f64>,
    in_offsets: Vec<usize>,
    in_sources: Vec<NodeId>,
    in_edge_ids: Vec<usize>,
    friend_offsets: Vec<usize>,
    friends: Vec<NodeId>,
}

impl SocialGraph {
    /// Builds a graph on `n` nodes labelled `0..n`.
    ///
    /// Duplicate edges collapse to the last occurrence. Self-loops and
    /// probabilities outside `[0, 1]` are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, Option<f64>)>,
    {
        Self::with_labels((0..n as u64).collect(), edges)
    }

    pub(crate) fn with_labels<I>(labels: Vec<u64>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, Option<f64>)>,
    {
        let n = labels.len();
        let mut list: Vec<(NodeId, NodeId, usize, f64)> = Vec::new();
        for (seq, (u, v, p)) in edges.into_iter().enumerate() {
            for x in [u, v] {
                if x.index() >= n {
                    return Err(Error::UnknownNode(x));
                }
            }
            if u == v {
                return Err(Error::SelfLoop(labels[u.index()]));
            }
            let p = match p {
                Some(p) if !(0.0..=1.0).contains(&p) => {
                    return Err(Error::Probability { line: seq + 1, value: p })
                }
                Some(p) => p,
                None => f64::NAN,
            };
            list.push((u, v, seq, p));
        }
        list.sort_unstable_by_key(|&(u, v, seq, _)| (u, v, std::cmp::Reverse(seq)));
        list.dedup_by_key(|&mut (u, v, _, _)| (u, v));

        let mut out_offsets = vec![0usize; n + 1];
        for &(u, ..) in &list {
            out_offsets[u.index() + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
        }
        let out_targets: Vec<NodeId> = list.iter().map(|e| e.1).collect();
        let out_probs: Vec<f64> = list.iter().map(|e| e.3).collect();

        let mut in_offsets = vec![0usize; n + 1];
        for &(_, v, ..) in &list {
            in_offsets[v.index() + 1] += 1;
        }
        for i in 0..n {
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut fill = in_offsets.clone();
        let mut in_sources = vec![NodeId(0); list.len()];
        let mut in_edge_ids = vec![0usize; list.len()];
        // `list` is sorted by source, so every in-row ends up sorted by source.
        for (e, &(u, v, ..)) in list.iter().enumerate() {
            let slot = &mut fill[v.index()];
            in_sources[*slot] = u;
            in_edge_ids[*slot] = e;
            *slot += 1;
        }

        let mut friend_offsets = Vec::with_capacity(n + 1);
        let mut friends = Vec::with_capacity(list.len());
        friend_offsets.push(0);
        for v in 0..n {
            let outs = &out_targets[out_offsets[v]..out_offsets[v + 1]];
            let ins = &in_sources[in_offsets[v]..in_offsets[v + 1]];
            let (mut i, mut j) = (0, 0);
            while i < outs.len() || j < ins.len() {
                let next = match (outs.get(i), ins.get(j)) {
                    (Some(&a), Some(&b)) if a == b => {
                        i += 1;
                        j += 1;
                        a
                    }
                    (Some(&a), Some(&b)) if a < b => {
                        i += 1;
                        a
                    }
                    (Some(&a), None) => {
                        i += 1;
                        a
                    }
                    (_, Some(&b)) => {
                        j += 1;
                        b
                    }
                    (None, None) => unreachable!(),
                };
                friends.push(next);
            }
            friend_offsets.push(friends.len());
        }

        Ok(SocialGraph {
            labels,
            out_offsets,
            out_targets,
            out_probs,
            in_offsets,
            in_sources,
            in_edge_ids,
            friend_offsets,
            friends,
        })
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.node_count() as u32).map(NodeId)
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> u64 {
        self.labels[v.index()]
    }

    /// Range of global edge indices for the out-edges of `u`.
    #[inline]
    pub fn out_range(&self, u: NodeId) -> Range<usize> {
        self.out_offsets[u.index()]..self.out_offsets[u.index() + 1]
    }

    #[inline]
    pub fn out_neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.out_targets[self.out_range(u)]
    }

    /// Raw probabilities of the out-edges of `u`, aligned with
    /// [`out_neighbors`](Self::out_neighbors). Missing values are NaN.
    #[inline]
    pub(crate) fn out_probs(&self, u: NodeId) -> &[f64] {
        &self.out_probs[self.out_range(u)]
    }

    #[inline]
    pub fn target(&self, edge: usize) -> NodeId {
        self.out_targets[edge]
    }

    #[inline]
    pub fn probability(&self, edge: usize) -> Option<f64> {
        let p = self.out_probs[edge];
        (!p.is_nan()).then_some(p)
    }

    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.in_sources[self.in_offsets[v.index()]..self.in_offsets[v.index() + 1]]
    }

    /// Global edge indices of the in-edges of `v`, aligned with
    /// [`in_neighbors`](Self::in_neighbors).
    pub fn in_edge_ids(&self, v: NodeId) -> &[usize] {
        &self.in_edge_ids[self.in_offsets[v.index()]..self.in_offsets[v.index() + 1]]
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out_range(u).len()
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_offsets[v.index() + 1] - self.in_offsets[v.index()]
    }

    /// Sorted union of in- and out-neighbors: the friends of `v`.
    #[inline]
    pub fn friends(&self, v: NodeId) -> &[NodeId] {
        &self.friends[self.friend_offsets[v.index()]..self.friend_offsets[v.index() + 1]]
    }

    /// Probability of edge `(u, v)` if it exists.
    pub fn edge(&self, u: NodeId, v: NodeId) -> Option<Option<f64>> {
        let targets = self.out_neighbors(u);
        targets
            .binary_search(&v)
            .ok()
            .map(|i| self.probability(self.out_range(u).start + i))
    }

    /// All edges as `(u, v, p)` in source-then-target order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, Option<f64>)> + '_ {
        self.nodes().flat_map(move |u| {
            self.out_range(u)
                .map(move |e| (u, self.out_targets[e], self.probability(e)))
        })
    }

    pub fn has_probabilities(&self) -> bool {
        self.out_probs.iter().all(|p| !p.is_nan())
    }

    /// Returns a copy whose edge probabilities are replaced by `f(edge, u, v)`.
    pub fn map_probabilities<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, NodeId, NodeId) -> f64,
    {
        let mut g = self.clone();
        for u in self.nodes() {
            for e in self.out_range(u) {
                let p = f(e, u, self.out_targets[e]);
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Probability { line: e + 1, value: p });
                }
                g.out_probs[e] = p;
            }
        }
        Ok(g)
    }
}

/// Undirected ad-hoc network. Message cost is the hop count of a shortest
/// path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdhocGraph {
    labels: Vec<u64>,
    offsets: Vec<usize>,
    adj: Vec<NodeId>,
}

impl AdhocGraph {
    /// Builds a graph on `n` nodes labelled `0..n`. Pairs are unordered and
    /// duplicates collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::with_labels((0..n as u64).collect(), edges)
    }

    pub(crate) fn with_labels<I>(labels: Vec<u64>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let n = labels.len();
        let mut pairs = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x.index() >= n {
                    return Err(Error::UnknownNode(x));
                }
            }
            if u == v {
                return Err(Error::SelfLoop(labels[u.index()]));
            }
            pairs.push((u, v));
            pairs.push((v, u));
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            offsets[u.index() + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Ok(AdhocGraph {
            labels,
            offsets,
            adj: pairs.into_iter().map(|(_, v)| v).collect(),
        })
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.adj.len() / 2
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.node_count() as u32).map(NodeId)
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[self.offsets[v.index()]..self.offsets[v.index() + 1]]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v.index() + 1] - self.offsets[v.index()]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn mean_degree(&self) -> f64 {
        if self.node_count() == 0 {
            0.0
        } else {
            self.adj.len() as f64 / self.node_count() as f64
        }
    }

    pub fn max_degree(&self) -> usize {
        self.nodes().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Sizes of the connected components, largest first.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.components().into_iter().map(|c| c.len()).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in self.nodes() {
            if seen[s.index()] {
                continue;
            }
            seen[s.index()] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in self.neighbors(u) {
                    if !seen[v.index()] {
                        seen[v.index()] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Bijection from social-layer ids to ad-hoc-layer ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerMapping {
    to_adhoc: Vec<NodeId>,
    to_social: Vec<NodeId>,
}

impl LayerMapping {
    pub fn identity(n: usize) -> Self {
        let ids: Vec<NodeId> = (0..n).map(NodeId::from).collect();
        LayerMapping {
            to_adhoc: ids.clone(),
            to_social: ids,
        }
    }

    /// `perm[s]` is the ad-hoc node hosting social node `s`.
    pub fn from_permutation(perm: Vec<NodeId>) -> Result<Self> {
        let n = perm.len();
        let mut to_social = vec![NodeId(u32::MAX); n];
        for (s, &a) in perm.iter().enumerate() {
            if a.index() >= n {
                return Err(Error::Mapping(format!("target {a} out of range for {n} nodes")));
            }
            if to_social[a.index()].0 != u32::MAX {
                return Err(Error::Mapping(format!("ad-hoc node {a} is mapped twice")));
            }
            to_social[a.index()] = NodeId::from(s);
        }
        Ok(LayerMapping {
            to_adhoc: perm,
            to_social,
        })
    }

    pub fn len(&self) -> usize {
        self.to_adhoc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_adhoc.is_empty()
    }

    #[inline]
    pub fn adhoc_of(&self, s: NodeId) -> NodeId {
        self.to_adhoc[s.index()]
    }

    #[inline]
    pub fn social_of(&self, a: NodeId) -> NodeId {
        self.to_social[a.index()]
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.to_adhoc
    }

    pub fn inverse(&self) -> LayerMapping {
        LayerMapping {
            to_adhoc: self.to_social.clone(),
            to_social: self.to_adhoc.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.to_adhoc.iter().enumerate().all(|(i, a)| a.index() == i)
    }
}
