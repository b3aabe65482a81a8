use super::{AgentAssignment, WeightMode, EPS};
use crate::error::{Error, Result};
use crate::graph::{Instance, NodeId, UNREACHABLE};

/// Largest search space the exhaustive oracle accepts.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

struct Search<'a> {
    inst: &'a Instance,
    weights: Vec<f64>,
    options: Vec<Vec<NodeId>>,
    current: Vec<NodeId>,
    best: Option<(Vec<NodeId>, f64)>,
}

impl Search<'_> {
    /// Cost of the edges between `v` and lower ids once `v` takes `a`.
    fn added(&self, v: usize, a: NodeId) -> Option<f64> {
        let g = self.inst.social();
        let vid = NodeId::from(v);
        let row = self.inst.hop_row(a);
        let mut sum = 0.0;
        for e in g.out_range(vid) {
            let x = g.target(e).index();
            if x < v {
                let d = row.raw(self.current[x]);
                if d == UNREACHABLE {
                    return None;
                }
                sum += self.weights[e] * d as f64;
            }
        }
        for (&x, &e) in g.in_neighbors(vid).iter().zip(g.in_edge_ids(vid)) {
            if x.index() < v {
                let d = row.raw(self.current[x.index()]);
                if d == UNREACHABLE {
                    return None;
                }
                sum += self.weights[e] * d as f64;
            }
        }
        Some(sum)
    }

    fn descend(&mut self, v: usize, partial: f64) {
        if self.best.as_ref().is_some_and(|(_, b)| partial >= *b - EPS) {
            return;
        }
        if v == self.options.len() {
            self.best = Some((self.current.clone(), partial));
            return;
        }
        for i in 0..self.options[v].len() {
            let a = self.options[v][i];
            let Some(add) = self.added(v, a) else {
                continue;
            };
            self.current[v] = a;
            self.descend(v + 1, partial + add);
        }
    }
}

/// Exact minimum of the objective by exhaustive search in lexicographic
/// order, so ties resolve to the smallest agent vector. Refuses instances
/// whose candidate product exceeds [`BRUTE_FORCE_LIMIT`].
pub fn brute_force_asp(
    inst: &Instance,
    weight_mode: WeightMode,
    alpha: Option<u32>,
) -> Result<(AgentAssignment, f64)> {
    let g = inst.social();
    let n = g.node_count();
    let weights = match weight_mode {
        WeightMode::Uniform => vec![1.0; g.edge_count()],
        WeightMode::Probability => (0..g.edge_count())
            .map(|e| g.probability(e).ok_or(Error::MissingProbabilities))
            .collect::<Result<_>>()?,
    };
    let mut options = Vec::with_capacity(n);
    let mut space: u128 = 1;
    for v in g.nodes() {
        let mut opts: Vec<NodeId> = g
            .friends(v)
            .iter()
            .copied()
            .filter(|&a| alpha.is_none_or(|al| inst.hops(v, a).is_some_and(|d| d <= al)))
            .collect();
        opts.push(v);
        opts.sort_unstable();
        space = space.saturating_mul(opts.len() as u128);
        options.push(opts);
    }
    if space > BRUTE_FORCE_LIMIT {
        return Err(Error::SearchSpace(space));
    }
    let mut search = Search {
        inst,
        weights,
        options,
        current: (0..n).map(NodeId::from).collect(),
        best: None,
    };
    search.descend(0, 0.0);
    let (agents, cost) = search.best.ok_or_else(|| {
        Error::domain("every assignment crosses a partition of the ad-hoc layer")
    })?;
    Ok((AgentAssignment::from_agents(g, agents)?, cost))
}
