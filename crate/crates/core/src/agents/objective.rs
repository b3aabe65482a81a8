use serde::Serialize;

use super::{AgentAssignment, AsmtcParams, WeightMode};
use crate::error::{Error, Result};
use crate::graph::{Instance, NodeId, UNREACHABLE};

/// Tolerance for "strictly positive" reductions under probability weights.
pub(crate) const EPS: f64 = 1e-9;

/// The agent-selection objective on one instance:
/// `sum over edges (u, v) of w(u, v) * d(agent(u), agent(v))`.
pub struct Objective<'a> {
    inst: &'a Instance,
    weights: Option<Vec<f64>>,
}

impl<'a> Objective<'a> {
    pub fn new(inst: &'a Instance, mode: WeightMode) -> Result<Self> {
        let weights = match mode {
            WeightMode::Uniform => None,
            WeightMode::Probability => {
                let g = inst.social();
                Some(
                    (0..g.edge_count())
                        .map(|e| g.probability(e).ok_or(Error::MissingProbabilities))
                        .collect::<Result<_>>()?,
                )
            }
        };
        Ok(Objective { inst, weights })
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    #[inline]
    fn weight(&self, e: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[e])
    }

    pub fn total(&self, assign: &AgentAssignment) -> Result<f64> {
        let g = self.inst.social();
        let mut sum = 0.0;
        for u in g.nodes() {
            let range = g.out_range(u);
            if range.is_empty() {
                continue;
            }
            let au = assign.agent(u);
            let row = self.inst.hop_row(au);
            for e in range {
                let av = assign.agent(g.target(e));
                let d = row.raw(av);
                if d == UNREACHABLE {
                    return Err(Error::Unreachable(au, av));
                }
                sum += self.weight(e) * d as f64;
            }
        }
        Ok(sum)
    }

    /// Cost of the edges incident to `v` (both directions) if `v`'s agent
    /// were `a`, everyone else as in `assign`.
    pub fn local(&self, assign: &AgentAssignment, v: NodeId, a: NodeId) -> Result<f64> {
        let g = self.inst.social();
        let row = self.inst.hop_row(a);
        let mut sum = 0.0;
        for e in g.out_range(v) {
            let ax = assign.agent(g.target(e));
            let d = row.raw(ax);
            if d == UNREACHABLE {
                return Err(Error::Unreachable(a, ax));
            }
            sum += self.weight(e) * d as f64;
        }
        for (&x, &e) in g.in_neighbors(v).iter().zip(g.in_edge_ids(v)) {
            let ax = assign.agent(x);
            let d = row.raw(ax);
            if d == UNREACHABLE {
                return Err(Error::Unreachable(ax, a));
            }
            sum += self.weight(e) * d as f64;
        }
        Ok(sum)
    }

    /// Objective reduction if `v` switched to agent `a` (positive = better).
    pub fn delta(&self, assign: &AgentAssignment, v: NodeId, a: NodeId) -> Result<f64> {
        let current = assign.agent(v);
        if current == a {
            return Ok(0.0);
        }
        Ok(self.local(assign, v, current)? - self.local(assign, v, a)?)
    }

    /// Cost of all edges touching `nodes`, each edge counted once.
    pub(crate) fn incident(&self, assign: &AgentAssignment, nodes: &[NodeId], in_set: &[bool]) -> Result<f64> {
        let g = self.inst.social();
        let mut sum = 0.0;
        for &v in nodes {
            let av = assign.agent(v);
            let row = self.inst.hop_row(av);
            for e in g.out_range(v) {
                let ax = assign.agent(g.target(e));
                let d = row.raw(ax);
                if d == UNREACHABLE {
                    return Err(Error::Unreachable(av, ax));
                }
                sum += self.weight(e) * d as f64;
            }
            for (&x, &e) in g.in_neighbors(v).iter().zip(g.in_edge_ids(v)) {
                if in_set[x.index()] {
                    continue;
                }
                let d = row.raw(assign.agent(x));
                if d == UNREACHABLE {
                    return Err(Error::Unreachable(assign.agent(x), av));
                }
                sum += self.weight(e) * d as f64;
            }
        }
        Ok(sum)
    }
}

/// Total message overhead of an assignment.
pub fn objective(inst: &Instance, assign: &AgentAssignment, mode: WeightMode) -> Result<f64> {
    Objective::new(inst, mode)?.total(assign)
}

/// Effect of moving one node to a proposed agent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RmoReport {
    pub node: NodeId,
    pub proposed_agent: NodeId,
    /// Objective before minus objective after; negative when the move
    /// increases overhead.
    pub delta: f64,
}

pub(crate) fn check_candidate(
    inst: &Instance,
    node: NodeId,
    agent: NodeId,
    alpha: Option<u32>,
) -> Result<()> {
    let g = inst.social();
    for x in [node, agent] {
        if x.index() >= g.node_count() {
            return Err(Error::UnknownNode(x));
        }
    }
    if agent != node && g.friends(node).binary_search(&agent).is_err() {
        return Err(Error::InvalidCandidate {
            node,
            agent,
            reason: "not a friend",
        });
    }
    if let Some(alpha) = alpha {
        if inst.hops(node, agent).is_none_or(|d| d > alpha) {
            return Err(Error::InvalidCandidate {
                node,
                agent,
                reason: "farther than alpha hops",
            });
        }
    }
    Ok(())
}

/// Reduced message overhead of `node` adopting `proposed_agent`, computed
/// over the node's incident edges with every other agent held fixed.
pub fn rmo_delta(
    inst: &Instance,
    assign: &AgentAssignment,
    node: NodeId,
    proposed_agent: NodeId,
    params: &AsmtcParams,
) -> Result<RmoReport> {
    check_candidate(inst, node, proposed_agent, params.alpha)?;
    let obj = Objective::new(inst, params.weight_mode)?;
    Ok(RmoReport {
        node,
        proposed_agent,
        delta: obj.delta(assign, node, proposed_agent)?,
    })
}
