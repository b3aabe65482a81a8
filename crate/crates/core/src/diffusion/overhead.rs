use super::TrialOutcome;
use crate::agents::AgentAssignment;
use crate::error::{Error, Result};
use crate::graph::{Instance, NodeId, UNREACHABLE};

/// Hop cost of an influence message along each social edge under an
/// assignment: `d(agent(u), agent(v))`, zero when both share an agent.
/// Indexed by global edge id.
#[derive(Clone, Debug)]
pub struct EdgeCosts {
    costs: Vec<u32>,
}

impl EdgeCosts {
    /// Disconnected agent pairs are stored as [`UNREACHABLE`] and surface
    /// as errors only when an activation actually uses them.
    pub fn new(inst: &Instance, assignment: &AgentAssignment) -> Self {
        let g = inst.social();
        let mut costs = vec![0u32; g.edge_count()];
        for u in g.nodes() {
            let au = assignment.agent(u);
            let range = g.out_range(u);
            if range.is_empty() {
                continue;
            }
            let row = inst.hop_row(au);
            for e in range {
                let av = assignment.agent(g.target(e));
                costs[e] = if au == av { 0 } else { row.raw(av) };
            }
        }
        EdgeCosts { costs }
    }

    #[inline]
    pub fn raw(&self, edge: usize) -> u32 {
        self.costs[edge]
    }
}

/// Influence hops for one trial: each successful activation `(u, v)` costs
/// `d(agent(u), agent(v))`. Failed attempts cost nothing.
pub fn trial_overhead(
    outcome: &TrialOutcome,
    assignment: &AgentAssignment,
    inst: &Instance,
) -> Result<u64> {
    let mut hops = 0u64;
    for a in &outcome.activations {
        let (au, av) = (assignment.agent(a.u), assignment.agent(a.v));
        if au == av {
            continue;
        }
        hops += inst.hops(au, av).ok_or(Error::Unreachable(au, av))? as u64;
    }
    Ok(hops)
}

#[inline]
pub(crate) fn checked(cost: u32, edge: usize, inst: &Instance, assignment: &AgentAssignment) -> Result<u64> {
    if cost == UNREACHABLE {
        let g = inst.social();
        let u = g
            .nodes()
            .find(|&u| g.out_range(u).contains(&edge))
            .unwrap_or(NodeId(0));
        return Err(Error::Unreachable(
            assignment.agent(u),
            assignment.agent(g.target(edge)),
        ));
    }
    Ok(cost as u64)
}
