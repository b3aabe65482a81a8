use serde::Serialize;

use super::{
    control_hops, notify_cost, AgentAssignment, AsmtcParams, Objective, EPS,
};
use crate::diffusion::OverheadLedger;
use crate::error::{Error, Result};
use crate::graph::{Instance, NodeId};

/// One election of the DAS phase.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Election {
    pub round: usize,
    pub winner: NodeId,
    /// Sum of the group's single-move deltas at election time.
    pub estimated: f64,
    /// Objective reduction actually achieved by the joint move.
    pub realized: f64,
    /// Nodes that took the winner as their agent (excluding the winner).
    pub group: Vec<NodeId>,
}

#[derive(Clone, Debug)]
pub struct DasOutcome {
    pub assignment: AgentAssignment,
    pub ledger: OverheadLedger,
    pub elections: Vec<Election>,
    pub objective: f64,
}

struct Election0 {
    cost: f64,
    group: Vec<(NodeId, f64)>,
}

/// Unrepresented friends that could take `v` as their agent, with their
/// single-move deltas.
fn candidates(
    obj: &Objective,
    assign: &AgentAssignment,
    v: NodeId,
    alpha: Option<u32>,
) -> Option<Election0> {
    let inst = obj.instance();
    let mut group = Vec::new();
    let mut cost = 0.0;
    for &u in inst.social().friends(v) {
        if assign.is_represented(u) {
            continue;
        }
        if let Some(alpha) = alpha {
            if inst.hops(u, v).is_none_or(|d| d > alpha) {
                continue;
            }
        }
        // A move across a partition is not a candidate.
        if let Ok(delta) = obj.delta(assign, u, v) {
            cost += delta;
            group.push((u, delta));
        }
    }
    (!group.is_empty()).then_some(Election0 { cost, group })
}

/// Election phase. Each round every node prices itself as the agent of its
/// unrepresented friends; the best node (ties to the smallest id) is
/// elected and those friends join it. Once no election reduces the
/// objective, or the delegation cap is reached, everyone left represents
/// themselves.
pub fn das(inst: &Instance, params: &AsmtcParams) -> Result<DasOutcome> {
    let g = inst.social();
    let n = g.node_count();
    let obj = Objective::new(inst, params.weight_mode)?;
    let mut assign = AgentAssignment::unrepresented(n);
    let mut ledger = OverheadLedger::default();
    let broadcast = params.control.broadcast.transmissions(n);

    // Request/reply prices toward unrepresented friends, kept incrementally.
    let mut request = vec![0u64; n];
    let mut pending = vec![0usize; n];
    for v in g.nodes() {
        for &u in g.friends(v) {
            request[v.index()] += 2 * control_hops(inst, v, u)?;
        }
        pending[v.index()] = g.friends(v).len();
    }
    let mut request_total: u64 = request.iter().sum();
    // Nodes that still have an unrepresented friend to negotiate with.
    let mut in_scope = pending.iter().filter(|&&c| c > 0).count();

    let mut best: Vec<Option<f64>> = crate::par::map_init(
        n,
        || (),
        |_, v| candidates(&obj, &assign, NodeId::from(v), params.alpha).map(|e| e.cost),
    );
    let mut dirty = vec![false; n];
    let mut elections = Vec::new();
    let mut in_changed = vec![false; n];

    while in_scope > 0 {
        ledger.control_hops += request_total;
        ledger.broadcast_tx += in_scope as u64 * broadcast;

        let mut winner: Option<(NodeId, f64)> = None;
        for (v, c) in best.iter().enumerate() {
            if let Some(c) = *c {
                if winner.is_none_or(|(_, b)| c > b) {
                    winner = Some((NodeId::from(v), c));
                }
            }
        }
        let Some((w, _)) = winner.filter(|&(_, c)| c > EPS) else {
            break;
        };
        let Election0 { mut group, .. } =
            candidates(&obj, &assign, w, params.alpha).expect("winner has candidates");
        let mut last = false;
        if let Some(cap) = params.max_delegated {
            let room = cap.saturating_sub(assign.delegated_count());
            if group.len() >= room {
                last = true;
                if group.len() > room {
                    group.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
                    group.truncate(room);
                    group.sort_by_key(|&(u, _)| u);
                }
            }
        }
        if group.is_empty() {
            break;
        }
        let estimated: f64 = group.iter().map(|&(_, d)| d).sum();

        let mut changed: Vec<NodeId> = group.iter().map(|&(u, _)| u).collect();
        if !assign.is_represented(w) {
            changed.push(w);
        }
        for &c in &changed {
            in_changed[c.index()] = true;
        }
        let before = obj.incident(&assign, &changed, &in_changed)?;
        for &(u, _) in &group {
            assign.set(u, w);
        }
        let after = obj.incident(&assign, &changed, &in_changed)?;
        for &c in &changed {
            in_changed[c.index()] = false;
        }
        let realized = before - after;
        if realized + EPS < estimated {
            return Err(Error::Invariant(format!(
                "election of {w} realized {realized}, below its estimate {estimated}"
            )));
        }

        for &c in &changed {
            represent(inst, &mut assign, c, &mut request, &mut pending, &mut request_total, &mut in_scope)?;
        }
        for &c in &changed {
            ledger.control_hops += notify_cost(inst, &assign, c, params.control.notify)?;
        }
        elections.push(Election {
            round: elections.len() + 1,
            winner: w,
            estimated,
            realized,
            group: group.iter().map(|&(u, _)| u).collect(),
        });
        if last {
            break;
        }

        let mut touched = Vec::new();
        let mut mark = |x: NodeId, touched: &mut Vec<NodeId>| {
            if !dirty[x.index()] {
                dirty[x.index()] = true;
                touched.push(x);
            }
        };
        for &c in &changed {
            mark(c, &mut touched);
            for &x in g.friends(c) {
                mark(x, &mut touched);
            }
        }
        for &(u, _) in &group {
            for &x in g.friends(u) {
                for &y in g.friends(x) {
                    mark(y, &mut touched);
                }
            }
        }
        let fresh = crate::par::map_init(
            touched.len(),
            || (),
            |_, i| candidates(&obj, &assign, touched[i], params.alpha).map(|e| e.cost),
        );
        for (&v, c) in touched.iter().zip(fresh) {
            best[v.index()] = c;
            dirty[v.index()] = false;
        }
    }

    for v in g.nodes() {
        if !assign.is_represented(v) {
            represent(inst, &mut assign, v, &mut request, &mut pending, &mut request_total, &mut in_scope)?;
            ledger.control_hops += notify_cost(inst, &assign, v, params.control.notify)?;
        }
    }
    let objective = obj.total(&assign)?;
    Ok(DasOutcome {
        assignment: assign,
        ledger,
        elections,
        objective,
    })
}

fn represent(
    inst: &Instance,
    assign: &mut AgentAssignment,
    v: NodeId,
    request: &mut [u64],
    pending: &mut [usize],
    request_total: &mut u64,
    in_scope: &mut usize,
) -> Result<()> {
    assign.mark_represented(v);
    for &x in inst.social().friends(v) {
        let price = 2 * control_hops(inst, x, v)?;
        request[x.index()] -= price;
        *request_total -= price;
        pending[x.index()] -= 1;
        if pending[x.index()] == 0 {
            *in_scope -= 1;
        }
    }
    Ok(())
}
