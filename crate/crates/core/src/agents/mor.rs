use serde::Serialize;

use super::{
    control_hops, AgentAssignment, AsmtcParams, Objective, TryingMode, EPS,
};
use crate::diffusion::OverheadLedger;
use crate::error::{Error, Result};
use crate::graph::{Instance, NodeId, UNREACHABLE};

/// One trying / checking / backward-tracking round.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MorRound {
    pub objective_before: f64,
    pub objective_after: f64,
    /// Nodes that proposed a new agent.
    pub tried: Vec<NodeId>,
    /// Proposals withdrawn by backward tracking, in order.
    pub reverted: Vec<NodeId>,
    /// Proposals that became part of the assignment.
    pub committed: Vec<NodeId>,
}

#[derive(Clone, Debug)]
pub struct MorOutcome {
    pub assignment: AgentAssignment,
    pub ledger: OverheadLedger,
    pub rounds: Vec<MorRound>,
    pub objective: f64,
}

#[derive(Clone, Copy)]
struct Proposal {
    node: NodeId,
    old: NodeId,
    new: NodeId,
}

fn within_alpha(inst: &Instance, v: NodeId, a: NodeId, alpha: Option<u32>) -> bool {
    a == v || alpha.is_none_or(|alpha| inst.hops(v, a).is_some_and(|d| d <= alpha))
}

/// Best strictly improving agent for `v` against `base`, ties to the
/// smallest id.
fn best_move(
    obj: &Objective,
    base: &AgentAssignment,
    delegated: usize,
    v: NodeId,
    params: &AsmtcParams,
) -> Option<(NodeId, f64)> {
    let inst = obj.instance();
    let current = base.agent(v);
    let cap_reached = params.max_delegated.is_some_and(|cap| delegated >= cap);
    let mut best: Option<(NodeId, f64)> = None;
    let friends = inst.social().friends(v);
    let mut options: Vec<NodeId> = Vec::with_capacity(friends.len() + 1);
    options.extend_from_slice(friends);
    let pos = options.binary_search(&v).unwrap_or_else(|p| p);
    options.insert(pos, v);
    for a in options {
        if a == current || !within_alpha(inst, v, a, params.alpha) {
            continue;
        }
        if a != v && current == v && cap_reached {
            continue;
        }
        let Ok(delta) = obj.delta(base, v, a) else {
            continue;
        };
        if delta > EPS && best.is_none_or(|(_, b)| delta > b) {
            best = Some((a, delta));
        }
    }
    best
}

/// Friend of `v` whose incident overhead grew most from `v`'s proposal;
/// it is the one asking `v` to keep its old agent.
fn most_harmed(obj: &Objective, assign: &AgentAssignment, p: &Proposal) -> Result<NodeId> {
    let inst = obj.instance();
    let g = inst.social();
    let new_row = inst.hop_row(p.new);
    let old_row = inst.hop_row(p.old);
    let mut worst: Option<(NodeId, i64)> = None;
    for &x in g.friends(p.node) {
        let ax = assign.agent(x);
        let (dn, dl) = (new_row.raw(ax), old_row.raw(ax));
        if dn == UNREACHABLE || dl == UNREACHABLE {
            return Err(Error::Unreachable(p.node, x));
        }
        let harm = dn as i64 - dl as i64;
        if worst.is_none_or(|(_, h)| harm > h) {
            worst = Some((x, harm));
        }
    }
    Ok(worst.map_or(p.node, |(x, _)| x))
}

/// Local reduction. Each round every node tries its best strictly improving
/// agent; if the round as a whole lowers the objective it is committed,
/// otherwise the most harmful proposals are withdrawn one at a time until
/// it does. Stops when a round commits nothing.
pub fn mor(inst: &Instance, assignment: AgentAssignment, params: &AsmtcParams) -> Result<MorOutcome> {
    let g = inst.social();
    let n = g.node_count();
    if assignment.len() != n {
        return Err(Error::domain("assignment does not match the instance"));
    }
    if !assignment.all_represented() {
        return Err(Error::domain("local reduction needs every node represented"));
    }
    let obj = Objective::new(inst, params.weight_mode)?;
    let broadcast = params.control.broadcast.transmissions(n);
    let mut committed = assignment;
    let mut committed_obj = obj.total(&committed)?;
    let mut changes = vec![0u32; n];
    let mut ledger = OverheadLedger::default();
    let mut rounds = Vec::new();

    loop {
        let mut tentative = committed.clone();
        let mut tried: Vec<Proposal> = Vec::new();
        for v in g.nodes() {
            if params.beta.is_some_and(|b| changes[v.index()] >= b) {
                continue;
            }
            let base = match params.trying {
                TryingMode::Sequential => &tentative,
                TryingMode::Simultaneous => &committed,
            };
            if let Some((a, _)) = best_move(&obj, base, tentative.delegated_count(), v, params) {
                tried.push(Proposal {
                    node: v,
                    old: tentative.agent(v),
                    new: a,
                });
                tentative.set(v, a);
            }
        }
        if tried.is_empty() {
            break;
        }
        // Trying nodes announce their new agent to their friends, then the
        // network checks the global overhead.
        for p in &tried {
            for &x in g.friends(p.node) {
                ledger.control_hops += control_hops(inst, p.new, tentative.agent(x))?;
            }
        }
        ledger.broadcast_tx += n as u64 * broadcast;

        let mut tentative_obj = obj.total(&tentative)?;
        let mut live = vec![true; tried.len()];
        let mut reverted = Vec::new();
        while tentative_obj >= committed_obj - EPS && live.iter().any(|&l| l) {
            let mut pick: Option<(usize, f64)> = None;
            for (i, p) in tried.iter().enumerate() {
                if !live[i] {
                    continue;
                }
                let gain = obj.delta(&tentative, p.node, p.old)?;
                if pick.is_none_or(|(_, b)| gain > b) {
                    pick = Some((i, gain));
                }
            }
            let (i, _) = pick.expect("a live proposal remains");
            let p = tried[i];
            let asker = most_harmed(&obj, &tentative, &p)?;
            ledger.control_hops += control_hops(inst, asker, p.node)?;
            tentative.set(p.node, p.old);
            live[i] = false;
            reverted.push(p.node);
            tentative_obj = obj.total(&tentative)?;
            ledger.broadcast_tx += n as u64 * broadcast;
        }

        let kept: Vec<NodeId> = tried
            .iter()
            .zip(&live)
            .filter(|&(_, &l)| l)
            .map(|(p, _)| p.node)
            .collect();
        let commit = !kept.is_empty() && tentative_obj < committed_obj - EPS;
        rounds.push(MorRound {
            objective_before: committed_obj,
            objective_after: if commit { tentative_obj } else { committed_obj },
            tried: tried.iter().map(|p| p.node).collect(),
            reverted,
            committed: if commit { kept.clone() } else { Vec::new() },
        });
        if !commit {
            break;
        }
        for v in kept {
            changes[v.index()] += 1;
        }
        committed = tentative;
        committed_obj = tentative_obj;
    }

    Ok(MorOutcome {
        assignment: committed,
        ledger,
        rounds,
        objective: committed_obj,
    })
}
