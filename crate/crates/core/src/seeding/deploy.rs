use serde::Serialize;

use super::{eval_pool, SeedSelection};
use crate::agents::{AgentAssignment, Route};
use crate::diffusion::{checked, BroadcastCost, Cascade, EdgeCosts, OverheadLedger, TrialPool};
use crate::error::{Error, Result};
use crate::graph::{Instance, NodeId, UNREACHABLE};

/// Prices of the messages of a distributed greedy run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DeploymentCostModel {
    /// Announcing a candidate's spread to the whole network.
    pub broadcast: BroadcastCost,
    /// Activated nodes reporting back to the candidate.
    pub returns: Route,
}

/// Per-assignment, per-iteration ledgers of replaying `selection`: in
/// iteration `i` every candidate `w` outside the first `i` seeds runs every
/// trial from those seeds plus `w`. Each activation costs the hop distance
/// between the agents of its endpoints, each activated node other than `w`
/// reports back to `w`, and each candidate broadcasts its result once.
/// Indexed `[assignment][iteration]`.
pub fn deployment_ledgers(
    inst: &Instance,
    selection: &SeedSelection,
    assignments: &[&AgentAssignment],
    pool: &TrialPool,
    model: &DeploymentCostModel,
) -> Result<Vec<Vec<OverheadLedger>>> {
    let g = inst.social();
    let n = g.node_count();
    if selection.trials != pool.trials {
        return Err(Error::domain(format!(
            "selection used {} trials, pool has {}",
            selection.trials, pool.trials
        )));
    }
    if !g.has_probabilities() {
        return Err(Error::MissingProbabilities);
    }
    if let Some(&bad) = selection.seeds.iter().find(|s| s.index() >= n) {
        return Err(Error::UnknownNode(bad));
    }
    if assignments.iter().any(|a| a.len() != n) {
        return Err(Error::domain("assignment does not match the instance"));
    }
    let costs: Vec<EdgeCosts> = assignments.iter().map(|a| EdgeCosts::new(inst, a)).collect();
    let broadcast = model.broadcast.transmissions(n);
    let m = assignments.len();
    let mut out = vec![Vec::with_capacity(selection.len()); m];

    for i in 0..selection.len() {
        let mut prefix = selection.seeds[..i].to_vec();
        prefix.sort_unstable();
        let candidates: Vec<NodeId> = selection
            .candidates
            .iter()
            .copied()
            .filter(|w| prefix.binary_search(w).is_err())
            .collect();
        let per_candidate = crate::par::map_init(
            candidates.len(),
            || (Cascade::new(n), Vec::new()),
            |(cascade, seeds): &mut (Cascade, Vec<NodeId>), c| -> Result<Vec<OverheadLedger>> {
                let w = candidates[c];
                seeds.clear();
                seeds.extend_from_slice(&prefix);
                let pos = seeds.binary_search(&w).unwrap_err();
                seeds.insert(pos, w);
                let trials = eval_pool(pool, selection.pool_mode, i, w);
                let mut ledgers = vec![OverheadLedger::default(); m];
                let mut bad: Option<(usize, usize)> = None;
                for t in 0..trials.trials {
                    cascade.run(g, seeds, &trials, t, |_, _, e, _| {
                        for (a, cost) in costs.iter().enumerate() {
                            let h = cost.raw(e);
                            if h == UNREACHABLE {
                                bad.get_or_insert((a, e));
                            } else {
                                ledgers[a].influence_hops += h as u64;
                            }
                        }
                    });
                    if let Some((a, e)) = bad {
                        checked(UNREACHABLE, e, inst, assignments[a])?;
                    }
                    charge_returns(inst, assignments, model.returns, w, &cascade.activated, &mut ledgers)?;
                }
                for l in &mut ledgers {
                    l.broadcast_tx += broadcast;
                }
                Ok(ledgers)
            },
        );
        let mut iteration = vec![OverheadLedger::default(); m];
        for ledgers in per_candidate {
            for (acc, l) in iteration.iter_mut().zip(ledgers?) {
                *acc += l;
            }
        }
        for (o, l) in out.iter_mut().zip(iteration) {
            o.push(l);
        }
    }
    Ok(out)
}

fn charge_returns(
    inst: &Instance,
    assignments: &[&AgentAssignment],
    route: Route,
    w: NodeId,
    activated: &[NodeId],
    ledgers: &mut [OverheadLedger],
) -> Result<()> {
    match route {
        Route::Disabled => {}
        Route::NodeToNode => {
            let row = inst.hop_row(w);
            let mut hops = 0u64;
            for &x in activated {
                if x != w {
                    let d = row.raw(x);
                    if d == UNREACHABLE {
                        return Err(Error::Unreachable(x, w));
                    }
                    hops += d as u64;
                }
            }
            for l in ledgers.iter_mut() {
                l.return_hops += hops;
            }
        }
        Route::AgentToAgent => {
            for (a, l) in assignments.iter().zip(ledgers.iter_mut()) {
                let aw = a.agent(w);
                let row = inst.hop_row(aw);
                for &x in activated {
                    if x != w {
                        let ax = a.agent(x);
                        let d = row.raw(ax);
                        if d == UNREACHABLE {
                            return Err(Error::Unreachable(ax, aw));
                        }
                        l.return_hops += d as u64;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Total ledger of replaying `selection` under one assignment.
pub fn deployment_overhead(
    inst: &Instance,
    selection: &SeedSelection,
    assignment: &AgentAssignment,
    pool: &TrialPool,
    model: &DeploymentCostModel,
) -> Result<OverheadLedger> {
    let per = deployment_ledgers(inst, selection, &[assignment], pool, model)?;
    Ok(per[0].iter().copied().sum())
}
