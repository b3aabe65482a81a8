//! Seed selection by greedy hill climbing and its lazy (CELF) variant, and
//! the message bill a distributed run of that selection would incur.

mod deploy;
mod oracle;

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

pub use deploy::{deployment_ledgers, deployment_overhead, DeploymentCostModel};
pub use oracle::{AgentTrials, Coverage, FullTrials, SpreadOracle};

use crate::agents::AgentAssignment;
use crate::diffusion::{OverheadLedger, TrialPool};
use crate::error::{Error, Result};
use crate::graph::{Instance, NodeId, SocialGraph};

/// Whether candidate evaluations share one set of realizations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum PoolMode {
    /// Every evaluation uses the same trials (common random numbers).
    #[default]
    Common,
    /// Each (iteration, candidate) evaluation draws fresh trials.
    Independent,
}

impl FromStr for PoolMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "common" => Ok(PoolMode::Common),
            "independent" => Ok(PoolMode::Independent),
            x => Err(Error::domain(format!("unknown pool mode `{x}`"))),
        }
    }
}

impl fmt::Display for PoolMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoolMode::Common => "common",
            PoolMode::Independent => "independent",
        })
    }
}

/// The trials used to evaluate candidate `w` in iteration `i` (0-based).
pub(crate) fn eval_pool(pool: &TrialPool, mode: PoolMode, i: usize, w: NodeId) -> TrialPool {
    match mode {
        PoolMode::Common => *pool,
        PoolMode::Independent => pool.fork((i as u64) << 32 | w.0 as u64),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SelectionConfig {
    /// Only the `cap` nodes of largest out-degree are candidates.
    pub candidate_cap: Option<usize>,
    /// Explicit candidate list; overrides the cap.
    pub candidates: Option<Vec<NodeId>>,
    pub pool_mode: PoolMode,
}

impl SelectionConfig {
    /// Candidate nodes, ascending.
    pub fn candidate_set(&self, g: &SocialGraph) -> Result<Vec<NodeId>> {
        let mut out = match (&self.candidates, self.candidate_cap) {
            (Some(list), _) => {
                if let Some(&bad) = list.iter().find(|v| v.index() >= g.node_count()) {
                    return Err(Error::UnknownNode(bad));
                }
                list.clone()
            }
            (None, Some(cap)) if cap < g.node_count() => {
                let mut all: Vec<NodeId> = g.nodes().collect();
                all.sort_by_key(|&v| (Reverse(g.out_degree(v)), v));
                all.truncate(cap);
                all
            }
            (None, _) => g.nodes().collect(),
        };
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

/// Seeds in pick order with their marginal gains. Gains are totals over the
/// pool's trials; [`SeedSelection::marginal_gain`] gives the mean.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeedSelection {
    pub seeds: Vec<NodeId>,
    pub gain_totals: Vec<i64>,
    pub trials: u32,
    /// Spread evaluations performed up to and including each pick.
    pub lookups_so_far: Vec<u64>,
    pub candidates: Vec<NodeId>,
    pub pool_mode: PoolMode,
}

impl SeedSelection {
    pub fn len(&self) -> usize {
        self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }

    pub fn marginal_gain(&self, i: usize) -> f64 {
        self.gain_totals[i] as f64 / self.trials as f64
    }

    /// Mean spread of the full seed set.
    pub fn spread(&self) -> f64 {
        self.gain_totals.iter().sum::<i64>() as f64 / self.trials as f64
    }

    pub fn lookups(&self) -> u64 {
        self.lookups_so_far.last().copied().unwrap_or(0)
    }

    /// `rank,node,marginal_gain,lookups_so_far` with the graph's labels.
    pub fn write_csv<W: Write>(&self, g: &SocialGraph, mut w: W) -> std::io::Result<()> {
        writeln!(w, "rank,node,marginal_gain,lookups_so_far")?;
        for (i, &s) in self.seeds.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{}",
                i + 1,
                g.label(s),
                self.marginal_gain(i),
                self.lookups_so_far[i]
            )?;
        }
        Ok(())
    }
}

fn check_budget(k: usize, candidates: &[NodeId], pool: &TrialPool) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("seed budget must be at least 1"));
    }
    if k > candidates.len() {
        return Err(Error::domain(format!(
            "seed budget {k} exceeds the {} candidates",
            candidates.len()
        )));
    }
    if pool.trials == 0 {
        return Err(Error::domain("trial pool is empty"));
    }
    Ok(())
}

/// Plain greedy: every iteration evaluates every remaining candidate and
/// takes the largest gain, ties to the smallest id.
pub fn greedy_with<O: SpreadOracle>(
    oracle: &mut O,
    k: usize,
    candidates: &[NodeId],
) -> Result<(Vec<NodeId>, Vec<i64>, Vec<u64>)> {
    let mut chosen = vec![false; oracle.node_count()];
    let (mut seeds, mut gains, mut lookups) = (Vec::new(), Vec::new(), Vec::new());
    let mut count = 0u64;
    for _ in 0..k {
        let remaining: Vec<NodeId> = candidates
            .iter()
            .copied()
            .filter(|v| !chosen[v.index()])
            .collect();
        let o: &O = oracle;
        let evals = crate::par::map_init(
            remaining.len(),
            || o.scratch(),
            |s, i| o.gain(s, remaining[i]),
        );
        count += remaining.len() as u64;
        let mut best: Option<(NodeId, i64)> = None;
        for (&w, gain) in remaining.iter().zip(evals) {
            let gain = gain?;
            if best.is_none_or(|(_, b)| gain > b) {
                best = Some((w, gain));
            }
        }
        let (w, gain) = best.expect("budget checked against candidates");
        oracle.commit(w)?;
        chosen[w.index()] = true;
        seeds.push(w);
        gains.push(gain);
        lookups.push(count);
    }
    Ok((seeds, gains, lookups))
}

/// Lazy greedy: stale gains are upper bounds, so only the top of the queue
/// is re-evaluated. Requires an oracle whose gains are submodular.
pub fn lazy_with<O: SpreadOracle>(
    oracle: &mut O,
    k: usize,
    candidates: &[NodeId],
) -> Result<(Vec<NodeId>, Vec<i64>, Vec<u64>)> {
    let o: &O = oracle;
    let first = crate::par::map_init(candidates.len(), || o.scratch(), |s, i| o.gain(s, candidates[i]));
    let mut count = candidates.len() as u64;
    let mut heap = BinaryHeap::with_capacity(candidates.len());
    for (&w, gain) in candidates.iter().zip(first) {
        heap.push((gain?, Reverse(w), 0usize));
    }
    let mut scratch = oracle.scratch();
    let (mut seeds, mut gains, mut lookups) = (Vec::new(), Vec::new(), Vec::new());
    while seeds.len() < k {
        let (gain, Reverse(w), fresh) = heap.pop().expect("budget checked against candidates");
        if fresh == seeds.len() {
            oracle.commit(w)?;
            seeds.push(w);
            gains.push(gain);
            lookups.push(count);
        } else {
            let gain = oracle.gain(&mut scratch, w)?;
            count += 1;
            heap.push((gain, Reverse(w), seeds.len()));
        }
    }
    Ok((seeds, gains, lookups))
}

fn selection(
    parts: (Vec<NodeId>, Vec<i64>, Vec<u64>),
    pool: &TrialPool,
    candidates: Vec<NodeId>,
    pool_mode: PoolMode,
) -> SeedSelection {
    let (seeds, gain_totals, lookups_so_far) = parts;
    SeedSelection {
        seeds,
        gain_totals,
        trials: pool.trials,
        lookups_so_far,
        candidates,
        pool_mode,
    }
}

/// Greedy selection evaluating full cascades for every candidate.
pub fn greedy_select(
    g: &SocialGraph,
    k: usize,
    pool: &TrialPool,
    config: &SelectionConfig,
) -> Result<SeedSelection> {
    let candidates = config.candidate_set(g)?;
    check_budget(k, &candidates, pool)?;
    let mut oracle = FullTrials::new(g, *pool, config.pool_mode)?;
    let parts = greedy_with(&mut oracle, k, &candidates)?;
    Ok(selection(parts, pool, candidates, config.pool_mode))
}

/// CELF selection over per-trial coverage sets. Same seeds, order and gains
/// as [`greedy_select`] on the same pool.
pub fn celf_select(
    g: &SocialGraph,
    k: usize,
    pool: &TrialPool,
    config: &SelectionConfig,
) -> Result<SeedSelection> {
    if config.pool_mode == PoolMode::Independent {
        return Err(Error::domain(
            "lazy evaluation needs common trials; use greedy for independent sampling",
        ));
    }
    let candidates = config.candidate_set(g)?;
    check_budget(k, &candidates, pool)?;
    let mut oracle = Coverage::new(g, *pool)?;
    let parts = lazy_with(&mut oracle, k, &candidates)?;
    Ok(selection(parts, pool, candidates, config.pool_mode))
}

/// CELF where every evaluation runs the cascades under an agent assignment
/// and bills their influence messages. The seeds depend only on the spread.
pub fn celf_select_with_agents(
    inst: &Instance,
    assignment: &AgentAssignment,
    k: usize,
    pool: &TrialPool,
    config: &SelectionConfig,
) -> Result<(SeedSelection, OverheadLedger)> {
    if config.pool_mode == PoolMode::Independent {
        return Err(Error::domain(
            "lazy evaluation needs common trials; use greedy for independent sampling",
        ));
    }
    let candidates = config.candidate_set(inst.social())?;
    check_budget(k, &candidates, pool)?;
    let mut oracle = AgentTrials::new(inst, assignment, *pool)?;
    let parts = lazy_with(&mut oracle, k, &candidates)?;
    let ledger = oracle.ledger();
    Ok((selection(parts, pool, candidates, config.pool_mode), ledger))
}

#[cfg(test)]
mod tests;
