use std::io::Write;

use serde::Serialize;

use super::TrialPool;
use crate::error::{Error, Result};
use crate::graph::{NodeId, SocialGraph};

/// One successful influence event: `u` activated `v` in `round`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Activation {
    pub u: NodeId,
    pub v: NodeId,
    pub round: u32,
}

/// One realization of the cascade.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    /// Seeds (ascending) followed by activated nodes in activation order.
    pub activated: Vec<NodeId>,
    pub activations: Vec<Activation>,
    pub seed_count: usize,
}

impl TrialOutcome {
    pub fn spread(&self) -> usize {
        self.activated.len()
    }

    pub fn seeds(&self) -> &[NodeId] {
        &self.activated[..self.seed_count]
    }

    pub fn rounds(&self) -> u32 {
        self.activations.last().map_or(0, |a| a.round)
    }
}

/// Reusable cascade buffers, one per worker. Activation marks are epoch stamps, so a run costs
/// time proportional to the cascade, not to `n`.
#[derive(Clone, Debug)]
pub struct Cascade {
    stamp: Vec<u32>,
    epoch: u32,
    frontier: Vec<NodeId>,
    next: Vec<NodeId>,
    pub(crate) activated: Vec<NodeId>,
}

impl Cascade {
    pub(crate) fn new(n: usize) -> Self {
        Cascade {
            stamp: vec![0; n],
            epoch: 0,
            frontier: Vec::new(),
            next: Vec::new(),
            activated: Vec::new(),
        }
    }

    fn begin(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.activated.clear();
    }

    #[inline]
    pub(crate) fn is_active(&self, v: NodeId) -> bool {
        self.stamp[v.index()] == self.epoch
    }

    /// Runs trial `t` from `seeds` (sorted, distinct, valid). Within a round
    /// the frontier is scanned in ascending order and each node's edges in
    /// ascending target order; the first live edge into an inactive node
    /// activates it. `on_edge(u, v, edge, round)` sees every activation.
    /// Returns the spread.
    pub(crate) fn run<F>(
        &mut self,
        g: &SocialGraph,
        seeds: &[NodeId],
        pool: &TrialPool,
        t: u32,
        mut on_edge: F,
    ) -> usize
    where
        F: FnMut(NodeId, NodeId, usize, u32),
    {
        self.begin();
        self.frontier.clear();
        for &s in seeds {
            if !self.is_active(s) {
                self.stamp[s.index()] = self.epoch;
                self.frontier.push(s);
                self.activated.push(s);
            }
        }
        let mut round = 0;
        while !self.frontier.is_empty() {
            round += 1;
            self.next.clear();
            for &u in &self.frontier {
                let range = g.out_range(u);
                let targets = g.out_neighbors(u);
                let probs = g.out_probs(u);
                for (i, (&v, &p)) in targets.iter().zip(probs).enumerate() {
                    if self.stamp[v.index()] != self.epoch && pool.is_live(t, u, v, p) {
                        self.stamp[v.index()] = self.epoch;
                        self.next.push(v);
                        self.activated.push(v);
                        on_edge(u, v, range.start + i, round);
                    }
                }
            }
            self.next.sort_unstable();
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
        self.activated.len()
    }
}

pub(crate) fn check_seeds(g: &SocialGraph, seeds: &[NodeId]) -> Result<Vec<NodeId>> {
    if seeds.is_empty() {
        return Err(Error::domain("seed set is empty"));
    }
    if let Some(&s) = seeds.iter().find(|s| s.index() >= g.node_count()) {
        return Err(Error::UnknownNode(s));
    }
    if !g.has_probabilities() {
        return Err(Error::MissingProbabilities);
    }
    let mut sorted = seeds.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted)
}

/// One independent-cascade realization: the nodes reachable from `seeds`
/// over trial `t`'s live edges, with the activation log in round order.
pub fn ic_trial(g: &SocialGraph, seeds: &[NodeId], pool: &TrialPool, t: u32) -> Result<TrialOutcome> {
    let seeds = check_seeds(g, seeds)?;
    let mut cascade = Cascade::new(g.node_count());
    let mut activations = Vec::new();
    cascade.run(g, &seeds, pool, t, |u, v, _, round| {
        activations.push(Activation { u, v, round })
    });
    Ok(TrialOutcome {
        activated: std::mem::take(&mut cascade.activated),
        activations,
        seed_count: seeds.len(),
    })
}

/// Spread summed over the trials of a pool.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Spread {
    pub total: u64,
    pub trials: u32,
}

impl Spread {
    pub fn mean(&self) -> f64 {
        self.total as f64 / self.trials as f64
    }
}

/// Mean spread over trials `0..pool.trials`.
pub fn estimate_spread(g: &SocialGraph, seeds: &[NodeId], pool: &TrialPool) -> Result<Spread> {
    if pool.trials == 0 {
        return Err(Error::domain("trial pool is empty"));
    }
    let seeds = check_seeds(g, seeds)?;
    Ok(Spread {
        total: spread_total(g, &seeds, pool),
        trials: pool.trials,
    })
}

/// Sum of spreads over all trials; `seeds` already checked.
pub(crate) fn spread_total(g: &SocialGraph, seeds: &[NodeId], pool: &TrialPool) -> u64 {
    const CHUNK: usize = 64;
    let chunks = (pool.trials as usize).div_ceil(CHUNK);
    crate::par::map_init(
        chunks,
        || Cascade::new(g.node_count()),
        |cascade, c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(pool.trials as usize);
            (lo..hi)
                .map(|t| cascade.run(g, seeds, pool, t as u32, |_, _, _, _| {}) as u64)
                .sum::<u64>()
        },
    )
    .into_iter()
    .sum()
}

/// `trial,round,u,v` per activation, using the graph's labels.
pub fn write_trial_csv<W: Write>(
    g: &SocialGraph,
    trials: &[(u32, &TrialOutcome)],
    mut w: W,
) -> std::io::Result<()> {
    writeln!(w, "trial,round,u,v")?;
    for (t, outcome) in trials {
        for a in &outcome.activations {
            writeln!(w, "{t},{},{},{}", a.round, g.label(a.u), g.label(a.v))?;
        }
    }
    Ok(())
}
