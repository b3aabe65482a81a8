use std::sync::Mutex;

use super::{eval_pool, PoolMode};
use crate::agents::AgentAssignment;
use crate::diffusion::{checked, Cascade, EdgeCosts, OverheadLedger, TrialPool};
use crate::error::{Error, Result};
use crate::graph::{Instance, NodeId, SocialGraph, UNREACHABLE};

/// Marginal spread of adding one node to the seeds picked so far, summed
/// over a trial pool.
pub trait SpreadOracle: Sync {
    type Scratch: Send;

    fn scratch(&self) -> Self::Scratch;
    fn node_count(&self) -> usize;
    fn gain(&self, scratch: &mut Self::Scratch, w: NodeId) -> Result<i64>;
    fn commit(&mut self, w: NodeId) -> Result<()>;
}

fn require_probabilities(g: &SocialGraph) -> Result<()> {
    if g.has_probabilities() {
        Ok(())
    } else {
        Err(Error::MissingProbabilities)
    }
}

fn with_candidate(seeds: &[NodeId], w: NodeId) -> Vec<NodeId> {
    let mut s = seeds.to_vec();
    if let Err(pos) = s.binary_search(&w) {
        s.insert(pos, w);
    }
    s
}

fn total(g: &SocialGraph, cascade: &mut Cascade, seeds: &[NodeId], pool: &TrialPool) -> i64 {
    if seeds.is_empty() {
        return 0;
    }
    (0..pool.trials)
        .map(|t| cascade.run(g, seeds, pool, t, |_, _, _, _| {}) as i64)
        .sum()
}

/// Re-runs every cascade from scratch for each evaluation.
pub struct FullTrials<'a> {
    g: &'a SocialGraph,
    pool: TrialPool,
    mode: PoolMode,
    seeds: Vec<NodeId>,
    base: i64,
    iteration: usize,
}

impl<'a> FullTrials<'a> {
    pub fn new(g: &'a SocialGraph, pool: TrialPool, mode: PoolMode) -> Result<Self> {
        require_probabilities(g)?;
        Ok(FullTrials {
            g,
            pool,
            mode,
            seeds: Vec::new(),
            base: 0,
            iteration: 0,
        })
    }
}

impl SpreadOracle for FullTrials<'_> {
    type Scratch = Cascade;

    fn scratch(&self) -> Cascade {
        Cascade::new(self.g.node_count())
    }

    fn node_count(&self) -> usize {
        self.g.node_count()
    }

    fn gain(&self, cascade: &mut Cascade, w: NodeId) -> Result<i64> {
        let pool = eval_pool(&self.pool, self.mode, self.iteration, w);
        Ok(total(self.g, cascade, &with_candidate(&self.seeds, w), &pool) - self.base)
    }

    fn commit(&mut self, w: NodeId) -> Result<()> {
        self.seeds = with_candidate(&self.seeds, w);
        self.iteration += 1;
        let mut cascade = self.scratch();
        self.base = total(self.g, &mut cascade, &self.seeds, &self.pool);
        Ok(())
    }
}

/// Keeps, per trial, the set reached by the current seeds. A candidate's
/// gain is what it reaches without entering that set.
pub struct Coverage<'a> {
    g: &'a SocialGraph,
    pool: TrialPool,
    words: usize,
    covered: Vec<u64>,
}

pub struct Walk {
    stamp: Vec<u32>,
    epoch: u32,
    queue: Vec<NodeId>,
}

impl Walk {
    fn new(n: usize) -> Self {
        Walk {
            stamp: vec![0; n],
            epoch: 0,
            queue: Vec::new(),
        }
    }
}

impl<'a> Coverage<'a> {
    pub fn new(g: &'a SocialGraph, pool: TrialPool) -> Result<Self> {
        require_probabilities(g)?;
        let words = g.node_count().div_ceil(64);
        Ok(Coverage {
            g,
            pool,
            words,
            covered: vec![0; words * pool.trials as usize],
        })
    }

    #[inline]
    fn is_covered(&self, t: u32, v: NodeId) -> bool {
        let i = t as usize * self.words + v.index() / 64;
        self.covered[i] >> (v.index() % 64) & 1 == 1
    }

    /// Nodes reached from `w` in trial `t` outside the covered set; they
    /// are left in `walk.queue`.
    fn reach(&self, walk: &mut Walk, t: u32, w: NodeId) {
        walk.queue.clear();
        if self.is_covered(t, w) {
            return;
        }
        walk.epoch = walk.epoch.wrapping_add(1);
        if walk.epoch == 0 {
            walk.stamp.iter_mut().for_each(|s| *s = 0);
            walk.epoch = 1;
        }
        walk.stamp[w.index()] = walk.epoch;
        walk.queue.push(w);
        let mut head = 0;
        while head < walk.queue.len() {
            let u = walk.queue[head];
            head += 1;
            for (&v, &p) in self.g.out_neighbors(u).iter().zip(self.g.out_probs(u)) {
                if walk.stamp[v.index()] != walk.epoch
                    && !self.is_covered(t, v)
                    && self.pool.is_live(t, u, v, p)
                {
                    walk.stamp[v.index()] = walk.epoch;
                    walk.queue.push(v);
                }
            }
        }
    }
}

impl SpreadOracle for Coverage<'_> {
    type Scratch = Walk;

    fn scratch(&self) -> Walk {
        Walk::new(self.g.node_count())
    }

    fn node_count(&self) -> usize {
        self.g.node_count()
    }

    fn gain(&self, walk: &mut Walk, w: NodeId) -> Result<i64> {
        let mut sum = 0;
        for t in 0..self.pool.trials {
            self.reach(walk, t, w);
            sum += walk.queue.len() as i64;
        }
        Ok(sum)
    }

    fn commit(&mut self, w: NodeId) -> Result<()> {
        let mut walk = self.scratch();
        for t in 0..self.pool.trials {
            self.reach(&mut walk, t, w);
            let row = t as usize * self.words;
            for &v in &walk.queue {
                self.covered[row + v.index() / 64] |= 1 << (v.index() % 64);
            }
        }
        Ok(())
    }
}

/// Full cascades under an agent assignment; every evaluation adds its
/// influence messages to a running ledger.
pub struct AgentTrials<'a> {
    inst: &'a Instance,
    costs: EdgeCosts,
    assignment: &'a AgentAssignment,
    pool: TrialPool,
    seeds: Vec<NodeId>,
    base: i64,
    ledger: Mutex<OverheadLedger>,
}

impl<'a> AgentTrials<'a> {
    pub fn new(inst: &'a Instance, assignment: &'a AgentAssignment, pool: TrialPool) -> Result<Self> {
        require_probabilities(inst.social())?;
        if assignment.len() != inst.node_count() {
            return Err(Error::domain("assignment does not match the instance"));
        }
        Ok(AgentTrials {
            inst,
            costs: EdgeCosts::new(inst, assignment),
            assignment,
            pool,
            seeds: Vec::new(),
            base: 0,
            ledger: Mutex::new(OverheadLedger::default()),
        })
    }

    pub fn ledger(&self) -> OverheadLedger {
        *self.ledger.lock().expect("ledger lock")
    }

    fn run(&self, cascade: &mut Cascade, seeds: &[NodeId]) -> Result<i64> {
        let g = self.inst.social();
        let mut spread = 0i64;
        let mut hops = 0u64;
        let mut bad = None;
        for t in 0..self.pool.trials {
            spread += cascade.run(g, seeds, &self.pool, t, |_, _, e, _| {
                let c = self.costs.raw(e);
                if c == UNREACHABLE {
                    bad.get_or_insert(e);
                } else {
                    hops += c as u64;
                }
            }) as i64;
        }
        if let Some(e) = bad {
            checked(UNREACHABLE, e, self.inst, self.assignment)?;
        }
        self.ledger.lock().expect("ledger lock").influence_hops += hops;
        Ok(spread)
    }
}

impl SpreadOracle for AgentTrials<'_> {
    type Scratch = Cascade;

    fn scratch(&self) -> Cascade {
        Cascade::new(self.inst.node_count())
    }

    fn node_count(&self) -> usize {
        self.inst.node_count()
    }

    fn gain(&self, cascade: &mut Cascade, w: NodeId) -> Result<i64> {
        Ok(self.run(cascade, &with_candidate(&self.seeds, w))? - self.base)
    }

    fn commit(&mut self, w: NodeId) -> Result<()> {
        self.seeds = with_candidate(&self.seeds, w);
        let mut cascade = self.scratch();
        let g = self.inst.social();
        self.base = total(g, &mut cascade, &self.seeds, &self.pool);
        Ok(())
    }
}
