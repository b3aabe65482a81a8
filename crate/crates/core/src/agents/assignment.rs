use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Instance, NodeId, SocialGraph};

/// Who speaks for whom: `agent(v)` is `v` itself or one of `v`'s friends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentAssignment {
    agent: Vec<NodeId>,
    represented: Vec<bool>,
    delegated: usize,
}

impl AgentAssignment {
    /// Everyone represents themselves; the no-agent baseline.
    pub fn all_self(n: usize) -> Self {
        AgentAssignment {
            agent: (0..n).map(NodeId::from).collect(),
            represented: vec![true; n],
            delegated: 0,
        }
    }

    /// Starting state of the election: self agents, nobody represented yet.
    pub(crate) fn unrepresented(n: usize) -> Self {
        AgentAssignment {
            represented: vec![false; n],
            ..Self::all_self(n)
        }
    }

    /// Checks the candidate rule for every node.
    pub fn from_agents(social: &SocialGraph, agents: Vec<NodeId>) -> Result<Self> {
        if agents.len() != social.node_count() {
            return Err(Error::domain(format!(
                "assignment covers {} nodes, graph has {}",
                agents.len(),
                social.node_count()
            )));
        }
        for (v, &a) in agents.iter().enumerate() {
            let v = NodeId::from(v);
            if a != v && social.friends(v).binary_search(&a).is_err() {
                return Err(Error::InvalidCandidate {
                    node: v,
                    agent: a,
                    reason: "not a friend",
                });
            }
        }
        let delegated = agents
            .iter()
            .enumerate()
            .filter(|&(v, a)| a.index() != v)
            .count();
        Ok(AgentAssignment {
            represented: vec![true; agents.len()],
            agent: agents,
            delegated,
        })
    }

    pub fn len(&self) -> usize {
        self.agent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agent.is_empty()
    }

    #[inline]
    pub fn agent(&self, v: NodeId) -> NodeId {
        self.agent[v.index()]
    }

    pub fn agents(&self) -> &[NodeId] {
        &self.agent
    }

    pub fn is_represented(&self, v: NodeId) -> bool {
        self.represented[v.index()]
    }

    pub fn all_represented(&self) -> bool {
        self.represented.iter().all(|&r| r)
    }

    /// Nodes whose agent is someone else.
    pub fn delegated_count(&self) -> usize {
        self.delegated
    }

    pub(crate) fn set(&mut self, v: NodeId, a: NodeId) {
        let old = self.agent[v.index()];
        if old != v {
            self.delegated -= 1;
        }
        if a != v {
            self.delegated += 1;
        }
        self.agent[v.index()] = a;
    }

    pub(crate) fn mark_represented(&mut self, v: NodeId) {
        self.represented[v.index()] = true;
    }

    /// Distinct agents, ascending.
    pub fn agent_set(&self) -> Vec<NodeId> {
        self.agent.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// Candidate rule, and `d(v, agent(v)) <= alpha` when `alpha` is set.
    pub fn check(&self, inst: &Instance, alpha: Option<u32>) -> Result<()> {
        let social = inst.social();
        for v in social.nodes() {
            let a = self.agent(v);
            if a == v {
                continue;
            }
            if social.friends(v).binary_search(&a).is_err() {
                return Err(Error::InvalidCandidate {
                    node: v,
                    agent: a,
                    reason: "not a friend",
                });
            }
            if let Some(alpha) = alpha {
                if inst.hops(v, a).is_none_or(|d| d > alpha) {
                    return Err(Error::InvalidCandidate {
                        node: v,
                        agent: a,
                        reason: "farther than alpha hops",
                    });
                }
            }
        }
        Ok(())
    }

    /// `node,agent` with the graph's labels.
    pub fn write_csv<W: Write>(&self, social: &SocialGraph, mut w: W) -> std::io::Result<()> {
        writeln!(w, "node,agent")?;
        for v in social.nodes() {
            writeln!(w, "{},{}", social.label(v), social.label(self.agent(v)))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(social: &SocialGraph, reader: R) -> Result<Self> {
        let mut agents: Vec<Option<NodeId>> = vec![None; social.node_count()];
        let lookup = |s: &str, line: usize| -> Result<NodeId> {
            let label: u64 = s.trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("invalid node label `{s}`"),
            })?;
            social
                .labels()
                .binary_search(&label)
                .map(NodeId::from)
                .map_err(|_| Error::Parse {
                    line,
                    message: format!("unknown node label {label}"),
                })
        };
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let text = line.trim();
            if text.is_empty() || (i == 0 && text.starts_with("node")) {
                continue;
            }
            let (v, a) = text.split_once(',').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected `node,agent`".into(),
            })?;
            agents[lookup(v, i + 1)?.index()] = Some(lookup(a, i + 1)?);
        }
        let agents = agents
            .into_iter()
            .enumerate()
            .map(|(v, a)| a.unwrap_or(NodeId::from(v)))
            .collect();
        Self::from_agents(social, agents)
    }
}
