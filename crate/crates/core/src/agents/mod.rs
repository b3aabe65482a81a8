//! Agent selection: the overhead objective, single-node move deltas, the
//! election phase (DAS), local reduction (MOR), and an exhaustive oracle for
//! tiny instances.

mod assignment;
mod brute;
mod das;
mod mor;
mod objective;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use assignment::AgentAssignment;
pub use brute::{brute_force_asp, BRUTE_FORCE_LIMIT};
pub use das::{das, DasOutcome, Election};
pub use mor::{mor, MorOutcome, MorRound};
pub use objective::{objective, rmo_delta, Objective, RmoReport};

pub(crate) use objective::EPS;

use crate::diffusion::{BroadcastCost, OverheadLedger};
use crate::error::{Error, Result};
use crate::graph::{Instance, NodeId};
use crate::kv::KeyValues;

/// Edge weights in the objective.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum WeightMode {
    /// Every directed edge counts its hop distance once.
    #[default]
    Uniform,
    /// Each edge is weighted by its influence probability (expected hops).
    Probability,
}

impl FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "uniform" => Ok(WeightMode::Uniform),
            "probability" => Ok(WeightMode::Probability),
            x => Err(Error::domain(format!("unknown weight mode `{x}`"))),
        }
    }
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightMode::Uniform => "uniform",
            WeightMode::Probability => "probability",
        })
    }
}

/// How MOR's trying stage sees earlier proposals within a round.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum TryingMode {
    /// Nodes try in ascending id order, each against the tentative
    /// assignment that already holds earlier nodes' proposals.
    #[default]
    Sequential,
    /// Every node evaluates against the committed assignment, as if all
    /// nodes tried at once. Proposals can then conflict, which is what the
    /// checking and backward-tracking stages resolve.
    Simultaneous,
}

impl FromStr for TryingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sequential" => Ok(TryingMode::Sequential),
            "simultaneous" => Ok(TryingMode::Simultaneous),
            x => Err(Error::domain(format!("unknown trying mode `{x}`"))),
        }
    }
}

impl fmt::Display for TryingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TryingMode::Sequential => "sequential",
            TryingMode::Simultaneous => "simultaneous",
        })
    }
}

/// Which endpoints a point-to-point message travels between.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Route {
    /// Between the agents of the two endpoints.
    #[default]
    AgentToAgent,
    /// Between the endpoints themselves.
    NodeToNode,
    /// Not charged.
    Disabled,
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "agent" | "agent-to-agent" => Ok(Route::AgentToAgent),
            "node" | "node-to-node" => Ok(Route::NodeToNode),
            "off" | "disabled" | "none" => Ok(Route::Disabled),
            x => Err(Error::domain(format!("unknown route `{x}`"))),
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::AgentToAgent => "agent",
            Route::NodeToNode => "node",
            Route::Disabled => "off",
        })
    }
}

/// Prices of the selection protocol's own messages. Requests, replies and
/// backtracking requests are unicasts priced by node-to-node hop distance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ControlCostModel {
    /// Cost announcements and the global overhead check.
    pub broadcast: BroadcastCost,
    /// A node telling its friends who its agent is.
    pub notify: Route,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AsmtcParams {
    /// Maximum hop distance between a node and its agent.
    pub alpha: Option<u32>,
    /// Maximum committed agent changes per node during MOR.
    pub beta: Option<u32>,
    /// Maximum number of nodes whose agent is someone else.
    pub max_delegated: Option<usize>,
    pub weight_mode: WeightMode,
    pub trying: TryingMode,
    pub control: ControlCostModel,
}

impl Default for AsmtcParams {
    fn default() -> Self {
        AsmtcParams {
            alpha: None,
            beta: None,
            max_delegated: None,
            weight_mode: WeightMode::Uniform,
            trying: TryingMode::Sequential,
            control: ControlCostModel::default(),
        }
    }
}

/// Parses a limit where `inf`, `none` or `unlimited` mean no limit.
pub(crate) fn parse_limit<T: FromStr>(kv: &KeyValues, key: &str) -> Result<Option<T>> {
    match kv.raw(key) {
        None => Ok(None),
        Some("inf" | "none" | "unlimited") => Ok(None),
        Some(_) => kv.get(key),
    }
}

impl AsmtcParams {
    pub const KEYS: [&'static str; 7] = [
        "alpha",
        "beta",
        "max_delegated",
        "weight_mode",
        "trying",
        "control_broadcast",
        "control_notify",
    ];

    /// Reads `prefix`-qualified keys over the defaults.
    pub fn from_kv(kv: &KeyValues, prefix: &str) -> Result<Self> {
        let key = |k: &str| format!("{prefix}{k}");
        let d = AsmtcParams::default();
        Ok(AsmtcParams {
            alpha: parse_limit(kv, &key("alpha"))?,
            beta: parse_limit(kv, &key("beta"))?,
            max_delegated: parse_limit(kv, &key("max_delegated"))?,
            weight_mode: kv.get(&key("weight_mode"))?.unwrap_or(d.weight_mode),
            trying: kv.get(&key("trying"))?.unwrap_or(d.trying),
            control: ControlCostModel {
                broadcast: kv.get(&key("control_broadcast"))?.unwrap_or(d.control.broadcast),
                notify: kv.get(&key("control_notify"))?.unwrap_or(d.control.notify),
            },
        })
    }
}

/// Both phases of agent selection.
#[derive(Clone, Debug, Serialize)]
pub struct AsmtcOutcome {
    #[serde(skip)]
    pub assignment: AgentAssignment,
    /// Control traffic of both phases.
    pub ledger: OverheadLedger,
    pub elections: Vec<Election>,
    pub rounds: Vec<MorRound>,
    pub objective_initial: f64,
    pub objective_after_das: f64,
    pub objective_final: f64,
}

/// Election phase followed by local reduction.
pub fn asmtc(inst: &Instance, params: &AsmtcParams) -> Result<AsmtcOutcome> {
    let obj = Objective::new(inst, params.weight_mode)?;
    let objective_initial = obj.total(&AgentAssignment::all_self(inst.node_count()))?;
    let d = das(inst, params)?;
    let m = mor(inst, d.assignment, params)?;
    let outcome = AsmtcOutcome {
        objective_after_das: d.objective,
        objective_final: m.objective,
        assignment: m.assignment,
        ledger: d.ledger + m.ledger,
        elections: d.elections,
        rounds: m.rounds,
        objective_initial,
    };
    if outcome.objective_final > outcome.objective_initial + EPS {
        return Err(Error::Invariant(format!(
            "agent selection raised the objective from {} to {}",
            outcome.objective_initial, outcome.objective_final
        )));
    }
    Ok(outcome)
}

/// Hop distance for a control message; unreachable pairs are an error.
pub(crate) fn control_hops(inst: &Instance, a: NodeId, b: NodeId) -> Result<u64> {
    if a == b {
        return Ok(0);
    }
    inst.hops(a, b).map(u64::from).ok_or(Error::Unreachable(a, b))
}

/// A node telling each friend its agent.
pub(crate) fn notify_cost(
    inst: &Instance,
    assign: &AgentAssignment,
    v: NodeId,
    route: Route,
) -> Result<u64> {
    let mut hops = 0;
    for &u in inst.social().friends(v) {
        hops += match route {
            Route::AgentToAgent => control_hops(inst, assign.agent(v), assign.agent(u))?,
            Route::NodeToNode => control_hops(inst, v, u)?,
            Route::Disabled => 0,
        };
    }
    Ok(hops)
}

#[cfg(test)]
mod tests;
