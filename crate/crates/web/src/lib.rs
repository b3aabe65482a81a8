//! Browser bindings: build a generated pair of layers, run agent selection,
//! and compare deployment traffic with and without agents. Every call
//! returns JSON text.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use crosslayer::agents::{asmtc, AgentAssignment, AsmtcParams, TryingMode};
use crosslayer::diffusion::OverheadLedger;
use crosslayer::experiment::ExperimentConfig;
use crosslayer::kv::KeyValues;
use crosslayer::seeding::{celf_select, deployment_ledgers};
use crosslayer::Instance;

#[derive(Serialize)]
struct GraphView {
    n: usize,
    /// Radio links by node index.
    links: Vec<(u32, u32)>,
    /// Friendships as unordered pairs, by social node index.
    friendships: Vec<(u32, u32)>,
    /// Radio position of each social node.
    placement: Vec<u32>,
    manet_mean_degree: f64,
}

#[derive(Serialize)]
struct AgentsView {
    agents: Vec<u32>,
    objective_initial: f64,
    objective_after_election: f64,
    objective_final: f64,
    elections: usize,
    rounds: usize,
    delegated: usize,
    control_hops: u64,
}

#[derive(Serialize)]
struct DeployView {
    seeds: Vec<u32>,
    spread: f64,
    baseline: OverheadLedger,
    with_agents: OverheadLedger,
    reduction_pct: f64,
}

fn js_err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn json<T: Serialize>(value: &T) -> Result<String, JsValue> {
    serde_json::to_string(value).map_err(js_err)
}

#[wasm_bindgen]
pub struct Demo {
    cfg: ExperimentConfig,
    inst: Instance,
    agents: Option<AgentAssignment>,
}

#[wasm_bindgen]
impl Demo {
    /// Generates both layers and a random mapping.
    #[wasm_bindgen(constructor)]
    pub fn new(n: usize, manet_degree: f64, probability: f64, seed: u64) -> Result<Demo, JsValue> {
        let max = ((manet_degree * 1.5).ceil() as usize).min(n.saturating_sub(1));
        let text = format!(
            "n = {n}\nseed = {seed}\nprobability = constant:{probability}\n\
             manet_avg_degree = {manet_degree}\nmanet_max_degree = {max}\n\
             social_avg_degree = 4\nsocial_max_degree = {}",
            12.min(n.saturating_sub(1))
        );
        let kv = KeyValues::parse(&text).map_err(js_err)?;
        let cfg = ExperimentConfig::from_kv(&kv).map_err(js_err)?;
        let inst = cfg.build().map_err(js_err)?.instance;
        Ok(Demo { cfg, inst, agents: None })
    }

    pub fn graph(&self) -> Result<String, JsValue> {
        let social = self.inst.social();
        let view = GraphView {
            n: self.inst.node_count(),
            links: self.inst.adhoc().edges().map(|(a, b)| (a.0, b.0)).collect(),
            friendships: social
                .edges()
                .filter(|(u, v, _)| u < v || social.edge(*v, *u).is_none())
                .map(|(u, v, _)| (u.0, v.0))
                .collect(),
            placement: social.nodes().map(|v| self.inst.mapping().adhoc_of(v).0).collect(),
            manet_mean_degree: self.inst.adhoc().mean_degree(),
        };
        json(&view)
    }

    /// Runs agent selection; `alpha` and `max_delegated` below zero mean
    /// unlimited.
    pub fn select_agents(&mut self, alpha: i32, max_delegated: i32, simultaneous: bool) -> Result<String, JsValue> {
        let params = AsmtcParams {
            alpha: u32::try_from(alpha).ok(),
            max_delegated: usize::try_from(max_delegated).ok(),
            trying: if simultaneous { TryingMode::Simultaneous } else { TryingMode::Sequential },
            ..self.cfg.asmtc
        };
        let out = asmtc(&self.inst, &params).map_err(js_err)?;
        let view = AgentsView {
            agents: out.assignment.agents().iter().map(|a| a.0).collect(),
            objective_initial: out.objective_initial,
            objective_after_election: out.objective_after_das,
            objective_final: out.objective_final,
            elections: out.elections.len(),
            rounds: out.rounds.len(),
            delegated: out.assignment.delegated_count(),
            control_hops: out.ledger.control_hops,
        };
        self.agents = Some(out.assignment);
        json(&view)
    }

    /// CELF seeds and the deployment traffic without agents and with the
    /// last selected agents (all-self if none were selected).
    pub fn deploy(&self, k: usize, trials: u32) -> Result<String, JsValue> {
        let n = self.inst.node_count();
        let pool = crosslayer::diffusion::TrialPool::new(self.cfg.seed.wrapping_add(3), trials);
        let sel = celf_select(self.inst.social(), k.min(n), &pool, &self.cfg.selection).map_err(js_err)?;
        let all_self = AgentAssignment::all_self(n);
        let agents = self.agents.as_ref().unwrap_or(&all_self);
        let ledgers =
            deployment_ledgers(&self.inst, &sel, &[&all_self, agents], &pool, &self.cfg.deploy).map_err(js_err)?;
        let total = |i: usize| -> OverheadLedger { ledgers[i].iter().copied().sum() };
        let (baseline, with_agents) = (total(0), total(1));
        let base = baseline.message_hops();
        let view = DeployView {
            seeds: sel.seeds.iter().map(|s| s.0).collect(),
            spread: sel.spread(),
            baseline,
            with_agents,
            reduction_pct: if base == 0 {
                0.0
            } else {
                100.0 * (base as f64 - with_agents.message_hops() as f64) / base as f64
            },
        };
        json(&view)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_round_trip() {
        let mut demo = Demo::new(120, 6.0, 0.1, 4).unwrap();
        let g: serde_json::Value = serde_json::from_str(&demo.graph().unwrap()).unwrap();
        assert_eq!(g["n"], 120);
        assert_eq!(g["placement"].as_array().unwrap().len(), 120);
        let a: serde_json::Value = serde_json::from_str(&demo.select_agents(-1, -1, false).unwrap()).unwrap();
        assert!(a["objective_final"].as_f64().unwrap() <= a["objective_initial"].as_f64().unwrap());
        let d: serde_json::Value = serde_json::from_str(&demo.deploy(3, 50).unwrap()).unwrap();
        assert_eq!(d["seeds"].as_array().unwrap().len(), 3);
        assert!(d["with_agents"]["influence_hops"].as_u64() <= d["baseline"]["influence_hops"].as_u64());
    }
}
