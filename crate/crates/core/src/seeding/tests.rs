use super::*;
use crate::agents::Route;
use crate::diffusion::{estimate_spread, BroadcastCost};
use crate::fixtures::{self, id};
use crate::graph::{AdhocGraph, LayerMapping};

fn star(leaves: u32, p: f64) -> SocialGraph {
    SocialGraph::from_edges(
        leaves as usize + 1,
        (1..=leaves).flat_map(|v| [(NodeId(0), NodeId(v), Some(p)), (NodeId(v), NodeId(0), Some(p))]),
    )
    .unwrap()
}

#[test]
fn star_center_first() {
    let g = star(5, 1.0);
    let pool = TrialPool::new(3, 10);
    for sel in [
        greedy_select(&g, 1, &pool, &SelectionConfig::default()).unwrap(),
        celf_select(&g, 1, &pool, &SelectionConfig::default()).unwrap(),
    ] {
        // With p = 1 every node reaches all six; ties go to the smallest id.
        assert_eq!(sel.seeds, vec![NodeId(0)]);
        assert_eq!(sel.marginal_gain(0), 6.0);
        assert_eq!(sel.lookups(), 6);
    }
}

#[test]
fn full_budget_gains_sum_to_n() {
    let g = fixtures::social(Some(1.0));
    let pool = TrialPool::new(3, 4);
    let sel = celf_select(&g, 8, &pool, &SelectionConfig::default()).unwrap();
    assert_eq!(sel.spread(), 8.0);
    assert_eq!(sel.seeds.iter().collect::<std::collections::BTreeSet<_>>().len(), 8);
}

#[test]
fn celf_matches_greedy_on_fixture() {
    let g = fixtures::social(Some(0.3));
    let pool = TrialPool::new(11, 500);
    let cfg = SelectionConfig::default();
    let a = greedy_select(&g, 5, &pool, &cfg).unwrap();
    let b = celf_select(&g, 5, &pool, &cfg).unwrap();
    assert_eq!(a.seeds, b.seeds);
    assert_eq!(a.gain_totals, b.gain_totals);
    assert!(b.lookups() <= a.lookups());
    assert!(a.gain_totals.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn second_pick_is_the_best_pair_on_the_pool() {
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3), (2, 5)];
    let g = SocialGraph::from_edges(
        6,
        edges
            .iter()
            .flat_map(|&(a, b)| [(NodeId(a), NodeId(b), Some(0.3)), (NodeId(b), NodeId(a), Some(0.3))]),
    )
    .unwrap();
    let pool = TrialPool::new(99, 2000);
    let sel = greedy_select(&g, 2, &pool, &SelectionConfig::default()).unwrap();
    let first = sel.seeds[0];
    let mut best: Option<(NodeId, u64)> = None;
    for w in g.nodes().filter(|&w| w != first) {
        let total = estimate_spread(&g, &[first, w], &pool).unwrap().total;
        if best.is_none_or(|(_, b)| total > b) {
            best = Some((w, total));
        }
    }
    assert_eq!(sel.seeds[1], best.unwrap().0);
}

#[test]
fn budget_and_mode_errors() {
    let g = fixtures::social(Some(0.3));
    let pool = TrialPool::new(1, 10);
    let cfg = SelectionConfig::default();
    assert!(greedy_select(&g, 9, &pool, &cfg).is_err());
    assert!(celf_select(&g, 0, &pool, &cfg).is_err());
    let independent = SelectionConfig {
        pool_mode: PoolMode::Independent,
        ..cfg
    };
    assert!(celf_select(&g, 2, &pool, &independent).is_err());
    let a = greedy_select(&g, 3, &pool, &independent).unwrap();
    let b = greedy_select(&g, 3, &pool, &independent).unwrap();
    assert_eq!(a, b);
}

#[test]
fn candidate_cap_keeps_highest_out_degree() {
    let g = star(4, 0.5);
    let cfg = SelectionConfig {
        candidate_cap: Some(2),
        ..SelectionConfig::default()
    };
    assert_eq!(cfg.candidate_set(&g).unwrap(), vec![NodeId(0), NodeId(1)]);
}

#[test]
fn selection_csv() {
    let g = star(5, 1.0);
    let sel = celf_select(&g, 2, &TrialPool::new(1, 2), &SelectionConfig::default()).unwrap();
    let mut buf = Vec::new();
    sel.write_csv(&g, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rank,node,marginal_gain,lookups_so_far");
    assert_eq!(lines[1], "1,0,6,6");
    assert!(lines[2].starts_with("2,"));
}

#[test]
fn forced_trial_deployment_costs_nine() {
    let inst = fixtures::instance(fixtures::forced_trial_social());
    let pool = TrialPool::new(0, 1);
    let cfg = SelectionConfig {
        candidates: Some(vec![id(4)]),
        ..SelectionConfig::default()
    };
    let sel = greedy_select(inst.social(), 1, &pool, &cfg).unwrap();
    let model = DeploymentCostModel {
        broadcast: BroadcastCost::Fixed(0),
        returns: Route::Disabled,
    };
    let all_self = AgentAssignment::all_self(8);
    let ledger = deployment_overhead(&inst, &sel, &all_self, &pool, &model).unwrap();
    assert_eq!(ledger.influence_hops, 9);
    assert_eq!(ledger.total(), 9);
}

#[test]
fn one_shared_agent_costs_nothing() {
    let g = star(5, 0.6);
    let adhoc = AdhocGraph::from_edges(6, (1..6).map(|v| (NodeId(v - 1), NodeId(v)))).unwrap();
    let inst = Instance::new(g, adhoc, LayerMapping::identity(6)).unwrap();
    let agents = AgentAssignment::from_agents(inst.social(), vec![NodeId(0); 6]).unwrap();
    let pool = TrialPool::new(4, 50);
    let sel = celf_select(inst.social(), 3, &pool, &SelectionConfig::default()).unwrap();
    let model = DeploymentCostModel {
        broadcast: BroadcastCost::Fixed(0),
        returns: Route::AgentToAgent,
    };
    assert_eq!(deployment_overhead(&inst, &sel, &agents, &pool, &model).unwrap().total(), 0);
}

#[test]
fn per_iteration_ledgers_add_up() {
    let inst = fixtures::instance(fixtures::social(Some(0.4)));
    let pool = TrialPool::new(8, 30);
    let sel = celf_select(inst.social(), 4, &pool, &SelectionConfig::default()).unwrap();
    let agents = AgentAssignment::from_agents(inst.social(), fixtures::example_agents()).unwrap();
    let model = DeploymentCostModel::default();
    let per = deployment_ledgers(&inst, &sel, &[&agents], &pool, &model).unwrap();
    assert_eq!(per[0].len(), 4);
    let total: OverheadLedger = per[0].iter().copied().sum();
    assert_eq!(total, deployment_overhead(&inst, &sel, &agents, &pool, &model).unwrap());
    // Broadcasts: 8 + 7 + 6 + 5 candidates, 7 transmissions each.
    assert_eq!(total.broadcast_tx, 26 * 7);
}

#[test]
fn agents_do_not_change_the_seeds() {
    let inst = fixtures::instance(fixtures::social(Some(0.35)));
    let pool = TrialPool::new(21, 300);
    let cfg = SelectionConfig::default();
    let agents = AgentAssignment::from_agents(inst.social(), fixtures::example_agents()).unwrap();
    let (a, la) = celf_select_with_agents(&inst, &AgentAssignment::all_self(8), 4, &pool, &cfg).unwrap();
    let (b, lb) = celf_select_with_agents(&inst, &agents, 4, &pool, &cfg).unwrap();
    let c = celf_select(inst.social(), 4, &pool, &cfg).unwrap();
    assert_eq!(a.seeds, b.seeds);
    assert_eq!(a.seeds, c.seeds);
    assert_eq!(a.gain_totals, c.gain_totals);
    assert!(lb.influence_hops < la.influence_hops);
}
