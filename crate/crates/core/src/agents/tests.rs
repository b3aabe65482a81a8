use super::*;
use crate::fixtures::{self, id};
use crate::graph::{AdhocGraph, LayerMapping, SocialGraph};

fn both_ways(pairs: &[(u32, u32)]) -> Vec<(NodeId, NodeId, Option<f64>)> {
    pairs
        .iter()
        .flat_map(|&(a, b)| [(NodeId(a), NodeId(b), None), (NodeId(b), NodeId(a), None)])
        .collect()
}

fn instance(n: usize, social: &[(u32, u32)], links: &[(u32, u32)]) -> Instance {
    let s = SocialGraph::from_edges(n, both_ways(social)).unwrap();
    let a = AdhocGraph::from_edges(n, links.iter().map(|&(x, y)| (NodeId(x), NodeId(y)))).unwrap();
    Instance::new(s, a, LayerMapping::identity(n)).unwrap()
}

/// Leaves 1..=5 form a social ring and all know hub 0; the radio layer is a
/// star around the hub.
fn hub_instance() -> Instance {
    let mut social: Vec<(u32, u32)> = (1..=5).map(|v| (0, v)).collect();
    social.extend((1..=5).map(|v| (v, v % 5 + 1)));
    let links: Vec<(u32, u32)> = (1..=5).map(|v| (0, v)).collect();
    instance(6, &social, &links)
}

#[test]
fn fixture_objective_under_self_and_example_agents() {
    let inst = fixtures::instance(fixtures::social(None));
    let all_self = AgentAssignment::all_self(8);
    assert_eq!(objective(&inst, &all_self, WeightMode::Uniform).unwrap(), 64.0);
    // Node 4's own outgoing messages cost 4 + 3 + 2 + 3.
    let four: u32 = [2, 3, 6, 7].iter().map(|&x| inst.hops(id(4), id(x)).unwrap()).sum();
    assert_eq!(four, 12);
}

#[test]
fn probability_mode_needs_probabilities() {
    let inst = fixtures::instance(fixtures::social(None));
    let a = AgentAssignment::all_self(8);
    assert!(matches!(
        objective(&inst, &a, WeightMode::Probability),
        Err(Error::MissingProbabilities)
    ));
    let inst = fixtures::instance(fixtures::social(Some(0.5)));
    assert_eq!(objective(&inst, &a, WeightMode::Probability).unwrap(), 32.0);
}

#[test]
fn rmo_of_current_agent_is_zero() {
    let inst = fixtures::instance(fixtures::social(None));
    let a = AgentAssignment::all_self(8);
    let r = rmo_delta(&inst, &a, id(3), id(3), &AsmtcParams::default()).unwrap();
    assert_eq!(r.delta, 0.0);
}

#[test]
fn rmo_rejects_non_friends_and_alpha() {
    let inst = fixtures::instance(fixtures::social(None));
    let a = AgentAssignment::all_self(8);
    let p = AsmtcParams::default();
    assert!(matches!(
        rmo_delta(&inst, &a, id(5), id(8), &p),
        Err(Error::InvalidCandidate { .. })
    ));
    let tight = AsmtcParams {
        alpha: Some(2),
        ..p
    };
    // d(2, 4) = 4 in the fixture's radio layer.
    assert!(rmo_delta(&inst, &a, id(2), id(4), &tight).is_err());
    assert!(rmo_delta(&inst, &a, id(2), id(4), &p).is_ok());
}

#[test]
fn rmo_matches_full_recount() {
    let inst = fixtures::instance(fixtures::social(None));
    let mut a = AgentAssignment::from_agents(inst.social(), fixtures::example_agents()).unwrap();
    let p = AsmtcParams::default();
    let before = objective(&inst, &a, WeightMode::Uniform).unwrap();
    let r = rmo_delta(&inst, &a, id(7), id(8), &p).unwrap();
    a.set(id(7), id(8));
    let after = objective(&inst, &a, WeightMode::Uniform).unwrap();
    assert_eq!(r.delta, before - after);
}

#[test]
fn hub_wins_first_election() {
    let inst = hub_instance();
    let out = das(&inst, &AsmtcParams::default()).unwrap();
    let first = &out.elections[0];
    assert_eq!(first.winner, NodeId(0));
    assert_eq!(first.estimated, 30.0);
    assert_eq!(first.group, (1..=5).map(NodeId).collect::<Vec<_>>());
    assert_eq!(out.objective, 0.0);
    assert!(out.assignment.all_represented());
}

#[test]
fn adjacent_friends_stay_self() {
    let inst = instance(4, &[(0, 1), (1, 2), (2, 3)], &[(0, 1), (1, 2), (2, 3)]);
    let out = asmtc(&inst, &AsmtcParams::default()).unwrap();
    assert!(out.objective_final <= inst.social().edge_count() as f64);
    assert!(out.objective_final <= out.objective_initial);
}

#[test]
fn empty_edge_set_is_all_self_and_free() {
    let inst = instance(3, &[], &[(0, 1), (1, 2)]);
    let out = asmtc(&inst, &AsmtcParams::default()).unwrap();
    assert_eq!(out.assignment, AgentAssignment::all_self(3));
    assert_eq!(out.objective_final, 0.0);
    assert_eq!(out.ledger.total(), 0);
}

#[test]
fn beta_zero_freezes_mor() {
    let inst = fixtures::instance(fixtures::social(None));
    let start = AgentAssignment::from_agents(inst.social(), fixtures::example_agents()).unwrap();
    let params = AsmtcParams {
        beta: Some(0),
        ..AsmtcParams::default()
    };
    let out = mor(&inst, start.clone(), &params).unwrap();
    assert_eq!(out.assignment, start);
    assert!(out.rounds.is_empty());
}

#[test]
fn delegation_cap_zero_is_baseline() {
    let inst = fixtures::instance(fixtures::social(None));
    let params = AsmtcParams {
        max_delegated: Some(0),
        ..AsmtcParams::default()
    };
    let out = asmtc(&inst, &params).unwrap();
    assert_eq!(out.assignment, AgentAssignment::all_self(8));
}

#[test]
fn delegation_cap_is_respected() {
    let inst = fixtures::instance(fixtures::social(None));
    for cap in 0..=8 {
        let params = AsmtcParams {
            max_delegated: Some(cap),
            ..AsmtcParams::default()
        };
        let out = asmtc(&inst, &params).unwrap();
        assert!(out.assignment.delegated_count() <= cap);
    }
}

#[test]
fn mor_leaves_an_optimum_alone() {
    let inst = fixtures::instance(fixtures::social(None));
    let (best, cost) = brute_force_asp(&inst, WeightMode::Uniform, None).unwrap();
    for trying in [TryingMode::Sequential, TryingMode::Simultaneous] {
        let params = AsmtcParams {
            trying,
            ..AsmtcParams::default()
        };
        let out = mor(&inst, best.clone(), &params).unwrap();
        assert_eq!(out.assignment, best);
        assert_eq!(out.objective, cost);
    }
}

#[test]
fn brute_force_small_cases() {
    let single = instance(1, &[], &[]);
    let (a, c) = brute_force_asp(&single, WeightMode::Uniform, None).unwrap();
    assert_eq!(a.agents(), &[NodeId(0)]);
    assert_eq!(c, 0.0);

    let pair = instance(4, &[(0, 3)], &[(0, 1), (1, 2), (2, 3)]);
    let (a, c) = brute_force_asp(&pair, WeightMode::Uniform, None).unwrap();
    assert_eq!(c, 0.0);
    assert_eq!(a.agent(NodeId(0)), a.agent(NodeId(3)));
}

#[test]
fn brute_force_refuses_large_spaces() {
    let n = 30u32;
    let social: Vec<(u32, u32)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let links: Vec<(u32, u32)> = (1..n).map(|v| (v - 1, v)).collect();
    let inst = instance(n as usize, &social, &links);
    assert!(matches!(
        brute_force_asp(&inst, WeightMode::Uniform, None),
        Err(Error::SearchSpace(_))
    ));
}

#[test]
fn sandwich_on_fixture() {
    let inst = fixtures::instance(fixtures::social(None));
    let (_, best) = brute_force_asp(&inst, WeightMode::Uniform, None).unwrap();
    for trying in [TryingMode::Sequential, TryingMode::Simultaneous] {
        let out = asmtc(
            &inst,
            &AsmtcParams {
                trying,
                ..AsmtcParams::default()
            },
        )
        .unwrap();
        assert!(best <= out.objective_final);
        assert!(out.objective_final <= out.objective_initial);
        let recount = objective(&inst, &out.assignment, WeightMode::Uniform).unwrap();
        assert_eq!(recount, out.objective_final);
        out.assignment.check(&inst, None).unwrap();
    }
}

#[test]
fn params_from_kv() {
    let kv = KeyValues::parse(
        "alpha = 3\nbeta = inf\nmax_delegated = 10\nweight_mode = probability\ntrying = simultaneous\ncontrol_broadcast = 7\ncontrol_notify = node",
    )
    .unwrap();
    let p = AsmtcParams::from_kv(&kv, "").unwrap();
    assert_eq!(p.alpha, Some(3));
    assert_eq!(p.beta, None);
    assert_eq!(p.max_delegated, Some(10));
    assert_eq!(p.weight_mode, WeightMode::Probability);
    assert_eq!(p.trying, TryingMode::Simultaneous);
    assert_eq!(p.control.broadcast, BroadcastCost::Fixed(7));
    assert_eq!(p.control.notify, Route::NodeToNode);
}

#[test]
fn assignment_csv_round_trip() {
    let inst = fixtures::instance(fixtures::social(None));
    let a = AgentAssignment::from_agents(inst.social(), fixtures::example_agents()).unwrap();
    let mut buf = Vec::new();
    a.write_csv(inst.social(), &mut buf).unwrap();
    let back = AgentAssignment::read_csv(inst.social(), &buf[..]).unwrap();
    assert_eq!(a, back);
    assert_eq!(a.delegated_count(), 4);
}
