//! A small hand-built instance: eight people, twelve friendships, and an
//! ad-hoc layer in which person 4 reaches 2, 3, 6, 1 and 7 in 4, 3, 2, 2 and
//! 3 hops. Node labels are 1..=8; dense ids are `label - 1`.

use crate::graph::{AdhocGraph, Instance, LayerMapping, NodeId, SocialGraph};

/// Undirected friendships by label.
pub const FRIENDSHIPS: [(u64, u64); 12] = [
    (1, 2),
    (1, 3),
    (1, 5),
    (1, 6),
    (2, 4),
    (2, 6),
    (3, 4),
    (3, 8),
    (4, 6),
    (4, 7),
    (5, 7),
    (7, 8),
];

/// Ad-hoc links by label. Shortest route from 3 to 4 is 3-6-5-4.
pub const LINKS: [(u64, u64); 7] = [(4, 5), (5, 6), (6, 3), (3, 2), (5, 1), (1, 7), (7, 8)];

/// Dense id of a label.
pub fn id(label: u64) -> NodeId {
    NodeId(label as u32 - 1)
}

/// Friendship graph with probability `p` on every directed edge.
pub fn social(p: Option<f64>) -> SocialGraph {
    social_with(|_, _| p)
}

/// Friendship graph with per-edge probabilities `p(u_label, v_label)`.
pub fn social_with<F: Fn(u64, u64) -> Option<f64>>(p: F) -> SocialGraph {
    let edges = FRIENDSHIPS
        .iter()
        .flat_map(|&(a, b)| [(a, b), (b, a)])
        .map(|(a, b)| (id(a), id(b), p(a, b)));
    SocialGraph::with_labels((1..=8).collect(), edges).expect("fixture is valid")
}

pub fn adhoc() -> AdhocGraph {
    AdhocGraph::with_labels((1..=8).collect(), LINKS.iter().map(|&(a, b)| (id(a), id(b))))
        .expect("fixture is valid")
}

/// The forced trial: 4 succeeds on 2, 3 and 6 and every other attempt fails.
pub fn forced_trial_social() -> SocialGraph {
    social_with(|a, b| Some(if a == 4 && [2, 3, 6].contains(&b) { 1.0 } else { 0.0 }))
}

pub fn instance(social: SocialGraph) -> Instance {
    Instance::new(social, adhoc(), LayerMapping::identity(8)).expect("fixture is valid")
}

/// Reference agents: 4 speaks for 2, 4 and 6; 1 speaks for
/// 1, 3 and 5; everyone else is their own agent.
pub fn example_agents() -> Vec<NodeId> {
    (1..=8)
        .map(|l| match l {
            2 | 4 | 6 => id(4),
            1 | 3 | 5 => id(1),
            other => id(other),
        })
        .collect()
}
