#![allow(dead_code)]

use std::collections::VecDeque;

use crosslayer::netgen::random_mapping;
use crosslayer::{AdhocGraph, Instance, NodeId, SocialGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random directed friendships: each unordered pair is linked with
/// probability `density`, in one or both directions, with random `p`.
pub fn random_social(rng: &mut ChaCha8Rng, n: usize, density: f64) -> SocialGraph {
    let mut edges = Vec::new();
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            if rng.random_bool(density) {
                match rng.random_range(0..3) {
                    0 => edges.push((NodeId(a), NodeId(b), Some(rng.random()))),
                    1 => edges.push((NodeId(b), NodeId(a), Some(rng.random()))),
                    _ => {
                        edges.push((NodeId(a), NodeId(b), Some(rng.random())));
                        edges.push((NodeId(b), NodeId(a), Some(rng.random())));
                    }
                }
            }
        }
    }
    SocialGraph::from_edges(n, edges).unwrap()
}

/// Random tree plus extra links with probability `extra`; connected.
pub fn random_adhoc(rng: &mut ChaCha8Rng, n: usize, extra: f64) -> AdhocGraph {
    let mut links = Vec::new();
    for v in 1..n as u32 {
        links.push((NodeId(rng.random_range(0..v)), NodeId(v)));
    }
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            if rng.random_bool(extra) {
                links.push((NodeId(a), NodeId(b)));
            }
        }
    }
    AdhocGraph::from_edges(n, links).unwrap()
}

/// Possibly disconnected random graph.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> AdhocGraph {
    let mut links = Vec::new();
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            if rng.random_bool(density) {
                links.push((NodeId(a), NodeId(b)));
            }
        }
    }
    AdhocGraph::from_edges(n, links).unwrap()
}

pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, density: f64, extra: f64) -> Instance {
    let social = random_social(rng, n, density);
    let adhoc = random_adhoc(rng, n, extra);
    let mapping = random_mapping(n, rng.random());
    Instance::new(social, adhoc, mapping).unwrap()
}

/// All-pairs hop counts by Floyd-Warshall; `u64::MAX` when disconnected.
pub fn floyd_warshall(g: &AdhocGraph) -> Vec<Vec<u64>> {
    let n = g.node_count();
    let inf = u64::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (a, b) in g.edges() {
        d[a.index()][b.index()] = 1;
        d[b.index()][a.index()] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    for row in &mut d {
        for x in row.iter_mut() {
            if *x >= inf {
                *x = u64::MAX;
            }
        }
    }
    d
}

/// Hop distance between social nodes through the mapping, by a fresh BFS.
pub fn bfs_hops(inst: &Instance, a: NodeId, b: NodeId) -> Option<u64> {
    let adhoc = inst.adhoc();
    let (src, dst) = (inst.mapping().adhoc_of(a), inst.mapping().adhoc_of(b));
    let mut dist = vec![u64::MAX; adhoc.node_count()];
    dist[src.index()] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(x) = queue.pop_front() {
        for &y in adhoc.neighbors(x) {
            if dist[y.index()] == u64::MAX {
                dist[y.index()] = dist[x.index()] + 1;
                queue.push_back(y);
            }
        }
    }
    (dist[dst.index()] != u64::MAX).then_some(dist[dst.index()])
}

/// Objective by a plain double loop over nodes and their out-edges.
pub fn naive_objective(inst: &Instance, agents: &[NodeId], weighted: bool) -> f64 {
    let g = inst.social();
    let mut sum = 0.0;
    for (u, v, p) in g.edges() {
        let d = bfs_hops(inst, agents[u.index()], agents[v.index()]).unwrap() as f64;
        sum += if weighted { p.unwrap() * d } else { d };
    }
    sum
}
