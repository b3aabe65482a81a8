//! Simplified community benchmark: truncated power-law degrees, power-law
//! community sizes, a mixing fraction of inter-community stubs, and
//! configuration-model matching with swap-based repair.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::GenParams;
use crate::graph::NodeId;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GenDiagnostics {
    pub nodes: usize,
    pub edges: usize,
    pub mean_degree: f64,
    pub max_degree: usize,
    pub communities: usize,
    pub inter_community_fraction: f64,
    /// Edges added to join components.
    pub bridges_added: usize,
    /// Whether one stub was added or removed to make the degree sum even.
    pub parity_adjusted: bool,
    /// Stubs that could not be matched without a self-loop or multi-edge.
    pub dropped_stubs: usize,
    /// Carried through from the parameters; the graph is unweighted.
    pub mixing_weight: f64,
}

pub(super) struct Generated {
    pub edges: Vec<(NodeId, NodeId)>,
    pub diagnostics: GenDiagnostics,
}

const REPAIR_ATTEMPTS: usize = 64;

/// Mean of the continuous power law `x^-exp` truncated to `[a, b]`.
fn power_law_mean(a: f64, b: f64, exp: f64) -> f64 {
    if (b - a).abs() < 1e-12 {
        return a;
    }
    if (exp - 1.0).abs() < 1e-9 {
        (b - a) / (b / a).ln()
    } else if (exp - 2.0).abs() < 1e-9 {
        (b / a).ln() / (1.0 / a - 1.0 / b)
    } else {
        let (e1, e2) = (1.0 - exp, 2.0 - exp);
        (e1 / e2) * (b.powf(e2) - a.powf(e2)) / (b.powf(e1) - a.powf(e1))
    }
}

fn power_law_sample(rng: &mut ChaCha8Rng, a: f64, b: f64, exp: f64) -> f64 {
    let u: f64 = rng.random();
    if (b - a).abs() < 1e-12 {
        a
    } else if (exp - 1.0).abs() < 1e-9 {
        a * (b / a).powf(u)
    } else {
        let e1 = 1.0 - exp;
        (a.powf(e1) + u * (b.powf(e1) - a.powf(e1))).powf(1.0 / e1)
    }
}

fn degree_sequence(p: &GenParams, rng: &mut ChaCha8Rng, diag: &mut GenDiagnostics) -> Vec<usize> {
    let kmax = p.max_degree as f64;
    // Lower cutoff whose truncated mean hits the target.
    let (mut lo, mut hi) = (1.0f64, kmax);
    if power_law_mean(lo, kmax, p.degree_exponent) >= p.avg_degree {
        hi = lo;
    } else {
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if power_law_mean(mid, kmax, p.degree_exponent) < p.avg_degree {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let kmin = hi;
    let mut deg: Vec<usize> = (0..p.n)
        .map(|_| {
            let x = power_law_sample(rng, kmin, kmax, p.degree_exponent).round() as usize;
            x.clamp(1, p.max_degree)
        })
        .collect();

    let target = ((p.avg_degree * p.n as f64).round() as usize).clamp(p.n, p.n * p.max_degree);
    let mut sum: usize = deg.iter().sum();
    let pick = |rng: &mut ChaCha8Rng, deg: &[usize], ok: &dyn Fn(usize) -> bool| -> usize {
        for _ in 0..64 {
            let i = rng.random_range(0..deg.len());
            if ok(deg[i]) {
                return i;
            }
        }
        deg.iter().position(|&d| ok(d)).expect("target is feasible")
    };
    let cap = p.max_degree;
    while sum < target {
        let i = pick(rng, &deg, &|d| d < cap);
        deg[i] += 1;
        sum += 1;
    }
    while sum > target {
        let i = pick(rng, &deg, &|d| d > 1);
        deg[i] -= 1;
        sum -= 1;
    }
    if sum % 2 == 1 {
        diag.parity_adjusted = true;
        if deg.iter().any(|&d| d < cap) {
            let i = pick(rng, &deg, &|d| d < cap);
            deg[i] += 1;
        } else {
            let i = pick(rng, &deg, &|d| d > 1);
            deg[i] -= 1;
        }
    }
    deg
}

fn community_sizes(p: &GenParams, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let internal_max = ((1.0 - p.mixing_topology) * p.max_degree as f64).ceil() as usize;
    let min_c = p
        .min_community
        .unwrap_or((internal_max + 1).max(3))
        .min(p.n);
    let max_c = p.max_community.unwrap_or(5 * min_c).clamp(min_c, p.n);
    if p.n <= min_c {
        return vec![p.n];
    }
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < p.n {
        let s = power_law_sample(rng, min_c as f64, max_c as f64, p.community_exponent).round() as usize;
        let s = s.clamp(min_c, max_c);
        sizes.push(s);
        total += s;
    }
    while total > p.n {
        let i = (0..sizes.len()).max_by_key(|&i| (sizes[i], i)).unwrap();
        sizes[i] -= 1;
        total -= 1;
    }
    sizes.retain(|&s| s > 0);
    sizes
}

struct Pool {
    edges: Vec<(NodeId, NodeId)>,
}

fn key(u: NodeId, v: NodeId) -> (u32, u32) {
    if u < v {
        (u.0, v.0)
    } else {
        (v.0, u.0)
    }
}

/// Matches shuffled stubs pairwise; invalid pairs are repaired by swapping
/// with an accepted pair of the same pool, or dropped.
fn match_stubs(
    stubs: &mut [NodeId],
    rng: &mut ChaCha8Rng,
    existing: &mut HashSet<(u32, u32)>,
    valid: &dyn Fn(NodeId, NodeId) -> bool,
    dropped: &mut usize,
) -> Pool {
    stubs.shuffle(rng);
    let mut pool = Pool { edges: Vec::new() };
    let mut bad = Vec::new();
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        if u != v && valid(u, v) && existing.insert(key(u, v)) {
            pool.edges.push((u, v));
        } else {
            bad.push((u, v));
        }
    }
    let ok = |a: NodeId, b: NodeId, existing: &HashSet<(u32, u32)>| {
        a != b && valid(a, b) && !existing.contains(&key(a, b))
    };
    for (u, v) in bad {
        let mut fixed = false;
        for _ in 0..REPAIR_ATTEMPTS {
            if pool.edges.is_empty() {
                break;
            }
            let i = rng.random_range(0..pool.edges.len());
            let (x, y) = pool.edges[i];
            let (x, y) = if rng.random::<bool>() { (x, y) } else { (y, x) };
            if key(u, x) == key(v, y) || !ok(u, x, existing) || !ok(v, y, existing) {
                continue;
            }
            existing.remove(&key(x, y));
            pool.edges.swap_remove(i);
            existing.insert(key(u, x));
            existing.insert(key(v, y));
            pool.edges.push((u, x));
            pool.edges.push((v, y));
            fixed = true;
            break;
        }
        if !fixed {
            *dropped += 2;
        }
    }
    pool
}

pub(super) fn generate(p: &GenParams, connect: bool) -> Generated {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut diag = GenDiagnostics {
        nodes: p.n,
        mixing_weight: p.mixing_weight,
        ..Default::default()
    };
    let deg = degree_sequence(p, &mut rng, &mut diag);
    let sizes = community_sizes(p, &mut rng);
    diag.communities = sizes.len();

    // Split stubs and place nodes, largest degree first.
    let mut ext = vec![0usize; p.n];
    let mut int = vec![0usize; p.n];
    for v in 0..p.n {
        let want = p.mixing_topology * deg[v] as f64;
        let mut e = want.floor() as usize;
        if rng.random::<f64>() < want - want.floor() {
            e += 1;
        }
        ext[v] = e.min(deg[v]);
        int[v] = deg[v] - ext[v];
    }
    let mut order: Vec<usize> = (0..p.n).collect();
    order.shuffle(&mut rng);
    order.sort_by_key(|&v| std::cmp::Reverse(int[v]));
    let mut free: Vec<usize> = sizes.clone();
    let mut community = vec![0u32; p.n];
    let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); sizes.len()];
    for &v in &order {
        let fitting: Vec<usize> = (0..sizes.len())
            .filter(|&c| free[c] > 0 && sizes[c] > int[v])
            .collect();
        let c = if fitting.is_empty() {
            let c = (0..sizes.len())
                .filter(|&c| free[c] > 0)
                .max_by_key(|&c| (sizes[c], std::cmp::Reverse(c)))
                .unwrap();
            let cap = sizes[c] - 1;
            ext[v] += int[v] - cap;
            int[v] = cap;
            c
        } else {
            fitting[rng.random_range(0..fitting.len())]
        };
        free[c] -= 1;
        community[v] = c as u32;
        members[c].push(NodeId::from(v));
    }
    for m in &members {
        if m.iter().map(|v| int[v.index()]).sum::<usize>() % 2 == 1 {
            let v = *m.iter().find(|v| int[v.index()] > 0).unwrap();
            int[v.index()] -= 1;
            ext[v.index()] += 1;
        }
    }

    let mut existing = HashSet::new();
    let mut dropped = 0;
    let mut edges = Vec::new();
    for m in &members {
        let mut stubs: Vec<NodeId> = m
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, int[v.index()]))
            .collect();
        let pool = match_stubs(&mut stubs, &mut rng, &mut existing, &|_, _| true, &mut dropped);
        edges.extend(pool.edges);
    }
    let mut stubs: Vec<NodeId> = (0..p.n)
        .flat_map(|v| std::iter::repeat_n(NodeId::from(v), ext[v]))
        .collect();
    let cross = |a: NodeId, b: NodeId| community[a.index()] != community[b.index()] || members.len() == 1;
    let pool = match_stubs(&mut stubs, &mut rng, &mut existing, &cross, &mut dropped);
    edges.extend(pool.edges);
    diag.dropped_stubs = dropped;

    if connect {
        diag.bridges_added = bridge_components(p, &mut edges, &mut existing);
    }

    edges.sort_unstable();
    let mut degree = vec![0usize; p.n];
    let mut inter = 0;
    for &(u, v) in &edges {
        degree[u.index()] += 1;
        degree[v.index()] += 1;
        if community[u.index()] != community[v.index()] {
            inter += 1;
        }
    }
    diag.edges = edges.len();
    diag.mean_degree = 2.0 * edges.len() as f64 / p.n as f64;
    diag.max_degree = degree.iter().copied().max().unwrap_or(0);
    diag.inter_community_fraction = if edges.is_empty() {
        0.0
    } else {
        inter as f64 / edges.len() as f64
    };
    Generated {
        edges,
        diagnostics: diag,
    }
}

/// Joins every component to the largest one with one edge between
/// minimum-degree nodes below the cap. Returns the number of edges added.
fn bridge_components(
    p: &GenParams,
    edges: &mut Vec<(NodeId, NodeId)>,
    existing: &mut HashSet<(u32, u32)>,
) -> usize {
    let n = p.n;
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges.iter() {
        adj[u.index()].push(v);
        adj[v.index()].push(u);
    }
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<NodeId>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut members = Vec::new();
        while let Some(u) = stack.pop() {
            members.push(NodeId::from(u));
            for &v in &adj[u] {
                if comp[v.index()] == usize::MAX {
                    comp[v.index()] = id;
                    stack.push(v.index());
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    if comps.len() <= 1 {
        return 0;
    }
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut joined: Vec<NodeId> = comps[0].clone();
    let cap = p.max_degree;
    let mut added = 0;

    let lowest = |nodes: &[NodeId], degree: &[usize], skip: Option<NodeId>| -> Option<NodeId> {
        nodes
            .iter()
            .copied()
            .filter(|&v| degree[v.index()] < cap && Some(v) != skip)
            .min_by_key(|&v| (degree[v.index()], v))
    };

    for c in comps.iter().skip(1).rev() {
        match lowest(c, &degree, None) {
            Some(a) => {
                let x = lowest(&joined, &degree, None).expect("joined part has spare degree");
                edges.push(if a < x { (a, x) } else { (x, a) });
                existing.insert(key(a, x));
                degree[a.index()] += 1;
                degree[x.index()] += 1;
                added += 1;
            }
            None => {
                // Every node is at the cap: replace one internal edge (a, b)
                // by (a, x) and (b, y).
                let a = c[0];
                let b = adj[a.index()][0];
                let x = lowest(&joined, &degree, None).expect("joined part has spare degree");
                degree[x.index()] += 1;
                let y = lowest(&joined, &degree, Some(x)).expect("joined part has spare degree");
                degree[y.index()] += 1;
                let k = key(a, b);
                edges.retain(|&(u, v)| key(u, v) != k);
                existing.remove(&k);
                for (s, t) in [(a, x), (b, y)] {
                    edges.push(if s < t { (s, t) } else { (t, s) });
                    existing.insert(key(s, t));
                }
                added += 2;
            }
        }
        joined.extend_from_slice(c);
    }
    added
}
