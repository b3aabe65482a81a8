use crosslayer::netgen::{generate_manet, generate_social, random_mapping, GenParams};
use crosslayer::NodeId;

fn connected(g: &crosslayer::AdhocGraph) -> bool {
    let mut seen = vec![false; g.node_count()];
    let mut stack = vec![NodeId(0)];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in g.neighbors(x) {
            if !seen[y.index()] {
                seen[y.index()] = true;
                stack.push(y);
            }
        }
    }
    seen.iter().all(|&s| s)
}

#[test]
fn default_manet_matches_the_table_row() {
    let (g, d) = generate_manet(&GenParams::default()).unwrap();
    assert_eq!(g.node_count(), 1000);
    assert!((9.0..=11.0).contains(&g.mean_degree()), "mean {}", g.mean_degree());
    assert!(g.nodes().all(|v| g.neighbors(v).len() <= 15));
    assert!(connected(&g));
    assert_eq!(d.edges, g.edge_count());
}

#[test]
fn dense_manet_keeps_its_cap() {
    let p = GenParams {
        avg_degree: 45.0,
        max_degree: 50,
        ..GenParams::default()
    };
    let (g, _) = generate_manet(&p).unwrap();
    assert!((40.5..=49.5).contains(&g.mean_degree()), "mean {}", g.mean_degree());
    assert!(g.nodes().all(|v| g.neighbors(v).len() <= 50));
    assert!(connected(&g));
}

#[test]
fn generation_is_deterministic_per_seed() {
    let p = GenParams::default();
    let (a, _) = generate_manet(&p).unwrap();
    let (b, _) = generate_manet(&p).unwrap();
    assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
    let (c, _) = generate_manet(&GenParams { seed: 2, ..p }).unwrap();
    assert_ne!(a.edges().collect::<Vec<_>>(), c.edges().collect::<Vec<_>>());
}

#[test]
fn mixing_fraction_tracks_the_parameter() {
    for (mu, n, seed) in [(0.1, 1000, 1), (0.3, 1000, 2), (0.1, 3000, 3), (0.5, 2000, 4)] {
        let p = GenParams {
            n,
            mixing_topology: mu,
            seed,
            ..GenParams::default()
        };
        let (_, d) = generate_manet(&p).unwrap();
        assert!(
            (d.inter_community_fraction - mu).abs() <= 0.05,
            "mu {mu}: {}",
            d.inter_community_fraction
        );
        let (_, d) = generate_social(&p).unwrap();
        assert!((d.inter_community_fraction - mu).abs() <= 0.05);
    }
}

#[test]
fn mapping_positions_are_uniform() {
    let n = 10_000usize;
    let seeds = 100;
    let mut sums = vec![0f64; n];
    for seed in 0..seeds {
        let m = random_mapping(n, seed);
        for (pos, sum) in sums.iter_mut().enumerate() {
            *sum += m.adhoc_of(NodeId::from(pos)).index() as f64;
        }
    }
    let center = (n - 1) as f64 / 2.0;
    let sigma = (((n * n - 1) as f64 / 12.0) / seeds as f64).sqrt();
    let z: Vec<f64> = sums.iter().map(|s| (s / seeds as f64 - center).abs() / sigma).collect();
    let beyond3 = z.iter().filter(|&&z| z > 3.0).count();
    // A fair shuffle leaves about 0.27% of positions beyond 3 sigma.
    assert!(beyond3 as f64 <= 0.005 * n as f64, "{beyond3} positions beyond 3 sigma");
    assert!(z.iter().all(|&z| z <= 5.0));
    let grand = sums.iter().sum::<f64>() / (seeds as usize * n) as f64;
    assert!((grand - center).abs() < 1e-6);
}
