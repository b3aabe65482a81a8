//! Synthetic topologies: community-structured power-law graphs for the
//! ad-hoc layer (and social analogs), random layer mappings, and edge
//! probability models for social graphs that come without probabilities.

mod lfr;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diffusion::unit_hash;
use crate::error::{Error, Result};
use crate::graph::{AdhocGraph, LayerMapping, NodeId, SocialGraph};
use crate::kv::KeyValues;

pub use lfr::GenDiagnostics;

/// Generator parameters, named after the usual benchmark settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenParams {
    pub n: usize,
    pub avg_degree: f64,
    pub max_degree: usize,
    /// Exponent of the degree distribution, `P(k) ~ k^-x`.
    pub degree_exponent: f64,
    /// Exponent of the community size distribution.
    pub community_exponent: f64,
    /// Fraction of each node's links that leave its community.
    pub mixing_topology: f64,
    /// Recorded for completeness; links are unweighted.
    pub mixing_weight: f64,
    pub min_community: Option<usize>,
    pub max_community: Option<usize>,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 1000,
            avg_degree: 10.0,
            max_degree: 15,
            degree_exponent: 2.0,
            community_exponent: 1.0,
            mixing_topology: 0.1,
            mixing_weight: 0.1,
            min_community: None,
            max_community: None,
            seed: 1,
        }
    }
}

impl GenParams {
    pub const KEYS: [&'static str; 10] = [
        "n",
        "avg_degree",
        "max_degree",
        "degree_exponent",
        "community_exponent",
        "mu_t",
        "mu_w",
        "min_community",
        "max_community",
        "seed",
    ];

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain(format!("generator needs n >= 2, got {}", self.n)));
        }
        if !(self.avg_degree > 0.0 && self.avg_degree <= self.max_degree as f64) {
            return Err(Error::domain(format!(
                "need 0 < avg_degree <= max_degree, got {} and {}",
                self.avg_degree, self.max_degree
            )));
        }
        if self.max_degree >= self.n {
            return Err(Error::domain(format!(
                "max_degree {} must be below n = {}",
                self.max_degree, self.n
            )));
        }
        if !(self.degree_exponent > 0.0 && self.community_exponent > 0.0) {
            return Err(Error::domain("exponents must be positive"));
        }
        for (name, mu) in [("mu_t", self.mixing_topology), ("mu_w", self.mixing_weight)] {
            if !(0.0..=1.0).contains(&mu) {
                return Err(Error::domain(format!("{name} = {mu} outside [0, 1]")));
            }
        }
        if let (Some(lo), Some(hi)) = (self.min_community, self.max_community) {
            if lo == 0 || lo > hi {
                return Err(Error::domain("need 0 < min_community <= max_community"));
            }
        }
        Ok(())
    }

    /// Reads `prefix`-qualified keys (`n`, `avg_degree`, `mu_t`, ...) over
    /// the defaults. The table aliases `xi1`, `xi2` and `alpha`/`alpha_max`
    /// are accepted too.
    pub fn from_kv(kv: &KeyValues, prefix: &str) -> Result<Self> {
        let key = |k: &str| format!("{prefix}{k}");
        let first = |names: &[&str]| -> Option<String> {
            names.iter().map(|k| key(k)).find(|k| kv.contains(k))
        };
        let d = GenParams::default();
        let get_f = |names: &[&str], dflt: f64| -> Result<f64> {
            match first(names) {
                Some(k) => Ok(kv.get(&k)?.unwrap()),
                None => Ok(dflt),
            }
        };
        let get_u = |names: &[&str], dflt: usize| -> Result<usize> {
            match first(names) {
                Some(k) => Ok(kv.get(&k)?.unwrap()),
                None => Ok(dflt),
            }
        };
        Ok(GenParams {
            n: get_u(&["n"], d.n)?,
            avg_degree: get_f(&["avg_degree", "alpha"], d.avg_degree)?,
            max_degree: get_u(&["max_degree", "alpha_max"], d.max_degree)?,
            degree_exponent: get_f(&["degree_exponent", "xi1"], d.degree_exponent)?,
            community_exponent: get_f(&["community_exponent", "xi2"], d.community_exponent)?,
            mixing_topology: get_f(&["mu_t"], d.mixing_topology)?,
            mixing_weight: get_f(&["mu_w"], d.mixing_weight)?,
            min_community: kv.get(&key("min_community"))?,
            max_community: kv.get(&key("max_community"))?,
            seed: kv.get(&key("seed"))?.unwrap_or(d.seed),
        })
    }
}

/// A community-structured MANET: connected, degree-capped, unweighted.
pub fn generate_manet(params: &GenParams) -> Result<(AdhocGraph, GenDiagnostics)> {
    params.validate()?;
    let out = lfr::generate(params, true);
    let g = AdhocGraph::from_edges(params.n, out.edges.iter().copied())?;
    Ok((g, out.diagnostics))
}

/// The same generator used as a friendship graph: every link becomes a pair
/// of directed edges without probabilities. No connectivity is enforced.
pub fn generate_social(params: &GenParams) -> Result<(SocialGraph, GenDiagnostics)> {
    params.validate()?;
    let out = lfr::generate(params, false);
    let edges = out
        .edges
        .iter()
        .flat_map(|&(u, v)| [(u, v, None), (v, u, None)]);
    let g = SocialGraph::from_edges(params.n, edges)?;
    Ok((g, out.diagnostics))
}

/// Uniform random bijection between the layers.
pub fn random_mapping(n: usize, seed: u64) -> LayerMapping {
    let mut perm: Vec<NodeId> = (0..n).map(NodeId::from).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    LayerMapping::from_permutation(perm).expect("a shuffle is a permutation")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ProbabilityModel {
    Constant(f64),
    /// `p(u, v) = 1 / indegree(v)`.
    WeightedCascade,
    /// Each edge draws uniformly from the listed values.
    Trivalency(Vec<f64>),
}

impl ProbabilityModel {
    pub fn validate(&self) -> Result<()> {
        let bad = |p: f64| !(0.0..=1.0).contains(&p);
        match self {
            ProbabilityModel::Constant(p) if bad(*p) => {
                Err(Error::domain(format!("constant probability {p} outside [0, 1]")))
            }
            ProbabilityModel::Trivalency(ps) if ps.is_empty() || ps.iter().any(|&p| bad(p)) => {
                Err(Error::domain("trivalency needs a non-empty list of probabilities in [0, 1]"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ProbabilityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbabilityModel::Constant(p) => write!(f, "constant:{p}"),
            ProbabilityModel::WeightedCascade => write!(f, "wc"),
            ProbabilityModel::Trivalency(ps) => {
                let items: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "trivalency:{}", items.join("/"))
            }
        }
    }
}

impl FromStr for ProbabilityModel {
    type Err = Error;

    /// `constant:0.1`, `wc`, `trivalency` or `trivalency:0.1/0.01/0.001`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let model = match (kind, arg) {
            ("constant", Some(a)) => ProbabilityModel::Constant(
                a.parse()
                    .map_err(|_| Error::domain(format!("bad probability `{a}`")))?,
            ),
            ("wc" | "weighted-cascade", None) => ProbabilityModel::WeightedCascade,
            ("trivalency", None) => ProbabilityModel::Trivalency(vec![0.1, 0.01, 0.001]),
            ("trivalency", Some(a)) => ProbabilityModel::Trivalency(
                a.split(['/', ' '])
                    .filter(|x| !x.is_empty())
                    .map(|x| {
                        x.parse()
                            .map_err(|_| Error::domain(format!("bad probability `{x}`")))
                    })
                    .collect::<Result<_>>()?,
            ),
            _ => return Err(Error::domain(format!("unknown probability model `{s}`"))),
        };
        model.validate()?;
        Ok(model)
    }
}

/// Overwrites every edge probability according to `model`. Trivalency draws
/// are keyed by `(seed, u, v)`, so they do not depend on edge order.
pub fn assign_probabilities(
    social: &SocialGraph,
    model: &ProbabilityModel,
    seed: u64,
) -> Result<SocialGraph> {
    model.validate()?;
    match model {
        ProbabilityModel::Constant(p) => social.map_probabilities(|_, _, _| *p),
        ProbabilityModel::WeightedCascade => {
            social.map_probabilities(|_, _, v| 1.0 / social.in_degree(v) as f64)
        }
        ProbabilityModel::Trivalency(values) => social.map_probabilities(|_, u, v| {
            let x = unit_hash(seed ^ 0x7452_6976_616c_656e, u64::MAX, u, v);
            values[((x * values.len() as f64) as usize).min(values.len() - 1)]
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_single_edge() {
        let p = GenParams {
            n: 2,
            avg_degree: 1.0,
            max_degree: 1,
            ..GenParams::default()
        };
        let (g, d) = generate_manet(&p).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(NodeId(0), NodeId(1))]);
        assert_eq!(d.bridges_added, 0);
    }

    #[test]
    fn rejects_bad_params() {
        let mut p = GenParams {
            n: 1,
            ..GenParams::default()
        };
        assert!(generate_manet(&p).is_err());
        p.n = 100;
        p.avg_degree = 20.0;
        assert!(generate_manet(&p).is_err());
        p.avg_degree = 5.0;
        p.mixing_topology = 1.5;
        assert!(generate_manet(&p).is_err());
    }

    #[test]
    fn params_from_config_text() {
        let kv = KeyValues::parse("n = 500\nalpha = 45\nalpha_max = 50\nxi1 = 2\nmu_t = 0.2\nseed = 9").unwrap();
        let p = GenParams::from_kv(&kv, "").unwrap();
        assert_eq!(p.n, 500);
        assert_eq!(p.avg_degree, 45.0);
        assert_eq!(p.max_degree, 50);
        assert_eq!(p.mixing_topology, 0.2);
        assert_eq!(p.seed, 9);
    }

    #[test]
    fn mapping_of_one_node_is_identity() {
        assert!(random_mapping(1, 3).is_identity());
        assert_eq!(random_mapping(5, 7), random_mapping(5, 7));
    }

    #[test]
    fn probability_models() {
        let star = SocialGraph::from_edges(
            5,
            (1..5).map(|i| (NodeId(i), NodeId(0), None)),
        )
        .unwrap();
        let g = assign_probabilities(&star, &ProbabilityModel::Constant(0.1), 0).unwrap();
        assert!(g.edges().all(|(_, _, p)| p == Some(0.1)));
        let g = assign_probabilities(&star, &ProbabilityModel::WeightedCascade, 0).unwrap();
        assert!(g.edges().all(|(_, _, p)| p == Some(0.25)));
        let tri = ProbabilityModel::Trivalency(vec![0.1, 0.01, 0.001]);
        let a = assign_probabilities(&star, &tri, 42).unwrap();
        assert_eq!(a, assign_probabilities(&star, &tri, 42).unwrap());
        assert!(a.edges().all(|(_, _, p)| [0.1, 0.01, 0.001].contains(&p.unwrap())));
    }

    #[test]
    fn probability_model_syntax() {
        assert_eq!("constant:0.05".parse::<ProbabilityModel>().unwrap(), ProbabilityModel::Constant(0.05));
        assert_eq!("wc".parse::<ProbabilityModel>().unwrap(), ProbabilityModel::WeightedCascade);
        assert_eq!(
            "trivalency:0.2/0.02".parse::<ProbabilityModel>().unwrap(),
            ProbabilityModel::Trivalency(vec![0.2, 0.02])
        );
        assert!("constant:2".parse::<ProbabilityModel>().is_err());
        assert!("lt".parse::<ProbabilityModel>().is_err());
    }
}
