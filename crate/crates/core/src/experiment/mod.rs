//! Experiment configuration and the drivers behind the `experiment`
//! subcommand. Every driver is a pure function of its configuration.

mod figs;

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub use figs::{
    compare_overhead, fig3, fig4, fig5, fig6, write_rows, Comparison, CsvRow, Fig3Row, Fig4Row,
    Fig5Row, Fig6Row,
};

use crate::agents::AsmtcParams;
use crate::diffusion::TrialPool;
use crate::error::{Error, Result};
use crate::graph::io::{load_adhoc, load_mapping, load_social, SocialFormat};
use crate::graph::{validate_layers, Instance, LayerDiagnostics, LayerMapping, SocialGraph};
use crate::kv::KeyValues;
use crate::netgen::{
    assign_probabilities, generate_manet, generate_social, random_mapping, GenDiagnostics,
    GenParams, ProbabilityModel,
};
use crate::seeding::{DeploymentCostModel, SelectionConfig};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SocialSource {
    File { path: PathBuf, format: SocialFormat },
    Generate(GenParams),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum AdhocSource {
    File(PathBuf),
    Generate(GenParams),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum MappingSource {
    Identity,
    Random(u64),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub social: SocialSource,
    pub adhoc: AdhocSource,
    pub mapping: MappingSource,
    /// Applied to every social edge when set; otherwise only graphs without
    /// probabilities get [`ExperimentConfig::DEFAULT_PROBABILITY`].
    pub probability: Option<ProbabilityModel>,
    pub k: usize,
    pub trials: u32,
    pub seed: u64,
    pub asmtc: AsmtcParams,
    pub deploy: DeploymentCostModel,
    pub selection: SelectionConfig,
    pub out: PathBuf,
    pub fig3_k: Vec<usize>,
    pub fig4_n: Vec<usize>,
    pub fig5_fractions: Vec<f64>,
    pub fig6_k: Vec<usize>,
    /// `(avg_degree, max_degree)` pairs for the ad-hoc layer.
    pub fig6_degrees: Vec<(f64, usize)>,
}

const GENERAL_KEYS: [&str; 20] = [
    "seed",
    "n",
    "k",
    "trials",
    "out",
    "social_file",
    "social_format",
    "adhoc_file",
    "mapping",
    "mapping_file",
    "probability",
    "broadcast",
    "returns",
    "candidate_cap",
    "pool_mode",
    "fig3_k",
    "fig4_n",
    "fig5_fractions",
    "fig6_k",
    "fig6_degrees",
];

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::from_kv(&KeyValues::default()).expect("defaults are valid")
    }
}

impl ExperimentConfig {
    pub const DEFAULT_PROBABILITY: ProbabilityModel = ProbabilityModel::Constant(0.05);

    /// Every key the configuration understands.
    pub fn known_keys() -> Vec<String> {
        let mut keys: Vec<String> = GENERAL_KEYS.iter().map(|k| k.to_string()).collect();
        keys.extend(AsmtcParams::KEYS.iter().map(|k| k.to_string()));
        for prefix in ["social_", "manet_"] {
            keys.extend(GenParams::KEYS.iter().map(|k| format!("{prefix}{k}")));
            keys.extend(["xi1", "xi2", "alpha", "alpha_max"].iter().map(|k| format!("{prefix}{k}")));
        }
        keys
    }

    /// Reads a flat key-value configuration over the defaults: `n = 1000`,
    /// `k = 10`, `trials = 1000`, a generated friendship graph of mean degree
    /// 8 on a generated ad-hoc layer of mean degree 10 (cap 15), random
    /// mapping, constant probability 0.05.
    pub fn from_kv(kv: &KeyValues) -> Result<Self> {
        let known = Self::known_keys();
        let known: Vec<&str> = known.iter().map(String::as_str).collect();
        kv.reject_unknown(&known)?;

        let seed: u64 = kv.get_or("seed", 1)?;
        let n: usize = kv.get_or("n", 1000)?;
        let mut kv = kv.clone();
        for (prefix, offset) in [("social_", 1u64), ("manet_", 0)] {
            let nk = format!("{prefix}n");
            if !kv.contains(&nk) {
                kv.set(&nk, n);
            }
            let sk = format!("{prefix}seed");
            if !kv.contains(&sk) {
                kv.set(&sk, seed.wrapping_add(offset));
            }
        }
        if !["social_avg_degree", "social_alpha"].iter().any(|k| kv.contains(k)) {
            kv.set("social_avg_degree", 8);
        }
        if !["social_max_degree", "social_alpha_max"].iter().any(|k| kv.contains(k)) {
            kv.set("social_max_degree", 50.min(n.saturating_sub(1)));
        }

        let social = match kv.raw("social_file") {
            Some(path) => SocialSource::File {
                path: path.into(),
                format: kv.get_or("social_format", SocialFormat::Directed)?,
            },
            None => SocialSource::Generate(GenParams::from_kv(&kv, "social_")?),
        };
        let adhoc = match kv.raw("adhoc_file") {
            Some(path) => AdhocSource::File(path.into()),
            None => AdhocSource::Generate(GenParams::from_kv(&kv, "manet_")?),
        };
        let mapping = match (kv.raw("mapping_file"), kv.raw("mapping")) {
            (Some(path), _) => MappingSource::File(path.into()),
            (None, None | Some("random")) => MappingSource::Random(seed.wrapping_add(2)),
            (None, Some("identity")) => MappingSource::Identity,
            (None, Some(x)) => return Err(Error::domain(format!("unknown mapping `{x}`"))),
        };
        let defaults = DeploymentCostModel::default();
        let config = ExperimentConfig {
            social,
            adhoc,
            mapping,
            probability: kv.get("probability")?,
            k: kv.get_or("k", 10)?,
            trials: kv.get_or("trials", 1000)?,
            seed,
            asmtc: AsmtcParams::from_kv(&kv, "")?,
            deploy: DeploymentCostModel {
                broadcast: kv.get_or("broadcast", defaults.broadcast)?,
                returns: kv.get_or("returns", defaults.returns)?,
            },
            selection: SelectionConfig {
                candidate_cap: crate::agents::parse_limit(&kv, "candidate_cap")?,
                candidates: None,
                pool_mode: kv.get_or("pool_mode", Default::default())?,
            },
            out: kv.get_or("out", PathBuf::from("out"))?,
            fig3_k: kv.get_list("fig3_k")?.unwrap_or_else(|| vec![1, 2, 5, 10]),
            fig4_n: kv.get_list("fig4_n")?.unwrap_or_else(|| vec![250, 500, 1000]),
            fig5_fractions: kv
                .get_list("fig5_fractions")?
                .unwrap_or_else(|| vec![0.0, 0.125, 0.25, 0.5, 1.0]),
            fig6_k: kv.get_list("fig6_k")?.unwrap_or_else(|| vec![5, 10]),
            fig6_degrees: match kv.get_list::<String>("fig6_degrees")? {
                None => vec![(10.0, 15), (45.0, 50)],
                Some(items) => items
                    .iter()
                    .map(|s| parse_degree_pair(s))
                    .collect::<Result<_>>()?,
            },
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::domain("k must be at least 1"));
        }
        if self.trials == 0 {
            return Err(Error::domain("trials must be at least 1"));
        }
        if let Some(p) = &self.probability {
            p.validate()?;
        }
        if self.fig5_fractions.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(Error::domain("fig5_fractions must lie in [0, 1]"));
        }
        for path in self.input_paths() {
            if !path.exists() {
                return Err(Error::domain(format!("input file {} not found", path.display())));
            }
        }
        Ok(())
    }

    fn input_paths(&self) -> Vec<&Path> {
        let mut out = Vec::new();
        if let SocialSource::File { path, .. } = &self.social {
            out.push(path.as_path());
        }
        if let AdhocSource::File(path) = &self.adhoc {
            out.push(path.as_path());
        }
        if let MappingSource::File(path) = &self.mapping {
            out.push(path.as_path());
        }
        out
    }

    /// The shared trial pool of every driver.
    pub fn pool(&self) -> TrialPool {
        TrialPool::new(self.seed.wrapping_add(3), self.trials)
    }

    /// Same configuration with both generated layers resized to `n`.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        let mut c = self.clone();
        match (&mut c.social, &mut c.adhoc) {
            (SocialSource::Generate(s), AdhocSource::Generate(a)) => {
                s.n = n;
                s.max_degree = s.max_degree.min(n - 1);
                a.n = n;
            }
            _ => return Err(Error::domain("resizing needs generated layers")),
        }
        Ok(c)
    }

    /// Same configuration with a different generated ad-hoc degree.
    pub fn with_adhoc_degree(&self, avg: f64, max: usize) -> Result<Self> {
        let mut c = self.clone();
        match &mut c.adhoc {
            AdhocSource::Generate(a) => {
                a.avg_degree = avg;
                a.max_degree = max;
            }
            AdhocSource::File(_) => return Err(Error::domain("degree sweep needs a generated ad-hoc layer")),
        }
        Ok(c)
    }

    pub fn build_social(&self) -> Result<(SocialGraph, Option<GenDiagnostics>)> {
        let (social, diag) = match &self.social {
            SocialSource::File { path, format } => {
                (load_social(BufReader::new(File::open(path)?), *format)?, None)
            }
            SocialSource::Generate(p) => {
                let (g, d) = generate_social(p)?;
                (g, Some(d))
            }
        };
        let social = match (&self.probability, social.has_probabilities()) {
            (Some(model), _) => assign_probabilities(&social, model, self.seed.wrapping_add(4))?,
            (None, true) => social,
            (None, false) => {
                assign_probabilities(&social, &Self::DEFAULT_PROBABILITY, self.seed.wrapping_add(4))?
            }
        };
        Ok((social, diag))
    }

    /// Both layers, the mapping, and their diagnostics.
    pub fn build(&self) -> Result<Built> {
        let (social, social_diag) = self.build_social()?;
        self.build_on(social, social_diag)
    }

    /// Places an already built friendship graph on this configuration's
    /// ad-hoc layer.
    pub fn build_on(&self, social: SocialGraph, social_diag: Option<GenDiagnostics>) -> Result<Built> {
        let (adhoc, manet_diag) = match &self.adhoc {
            AdhocSource::File(path) => (load_adhoc(BufReader::new(File::open(path)?))?, None),
            AdhocSource::Generate(p) => {
                let p = GenParams {
                    n: social.node_count(),
                    ..p.clone()
                };
                let (g, d) = generate_manet(&p)?;
                (g, Some(d))
            }
        };
        let mapping = match &self.mapping {
            MappingSource::Identity => LayerMapping::identity(social.node_count()),
            MappingSource::Random(seed) => random_mapping(social.node_count(), *seed),
            MappingSource::File(path) => {
                load_mapping(BufReader::new(File::open(path)?), &social, &adhoc)?
            }
        };
        let layers = validate_layers(&social, &adhoc, &mapping)?;
        Ok(Built {
            instance: Instance::new(social, adhoc, mapping)?,
            social_diag,
            manet_diag,
            layers,
        })
    }
}

fn parse_degree_pair(s: &str) -> Result<(f64, usize)> {
    let bad = || Error::domain(format!("expected `avg/max` degree pair, got `{s}`"));
    let (a, m) = s.split_once('/').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, m.trim().parse().map_err(|_| bad())?))
}

pub struct Built {
    pub instance: Instance,
    pub social_diag: Option<GenDiagnostics>,
    pub manet_diag: Option<GenDiagnostics>,
    pub layers: LayerDiagnostics,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = ExperimentConfig::default();
        assert_eq!((c.k, c.trials, c.seed), (10, 1000, 1));
        match &c.adhoc {
            AdhocSource::Generate(p) => {
                assert_eq!((p.n, p.avg_degree, p.max_degree), (1000, 10.0, 15));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(c.fig6_degrees, vec![(10.0, 15), (45.0, 50)]);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        let kv = KeyValues::parse("bogus = 1").unwrap();
        assert!(ExperimentConfig::from_kv(&kv).is_err());
        let kv = KeyValues::parse("k = 0").unwrap();
        assert!(ExperimentConfig::from_kv(&kv).is_err());
        let kv = KeyValues::parse("social_file = /nonexistent/file").unwrap();
        assert!(ExperimentConfig::from_kv(&kv).is_err());
    }

    #[test]
    fn build_small_generated_pair() {
        let kv = KeyValues::parse("n = 60\nmanet_avg_degree = 4\nmanet_max_degree = 8\nsocial_max_degree = 10\nprobability = constant:0.2").unwrap();
        let c = ExperimentConfig::from_kv(&kv).unwrap();
        let b = c.build().unwrap();
        assert_eq!(b.instance.node_count(), 60);
        assert_eq!(b.layers.adhoc_components, vec![60]);
        assert!(b.instance.social().edges().all(|(_, _, p)| p == Some(0.2)));
        let again = c.build().unwrap();
        assert_eq!(
            b.instance.adhoc().edges().collect::<Vec<_>>(),
            again.instance.adhoc().edges().collect::<Vec<_>>()
        );
    }
}
