use std::sync::Arc;

use super::{validate_layers, AdhocGraph, DistanceOracle, HopRow, LayerMapping, NodeId, SocialGraph};
use crate::error::Result;

/// A social layer placed on an ad-hoc layer: everything needed to price a
/// message between two social nodes.
#[derive(Debug)]
pub struct Instance {
    social: SocialGraph,
    mapping: LayerMapping,
    oracle: DistanceOracle,
}

impl Instance {
    /// Fails when the layers or the mapping disagree on the node count.
    pub fn new(social: SocialGraph, adhoc: AdhocGraph, mapping: LayerMapping) -> Result<Self> {
        validate_layers(&social, &adhoc, &mapping)?;
        Ok(Instance {
            social,
            mapping,
            oracle: DistanceOracle::new(Arc::new(adhoc)),
        })
    }

    pub fn with_oracle(social: SocialGraph, oracle: DistanceOracle, mapping: LayerMapping) -> Result<Self> {
        validate_layers(&social, oracle.adhoc(), &mapping)?;
        Ok(Instance {
            social,
            mapping,
            oracle,
        })
    }

    pub fn social(&self) -> &SocialGraph {
        &self.social
    }

    pub fn adhoc(&self) -> &AdhocGraph {
        self.oracle.adhoc()
    }

    pub fn mapping(&self) -> &LayerMapping {
        &self.mapping
    }

    pub fn oracle(&self) -> &DistanceOracle {
        &self.oracle
    }

    pub fn node_count(&self) -> usize {
        self.social.node_count()
    }

    /// Hop distance between the ad-hoc hosts of two social nodes.
    #[inline]
    pub fn hops(&self, a: NodeId, b: NodeId) -> Option<u32> {
        self.oracle
            .hop_distance(self.mapping.adhoc_of(a), self.mapping.adhoc_of(b))
    }

    /// Distances from the host of social node `a` to the hosts of all social
    /// nodes.
    pub fn hop_row(&self, a: NodeId) -> HopRow<'_> {
        HopRow {
            row: self.oracle.row(self.mapping.adhoc_of(a)),
            to_adhoc: self.mapping.as_slice(),
        }
    }

    /// Same layers with a different social graph (e.g. new probabilities).
    pub fn replace_social(self, social: SocialGraph) -> Result<Self> {
        Instance::with_oracle(social, self.oracle, self.mapping)
    }
}
