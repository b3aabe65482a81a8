use serde::Serialize;

use super::{AdhocGraph, LayerMapping, NodeId, SocialGraph};
use crate::error::{Error, Result};

/// Non-fatal findings about a pair of layers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LayerDiagnostics {
    /// Component sizes of the ad-hoc layer, largest first.
    pub adhoc_components: Vec<usize>,
    /// Social nodes without any friend.
    pub isolated_social: Vec<NodeId>,
}

impl LayerDiagnostics {
    pub fn is_clean(&self) -> bool {
        self.adhoc_components.len() <= 1 && self.isolated_social.is_empty()
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.adhoc_components.len() > 1 {
            out.push(format!(
                "ad-hoc layer has {} components (sizes {:?})",
                self.adhoc_components.len(),
                self.adhoc_components
            ));
        }
        if !self.isolated_social.is_empty() {
            out.push(format!(
                "{} social nodes have no friends",
                self.isolated_social.len()
            ));
        }
        out
    }
}

/// Checks that the layers can be combined. A node-count mismatch is an error;
/// disconnection and isolated nodes are reported as diagnostics.
pub fn validate_layers(
    social: &SocialGraph,
    adhoc: &AdhocGraph,
    mapping: &LayerMapping,
) -> Result<LayerDiagnostics> {
    if social.node_count() != adhoc.node_count() {
        return Err(Error::NodeCountMismatch {
            social: social.node_count(),
            adhoc: adhoc.node_count(),
        });
    }
    if mapping.len() != social.node_count() {
        return Err(Error::Mapping(format!(
            "mapping covers {} nodes, layers have {}",
            mapping.len(),
            social.node_count()
        )));
    }
    Ok(LayerDiagnostics {
        adhoc_components: adhoc.component_sizes(),
        isolated_social: social
            .nodes()
            .filter(|&v| social.friends(v).is_empty())
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: u32) -> Vec<(NodeId, NodeId)> {
        (0..n).map(|i| (NodeId(i), NodeId((i + 1) % n))).collect()
    }

    #[test]
    fn matched_layers_are_clean() {
        let social = SocialGraph::from_edges(8, ring(8).into_iter().map(|(u, v)| (u, v, None))).unwrap();
        let adhoc = AdhocGraph::from_edges(8, ring(8)).unwrap();
        let d = validate_layers(&social, &adhoc, &LayerMapping::identity(8)).unwrap();
        assert!(d.is_clean());
        assert!(d.warnings().is_empty());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let social = SocialGraph::from_edges(8, []).unwrap();
        let adhoc = AdhocGraph::from_edges(7, []).unwrap();
        assert!(matches!(
            validate_layers(&social, &adhoc, &LayerMapping::identity(8)),
            Err(Error::NodeCountMismatch { social: 8, adhoc: 7 })
        ));
    }

    #[test]
    fn reports_components() {
        let social = SocialGraph::from_edges(5, ring(5).into_iter().map(|(u, v)| (u, v, None))).unwrap();
        let adhoc = AdhocGraph::from_edges(
            5,
            [(NodeId(0), NodeId(1)), (NodeId(1), NodeId(2)), (NodeId(3), NodeId(4))],
        )
        .unwrap();
        let d = validate_layers(&social, &adhoc, &LayerMapping::identity(5)).unwrap();
        assert_eq!(d.adhoc_components, vec![3, 2]);
        assert_eq!(d.warnings().len(), 1);
    }
}
