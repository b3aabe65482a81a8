//! Cross-layer influence maximization for mobile social networks.
//!
//! A social layer (directed friendships with influence probabilities) sits on
//! top of an ad-hoc radio layer where every message costs one transmission per
//! hop. Seed selection by greedy / CELF is priced in hops, and the agent
//! selection heuristic (election phase followed by local reduction) picks a
//! representative for every node so that influence messages travel between
//! agents instead of between the friends themselves.

pub mod agents;
pub mod diffusion;
pub mod error;
pub mod experiment;
pub mod fixtures;
pub mod graph;
pub mod kv;
pub mod netgen;
mod par;
pub mod seeding;

pub use error::{Error, Result};
pub use graph::{AdhocGraph, DistanceOracle, Instance, LayerMapping, NodeId, SocialGraph};
