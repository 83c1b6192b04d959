//! The JSON spanner artifact: an edge list keyed by the instance's content
//! hash so `verify` can refuse artifacts that were built for something else.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use tcspan::core::EdgeId;
use tcspan::reach::Spanner;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArtifactError {
    /// Structural problems: not valid for any instance. Exit code 2 territory.
    #[error("malformed spanner artifact: {0}")]
    Malformed(String),
    /// A fine artifact for a different instance. Exit code 1 territory.
    #[error("spanner was built for instance {artifact}, but the graph hashes to {instance}")]
    WrongInstance { artifact: String, instance: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpannerArtifact {
    pub format: u32,
    pub instance_hash: String,
    pub algorithm: String,
    pub size: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SpannerArtifact {
    pub fn new(algorithm: &str, spanner: &Spanner) -> SpannerArtifact {
        SpannerArtifact {
            format: 1,
            instance_hash: format!("{:016x}", spanner.instance_hash),
            algorithm: algorithm.to_string(),
            size: spanner.edges.len(),
            edges: spanner.edges.iter().map(|e| e.endpoints()).collect(),
        }
    }

    /// Rebuilds the spanner after checking it belongs to the instance at hand.
    pub fn to_spanner(&self, instance_hash: u64, n: usize) -> Result<Spanner, ArtifactError> {
        if self.format != 1 {
            return Err(ArtifactError::Malformed(format!("unknown format version {}", self.format)));
        }
        let recorded = u64::from_str_radix(&self.instance_hash, 16)
            .map_err(|_| ArtifactError::Malformed(format!("bad instance hash {:?}", self.instance_hash)))?;
        if recorded != instance_hash {
            return Err(ArtifactError::WrongInstance {
                artifact: self.instance_hash.clone(),
                instance: format!("{instance_hash:016x}"),
            });
        }
        let mut edges = std::collections::BTreeSet::new();
        for &(u, v) in &self.edges {
            if u == v || u >= n || v >= n {
                return Err(ArtifactError::Malformed(format!(
                    "edge ({u}, {v}) does not fit an instance on {n} vertices"
                )));
            }
            if !edges.insert(EdgeId::new(u, v)) {
                return Err(ArtifactError::Malformed(format!("duplicate edge ({u}, {v})")));
            }
        }
        if edges.len() != self.size {
            return Err(ArtifactError::Malformed(format!(
                "size field says {} but {} edges are listed",
                self.size,
                edges.len()
            )));
        }
        Ok(Spanner { instance_hash, edges })
    }
}
