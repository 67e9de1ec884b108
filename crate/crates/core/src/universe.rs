use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex ids are dense indices `0..size`.
pub type Vertex = usize;

/// A finite vertex set, optionally labelled.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexUniverse {
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// Shared handle; all objects over the same vertex set hold one of these.
pub type Universe = Arc<VertexUniverse>;

impl VertexUniverse {
    pub fn new(size: usize) -> Result<Universe> {
        Self::build(size, None)
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Universe> {
        Self::build(labels.len(), Some(labels))
    }

    pub(crate) fn build(size: usize, labels: Option<Vec<String>>) -> Result<Universe> {
        if size == 0 {
            return Err(Error::InvalidUniverse("size must be at least 1".into()));
        }
        if let Some(labels) = &labels {
            if labels.len() != size {
                return Err(Error::InvalidUniverse(format!(
                    "{} labels for {} vertices",
                    labels.len(),
                    size
                )));
            }
        }
        Ok(Arc::new(VertexUniverse { size, labels }))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: Vertex) -> Option<&str> {
        self.labels
            .as_ref()
            .and_then(|l| l.get(v))
            .map(String::as_str)
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.size
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.size {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                size: self.size,
            })
        }
    }
}

pub(crate) fn same(a: &Universe, b: &Universe) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn ensure_same(a: &Universe, b: &Universe) -> Result<()> {
    if same(a, b) {
        Ok(())
    } else {
        Err(Error::UniverseMismatch)
    }
}
