use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::universe::{Universe, Vertex};

/// An ordered sequence of vertex draws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    universe: Universe,
    vertices: Vec<Vertex>,
}

impl Sample {
    pub fn new(universe: Universe, vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidSample("sample must be non-empty".into()));
        }
        for &v in &vertices {
            universe.check_vertex(v)?;
        }
        Ok(Sample { universe, vertices })
    }

    pub(crate) fn new_unchecked(universe: Universe, vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty());
        Sample { universe, vertices }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Multiplicity of each distinct vertex, ascending by id.
    pub fn counts(&self) -> BTreeMap<Vertex, u64> {
        let mut counts = BTreeMap::new();
        for &v in &self.vertices {
            *counts.entry(v).or_insert(0) += 1;
        }
        counts
    }

    /// Copy with position `i` replaced by `v`.
    pub fn with_replaced(&self, i: usize, v: Vertex) -> Result<Self> {
        self.universe.check_vertex(v)?;
        if i >= self.vertices.len() {
            return Err(Error::OutOfRange(format!(
                "position {i} in sample of length {}",
                self.vertices.len()
            )));
        }
        let mut vertices = self.vertices.clone();
        vertices[i] = v;
        Ok(Sample {
            universe: self.universe.clone(),
            vertices,
        })
    }
}
