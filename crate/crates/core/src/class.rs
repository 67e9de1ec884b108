use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::hypergraph::{all_multisets, Hypergraph};
use crate::universe::{ensure_same, Universe, Vertex};

/// A non-empty, duplicate-free list of same-arity hypergraphs over one
/// universe. Member order matters: ties are always broken by lowest index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishingClass {
    universe: Universe,
    arity: usize,
    graphs: Vec<Hypergraph>,
}

impl DistinguishingClass {
    /// Rejects empty lists, mixed arities/universes and duplicates.
    pub fn new(graphs: Vec<Hypergraph>) -> Result<Self> {
        Self::build(graphs, false)
    }

    /// Like [`new`](Self::new) but silently keeps the first of any duplicates.
    pub fn dedup(graphs: Vec<Hypergraph>) -> Result<Self> {
        Self::build(graphs, true)
    }

    fn build(graphs: Vec<Hypergraph>, drop_duplicates: bool) -> Result<Self> {
        let first = graphs
            .first()
            .ok_or_else(|| Error::InvalidClass("class must be non-empty".into()))?;
        let universe = first.universe().clone();
        let arity = first.arity();
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(graphs.len());
        for g in graphs {
            ensure_same(g.universe(), &universe)?;
            if g.arity() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: g.arity(),
                });
            }
            if !seen.insert(g.edges().clone()) {
                if drop_duplicates {
                    continue;
                }
                return Err(Error::InvalidClass(format!(
                    "duplicate member at index {}",
                    kept.len()
                )));
            }
            kept.push(g);
        }
        Ok(DistinguishingClass {
            universe,
            arity,
            graphs: kept,
        })
    }

    pub fn singleton(g: Hypergraph) -> Self {
        DistinguishingClass {
            universe: g.universe().clone(),
            arity: g.arity(),
            graphs: vec![g],
        }
    }

    /// All `2^n` subsets of the universe as arity-1 graphs, in bitmask order.
    pub fn power_set(universe: Universe) -> Result<Self> {
        let n = universe.size();
        if n > 20 {
            return Err(Error::UniverseTooLarge { size: n, cap: 20 });
        }
        let graphs = (0u64..1 << n)
            .map(|mask| {
                let members: Vec<Vertex> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                Hypergraph::indicator(universe.clone(), &members)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(graphs)
    }

    /// `{1_{v} : v ∈ V}`.
    pub fn singletons(universe: Universe) -> Result<Self> {
        let graphs = universe
            .vertices()
            .map(|v| Hypergraph::indicator(universe.clone(), &[v]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(graphs)
    }

    /// Every arity-`k` hypergraph over the universe (one per subset of the
    /// multiset space).
    pub fn all_hypergraphs(universe: Universe, k: usize) -> Result<Self> {
        let space: Vec<_> = all_multisets(universe.size(), k).collect();
        if space.len() > 16 {
            return Err(Error::OutOfRange(format!(
                "2^{} hypergraphs is too many to list",
                space.len()
            )));
        }
        let graphs = (0u64..1 << space.len())
            .map(|mask| {
                let edges = space
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, e)| e.clone());
                Hypergraph::from_canonical_edges(universe.clone(), k, edges)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(graphs)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn graphs(&self) -> &[Hypergraph] {
        &self.graphs
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// `𝒢_{v_{1:n}}`: member-wise projection, duplicates removed.
    pub fn project(&self, pins: &[Vertex]) -> Result<Self> {
        let projected = self
            .graphs
            .iter()
            .map(|g| g.project(pins))
            .collect::<Result<Vec<_>>>()?;
        Self::dedup(projected)
    }

    /// Copy with one member removed; `None` if that would empty the class.
    pub fn without(&self, index: usize) -> Option<Self> {
        if self.graphs.len() <= 1 || index >= self.graphs.len() {
            return None;
        }
        let mut graphs = self.graphs.clone();
        graphs.remove(index);
        Some(DistinguishingClass {
            universe: self.universe.clone(),
            arity: self.arity,
            graphs,
        })
    }

    /// Members re-hosted on a larger universe (same vertex ids).
    pub fn embed(&self, target: &Universe) -> Result<Self> {
        let graphs = self
            .graphs
            .iter()
            .map(|g| g.embed(target))
            .collect::<Result<Vec<_>>>()?;
        Self::new(graphs)
    }
}
