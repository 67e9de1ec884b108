//! Symmetric Boolean predicates on k-tuples, stored as canonical multisets.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::universe::{Universe, Vertex};

/// A non-decreasing k-tuple of vertex ids.
pub type Edge = Vec<Vertex>;

/// A k-hypergraph whose edges are multisets, so self-loops are allowed.
///
/// Membership is permutation-invariant: queries are sorted before lookup.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    universe: Universe,
    arity: usize,
    edges: BTreeSet<Edge>,
}

impl Hypergraph {
    /// Builds from arbitrary-order tuples, sorting each one.
    pub fn from_edges<I>(universe: Universe, arity: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let edges = edges.into_iter().map(|mut e| {
            e.sort_unstable();
            e
        });
        Self::build(universe, arity, edges, false)
    }

    /// Builds from tuples that must already be canonical; anything unsorted
    /// or repeated is rejected.
    pub fn from_canonical_edges<I>(universe: Universe, arity: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        Self::build(universe, arity, edges, true)
    }

    fn build<I>(universe: Universe, arity: usize, edges: I, strict: bool) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        if arity == 0 {
            return Err(Error::InvalidHypergraph("arity must be at least 1".into()));
        }
        let mut set = BTreeSet::new();
        for e in edges {
            if e.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: e.len(),
                });
            }
            for &v in &e {
                universe.check_vertex(v)?;
            }
            if strict && !e.windows(2).all(|w| w[0] <= w[1]) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {e:?} is not sorted"
                )));
            }
            if !set.insert(e.clone()) && strict {
                return Err(Error::InvalidHypergraph(format!("duplicate edge {e:?}")));
            }
        }
        Ok(Hypergraph {
            universe,
            arity,
            edges: set,
        })
    }

    pub fn empty(universe: Universe, arity: usize) -> Result<Self> {
        Self::build(universe, arity, std::iter::empty(), true)
    }

    /// Every multiset of size `arity` is an edge.
    pub fn complete(universe: Universe, arity: usize) -> Result<Self> {
        let edges = all_multisets(universe.size(), arity);
        Self::build(universe, arity, edges, true)
    }

    /// Arity-1 indicator of a vertex set.
    pub fn indicator(universe: Universe, vertices: &[Vertex]) -> Result<Self> {
        Self::from_edges(universe, 1, vertices.iter().map(|&v| vec![v]))
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `g(v₁,…,v_k)` for a tuple in any order.
    pub fn contains(&self, tuple: &[Vertex]) -> bool {
        if tuple.len() != self.arity {
            return false;
        }
        if tuple.windows(2).all(|w| w[0] <= w[1]) {
            self.edges.contains(tuple)
        } else {
            let mut sorted = tuple.to_vec();
            sorted.sort_unstable();
            self.edges.contains(sorted.as_slice())
        }
    }

    /// Membership for a tuple already known to be sorted.
    pub(crate) fn contains_sorted(&self, tuple: &[Vertex]) -> bool {
        self.edges.contains(tuple)
    }

    /// Pins the first `pins.len()` coordinates, returning the arity-(k−n)
    /// hypergraph of completions `u` with `g(pins, u) = 1`.
    pub fn project(&self, pins: &[Vertex]) -> Result<Self> {
        if pins.is_empty() || pins.len() >= self.arity {
            return Err(Error::OutOfRange(format!(
                "cannot pin {} coordinates of an arity-{} hypergraph",
                pins.len(),
                self.arity
            )));
        }
        for &v in pins {
            self.universe.check_vertex(v)?;
        }
        let mut pins = pins.to_vec();
        pins.sort_unstable();
        let edges = self
            .edges
            .iter()
            .filter_map(|e| multiset_difference(e, &pins))
            .collect::<BTreeSet<_>>();
        Ok(Hypergraph {
            universe: self.universe.clone(),
            arity: self.arity - pins.len(),
            edges,
        })
    }

    /// All multisets of the same arity that are not edges.
    pub fn complement(&self) -> Self {
        let edges = all_multisets(self.universe.size(), self.arity)
            .filter(|e| !self.edges.contains(e))
            .collect();
        Hypergraph {
            universe: self.universe.clone(),
            arity: self.arity,
            edges,
        }
    }

    /// Copy hosted on a larger universe with the same vertex ids.
    pub fn embed(&self, target: &Universe) -> Result<Self> {
        if target.size() < self.universe.size() {
            return Err(Error::UniverseMismatch);
        }
        Ok(Hypergraph {
            universe: target.clone(),
            arity: self.arity,
            edges: self.edges.clone(),
        })
    }
}

/// `e − pins` as multisets when `pins ⊆ e`; both inputs sorted.
fn multiset_difference(e: &[Vertex], pins: &[Vertex]) -> Option<Edge> {
    let mut rest = Vec::with_capacity(e.len() - pins.len());
    let mut j = 0;
    for &v in e {
        if j < pins.len() && pins[j] == v {
            j += 1;
        } else {
            if j < pins.len() && pins[j] < v {
                return None;
            }
            rest.push(v);
        }
    }
    (j == pins.len()).then_some(rest)
}

/// Non-decreasing `k`-tuples over `0..n`, lexicographic.
pub fn all_multisets(n: usize, k: usize) -> impl Iterator<Item = Edge> {
    (0..n).combinations_with_replacement(k)
}

/// Number of distinct orderings of a sorted tuple, `k!/∏ mult!`.
pub fn orderings(sorted: &[Vertex]) -> u128 {
    let mut total: u128 = 1;
    let mut run = 0u128;
    for (i, w) in sorted.iter().enumerate() {
        if i > 0 && sorted[i - 1] == *w {
            run += 1;
        } else {
            run = 1;
        }
        // multiply by (i+1)/run, keeping the running value an integer
        total = total * (i as u128 + 1) / run;
    }
    total
}
