use itertools::Itertools;

use crate::class::DistinguishingClass;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::scalar::{Exact, Scalar};
use crate::universe::{Universe, Vertex, VertexUniverse};

/// Largest supported `ℓ`; the universe has `ℓ + 2^ℓ` vertices.
pub const MAX_SUBSET_BASE: usize = 20;

/// Index vertices `v₁…v_ℓ` followed by one vertex `v_A` per subset
/// `A ⊆ [ℓ]` in bitmask order.
///
/// Index vertex `v_i` has id `i − 1` and label `i:<i>`; subset vertex `v_A`
/// has id `ℓ + mask(A)` and label `A:<mask>`, where bit `i − 1` of the mask
/// records `i ∈ A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetUniverse {
    base_size: usize,
    universe: Universe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetVertex {
    /// `v_i`, 1-based.
    Index(usize),
    /// `v_A` by bitmask.
    Subset(u64),
}

impl SubsetUniverse {
    pub fn new(base_size: usize) -> Result<Self> {
        if base_size == 0 || base_size > MAX_SUBSET_BASE {
            return Err(Error::OutOfRange(format!(
                "subset universe base size must lie in 1..={MAX_SUBSET_BASE}, got {base_size}"
            )));
        }
        let labels = (1..=base_size)
            .map(|i| format!("i:{i}"))
            .chain((0..1u64 << base_size).map(|mask| format!("A:{mask}")))
            .collect();
        Ok(SubsetUniverse {
            base_size,
            universe: VertexUniverse::with_labels(labels)?,
        })
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Id of `v_i`, `i` 1-based.
    pub fn index_vertex(&self, i: usize) -> Result<Vertex> {
        if i == 0 || i > self.base_size {
            return Err(Error::OutOfRange(format!(
                "index vertex {i} outside 1..={}",
                self.base_size
            )));
        }
        Ok(i - 1)
    }

    pub fn subset_vertex(&self, mask: u64) -> Result<Vertex> {
        if mask >> self.base_size != 0 {
            return Err(Error::OutOfRange(format!(
                "mask {mask:#b} has bits beyond {}",
                self.base_size
            )));
        }
        Ok(self.base_size + mask as usize)
    }

    pub fn decode(&self, v: Vertex) -> Result<SubsetVertex> {
        self.universe.check_vertex(v)?;
        Ok(if v < self.base_size {
            SubsetVertex::Index(v + 1)
        } else {
            SubsetVertex::Subset((v - self.base_size) as u64)
        })
    }

    /// Mask of the index set `{i : v_i ∈ vertices}`; fails if any vertex is a
    /// subset vertex.
    pub fn mask_of(&self, vertices: &[Vertex]) -> Result<u64> {
        vertices
            .iter()
            .try_fold(0u64, |acc, &v| match self.decode(v)? {
                SubsetVertex::Index(i) => Ok(acc | 1 << (i - 1)),
                SubsetVertex::Subset(_) => Err(Error::Construction(format!(
                    "vertex {v} is a subset vertex, not an index vertex"
                ))),
            })
    }

    /// Ids of the index vertices in `A`, ascending.
    pub fn members(&self, mask: u64) -> Vec<Vertex> {
        (0..self.base_size)
            .filter(|&b| mask >> b & 1 == 1)
            .collect()
    }
}

/// Bipartite graph joining `v_i` and `v_A` iff `i ∈ A`.
pub fn subset_graph(su: &SubsetUniverse) -> Result<Hypergraph> {
    subset_hypergraph(su, 2)
}

/// Edges `(v_{i₁},…,v_{i_{k−1}}, v_A)` for every `(k−1)`-multiset of `A`.
pub fn subset_hypergraph(su: &SubsetUniverse, k: usize) -> Result<Hypergraph> {
    if k < 2 {
        return Err(Error::OutOfRange(format!(
            "subset hypergraphs need arity at least 2, got {k}"
        )));
    }
    let mut edges = Vec::new();
    for mask in 0..1u64 << su.base_size {
        let a = su.subset_vertex(mask)?;
        for mut e in su
            .members(mask)
            .into_iter()
            .combinations_with_replacement(k - 1)
        {
            e.push(a);
            edges.push(e);
        }
    }
    Hypergraph::from_canonical_edges(su.universe.clone(), k, edges)
}

/// `p_j = (1/k)·δ_{v_A} + (1 − 1/k)·q_j` with `A` the index support of `q1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HardPair {
    pub p1: Distribution<Exact>,
    pub p2: Distribution<Exact>,
    pub mask: u64,
    pub subset_vertex: Vertex,
}

/// Builds the hard pair from distributions over the index vertices (a
/// universe of size `ℓ`, as produced by the disjoint-pair constructors).
pub fn hard_pair(
    su: &SubsetUniverse,
    q1: &Distribution<Exact>,
    q2: &Distribution<Exact>,
    k: usize,
) -> Result<HardPair> {
    if k < 2 {
        return Err(Error::OutOfRange(format!(
            "hard pairs need arity at least 2, got {k}"
        )));
    }
    for q in [q1, q2] {
        if q.universe().size() > su.base_size {
            return Err(Error::Construction(format!(
                "distribution lives on {} vertices but there are only {} index vertices",
                q.universe().size(),
                su.base_size
            )));
        }
    }
    let mask = su.mask_of(&q1.support())?;
    let subset_vertex = su.subset_vertex(mask)?;
    let weight = Exact::from_ratio(1, k as u128);
    let lift = |q: &Distribution<Exact>| q.embed(&su.universe)?.mixture(subset_vertex, &weight);
    Ok(HardPair {
        p1: lift(q1)?,
        p2: lift(q2)?,
        mask,
        subset_vertex,
    })
}

/// Re-hosts an adversary class over the index vertices on the subset
/// universe, extended by zero.
pub fn embed_adversary(
    su: &SubsetUniverse,
    c: &DistinguishingClass,
) -> Result<DistinguishingClass> {
    c.embed(&su.universe)
}
