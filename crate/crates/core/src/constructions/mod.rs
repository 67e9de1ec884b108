//! Explicit separating instances: collision graphs, subset graphs and their
//! k-ary generalization, disjoint-support pairs that a class cannot tell
//! apart, and the hard mixture pairs built from them.

mod disjoint;
mod game;
mod subset;

pub use disjoint::{certify_pair, disjoint_pair_by_sampling, DisjointPair, SamplingConfig};
pub use game::{disjoint_pair_by_game, GameConfig, GameDiagnostics};
pub use subset::{
    embed_adversary, hard_pair, subset_graph, subset_hypergraph, HardPair, SubsetUniverse,
    SubsetVertex, MAX_SUBSET_BASE,
};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::universe::Universe;

/// All-equal k-tuples `(v,…,v)`; `ℒ_p` is the k-way collision probability.
pub fn collision_graph(universe: Universe, k: usize) -> Result<Hypergraph> {
    if k < 2 {
        return Err(Error::OutOfRange(format!(
            "collision graphs need arity at least 2, got {k}"
        )));
    }
    let edges = universe.vertices().map(|v| vec![v; k]).collect::<Vec<_>>();
    Hypergraph::from_canonical_edges(universe, k, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::Distribution;
    use crate::frequency::edge_freq_true;
    use crate::scalar::{parse_exact, Exact, Scalar};
    use crate::universe::VertexUniverse;

    #[test]
    fn collision_examples() {
        let u = VertexUniverse::new(5).unwrap();
        let g = collision_graph(u.clone(), 2).unwrap();
        let uniform: Distribution<Exact> = Distribution::uniform(u.clone());
        assert_eq!(
            edge_freq_true(&g, &uniform).unwrap(),
            Exact::from_ratio(1, 5)
        );

        let g3 = collision_graph(u.clone(), 3).unwrap();
        let point: Distribution<Exact> = Distribution::point_mass(u, 2).unwrap();
        assert_eq!(
            edge_freq_true(&g3, &point).unwrap(),
            Exact::from_ratio(1, 1)
        );

        let u = VertexUniverse::new(3).unwrap();
        let p = Distribution::new(
            u.clone(),
            ["0.5", "0.3", "0.2"]
                .iter()
                .map(|s| parse_exact(s).unwrap())
                .collect(),
        )
        .unwrap();
        let g = collision_graph(u.clone(), 2).unwrap();
        assert_eq!(
            edge_freq_true(&g, &p).unwrap(),
            parse_exact("0.38").unwrap()
        );
        assert!(collision_graph(u, 1).is_err());
    }
}
