//! Brute-force oracles and proptest strategies shared by the integration
//! tests. Oracles enumerate ordered tuples and subsets directly and share no
//! code with the library's multiset-based evaluation.
#![allow(dead_code)]

use hyperdisc::{
    DistinguishingClass, Distribution, Exact, Hypergraph, Scalar, Universe, VertexUniverse,
};
use proptest::prelude::*;

/// Every ordered `k`-tuple over `0..n`, in odometer order.
pub fn ordered_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut t = vec![0; k];
    loop {
        out.push(t.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Sorted tuples with repetition, built by recursion.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for v in start..n {
            prefix.push(v);
            go(v, n, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `Σ_{ordered t} Π p(t_i) · g(t)`.
pub fn brute_edge_freq(g: &Hypergraph, probs: &[Exact]) -> Exact {
    ordered_tuples(probs.len(), g.arity())
        .into_iter()
        .filter(|t| g.contains(t))
        .map(|t| {
            t.iter()
                .map(|&v| probs[v].clone())
                .fold(Exact::one(), |a, b| a * b)
        })
        .fold(Exact::zero(), |a, b| a + b)
}

/// Counts ordered position tuples of the sample forming an edge, over `m^k`.
pub fn brute_sample_freq(g: &Hypergraph, vertices: &[usize]) -> (u128, u128) {
    let m = vertices.len();
    let k = g.arity();
    let hits = ordered_tuples(m, k)
        .into_iter()
        .filter(|pos| {
            let t: Vec<usize> = pos.iter().map(|&i| vertices[i]).collect();
            g.contains(&t)
        })
        .count() as u128;
    (hits, (m as u128).pow(k as u32))
}

/// Largest shattered set size, trying every subset of the universe.
pub fn brute_vc(c: &DistinguishingClass) -> usize {
    let n = c.universe().size();
    let mut best = 0;
    for mask in 0u32..1 << n {
        let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if set.len() <= best {
            continue;
        }
        let traces: std::collections::HashSet<Vec<bool>> = c
            .graphs()
            .iter()
            .map(|g| set.iter().map(|&v| g.contains(&[v])).collect())
            .collect();
        if traces.len() == 1 << set.len() {
            best = set.len();
        }
    }
    best
}

/// VC dimension of the class viewed as Boolean functions on tuples. A
/// symmetric graph agrees on all orderings of a tuple, so only multisets can
/// be shattered together.
pub fn tuple_vc(c: &DistinguishingClass) -> usize {
    let points = multisets(c.universe().size(), c.arity());
    assert!(points.len() <= 20);
    let mut best = 0;
    for mask in 0u32..1 << points.len() {
        let set: Vec<&Vec<usize>> = (0..points.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| &points[i])
            .collect();
        if set.len() <= best {
            continue;
        }
        let traces: std::collections::HashSet<Vec<bool>> = c
            .graphs()
            .iter()
            .map(|g| set.iter().map(|t| g.contains(t)).collect())
            .collect();
        if traces.len() == 1 << set.len() {
            best = set.len();
        }
    }
    best
}

pub fn exact_probs(weights: &[u32]) -> Vec<Exact> {
    let total: u32 = weights.iter().sum();
    weights
        .iter()
        .map(|&w| Exact::from_ratio(w as u128, total as u128))
        .collect()
}

/// Integer weights with at least one positive entry.
pub fn weights(n: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..=8, n).prop_filter("needs mass", |w| w.iter().any(|&x| x > 0))
}

pub fn exact_dist(u: &Universe) -> impl Strategy<Value = Distribution<Exact>> {
    let u = u.clone();
    weights(u.size()).prop_map(move |w| Distribution::new(u.clone(), exact_probs(&w)).unwrap())
}

pub fn hypergraph(u: &Universe, k: usize) -> impl Strategy<Value = Hypergraph> {
    let u = u.clone();
    let space = multisets(u.size(), k);
    prop::collection::vec(any::<bool>(), space.len()).prop_map(move |keep| {
        let edges = space
            .iter()
            .zip(&keep)
            .filter(|(_, &b)| b)
            .map(|(e, _)| e.clone())
            .collect::<Vec<_>>();
        Hypergraph::from_canonical_edges(u.clone(), k, edges).unwrap()
    })
}

pub fn class(u: &Universe, k: usize, max_len: usize) -> impl Strategy<Value = DistinguishingClass> {
    prop::collection::vec(hypergraph(u, k), 1..=max_len)
        .prop_map(|gs| DistinguishingClass::dedup(gs).unwrap())
}

/// `(n, k)` with the universe shared by everything generated from it.
pub fn universe(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Universe> {
    n.prop_map(|n| VertexUniverse::new(n).unwrap())
}
