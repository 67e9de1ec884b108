//! Edge frequencies `ℒ_P(g)` and `ℒ_S(g)`.
//!
//! Both sums range over ordered k-tuples with replacement. They are evaluated
//! over multisets instead, weighting each multiset by its number of
//! orderings, which is exact and `k!` times cheaper.

use itertools::Itertools;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::hypergraph::{orderings, Hypergraph};
use crate::sample::Sample;
use crate::scalar::Scalar;
use crate::universe::{ensure_same, Vertex};

/// Default cap on enumerated tuples.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Upper limit on the number of tuples an operation may enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub(crate) fn check(self, base: usize, k: usize, hint: &'static str) -> Result<()> {
        let required = (base as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if required > self.0 {
            Err(Error::BudgetExceeded {
                required,
                budget: self.0,
                hint,
            })
        } else {
            Ok(())
        }
    }
}

/// An exact empirical frequency `hits / total`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmpiricalFreq {
    /// Ordered position tuples that form an edge.
    pub hits: u128,
    /// `m^k`.
    pub total: u128,
}

impl EmpiricalFreq {
    pub fn to_f64(self) -> f64 {
        self.hits as f64 / self.total as f64
    }

    pub fn to_scalar<T: Scalar>(self) -> T {
        T::from_ratio(self.hits, self.total)
    }
}

/// `ℒ_P(g)`, the probability that `k` IID draws from `p` form an edge.
pub fn edge_freq_true<T: Scalar>(g: &Hypergraph, p: &Distribution<T>) -> Result<T> {
    edge_freq_true_with(g, p, Budget::default())
}

pub fn edge_freq_true_with<T: Scalar>(
    g: &Hypergraph,
    p: &Distribution<T>,
    budget: Budget,
) -> Result<T> {
    ensure_same(g.universe(), p.universe())?;
    let support = p.support();
    let k = g.arity();
    budget.check(support.len(), k, "use sampled frequencies instead")?;
    let weight = |tuple: &[Vertex]| {
        let mass = tuple
            .iter()
            .fold(T::one(), |acc, &v| acc * p.prob(v).clone());
        T::from_ratio(orderings(tuple), 1) * mass
    };
    let mut total = T::zero();
    if (g.edge_count() as u128) < multiset_count(support.len(), k) {
        for e in g.edges() {
            if e.iter().all(|&v| !p.prob(v).is_zero()) {
                total = total + weight(e);
            }
        }
    } else {
        for tuple in support.iter().copied().combinations_with_replacement(k) {
            if g.contains_sorted(&tuple) {
                total = total + weight(&tuple);
            }
        }
    }
    Ok(total)
}

/// `ℒ_S(g)`: fraction of the `m^k` ordered position tuples of `s` whose
/// vertices form an edge. Positions are distinguishable even when values
/// repeat.
///
/// The budget bounds the tuples actually enumerated, `(#distinct)^k`.
pub fn edge_freq_empirical(g: &Hypergraph, s: &Sample) -> Result<EmpiricalFreq> {
    edge_freq_empirical_with(g, s, Budget::default())
}

pub fn edge_freq_empirical_with(
    g: &Hypergraph,
    s: &Sample,
    budget: Budget,
) -> Result<EmpiricalFreq> {
    ensure_same(g.universe(), s.universe())?;
    let k = g.arity();
    let counts = s.counts();
    budget.check(counts.len(), k, "reduce the sample or the arity")?;
    let total = (s.len() as u128)
        .checked_pow(k as u32)
        .ok_or_else(|| Error::OutOfRange("m^k overflows".into()))?;
    let weight = |tuple: &[Vertex]| {
        tuple
            .iter()
            .fold(orderings(tuple), |acc, v| acc * counts[v] as u128)
    };
    let mut hits = 0u128;
    if (g.edge_count() as u128) < multiset_count(counts.len(), k) {
        for e in g.edges() {
            if e.iter().all(|v| counts.contains_key(v)) {
                hits += weight(e);
            }
        }
    } else {
        for tuple in counts.keys().copied().combinations_with_replacement(k) {
            if g.contains_sorted(&tuple) {
                hits += weight(&tuple);
            }
        }
    }
    Ok(EmpiricalFreq { hits, total })
}

/// `C(n+k−1, k)`, saturating.
fn multiset_count(n: usize, k: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = match acc.checked_mul(n as u128 + i) {
            Some(x) => x / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}
