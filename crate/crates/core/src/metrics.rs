//! Integral probability metrics over hypergraph classes, total variation, and
//! the pinned-slot decomposition of mixture lifts.

use serde::Serialize;

use crate::class::DistinguishingClass;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::frequency::{edge_freq_empirical, edge_freq_true};
use crate::hypergraph::Hypergraph;
use crate::sample::Sample;
use crate::scalar::{binomial, Scalar};
use crate::universe::{ensure_same, Vertex};

/// Value of an IPM together with the member that attains it.
#[derive(Debug, Clone, PartialEq)]
pub struct IpmResult<T: Scalar = f64> {
    pub value: T,
    /// Lowest index attaining `value`.
    pub witness: usize,
    pub per_graph_gaps: Vec<T>,
}

impl<T: Scalar> IpmResult<T> {
    fn from_gaps(per_graph_gaps: Vec<T>) -> Self {
        let witness = argmax_first(&per_graph_gaps);
        IpmResult {
            value: per_graph_gaps[witness].clone(),
            witness,
            per_graph_gaps,
        }
    }

    pub fn report(&self) -> IpmReport {
        IpmReport {
            value: self.value.to_f64(),
            value_exact: self.value.render(),
            witness: self.witness,
            per_graph_gaps: self.per_graph_gaps.iter().map(Scalar::to_f64).collect(),
        }
    }
}

/// Serializable view of an [`IpmResult`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IpmReport {
    pub value: f64,
    pub value_exact: String,
    pub witness: usize,
    pub per_graph_gaps: Vec<f64>,
}

/// Index of the first maximum.
pub(crate) fn argmax_first<T: PartialOrd>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// `sup_{g∈c} |ℒ_{p1}(g) − ℒ_{p2}(g)|`, computed exactly member by member.
pub fn ipm_exact<T: Scalar>(
    c: &DistinguishingClass,
    p1: &Distribution<T>,
    p2: &Distribution<T>,
) -> Result<IpmResult<T>> {
    ensure_same(c.universe(), p1.universe())?;
    ensure_same(c.universe(), p2.universe())?;
    let gaps = c
        .graphs()
        .iter()
        .map(|g| Ok((edge_freq_true(g, p1)? - edge_freq_true(g, p2)?).abs()))
        .collect::<Result<Vec<T>>>()?;
    Ok(IpmResult::from_gaps(gaps))
}

/// Empirical gaps of every member on a common denominator `m1^k·m2^k`.
pub(crate) struct SampledGaps {
    pub numerators: Vec<u128>,
    pub denominator: u128,
}

impl SampledGaps {
    pub fn witness(&self) -> usize {
        argmax_first(&self.numerators)
    }

    pub fn gap<T: Scalar>(&self, i: usize) -> T {
        T::from_ratio(self.numerators[i], self.denominator)
    }
}

pub(crate) fn sampled_gaps(
    c: &DistinguishingClass,
    s1: &Sample,
    s2: &Sample,
) -> Result<SampledGaps> {
    ensure_same(c.universe(), s1.universe())?;
    ensure_same(c.universe(), s2.universe())?;
    let overflow = || Error::OutOfRange("empirical gap overflows 128-bit arithmetic".into());
    let mut denominator = None;
    let numerators = c
        .graphs()
        .iter()
        .map(|g| {
            let a = edge_freq_empirical(g, s1)?;
            let b = edge_freq_empirical(g, s2)?;
            denominator = Some(a.total.checked_mul(b.total).ok_or_else(overflow)?);
            let lhs = a.hits.checked_mul(b.total).ok_or_else(overflow)?;
            let rhs = b.hits.checked_mul(a.total).ok_or_else(overflow)?;
            Ok(lhs.abs_diff(rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledGaps {
        numerators,
        denominator: denominator.expect("classes are non-empty"),
    })
}

/// Plug-in IPM between two samples. Gaps are compared exactly, so ties are
/// resolved by index even in float mode.
pub fn ipm_sampled<T: Scalar>(
    c: &DistinguishingClass,
    s1: &Sample,
    s2: &Sample,
) -> Result<IpmResult<T>> {
    let gaps = sampled_gaps(c, s1, s2)?;
    let witness = gaps.witness();
    let per_graph_gaps: Vec<T> = (0..gaps.numerators.len()).map(|i| gaps.gap(i)).collect();
    Ok(IpmResult {
        value: per_graph_gaps[witness].clone(),
        witness,
        per_graph_gaps,
    })
}

/// `½ Σ_v |p1(v) − p2(v)|`.
pub fn tv_distance<T: Scalar>(p1: &Distribution<T>, p2: &Distribution<T>) -> Result<T> {
    ensure_same(p1.universe(), p2.universe())?;
    let l1 = p1
        .probs()
        .iter()
        .zip(p2.probs())
        .fold(T::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs());
    Ok(l1.div(&T::from_u64(2)))
}

/// `Δ_n^g(p1,p2)`: difference of edge expectations with `n` slots pinned to
/// `v` and the remaining `k−n` drawn from each distribution.
pub fn delta_n<T: Scalar>(
    g: &Hypergraph,
    v: Vertex,
    n: usize,
    p1: &Distribution<T>,
    p2: &Distribution<T>,
) -> Result<T> {
    let k = g.arity();
    if n > k {
        return Err(Error::OutOfRange(format!(
            "cannot pin {n} slots of an arity-{k} hypergraph"
        )));
    }
    ensure_same(g.universe(), p1.universe())?;
    ensure_same(g.universe(), p2.universe())?;
    g.universe().check_vertex(v)?;
    match n {
        0 => Ok(edge_freq_true(g, p1)? - edge_freq_true(g, p2)?),
        n if n == k => Ok(T::zero()),
        n => {
            let pinned = g.project(&vec![v; n])?;
            Ok(edge_freq_true(&pinned, p1)? - edge_freq_true(&pinned, p2)?)
        }
    }
}

/// Both sides of the mixture-lift identity
///
/// `IPM_c(p1^q, p2^q) = max_g |Σ_n C(k,n) qⁿ(1−q)^{k−n} Δ_n^g(p1,p2)|`
///
/// where `p^q = q·δ_v + (1−q)·p`.
pub fn mixture_ipm_expansion<T: Scalar>(
    c: &DistinguishingClass,
    v: Vertex,
    q: &T,
    p1: &Distribution<T>,
    p2: &Distribution<T>,
) -> Result<(T, T)> {
    let lhs = ipm_exact(c, &p1.mixture(v, q)?, &p2.mixture(v, q)?)?.value;
    let k = c.arity();
    let rest = T::one() - q.clone();
    let weights: Vec<T> = (0..=k)
        .map(|n| T::from_ratio(binomial(k as u64, n as u64), 1) * q.pow(n) * rest.pow(k - n))
        .collect();
    let mut rhs = T::zero();
    for g in c.graphs() {
        let mut acc = T::zero();
        for (n, w) in weights.iter().enumerate() {
            acc = acc + w.clone() * delta_n(g, v, n, p1, p2)?;
        }
        let acc = acc.abs();
        if acc > rhs {
            rhs = acc;
        }
    }
    Ok((lhs, rhs))
}

/// `IPM_c(p1^q, p2^q)` for every `q ∈ {0, 1/k, …, 1}`.
pub fn lifted_ipm_grid<T: Scalar>(
    c: &DistinguishingClass,
    v: Vertex,
    p1: &Distribution<T>,
    p2: &Distribution<T>,
) -> Result<Vec<(T, T)>> {
    let k = c.arity() as u128;
    (0..=k)
        .map(|j| {
            let q = T::from_ratio(j, k);
            let value = ipm_exact(c, &p1.mixture(v, &q)?, &p2.mixture(v, &q)?)?.value;
            Ok((q, value))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use crate::universe::VertexUniverse;

    fn r(n: u128, d: u128) -> Exact {
        Exact::from_ratio(n, d)
    }

    fn collision_class(n: usize) -> DistinguishingClass {
        let u = VertexUniverse::new(n).unwrap();
        DistinguishingClass::singleton(
            Hypergraph::from_edges(u, 2, (0..n).map(|v| vec![v, v])).unwrap(),
        )
    }

    #[test]
    fn power_set_on_point_masses_is_one() {
        let u = VertexUniverse::new(3).unwrap();
        let c = DistinguishingClass::power_set(u.clone()).unwrap();
        let a: Distribution<Exact> = Distribution::point_mass(u.clone(), 0).unwrap();
        let b = Distribution::point_mass(u, 1).unwrap();
        let res = ipm_exact(&c, &a, &b).unwrap();
        assert_eq!(res.value, r(1, 1));
        assert_eq!(res.value, tv_distance(&a, &b).unwrap());
        // {0} is mask 1, the first member with gap 1
        assert_eq!(res.witness, 1);
    }

    #[test]
    fn identical_distributions_have_zero_ipm() {
        let c = collision_class(3);
        let p: Distribution = Distribution::new(c.universe().clone(), vec![0.2, 0.3, 0.5]).unwrap();
        let res = ipm_exact(&c, &p, &p).unwrap();
        assert_eq!(res.value, 0.0);
        assert_eq!(res.witness, 0);
    }

    #[test]
    fn collision_gap_example() {
        let c = collision_class(2);
        let u = c.universe().clone();
        let p1: Distribution<Exact> = Distribution::uniform(u.clone());
        let p2 = Distribution::point_mass(u, 0).unwrap();
        assert_eq!(ipm_exact(&c, &p1, &p2).unwrap().value, r(1, 2));
    }

    #[test]
    fn sampled_examples() {
        let c = collision_class(2);
        let u = c.universe().clone();
        let s1 = Sample::new(u.clone(), vec![0, 0]).unwrap();
        let s2 = Sample::new(u, vec![0, 1]).unwrap();
        let res: IpmResult<Exact> = ipm_sampled(&c, &s1, &s2).unwrap();
        assert_eq!(res.value, r(1, 2));
        assert_eq!(res.per_graph_gaps.len(), 1);
        let same: IpmResult<Exact> = ipm_sampled(&c, &s1, &s1).unwrap();
        assert_eq!(same.value, r(0, 1));
    }

    #[test]
    fn tv_examples() {
        let u = VertexUniverse::new(2).unwrap();
        let a = Distribution::new(u.clone(), vec![0.5, 0.5]).unwrap();
        let b = Distribution::new(u.clone(), vec![0.75, 0.25]).unwrap();
        assert_eq!(tv_distance(&a, &b).unwrap(), 0.25);
        assert_eq!(tv_distance(&a, &a).unwrap(), 0.0);
        let x: Distribution = Distribution::point_mass(u.clone(), 0).unwrap();
        let y = Distribution::point_mass(u, 1).unwrap();
        assert_eq!(tv_distance(&x, &y).unwrap(), 1.0);
    }

    #[test]
    fn delta_examples() {
        let c = collision_class(2);
        let g = &c.graphs()[0];
        let u = c.universe().clone();
        let p1: Distribution<Exact> = Distribution::uniform(u.clone());
        let p2 = Distribution::point_mass(u, 1).unwrap();
        assert_eq!(delta_n(g, 0, 1, &p1, &p2).unwrap(), r(1, 2));
        assert_eq!(delta_n(g, 0, 2, &p1, &p2).unwrap(), r(0, 1));
        let l1 = edge_freq_true(g, &p1).unwrap();
        let l2 = edge_freq_true(g, &p2).unwrap();
        assert_eq!(delta_n(g, 0, 0, &p1, &p2).unwrap(), l1 - l2);
        assert!(delta_n(g, 0, 3, &p1, &p2).is_err());
    }

    #[test]
    fn expansion_endpoints() {
        let u = VertexUniverse::new(3).unwrap();
        let g = Hypergraph::from_edges(u.clone(), 2, vec![vec![0, 1], vec![2, 2]]).unwrap();
        let c = DistinguishingClass::singleton(g);
        let p1 = Distribution::new(u.clone(), vec![r(1, 2), r(1, 4), r(1, 4)]).unwrap();
        let p2 = Distribution::new(u, vec![r(1, 6), r(1, 3), r(1, 2)]).unwrap();
        let base = ipm_exact(&c, &p1, &p2).unwrap().value;
        let (lhs, rhs) = mixture_ipm_expansion(&c, 1, &r(0, 1), &p1, &p2).unwrap();
        assert_eq!((lhs.clone(), rhs), (base.clone(), base));
        let (lhs, rhs) = mixture_ipm_expansion(&c, 1, &r(1, 1), &p1, &p2).unwrap();
        assert_eq!((lhs, rhs), (r(0, 1), r(0, 1)));
        let (lhs, rhs) = mixture_ipm_expansion(&c, 2, &r(1, 3), &p1, &p2).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn grid_has_k_plus_one_points() {
        let c = collision_class(3);
        let u = c.universe().clone();
        let p1: Distribution<Exact> = Distribution::uniform(u.clone());
        let p2 = Distribution::point_mass(u, 2).unwrap();
        let grid = lifted_ipm_grid(&c, 0, &p1, &p2).unwrap();
        assert_eq!(grid.len(), 3);
        assert_eq!(grid[2].1, r(0, 1));
    }
}
