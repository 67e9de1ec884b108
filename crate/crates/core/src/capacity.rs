//! Exact VC dimension of arity-1 classes and the recursive graph VC dimension
//! of hypergraph classes.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::class::DistinguishingClass;
use crate::error::{Error, Result};
use crate::hypergraph::Edge;
use crate::universe::Vertex;

/// Default universe-size cap; the search is `O(2^n · |class|)` in the worst
/// case.
pub const DEFAULT_UNIVERSE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VcConfig {
    pub max_universe: usize,
}

impl Default for VcConfig {
    fn default() -> Self {
        VcConfig {
            max_universe: DEFAULT_UNIVERSE_CAP,
        }
    }
}

impl VcConfig {
    /// No universe cap. The layered search still only visits sets whose
    /// subsets are all shattered, so low-capacity classes stay cheap.
    pub fn unbounded() -> Self {
        VcConfig {
            max_universe: usize::MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VcReport {
    pub dimension: usize,
    /// A shattered set of size `dimension`, ascending.
    pub witness: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphVcReport {
    pub dimension: usize,
    /// Shattered set of the fully projected class.
    pub witness: Vec<Vertex>,
    /// `v₁,…,v_{k−1}` pinned one level at a time.
    pub pins: Vec<Vertex>,
}

/// Membership table of an arity-1 class: `rows[g][v]`, plus per-vertex
/// bitsets over members for the shattering test.
struct Table {
    rows: Vec<Vec<bool>>,
    columns: Vec<Vec<u64>>,
}

impl Table {
    fn new(c: &DistinguishingClass) -> Self {
        let n = c.universe().size();
        let words = c.len().div_ceil(64);
        let mut columns = vec![vec![0u64; words]; n];
        let rows = c
            .graphs()
            .iter()
            .enumerate()
            .map(|(gi, g)| {
                let mut row = vec![false; n];
                for e in g.edges() {
                    row[e[0]] = true;
                    columns[e[0]][gi / 64] |= 1 << (gi % 64);
                }
                row
            })
            .collect();
        Table { rows, columns }
    }

    fn restrictions(&self, set: &[Vertex]) -> HashSet<u64> {
        self.rows
            .iter()
            .map(|row| {
                set.iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &v)| acc | (row[v] as u64) << i)
            })
            .collect()
    }

    /// Every pattern `T ⊆ set` needs a member whose trace on `set` is `T`.
    fn shatters(&self, set: &[Vertex]) -> bool {
        if set.len() >= 64 || self.rows.len() < 1usize << set.len() {
            return false;
        }
        let words = self.rows.len().div_ceil(64);
        let tail = match self.rows.len() % 64 {
            0 => u64::MAX,
            r => (1u64 << r) - 1,
        };
        (0u64..1 << set.len()).all(|pattern| {
            (0..words).any(|w| {
                let mut acc = if w + 1 == words { tail } else { u64::MAX };
                for (i, &v) in set.iter().enumerate() {
                    let col = self.columns[v][w];
                    acc &= if pattern >> i & 1 == 1 { col } else { !col };
                }
                acc != 0
            })
        })
    }
}

fn require_arity_one(c: &DistinguishingClass) -> Result<()> {
    if c.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: c.arity(),
        });
    }
    Ok(())
}

fn check_cap(c: &DistinguishingClass, config: VcConfig) -> Result<()> {
    let size = c.universe().size();
    if size > config.max_universe {
        return Err(Error::UniverseTooLarge {
            size,
            cap: config.max_universe,
        });
    }
    Ok(())
}

/// Whether `c` (arity 1) realizes all `2^|set|` labelings of `set`.
pub fn is_shattered(c: &DistinguishingClass, set: &[Vertex]) -> Result<bool> {
    require_arity_one(c)?;
    for &v in set {
        c.universe().check_vertex(v)?;
    }
    Ok(Table::new(c).shatters(set))
}

/// Number of distinct restrictions of `c` (arity 1) to `set`.
pub fn restriction_count(c: &DistinguishingClass, set: &[Vertex]) -> Result<usize> {
    require_arity_one(c)?;
    if set.len() >= 64 {
        return Err(Error::OutOfRange(
            "restriction sets are limited to 63 vertices".into(),
        ));
    }
    for &v in set {
        c.universe().check_vertex(v)?;
    }
    Ok(Table::new(c).restrictions(set).len())
}

pub fn vc_dim(c: &DistinguishingClass) -> Result<VcReport> {
    vc_dim_with(c, VcConfig::default())
}

/// Exact VC dimension by a level-wise search: a set of size `s` is only
/// examined when all of its `(s−1)`-subsets are shattered, and the search
/// stops at the first level with no shattered set.
pub fn vc_dim_with(c: &DistinguishingClass, config: VcConfig) -> Result<VcReport> {
    require_arity_one(c)?;
    check_cap(c, config)?;
    let table = Table::new(c);
    // a class of size N cannot shatter more than floor(log2 N) points
    let ceiling = usize::BITS as usize - 1 - c.len().leading_zeros() as usize;

    let mut level: Vec<Vec<Vertex>> = vec![vec![]];
    let mut best = VcReport {
        dimension: 0,
        witness: vec![],
    };
    for size in 1..=ceiling {
        let known: HashSet<&[Vertex]> = level.iter().map(Vec::as_slice).collect();
        let mut next = Vec::new();
        for candidate in extend_level(&level, c.universe().size()) {
            let closed = size <= 1
                || (0..size).all(|skip| {
                    let sub: Vec<Vertex> = candidate
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    known.contains(sub.as_slice())
                });
            if closed && table.shatters(&candidate) {
                next.push(candidate);
            }
        }
        match next.first() {
            Some(first) => {
                best = VcReport {
                    dimension: size,
                    witness: first.clone(),
                };
            }
            None => break,
        }
        level = next;
    }
    Ok(best)
}

/// Apriori-style join: sorted sets sharing all but their last element.
fn extend_level(level: &[Vec<Vertex>], n: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    if level.len() == 1 && level[0].is_empty() {
        return (0..n).map(|v| vec![v]).collect();
    }
    for (i, a) in level.iter().enumerate() {
        let prefix = &a[..a.len() - 1];
        for b in &level[i + 1..] {
            if &b[..b.len() - 1] != prefix {
                break;
            }
            let mut joined = a.clone();
            joined.push(*b.last().expect("non-empty"));
            out.push(joined);
        }
    }
    out
}

pub fn graph_vc_dim(c: &DistinguishingClass) -> Result<GraphVcReport> {
    graph_vc_dim_with(c, VcConfig::default())
}

/// `gVC(𝒢) = VC(𝒢)` for arity 1, else `max_v gVC(𝒢_v)`, ties resolved
/// towards the lowest pinned vertex. Projected classes are memoized by their
/// member edge sets.
pub fn graph_vc_dim_with(c: &DistinguishingClass, config: VcConfig) -> Result<GraphVcReport> {
    check_cap(c, config)?;
    let mut memo = HashMap::new();
    graph_vc_rec(c, config, &mut memo)
}

type Fingerprint = Vec<BTreeSet<Edge>>;

fn fingerprint(c: &DistinguishingClass) -> Fingerprint {
    let mut members: Vec<_> = c.graphs().iter().map(|g| g.edges().clone()).collect();
    members.sort();
    members
}

fn graph_vc_rec(
    c: &DistinguishingClass,
    config: VcConfig,
    memo: &mut HashMap<(usize, Fingerprint), GraphVcReport>,
) -> Result<GraphVcReport> {
    if c.arity() == 1 {
        let r = vc_dim_with(c, config)?;
        return Ok(GraphVcReport {
            dimension: r.dimension,
            witness: r.witness,
            pins: vec![],
        });
    }
    let key = (c.arity(), fingerprint(c));
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let ceiling = usize::BITS as usize - 1 - c.len().leading_zeros() as usize;
    let mut best: Option<GraphVcReport> = None;
    for v in c.universe().vertices() {
        let projected = c.project(&[v])?;
        let sub = graph_vc_rec(&projected, config, memo)?;
        if best.as_ref().is_none_or(|b| sub.dimension > b.dimension) {
            let mut pins = vec![v];
            pins.extend(sub.pins);
            best = Some(GraphVcReport {
                dimension: sub.dimension,
                witness: sub.witness,
                pins,
            });
        }
        if best.as_ref().is_some_and(|b| b.dimension >= ceiling) {
            break;
        }
    }
    let best = best.expect("universes are non-empty");
    memo.insert(key, best.clone());
    Ok(best)
}

/// Sauer–Shelah growth bound `Σ_{i≤d} C(m, i)`.
pub fn sauer_bound(dimension: usize, m: usize) -> BigUint {
    let mut total = BigUint::zero();
    let mut term = BigUint::from(1u32);
    for i in 0..=dimension.min(m) {
        if i > 0 {
            term = term * BigUint::from(m - i + 1) / BigUint::from(i);
        }
        total += &term;
    }
    total
}
