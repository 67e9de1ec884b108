//! Desk-scale reproductions of the quantitative bounds: uniform convergence
//! of empirical edge frequencies, bounded differences of the sup deviation,
//! and the expressivity separation pipeline.

use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::{graph_vc_dim_with, VcConfig};
use crate::class::DistinguishingClass;
use crate::constructions::{
    disjoint_pair_by_game, disjoint_pair_by_sampling, embed_adversary, hard_pair,
    subset_hypergraph, DisjointPair, GameConfig, SamplingConfig, SubsetUniverse,
};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::frequency::{edge_freq_empirical, edge_freq_true};
use crate::metrics::ipm_exact;
use crate::sample::Sample;
use crate::scalar::{Exact, Scalar};
use crate::seed::rng_for;
use crate::universe::VertexUniverse;

/// `k(4 + √(ρ ln(2em/ρ)))/√(2m) + k(k+1)/m`, with the log term taken as 0
/// when `ρ = 0`.
pub fn uc_bound(k: usize, rho: usize, m: usize) -> f64 {
    let (k, m) = (k as f64, m as f64);
    k * (4.0 + capacity_term(rho, m).sqrt()) / (2.0 * m).sqrt() + k * (k + 1.0) / m
}

/// `k√(4 + ρ ln(2em/ρ))/√(2m) + k(k−1)/m`, the tighter variant.
pub fn uc_bound_statement(k: usize, rho: usize, m: usize) -> f64 {
    let (k, m) = (k as f64, m as f64);
    k * (4.0 + capacity_term(rho, m)).sqrt() / (2.0 * m).sqrt() + k * (k - 1.0) / m
}

fn capacity_term(rho: usize, m: f64) -> f64 {
    if rho == 0 {
        0.0
    } else {
        let rho = rho as f64;
        rho * (2.0 * std::f64::consts::E * m / rho).ln()
    }
}

/// Exact `ℒ_P(g)` for every member, as floats.
fn true_frequencies<T: Scalar>(c: &DistinguishingClass, p: &Distribution<T>) -> Result<Vec<f64>> {
    c.graphs()
        .iter()
        .map(|g| Ok(edge_freq_true(g, p)?.to_f64()))
        .collect()
}

/// `F(S) = max_g |ℒ_S(g) − ℒ_P(g)|`.
fn sup_deviation(c: &DistinguishingClass, truths: &[f64], s: &Sample) -> Result<f64> {
    c.graphs()
        .iter()
        .zip(truths)
        .try_fold(0.0f64, |acc, (g, t)| {
            Ok(acc.max((edge_freq_empirical(g, s)?.to_f64() - t).abs()))
        })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UcExperimentRow {
    pub m: usize,
    pub k: usize,
    pub rho: usize,
    pub empirical_expectation: f64,
    pub bound: f64,
    pub bound_statement: f64,
    pub replicates: usize,
    pub seed: u64,
    pub holds: bool,
}

/// For each `m`, averages `F(S)` over `replicates` seeded samples and sets it
/// against [`uc_bound`] with `ρ = gVC(c)`.
pub fn uc_experiment<T: Scalar>(
    c: &DistinguishingClass,
    p: &Distribution<T>,
    m_grid: &[usize],
    replicates: usize,
    seed: u64,
) -> Result<Vec<UcExperimentRow>> {
    if replicates == 0 {
        return Err(Error::OutOfRange("replicates must be at least 1".into()));
    }
    let rho = graph_vc_dim_with(c, VcConfig::default())?.dimension;
    let k = c.arity();
    let truths = true_frequencies(c, p)?;
    let sampler = p.sampler();
    m_grid
        .iter()
        .map(|&m| {
            if m == 0 || m < rho {
                return Err(Error::OutOfRange(format!(
                    "sample size {m} must be positive and at least gVC = {rho}"
                )));
            }
            let deviations = (0..replicates)
                .into_par_iter()
                .map(|r| {
                    let mut rng = rng_for(seed, &[m as u64, r as u64]);
                    sup_deviation(c, &truths, &sampler.sample(m, &mut rng))
                })
                .collect::<Result<Vec<f64>>>()?;
            let empirical_expectation = deviations.iter().sum::<f64>() / replicates as f64;
            let bound = uc_bound(k, rho, m);
            Ok(UcExperimentRow {
                m,
                k,
                rho,
                empirical_expectation,
                bound,
                bound_statement: uc_bound_statement(k, rho, m),
                replicates,
                seed,
                holds: empirical_expectation <= bound,
            })
        })
        .collect()
}

/// Slack allowed when comparing a difference against `2k/m`.
pub const SENSITIVITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub m: usize,
    pub k: usize,
    pub trials: usize,
    pub max_difference: f64,
    /// `2k/m`.
    pub bound: f64,
    pub violations: usize,
    pub seed: u64,
}

/// Per trial: draws `S`, replaces one uniformly chosen position by a fresh
/// draw, and records `|F(S) − F(S′)|`.
pub fn sensitivity_experiment<T: Scalar>(
    c: &DistinguishingClass,
    p: &Distribution<T>,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<SensitivityReport> {
    use rand::Rng;
    if m == 0 {
        return Err(Error::OutOfRange("sample size must be positive".into()));
    }
    let k = c.arity();
    let truths = true_frequencies(c, p)?;
    let sampler = p.sampler();
    let bound = 2.0 * k as f64 / m as f64;
    let differences = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(seed, &[t as u64]);
            let s = sampler.sample(m, &mut rng);
            let position = rng.gen_range(0..m);
            let replacement = sampler.draw(&mut rng);
            let s2 = s.with_replaced(position, replacement)?;
            Ok((sup_deviation(c, &truths, &s)? - sup_deviation(c, &truths, &s2)?).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SensitivityReport {
        m,
        k,
        trials,
        max_difference: differences.iter().copied().fold(0.0, f64::max),
        bound,
        violations: differences
            .iter()
            .filter(|&&d| d > bound + SENSITIVITY_TOLERANCE)
            .count(),
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairMethod {
    Sampling,
    Game,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpressivityConfig {
    pub ell: usize,
    pub k: usize,
    pub epsilon: f64,
    pub method: PairMethod,
    pub seed: u64,
    /// Arity-1 class over the `ℓ` index vertices; singleton indicators when
    /// absent.
    pub adversary: Option<DistinguishingClass>,
    pub sampling: SamplingConfig,
    pub game: GameConfig,
}

impl ExpressivityConfig {
    pub fn new(ell: usize, k: usize, epsilon: f64, method: PairMethod, seed: u64) -> Self {
        ExpressivityConfig {
            ell,
            k,
            epsilon,
            method,
            seed,
            adversary: None,
            sampling: SamplingConfig::default(),
            game: GameConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpressivityReport {
    pub ell: usize,
    pub k: usize,
    pub epsilon: f64,
    pub method: PairMethod,
    pub seed: u64,
    pub attempts: usize,
    /// Bitmask of the index set `A = support(q1)`.
    pub mask: u64,
    pub pair_ipm: String,
    pub adversary_ipm: f64,
    pub adversary_ipm_exact: String,
    pub subset_gap: f64,
    pub subset_gap_exact: String,
    pub edge_probability_p1: String,
    pub edge_probability_p2: String,
    /// `1/2` for `k = 2`, `e^{−1}` otherwise.
    pub gap_threshold: f64,
    pub adversary_below_epsilon: bool,
    pub gap_meets_threshold: bool,
    /// Only for `k = 2`: whether the gap is strictly above `1/2`.
    pub gap_strictly_above_half: Option<bool>,
}

impl ExpressivityReport {
    pub fn holds(&self) -> bool {
        self.adversary_below_epsilon && self.gap_meets_threshold
    }
}

/// Builds a disjoint pair against the adversary, lifts it to the hard pair
/// on the subset universe, and measures both sides exactly.
pub fn expressivity_experiment(config: &ExpressivityConfig) -> Result<ExpressivityReport> {
    let su = SubsetUniverse::new(config.ell)?;
    let adversary = match &config.adversary {
        Some(c) => {
            if c.universe().size() != config.ell {
                return Err(Error::Construction(format!(
                    "adversary lives on {} vertices, expected {}",
                    c.universe().size(),
                    config.ell
                )));
            }
            c.clone()
        }
        None => DistinguishingClass::singletons(VertexUniverse::new(config.ell)?)?,
    };
    let pair: DisjointPair = match config.method {
        PairMethod::Sampling => {
            disjoint_pair_by_sampling(&adversary, config.epsilon, config.seed, config.sampling)?
        }
        PairMethod::Game => {
            disjoint_pair_by_game(&adversary, config.epsilon, config.seed, config.game)?.0
        }
    };
    let hard = hard_pair(&su, &pair.q1, &pair.q2, config.k)?;
    let lifted = embed_adversary(&su, &adversary)?;
    let adversary_ipm = ipm_exact(&lifted, &hard.p1, &hard.p2)?.value;
    let g = subset_hypergraph(&su, config.k)?;
    let e1 = edge_freq_true(&g, &hard.p1)?;
    let e2 = edge_freq_true(&g, &hard.p2)?;
    let gap = (e1.clone() - e2.clone()).abs();

    let half = Exact::from_ratio(1, 2);
    let (gap_threshold, gap_meets_threshold, strict) = if config.k == 2 {
        (0.5, gap >= half, Some(gap > half))
    } else {
        let e_inv = (-1f64).exp();
        (e_inv, gap.to_f64() >= e_inv - 1e-12, None)
    };
    Ok(ExpressivityReport {
        ell: config.ell,
        k: config.k,
        epsilon: config.epsilon,
        method: config.method,
        seed: config.seed,
        attempts: pair.attempts,
        mask: hard.mask,
        pair_ipm: pair.achieved_ipm.render(),
        adversary_ipm: adversary_ipm.to_f64(),
        adversary_ipm_exact: adversary_ipm.render(),
        adversary_below_epsilon: adversary_ipm < Exact::from_f64(config.epsilon)?,
        subset_gap: gap.to_f64(),
        subset_gap_exact: gap.render(),
        edge_probability_p1: e1.render(),
        edge_probability_p2: e2.render(),
        gap_threshold,
        gap_meets_threshold,
        gap_strictly_above_half: strict,
    })
}
