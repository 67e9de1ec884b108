use itertools::Itertools;
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use serde::Serialize;

use crate::capacity::{vc_dim_with, VcConfig};
use crate::class::DistinguishingClass;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::scalar::{Exact, Scalar};
use crate::seed::rng_for;

use super::disjoint::{certify_pair, DisjointPair};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameConfig {
    /// MW iterations; `None` means `⌈10·ln n/ε²⌉`.
    pub rounds: Option<usize>,
    /// The averaged strategy is rounded to multiples of `1/denominator`.
    pub denominator: u64,
    /// Random balanced labelings tried before the exhaustive sweep.
    pub random_labelings: usize,
    /// Total labelings examined before giving up.
    pub max_labelings: usize,
    /// Exhaustive sweep over balanced labelings only for ground sets up to
    /// this size.
    pub exhaustive_limit: usize,
    /// When set, require `n > c·x·ln²x` with `x = max(ρ,1)/ε²`.
    pub ground_constant: Option<f64>,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            rounds: None,
            denominator: 10_000,
            random_labelings: 32,
            max_labelings: 4096,
            exhaustive_limit: 20,
            ground_constant: None,
        }
    }
}

/// Solver self-audit for the accepted labeling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameDiagnostics {
    pub labelings_tried: usize,
    pub rounds: usize,
    pub eta: f64,
    /// `min_d q̄ᵀM_d` for the averaged distribution strategy.
    pub game_value: f64,
    /// `max_v (ȳM)_v` for the averaged best-response columns.
    pub upper_value: f64,
    pub duality_gap: f64,
    /// Balanced labeling that was accepted, as a 0/1 vector.
    pub labeling: Vec<u8>,
}

struct Solution {
    q: Vec<f64>,
    lower: f64,
    upper: f64,
}

/// Multiplicative weights for the row player (a distribution over ground
/// vertices, gain `M_{v,d}`) against best-responding columns.
fn solve(payoff: &[Vec<bool>], n: usize, rounds: usize, eta: f64) -> Solution {
    let mut log_w = vec![0.0f64; n];
    let mut q_sum = vec![0.0f64; n];
    let mut col_hits = vec![0usize; n];
    for _ in 0..rounds {
        let top = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = log_w.iter().map(|l| (l - top).exp()).collect();
        let total: f64 = w.iter().sum();
        let q: Vec<f64> = w.iter().map(|x| x / total).collect();
        let column = best_response(payoff, &q);
        for v in 0..n {
            q_sum[v] += q[v];
            if payoff[column][v] {
                log_w[v] += eta;
                col_hits[v] += 1;
            }
        }
    }
    let q: Vec<f64> = q_sum.iter().map(|s| s / rounds as f64).collect();
    let d = best_response(payoff, &q);
    let lower = value_against(&payoff[d], &q);
    let upper = col_hits.iter().copied().max().unwrap_or(0) as f64 / rounds as f64;
    Solution { q, lower, upper }
}

fn value_against(column: &[bool], q: &[f64]) -> f64 {
    column
        .iter()
        .zip(q)
        .filter(|(m, _)| **m)
        .map(|(_, x)| x)
        .sum()
}

fn best_response(payoff: &[Vec<bool>], q: &[f64]) -> usize {
    let mut best = 0;
    let mut best_value = f64::INFINITY;
    for (d, column) in payoff.iter().enumerate() {
        let value = value_against(column, q);
        if value < best_value {
            best = d;
            best_value = value;
        }
    }
    best
}

/// Largest-remainder rounding of `q` to integer counts summing to `total`;
/// ties go to the lower index.
fn round_counts(q: &[f64], total: u64) -> Vec<u64> {
    let scaled: Vec<f64> = q.iter().map(|x| x * total as f64).collect();
    let mut counts: Vec<u64> = scaled.iter().map(|x| x.floor() as u64).collect();
    let assigned: u64 = counts.iter().sum();
    let mut order: Vec<usize> = (0..q.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = scaled[a] - scaled[a].floor();
        let rb = scaled[b] - scaled[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take(total.saturating_sub(assigned) as usize) {
        counts[i] += 1;
    }
    counts
}

fn conditional(
    adversary: &DistinguishingClass,
    counts: &[u64],
    labeling: &[u8],
    side: u8,
) -> Option<Distribution<Exact>> {
    let mass: u64 = counts
        .iter()
        .zip(labeling)
        .filter(|(_, &f)| f == side)
        .map(|(c, _)| c)
        .sum();
    if mass == 0 {
        return None;
    }
    let probs = counts
        .iter()
        .zip(labeling)
        .map(|(&c, &f)| {
            let c = if f == side { c } else { 0 };
            Exact::new(BigInt::from(c), BigInt::from(mass))
        })
        .collect();
    Distribution::new(adversary.universe().clone(), probs).ok()
}

fn balanced_labelings(
    n: usize,
    seed: u64,
    config: &GameConfig,
) -> Box<dyn Iterator<Item = Vec<u8>>> {
    let ones = n / 2;
    let random = (0..config.random_labelings).map(move |i| {
        let mut f: Vec<u8> = (0..n).map(|v| u8::from(v < ones)).collect();
        f.shuffle(&mut rng_for(seed, &[i as u64]));
        f
    });
    if n <= config.exhaustive_limit {
        let exhaustive = (0..n).combinations(ones).map(move |set| {
            let mut f = vec![0u8; n];
            for v in set {
                f[v] = 1;
            }
            f
        });
        Box::new(random.chain(exhaustive).take(config.max_labelings))
    } else {
        Box::new(random.take(config.max_labelings))
    }
}

/// Solves, for a balanced labeling `f`, the game with payoff
/// `M_{v,d} = 1[d(v) ≠ f(v)]` by multiplicative weights, rounds the averaged
/// strategy `q` to a sparse rational one, and returns `q(·|f=0)` and
/// `q(·|f=1)` once they certify. Labelings are tried randomly first, then
/// exhaustively on small ground sets.
pub fn disjoint_pair_by_game(
    adversary: &DistinguishingClass,
    epsilon: f64,
    seed: u64,
    config: GameConfig,
) -> Result<(DisjointPair, GameDiagnostics)> {
    if adversary.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: adversary.arity(),
        });
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::OutOfRange(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if config.denominator == 0 {
        return Err(Error::OutOfRange("denominator must be positive".into()));
    }
    let n = adversary.universe().size();
    if n < 2 {
        return Err(Error::Construction(
            "ground set needs at least two vertices".into(),
        ));
    }
    if let Some(c) = config.ground_constant {
        let rho = vc_dim_with(adversary, VcConfig::unbounded())?
            .dimension
            .max(1) as f64;
        let x = rho / (epsilon * epsilon);
        let required = c * x * x.ln().powi(2);
        if (n as f64) <= required {
            return Err(Error::Construction(format!(
                "ground set of {n} vertices does not exceed the required {required:.1}"
            )));
        }
    }
    let rounds = config
        .rounds
        .unwrap_or_else(|| (10.0 * (n as f64).ln() / (epsilon * epsilon)).ceil() as usize)
        .max(1);
    let eta = ((n as f64).ln() / rounds as f64).sqrt();

    let mut tried = 0;
    let mut best_value = f64::NEG_INFINITY;
    let mut best_ipm: Option<Exact> = None;
    for labeling in balanced_labelings(n, seed, &config) {
        tried += 1;
        let payoff: Vec<Vec<bool>> = adversary
            .graphs()
            .iter()
            .map(|d| {
                (0..n)
                    .map(|v| d.contains(&[v]) != (labeling[v] == 1))
                    .collect()
            })
            .collect();
        let solution = solve(&payoff, n, rounds, eta);
        best_value = best_value.max(solution.lower);
        let counts = round_counts(&solution.q, config.denominator);
        let (Some(q1), Some(q2)) = (
            conditional(adversary, &counts, &labeling, 0),
            conditional(adversary, &counts, &labeling, 1),
        ) else {
            continue;
        };
        match certify_pair(adversary, &q1, &q2, epsilon) {
            Ok(ipm) => {
                let diagnostics = GameDiagnostics {
                    labelings_tried: tried,
                    rounds,
                    eta,
                    game_value: solution.lower,
                    upper_value: solution.upper,
                    duality_gap: solution.upper - solution.lower,
                    labeling,
                };
                let pair = DisjointPair {
                    q1,
                    q2,
                    achieved_ipm: ipm,
                    epsilon,
                    attempts: tried,
                };
                return Ok((pair, diagnostics));
            }
            Err(Error::Construction(_)) => {
                let ipm = crate::metrics::ipm_exact(adversary, &q1, &q2)?.value;
                if best_ipm.as_ref().is_none_or(|b| ipm < *b) {
                    best_ipm = Some(ipm);
                }
            }
            Err(other) => return Err(other),
        }
    }
    Err(Error::Construction(format!(
        "no certified pair after {tried} labelings; best game value {:.6}, best IPM {}",
        best_value + 0.0,
        best_ipm.map_or_else(|| "n/a".to_string(), |b| b.render())
    )))
}
