use rand::Rng;

use crate::capacity::{vc_dim_with, VcConfig};
use crate::class::DistinguishingClass;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::metrics::ipm_exact;
use crate::sample::Sample;
use crate::scalar::{Exact, Scalar};
use crate::seed::rng_for;

/// Two distributions with disjoint supports that a class nearly cannot
/// separate: `IPM(q1, q2) < ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisjointPair {
    pub q1: Distribution<Exact>,
    pub q2: Distribution<Exact>,
    pub achieved_ipm: Exact,
    pub epsilon: f64,
    /// 1-based count of candidates examined before success.
    pub attempts: usize,
}

impl DisjointPair {
    /// Re-runs [`certify_pair`] against `adversary`.
    pub fn certify(&self, adversary: &DistinguishingClass) -> Result<Exact> {
        certify_pair(adversary, &self.q1, &self.q2, self.epsilon)
    }
}

/// Checks disjointness and `IPM_adversary(q1, q2) < ε` exactly, returning the
/// IPM.
pub fn certify_pair(
    adversary: &DistinguishingClass,
    q1: &Distribution<Exact>,
    q2: &Distribution<Exact>,
    epsilon: f64,
) -> Result<Exact> {
    let overlap = q1
        .probs()
        .iter()
        .zip(q2.probs())
        .position(|(a, b)| !a.is_zero() && !b.is_zero());
    if let Some(v) = overlap {
        return Err(Error::Construction(format!("supports share vertex {v}")));
    }
    let ipm = ipm_exact(adversary, q1, q2)?.value;
    if ipm >= Exact::from_f64(epsilon)? {
        return Err(Error::Construction(format!(
            "IPM {} is not below {epsilon}",
            ipm.render()
        )));
    }
    Ok(ipm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    pub max_retries: usize,
    /// Overrides the default draw size `⌈max(ρ,1)/ε²⌉`.
    pub sample_size: Option<usize>,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            max_retries: 64,
            sample_size: None,
        }
    }
}

/// Draws two uniform samples from the adversary's ground set and takes their
/// empirical distributions, retrying with derived seeds until the pair is
/// disjoint and certified.
pub fn disjoint_pair_by_sampling(
    adversary: &DistinguishingClass,
    epsilon: f64,
    seed: u64,
    config: SamplingConfig,
) -> Result<DisjointPair> {
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
    let m = match config.sample_size {
        Some(m) => m,
        None => {
            let rho = vc_dim_with(adversary, VcConfig::unbounded())?
                .dimension
                .max(1);
            (rho as f64 / (epsilon * epsilon)).ceil() as usize
        }
    };
    if m == 0 {
        return Err(Error::InvalidSample("sample size must be positive".into()));
    }
    let universe = adversary.universe();
    let n = universe.size();
    let threshold = Exact::from_f64(epsilon)?;
    let mut best: Option<Exact> = None;
    for attempt in 0..config.max_retries {
        let mut rng = rng_for(seed, &[attempt as u64]);
        let mut draw = || {
            let vertices = (0..m).map(|_| rng.gen_range(0..n)).collect();
            Sample::new(universe.clone(), vertices)
        };
        let (s1, s2) = (draw()?, draw()?);
        let q1 = Distribution::<Exact>::empirical(&s1);
        let q2 = Distribution::<Exact>::empirical(&s2);
        let disjoint = q1
            .probs()
            .iter()
            .zip(q2.probs())
            .all(|(a, b)| a.is_zero() || b.is_zero());
        if !disjoint {
            continue;
        }
        let ipm = ipm_exact(adversary, &q1, &q2)?.value;
        if ipm < threshold {
            return Ok(DisjointPair {
                q1,
                q2,
                achieved_ipm: ipm,
                epsilon,
                attempts: attempt + 1,
            });
        }
        if best.as_ref().is_none_or(|b| ipm < *b) {
            best = Some(ipm);
        }
    }
    Err(Error::Construction(match best {
        Some(b) => format!(
            "no certified pair after {} attempts (samples of {m}); best IPM among disjoint pairs {}",
            config.max_retries,
            b.render()
        ),
        None => format!(
            "no disjoint pair after {} attempts (samples of {m} from {n} vertices)",
            config.max_retries
        ),
    }))
}
