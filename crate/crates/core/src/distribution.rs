use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::scalar::{Exact, Scalar};
use crate::universe::{Universe, Vertex};

/// A probability vector over a finite universe.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T: Scalar = f64> {
    universe: Universe,
    probs: Vec<T>,
}

impl<T: Scalar> Distribution<T> {
    pub fn new(universe: Universe, probs: Vec<T>) -> Result<Self> {
        if probs.len() != universe.size() {
            return Err(Error::InvalidDistribution(format!(
                "{} probabilities for {} vertices",
                probs.len(),
                universe.size()
            )));
        }
        if let Some(v) = probs.iter().position(|p| p.is_negative()) {
            return Err(Error::InvalidDistribution(format!(
                "negative mass at vertex {v}"
            )));
        }
        let total = probs.iter().cloned().fold(T::zero(), |a, b| a + b);
        if !total.is_unit_mass() {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {}",
                total.render()
            )));
        }
        Ok(Distribution { universe, probs })
    }

    pub fn uniform(universe: Universe) -> Self {
        let n = universe.size();
        let probs = vec![T::from_ratio(1, n as u128); n];
        Distribution { universe, probs }
    }

    /// Uniform over `vertices` (repetitions add mass).
    pub fn uniform_on(universe: Universe, vertices: &[Vertex]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let mut counts = vec![0u128; universe.size()];
        for &v in vertices {
            universe.check_vertex(v)?;
            counts[v] += 1;
        }
        let m = vertices.len() as u128;
        let probs = counts.into_iter().map(|c| T::from_ratio(c, m)).collect();
        Ok(Distribution { universe, probs })
    }

    pub fn point_mass(universe: Universe, v: Vertex) -> Result<Self> {
        universe.check_vertex(v)?;
        let mut probs = vec![T::zero(); universe.size()];
        probs[v] = T::one();
        Ok(Distribution { universe, probs })
    }

    /// Empirical distribution of a sample.
    pub fn empirical(sample: &Sample) -> Self {
        Self::uniform_on(sample.universe().clone(), sample.vertices())
            .expect("samples are non-empty and in range")
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob(&self, v: Vertex) -> &T {
        &self.probs[v]
    }

    /// Vertices with positive mass, ascending.
    pub fn support(&self) -> Vec<Vertex> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(v, _)| v)
            .collect()
    }

    /// `q·δ_v + (1−q)·p`.
    pub fn mixture(&self, v: Vertex, q: &T) -> Result<Self> {
        self.universe.check_vertex(v)?;
        if q.is_negative() || *q > T::one() {
            return Err(Error::OutOfRange(format!(
                "mixture weight {} outside [0, 1]",
                q.render()
            )));
        }
        let rest = T::one() - q.clone();
        let probs = self
            .probs
            .iter()
            .enumerate()
            .map(|(u, p)| {
                let base = rest.clone() * p.clone();
                if u == v {
                    base + q.clone()
                } else {
                    base
                }
            })
            .collect();
        Ok(Distribution {
            universe: self.universe.clone(),
            probs,
        })
    }

    pub fn to_f64(&self) -> Distribution<f64> {
        Distribution {
            universe: self.universe.clone(),
            probs: self.probs.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub fn to_exact(&self) -> Result<Distribution<Exact>> {
        let probs = self
            .probs
            .iter()
            .map(|p| <Exact as Scalar>::from_f64(p.to_f64()))
            .collect::<Result<Vec<_>>>()?;
        Distribution::new(self.universe.clone(), probs)
    }

    /// Re-homes the masses onto a larger universe, vertex ids unchanged.
    pub fn embed(&self, target: &Universe) -> Result<Self> {
        if target.size() < self.universe.size() {
            return Err(Error::UniverseMismatch);
        }
        let mut probs = self.probs.clone();
        probs.resize(target.size(), T::zero());
        Ok(Distribution {
            universe: target.clone(),
            probs,
        })
    }

    pub fn sampler(&self) -> Sampler {
        Sampler::new(self)
    }

    /// `m` IID draws, reproducible from `seed`.
    pub fn sample(&self, m: usize, seed: u64) -> Result<Sample> {
        if m == 0 {
            return Err(Error::InvalidSample(
                "sample size must be at least 1".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(self.sampler().sample(m, &mut rng))
    }
}

/// Convenience wrapper over [`Distribution::sample`].
pub fn sample_from<T: Scalar>(p: &Distribution<T>, m: usize, seed: u64) -> Result<Sample> {
    p.sample(m, seed)
}

/// Inverse-CDF sampler over the support of a distribution.
#[derive(Debug, Clone)]
pub struct Sampler {
    universe: Universe,
    support: Vec<Vertex>,
    cumulative: Vec<f64>,
}

impl Sampler {
    fn new<T: Scalar>(p: &Distribution<T>) -> Self {
        let support = p.support();
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = support
            .iter()
            .map(|&v| {
                acc += p.prob(v).to_f64();
                acc
            })
            .collect();
        // last bucket absorbs rounding so every uniform draw lands somewhere
        if let Some(last) = cumulative.last_mut() {
            *last = f64::INFINITY;
        }
        Sampler {
            universe: p.universe().clone(),
            support,
            cumulative,
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vertex {
        let u: f64 = rng.gen();
        let idx = self.cumulative.partition_point(|&c| c <= u);
        self.support[idx.min(self.support.len() - 1)]
    }

    pub fn sample<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> Sample {
        let vertices = (0..m).map(|_| self.draw(rng)).collect();
        Sample::new_unchecked(self.universe.clone(), vertices)
    }
}

/// Per-draw coin flip between `δ_v` (probability `q`) and a base sampler.
#[derive(Debug, Clone)]
pub struct MixtureSampler {
    base: Sampler,
    vertex: Vertex,
    weight: f64,
}

impl MixtureSampler {
    pub fn new(base: Sampler, vertex: Vertex, weight: f64) -> Result<Self> {
        base.universe().check_vertex(vertex)?;
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::OutOfRange(format!(
                "mixture weight {weight} outside [0, 1]"
            )));
        }
        Ok(MixtureSampler {
            base,
            vertex,
            weight,
        })
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vertex {
        if rng.gen::<f64>() < self.weight {
            self.vertex
        } else {
            self.base.draw(rng)
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> Sample {
        let vertices = (0..m).map(|_| self.draw(rng)).collect();
        Sample::new_unchecked(self.base.universe().clone(), vertices)
    }
}
