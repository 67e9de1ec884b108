//! ERM discriminators, closeness testers, the mixture-lifted tester and the
//! discriminator-to-predictor reduction.

use rayon::prelude::*;
use serde::Serialize;

use crate::class::DistinguishingClass;
use crate::distribution::{Distribution, MixtureSampler};
use crate::error::{Error, Result};
use crate::frequency::{edge_freq_empirical, edge_freq_true};
use crate::hypergraph::Hypergraph;
use crate::metrics::{ipm_exact, sampled_gaps};
use crate::sample::Sample;
use crate::scalar::Scalar;
use crate::seed::{derive_seed, rng_for};
use crate::universe::{ensure_same, Vertex};

/// Default constant `C` in `m = C·ρk²/ε²·ln(1/δ)`.
pub const DEFAULT_CALIBRATION: f64 = 8.0;

/// `⌈C·max(ρ,1)·k²/ε²·ln(1/δ)⌉`. A zero capacity is treated as one so
/// that finite classes still get a non-trivial sample.
pub fn calibrated_sample_size(rho: usize, k: usize, epsilon: f64, delta: f64, c: f64) -> usize {
    let rho = rho.max(1) as f64;
    let k = k as f64;
    (c * rho * k * k / (epsilon * epsilon) * (1.0 / delta).ln()).ceil() as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminationOutcome {
    /// Position of the selected member in the class.
    pub index: usize,
    pub graph: Hypergraph,
    pub empirical_gap: f64,
    /// `|ℒ_{p1}(g) − ℒ_{p2}(g)|` once [`audit`](Self::audit) has run.
    pub true_gap: Option<f64>,
}

impl DiscriminationOutcome {
    /// Fills in the true gap of the selected graph.
    pub fn audit<T: Scalar>(mut self, p1: &Distribution<T>, p2: &Distribution<T>) -> Result<Self> {
        let gap = (edge_freq_true(&self.graph, p1)? - edge_freq_true(&self.graph, p2)?).abs();
        self.true_gap = Some(gap.to_f64());
        Ok(self)
    }
}

/// Returns the member maximizing the empirical gap `|ℒ_{s1}(g) − ℒ_{s2}(g)|`,
/// lowest index on ties.
pub fn erm_discriminate(
    c: &DistinguishingClass,
    s1: &Sample,
    s2: &Sample,
) -> Result<DiscriminationOutcome> {
    let gaps = sampled_gaps(c, s1, s2)?;
    let index = gaps.witness();
    Ok(DiscriminationOutcome {
        index,
        graph: c.graphs()[index].clone(),
        empirical_gap: gaps.gap(index),
        true_gap: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Equivalent,
    Distinct,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TesterVerdict {
    pub verdict: Verdict,
    /// Holdout estimate of the selected graph's gap.
    pub witness_gap: f64,
    /// `ε/3`.
    pub threshold: f64,
    /// Class index of the selected graph.
    pub witness: usize,
}

/// ERM on `(s1, s2)`, then re-estimates the chosen graph's gap on the
/// holdouts and answers DISTINCT iff that estimate reaches `ε/3`.
pub fn closeness_test(
    c: &DistinguishingClass,
    s1: &Sample,
    s2: &Sample,
    holdout1: &Sample,
    holdout2: &Sample,
    epsilon: f64,
) -> Result<TesterVerdict> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::OutOfRange(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    ensure_same(c.universe(), holdout1.universe())?;
    ensure_same(c.universe(), holdout2.universe())?;
    let selected = erm_discriminate(c, s1, s2)?;
    let a = edge_freq_empirical(&selected.graph, holdout1)?;
    let b = edge_freq_empirical(&selected.graph, holdout2)?;
    let witness_gap = (a.to_f64() - b.to_f64()).abs();
    let threshold = epsilon / 3.0;
    let verdict = if witness_gap >= threshold {
        Verdict::Distinct
    } else {
        Verdict::Equivalent
    };
    Ok(TesterVerdict {
        verdict,
        witness_gap,
        threshold,
        witness: selected.index,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftedRun {
    pub q: f64,
    pub result: TesterVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftedVerdict {
    pub verdict: Verdict,
    /// `2^{−3k²}·ε`, the accuracy each lifted run is held to.
    pub accuracy: f64,
    /// `δ/k`, the per-run confidence budget of the union bound.
    pub per_run_delta: f64,
    pub runs: Vec<LiftedRun>,
}

/// `c_k = 2^{−3k²}`.
pub fn lift_constant(k: usize) -> f64 {
    2f64.powi(-3 * (k * k).min(i32::MAX as usize / 3) as i32)
}

/// Tests the `k+1` mixture pairs `(p1^q, p2^q)`, `q = j/k`, each on fresh
/// samples of size `base_m` at accuracy `c_k·ε`; DISTINCT if any run is.
///
/// Mixture draws flip a `q`-coin per vertex between `δ_v` and the base
/// distribution.
#[allow(clippy::too_many_arguments)]
pub fn lifted_test<T: Scalar>(
    c: &DistinguishingClass,
    v: Vertex,
    p1: &Distribution<T>,
    p2: &Distribution<T>,
    epsilon: f64,
    delta: f64,
    base_m: usize,
    seed: u64,
) -> Result<LiftedVerdict> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::OutOfRange(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::OutOfRange(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if base_m == 0 {
        return Err(Error::InvalidSample(
            "base sample size must be positive".into(),
        ));
    }
    ensure_same(c.universe(), p1.universe())?;
    ensure_same(c.universe(), p2.universe())?;
    c.universe().check_vertex(v)?;
    let k = c.arity();
    let accuracy = lift_constant(k) * epsilon;
    let (base1, base2) = (p1.sampler(), p2.sampler());
    let mut runs = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let q = j as f64 / k as f64;
        let m1 = MixtureSampler::new(base1.clone(), v, q)?;
        let m2 = MixtureSampler::new(base2.clone(), v, q)?;
        let mut rng = rng_for(seed, &[j as u64]);
        let s1 = m1.sample(base_m, &mut rng);
        let s2 = m2.sample(base_m, &mut rng);
        let h1 = m1.sample(base_m, &mut rng);
        let h2 = m2.sample(base_m, &mut rng);
        let result = closeness_test(c, &s1, &s2, &h1, &h2, accuracy)?;
        runs.push(LiftedRun { q, result });
    }
    let verdict = if runs.iter().any(|r| r.result.verdict == Verdict::Distinct) {
        Verdict::Distinct
    } else {
        Verdict::Equivalent
    };
    Ok(LiftedVerdict {
        verdict,
        accuracy,
        per_run_delta: delta / k as f64,
        runs,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Predictor {
    /// Arity-1 graph; a vertex is predicted `+1` iff it is an edge.
    pub graph: Hypergraph,
    /// Class index of the discriminator the predictor came from.
    pub source_index: usize,
    /// Whether the discriminator was flipped to obtain the predictor.
    pub complemented: bool,
    pub training_error: f64,
}

impl Predictor {
    pub fn predict(&self, v: Vertex) -> i8 {
        if self.graph.contains(&[v]) {
            1
        } else {
            -1
        }
    }
}

fn training_error(graph: &Hypergraph, labeled: &[(Vertex, i8)]) -> f64 {
    let wrong = labeled
        .iter()
        .filter(|&&(v, y)| graph.contains(&[v]) != (y == 1))
        .count();
    wrong as f64 / labeled.len() as f64
}

/// Turns an arity-1 discriminator into a predictor for balanced labelled
/// data: positives and negatives become the two samples, ERM picks a
/// separator, and whichever of it or its complement fits the data better is
/// returned (the original on ties).
pub fn predictor_from_discriminator(
    c: &DistinguishingClass,
    labeled: &[(Vertex, i8)],
) -> Result<Predictor> {
    if c.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: c.arity(),
        });
    }
    let mut positives = Vec::new();
    let mut negatives = Vec::new();
    for &(v, y) in labeled {
        c.universe().check_vertex(v)?;
        match y {
            1 => positives.push(v),
            -1 => negatives.push(v),
            other => {
                return Err(Error::OutOfRange(format!("label {other} is not ±1")));
            }
        }
    }
    if positives.is_empty() || negatives.is_empty() {
        return Err(Error::InvalidSample(
            "labelled data must contain both labels".into(),
        ));
    }
    let s1 = Sample::new(c.universe().clone(), positives)?;
    let s2 = Sample::new(c.universe().clone(), negatives)?;
    let chosen = erm_discriminate(c, &s1, &s2)?;
    let direct = training_error(&chosen.graph, labeled);
    let flipped = chosen.graph.complement();
    let flipped_error = training_error(&flipped, labeled);
    Ok(if flipped_error < direct {
        Predictor {
            graph: flipped,
            source_index: chosen.index,
            complemented: true,
            training_error: flipped_error,
        }
    } else {
        Predictor {
            graph: chosen.graph,
            source_index: chosen.index,
            complemented: false,
            training_error: direct,
        }
    })
}

/// Outcome counts of a seeded Monte Carlo audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub trials: usize,
    pub successes: usize,
    pub ipm: f64,
    pub sample_size: usize,
}

impl AuditReport {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// Counts trials in which ERM on `m` draws per side finds a graph with true
/// gap at least `IPM − ε`.
#[allow(clippy::too_many_arguments)]
pub fn discriminator_audit<T: Scalar>(
    c: &DistinguishingClass,
    p1: &Distribution<T>,
    p2: &Distribution<T>,
    epsilon: f64,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<AuditReport> {
    let ipm = ipm_exact(c, p1, p2)?.value.to_f64();
    let (a, b) = (p1.sampler(), p2.sampler());
    let hits = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(seed, &[t as u64]);
            let s1 = a.sample(m, &mut rng);
            let s2 = b.sample(m, &mut rng);
            let outcome = erm_discriminate(c, &s1, &s2)?.audit(p1, p2)?;
            let gap = outcome.true_gap.expect("audited");
            Ok(gap >= ipm - epsilon)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(AuditReport {
        trials,
        successes: hits.into_iter().filter(|&h| h).count(),
        ipm,
        sample_size: m,
    })
}

/// Runs the closeness tester on two independent sample sets from the same
/// distribution; `successes` counts EQUIVALENT answers.
pub fn tester_soundness_audit<T: Scalar>(
    c: &DistinguishingClass,
    p: &Distribution<T>,
    epsilon: f64,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<AuditReport> {
    let sampler = p.sampler();
    let stream = derive_seed(seed, &[0x7e57]);
    let equivalent = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(stream, &[t as u64]);
            let s1 = sampler.sample(m, &mut rng);
            let s2 = sampler.sample(m, &mut rng);
            let h1 = sampler.sample(m, &mut rng);
            let h2 = sampler.sample(m, &mut rng);
            Ok(closeness_test(c, &s1, &s2, &h1, &h2, epsilon)?.verdict == Verdict::Equivalent)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(AuditReport {
        trials,
        successes: equivalent.into_iter().filter(|&e| e).count(),
        ipm: 0.0,
        sample_size: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::ipm_sampled;
    use crate::scalar::Exact;
    use crate::universe::VertexUniverse;

    fn collision_class(n: usize) -> DistinguishingClass {
        let u = VertexUniverse::new(n).unwrap();
        DistinguishingClass::singleton(
            Hypergraph::from_edges(u, 2, (0..n).map(|v| vec![v, v])).unwrap(),
        )
    }

    #[test]
    fn erm_examples() {
        let u = VertexUniverse::new(3).unwrap();
        let ps = DistinguishingClass::power_set(u.clone()).unwrap();
        let s1 = Sample::new(u.clone(), vec![0; 5]).unwrap();
        let s2 = Sample::new(u.clone(), vec![1; 4]).unwrap();
        let out = erm_discriminate(&ps, &s1, &s2).unwrap();
        assert_eq!(out.empirical_gap, 1.0);
        assert_eq!(out.index, 1);
        assert_eq!(out.graph, Hypergraph::indicator(u.clone(), &[0]).unwrap());

        let same = erm_discriminate(&ps, &s1, &s1).unwrap();
        assert_eq!((same.index, same.empirical_gap), (0, 0.0));

        let c = collision_class(2);
        let a = Sample::new(c.universe().clone(), vec![0, 0]).unwrap();
        let b = Sample::new(c.universe().clone(), vec![0, 1]).unwrap();
        let out = erm_discriminate(&c, &a, &b).unwrap();
        assert_eq!(out.empirical_gap, 0.5);
    }

    #[test]
    fn erm_matches_sampled_ipm() {
        let u = VertexUniverse::new(4).unwrap();
        let c = DistinguishingClass::all_hypergraphs(VertexUniverse::new(2).unwrap(), 2).unwrap();
        let p = Distribution::new(c.universe().clone(), vec![0.3, 0.7]).unwrap();
        let s1 = p.sample(40, 1).unwrap();
        let s2 = p.sample(35, 2).unwrap();
        let out = erm_discriminate(&c, &s1, &s2).unwrap();
        let ipm = ipm_sampled::<f64>(&c, &s1, &s2).unwrap();
        assert_eq!(out.index, ipm.witness);
        assert_eq!(out.empirical_gap, ipm.value);
        drop(u);
    }

    #[test]
    fn audit_fills_true_gap() {
        let c = collision_class(2);
        let u = c.universe().clone();
        let p1: Distribution<Exact> = Distribution::uniform(u.clone());
        let p2 = Distribution::point_mass(u.clone(), 0).unwrap();
        let s1 = Sample::new(u.clone(), vec![0, 1]).unwrap();
        let s2 = Sample::new(u, vec![0]).unwrap();
        let out = erm_discriminate(&c, &s1, &s2)
            .unwrap()
            .audit(&p1, &p2)
            .unwrap();
        assert_eq!(out.true_gap, Some(0.5));
    }

    #[test]
    fn closeness_examples() {
        let u = VertexUniverse::new(3).unwrap();
        let ps = DistinguishingClass::power_set(u.clone()).unwrap();
        let a = Sample::new(u.clone(), vec![0; 6]).unwrap();
        let b = Sample::new(u.clone(), vec![2; 6]).unwrap();
        let v = closeness_test(&ps, &a, &b, &a, &b, 0.3).unwrap();
        assert_eq!(v.verdict, Verdict::Distinct);
        assert_eq!(v.witness_gap, 1.0);
        assert!((v.threshold - 0.1).abs() < 1e-15);

        let complete = DistinguishingClass::singleton(Hypergraph::complete(u.clone(), 2).unwrap());
        let v = closeness_test(&complete, &a, &b, &a, &b, 0.3).unwrap();
        assert_eq!(v.verdict, Verdict::Equivalent);
        assert!(closeness_test(&ps, &a, &b, &a, &b, 0.0).is_err());
    }

    #[test]
    fn verdict_serializes_in_caps() {
        assert_eq!(
            serde_json::to_string(&Verdict::Distinct).unwrap(),
            "\"DISTINCT\""
        );
    }

    #[test]
    fn lifted_k1_has_two_runs_and_trivial_last() {
        let u = VertexUniverse::new(3).unwrap();
        let ps = DistinguishingClass::power_set(u.clone()).unwrap();
        let p1: Distribution = Distribution::point_mass(u.clone(), 0).unwrap();
        let p2 = Distribution::point_mass(u, 1).unwrap();
        let res = lifted_test(&ps, 2, &p1, &p2, 0.5, 0.1, 200, 3).unwrap();
        assert_eq!(res.runs.len(), 2);
        assert_eq!(res.runs[1].q, 1.0);
        assert_eq!(res.runs[1].result.verdict, Verdict::Equivalent);
        assert_eq!(res.runs[0].result.verdict, Verdict::Distinct);
        assert_eq!(res.verdict, Verdict::Distinct);
        assert_eq!(res.accuracy, 0.5 / 8.0);
    }

    #[test]
    fn lifted_is_seeded() {
        let c = collision_class(3);
        let p: Distribution = Distribution::new(c.universe().clone(), vec![0.2, 0.3, 0.5]).unwrap();
        let a = lifted_test(&c, 1, &p, &p, 0.5, 0.1, 300, 11).unwrap();
        let b = lifted_test(&c, 1, &p, &p, 0.5, 0.1, 300, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn predictor_examples() {
        let u = VertexUniverse::new(3).unwrap();
        let ps = DistinguishingClass::power_set(u.clone()).unwrap();
        let data = vec![(0, 1), (0, 1), (1, -1), (1, -1)];
        let pred = predictor_from_discriminator(&ps, &data).unwrap();
        assert_eq!(pred.training_error, 0.0);
        assert_eq!(pred.predict(0), 1);
        assert_eq!(pred.predict(1), -1);

        assert!(predictor_from_discriminator(&ps, &[(0, 1), (1, 1)]).is_err());
        assert!(predictor_from_discriminator(&ps, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn predictor_flips_when_complement_fits_better() {
        let u = VertexUniverse::new(2).unwrap();
        // only {1} is available; positives sit on 0, so the complement wins
        let c = DistinguishingClass::singleton(Hypergraph::indicator(u, &[1]).unwrap());
        let pred = predictor_from_discriminator(&c, &[(0, 1), (1, -1)]).unwrap();
        assert!(pred.complemented);
        assert_eq!(pred.training_error, 0.0);
    }

    #[test]
    fn sample_size_formula() {
        let m = calibrated_sample_size(2, 2, 0.1, 0.1, 8.0);
        assert_eq!(m, (8.0 * 2.0 * 4.0 / 0.01 * 10f64.ln()).ceil() as usize);
        assert_eq!(
            calibrated_sample_size(0, 1, 0.5, 0.5, 1.0),
            calibrated_sample_size(1, 1, 0.5, 0.5, 1.0)
        );
    }

    #[test]
    fn lift_constant_values() {
        assert_eq!(lift_constant(1), 0.125);
        assert_eq!(lift_constant(2), 2f64.powi(-12));
    }
}
