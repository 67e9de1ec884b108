//! Structural invariants as property tests.

mod common;

use common::*;
use hyperdisc::capacity::{graph_vc_dim, restriction_count, sauer_bound, vc_dim};
use hyperdisc::constructions::{
    certify_pair, disjoint_pair_by_sampling, embed_adversary, hard_pair, SamplingConfig,
    SubsetUniverse,
};
use hyperdisc::discrimination::{closeness_test, erm_discriminate, Verdict};
use hyperdisc::experiments::sensitivity_experiment;
use hyperdisc::metrics::{
    ipm_exact, ipm_sampled, lifted_ipm_grid, mixture_ipm_expansion, tv_distance,
};
use hyperdisc::seed::rng_for;
use hyperdisc::vandermonde::{build_vandermonde, jacobi_singular_values, lu_det_abs};
use hyperdisc::{
    edge_freq_empirical, edge_freq_true, DistinguishingClass, Distribution, Exact, Hypergraph,
    Sample, Scalar, VertexUniverse,
};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::Rng;

fn ratio(n: u128, d: u128) -> Exact {
    Exact::from_ratio(n, d)
}

/// `(class, p1, p2)` on a shared universe.
fn instance(
    n: std::ops::RangeInclusive<usize>,
    k: std::ops::RangeInclusive<usize>,
    members: usize,
) -> impl Strategy<
    Value = (
        DistinguishingClass,
        Distribution<Exact>,
        Distribution<Exact>,
    ),
> {
    (n, k).prop_flat_map(move |(n, k)| {
        let u = VertexUniverse::new(n).unwrap();
        (class(&u, k, members), exact_dist(&u), exact_dist(&u))
    })
}

fn fraction() -> impl Strategy<Value = Exact> {
    (0u128..=6).prop_map(|a| ratio(a, 6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn frequency_is_invariant_under_relabelling(
        (g, p, perm) in (1usize..=5, 1usize..=3).prop_flat_map(|(n, k)| {
            let u = VertexUniverse::new(n).unwrap();
            (hypergraph(&u, k), exact_dist(&u), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let u = g.universe().clone();
        let moved = Hypergraph::from_edges(
            u.clone(),
            g.arity(),
            g.edges().iter().map(|e| e.iter().map(|&v| perm[v]).collect::<Vec<_>>()),
        ).unwrap();
        let mut probs = vec![Exact::zero(); u.size()];
        for (v, x) in p.probs().iter().enumerate() {
            probs[perm[v]] = x.clone();
        }
        let q = Distribution::new(u, probs).unwrap();
        prop_assert_eq!(edge_freq_true(&g, &p).unwrap(), edge_freq_true(&moved, &q).unwrap());
    }

    #[test]
    fn frequency_decomposes_over_the_first_slot(
        (g, p) in (1usize..=5, 2usize..=3).prop_flat_map(|(n, k)| {
            let u = VertexUniverse::new(n).unwrap();
            (hypergraph(&u, k), exact_dist(&u))
        })
    ) {
        let total = p.universe().vertices().fold(Exact::zero(), |acc, v| {
            acc + p.prob(v).clone() * edge_freq_true(&g.project(&[v]).unwrap(), &p).unwrap()
        });
        prop_assert_eq!(edge_freq_true(&g, &p).unwrap(), total);
    }

    #[test]
    fn projection_is_the_pinned_conditional_expectation(
        (g, p, pins) in (1usize..=4, 2usize..=3).prop_flat_map(|(n, k)| {
            let u = VertexUniverse::new(n).unwrap();
            (hypergraph(&u, k), exact_dist(&u), prop::collection::vec(0..n, 1..k))
        })
    ) {
        let n = p.universe().size();
        let free = g.arity() - pins.len();
        let direct = ordered_tuples(n, free).into_iter().fold(Exact::zero(), |acc, rest| {
            let mut t = pins.clone();
            t.extend(&rest);
            if g.contains(&t) {
                acc + rest.iter().fold(Exact::one(), |w, &v| w * p.prob(v).clone())
            } else {
                acc
            }
        });
        prop_assert_eq!(edge_freq_true(&g.project(&pins).unwrap(), &p).unwrap(), direct);
    }

    #[test]
    fn nested_mixtures_telescope(
        (p, v, q, r) in universe(1..=5).prop_flat_map(|u| {
            let n = u.size();
            (exact_dist(&u), 0..n, fraction(), fraction())
        })
    ) {
        let nested = p.mixture(v, &q).unwrap().mixture(v, &r).unwrap();
        let combined = q.clone() + r.clone() - q * r;
        prop_assert_eq!(nested, p.mixture(v, &combined).unwrap());
    }

    #[test]
    fn ipm_is_a_pseudometric(
        (c, p1, p2, p3) in (1usize..=4, 1usize..=3).prop_flat_map(|(n, k)| {
            let u = VertexUniverse::new(n).unwrap();
            (class(&u, k, 5), exact_dist(&u), exact_dist(&u), exact_dist(&u))
        })
    ) {
        let d = |a: &Distribution<Exact>, b: &Distribution<Exact>| ipm_exact(&c, a, b).unwrap().value;
        prop_assert!(d(&p1, &p1).is_zero());
        prop_assert_eq!(d(&p1, &p2), d(&p2, &p1));
        prop_assert!(d(&p1, &p3) <= d(&p1, &p2) + d(&p2, &p3));
        prop_assert!(d(&p1, &p2) <= Exact::one());
    }

    #[test]
    fn arity_one_ipm_is_dominated_by_total_variation(
        (c, p1, p2) in instance(1..=6, 1..=1, 8)
    ) {
        prop_assert!(ipm_exact(&c, &p1, &p2).unwrap().value <= tv_distance(&p1, &p2).unwrap());
    }

    #[test]
    fn mixture_expansion_identity(
        ((c, p1, p2), v, q) in instance(1..=4, 1..=3, 4).prop_flat_map(|inst| {
            let n = inst.0.universe().size();
            (Just(inst), 0..n, fraction())
        })
    ) {
        let (lhs, rhs) = mixture_ipm_expansion(&c, v, &q, &p1, &p2).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn capacities_shrink_when_members_are_removed(
        (c, i) in prop_oneof![
            universe(1..=5).prop_flat_map(|u| class(&u, 1, 10)),
            universe(1..=3).prop_flat_map(|u| class(&u, 2, 8)),
        ].prop_flat_map(|c| { let len = c.len(); (Just(c), 0..len) })
    ) {
        if let Some(smaller) = c.without(i) {
            if c.arity() == 1 {
                prop_assert!(vc_dim(&smaller).unwrap().dimension <= vc_dim(&c).unwrap().dimension);
            }
            prop_assert!(graph_vc_dim(&smaller).unwrap().dimension <= graph_vc_dim(&c).unwrap().dimension);
        }
    }

    #[test]
    fn projection_does_not_raise_graph_vc(
        (c, v) in (1usize..=4, 2usize..=3)
            .prop_flat_map(|(n, k)| class(&VertexUniverse::new(n).unwrap(), k, 8))
            .prop_flat_map(|c| { let n = c.universe().size(); (Just(c), 0..n) })
    ) {
        let projected = c.project(&[v]).unwrap();
        prop_assert!(graph_vc_dim(&projected).unwrap().dimension <= graph_vc_dim(&c).unwrap().dimension);
    }

    #[test]
    fn restriction_count_obeys_sauer(
        (c, mask) in universe(1..=6)
            .prop_flat_map(|u| class(&u, 1, 16))
            .prop_flat_map(|c| { let n = c.universe().size(); (Just(c), 0u32..(1 << n)) })
    ) {
        let set: Vec<usize> = (0..c.universe().size()).filter(|&v| mask >> v & 1 == 1).collect();
        let count = restriction_count(&c, &set).unwrap();
        let d = vc_dim(&c).unwrap().dimension;
        prop_assert!(BigUint::from(count) <= sauer_bound(d, set.len()));
    }

    #[test]
    fn erm_attains_the_sampled_ipm(
        (c, a, b) in (1usize..=5, 1usize..=3).prop_flat_map(|(n, k)| {
            let u = VertexUniverse::new(n).unwrap();
            (class(&u, k, 6), prop::collection::vec(0..n, 1..=12), prop::collection::vec(0..n, 1..=12))
        })
    ) {
        let s1 = Sample::new(c.universe().clone(), a).unwrap();
        let s2 = Sample::new(c.universe().clone(), b).unwrap();
        let best = ipm_sampled::<f64>(&c, &s1, &s2).unwrap();
        let erm = erm_discriminate(&c, &s1, &s2).unwrap();
        prop_assert_eq!(erm.index, best.witness);
        prop_assert_eq!(erm.empirical_gap, best.value);
        for gap in best.per_graph_gaps {
            prop_assert!(gap <= erm.empirical_gap);
        }
    }

    #[test]
    fn tester_verdict_follows_the_threshold(
        (c, samples, eps) in (1usize..=4, 1usize..=2).prop_flat_map(|(n, k)| {
            let u = VertexUniverse::new(n).unwrap();
            let s = prop::collection::vec(0..n, 1..=10);
            (class(&u, k, 5), [s.clone(), s.clone(), s.clone(), s], 0.01f64..1.0)
        })
    ) {
        let u = c.universe().clone();
        let [a, b, h1, h2] = samples.map(|vs| Sample::new(u.clone(), vs).unwrap());
        let v = closeness_test(&c, &a, &b, &h1, &h2, eps).unwrap();
        prop_assert_eq!(v.threshold, eps / 3.0);
        prop_assert_eq!(v.verdict == Verdict::Distinct, v.witness_gap >= v.threshold);
    }

    #[test]
    fn lifted_grid_is_bounded_below(
        ((c, p1, p2), v) in instance(1..=4, 2..=3, 4).prop_flat_map(|inst| {
            let n = inst.0.universe().size();
            (Just(inst), 0..n)
        })
    ) {
        let k = c.arity();
        let eps = ipm_exact(&c.project(&[v]).unwrap(), &p1, &p2).unwrap().value;
        let grid_max = lifted_ipm_grid(&c, v, &p1, &p2)
            .unwrap()
            .into_iter()
            .map(|(_, x)| x)
            .fold(Exact::zero(), |a, b| if b > a { b } else { a });
        let scale = ratio(1, 1u128 << (3 * k * k));
        prop_assert!(grid_max >= eps * scale);
    }

    #[test]
    fn hard_pair_scales_the_adversary_ipm(
        (ell, k, c, q1, q2) in (2usize..=4, 2usize..=4).prop_flat_map(|(ell, k)| {
            let base = VertexUniverse::new(ell).unwrap();
            (Just(ell), Just(k), class(&base, 1, 6), exact_dist(&base), exact_dist(&base))
        })
    ) {
        let su = SubsetUniverse::new(ell).unwrap();
        let pair = hard_pair(&su, &q1, &q2, k).unwrap();
        let lifted = embed_adversary(&su, &c).unwrap();
        let scale = ratio(k as u128 - 1, k as u128);
        prop_assert_eq!(
            ipm_exact(&lifted, &pair.p1, &pair.p2).unwrap().value,
            ipm_exact(&c, &q1, &q2).unwrap().value * scale
        );
    }

    #[test]
    fn sampled_disjoint_pairs_recertify(
        (c, eps, seed) in universe(4..=8)
            .prop_flat_map(|u| class(&u, 1, 4))
            .prop_flat_map(|c| (Just(c), 0.3f64..0.9, any::<u64>()))
    ) {
        if let Ok(pair) = disjoint_pair_by_sampling(&c, eps, seed, SamplingConfig::default()) {
            let again = certify_pair(&c, &pair.q1, &pair.q2, eps).unwrap();
            prop_assert_eq!(&again, &pair.achieved_ipm);
            prop_assert!(again.to_f64() < eps);
            prop_assert!(pair
                .q1
                .probs()
                .iter()
                .zip(pair.q2.probs())
                .all(|(a, b)| a.is_zero() || b.is_zero()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn replacing_one_draw_moves_the_deviation_by_at_most_two_k_over_m(
        ((c, p, _), m, seed) in instance(2..=5, 1..=3, 4)
            .prop_flat_map(|inst| (Just(inst), 3usize..=30, any::<u64>()))
    ) {
        let report = sensitivity_experiment(&c, &p.to_f64(), m, 40, seed).unwrap();
        prop_assert_eq!(report.violations, 0, "max difference {}", report.max_difference);
    }

    #[test]
    fn vandermonde_norm_chain(k in 1usize..=8, seed in any::<u64>()) {
        let v = build_vandermonde(k).unwrap();
        let (sv, _) = jacobi_singular_values(&v).unwrap();
        let (smallest, largest) = (sv[0], sv[k]);
        let mut rng = rng_for(seed, &[]);
        let a: Vec<f64> = (0..=k).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let va: Vec<f64> = v.iter().map(|row| row.iter().zip(&a).map(|(x, y)| x * y).sum()).collect();
        let norm = |x: &[f64]| x.iter().map(|t| t * t).sum::<f64>().sqrt();
        let inf = va.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        prop_assert!(norm(&va) >= smallest * norm(&a) * (1.0 - 1e-9));
        prop_assert!(norm(&va) <= largest * norm(&a) * (1.0 + 1e-9));
        // ‖x‖∞ ≥ ‖x‖₂/√(k+1)
        prop_assert!(inf * ((k + 1) as f64).sqrt() >= norm(&va) * (1.0 - 1e-12));
    }
}

#[test]
fn empirical_frequency_mean_converges() {
    let m = 2000;
    let mut rng = rng_for(17, &[]);
    for k in 1..=3 {
        for n in 1..=5 {
            let u = VertexUniverse::new(n).unwrap();
            let edges = multisets(n, k).into_iter().filter(|_| rng.gen_bool(0.5));
            let g = Hypergraph::from_canonical_edges(u.clone(), k, edges).unwrap();
            let w: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=8)).collect();
            let p = Distribution::new(u, exact_probs(&w)).unwrap().to_f64();
            let mean = (0..200u64)
                .map(|t| {
                    edge_freq_empirical(&g, &p.sample(m, t).unwrap())
                        .unwrap()
                        .to_f64()
                })
                .sum::<f64>()
                / 200.0;
            let diff = (mean - edge_freq_true(&g, &p).unwrap()).abs();
            let tol = 3.0 * (1.0 / (4.0 * m as f64)).sqrt() * k as f64;
            assert!(diff <= tol, "k={k} n={n} diff={diff}");
        }
    }
}

#[test]
fn jacobi_agrees_with_an_independent_svd() {
    for k in 1..=8 {
        let v = build_vandermonde(k).unwrap();
        let (ours, _) = jacobi_singular_values(&v).unwrap();
        let m = nalgebra::DMatrix::from_fn(k + 1, k + 1, |i, j| v[i][j]);
        let mut theirs: Vec<f64> = m.clone().singular_values().iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.iter().zip(&theirs) {
            assert!(
                (a - b).abs() <= 1e-9 * b.max(1e-300) + 1e-15,
                "k={k}: {a} vs {b}"
            );
        }
        let det = m.determinant().abs();
        assert!((lu_det_abs(&v) - det).abs() <= 1e-9 * det, "k={k}");
    }
}
