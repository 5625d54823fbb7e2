mod common;

use bernoulli_entropy::chenstein::{
    coefficients_independent, tv_lower_barbour_hall, tv_upper_agg, tv_upper_barbour_hall,
    tv_upper_lecam, IndexSetSize,
};
use bernoulli_entropy::entropybound::{
    a_of_lambda, best_independent_bound, entropy_bound_corollary, entropy_bound_proposition,
    entropy_bound_theorem4, g_of_p, MomentSummary,
};
use bernoulli_entropy::examples::{
    hypercube_coefficients, hypercube_monte_carlo, HypercubeSpec, MonteCarloSpec,
};
use bernoulli_entropy::exactsum::{exact_distribution, pmf_entropy, tv_to_poisson, BernoulliSystem, Pmf};
use bernoulli_entropy::poisson::{
    binomial_entropy, poisson_entropy, poisson_entropy_asymptotic, poisson_entropy_series,
    PoissonParams,
};
use bernoulli_entropy::{Error, LogF32, LogF64};
use common::{random_probs, Uniform};
use proptest::prelude::*;

fn po(lambda: f64) -> PoissonParams<f64> {
    PoissonParams::new(lambda).unwrap()
}

fn system(probs: Vec<f64>) -> BernoulliSystem<f64> {
    BernoulliSystem::new(probs).unwrap()
}

#[test]
fn sandwich_and_corollary_containment() {
    let mut rng = Uniform::new(11);
    let mut contained = 0;
    for _ in 0..200 {
        let n = rng.int(1, 200);
        let s = system(random_probs(&mut rng, n, 0.2));
        if s.lambda() == 0.0 {
            continue;
        }
        let pmf = exact_distribution(&s).unwrap();
        let tv = tv_to_poisson(&pmf, s.lambda(), 1e-15).unwrap();
        let (lo, hi) = (
            tv_lower_barbour_hall(s.lambda(), s.sum_p_squared()),
            tv_upper_barbour_hall(s.lambda(), s.sum_p_squared()),
        );
        assert!(lo - 1e-9 <= tv && tv <= hi + 1e-9, "{tv} not in [{lo}, {hi}]");

        let gap = poisson_entropy_series(po(s.lambda()), 1e-12).unwrap().nats - pmf_entropy(&pmf).nats;
        assert!(gap >= -1e-12, "H(Z) < H(W): {gap}");
        if let Ok(r) = entropy_bound_corollary(&MomentSummary::from_system(&s).unwrap(), 1e-12) {
            contained += 1;
            assert!(gap <= r.epsilon.value() + 1e-9);
        }
    }
    assert!(contained > 100);
}

// |H(P) - H(Q)| ≤ -‖P-Q‖₁ ln(‖P-Q‖₁ / |X|) when ‖P-Q‖₁ ≤ ½.
#[test]
fn l1_entropy_inequality_on_finite_support() {
    let mut rng = Uniform::new(12);
    let mut checked = 0;
    for _ in 0..200 {
        let n = rng.int(2, 60);
        let p = system(random_probs(&mut rng, n, 0.3));
        let mean = p.lambda() / n as f64;
        let q = system(vec![mean; n]);
        let (pp, pq) = (exact_distribution(&p).unwrap(), exact_distribution(&q).unwrap());
        let l1: f64 = pp.mass().iter().zip(pq.mass()).map(|(a, b)| (a - b).abs()).sum();
        if l1 == 0.0 || l1 > 0.5 {
            continue;
        }
        checked += 1;
        let diff = (pmf_entropy(&pp).nats - pmf_entropy(&pq).nats).abs();
        let bound = -l1 * (l1 / (n + 1) as f64).ln();
        assert!(diff <= bound + 1e-12, "{diff} > {bound}");
    }
    assert!(checked > 50);
}

#[test]
fn series_and_expansion_agree() {
    for lambda in [50.0, 200.0, 1000.0] {
        let s = poisson_entropy_series(po(lambda), 1e-9).unwrap().nats;
        let a = poisson_entropy_asymptotic(po(lambda)).unwrap().nats;
        assert!((s - a).abs() <= lambda.powi(-3) + 1e-6, "lambda {lambda}: {s} vs {a}");
    }
}

#[test]
fn binomial_never_exceeds_poisson() {
    for lambda in [0.3, 2.0, 7.5, 40.0] {
        let h = poisson_entropy(po(lambda), 1e-12).unwrap().nats;
        for n in [lambda.ceil() as u64, 50, 500, 5000] {
            assert!(binomial_entropy(n, lambda / n as f64).unwrap().nats <= h + 1e-9);
        }
    }
}

#[test]
fn lecam_improvement_tends_to_one_over_lambda() {
    for lambda in [1e2f64, 1e4, 1e6] {
        let s2 = 1e-3 * lambda;
        let ratio = tv_upper_barbour_hall(lambda, s2) / tv_upper_lecam(s2);
        assert!(ratio < 1.0);
        assert!((ratio * lambda - 1.0).abs() < 1e-9);
    }
}

#[test]
fn proposition_beats_corollary_only_for_small_theta() {
    let m = IndexSetSize::Count(100_000_000);
    let small = MomentSummary::new(1e6, 0.0133 * 1e6, m).unwrap();
    let cor = entropy_bound_corollary(&small, 1e-9).unwrap();
    let prop = entropy_bound_proposition(&small, 1e-9).unwrap();
    assert!(prop.epsilon < cor.epsilon);

    let large = MomentSummary::new(1e6, 0.9 * 1e6, m).unwrap();
    assert!(entropy_bound_corollary(&large, 1e-9).is_err());
    assert!(entropy_bound_proposition(&large, 1e-9).is_err());
    assert!(matches!(best_independent_bound(&large, 1e-9), Err(Error::NoApplicableBound { .. })));
}

#[test]
fn hypercube_monte_carlo_grid_includes_ten_eight() {
    let spec = HypercubeSpec::new(10, 8).unwrap();
    let sim = hypercube_monte_carlo(&spec, &MonteCarloSpec::new(200_000, 5).unwrap()).unwrap();
    assert!(((sim.mean - sim.lambda_closed_form) / sim.mean_std_error).abs() <= 4.0);
}

#[test]
fn single_precision_path() {
    let s = BernoulliSystem::new(vec![0.05f32; 40]).unwrap();
    let pmf: Pmf<f32> = exact_distribution(&s).unwrap();
    let tv = tv_to_poisson(&pmf, s.lambda(), 1e-7).unwrap();
    assert!(tv <= tv_upper_barbour_hall(s.lambda(), s.sum_p_squared()) + 1e-5);
    let report = entropy_bound_corollary(&MomentSummary::from_system(&s).unwrap(), 1e-6).unwrap();
    let gap = report.h_poisson.nats - pmf_entropy(&pmf).nats;
    assert!(gap <= report.epsilon.value() + 1e-4);
    let _: LogF32 = report.epsilon;
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn independent_reduction_matches_barbour_hall(
        probs in prop::collection::vec(1e-6f64..0.5, 1..300),
    ) {
        let s = system(probs);
        let coeffs = coefficients_independent(&s).unwrap();
        let agg = tv_upper_agg(&coeffs).value();
        let bh = tv_upper_barbour_hall(s.lambda(), s.sum_p_squared());
        prop_assert!((agg - bh).abs() <= 1e-12 * bh.max(1e-300));
        let a: LogF64 = a_of_lambda(&coeffs);
        prop_assert_eq!(a, tv_upper_agg(&coeffs) * LogF64::from(2.0));
    }

    #[test]
    fn exact_tv_is_bracketed(probs in prop::collection::vec(0.0f64..0.2, 1..200)) {
        let s = system(probs);
        prop_assume!(s.lambda() > 0.0);
        let tv = tv_to_poisson(&exact_distribution(&s).unwrap(), s.lambda(), 1e-15).unwrap();
        prop_assert!(tv >= tv_lower_barbour_hall(s.lambda(), s.sum_p_squared()) - 1e-9);
        prop_assert!(tv <= tv_upper_barbour_hall(s.lambda(), s.sum_p_squared()) + 1e-9);
    }

    #[test]
    fn all_bounds_contain_the_exact_gap(probs in prop::collection::vec(0.0f64..0.1, 20..400)) {
        let s = system(probs);
        prop_assume!(s.lambda() > 0.0);
        let pmf = exact_distribution(&s).unwrap();
        let gap = poisson_entropy_series(po(s.lambda()), 1e-12).unwrap().nats - pmf_entropy(&pmf).nats;
        let moments = MomentSummary::from_system(&s).unwrap();
        for r in [entropy_bound_corollary(&moments, 1e-12), entropy_bound_proposition(&moments, 1e-12)]
            .into_iter()
            .flatten()
        {
            prop_assert!(gap >= -1e-9 && gap <= r.epsilon.value() + 1e-9);
            prop_assert!(r.interval.0 <= pmf_entropy(&pmf).nats + 1e-9);
        }
        if let Ok(r) = entropy_bound_theorem4(&coefficients_independent(&s).unwrap(), 1e-12) {
            prop_assert!(gap.abs() <= r.epsilon.value() + 1e-9);
        }
    }

    #[test]
    fn g_never_exceeds_corollary_coefficient(
        log_lambda in -3.0f64..8.0,
        theta in 1e-6f64..1.0,
    ) {
        let lambda = 10f64.powf(log_lambda);
        let m = MomentSummary::new(lambda, theta * lambda, IndexSetSize::Count(u64::MAX)).unwrap();
        let g = g_of_p(&m).unwrap();
        let c = 2.0 * theta * -(-lambda).exp_m1();
        prop_assert!(g <= c * (1.0 + 1e-12));
    }

    #[test]
    fn hypercube_mirror_is_exact(n in 1u32..200, k in 0u32..200) {
        prop_assume!(k <= n);
        let a = hypercube_coefficients::<f64>(&HypercubeSpec::new(n, k).unwrap());
        let b = hypercube_coefficients::<f64>(&HypercubeSpec::new(n, n - k).unwrap());
        prop_assert_eq!(a, b);
    }
}
