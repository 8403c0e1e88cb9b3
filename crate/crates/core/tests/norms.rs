mod common;

use hardy_core::corpus::{corpus_rng, random_dirichlet, random_polynomial};
use hardy_core::norms::{
    mc_moment, norm, norm_even_exact, norm_h2_exact, norm_mc, norm_mc_with, qn_moment_exact, ratio, McConfig,
    NormConfig, Policy,
};
use hardy_core::polyalg::{build_qn, DEFAULT_TERM_CAP};
use hardy_core::{DirichletPoly, GaussInt, Rational, TrigPoly};
use num_complex::{Complex, Complex64};
use num_traits::{One, Signed, ToPrimitive};

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

#[test]
fn moment_matches_enumeration() {
    for n in 1..=6 {
        for m in 0..=5 {
            assert_eq!(qn_moment_exact(n, m).unwrap(), common::brute_moment(n, m), "n = {n}, m = {m}");
        }
    }
    assert_eq!(qn_moment_exact(2, 2).unwrap(), q(3, 2));
    assert_eq!(qn_moment_exact(4, 2).unwrap(), q(7, 4));
}

#[test]
fn moment_equals_even_norm_of_qn() {
    for n in 1..=5u32 {
        let qn = build_qn::<GaussInt>(n).unwrap();
        for m in 1..=4u32 {
            let e = hardy_core::norms::norm_even_exact_scaled(&qn, 2.0 * m as f64, DEFAULT_TERM_CAP).unwrap();
            assert_eq!(e.exact_power.unwrap(), qn_moment_exact(n, m).unwrap());
        }
    }
}

#[test]
fn central_limit_trend() {
    let mut prev = f64::INFINITY;
    for j in 3..=10 {
        let v = qn_moment_exact(1 << j, 3).unwrap();
        let gap = (v - Rational::from_integer(6.into())).abs().to_f64().unwrap();
        assert!(gap < prev, "j = {j}");
        prev = gap;
    }
}

#[test]
fn parseval() {
    let mut rng = corpus_rng(21);
    for _ in 0..30 {
        let d = random_dirichlet(&mut rng, 300, 25).unwrap().poly;
        let lifted = hardy_core::polyalg::bohr_lift(&d).unwrap();
        let e = norm_even_exact(&lifted, 2.0, DEFAULT_TERM_CAP).unwrap();
        assert_eq!(e.exact_power, norm_h2_exact(&d).exact_power);
        let direct: i128 = d.terms().map(|(_, c)| c.norm_sqr()).sum();
        assert_eq!(e.exact_power.unwrap(), Rational::from_integer(direct.into()));
    }
}

#[test]
fn even_norms_are_monotone() {
    let mut rng = corpus_rng(22);
    for _ in 0..25 {
        let p = random_polynomial(&mut rng, 3, 4, 8).unwrap().poly;
        let powers: Vec<f64> = [2.0, 4.0, 6.0, 8.0]
            .iter()
            .map(|&e| norm_even_exact(&p, e, DEFAULT_TERM_CAP).unwrap().value)
            .collect();
        assert!(powers.windows(2).all(|w| w[0] <= w[1] * (1.0 + 1e-12)), "{powers:?}");
    }
}

#[test]
fn ratio_examples() {
    let cfg = NormConfig::default();
    let single = DirichletPoly::monomial(12, Complex::new(3i128, -4)).unwrap();
    assert!((ratio(&single, 4.0, 2.0, &cfg).unwrap().ratio - 1.0).abs() < 1e-15);
    let q2 = build_qn::<GaussInt>(2).unwrap().unlift().unwrap().poly;
    let r = ratio(&q2, 4.0, 2.0, &cfg).unwrap();
    assert!((r.ratio - 1.5f64.powf(0.25)).abs() < 1e-15);
    let mut rng = corpus_rng(23);
    for _ in 0..50 {
        let d = random_dirichlet(&mut rng, 200, 20).unwrap().poly;
        assert!(ratio(&d, 4.0, 2.0, &cfg).unwrap().ratio >= 1.0 - 1e-15);
    }
    assert!(ratio(&DirichletPoly::<GaussInt>::zero(), 4.0, 2.0, &cfg).is_err());
    assert!(ratio(&q2, 2.0, 4.0, &cfg).is_err());
}

#[test]
fn monte_carlo_examples() {
    let c = TrigPoly::constant(Complex64::new(0.6, 0.8));
    let e = norm_mc(&c, 3.0, 1000, 1).unwrap();
    assert!((e.value - 1.0).abs() < 1e-12 && e.stderr == Some(0.0));

    let q8 = build_qn::<GaussInt>(8).unwrap().to_float();
    let e = norm_mc(&q8, 2.0, 100_000, 5).unwrap();
    assert!((e.value - 1.0).abs() <= 4.0 * e.stderr.unwrap(), "{e:?}");

    let q4 = build_qn::<GaussInt>(4).unwrap().to_float();
    let e = norm_mc(&q4, 4.0, 1_000_000, 6).unwrap();
    assert!((e.value - 1.75f64.powf(0.25)).abs() <= 4.0 * e.stderr.unwrap(), "{e:?}");
}

#[test]
fn monte_carlo_consistency_rate() {
    for n in [2u32, 4, 8] {
        let qn = build_qn::<GaussInt>(n).unwrap().to_float();
        for m in 1..=3u32 {
            let exact = qn_moment_exact(n, m).unwrap().to_f64().unwrap();
            let hits = (0..100u64)
                .filter(|&seed| {
                    let est = mc_moment(&qn, 2.0 * m as f64, &McConfig::new(5_000, seed)).unwrap();
                    (est.mean - exact).abs() <= 4.0 * est.stderr
                })
                .count();
            assert!(hits >= 95, "n = {n}, m = {m}: {hits}/100");
        }
    }
}

#[test]
fn monte_carlo_independent_of_thread_count() {
    let q6 = build_qn::<GaussInt>(6).unwrap().to_float();
    let cfg = McConfig::new(40_000, 77);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| norm_mc_with(&q6, 3.0, &cfg).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
    let other_seed = norm_mc_with(&q6, 3.0, &McConfig::new(40_000, 78)).unwrap();
    assert_ne!(one.value, other_seed.value);
}

#[test]
fn policy_dispatch() {
    let d = DirichletPoly::from_terms([(2, Complex64::one()), (3, Complex64::one())]).unwrap();
    let e = norm(&d, 2.0, &NormConfig::default()).unwrap();
    assert!((e.value - 2f64.sqrt()).abs() < 1e-15);
    let e = norm(&d, 3.0, &NormConfig { samples: 10_000, ..NormConfig::default() }).unwrap();
    assert!(e.stderr.is_some());
    let strict = NormConfig { policy: Policy::Exact, ..NormConfig::default() };
    assert!(norm(&d, 3.0, &strict).is_err());
    let cap = NormConfig { policy: Policy::Exact, term_cap: 2, ..NormConfig::default() };
    assert!(matches!(norm(&d, 8.0, &cap), Err(hardy_core::Error::TermCap { .. })));
    let auto = NormConfig { term_cap: 2, samples: 1000, ..NormConfig::default() };
    assert!(norm(&d, 8.0, &auto).unwrap().stderr.is_some());
}

#[test]
fn estimate_json_shape() {
    let d = DirichletPoly::from_terms([(2, Complex64::one())]).unwrap();
    let exact = serde_json::to_value(norm(&d, 2.0, &NormConfig::default()).unwrap()).unwrap();
    assert_eq!(exact["method"], "exact");
    assert!(exact.get("stderr").is_none());
    let mc = serde_json::to_value(norm(&d, 3.0, &NormConfig { samples: 100, ..NormConfig::default() }).unwrap()).unwrap();
    assert_eq!(mc["method"], "monte-carlo");
    assert_eq!(mc["samples"], 100);
    assert_eq!(mc["seed"], 0);
}
