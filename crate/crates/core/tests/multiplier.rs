use hardy_core::corpus::{corpus_rng, random_dirichlet};
use hardy_core::multiplier::{
    abel_tail_bound, apply_multiplier, condition_series, h2_contraction, partial_sum, MultiplierSeq, SeriesFlag,
};
use hardy_core::norms::{norm_even_exact, norm_h2_exact};
use hardy_core::polyalg::{bohr_lift, DEFAULT_TERM_CAP};
use hardy_core::{ComplexRational, DirichletPoly, GaussInt, Rational};
use num_complex::Complex;
use proptest::prelude::*;

fn to_exact(d: &DirichletPoly<GaussInt>, denom: i64) -> DirichletPoly<ComplexRational> {
    let den = num_bigint::BigInt::from(denom);
    d.map_coeffs(|_, c| {
        Complex::new(Rational::new(c.re.into(), den.clone()), Rational::new(c.im.into(), den.clone()))
    })
}

fn gauss_dirichlet(max_n: u64) -> impl Strategy<Value = DirichletPoly<ComplexRational>> {
    prop::collection::vec((1..=max_n, -20i64..=20, -20i64..=20), 0..12).prop_map(|t| {
        let d = DirichletPoly::from_terms(t.into_iter().map(|(n, a, b)| (n, Complex::new(a as i128, b as i128))))
            .unwrap();
        to_exact(&d, 1)
    })
}

proptest! {
    #[test]
    fn linear_and_completely_multiplicative(a in gauss_dirichlet(60), b in gauss_dirichlet(60), sigma in 0u32..3) {
        let lam = MultiplierSeq::power(sigma as f64).unwrap();
        let apply = |d: &DirichletPoly<ComplexRational>| apply_multiplier(d, &lam).unwrap();
        prop_assert_eq!(apply(&a.add(&b)), apply(&a).add(&apply(&b)));
        prop_assert_eq!(apply(&a.mul(&b).unwrap()), apply(&a).mul(&apply(&b)).unwrap());
    }

    #[test]
    fn h2_contracts(a in gauss_dirichlet(200), sigma in 0u32..3) {
        let (lhs, rhs) = h2_contraction(&a, &MultiplierSeq::power(sigma as f64).unwrap()).unwrap();
        prop_assert!(lhs <= rhs);
    }
}

#[test]
fn partial_sums_nondecreasing() {
    for lam in [MultiplierSeq::power(1.0).unwrap(), MultiplierSeq::log_decay(2.0).unwrap()] {
        let s = condition_series(&lam, 1.0, 3.0, 0.05, 50_000).unwrap();
        assert!(s.rows.windows(2).all(|w| w[1].partial_sum >= w[0].partial_sum));
        assert_eq!(s.rows.first().unwrap().n, 16);
        assert_eq!(s.rows.last().unwrap().n, 50_000);
    }
}

#[test]
fn series_flag_examples() {
    let s = condition_series(&MultiplierSeq::power(1.0).unwrap(), 2.0, 4.0, 0.1, 1_000_000).unwrap();
    assert_eq!(s.flag, SeriesFlag::Converging);
    let s = condition_series(&MultiplierSeq::power(0.0).unwrap(), 2.0, 4.0, 0.1, 1_000_000).unwrap();
    assert!(matches!(s.flag, SeriesFlag::Diverging | SeriesFlag::Inconclusive));
}

#[test]
fn abel_bound_dominates_exact_tail() {
    let lam = MultiplierSeq::power(1.0).unwrap();
    let mut rng = corpus_rng(41);
    for _ in 0..10 {
        let d = to_exact(&random_dirichlet(&mut rng, 1000, 60).unwrap().poly, 1024);
        let applied = apply_multiplier(&d, &lam).unwrap();
        let tail_terms = partial_sum(&applied, 1000.0)
            .terms()
            .filter(|&(n, _)| n > 16)
            .map(|(n, c)| (n, c.clone()))
            .collect::<Vec<_>>();
        let tail = DirichletPoly::from_terms(tail_terms).unwrap();
        let h4 = if tail.is_zero() {
            0.0
        } else {
            norm_even_exact(&bohr_lift(&tail).unwrap(), 4.0, DEFAULT_TERM_CAP).unwrap().value
        };
        let d2 = norm_h2_exact(&d).value;
        let bound = abel_tail_bound(d2, &lam, 2.0, 4.0, 0.1, 16, 1000).unwrap();
        assert!(h4 <= bound, "{h4} > {bound}");
    }
}
