use std::collections::BTreeMap;

use hardy_core::norms::even_power_sum;
use hardy_core::numtheory::{rough_numbers, smooth_numbers};
use hardy_core::polyalg::{bohr_lift, bohr_unlift, decompose_smooth, recompose, DEFAULT_TERM_CAP};
use hardy_core::{DirichletPoly, GaussInt, MultiIndex, TrigPoly};
use num_complex::Complex;
use proptest::prelude::*;

fn gauss() -> impl Strategy<Value = GaussInt> {
    (-50i128..=50, -50i128..=50).prop_map(|(a, b)| Complex::new(a, b))
}

fn dirichlet(max_n: u64, max_terms: usize) -> impl Strategy<Value = DirichletPoly<GaussInt>> {
    prop::collection::vec((1..=max_n, gauss()), 0..max_terms)
        .prop_map(|terms| DirichletPoly::from_terms(terms).unwrap())
}

fn trig(nvars: u32, max_exp: u32, max_terms: usize) -> impl Strategy<Value = TrigPoly<GaussInt>> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, nvars as usize), gauss()), 0..max_terms)
        .prop_map(|terms| TrigPoly::from_terms(terms.into_iter().map(|(e, c)| (MultiIndex::from_dense(&e), c))))
}

proptest! {
    #[test]
    fn lift_unlift_roundtrip(d in dirichlet(5000, 30)) {
        let lifted = bohr_lift(&d).unwrap();
        prop_assert_eq!(lifted.len(), d.len());
        prop_assert_eq!(bohr_unlift(&lifted).unwrap(), d);
    }

    #[test]
    fn lift_is_multiplicative(a in dirichlet(300, 10), b in dirichlet(300, 10)) {
        let lhs = bohr_lift(&a.mul(&b).unwrap()).unwrap();
        let rhs = bohr_lift(&a).unwrap().mul(&bohr_lift(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplication_commutes_and_associates(
        a in trig(3, 3, 6),
        b in trig(3, 3, 6),
        c in trig(3, 3, 6),
    ) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        let da = bohr_unlift(&a).ok();
        let db = bohr_unlift(&b).ok();
        if let (Some(da), Some(db)) = (da, db) {
            prop_assert_eq!(da.mul(&db).unwrap(), db.mul(&da).unwrap());
        }
    }

    #[test]
    fn decomposition_reconstructs(d in dirichlet(2000, 40), yi in 0usize..4) {
        let y = [2.0, 3.0, 5.0, 7.0][yi];
        let blocks = decompose_smooth(&d, y).unwrap();
        prop_assert_eq!(recompose(&blocks).unwrap(), d.clone());
        let x = d.support_bound().unwrap_or(1) as f64;
        let smooth = smooth_numbers(x, y);
        let rough = rough_numbers(x, y);
        for (j, dj) in &blocks {
            prop_assert!(smooth.binary_search(j).is_ok());
            for k in dj.indices() {
                prop_assert!(rough.binary_search(&k).is_ok());
            }
        }
    }

    #[test]
    fn homogenize_preserves_even_norms(p in trig(3, 2, 6)) {
        prop_assume!(!p.is_zero());
        let h = p.homogenize().unwrap();
        let m = p.degree().unwrap();
        prop_assert!(h.is_homogeneous(m));
        for r in 1..=3 {
            prop_assert_eq!(
                even_power_sum(&h, r, DEFAULT_TERM_CAP).unwrap(),
                even_power_sum(&p, r, DEFAULT_TERM_CAP).unwrap()
            );
        }
    }

    #[test]
    fn json_roundtrip(d in dirichlet(10_000, 20), p in trig(4, 3, 8)) {
        prop_assert_eq!(DirichletPoly::<GaussInt>::from_json(&d.to_json()).unwrap(), d);
        prop_assert_eq!(TrigPoly::<GaussInt>::from_json(&p.to_json()).unwrap(), p);
    }
}

#[test]
fn blocks_have_disjoint_supports() {
    let d = DirichletPoly::from_terms((1..=500u64).map(|n| (n, Complex::new(1i128, 0)))).unwrap();
    let blocks: BTreeMap<u64, DirichletPoly<GaussInt>> = decompose_smooth(&d, 3.0).unwrap();
    let total: usize = blocks.values().map(DirichletPoly::len).sum();
    assert_eq!(total, 500);
    assert_eq!(blocks.keys().copied().collect::<Vec<_>>(), smooth_numbers(500.0, 3.0));
}
