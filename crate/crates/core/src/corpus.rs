//! Seeded random polynomials for property sweeps. Coefficients are
//! `(a + bi) / 1024` with `|a|, |b| <= 1024`, kept exact as Gaussian
//! integers with a `1/1024` scale.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::polyalg::{DirichletPoly, MultiIndex, Scale, Scaled, TrigPoly};
use crate::GaussInt;

pub const COEFF_DENOM: u64 = 1024;

pub fn corpus_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coeff_scale() -> Scale {
    Scale::inv(COEFF_DENOM)
}

/// Nonzero Gaussian integer in `[-1024, 1024]^2`.
pub fn random_coeff<R: Rng>(rng: &mut R) -> GaussInt {
    let d = COEFF_DENOM as i128;
    loop {
        let c = Complex::new(rng.gen_range(-d..=d), rng.gen_range(-d..=d));
        if c.re != 0 || c.im != 0 {
            return c;
        }
    }
}

/// Uniformly placed `degree` units over variables `1..=nvars`.
pub fn random_monomial<R: Rng>(rng: &mut R, degree: u32, nvars: u32) -> MultiIndex {
    let mut dense = vec![0u32; nvars as usize];
    for _ in 0..degree {
        dense[rng.gen_range(0..nvars as usize)] += 1;
    }
    MultiIndex::from_dense(&dense)
}

fn fill<R: Rng>(rng: &mut R, max_terms: usize, mut monomial: impl FnMut(&mut R) -> MultiIndex) -> TrigPoly<GaussInt> {
    let target = rng.gen_range(1..=max_terms);
    let mut p = TrigPoly::<GaussInt>::zero();
    while p.is_zero() {
        for _ in 0..target {
            let alpha = monomial(rng);
            let c = random_coeff(rng);
            // repeated draws are dropped so coefficients stay in range
            if p.coeff(&alpha).is_zero() {
                p.add_term(alpha, c);
            }
        }
    }
    p
}

/// Random nonzero `m`-homogeneous polynomial in at most `nvars` variables.
pub fn random_homogeneous<R: Rng>(
    rng: &mut R,
    m: u32,
    nvars: u32,
    max_terms: usize,
) -> Result<Scaled<TrigPoly<GaussInt>>> {
    if nvars == 0 || max_terms == 0 {
        return domain("need at least one variable and one term");
    }
    let p = fill(rng, max_terms, |r| random_monomial(r, m, nvars));
    Ok(Scaled::new(p, coeff_scale()))
}

/// Random nonzero polynomial of degree at most `max_degree`.
pub fn random_polynomial<R: Rng>(
    rng: &mut R,
    max_degree: u32,
    nvars: u32,
    max_terms: usize,
) -> Result<Scaled<TrigPoly<GaussInt>>> {
    if nvars == 0 || max_terms == 0 {
        return domain("need at least one variable and one term");
    }
    let p = fill(rng, max_terms, |r| {
        let d = r.gen_range(0..=max_degree);
        random_monomial(r, d, nvars)
    });
    Ok(Scaled::new(p, coeff_scale()))
}

/// Random nonzero Dirichlet polynomial supported on `1..=support`.
pub fn random_dirichlet<R: Rng>(
    rng: &mut R,
    support: u64,
    max_terms: usize,
) -> Result<Scaled<DirichletPoly<GaussInt>>> {
    if support == 0 || max_terms == 0 {
        return domain("need a positive support bound and at least one term");
    }
    let target = rng.gen_range(1..=max_terms);
    let mut d = DirichletPoly::<GaussInt>::zero();
    while d.is_zero() {
        for _ in 0..target {
            let n = rng.gen_range(1..=support);
            let c = random_coeff(rng);
            if d.coeff(n).is_zero() {
                d.add_term(n, c)?;
            }
        }
    }
    Ok(Scaled::new(d, coeff_scale()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_shape() {
        let mut rng = corpus_rng(1);
        for m in 0..6 {
            let p = random_homogeneous(&mut rng, m, 6, 10).unwrap();
            assert!(!p.poly.is_zero());
            assert_eq!(p.poly.degree().unwrap(), m as u64);
            assert!(p.poly.is_homogeneous(m as u64));
            assert!(p.poly.variables().iter().all(|&v| (1..=6).contains(&v)));
            for (_, c) in p.poly.terms() {
                assert!(c.re.abs() <= 1024 && c.im.abs() <= 1024);
            }
        }
    }

    #[test]
    fn dirichlet_coefficients_in_range() {
        let mut rng = corpus_rng(5);
        for _ in 0..20 {
            let d = random_dirichlet(&mut rng, 10, 50).unwrap();
            assert!(d.poly.terms().all(|(_, c)| c.re.abs() <= 1024 && c.im.abs() <= 1024));
        }
    }

    #[test]
    fn seeded_reproducible() {
        let a = random_dirichlet(&mut corpus_rng(9), 500, 40).unwrap();
        let b = random_dirichlet(&mut corpus_rng(9), 500, 40).unwrap();
        assert_eq!(a, b);
        assert!(a.poly.support_bound().unwrap() <= 500);
        let g = random_polynomial(&mut corpus_rng(3), 4, 5, 20).unwrap();
        assert!(g.poly.degree().unwrap() <= 4);
        assert!(random_polynomial(&mut corpus_rng(3), 4, 0, 20).is_err());
    }
}
