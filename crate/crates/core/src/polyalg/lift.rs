use std::collections::BTreeMap;

use super::{DirichletPoly, MultiIndex, TrigPoly};
use crate::error::{domain, Error, Result};
use crate::numtheory::{factorize, nth_prime, prime_position};
use crate::scalar::Coeff;

/// Exponent vector of `n` over the sequence of primes.
pub fn index_of(n: u64) -> Result<MultiIndex> {
    let f = factorize(n)?;
    Ok(MultiIndex::from_pairs(f.factors.iter().map(|&(p, a)| {
        (prime_position(p).expect("factor is prime"), a)
    })))
}

/// `p^alpha` for the prime sequence `p`.
pub fn integer_of(alpha: &MultiIndex) -> Result<u64> {
    let mut n: u64 = 1;
    for &(pos, e) in alpha.entries() {
        if pos == 0 {
            return Err(Error::Domain("position 0 has no prime".into()));
        }
        let p = nth_prime(pos);
        let pe = p.checked_pow(e).ok_or(Error::IndexOverflow)?;
        n = n.checked_mul(pe).ok_or(Error::IndexOverflow)?;
    }
    Ok(n)
}

/// Bohr lift: `a_{p^alpha} n^{-s}` becomes `a_{p^alpha} z^alpha`.
pub fn bohr_lift<C: Coeff>(d: &DirichletPoly<C>) -> Result<TrigPoly<C>> {
    let mut terms = Vec::with_capacity(d.len());
    for (n, c) in d.terms() {
        terms.push((index_of(n)?, c.clone()));
    }
    Ok(TrigPoly::from_terms(terms))
}

/// Inverse Bohr lift. Fails with [`Error::IndexOverflow`] when some `p^alpha`
/// leaves the `u64` range, and on the homogenization variable.
pub fn bohr_unlift<C: Coeff>(p: &TrigPoly<C>) -> Result<DirichletPoly<C>> {
    let mut terms = Vec::with_capacity(p.len());
    for (alpha, c) in p.terms() {
        terms.push((integer_of(alpha)?, c.clone()));
    }
    DirichletPoly::from_terms(terms)
}

/// Split `D = sum_j D_j j^{-s}` over `y`-smooth `j`, where each `D_j`
/// collects `a_{jk} k^{-s}` for `y`-rough `k`.
pub fn decompose_smooth<C: Coeff>(
    d: &DirichletPoly<C>,
    y: f64,
) -> Result<BTreeMap<u64, DirichletPoly<C>>> {
    if !(y >= 2.0) {
        return domain(format!("decomposition needs y >= 2, got {y}"));
    }
    let mut blocks: BTreeMap<u64, DirichletPoly<C>> = BTreeMap::new();
    for (n, c) in d.terms() {
        let f = factorize(n)?;
        let smooth: u64 = f
            .factors
            .iter()
            .filter(|&&(p, _)| (p as f64) <= y)
            .map(|&(p, a)| p.pow(a))
            .product();
        blocks.entry(smooth).or_default().add_term(n / smooth, c.clone())?;
    }
    Ok(blocks)
}

/// `sum_j D_j j^{-s}`.
pub fn recompose<C: Coeff>(blocks: &BTreeMap<u64, DirichletPoly<C>>) -> Result<DirichletPoly<C>> {
    let mut out = DirichletPoly::zero();
    for (&j, dj) in blocks {
        let shift = DirichletPoly::monomial(j, C::one())?;
        out = out.add(&dj.mul(&shift)?);
    }
    Ok(out)
}
