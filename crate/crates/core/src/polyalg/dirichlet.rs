use std::collections::BTreeMap;

use num_traits::Zero;
use rustc_hash::FxHashMap;

use super::trig::accumulate;
use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// Dirichlet polynomial `D(s) = sum a_n n^{-s}` over positive indices.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletPoly<C> {
    terms: BTreeMap<u64, C>,
}

impl<C: Coeff> Default for DirichletPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> DirichletPoly<C> {
    pub fn zero() -> Self {
        DirichletPoly { terms: BTreeMap::new() }
    }

    /// `c * 1^{-s}`.
    pub fn constant(c: C) -> Self {
        Self::monomial(1, c).expect("index 1 is valid")
    }

    /// `c * n^{-s}`.
    pub fn monomial(n: u64, c: C) -> Result<Self> {
        Self::from_terms([(n, c)])
    }

    /// Sum of the given terms; repeated indices are added together.
    pub fn from_terms<I: IntoIterator<Item = (u64, C)>>(terms: I) -> Result<Self> {
        let mut d = Self::zero();
        for (n, c) in terms {
            d.add_term(n, c)?;
        }
        Ok(d)
    }

    pub fn add_term(&mut self, n: u64, c: C) -> Result<()> {
        use std::collections::btree_map::Entry;
        if n == 0 {
            return Err(Error::Domain("Dirichlet index 0".into()));
        }
        if c.is_zero_coeff() {
            return Ok(());
        }
        match self.terms.entry(n) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                accumulate(o.get_mut(), c);
                if o.get().is_zero_coeff() {
                    o.remove();
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest stored index, `None` for the zero polynomial.
    pub fn support_bound(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, n: u64) -> C {
        self.terms.get(&n).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (u64, &C)> {
        self.terms.iter().map(|(&n, c)| (n, c))
    }

    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.keys().copied()
    }

    /// `sum |a_n|^2`.
    pub fn sum_sq_moduli(&self) -> C::Modulus {
        self.terms.values().fold(C::Modulus::zero(), |acc, c| acc + c.modulus_sqr())
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(u64, &C) -> D) -> DirichletPoly<D> {
        DirichletPoly {
            terms: self
                .terms
                .iter()
                .map(|(&n, c)| (n, f(n, c)))
                .filter(|(_, c)| !c.is_zero_coeff())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in other.terms() {
            out.add_term(n, c.clone()).expect("indices already valid");
        }
        out
    }

    /// Terms with `n <= x`.
    pub fn truncate(&self, x: f64) -> Self {
        if !(x >= 1.0) {
            return Self::zero();
        }
        let limit = if x >= u64::MAX as f64 { u64::MAX } else { x.floor() as u64 };
        DirichletPoly { terms: self.terms.range(..=limit).map(|(&n, c)| (n, c.clone())).collect() }
    }

    /// Dirichlet convolution: the coefficient of `n` is
    /// `sum_{jk = n} a_j b_k`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut acc: FxHashMap<u64, C> = FxHashMap::default();
        for (&j, a) in &self.terms {
            for (&k, b) in &other.terms {
                let n = j.checked_mul(k).ok_or(Error::IndexOverflow)?;
                let prod = a.clone() * b.clone();
                match acc.get_mut(&n) {
                    Some(v) => accumulate(v, prod),
                    None => {
                        acc.insert(n, prod);
                    }
                }
            }
        }
        Ok(DirichletPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero_coeff()).collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::One;

    type D = DirichletPoly<Rational>;

    fn r(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    #[test]
    fn convolution_examples() {
        let two = D::monomial(2, r(1)).unwrap();
        let three = D::monomial(3, r(1)).unwrap();
        assert_eq!(two.mul(&three).unwrap(), D::monomial(6, r(1)).unwrap());
        let d = D::from_terms([(1, r(2)), (4, r(-3)), (9, r(5))]).unwrap();
        assert_eq!(d.mul(&D::constant(Rational::one())).unwrap(), d);
    }

    #[test]
    fn zero_index_rejected() {
        assert!(D::monomial(0, r(1)).is_err());
    }

    #[test]
    fn overflow_detected() {
        let big = D::monomial(u64::MAX / 2, r(1)).unwrap();
        assert_eq!(big.mul(&D::monomial(3, r(1)).unwrap()), Err(Error::IndexOverflow));
    }

    #[test]
    fn truncation() {
        let d = D::from_terms([(2, r(1)), (7, r(1))]).unwrap();
        assert_eq!(d.truncate(5.0), D::monomial(2, r(1)).unwrap());
        assert_eq!(d.truncate(7.0), d);
        assert!(d.truncate(0.0).is_zero());
        assert_eq!(d.support_bound(), Some(7));
    }
}
