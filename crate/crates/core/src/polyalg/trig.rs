use std::collections::BTreeMap;

use num_traits::Zero;
use rustc_hash::FxHashMap;

use super::MultiIndex;
use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// Default refusal threshold for materialized products.
pub const DEFAULT_TERM_CAP: usize = 10_000_000;

/// Trigonometric polynomial `sum c_alpha z^alpha` on the infinite torus.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly<C> {
    terms: BTreeMap<MultiIndex, C>,
}

impl<C: Coeff> Default for TrigPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> TrigPoly<C> {
    pub fn zero() -> Self {
        TrigPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(MultiIndex::zero(), c)
    }

    pub fn monomial(alpha: MultiIndex, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(alpha, c);
        p
    }

    /// Sum of the given terms; repeated indices are added together.
    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (a, c) in terms {
            p.add_term(a, c);
        }
        p
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: C) {
        use std::collections::btree_map::Entry;
        if c.is_zero_coeff() {
            return;
        }
        match self.terms.entry(alpha) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero_coeff() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> C {
        self.terms.get(alpha).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&MultiIndex, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<MultiIndex, C> {
        self.terms
    }

    /// `max |alpha|` over stored terms.
    pub fn degree(&self) -> Result<u64> {
        self.terms
            .keys()
            .map(MultiIndex::degree)
            .max()
            .ok_or(Error::EmptyPolynomial("degree"))
    }

    /// Whether every stored term has `|alpha| = m`. The zero polynomial is
    /// homogeneous of every degree.
    pub fn is_homogeneous(&self, m: u64) -> bool {
        self.terms.keys().all(|a| a.degree() == m)
    }

    /// Distinct variable positions, ascending.
    pub fn variables(&self) -> Vec<u32> {
        let mut v: Vec<u32> =
            self.terms.keys().flat_map(|a| a.entries().iter().map(|&(p, _)| p)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `sum |c_alpha|^2`, the squared `L_2` norm.
    pub fn sum_sq_moduli(&self) -> C::Modulus {
        self.terms.values().fold(C::Modulus::zero(), |acc, c| acc + c.modulus_sqr())
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TrigPoly<D> {
        TrigPoly::from_terms(self.terms.iter().map(|(a, c)| (a.clone(), f(c))))
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map_coeffs(|c| c.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in other.terms() {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    /// Exact product, without a term cap.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_capped(other, usize::MAX).expect("uncapped product")
    }

    /// Product, refusing to materialize more than `cap` terms.
    pub fn mul_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        let mut acc: FxHashMap<MultiIndex, C> = FxHashMap::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let key = a.add(b);
                let prod = ca.clone() * cb.clone();
                match acc.get_mut(&key) {
                    Some(v) => accumulate(v, prod),
                    None => {
                        if acc.len() >= cap {
                            return Err(Error::TermCap { needed: cap as u128 + 1, cap });
                        }
                        acc.insert(key, prod);
                    }
                }
            }
        }
        Ok(TrigPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero_coeff()).collect() })
    }

    /// `P^k` by binary exponentiation; `P^0 = 1`.
    ///
    /// The result has at most `C(len + k - 1, k)` terms; when that bound
    /// exceeds `cap` the computation proceeds but aborts as soon as an
    /// intermediate product would exceed `cap`.
    pub fn pow(&self, k: u32, cap: usize) -> Result<Self> {
        let mut result = Self::constant(C::one());
        if k == 0 {
            return Ok(result);
        }
        let mut base = self.clone();
        let mut e = k;
        loop {
            if e & 1 == 1 {
                result = result.mul_capped(&base, cap)?;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul_capped(&base, cap)?;
        }
        Ok(result)
    }

    /// `z^deg(P) P(w_1 / z, w_2 / z, ...)`: the auxiliary variable `z` sits
    /// at position 0 and every term gains exponent `deg(P) - |alpha|` on it.
    pub fn homogenize(&self) -> Result<Self> {
        let d = self.degree()?;
        if self.terms.keys().any(|a| a.exponent(0) > 0) {
            return Err(Error::Domain("polynomial already uses position 0".into()));
        }
        Ok(TrigPoly {
            terms: self
                .terms
                .iter()
                .map(|(a, c)| {
                    let extra = (d - a.degree()) as u32;
                    (MultiIndex::var_pow(0, extra).add(a), c.clone())
                })
                .collect(),
        })
    }
}

/// `*slot += x` without cloning the accumulator.
pub(crate) fn accumulate<C: Coeff>(slot: &mut C, x: C) {
    let old = std::mem::replace(slot, C::zero());
    *slot = old + x;
}

/// Upper bound `C(len + k - 1, k)` on the number of terms of `P^k`.
pub fn power_term_bound(len: usize, k: u32) -> u128 {
    if len == 0 {
        return if k == 0 { 1 } else { 0 };
    }
    binomial_u128(len as u128 + k as u128 - 1, k as u128)
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial_u128(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        // r * (n - i) / (i + 1) stays integral at each step
        let num = match r.checked_mul(n - i) {
            Some(v) => v,
            None => return u128::MAX,
        };
        r = num / (i + 1);
    }
    r
}
