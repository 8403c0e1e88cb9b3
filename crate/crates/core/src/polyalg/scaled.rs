use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::{bohr_lift, bohr_unlift, DirichletPoly, MultiIndex, TrigPoly};
use crate::error::{domain, Result};
use crate::scalar::{Coeff, ComplexRational, Rational};

/// Positive real factor `base^(-half_exp / 2)`.
///
/// Keeps irrational normalizations such as `n^{-k/2}` out of the
/// coefficient ring, so `Q_n^k` has integer coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scale {
    pub base: u64,
    pub half_exp: u32,
}

impl Scale {
    pub const ONE: Scale = Scale { base: 1, half_exp: 0 };

    /// `base^{-1/2}`.
    pub fn inv_sqrt(base: u64) -> Scale {
        Scale { base, half_exp: 1 }
    }

    /// `1 / base`.
    pub fn inv(base: u64) -> Scale {
        Scale { base, half_exp: 2 }
    }

    pub fn ln(&self) -> f64 {
        -(self.half_exp as f64) * 0.5 * (self.base as f64).ln()
    }

    pub fn value(&self) -> f64 {
        self.ln().exp()
    }

    pub fn pow(&self, k: u32) -> Scale {
        Scale { base: self.base, half_exp: self.half_exp * k }
    }

    /// Product of two scales, available when the bases agree (or one is
    /// trivial).
    pub fn mul(&self, other: &Scale) -> Option<Scale> {
        if self.half_exp == 0 || self.base == 1 {
            return Some(*other);
        }
        if other.half_exp == 0 || other.base == 1 {
            return Some(*self);
        }
        (self.base == other.base)
            .then_some(Scale { base: self.base, half_exp: self.half_exp + other.half_exp })
    }

    /// `scale^(2r) = base^{-r * half_exp}`, always rational.
    pub fn even_power(&self, r: u32) -> Rational {
        let denom = BigInt::from(self.base).pow(self.half_exp * r);
        Rational::new(BigInt::one(), denom)
    }
}

/// A polynomial together with a global positive scale factor.
#[derive(Clone, Debug, PartialEq)]
pub struct Scaled<P> {
    pub poly: P,
    pub scale: Scale,
}

impl<P> Scaled<P> {
    pub fn new(poly: P, scale: Scale) -> Self {
        Scaled { poly, scale }
    }

    pub fn unscaled(poly: P) -> Self {
        Scaled { poly, scale: Scale::ONE }
    }
}

impl<C: Coeff> Scaled<TrigPoly<C>> {
    pub fn pow(&self, k: u32, cap: usize) -> Result<Self> {
        Ok(Scaled { poly: self.poly.pow(k, cap)?, scale: self.scale.pow(k) })
    }

    pub fn unlift(&self) -> Result<Scaled<DirichletPoly<C>>> {
        Ok(Scaled { poly: bohr_unlift(&self.poly)?, scale: self.scale })
    }

    /// Fold the scale into double precision coefficients.
    pub fn to_float(&self) -> TrigPoly<Complex64> {
        let s = self.scale.value();
        self.poly.map_coeffs(|c| c.to_complex64() * s)
    }
}

impl<C: Coeff> Scaled<DirichletPoly<C>> {
    pub fn lift(&self) -> Result<Scaled<TrigPoly<C>>> {
        Ok(Scaled { poly: bohr_lift(&self.poly)?, scale: self.scale })
    }

    pub fn to_float(&self) -> DirichletPoly<Complex64> {
        let s = self.scale.value();
        self.poly.map_coeffs(|_, c| c.to_complex64() * s)
    }
}

impl Scaled<DirichletPoly<Complex<i128>>> {
    /// Gaussian-integer numerators over the common denominator `L`, scale
    /// `1 / L`. `None` when `L` exceeds `u64` or a numerator exceeds `i128`.
    pub fn from_exact(d: &DirichletPoly<ComplexRational>) -> Option<Self> {
        let mut l = BigInt::one();
        for (_, c) in d.terms() {
            l = l.lcm(c.re.denom()).lcm(c.im.denom());
        }
        let base = l.to_u64()?;
        let lr = Rational::from_integer(l);
        let mut out = DirichletPoly::zero();
        for (n, c) in d.terms() {
            let re = (&c.re * &lr).to_integer().to_i128()?;
            let im = (&c.im * &lr).to_integer().to_i128()?;
            out.add_term(n, Complex::new(re, im)).ok()?;
        }
        let scale = if base == 1 { Scale::ONE } else { Scale::inv(base) };
        Some(Scaled::new(out, scale))
    }
}

/// `Q_n(z) = n^{-1/2} (z_1 + ... + z_n)`, stored as unit coefficients with
/// scale `n^{-1/2}`.
pub fn build_qn<C: Coeff>(n: u32) -> Result<Scaled<TrigPoly<C>>> {
    if n == 0 {
        return domain("Q_n needs n >= 1");
    }
    let poly = TrigPoly::from_terms((1..=n).map(|i| (MultiIndex::var(i), C::one())));
    Ok(Scaled::new(poly, Scale::inv_sqrt(n as u64)))
}
