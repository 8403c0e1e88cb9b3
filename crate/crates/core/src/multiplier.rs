//! Multiplier sequences `lambda_n` acting termwise on Dirichlet
//! polynomials, the summability condition
//! `sum lambda_n / (n log_2 n) (sqrt(q/p) + eps)^{log n / log_2 n} < inf`,
//! and the finite-truncation tail bound from Abel summation.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::polyalg::DirichletPoly;
use crate::scalar::{Coeff, Rational};

/// Prefix on which monotonicity is validated.
pub const VALIDATION_PREFIX: u64 = 100_000;

/// First index of the series; `log_2 n` is comfortably positive from here on.
pub const SERIES_START: u64 = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// `n^{-sigma}`.
    Power { sigma: f64 },
    /// `exp(-c log n / log_2 n)`, held at its `n = 16` value below 16 where
    /// `log n / log_2 n` is not monotone.
    LogDecay { c: f64 },
    /// `values[n - 1]`, continued by the last entry.
    Table { values: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplierSeq {
    family: Family,
    decreasing: bool,
}

impl MultiplierSeq {
    pub fn new(family: Family) -> Result<Self> {
        match &family {
            Family::Power { sigma } if !sigma.is_finite() => return domain("sigma must be finite"),
            Family::LogDecay { c } if !c.is_finite() => return domain("c must be finite"),
            Family::Table { values } if values.is_empty() => return domain("empty multiplier table"),
            Family::Table { values } => {
                if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                    return domain(format!("multiplier values must be finite and nonnegative, got {v}"));
                }
            }
            _ => {}
        }
        let mut seq = MultiplierSeq { family, decreasing: true };
        let mut prev = seq.value(1);
        for n in 2..=VALIDATION_PREFIX {
            let v = seq.value(n);
            if v > prev {
                seq.decreasing = false;
                break;
            }
            prev = v;
        }
        Ok(seq)
    }

    pub fn power(sigma: f64) -> Result<Self> {
        Self::new(Family::Power { sigma })
    }

    pub fn log_decay(c: f64) -> Result<Self> {
        Self::new(Family::LogDecay { c })
    }

    pub fn table(values: Vec<f64>) -> Result<Self> {
        Self::new(Family::Table { values })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `lambda_n >= lambda_{n+1}` for all `n` below [`VALIDATION_PREFIX`].
    pub fn is_decreasing(&self) -> bool {
        self.decreasing
    }

    /// `lambda_n` for `n >= 1`.
    pub fn value(&self, n: u64) -> f64 {
        let nf = n as f64;
        match &self.family {
            Family::Power { sigma } => nf.powf(-sigma),
            Family::LogDecay { c } => {
                let l1 = (n.max(SERIES_START) as f64).ln();
                (-c * l1 / l1.ln()).exp()
            }
            Family::Table { values } => values[(n as usize).min(values.len()) - 1],
        }
    }

    /// `lambda_n` as a rational when it is one: integer `sigma`, table
    /// entries (exact binary values), or `c = 0`.
    pub fn exact_value(&self, n: u64) -> Option<Rational> {
        match &self.family {
            Family::Power { sigma } if sigma.fract() == 0.0 && sigma.abs() < 64.0 => {
                let base = Rational::from_integer(BigInt::from(n));
                let e = sigma.abs() as i32;
                let pw = num_traits::pow(base, e as usize);
                Some(if *sigma >= 0.0 { pw.recip() } else { pw })
            }
            Family::LogDecay { c } if *c == 0.0 => Some(Rational::one()),
            Family::Table { .. } => Rational::from_float(self.value(n)),
            _ => None,
        }
    }

    fn require_decreasing(&self) -> Result<()> {
        if self.decreasing {
            Ok(())
        } else {
            domain("multiplier sequence must be decreasing")
        }
    }
}

/// `sum lambda_n a_n n^{-s}`. Exact rings need a rational `lambda_n`
/// representable in the ring.
pub fn apply_multiplier<C: Coeff>(d: &DirichletPoly<C>, lam: &MultiplierSeq) -> Result<DirichletPoly<C>> {
    let mut out = DirichletPoly::zero();
    for (n, c) in d.terms() {
        let l = if C::EXACT {
            lam.exact_value(n).as_ref().and_then(C::from_rational)
        } else {
            C::from_real(lam.value(n))
        };
        match l {
            Some(l) => out.add_term(n, l * c.clone())?,
            None => return domain(format!("lambda_{n} is not representable in this coefficient ring")),
        }
    }
    Ok(out)
}

/// `S_x D = sum_{n <= x} a_n n^{-s}`.
pub fn partial_sum<C: Coeff>(d: &DirichletPoly<C>, x: f64) -> DirichletPoly<C> {
    d.truncate(x)
}

fn check_growth_args(p: f64, q: f64, eps: f64) -> Result<()> {
    if !(p >= 1.0) || !(p < q) || !q.is_finite() {
        return domain(format!("need 1 <= p < q < inf, got p = {p}, q = {q}"));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return domain(format!("eps must be positive, got {eps}"));
    }
    Ok(())
}

fn growth_exponent(p: f64, q: f64, eps: f64) -> f64 {
    (q / p).sqrt().ln() + eps
}

fn need_log3(x: f64) -> Result<(f64, f64)> {
    if !(x > std::f64::consts::E.exp()) || !x.is_finite() {
        return domain(format!("x must exceed e^e, got {x}"));
    }
    let l1 = x.ln();
    Ok((l1, l1.ln()))
}

/// `g(x) = exp((log x / log_2 x) A)` with `A = log sqrt(q/p) + eps`.
pub fn g_growth(x: f64, p: f64, q: f64, eps: f64) -> Result<f64> {
    check_growth_args(p, q, eps)?;
    let (l1, l2) = need_log3(x)?;
    Ok((l1 / l2 * growth_exponent(p, q, eps)).exp())
}

/// `g'(x) = A g(x) (log_2 x - 1) / (x (log_2 x)^2)`, positive for `x > e^e`.
pub fn g_derivative(x: f64, p: f64, q: f64, eps: f64) -> Result<f64> {
    let g = g_growth(x, p, q, eps)?;
    let (_, l2) = need_log3(x)?;
    Ok(growth_exponent(p, q, eps) * g * (l2 - 1.0) / (x * l2 * l2))
}

/// `lambda_n / (n log_2 n) (sqrt(q/p) + eps)^{log n / log_2 n}`.
pub fn series_term(lam: &MultiplierSeq, p: f64, q: f64, eps: f64, n: u64) -> f64 {
    let l1 = (n as f64).ln();
    let l2 = l1.ln();
    let base = (q / p).sqrt() + eps;
    lam.value(n) / (n as f64 * l2) * (l1 / l2 * base.ln()).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesFlag {
    Converging,
    Diverging,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub n: u64,
    pub term: f64,
    pub partial_sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionSeries {
    pub rows: Vec<SeriesRow>,
    pub total: f64,
    /// Geometric mean of `2 t_{2n} / t_n` over `n` in `[N/10, N/2]`.
    pub tail_ratio: Option<f64>,
    pub flag: SeriesFlag,
}

/// Below this condensed ratio the tail looks summable.
pub const CONVERGING_BELOW: f64 = 0.9;
/// Above this condensed ratio the tail looks non-summable.
pub const DIVERGING_ABOVE: f64 = 1.0;

/// Partial sums from `n = 16` to `N`, with a heuristic convergence flag.
///
/// The flag compares `2 t_{2n} / t_n`, the ratio of consecutive blocks of
/// the Cauchy-condensed series, against [`CONVERGING_BELOW`] and
/// [`DIVERGING_ABOVE`]. It is a diagnostic, not a proof.
pub fn condition_series(lam: &MultiplierSeq, p: f64, q: f64, eps: f64, big_n: u64) -> Result<ConditionSeries> {
    check_growth_args(p, q, eps)?;
    if big_n < SERIES_START {
        return domain(format!("N must be at least {SERIES_START}, got {big_n}"));
    }
    let mut rows = Vec::with_capacity((big_n - SERIES_START + 1) as usize);
    // Neumaier compensated summation, sequential so results are bitwise stable
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for n in SERIES_START..=big_n {
        let t = series_term(lam, p, q, eps, n);
        let s = sum + t;
        comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
        sum = s;
        rows.push(SeriesRow { n, term: t, partial_sum: sum + comp });
    }
    let term = |n: u64| rows[(n - SERIES_START) as usize].term;
    let lo = (big_n / 10).max(SERIES_START);
    let hi = big_n / 2;
    let tail_ratio = if hi > lo {
        let (mut acc, mut count, mut zero) = (0.0, 0u64, true);
        for n in lo..=hi {
            let (a, b) = (term(n), term(2 * n));
            if a > 0.0 && b > 0.0 {
                acc += (2.0 * b / a).ln();
                count += 1;
                zero = false;
            }
        }
        if zero {
            Some(0.0)
        } else {
            Some((acc / count as f64).exp())
        }
    } else {
        None
    };
    let flag = match tail_ratio {
        Some(r) if r < CONVERGING_BELOW => SeriesFlag::Converging,
        Some(r) if r > DIVERGING_ABOVE => SeriesFlag::Diverging,
        _ => SeriesFlag::Inconclusive,
    };
    Ok(ConditionSeries { total: sum + comp, rows, tail_ratio, flag })
}

/// `||D||_p (2 lambda_m g(m) + A sum_{n=m}^{M-1} lambda_n g(n) / (n log_2 n))`,
/// bounding `||S_M(lambda D) - S_m(lambda D)||_q`.
pub fn abel_tail_bound(
    d_norm_p: f64,
    lam: &MultiplierSeq,
    p: f64,
    q: f64,
    eps: f64,
    m: u64,
    big_m: u64,
) -> Result<f64> {
    check_growth_args(p, q, eps)?;
    lam.require_decreasing()?;
    if m < SERIES_START || m >= big_m {
        return domain(format!("need 16 <= m < M, got m = {m}, M = {big_m}"));
    }
    if !(d_norm_p >= 0.0) {
        return domain("norm must be nonnegative");
    }
    let a = growth_exponent(p, q, eps);
    let mut sum = 0.0;
    for n in m..big_m {
        let nf = n as f64;
        let l2 = nf.ln().ln();
        sum += lam.value(n) * g_growth(nf, p, q, eps)? / (nf * l2);
    }
    Ok(d_norm_p * (2.0 * lam.value(m) * g_growth(m as f64, p, q, eps)? + a * sum))
}

/// `||lambda D||_2 <= lambda_1 ||D||_2` for decreasing `lambda`, as the exact
/// squared quantities `(sum |lambda_n a_n|^2, lambda_1^2 sum |a_n|^2)`.
pub fn h2_contraction<C: Coeff>(d: &DirichletPoly<C>, lam: &MultiplierSeq) -> Result<(C::Modulus, C::Modulus)> {
    let applied = apply_multiplier(d, lam)?;
    let l1 = apply_multiplier(&DirichletPoly::constant(C::one()), lam)?;
    let l1_sq = if l1.is_zero() { C::Modulus::zero() } else { l1.coeff(1).modulus_sqr() };
    Ok((applied.sum_sq_moduli(), l1_sq * d.sum_sq_moduli()))
}
