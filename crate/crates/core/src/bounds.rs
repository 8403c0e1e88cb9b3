//! Closed-form inequality constants and the certified finite-`x` upper bound.
//!
//! The scalar evaluators are generic over `num_traits::Float`, so they run in
//! `f32` as well as `f64`. Logarithms are natural; `iterated_ln(x, k)` is the
//! `k`-fold iterate `log log ... log x`.

use num_traits::{Float, FloatConst};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numtheory::{divisor_count, smooth_numbers};
use crate::polyalg::{DirichletPoly, MultiIndex};
use crate::scalar::{Coeff, Rational};

fn lit<F: Float>(x: f64) -> F {
    F::from(x).expect("representable constant")
}

fn check_pq<F: Float>(p: F, q: F) -> Result<()> {
    if !(p >= F::one()) || !(p < q) || !q.is_finite() {
        return domain(format!(
            "need 1 <= p < q < inf, got p = {}, q = {}",
            p.to_f64().unwrap_or(f64::NAN),
            q.to_f64().unwrap_or(f64::NAN)
        ));
    }
    Ok(())
}

/// `log log ... log x` (`k` times), `None` where some iterate is `<= 0`.
pub fn iterated_ln<F: Float>(x: F, k: u32) -> Option<F> {
    let mut v = x;
    for _ in 0..k {
        if !(v > F::zero()) {
            return None;
        }
        v = v.ln();
    }
    Some(v)
}

/// `e^e`, below which the third iterated logarithm is undefined.
pub fn e_to_e<F: Float + FloatConst>() -> F {
    F::E().exp()
}

fn need_above_e_e<F: Float + FloatConst>(x: F) -> Result<(F, F, F)> {
    if !(x > e_to_e::<F>()) {
        return domain(format!("x must exceed e^e, got {}", x.to_f64().unwrap_or(f64::NAN)));
    }
    let l1 = x.ln();
    let l2 = l1.ln();
    let l3 = l2.ln();
    Ok((l1, l2, l3))
}

/// Hypercontractive constant `(q/p)^{m/2}` for `m`-homogeneous polynomials.
pub fn bayart_bound<F: Float>(m: u32, p: F, q: F) -> Result<F> {
    check_pq(p, q)?;
    Ok((q / p).powf(lit::<F>(m as f64) / lit(2.0)))
}

/// Conjectured sharper constant `m^{1/(2q) - 1/(2p)} (q/p)^{m/2}`.
pub fn conjecture_bound<F: Float>(m: u32, p: F, q: F) -> Result<F> {
    check_pq(p, q)?;
    if m == 0 {
        return domain("conjecture bound needs m >= 1");
    }
    let two = lit::<F>(2.0);
    let mf = lit::<F>(m as f64);
    let expo = F::one() / (two * q) - F::one() / (two * p);
    Ok(mf.powf(expo) * (q / p).powf(mf / two))
}

/// Stirling-type upper bound for `C(m + n - 1, m)`:
/// `(2 pi)^{-1/2} sqrt((m+n-1) / ((n-1) m)) (m+n-1)^{m+n-1} / ((n-1)^{n-1} m^m)`.
pub fn stirling_binom_upper<F: Float + FloatConst>(m: u32, n: u32) -> Result<F> {
    if n < 2 || m < 1 {
        return domain(format!("binomial bound needs n >= 2, m >= 1, got m = {m}, n = {n}"));
    }
    let mf = lit::<F>(m as f64);
    let a = lit::<F>((m + n - 1) as f64);
    let b = lit::<F>((n - 1) as f64);
    let half = lit::<F>(0.5);
    let ln = -half * (lit::<F>(2.0) * F::PI()).ln() + half * (a.ln() - b.ln() - mf.ln()) + a * a.ln()
        - b * b.ln()
        - mf * mf.ln();
    Ok(ln.exp())
}

/// Lower bound `sqrt(2 pi m) (m/e)^m e^{-4 m^2 / n}` for
/// `int |Q_n|^{2m}`, valid for `n > m + 1`.
pub fn qn_moment_lower<F: Float + FloatConst>(n: u32, m: u32) -> Result<F> {
    if m < 1 || n <= m + 1 {
        return domain(format!("moment lower bound needs m >= 1 and n > m + 1, got n = {n}, m = {m}"));
    }
    let mf = lit::<F>(m as f64);
    let nf = lit::<F>(n as f64);
    let ln = lit::<F>(0.5) * (lit::<F>(2.0) * F::PI() * mf).ln() + mf * (mf.ln() - F::one())
        - lit::<F>(4.0) * mf * mf / nf;
    Ok(ln.exp())
}

/// Upper bound `sqrt(2 pi r) (r/e)^r e^{1/(12 r)}` for `int |Q_n|^{2r}`,
/// uniform in `n`, for `r >= 1`.
pub fn qn_moment_upper<F: Float + FloatConst>(r: F) -> Result<F> {
    if !(r >= F::one()) {
        return domain(format!("moment upper bound needs r >= 1, got {}", r.to_f64().unwrap_or(f64::NAN)));
    }
    let ln = lit::<F>(0.5) * (lit::<F>(2.0) * F::PI() * r).ln() + r * (r.ln() - F::one())
        + F::one() / (lit::<F>(12.0) * r);
    Ok(ln.exp())
}

/// `Gamma(r + 1)`, the limit of `int |Q_n|^{2r}` as `n` grows. Exact
/// factorial for integer `r`.
pub fn gamma_limit(r: f64) -> f64 {
    if r >= 0.0 && r.fract() == 0.0 && r <= 170.0 {
        return (1..=r as u64).fold(1.0, |acc, k| acc * k as f64);
    }
    statrs::function::gamma::gamma(r + 1.0)
}

/// Constant-free shape `k^{1/(2q) - 1/(2p)} (q/p)^{k/2} e^{-q k^2 / n}` of
/// the lower estimate for `||Q_n^k||_q / ||Q_n^k||_p`. The true bound
/// carries an unknown factor `c(p, q)`.
pub fn ratio_lower_expression<F: Float>(n: u32, k: u32, p: F, q: F) -> Result<F> {
    check_pq(p, q)?;
    let kf = lit::<F>(k as f64);
    let two = lit::<F>(2.0);
    let mq = (kf * q / two).floor();
    let mp = (kf * p / two).floor();
    let nf = lit::<F>(n as f64);
    if !(nf > mq + F::one() && mq + F::one() > mp + F::one() && mp + F::one() > F::one()) {
        return domain(format!("hypothesis n > [kq/2] + 1 > [kp/2] + 1 > 1 fails for n = {n}, k = {k}"));
    }
    let expo = F::one() / (two * q) - F::one() / (two * p);
    Ok(kf.powf(expo) * (q / p).powf(kf / two) * (-q * kf * kf / nf).exp())
}

/// `Z(x, y) = (log x / log y) log(1 + y / log x) + (y / log y) log(1 + log x / y)`,
/// the main term of `log |S(x, y)|`.
pub fn bruijn_z<F: Float>(x: F, y: F) -> Result<F> {
    let two = lit::<F>(2.0);
    if !(x > F::one()) || !(y >= two) || !(y <= x) {
        return domain(format!(
            "Z(x, y) needs 2 <= y <= x, got x = {}, y = {}",
            x.to_f64().unwrap_or(f64::NAN),
            y.to_f64().unwrap_or(f64::NAN)
        ));
    }
    let lx = x.ln();
    let ly = y.ln();
    Ok(lx / ly * (F::one() + y / lx).ln() + y / ly * (F::one() + lx / y).ln())
}

/// Exact `log |S(x, y)|` against `Z(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BruijnCheck {
    pub log_count: f64,
    pub z: f64,
    pub ratio: f64,
    /// `ratio` within the loose `[1/3, 3]` desk-scale envelope.
    pub within_envelope: bool,
}

pub fn bruijn_check(x: f64, y: f64) -> Result<BruijnCheck> {
    let z = bruijn_z(x, y)?;
    let log_count = (smooth_numbers(x, y).len() as f64).ln();
    let ratio = log_count / z;
    Ok(BruijnCheck { log_count, z, ratio, within_envelope: (1.0 / 3.0..=3.0).contains(&ratio) })
}

/// Choice of `y` balancing `|S(x, y)|` against the hypercontractive factor,
/// in both closed forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalY<F> {
    /// `exp((log_2 x)^2 / (log_2 x + log_3 x))`.
    pub y: F,
    /// `(log x / log_2 x) exp((log_3 x)^2 / (log_2 x + log_3 x))`.
    pub y_alt: F,
}

pub fn optimal_y<F: Float + FloatConst>(x: F) -> Result<OptimalY<F>> {
    let (l1, l2, l3) = need_above_e_e(x)?;
    let y = (l2 * l2 / (l2 + l3)).exp();
    let y_alt = l1 / l2 * (l3 * l3 / (l2 + l3)).exp();
    Ok(OptimalY { y, y_alt })
}

/// Main term `exp((log x / log_2 x) log sqrt(q/p))` of the two-sided
/// estimate for the worst ratio `||D||_q / ||D||_p` over length-`x`
/// polynomials.
pub fn mho_asymptote<F: Float + FloatConst>(x: F, p: F, q: F) -> Result<F> {
    let (l1, l2, _) = need_above_e_e(x)?;
    if !(p >= F::one()) || !(q >= p) {
        return domain("asymptote needs 1 <= p <= q");
    }
    Ok((l1 / l2 * (q / p).sqrt().ln()).exp())
}

/// Relative width `log_3 x / log_2 x` of the unquantified error term in the
/// exponent.
pub fn mho_bracket_width<F: Float + FloatConst>(x: F) -> Result<F> {
    let (_, l2, l3) = need_above_e_e(x)?;
    Ok(l3 / l2)
}

/// Report of the certified bound `||D||_q <= |S(x,y)| exp((log x / log y) log sqrt(q/p)) ||D||_p`,
/// valid for every `D` supported on `n <= x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub x: f64,
    pub p: f64,
    pub q: f64,
    pub y_used: f64,
    /// `y` was clamped into `[2, x]` (or defaulted to 2 below `e^e`).
    pub y_clamped: bool,
    /// Exact `|S(x, y)|` when enumerated.
    pub smooth_count: Option<u64>,
    /// `log |S(x, y)|`; equals `Z(x, y)` when the count was not enumerated.
    pub log_smooth_count: f64,
    pub count_method: CountMethod,
    pub hyper_factor: f64,
    pub total_upper: f64,
    pub asymptote: Option<f64>,
    pub bracket_width: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountMethod {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "bruijn")]
    Bruijn,
}

/// Enumerate `S(x, y)` exactly up to this many expected members.
pub const EXACT_COUNT_LIMIT: f64 = 1e7;

pub fn certified_upper_bound(x: f64, p: f64, q: f64, y: Option<f64>) -> Result<BoundReport> {
    check_pq(p, q)?;
    if !(x >= 2.0) || !x.is_finite() {
        return domain(format!("certified bound needs x >= 2, got {x}"));
    }
    let (y_used, y_clamped) = match y {
        Some(y) => {
            if !(2.0..=x).contains(&y) {
                return domain(format!("need 2 <= y <= x, got y = {y}"));
            }
            (y, false)
        }
        None => match optimal_y(x) {
            Ok(o) => {
                let c = o.y.clamp(2.0, x);
                (c, c != o.y)
            }
            Err(_) => (2.0, true),
        },
    };
    let z = bruijn_z(x, y_used)?;
    let (smooth_count, log_smooth_count, count_method) = if x <= EXACT_COUNT_LIMIT || z <= EXACT_COUNT_LIMIT.ln() {
        let c = smooth_numbers(x, y_used).len() as u64;
        (Some(c), (c as f64).ln(), CountMethod::Exact)
    } else {
        (None, z, CountMethod::Bruijn)
    };
    let hyper_ln = x.ln() / y_used.ln() * (q / p).sqrt().ln();
    let hyper_factor = hyper_ln.exp();
    let total_upper = match smooth_count {
        Some(c) => c as f64 * hyper_factor,
        None => (log_smooth_count + hyper_ln).exp(),
    };
    Ok(BoundReport {
        x,
        p,
        q,
        y_used,
        y_clamped,
        smooth_count,
        log_smooth_count,
        count_method,
        hyper_factor,
        total_upper,
        asymptote: mho_asymptote(x, p, q).ok(),
        bracket_width: mho_bracket_width(x).ok(),
    })
}

/// `sum |a_n|^2 / d(n)`, the square of the Helson lower bound for `||D||_{H_1}`.
pub fn helson_lower_sq<C: Coeff>(d: &DirichletPoly<C>) -> Result<C::Modulus>
where
    C::Modulus: HelsonDiv,
{
    if d.is_zero() {
        return Err(crate::Error::EmptyPolynomial("Helson bound"));
    }
    let mut acc = <C::Modulus as num_traits::Zero>::zero();
    for (n, c) in d.terms() {
        acc = acc + c.modulus_sqr().div_count(divisor_count(n)?);
    }
    Ok(acc)
}

/// `(sum |a_n|^2 / d(n))^{1/2} <= ||D||_{H_1}`.
pub fn helson_lower<C: Coeff>(d: &DirichletPoly<C>) -> Result<f64>
where
    C::Modulus: HelsonDiv,
{
    helson_lower_sq(d).map(|s| C::modulus_to_f64(&s).sqrt())
}

/// Division of a squared modulus by a divisor count, staying in a ring
/// where that is exact (or as exact as the floats allow).
pub trait HelsonDiv {
    fn div_count(self, d: u64) -> Self;
}

impl HelsonDiv for f64 {
    fn div_count(self, d: u64) -> Self {
        self / d as f64
    }
}

impl HelsonDiv for f32 {
    fn div_count(self, d: u64) -> Self {
        self / d as f32
    }
}

impl HelsonDiv for Rational {
    fn div_count(self, d: u64) -> Self {
        self / Rational::from_integer(d.into())
    }
}

/// `kappa(gamma, m) = #{alpha : |alpha| = m, alpha <= gamma}`, counted as the
/// coefficient of `t^m` in `prod_i (1 + t + ... + t^{gamma_i})`.
pub fn kappa(gamma: &MultiIndex, m: u32) -> u128 {
    let m = m as usize;
    let mut ways = vec![0u128; m + 1];
    ways[0] = 1;
    for &(_, g) in gamma.entries() {
        let g = g as usize;
        let mut next = vec![0u128; m + 1];
        // prefix sums give each window sum in O(1)
        let mut prefix = vec![0u128; m + 2];
        for i in 0..=m {
            prefix[i + 1] = prefix[i] + ways[i];
        }
        for (t, slot) in next.iter_mut().enumerate() {
            let lo = t.saturating_sub(g);
            *slot = prefix[t + 1] - prefix[lo];
        }
        ways = next;
    }
    ways[m]
}

/// `4^m / sqrt(pi m)`, the bound on `C(2m, m)` used for `kappa`.
pub fn central_binomial_bound<F: Float + FloatConst>(m: u32) -> F {
    let mf = lit::<F>(m as f64);
    (mf * lit::<F>(4.0).ln() - lit::<F>(0.5) * (F::PI() * mf).ln()).exp()
}
