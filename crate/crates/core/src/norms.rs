//! `L_p` norms on the torus, hence `H_p` norms of Dirichlet polynomials.
//!
//! Even exponents `p = 2r` are exact: `||P||_{2r}^{2r} = sum_gamma |[gamma] P^r|^2`.
//! The last factor of `P^r` is never materialized whole; its terms are
//! produced slice by slice, where the slices partition the exponents
//! `gamma` by an additive hash `h(gamma) = sum w_i gamma_i mod B`. Since
//! `h(alpha + beta) = h(alpha) + h(beta) mod B`, each slice only pairs
//! terms from matching residue classes, and peak memory stays near
//! `|P^r| / B`.
//!
//! Other exponents use Monte Carlo over i.i.d. uniform angles.

use std::collections::{BTreeMap, BTreeSet};
use std::hash::Hash;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::polyalg::{accumulate, bohr_lift, DirichletPoly, MultiIndex, Scaled, TrigPoly, DEFAULT_TERM_CAP};
use crate::scalar::{rational_to_f64, Coeff, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "monte-carlo")]
    MonteCarlo,
}

/// A norm value. Monte Carlo estimates carry their standard error, sample
/// count and seed; exact ones may carry `||P||_p^p` as a rational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub p: f64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// `||P||_p^p` when `p` is even and the ring is exact.
    #[serde(skip)]
    pub exact_power: Option<Rational>,
}

impl NormEstimate {
    fn exact(value: f64, p: f64, exact_power: Option<Rational>) -> Self {
        NormEstimate { value, p, method: Method::Exact, stderr: None, samples: None, seed: None, exact_power }
    }
}

/// How to evaluate a norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Policy {
    /// Exact for even integer exponents within the term cap, Monte Carlo
    /// otherwise.
    Auto,
    Exact,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormConfig {
    pub policy: Policy,
    pub samples: u64,
    pub seed: u64,
    pub shards: u32,
    pub term_cap: usize,
}

impl Default for NormConfig {
    fn default() -> Self {
        NormConfig {
            policy: Policy::Auto,
            samples: 1_000_000,
            seed: 0,
            shards: DEFAULT_SHARDS,
            term_cap: DEFAULT_TERM_CAP,
        }
    }
}

/// Fixed shard count, so results do not depend on the machine.
pub const DEFAULT_SHARDS: u32 = 8;

/// Even integer `2r` as `r`, if `p` is one.
pub fn even_half(p: f64) -> Option<u32> {
    (p >= 2.0 && p <= 1e6 && p.fract() == 0.0 && (p as u64) % 2 == 0).then(|| (p as u64 / 2) as u32)
}

/// `||D||_{H_2} = (sum |a_n|^2)^{1/2}`.
pub fn norm_h2_exact<C: Coeff>(d: &DirichletPoly<C>) -> NormEstimate {
    let s = d.sum_sq_moduli();
    NormEstimate::exact(C::modulus_to_f64(&s).sqrt(), 2.0, C::modulus_to_rational(&s))
}

const SLICE_TARGET: u128 = 1 << 20;

fn slice_weight(pos: u32) -> u64 {
    // splitmix64 finalizer
    let mut z = (pos as u64).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn slice_of(alpha: &MultiIndex, buckets: u64) -> usize {
    let mut h: u64 = 0;
    for &(p, e) in alpha.entries() {
        h = (h + (slice_weight(p) % buckets) * (e as u64 % buckets)) % buckets;
    }
    h as usize
}

/// Bit layout packing every monomial of `A * B` into one `u128`, so that
/// key addition is integer addition without carries.
fn pack_layout<C: Coeff>(a: &TrigPoly<C>, b: &TrigPoly<C>) -> Option<FxHashMap<u32, u32>> {
    let max_exp = |p: &TrigPoly<C>| {
        let mut m: BTreeMap<u32, u32> = BTreeMap::new();
        for (alpha, _) in p.terms() {
            for &(pos, e) in alpha.entries() {
                let slot = m.entry(pos).or_insert(0);
                *slot = (*slot).max(e);
            }
        }
        m
    };
    let (ma, mb) = (max_exp(a), max_exp(b));
    let mut layout = FxHashMap::default();
    let mut shift = 0u32;
    let positions: BTreeSet<u32> = ma.keys().chain(mb.keys()).copied().collect();
    for pos in positions {
        let top = ma.get(&pos).copied().unwrap_or(0) as u64 + mb.get(&pos).copied().unwrap_or(0) as u64;
        let bits = 64 - top.leading_zeros();
        layout.insert(pos, shift);
        shift += bits;
        if shift > 128 {
            return None;
        }
    }
    Some(layout)
}

fn group_slices<'a, C: Coeff, K>(
    p: &'a TrigPoly<C>,
    buckets: u64,
    key: impl Fn(&'a MultiIndex) -> K,
) -> Vec<Vec<(K, &'a C)>> {
    let mut g: Vec<Vec<(K, &C)>> = (0..buckets).map(|_| Vec::new()).collect();
    for (alpha, c) in p.terms() {
        g[slice_of(alpha, buckets)].push((key(alpha), c));
    }
    g
}

/// `sum_gamma |[gamma](A * B)|^2` without materializing all of `A * B`.
pub fn product_sum_sq<C: Coeff>(a: &TrigPoly<C>, b: &TrigPoly<C>, cap: usize) -> Result<C::Modulus> {
    let pairs = a.len() as u128 * b.len() as u128;
    let buckets = pairs.div_ceil(SLICE_TARGET).clamp(1, 4096) as u64;
    product_sum_sq_sliced(a, b, cap, buckets)
}

/// [`product_sum_sq`] with an explicit number of slices.
pub fn product_sum_sq_sliced<C: Coeff>(
    a: &TrigPoly<C>,
    b: &TrigPoly<C>,
    cap: usize,
    buckets: u64,
) -> Result<C::Modulus> {
    let buckets = buckets.max(1);
    match pack_layout(a, b) {
        Some(layout) => {
            let pack = |alpha: &MultiIndex| -> u128 {
                alpha.entries().iter().map(|&(pos, e)| (e as u128) << layout[&pos]).sum()
            };
            let (ga, gb) = (group_slices(a, buckets, pack), group_slices(b, buckets, pack));
            sliced_sum(&ga, &gb, cap, |x, y| x + y)
        }
        None => {
            let (ga, gb) = (group_slices(a, buckets, MultiIndex::clone), group_slices(b, buckets, MultiIndex::clone));
            sliced_sum(&ga, &gb, cap, |x, y| x.add(y))
        }
    }
}

fn sliced_sum<C: Coeff, K: Hash + Ord + Send + Sync>(
    ga: &[Vec<(K, &C)>],
    gb: &[Vec<(K, &C)>],
    cap: usize,
    add: impl Fn(&K, &K) -> K + Sync,
) -> Result<C::Modulus> {
    let buckets = ga.len();
    let slice_sum = |s: usize| -> Result<C::Modulus> {
        let mut acc: FxHashMap<K, C> = FxHashMap::default();
        for (u, part_a) in ga.iter().enumerate() {
            let v = (s + buckets - u) % buckets;
            for (alpha, ca) in part_a {
                for (beta, cb) in &gb[v] {
                    let key = add(alpha, beta);
                    let prod = (*ca).clone() * (*cb).clone();
                    match acc.get_mut(&key) {
                        Some(slot) => accumulate(slot, prod),
                        None => {
                            if acc.len() >= cap {
                                return Err(Error::TermCap { needed: cap as u128 + 1, cap });
                            }
                            acc.insert(key, prod);
                        }
                    }
                }
            }
        }
        // Sum in canonical order so float results are reproducible.
        let mut terms: Vec<(K, C)> = acc.into_iter().collect();
        terms.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        Ok(terms.into_iter().fold(C::Modulus::zero(), |t, (_, c)| t + c.modulus_sqr()))
    };
    let parts: Vec<Result<C::Modulus>> = (0..buckets).into_par_iter().map(slice_sum).collect();
    let mut total = C::Modulus::zero();
    for p in parts {
        total = total + p?;
    }
    Ok(total)
}

/// `||P||_{2r}^{2r} = sum_gamma |[gamma] P^r|^2` in the coefficient ring.
pub fn even_power_sum<C: Coeff>(p: &TrigPoly<C>, r: u32, cap: usize) -> Result<C::Modulus> {
    match r {
        0 => domain("even norm needs r >= 1"),
        1 => Ok(p.sum_sq_moduli()),
        _ => {
            let head = p.pow(r - 1, cap)?;
            product_sum_sq(&head, p, cap)
        }
    }
}

/// Exact `||P||_p` for even integer `p`.
pub fn norm_even_exact<C: Coeff>(p: &TrigPoly<C>, exponent: f64, cap: usize) -> Result<NormEstimate> {
    norm_even_exact_scaled(&Scaled::unscaled(p.clone()), exponent, cap)
}

/// Exact `||s P||_p` for a scaled polynomial and even integer `p`.
pub fn norm_even_exact_scaled<C: Coeff>(
    sp: &Scaled<TrigPoly<C>>,
    exponent: f64,
    cap: usize,
) -> Result<NormEstimate> {
    let r = match even_half(exponent) {
        Some(r) => r,
        None => return domain(format!("exact norms need an even integer exponent, got {exponent}")),
    };
    let sum = even_power_sum(&sp.poly, r, cap)?;
    let exact_power = C::modulus_to_rational(&sum).map(|s| s * sp.scale.even_power(r));
    let value = match &exact_power {
        Some(q) if q.is_zero() => 0.0,
        Some(q) => (ln_rational(q) / exponent).exp(),
        None => {
            let f = C::modulus_to_f64(&sum);
            if f <= 0.0 {
                0.0
            } else {
                (f.ln() / exponent + sp.scale.ln()).exp()
            }
        }
    };
    Ok(NormEstimate::exact(value, exponent, exact_power))
}

/// Natural logarithm of a positive rational of any size.
pub fn ln_rational(q: &Rational) -> f64 {
    let f = rational_to_f64(q);
    if f.is_finite() && f > 1e-300 {
        return f.ln();
    }
    let shift = |x: &BigInt| -> f64 {
        let bits = x.bits() as i64;
        let s = (bits - 60).max(0) as usize;
        let top: f64 = num_traits::ToPrimitive::to_f64(&(x >> s)).unwrap_or(1.0);
        top.ln() + s as f64 * std::f64::consts::LN_2
    };
    shift(q.numer()) - shift(q.denom())
}

/// `int_{T^n} |Q_n|^{2m} = n^{-m} sum_{|alpha| = m} (m! / alpha!)^2`.
///
/// The multinomial sum is `(m!)^2 [x^m] (sum_k x^k / (k!)^2)^n`, computed by
/// truncated power series exponentiation.
pub fn qn_moment_exact(n: u32, m: u32) -> Result<Rational> {
    if n == 0 {
        return domain("moment needs n >= 1");
    }
    let m = m as usize;
    let mut fact = Rational::one();
    let mut series = Vec::with_capacity(m + 1);
    for k in 0..=m {
        if k > 0 {
            fact *= Rational::from_integer(BigInt::from(k));
        }
        series.push(Rational::one() / (&fact * &fact));
    }
    let mul_trunc = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); m + 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate().take(m + 1 - i) {
                out[i + j] += ai * bj;
            }
        }
        out
    };
    let mut result = vec![Rational::zero(); m + 1];
    result[0] = Rational::one();
    let mut base = series;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_trunc(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul_trunc(&base, &base);
        }
    }
    let m_fact = fact;
    let nm = Rational::from_integer(BigInt::from(n).pow(m as u32));
    Ok(&result[m] * &m_fact * &m_fact / nm)
}

/// Monte Carlo estimate of `E |P|^p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// `P` in a form cheap to evaluate at many points.
struct CompiledPoly {
    max_exp: Vec<u32>,
    terms: Vec<(Complex64, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    fn new<C: Coeff>(p: &TrigPoly<C>) -> Self {
        let vars = p.variables();
        let mut max_exp = vec![0u32; vars.len()];
        let terms = p
            .terms()
            .map(|(alpha, c)| {
                let mono: Vec<(usize, u32)> = alpha
                    .entries()
                    .iter()
                    .map(|&(pos, e)| {
                        let i = vars.binary_search(&pos).expect("variable listed");
                        max_exp[i] = max_exp[i].max(e);
                        (i, e)
                    })
                    .collect();
                (c.to_complex64(), mono)
            })
            .collect();
        CompiledPoly { max_exp, terms }
    }
}

/// Streaming mean and second central moment.
#[derive(Clone, Copy, Default)]
struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Welford) -> Welford {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Welford {
            n,
            mean: self.mean + d * o.n as f64 / n as f64,
            m2: self.m2 + o.m2 + d * d * (self.n as f64 * o.n as f64) / n as f64,
        }
    }

    fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2.max(0.0) / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

/// Sampling parameters for Monte Carlo estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub shards: u32,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig { samples, seed, shards: DEFAULT_SHARDS }
    }
}

fn shard_rng(seed: u64, shard: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64);
    rng
}

fn run_shards(cfg: &McConfig, f: impl Fn(&mut ChaCha8Rng, u64) -> Welford + Sync) -> Result<Welford> {
    if cfg.samples == 0 {
        return domain("Monte Carlo needs at least one sample");
    }
    let shards = cfg.shards.max(1) as u64;
    let parts: Vec<Welford> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let count = cfg.samples / shards + u64::from(s < cfg.samples % shards);
            let mut rng = shard_rng(cfg.seed, s as u32);
            f(&mut rng, count)
        })
        .collect();
    Ok(parts.into_iter().fold(Welford::default(), Welford::merge))
}

/// Estimate `E |P(w)|^{exponent}` over uniform `w` on the torus.
pub fn mc_moment<C: Coeff>(p: &TrigPoly<C>, exponent: f64, cfg: &McConfig) -> Result<MomentEstimate> {
    mc_moment_of_power(p, 1, exponent, cfg)
}

/// Estimate `E |P(w)^k|^{exponent} = E |P(w)|^{k * exponent}` by evaluating
/// `P` only, which avoids expanding `P^k`.
pub fn mc_moment_of_power<C: Coeff>(
    p: &TrigPoly<C>,
    k: u32,
    exponent: f64,
    cfg: &McConfig,
) -> Result<MomentEstimate> {
    if !(exponent > 0.0) {
        return domain(format!("moment exponent must be positive, got {exponent}"));
    }
    let compiled = CompiledPoly::new(p);
    let power = exponent * k as f64;
    let w = run_shards(cfg, |rng, count| {
        let mut acc = Welford::default();
        let mut powers: Vec<Vec<Complex64>> =
            compiled.max_exp.iter().map(|&m| vec![Complex64::new(1.0, 0.0); m as usize + 1]).collect();
        for _ in 0..count {
            for row in powers.iter_mut() {
                let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
                let z = Complex64::from_polar(1.0, theta);
                for e in 1..row.len() {
                    row[e] = row[e - 1] * z;
                }
            }
            let mut val = Complex64::new(0.0, 0.0);
            for (c, mono) in &compiled.terms {
                let mut t = *c;
                for &(i, e) in mono {
                    t *= powers[i][e as usize];
                }
                val += t;
            }
            acc.push(val.norm().powf(power));
        }
        acc
    })?;
    Ok(MomentEstimate { mean: w.mean, stderr: w.stderr(), samples: cfg.samples, seed: cfg.seed })
}

fn moment_to_norm(m: &MomentEstimate, p: f64, scale_ln: f64) -> NormEstimate {
    let (value, stderr) = if m.mean > 0.0 {
        let v = m.mean.powf(1.0 / p);
        (v * scale_ln.exp(), v * scale_ln.exp() * m.stderr / (p * m.mean))
    } else {
        (0.0, 0.0)
    };
    NormEstimate {
        value,
        p,
        method: Method::MonteCarlo,
        stderr: Some(stderr),
        samples: Some(m.samples),
        seed: Some(m.seed),
        exact_power: None,
    }
}

/// Monte Carlo `||P||_p`; the standard error of the `1/p`-th root is
/// `value * stderr(mean) / (p * mean)`.
pub fn norm_mc<C: Coeff>(p: &TrigPoly<C>, exponent: f64, samples: u64, seed: u64) -> Result<NormEstimate> {
    norm_mc_with(p, exponent, &McConfig::new(samples, seed))
}

pub fn norm_mc_with<C: Coeff>(p: &TrigPoly<C>, exponent: f64, cfg: &McConfig) -> Result<NormEstimate> {
    if !(exponent >= 1.0) {
        return domain(format!("p must be >= 1, got {exponent}"));
    }
    let m = mc_moment(p, exponent, cfg)?;
    Ok(moment_to_norm(&m, exponent, 0.0))
}

/// Monte Carlo `||s P^k||_p`.
pub fn norm_mc_scaled_power<C: Coeff>(
    sp: &Scaled<TrigPoly<C>>,
    k: u32,
    exponent: f64,
    cfg: &McConfig,
) -> Result<NormEstimate> {
    if !(exponent >= 1.0) {
        return domain(format!("p must be >= 1, got {exponent}"));
    }
    let m = mc_moment_of_power(&sp.poly, k, exponent, cfg)?;
    Ok(moment_to_norm(&m, exponent, sp.scale.ln() * k as f64))
}

/// `||P||_p` under the configured policy.
pub fn norm_trig<C: Coeff>(p: &TrigPoly<C>, exponent: f64, cfg: &NormConfig) -> Result<NormEstimate> {
    norm_trig_scaled(&Scaled::unscaled(p.clone()), exponent, cfg)
}

pub fn norm_trig_scaled<C: Coeff>(
    sp: &Scaled<TrigPoly<C>>,
    exponent: f64,
    cfg: &NormConfig,
) -> Result<NormEstimate> {
    if !(exponent >= 1.0) {
        return domain(format!("p must be >= 1, got {exponent}"));
    }
    let mc = McConfig { samples: cfg.samples, seed: cfg.seed, shards: cfg.shards };
    let even = even_half(exponent).is_some();
    match cfg.policy {
        Policy::Exact => norm_even_exact_scaled(sp, exponent, cfg.term_cap),
        Policy::MonteCarlo => norm_mc_scaled_power(sp, 1, exponent, &mc),
        Policy::Auto if even => match norm_even_exact_scaled(sp, exponent, cfg.term_cap) {
            Err(Error::TermCap { .. }) => norm_mc_scaled_power(sp, 1, exponent, &mc),
            other => other,
        },
        Policy::Auto => norm_mc_scaled_power(sp, 1, exponent, &mc),
    }
}

/// `||D||_{H_p}` through the Bohr lift.
pub fn norm<C: Coeff>(d: &DirichletPoly<C>, exponent: f64, cfg: &NormConfig) -> Result<NormEstimate> {
    norm_trig(&bohr_lift(d)?, exponent, cfg)
}

/// `||D||_{H_q} / ||D||_{H_p}` with both norms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub ratio: f64,
    pub q: f64,
    pub p: f64,
    pub method: Method,
    pub numerator: NormEstimate,
    pub denominator: NormEstimate,
}

impl RatioReport {
    /// Exact `(||D||_q / ||D||_p)^{pq}` as `||D||_q^{q p} / ||D||_p^{p q}`
    /// when both powers are exact.
    pub fn exact_powers(&self) -> Option<(&Rational, &Rational)> {
        Some((self.numerator.exact_power.as_ref()?, self.denominator.exact_power.as_ref()?))
    }
}

pub fn ratio_trig<C: Coeff>(p: &TrigPoly<C>, q_exp: f64, p_exp: f64, cfg: &NormConfig) -> Result<RatioReport> {
    ratio_trig_scaled(&Scaled::unscaled(p.clone()), q_exp, p_exp, cfg)
}

pub fn ratio_trig_scaled<C: Coeff>(
    sp: &Scaled<TrigPoly<C>>,
    q_exp: f64,
    p_exp: f64,
    cfg: &NormConfig,
) -> Result<RatioReport> {
    if !(p_exp >= 1.0) {
        return domain(format!("p must be >= 1, got {p_exp}"));
    }
    if !(p_exp < q_exp) {
        return domain(format!("ratio needs p < q, got p = {p_exp}, q = {q_exp}"));
    }
    if sp.poly.is_zero() {
        return Err(Error::EmptyPolynomial("norm ratio"));
    }
    let numerator = norm_trig_scaled(sp, q_exp, cfg)?;
    let denominator = norm_trig_scaled(sp, p_exp, cfg)?;
    let method = if numerator.method == Method::Exact && denominator.method == Method::Exact {
        Method::Exact
    } else {
        Method::MonteCarlo
    };
    Ok(RatioReport { ratio: numerator.value / denominator.value, q: q_exp, p: p_exp, method, numerator, denominator })
}

/// `||D||_{H_q} / ||D||_{H_p}` for `1 <= p < q`.
pub fn ratio<C: Coeff>(d: &DirichletPoly<C>, q_exp: f64, p_exp: f64, cfg: &NormConfig) -> Result<RatioReport> {
    if d.is_zero() {
        return Err(Error::EmptyPolynomial("norm ratio"));
    }
    ratio_trig(&bohr_lift(d)?, q_exp, p_exp, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::build_qn;
    use crate::GaussInt;
    use num_complex::Complex;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn h2_examples() {
        let d = DirichletPoly::from_terms([(2, Complex64::new(1.0, 0.0)), (3, Complex64::new(1.0, 0.0))]).unwrap();
        assert!((norm_h2_exact(&d).value - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(norm_h2_exact(&DirichletPoly::<Complex64>::zero()).value, 0.0);
    }

    #[test]
    fn moment_examples() {
        assert_eq!(qn_moment_exact(2, 1).unwrap(), q(1, 1));
        assert_eq!(qn_moment_exact(2, 2).unwrap(), q(3, 2));
        assert_eq!(qn_moment_exact(4, 2).unwrap(), q(7, 4));
        assert_eq!(qn_moment_exact(7, 0).unwrap(), q(1, 1));
        assert!(qn_moment_exact(0, 1).is_err());
    }

    #[test]
    fn even_norm_of_qn() {
        let q2 = build_qn::<GaussInt>(2).unwrap();
        let n4 = norm_even_exact_scaled(&q2, 4.0, DEFAULT_TERM_CAP).unwrap();
        assert_eq!(n4.exact_power, Some(q(3, 2)));
        let q4 = build_qn::<GaussInt>(4).unwrap();
        let n4 = norm_even_exact_scaled(&q4, 4.0, DEFAULT_TERM_CAP).unwrap();
        assert_eq!(n4.exact_power, Some(q(7, 4)));
        assert!((n4.value - 1.75f64.powf(0.25)).abs() < 1e-14);
        for n in 1..=50 {
            let qn = build_qn::<GaussInt>(n).unwrap();
            assert_eq!(norm_even_exact_scaled(&qn, 2.0, 10).unwrap().exact_power, Some(q(1, 1)));
        }
    }

    #[test]
    fn odd_exponent_rejected_for_exact() {
        let p = TrigPoly::constant(Complex::new(1i128, 0));
        assert!(norm_even_exact(&p, 3.0, 100).is_err());
        assert!(norm_even_exact(&p, 0.0, 100).is_err());
    }

    #[test]
    fn slicing_matches_full_square() {
        // force several buckets by multiplying a dense-ish polynomial
        let q = build_qn::<GaussInt>(12).unwrap().poly;
        let p = q.pow(3, DEFAULT_TERM_CAP).unwrap();
        let full = p.mul(&p).sum_sq_moduli();
        assert_eq!(product_sum_sq(&p, &p, DEFAULT_TERM_CAP).unwrap(), full);
        for buckets in [2, 7, 64] {
            assert_eq!(product_sum_sq_sliced(&p, &p, DEFAULT_TERM_CAP, buckets).unwrap(), full);
        }
        // each slice stays far below the full product size
        let full_len = p.mul(&p).len();
        assert!(product_sum_sq_sliced(&p, &p, full_len / 4, 64).is_ok());
        assert!(product_sum_sq_sliced(&p, &p, full_len / 4, 1).is_err());
        // unpacked keys agree with packed ones
        let (ga, gb) = (group_slices(&p, 5, MultiIndex::clone), group_slices(&p, 5, MultiIndex::clone));
        assert_eq!(sliced_sum(&ga, &gb, DEFAULT_TERM_CAP, |x, y| x.add(y)).unwrap(), full);
    }

    #[test]
    fn packing_falls_back_when_too_wide() {
        // 30 variables with exponent sums up to 2^5 need 180 bits
        let p = TrigPoly::from_terms((1..=30).map(|i| (MultiIndex::var_pow(i, 16), Complex::new(1i128, 0))));
        assert!(pack_layout(&p, &p).is_none());
        assert_eq!(product_sum_sq(&p, &p, DEFAULT_TERM_CAP).unwrap(), p.mul(&p).sum_sq_moduli());
        let q = build_qn::<GaussInt>(5).unwrap().poly;
        assert!(pack_layout(&q, &q).is_some());
    }

    #[test]
    fn mc_constant_has_zero_stderr() {
        let p = TrigPoly::constant(Complex64::new(3.0, 4.0));
        let e = norm_mc(&p, 3.0, 1000, 7).unwrap();
        assert!((e.value - 5.0).abs() < 1e-12);
        assert_eq!(e.stderr, Some(0.0));
        assert!(norm_mc(&p, 3.0, 0, 7).is_err());
    }

    #[test]
    fn mc_is_deterministic() {
        let p = build_qn::<f64>(3).unwrap().to_float();
        let a = norm_mc(&p, 3.0, 5000, 11).unwrap();
        let b = norm_mc(&p, 3.0, 5000, 11).unwrap();
        assert_eq!(a, b);
        let c = norm_mc(&p, 3.0, 5000, 12).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn ratio_errors() {
        let d = DirichletPoly::monomial(6, Complex64::new(2.0, 0.0)).unwrap();
        let cfg = NormConfig::default();
        assert!(ratio(&d, 2.0, 4.0, &cfg).is_err());
        assert!(ratio(&d, 4.0, 0.5, &cfg).is_err());
        assert!(ratio(&DirichletPoly::<Complex64>::zero(), 4.0, 2.0, &cfg).is_err());
        let r = ratio(&d, 4.0, 2.0, &cfg).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-12);
        assert_eq!(r.method, Method::Exact);
    }

    #[test]
    fn ln_of_huge_rational() {
        let big = Rational::from_integer(BigInt::from(10).pow(500));
        assert!((ln_rational(&big) - 500.0 * 10f64.ln()).abs() < 1e-9);
        assert!((ln_rational(&(Rational::one() / big)) + 500.0 * 10f64.ln()).abs() < 1e-9);
    }
}
