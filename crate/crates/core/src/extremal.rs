//! The extremal family `D_x = (n^{-1/2} sum_{i <= n} p_i^{-s})^k` with
//! `k = floor(log x / (log_2 x + log_3 x))` and `n = pi(x^{1/k})`, whose
//! `H_q / H_p` ratio realizes the growth of the worst-case constant.

use num_bigint::BigUint;
use num_traits::{FromPrimitive, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::bounds::{e_to_e, mho_asymptote};
use crate::error::{domain, Error, Result};
use crate::norms::{
    even_half, ln_rational, norm_even_exact_scaled, norm_mc_scaled_power, qn_moment_exact, McConfig, Method,
    NormConfig, NormEstimate, Policy,
};
use crate::numtheory::{nth_prime, prime_pi};
use crate::polyalg::{binomial_u128, build_qn, DirichletPoly, Scaled, TrigPoly};
use crate::scalar::Rational;
use crate::GaussInt;

/// `e^{e^e}`, the threshold above which the construction's estimates hold.
pub fn validity_threshold() -> f64 {
    e_to_e::<f64>().exp()
}

/// Smallest `x^{1/k}` for which the prime-counting estimates used in the
/// construction are valid.
pub const MIN_ROOT: u64 = 599;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalParams {
    pub x: f64,
    pub p: f64,
    pub q: f64,
    pub k: u32,
    /// `floor(x^{1/k})`.
    pub root: u64,
    pub n: u32,
    /// `(1/(2q) - 1/(2p)) log k / k - q k / n`.
    pub f: f64,
    pub in_validity_range: bool,
    /// `n > floor(kq/2) + 1 > floor(kp/2) + 1 > 1`.
    pub hypothesis_ok: bool,
}

impl ExtremalParams {
    /// Diagnostic flags, empty when the parameters are in the regime the
    /// estimates cover.
    pub fn flags(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.in_validity_range {
            out.push("outside-validity-range");
        }
        if !self.hypothesis_ok {
            out.push("hypothesis-violated");
        }
        out
    }

    /// Number of terms of `D_x`, `C(n + k - 1, k)`.
    pub fn term_count(&self) -> u128 {
        binomial_u128((self.n + self.k - 1) as u128, self.k as u128)
    }
}

/// `(k, floor(x^{1/k}), pi(x^{1/k}))`.
fn shape(x: f64) -> Result<(u32, u64, u32)> {
    if !(x > e_to_e::<f64>()) || !x.is_finite() {
        return domain(format!("extremal family needs e^e < x < inf, got {x}"));
    }
    let l1 = x.ln();
    let l2 = l1.ln();
    let l3 = l2.ln();
    let k = ((l1 / (l2 + l3)).floor() as u32).max(1);
    let root = int_root(x, k);
    let n = u32::try_from(prime_pi(root as f64)).map_err(|_| Error::IndexOverflow)?;
    if n == 0 {
        return domain(format!("no primes below x^(1/k) = {root}"));
    }
    Ok((k, root, n))
}

/// `floor(x^{1/k})`, corrected against exact integer powers.
fn int_root(x: f64, k: u32) -> u64 {
    let big_x = BigUint::from_f64(x.floor()).expect("finite positive x");
    let fits = |r: u64| BigUint::from(r).pow(k) <= big_x;
    let mut r = x.powf(1.0 / k as f64).floor().max(1.0) as u64;
    while r > 1 && !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    r
}

pub fn extremal_params(x: f64, p: f64, q: f64) -> Result<ExtremalParams> {
    if !(p >= 1.0) || !(p < q) || !q.is_finite() {
        return domain(format!("need 1 <= p < q < inf, got p = {p}, q = {q}"));
    }
    let (k, root, n) = shape(x)?;
    let kf = k as f64;
    let f = (1.0 / (2.0 * q) - 1.0 / (2.0 * p)) * kf.ln() / kf - q * kf / n as f64;
    let mq = (kf * q / 2.0).floor();
    let mp = (kf * p / 2.0).floor();
    let hypothesis_ok = (n as f64) > mq + 1.0 && mq > mp && mp > 0.0;
    Ok(ExtremalParams {
        x,
        p,
        q,
        k,
        root,
        n,
        f,
        in_validity_range: x > validity_threshold() && root >= MIN_ROOT,
        hypothesis_ok,
    })
}

fn checked_shape(x: f64, cap: usize) -> Result<(u32, u32)> {
    let (k, _, n) = shape(x)?;
    let needed = binomial_u128((n + k - 1) as u128, k as u128);
    if needed > cap as u128 {
        return Err(Error::TermCap { needed, cap });
    }
    Ok((k, n))
}

/// `Q_n^k` on the torus, with integer coefficients and scale `n^{-k/2}`.
pub fn build_extremal_trig(x: f64, cap: usize) -> Result<Scaled<TrigPoly<GaussInt>>> {
    let (k, n) = checked_shape(x, cap)?;
    build_qn::<GaussInt>(n)?.pow(k, cap)
}

/// `D_x`; every index is at most `x` since `p_n <= x^{1/k}`.
pub fn build_extremal(x: f64, cap: usize) -> Result<Scaled<DirichletPoly<GaussInt>>> {
    build_extremal_trig(x, cap)?.unlift()
}

/// Right side of `||Q_n^k||_q^q >= (int |Q_n|^{2m})^{kq/(2m)}`, `m = floor(kq/2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofChain {
    pub m: u32,
    /// `||Q_n^k||_q^q`.
    pub lhs: f64,
    pub rhs: f64,
    /// Both sides are exact rationals and were compared as such.
    pub exact: bool,
    pub holds: bool,
}

/// `(m, (int |Q_n|^{2m})^{kq/(2m)})`, with the exact rational when `kq`
/// is even (then the exponent is 1).
pub fn proof_chain_rhs(n: u32, k: u32, q: f64) -> Result<(u32, f64, Option<Rational>)> {
    let kq = k as f64 * q;
    let m = (kq / 2.0).floor() as u32;
    if m == 0 {
        return domain("proof chain needs kq >= 2");
    }
    let moment = qn_moment_exact(n, m)?;
    let expo = kq / (2.0 * m as f64);
    let value = (ln_rational(&moment) * expo).exp();
    let exact = (kq.fract() == 0.0 && (kq as u64) % 2 == 0).then_some(moment);
    Ok((m, value, exact))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalReport {
    pub params: ExtremalParams,
    pub ratio: f64,
    /// `log(ratio) / k`, to compare against `log sqrt(q/p)`.
    pub log_ratio_per_k: f64,
    pub ratio_method: Method,
    pub stderr: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    /// `exp(k (log sqrt(q/p) + f))`.
    pub target: f64,
    pub asymptote: Option<f64>,
    pub proof_chain: ProofChain,
    pub numerator: NormEstimate,
    pub denominator: NormEstimate,
}

/// Flat row for tabular output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalRow {
    pub x: f64,
    pub p: f64,
    pub q: f64,
    pub k: u32,
    pub n: u32,
    pub ratio: f64,
    pub ratio_method: Method,
    pub stderr: Option<f64>,
    pub target: f64,
    pub asymptote: Option<f64>,
    pub flags: String,
}

impl ExtremalReport {
    pub fn row(&self) -> ExtremalRow {
        ExtremalRow {
            x: self.params.x,
            p: self.params.p,
            q: self.params.q,
            k: self.params.k,
            n: self.params.n,
            ratio: self.ratio,
            ratio_method: self.ratio_method,
            stderr: self.stderr,
            target: self.target,
            asymptote: self.asymptote,
            flags: self.params.flags().join(";"),
        }
    }
}

/// Exponents with an exact path.
fn exact_capable(e: f64) -> bool {
    matches!(even_half(e), Some(1..=4))
}

fn exact_pair(sp: &Scaled<TrigPoly<GaussInt>>, p: f64, q: f64, cap: usize) -> Result<(NormEstimate, NormEstimate)> {
    Ok((norm_even_exact_scaled(sp, q, cap)?, norm_even_exact_scaled(sp, p, cap)?))
}

fn mc_pair(n: u32, k: u32, p: f64, q: f64, cfg: &NormConfig) -> Result<(NormEstimate, NormEstimate)> {
    let qn = build_qn::<GaussInt>(n)?;
    let mc = McConfig { samples: cfg.samples, seed: cfg.seed, shards: cfg.shards };
    Ok((norm_mc_scaled_power(&qn, k, q, &mc)?, norm_mc_scaled_power(&qn, k, p, &mc)?))
}

/// `||D_x||_q / ||D_x||_p` with the target, asymptote and proof-chain
/// values alongside. Outside the validity range the report is still
/// produced and carries flags.
pub fn lower_bound_report(x: f64, p: f64, q: f64, cfg: &NormConfig) -> Result<ExtremalReport> {
    let params = extremal_params(x, p, q)?;
    let (k, n) = (params.k, params.n);
    let exact_ok = exact_capable(p) && exact_capable(q);
    let (numerator, denominator) = match cfg.policy {
        Policy::Exact if !exact_ok => {
            return domain(format!("exact extremal ratio needs p, q in {{2, 4, 6, 8}}, got p = {p}, q = {q}"))
        }
        Policy::Exact => exact_pair(&build_extremal_trig(x, cfg.term_cap)?, p, q, cfg.term_cap)?,
        Policy::MonteCarlo => mc_pair(n, k, p, q, cfg)?,
        Policy::Auto if exact_ok => {
            match build_extremal_trig(x, cfg.term_cap).and_then(|sp| exact_pair(&sp, p, q, cfg.term_cap)) {
                Err(Error::TermCap { .. }) => mc_pair(n, k, p, q, cfg)?,
                other => other?,
            }
        }
        Policy::Auto => mc_pair(n, k, p, q, cfg)?,
    };
    let ratio = numerator.value / denominator.value;
    let exact = numerator.method == Method::Exact && denominator.method == Method::Exact;
    let stderr = (!exact).then(|| {
        let rel = |e: &NormEstimate| e.stderr.unwrap_or(0.0) / e.value;
        ratio * (rel(&numerator).powi(2) + rel(&denominator).powi(2)).sqrt()
    });

    let (m, rhs, rhs_exact) = proof_chain_rhs(n, k, q)?;
    let lhs = numerator.value.powf(q);
    let proof_chain = match (&numerator.exact_power, rhs_exact) {
        (Some(l), Some(r)) => ProofChain { m, lhs: ln_rational(l).exp(), rhs, exact: true, holds: *l >= r },
        _ => {
            let slack = numerator.stderr.map_or(0.0, |se| 4.0 * q * numerator.value.powf(q - 1.0) * se);
            ProofChain { m, lhs, rhs, exact: false, holds: lhs + slack >= rhs * (1.0 - 1e-12) }
        }
    };

    Ok(ExtremalReport {
        ratio,
        log_ratio_per_k: ratio.ln() / k as f64,
        ratio_method: if exact { Method::Exact } else { Method::MonteCarlo },
        stderr,
        samples: numerator.samples,
        seed: numerator.seed,
        target: (k as f64 * ((q / p).sqrt().ln() + params.f)).exp(),
        asymptote: mho_asymptote(x, p, q).ok(),
        proof_chain,
        numerator,
        denominator,
        params,
    })
}

/// `||D_x||_{H_2}^2` as an exact rational, from the coefficients.
pub fn extremal_h2_squared(d: &Scaled<DirichletPoly<GaussInt>>) -> Rational {
    let sum: i128 = d.poly.terms().map(|(_, c)| c.re * c.re + c.im * c.im).sum();
    Rational::from_integer(sum.into()) * d.scale.even_power(1)
}

/// `p_n^k`, the largest index of `D_x`.
pub fn largest_index(params: &ExtremalParams) -> Option<u64> {
    BigUint::from(nth_prime(params.n)).pow(params.k).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::DEFAULT_TERM_CAP;
    use num_complex::Complex;

    #[test]
    fn params_at_ten_million() {
        let pr = extremal_params(1e7, 2.0, 4.0).unwrap();
        assert_eq!((pr.k, pr.root, pr.n), (4, 56, 16));
        assert!(!pr.in_validity_range);
        assert!(pr.hypothesis_ok);
        let expected_f = (1.0 / 8.0 - 1.0 / 4.0) * 4f64.ln() / 4.0 - 4.0 * 4.0 / 16.0;
        assert!((pr.f - expected_f).abs() < 1e-15);
        assert!(largest_index(&pr).unwrap() <= 10_000_000);
    }

    #[test]
    fn params_small_and_invalid() {
        let pr = extremal_params(1e3, 2.0, 4.0).unwrap();
        assert!(!pr.in_validity_range);
        assert!(pr.flags().contains(&"outside-validity-range"));
        assert!(extremal_params(10.0, 2.0, 4.0).is_err());
        assert!(extremal_params(1e6, 4.0, 2.0).is_err());
        assert!(validity_threshold() > 3.81e6 && validity_threshold() < 3.82e6);
    }

    #[test]
    fn integer_root_is_exact() {
        assert_eq!(int_root(1e6, 3), 100);
        assert_eq!(int_root(999_999.0, 3), 99);
        assert_eq!(int_root(1e8, 4), 100);
        assert_eq!(int_root(99_999_999.0, 4), 99);
        assert_eq!(int_root(1e60, 21), 719);
    }

    #[test]
    fn ten_million_coefficient() {
        let d = build_extremal(1e7, DEFAULT_TERM_CAP).unwrap();
        assert_eq!(d.poly.coeff(2 * 3 * 5 * 7), Complex::new(24, 0));
        assert!((d.scale.value() - 1.0 / 256.0).abs() < 1e-18);
        assert!(d.poly.support_bound().unwrap() <= 10_000_000);
        assert_eq!(d.poly.len(), 3876);
        assert_eq!(extremal_h2_squared(&d), qn_moment_exact(16, 4).unwrap());
    }

    #[test]
    fn cap_is_checked_up_front() {
        match build_extremal(1e7, 1000) {
            Err(Error::TermCap { needed, cap }) => assert_eq!((needed, cap), (3876, 1000)),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn report_shapes() {
        let cfg = NormConfig::default();
        let r = lower_bound_report(1e5, 2.0, 4.0, &cfg).unwrap();
        assert_eq!(r.ratio_method, Method::Exact);
        assert!(r.proof_chain.exact && r.proof_chain.holds);
        assert!(r.ratio > 1.0);
        let row = r.row();
        assert!(row.flags.contains("outside-validity-range"));

        let mc = NormConfig { policy: Policy::MonteCarlo, samples: 20_000, ..NormConfig::default() };
        let r = lower_bound_report(1e5, 2.0, 4.0, &mc).unwrap();
        assert_eq!(r.ratio_method, Method::MonteCarlo);
        assert!(r.stderr.unwrap() > 0.0);

        let bad = NormConfig { policy: Policy::Exact, ..NormConfig::default() };
        assert!(lower_bound_report(1e5, 2.0, 3.0, &bad).is_err());
    }

    #[test]
    fn proof_chain_rhs_values() {
        let (m, _, exact) = proof_chain_rhs(16, 4, 4.0).unwrap();
        assert_eq!(m, 8);
        assert_eq!(exact, Some(qn_moment_exact(16, 8).unwrap()));
        let (m, v, exact) = proof_chain_rhs(10, 3, 3.0).unwrap();
        assert_eq!(m, 4);
        assert!(exact.is_none());
        let base = ln_rational(&qn_moment_exact(10, 4).unwrap());
        assert!((v.ln() - base * 9.0 / 8.0).abs() < 1e-12);
    }
}
