//! Primes, factorizations, arithmetic functions and smooth/rough numbers.
//!
//! A process-wide prime table backs factorization and the prime-position
//! lookups used by the Bohr lift. It grows on demand and is shared
//! read-only between threads.

use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Prime factorization `n = p_1^a_1 ... p_r^a_r` with strictly increasing
/// primes and positive exponents. `n = 1` has no factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, a)| a).sum()
    }

    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, a)| a as u64 + 1).product()
    }

    /// Largest prime factor, `None` for `n = 1`.
    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }
}

/// Odd-only sieve of Eratosthenes.
fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let half = ((limit - 1) / 2) as usize; // index i <-> 2i+1, i >= 1
    let mut composite = vec![false; half + 1];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p - 1) / 2;
            while j <= half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_pi(limit));
    primes.push(2);
    primes.extend((1..=half).filter(|&i| !composite[i]).map(|i| 2 * i as u64 + 1));
    primes
}

fn estimate_pi(x: u64) -> usize {
    if x < 17 {
        return 8;
    }
    let xf = x as f64;
    (1.26 * xf / xf.ln()) as usize
}

struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

fn table() -> &'static RwLock<PrimeTable> {
    static TABLE: OnceLock<RwLock<PrimeTable>> = OnceLock::new();
    TABLE.get_or_init(|| {
        RwLock::new(PrimeTable { limit: 1 << 16, primes: sieve_primes(1 << 16) })
    })
}

fn ensure_limit(limit: u64) {
    if table().read().unwrap().limit >= limit {
        return;
    }
    let mut t = table().write().unwrap();
    if t.limit < limit {
        let new_limit = limit.max(t.limit.saturating_mul(2));
        t.primes = sieve_primes(new_limit);
        t.limit = new_limit;
    }
}

fn ensure_count(count: usize) {
    loop {
        let (have, limit) = {
            let t = table().read().unwrap();
            (t.primes.len(), t.limit)
        };
        if have >= count {
            return;
        }
        ensure_limit(limit.saturating_mul(2));
    }
}

/// The primes `p <= x` in ascending order.
pub fn primes_up_to(x: f64) -> Vec<u64> {
    if !(x >= 2.0) {
        return Vec::new();
    }
    let limit = x.floor() as u64;
    ensure_limit(limit);
    let t = table().read().unwrap();
    let end = t.primes.partition_point(|&p| p <= limit);
    t.primes[..end].to_vec()
}

/// Prime-counting function `pi(x)`.
pub fn prime_pi(x: f64) -> u64 {
    if !(x >= 2.0) {
        return 0;
    }
    let limit = x.floor() as u64;
    ensure_limit(limit);
    let t = table().read().unwrap();
    t.primes.partition_point(|&p| p <= limit) as u64
}

/// The `i`-th prime, 1-based (`nth_prime(1) == 2`).
pub fn nth_prime(i: u32) -> u64 {
    assert!(i >= 1, "prime positions are 1-based");
    ensure_count(i as usize);
    table().read().unwrap().primes[i as usize - 1]
}

/// 1-based position of `p` in the sequence of primes, `None` if `p` is not
/// prime.
pub fn prime_position(p: u64) -> Option<u32> {
    ensure_limit(p);
    let t = table().read().unwrap();
    t.primes.binary_search(&p).ok().map(|i| i as u32 + 1)
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return domain("cannot factorize 0");
    }
    let mut factors = Vec::new();
    let mut m = n;
    let root = (n as f64).sqrt() as u64 + 1;
    ensure_limit(root);
    let t = table().read().unwrap();
    for &p in &t.primes {
        if p.saturating_mul(p) > m {
            break;
        }
        if m % p == 0 {
            let mut a = 0;
            while m % p == 0 {
                m /= p;
                a += 1;
            }
            factors.push((p, a));
        }
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(Factorization { n, factors })
}

/// Number of prime factors counted with multiplicity.
pub fn big_omega(n: u64) -> Result<u32> {
    factorize(n).map(|f| f.big_omega())
}

pub fn divisor_count(n: u64) -> Result<u64> {
    factorize(n).map(|f| f.divisor_count())
}

/// Smallest-prime-factor table for per-integer work on `1..=limit`.
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Smallest prime factor, `None` for `n < 2`.
    pub fn smallest_factor(&self, n: usize) -> Option<u64> {
        match self.spf.get(n) {
            Some(&p) if p > 0 => Some(p as u64),
            _ => None,
        }
    }

    /// Largest prime factor of `n`, `1` for `n = 1`.
    pub fn largest_factor(&self, mut n: usize) -> u64 {
        let mut largest = 1;
        while n > 1 {
            let p = self.spf[n] as usize;
            largest = p as u64;
            n /= p;
        }
        largest
    }

    pub fn factorize(&self, n: usize) -> Factorization {
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m] as u64;
            m /= p as usize;
            match factors.last_mut() {
                Some((q, a)) if *q == p => *a += 1,
                _ => factors.push((p, 1)),
            }
        }
        Factorization { n: n as u64, factors }
    }
}

/// The `y`-smooth integers `n <= x` (every prime divisor is `<= y`),
/// ascending. `1` is always included.
pub fn smooth_numbers(x: f64, y: f64) -> Vec<u64> {
    if !(x >= 1.0) {
        return Vec::new();
    }
    let limit = x.floor() as u64;
    let primes = primes_up_to(y.min(x));
    let mut out = vec![1u64];
    // Depth-first over nondecreasing prime sequences.
    let mut stack: Vec<(u64, usize)> = vec![(1, 0)];
    while let Some((value, start)) = stack.pop() {
        for (i, &p) in primes.iter().enumerate().skip(start) {
            match value.checked_mul(p) {
                Some(v) if v <= limit => {
                    out.push(v);
                    stack.push((v, i));
                }
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

/// The `y`-rough integers `n <= x` (every prime divisor is `> y`),
/// ascending. `1` is always included.
pub fn rough_numbers(x: f64, y: f64) -> Vec<u64> {
    if !(x >= 1.0) {
        return Vec::new();
    }
    let limit = x.floor() as usize;
    let mut keep = vec![true; limit + 1];
    keep[0] = false;
    for p in primes_up_to(y.min(x)) {
        let p = p as usize;
        let mut j = p;
        while j <= limit {
            keep[j] = false;
            j += p;
        }
    }
    (1..=limit).filter(|&n| keep[n]).map(|n| n as u64).collect()
}

/// Lower bound `(t / log t)(1 + 1 / log t)` for `pi(t)`, valid for
/// `t >= 599`.
pub fn dusart_pi_lower(t: f64) -> Result<f64> {
    if !(t >= 599.0) {
        return domain(format!("Dusart bound needs t >= 599, got {t}"));
    }
    let l = t.ln();
    Ok(t / l * (1.0 + 1.0 / l))
}

/// `max { d(n) : n <= x }` by a divisor-count sieve.
pub fn max_divisor_count(x: f64) -> Result<u64> {
    if !(x >= 1.0) {
        return domain(format!("max_divisor_count needs x >= 1, got {x}"));
    }
    let limit = x.floor() as usize;
    if limit > 200_000_000 {
        return Err(Error::Domain(format!("x = {x} is beyond desk scale")));
    }
    let mut d = vec![0u32; limit + 1];
    for i in 1..=limit {
        let mut j = i;
        while j <= limit {
            d[j] += 1;
            j += i;
        }
    }
    Ok(d.into_iter().max().unwrap_or(1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_prime_lists() {
        assert_eq!(primes_up_to(10.0), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(2.0), vec![2]);
        assert!(primes_up_to(1.9).is_empty());
        assert!(primes_up_to(0.0).is_empty());
        assert_eq!(primes_up_to(100.0).len(), 25);
        assert_eq!(prime_pi(56.23), 16);
    }

    #[test]
    fn positions_and_nth_prime() {
        assert_eq!(nth_prime(1), 2);
        assert_eq!(nth_prime(3), 5);
        assert_eq!(nth_prime(25), 97);
        assert_eq!(prime_position(97), Some(25));
        assert_eq!(prime_position(91), None);
        // beyond the initial table
        assert_eq!(nth_prime(10_000), 104_729);
        assert_eq!(prime_position(104_729), Some(10_000));
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert!(factorize(1).unwrap().factors.is_empty());
        assert_eq!(
            factorize(9_699_690).unwrap().factors,
            [2, 3, 5, 7, 11, 13, 17, 19].iter().map(|&p| (p, 1)).collect::<Vec<_>>()
        );
        assert!(matches!(factorize(0), Err(Error::Domain(_))));
        // large prime cofactor
        assert_eq!(factorize(2 * 1_000_000_007).unwrap().factors, vec![(2, 1), (1_000_000_007, 1)]);
    }

    #[test]
    fn omega_and_divisors() {
        assert_eq!(big_omega(12).unwrap(), 3);
        assert_eq!(big_omega(1).unwrap(), 0);
        assert_eq!(big_omega(1024).unwrap(), 10);
        assert_eq!(divisor_count(12).unwrap(), 6);
        assert_eq!(divisor_count(1).unwrap(), 1);
    }

    #[test]
    fn spf_sieve_agrees_with_trial_division() {
        let s = SpfSieve::new(5000);
        for n in 1..=5000u64 {
            assert_eq!(s.factorize(n as usize), factorize(n).unwrap());
        }
        assert_eq!(s.largest_factor(1), 1);
        assert_eq!(s.largest_factor(84), 7);
        assert_eq!(s.smallest_factor(1), None);
    }

    #[test]
    fn smooth_and_rough_examples() {
        assert_eq!(smooth_numbers(10.0, 2.0), vec![1, 2, 4, 8]);
        assert_eq!(smooth_numbers(20.0, 3.0), vec![1, 2, 3, 4, 6, 8, 9, 12, 16, 18]);
        assert_eq!(smooth_numbers(30.0, 30.0), (1..=30).collect::<Vec<_>>());
        assert_eq!(smooth_numbers(10.0, 1.5), vec![1]);
        assert_eq!(rough_numbers(10.0, 2.0), vec![1, 3, 5, 7, 9]);
        assert_eq!(rough_numbers(10.0, 10.0), vec![1]);
    }

    #[test]
    fn dusart_domain() {
        assert!(dusart_pi_lower(500.0).is_err());
        let b = dusart_pi_lower(599.0).unwrap();
        assert!(prime_pi(599.0) as f64 >= b);
    }

    #[test]
    fn max_divisors() {
        assert_eq!(max_divisor_count(100.0).unwrap(), 12);
        assert_eq!(max_divisor_count(1.0).unwrap(), 1);
    }
}
