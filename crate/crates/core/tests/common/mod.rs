//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use hardy_core::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `sum_{|alpha| = m} (m! / alpha!)^2 / n^m` by enumerating every
/// composition of `m` into `n` parts.
pub fn brute_moment(n: u32, m: u32) -> Rational {
    fn walk(parts_left: u32, remaining: u32, denom: BigInt, mf: &BigInt, acc: &mut Rational) {
        if parts_left == 1 {
            let d = denom * factorial(remaining);
            let coeff = Rational::new(mf.clone(), d);
            *acc += &coeff * &coeff;
            return;
        }
        for a in 0..=remaining {
            walk(parts_left - 1, remaining - a, &denom * factorial(a), mf, acc);
        }
    }
    let mut acc = Rational::zero();
    walk(n, m, BigInt::one(), &factorial(m), &mut acc);
    acc / Rational::from_integer(BigInt::from(n).pow(m))
}

/// `(1/2pi) int_0^{2pi} |1 + e^{i t}| dt` by the composite midpoint rule.
pub fn one_plus_z_l1(steps: usize) -> f64 {
    let h = std::f64::consts::TAU / steps as f64;
    (0..steps).map(|i| (2.0 + 2.0 * ((i as f64 + 0.5) * h).cos()).sqrt()).sum::<f64>() / steps as f64
}
