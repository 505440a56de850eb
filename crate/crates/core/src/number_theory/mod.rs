//! Divisor functions, Stirling numbers, falling factorials and harmonic sums.

mod scalar;
pub mod stirling;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

pub use scalar::ExactScalar;
pub use stirling::StirlingTable;

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// All divisors of `q` in ascending order, by trial division up to `√q`.
pub fn divisors(q: u64) -> Result<Vec<u64>> {
    if q == 0 {
        return Err(Error::Zero("q"));
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            small.push(d);
            if d * d != q {
                large.push(q / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// `σ_α(q) = Σ_{d | q} d^α`.
pub fn divisor_sigma(alpha: u32, q: u64) -> Result<BigUint> {
    Ok(divisors(q)?
        .into_iter()
        .map(|d| BigUint::from(d).pow(alpha))
        .sum())
}

/// `σ_0'(q)`, the number of odd divisors of `q`.
pub fn odd_divisor_count(q: u64) -> Result<BigUint> {
    Ok(BigUint::from(
        divisors(q)?.into_iter().filter(|d| d % 2 == 1).count(),
    ))
}

pub fn is_prime(q: u64) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

/// Smallest prime `≥ q`.
pub fn next_prime(q: u64) -> u64 {
    (q.max(2)..)
        .find(|&p| is_prime(p))
        .expect("primes are unbounded")
}

/// Stirling number of the second kind `{n k}` from the global table.
pub fn stirling2(n: u64, k: u64) -> BigUint {
    StirlingTable::global().second_kind(n as usize, k as usize)
}

/// Unsigned Stirling number of the first kind `[n k]` from the global table.
pub fn stirling1(n: u64, k: u64) -> BigUint {
    StirlingTable::global().first_kind(n as usize, k as usize)
}

/// Coefficients `({n 1}, …, {n n})` with `x^n = Σ_k {n k} (x)_k`.
pub fn power_to_falling(n: u64) -> Vec<BigUint> {
    (1..=n).map(|k| stirling2(n, k)).collect()
}

/// Signed coefficients of `x^1, …, x^n` in `(x)_n = Σ_k (-1)^{n-k} [n k] x^k`.
pub fn falling_to_power(n: u64) -> Vec<BigInt> {
    (1..=n)
        .map(|k| {
            let v = BigInt::from(stirling1(n, k));
            if (n - k) % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect()
}

/// `H_r = Σ_{d=1}^{r} 1/d`.
pub fn harmonic(r: u64) -> ExactScalar {
    (1..=r).map(|d| ExactScalar::ratio(1, d)).sum()
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}
