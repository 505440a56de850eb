//! Exhaustive enumeration of `S_n` for small `n`. These helpers back the
//! root-count oracle and the verification suites; nothing on the exact
//! computation paths uses them.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::number_theory::ExactScalar;
use crate::partition::{factorial, Partition};

pub const MAX_ENUMERATION_N: u64 = 8;

fn check_n(n: u64) -> Result<()> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::TooLarge {
            what: "n",
            got: n,
            max: MAX_ENUMERATION_N,
        });
    }
    Ok(())
}

/// Calls `f` once per permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: u64, mut f: impl FnMut(&[usize])) -> Result<()> {
    check_n(n)?;
    let n = n as usize;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(())
}

pub fn cycle_type_of(perm: &[usize]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        lengths.push(len);
    }
    Partition::from_unsorted(lengths).expect("cycle lengths are positive")
}

/// `perm^q` by repeated squaring of composition.
pub fn permutation_power(perm: &[usize], mut q: u64) -> Vec<usize> {
    let mut result: Vec<usize> = (0..perm.len()).collect();
    let mut base = perm.to_vec();
    while q > 0 {
        if q & 1 == 1 {
            result = result.iter().map(|&i| base[i]).collect();
        }
        base = base.iter().map(|&i| base[i]).collect();
        q >>= 1;
    }
    result
}

/// `(1/n!) Σ_{π ∈ S_n} f(π)` by visiting every permutation.
pub fn permutation_mean(n: u64, mut f: impl FnMut(&[usize]) -> BigInt) -> Result<ExactScalar> {
    let mut total = BigInt::default();
    for_each_permutation(n, |p| total += f(p))?;
    Ok(ExactScalar::ratio(total, BigInt::from(factorial(n))))
}
