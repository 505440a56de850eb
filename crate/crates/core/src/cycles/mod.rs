//! Cycle structure of permutation powers and exact moments of cycle counts
//! over the uniform measure on `S_n`.
//!
//! No moment here is ever computed by enumerating `S_n`. Every mean reduces
//! to falling-factorial moments `E[∏ (c_k)_{s_k}]`, which are exactly
//! `∏ k^{-s_k}` when `Σ k s_k ≤ n` and zero otherwise; that cutoff is the only
//! place `n` enters.

mod expansion;
mod moments;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::number_theory::{divisors, gcd};
use crate::partition::Partition;

pub use moments::{falling_moment, poisson_moment_product, MomentEngine};

/// Cycle counts `c_i` of a permutation of `n` points. Zero counts are not
/// stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CycleType {
    n: u64,
    counts: BTreeMap<u64, u64>,
}

impl CycleType {
    /// Builds a cycle type from `(length, multiplicity)` pairs; `n` is derived.
    pub fn from_counts(pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (len, c) in pairs {
            if len == 0 {
                return Err(Error::Zero("cycle length"));
            }
            if c > 0 {
                *counts.entry(len).or_insert(0) += c;
            }
        }
        let n = counts.iter().map(|(l, c)| l * c).sum();
        Ok(CycleType { n, counts })
    }

    pub fn from_partition(p: &Partition) -> Self {
        let mut counts = BTreeMap::new();
        for &part in p.parts() {
            *counts.entry(part).or_insert(0) += 1;
        }
        CycleType {
            n: p.weight(),
            counts,
        }
    }

    pub fn to_partition(&self) -> Partition {
        let mut parts = Vec::new();
        for (&len, &c) in self.counts.iter().rev() {
            parts.extend(std::iter::repeat_n(len, c as usize));
        }
        Partition::new(parts).expect("cycle lengths are positive and sorted")
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `c_i`, zero if absent.
    pub fn count(&self, len: u64) -> u64 {
        self.counts.get(&len).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&l, &c)| (l, c))
    }
}

/// Cycle type of `π^q` when `π` has type `t`: a `k`-cycle splits into
/// `(k, q)` cycles of length `k / (k, q)`.
pub fn power_cycle_type(t: &CycleType, q: u64) -> Result<CycleType> {
    if q == 0 {
        return Err(Error::Zero("q"));
    }
    CycleType::from_counts(t.iter().map(|(k, c)| {
        let g = gcd(k, q);
        (k / g, g * c)
    }))
}

/// All `k ≤ k_cap` with `k / (k, q) = d`, paired with `(k, q)`, ascending.
///
/// These are exactly `k = d·e` with `e | q` and `gcd(d, q/e) = 1`, in which
/// case `(k, q) = e`.
pub fn root_contributors(d: u64, q: u64, k_cap: u64) -> Result<Vec<(u64, u64)>> {
    if d == 0 {
        return Err(Error::Zero("d"));
    }
    Ok(divisors(q)?
        .into_iter()
        .filter(|&e| gcd(d, q / e) == 1)
        .map(|e| (d * e, e))
        .take_while(|&(k, _)| k <= k_cap)
        .collect())
}

/// Monomial `∏ c_{k_j}^{m_j}` with pairwise-distinct `k_j`, sorted by `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MomentSpec {
    terms: Vec<(u64, u32)>,
}

impl MomentSpec {
    pub fn new(mut terms: Vec<(u64, u32)>) -> Result<Self> {
        terms.sort_unstable();
        if terms.iter().any(|&(k, m)| k == 0 || m == 0) {
            return Err(Error::InvalidMomentSpec(format!(
                "{terms:?}: lengths and exponents must be positive"
            )));
        }
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidMomentSpec(format!(
                "{terms:?}: repeated cycle length"
            )));
        }
        Ok(MomentSpec { terms })
    }

    pub fn terms(&self) -> &[(u64, u32)] {
        &self.terms
    }

    /// `Σ k_j m_j`: the smallest `n` at which the mean stops depending on `n`.
    pub fn saturation(&self) -> u64 {
        self.terms.iter().map(|&(k, m)| k * m as u64).sum()
    }

    /// Value of the monomial at a concrete cycle type.
    pub fn evaluate(&self, t: &CycleType) -> num_bigint::BigUint {
        self.terms
            .iter()
            .map(|&(k, m)| num_bigint::BigUint::from(t.count(k)).pow(m))
            .product()
    }
}

impl fmt::Display for MomentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(k, m)| format!("{k}:{m}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for MomentSpec {
    type Err = Error;

    /// Parses `k:m[,k:m...]`.
    fn from_str(s: &str) -> Result<Self> {
        let terms = s
            .split(',')
            .map(|tok| {
                let bad =
                    || Error::InvalidMomentSpec(format!("cannot parse {tok:?}; expected k:m"));
                let (k, m) = tok.trim().split_once(':').ok_or_else(bad)?;
                Ok((
                    k.trim().parse().map_err(|_| bad())?,
                    m.trim().parse().map_err(|_| bad())?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        MomentSpec::new(terms)
    }
}
