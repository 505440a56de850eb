//! Irreducible characters of `S_n` by the Murnaghan–Nakayama rule.
//!
//! `χ_λ(ρ)` is evaluated by stripping rim hooks from `λ` whose lengths are
//! the parts of `ρ`, largest part first, summing `(-1)^height` over all
//! removal sequences. Sub-results are memoized on `(shape, remaining cycle
//! type)`; the tables only grow, so every lookup is bit-identical to a fresh
//! evaluation regardless of which thread inserted it.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::number_theory::binomial;
use crate::partition::{factorial, partitions_of, rim_hooks, Partition};

/// Character values are rational integers.
pub type CharacterValue = BigInt;

type SkewKey = (Partition, Partition, Partition);

#[derive(Debug, Default)]
pub struct CharacterEngine {
    full: RwLock<HashMap<(Partition, Partition), BigInt>>,
    skew: RwLock<HashMap<SkewKey, BigInt>>,
}

fn signed(value: BigInt, height: u32) -> BigInt {
    if height % 2 == 1 {
        -value
    } else {
        value
    }
}

impl CharacterEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// `χ_λ` at the class of cycle type `ρ`.
    pub fn mn_character(&self, lambda: &Partition, rho: &Partition) -> Result<CharacterValue> {
        if lambda.weight() != rho.weight() {
            return Err(Error::WeightMismatch {
                left: lambda.weight(),
                right: rho.weight(),
            });
        }
        Ok(self.mn(lambda, rho))
    }

    fn mn(&self, lambda: &Partition, rho: &Partition) -> BigInt {
        if rho.is_empty() {
            return if lambda.is_empty() {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        if lambda.len() == 1 {
            return BigInt::one();
        }
        let key = (lambda.clone(), rho.clone());
        if let Some(v) = self.full.read().unwrap().get(&key) {
            return v.clone();
        }
        let rest = rho.suffix(1);
        let value = rim_hooks(lambda, rho.first())
            .into_iter()
            .map(|(nu, h)| signed(self.mn(&nu, &rest), h))
            .sum();
        self.full
            .write()
            .unwrap()
            .insert(key, BigInt::clone(&value));
        value
    }

    /// Degree `χ_μ(1)`, from the character at the identity class. The hook
    /// length formula is evaluated alongside and must agree.
    pub fn dimension(&self, mu: &Partition) -> CharacterValue {
        let value = self.mn(mu, &Partition::column(mu.weight()));
        let hooks = BigInt::from(factorial(mu.weight()) / mu.hook_product());
        assert_eq!(
            value, hooks,
            "Murnaghan–Nakayama and hook length disagree for {mu}"
        );
        value
    }

    /// Signed number of ways to reach `mu_tilde` from `mu` by removing rim
    /// hooks whose lengths are the parts of `cycles`, in weakly decreasing
    /// order.
    pub fn rim_hook_count(
        &self,
        mu: &Partition,
        mu_tilde: &Partition,
        cycles: &Partition,
    ) -> Result<CharacterValue> {
        if !mu.contains(mu_tilde) {
            return Err(Error::NotContained {
                inner: mu_tilde.to_string(),
                outer: mu.to_string(),
            });
        }
        if mu.weight() - mu_tilde.weight() != cycles.weight() {
            return Err(Error::WeightMismatch {
                left: mu.weight() - mu_tilde.weight(),
                right: cycles.weight(),
            });
        }
        Ok(self.skew(mu, mu_tilde, cycles))
    }

    fn skew(&self, shape: &Partition, target: &Partition, cycles: &Partition) -> BigInt {
        if cycles.is_empty() {
            return if shape == target {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        if target.is_empty() {
            return self.mn(shape, cycles);
        }
        let key = (shape.clone(), target.clone(), cycles.clone());
        if let Some(v) = self.skew.read().unwrap().get(&key) {
            return v.clone();
        }
        let rest = cycles.suffix(1);
        let value = rim_hooks(shape, cycles.first())
            .into_iter()
            .filter(|(nu, _)| nu.contains(target))
            .map(|(nu, h)| signed(self.skew(&nu, target, &rest), h))
            .sum();
        self.skew
            .write()
            .unwrap()
            .insert(key, BigInt::clone(&value));
        value
    }

    /// `χ_λ(π)` for `λ = (n - |μ|, μ)`, from the first `|μ|` cycle counts of
    /// `π` alone (`counts[i-1] = c_i(π)`, missing entries read as zero):
    ///
    /// `Σ_{t} (-1)^t Σ_{c ⊢ |μ|-t} χ_{μ,(1^t)}(c) ∏_i binom(c_i(π), c_i)`
    ///
    /// where `(1^t)` runs over the single-column shapes inside `μ`.
    pub fn char_poly_eval(&self, mu: &Partition, counts: &[u64]) -> CharacterValue {
        let delta = mu.weight();
        let mut total = BigInt::zero();
        for t in 0..=mu.len() as u64 {
            let column = Partition::column(t);
            for class in partitions_of(delta - t) {
                let coeff = self.skew(mu, &column, &class);
                if coeff.is_zero() {
                    continue;
                }
                let mut term = coeff;
                for (i, &c) in class.multiplicities().iter().enumerate() {
                    let have = counts.get(i).copied().unwrap_or(0);
                    term *= BigInt::from(binomial(have, c));
                }
                if t % 2 == 1 {
                    total -= term;
                } else {
                    total += term;
                }
            }
        }
        total
    }

    pub fn memo_len(&self) -> usize {
        self.full.read().unwrap().len()
    }

    /// Memoized full characters as `lambda|rho<TAB>value` lines, sorted.
    pub fn to_tsv(&self) -> String {
        let table = self.full.read().unwrap();
        let mut lines: Vec<String> = table
            .iter()
            .map(|((l, r), v)| format!("{l}|{r}\t{v}\n"))
            .collect();
        lines.sort();
        lines.concat()
    }

    /// Seeds the memo from [`CharacterEngine::to_tsv`] output; returns the
    /// number of entries loaded.
    pub fn load_tsv(&self, text: &str) -> Result<usize> {
        let mut parsed = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let bad = || Error::InvalidPartition(format!("malformed cache line {line:?}"));
            let (key, value) = line.split_once('\t').ok_or_else(bad)?;
            let (l, r) = key.split_once('|').ok_or_else(bad)?;
            let lambda: Partition = l.parse()?;
            let rho: Partition = r.parse()?;
            if lambda.weight() != rho.weight() {
                return Err(bad());
            }
            let value: BigInt = value.trim().parse().map_err(|_| bad())?;
            parsed.push(((lambda, rho), value));
        }
        let count = parsed.len();
        self.full.write().unwrap().extend(parsed);
        Ok(count)
    }
}

/// Rim-hook count with the hook lengths processed in exactly the given order.
/// Unmemoized; used to check that the decreasing-order convention does not
/// change the result.
pub fn rim_hook_count_in_order(mu: &Partition, mu_tilde: &Partition, lengths: &[u64]) -> BigInt {
    match lengths.split_first() {
        None => {
            if mu == mu_tilde {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        }
        Some((&t, rest)) => rim_hooks(mu, t)
            .into_iter()
            .filter(|(nu, _)| nu.contains(mu_tilde))
            .map(|(nu, h)| signed(rim_hook_count_in_order(&nu, mu_tilde, rest), h))
            .sum(),
    }
}
