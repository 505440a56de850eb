use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;

use super::expansion::{expected_product, LinearForm, Shape};
use super::{root_contributors, MomentSpec};
use crate::error::{Error, Result};
use crate::number_theory::{stirling2, ExactScalar};
use crate::partition::factorial;

/// `E[∏_j (c_{k_j})_{s_j}]` over uniform `S_n`: zero if `Σ k_j s_j > n`,
/// otherwise `∏_j k_j^{-s_j}`.
pub fn falling_moment(spec: &[(u64, u64)], n: u64) -> Result<ExactScalar> {
    let mut ks: Vec<u64> = spec.iter().map(|&(k, _)| k).collect();
    ks.sort_unstable();
    if ks.windows(2).any(|w| w[0] == w[1]) || ks.first() == Some(&0) {
        return Err(Error::InvalidMomentSpec(format!(
            "{spec:?}: lengths must be distinct and positive"
        )));
    }
    let weight: u64 = spec.iter().map(|&(k, s)| k * s).sum();
    if weight > n {
        return Ok(ExactScalar::zero());
    }
    let den: BigInt = spec
        .iter()
        .map(|&(k, s)| BigInt::from(k).pow(s as u32))
        .product();
    Ok(ExactScalar::ratio(1, den))
}

/// `∏_j Σ_{s=1}^{m_j} {m_j s} k_j^{-s}`: the large-`n` limit of the power
/// moment and an upper bound for every `n`.
pub fn poisson_moment_product(spec: &MomentSpec) -> ExactScalar {
    spec.terms()
        .iter()
        .map(|&(k, m)| {
            (1..=m as u64)
                .map(|s| {
                    ExactScalar::from(stirling2(m as u64, s))
                        * ExactScalar::ratio(1, BigInt::from(k).pow(s as u32))
                })
                .sum::<ExactScalar>()
        })
        .fold(ExactScalar::one(), |acc, f| acc * f)
}

/// Exponent vectors summing to `total` over `slots` positions, in
/// lexicographic order.
fn compositions(total: u32, slots: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            rec(total - first, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if slots == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, slots, &mut Vec::with_capacity(slots), &mut out);
    out
}

type PowerKey = (MomentSpec, Option<u64>);
type BinomialKey = (Vec<(u64, u32)>, u64, Option<u64>);

/// Exact moment evaluator with memo tables. Memo keys drop `n` once the
/// requested mean no longer depends on it.
#[derive(Debug, Default)]
pub struct MomentEngine {
    power: RwLock<HashMap<PowerKey, ExactScalar>>,
    binomial: RwLock<HashMap<BinomialKey, ExactScalar>>,
}

impl MomentEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// `E[∏_j c_{k_j}^{m_j}]` over uniform `S_n`, exact for every `n`: each
    /// power becomes a combination of falling factorials through Stirling
    /// numbers of the second kind.
    pub fn power_moment(&self, spec: &MomentSpec, n: u64) -> ExactScalar {
        let key = (spec.clone(), (spec.saturation() > n).then_some(n));
        if let Some(v) = self.power.read().unwrap().get(&key) {
            return v.clone();
        }
        let terms = spec.terms();
        let mut total = ExactScalar::zero();
        let mut s = vec![1u32; terms.len()];
        'outer: loop {
            let falling: Vec<(u64, u64)> = terms
                .iter()
                .zip(&s)
                .map(|(&(k, _), &sj)| (k, sj as u64))
                .collect();
            let value = falling_moment(&falling, n).expect("MomentSpec has distinct lengths");
            if !value.is_zero() {
                let coeff: BigInt = terms
                    .iter()
                    .zip(&s)
                    .map(|(&(_, m), &sj)| BigInt::from(stirling2(m as u64, sj as u64)))
                    .product();
                total += ExactScalar::from(coeff) * value;
            }
            for j in (0..s.len()).rev() {
                if s[j] < terms[j].1 {
                    s[j] += 1;
                    s[j + 1..].iter_mut().for_each(|x| *x = 1);
                    continue 'outer;
                }
            }
            break;
        }
        self.power.write().unwrap().insert(key, total.clone());
        total
    }

    /// Mean of `(Σ_i a_i c_{k_i})^δ` by direct multinomial expansion over the
    /// contributor list, every monomial evaluated with [`Self::power_moment`].
    fn linear_power_moment(&self, contributors: &[(u64, u64)], delta: u32, n: u64) -> ExactScalar {
        let delta_fact = factorial(delta as u64);
        let mut total = ExactScalar::zero();
        for exps in compositions(delta, contributors.len()) {
            let mut coeff = BigInt::from(delta_fact.clone());
            let mut terms = Vec::new();
            for (&(k, a), &e) in contributors.iter().zip(&exps) {
                if e > 0 {
                    coeff *= BigInt::from(a).pow(e);
                    coeff /= BigInt::from(factorial(e as u64));
                    terms.push((k, e));
                }
            }
            let spec = MomentSpec::new(terms).expect("contributors have distinct lengths");
            let value = if spec.terms().is_empty() {
                ExactScalar::one()
            } else {
                self.power_moment(&spec, n)
            };
            total += ExactScalar::from(coeff) * value;
        }
        total
    }

    /// `E[c_1(π^q)^δ]` over uniform `π ∈ S_n`, using `c_1(π^q) = Σ_{k | q} k c_k(π)`.
    pub fn root_count_power_moment(&self, delta: u32, q: u64, n: u64) -> Result<ExactScalar> {
        if delta == 0 {
            return Err(Error::Zero("delta"));
        }
        let contributors = root_contributors(1, q, n)?;
        Ok(self.linear_power_moment(&contributors, delta, n))
    }

    /// `E[(c_1(π^q) + … + c_r(π^q))^δ]` over uniform `π ∈ S_n`.
    pub fn truncated_sum_moment(&self, r: u64, delta: u32, q: u64, n: u64) -> Result<ExactScalar> {
        if r == 0 {
            return Err(Error::Zero("r"));
        }
        if delta == 0 {
            return Err(Error::Zero("delta"));
        }
        let contributors = truncated_contributors(r, q, n)?;
        Ok(self.linear_power_moment(&contributors, delta, n))
    }

    /// `E[∏_d binom(c_d(π^q), s_d)]` over uniform `π ∈ S_n`, for distinct `d`.
    pub fn binomial_count_moment(
        &self,
        orders: &[(u64, u32)],
        q: u64,
        n: u64,
    ) -> Result<ExactScalar> {
        let mut orders: Vec<(u64, u32)> = orders.iter().copied().filter(|&(_, s)| s > 0).collect();
        orders.sort_unstable();
        if orders.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidMomentSpec(format!(
                "{orders:?}: repeated cycle length"
            )));
        }
        let factors = orders
            .iter()
            .map(|&(d, s)| {
                Ok((
                    LinearForm::new(root_contributors(d, q, n)?),
                    Shape::Binomial(s),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        // Without the k ≤ n cap the largest contributor to c_d(π^q) is d·q.
        let saturated = orders.iter().map(|&(d, s)| d * q * s as u64).sum::<u64>() <= n;
        let key = (orders, q, (!saturated).then_some(n));
        if let Some(v) = self.binomial.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let value = expected_product(&factors, n);
        self.binomial.write().unwrap().insert(key, value.clone());
        Ok(value)
    }

    /// `E[binom(c_1(π^q) + … + c_r(π^q), s)]` over uniform `π ∈ S_n`.
    pub fn binomial_truncated_moment(&self, r: u64, s: u32, q: u64, n: u64) -> Result<ExactScalar> {
        if r == 0 {
            return Err(Error::Zero("r"));
        }
        let form = LinearForm::new(truncated_contributors(r, q, n)?);
        Ok(expected_product(&[(form, Shape::Binomial(s))], n))
    }

    /// `E[∏_j c_{d_j}(π^q)^{m_j}]` over uniform `π ∈ S_n`; `spec` lists cycle
    /// lengths of `π^q`. Reduces to [`Self::power_moment`] when `q = 1`.
    pub fn root_cycle_power_moment(
        &self,
        spec: &MomentSpec,
        q: u64,
        n: u64,
    ) -> Result<ExactScalar> {
        let factors = spec
            .terms()
            .iter()
            .map(|&(d, m)| {
                Ok((
                    LinearForm::new(root_contributors(d, q, n)?),
                    Shape::Power(m),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(expected_product(&factors, n))
    }
}

/// Contributors to `c_1(π^q) + … + c_r(π^q)`: every `k ≤ n` with
/// `k / (k, q) ≤ r`, weighted by `(k, q)`.
fn truncated_contributors(r: u64, q: u64, n: u64) -> Result<Vec<(u64, u64)>> {
    let mut all = Vec::new();
    for d in 1..=r.min(n.max(1)) {
        all.extend(root_contributors(d, q, n)?);
    }
    all.sort_unstable();
    Ok(all)
}
