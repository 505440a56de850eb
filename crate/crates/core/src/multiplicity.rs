//! Multiplicities `m_λ^(q) = ⟨r_q, χ_λ⟩ = (1/n!) Σ_π χ_λ(π^q)` by three routes.
//!
//! * brute: class sum over the conjugacy classes of `S_n`.
//! * closed form: expand `χ_λ` as a polynomial in cycle counts through
//!   `μ = λ \ λ_1`, then average each binomial product of `c_i(π^q)` exactly.
//!   No enumeration of `S_n`; `n` only enters through falling-factorial
//!   cutoffs, all of which are inactive once `n ≥ |μ| q`.
//! * asymptotic: `χ_μ(1)/|μ|! · σ_{|μ|-1}(q)` plus the error scale of the
//!   large-`q` expansion.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::character::CharacterEngine;
use crate::cycles::{power_cycle_type, CycleType, MomentEngine};
use crate::error::{Error, Result};
use crate::number_theory::{divisor_sigma, ExactScalar};
use crate::oracle::{cycle_type_of, for_each_permutation, permutation_power};
use crate::partition::{class_data, factorial, partitions_of, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Brute,
    ClosedForm,
    AsymptoticMain,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::ClosedForm => "closed_form",
            Method::AsymptoticMain => "asymptotic_main",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct MultiplicityResult {
    pub value: BigInt,
    pub lambda: Partition,
    pub q: u64,
    pub method: Method,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticEstimate {
    pub main_term: ExactScalar,
    /// Error expression without its (unknown, universal) constant.
    pub error_scale: ExactScalar,
    pub delta: u64,
    pub q: u64,
    /// Whether `Δ ≤ log q / log 2`, the range where the expansion is claimed.
    pub within_range: bool,
}

/// Shared memo tables for all exact paths.
#[derive(Debug, Default)]
pub struct MultiplicityEngine {
    chars: CharacterEngine,
    moments: MomentEngine,
}

fn finish(
    total: ExactScalar,
    lambda: &Partition,
    q: u64,
    method: Method,
    start: Instant,
) -> Result<MultiplicityResult> {
    let value = total.to_integer().ok_or_else(|| {
        Error::Consistency(format!(
            "{method} multiplicity of λ={lambda}, q={q} is {total}, not an integer"
        ))
    })?;
    if value.is_negative() {
        return Err(Error::Consistency(format!(
            "{method} multiplicity of λ={lambda}, q={q} is negative: {value}"
        )));
    }
    Ok(MultiplicityResult {
        value,
        lambda: lambda.clone(),
        q,
        method,
        elapsed: start.elapsed(),
    })
}

fn check_q(q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::Zero("q"));
    }
    Ok(())
}

impl MultiplicityEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_characters(chars: CharacterEngine) -> Self {
        MultiplicityEngine {
            chars,
            moments: MomentEngine::new(),
        }
    }

    pub fn characters(&self) -> &CharacterEngine {
        &self.chars
    }

    pub fn moments(&self) -> &MomentEngine {
        &self.moments
    }

    /// `Σ_ρ |class(ρ)| χ_λ(ρ^q) / n!`. Classes are evaluated in parallel and
    /// summed in enumeration order.
    pub fn brute(&self, lambda: &Partition, q: u64) -> Result<MultiplicityResult> {
        check_q(q)?;
        if lambda.is_empty() {
            return Err(Error::EmptyPartition);
        }
        let start = Instant::now();
        if lambda.len() == 1 {
            return finish(ExactScalar::one(), lambda, q, Method::Brute, start);
        }
        let n = lambda.weight();
        let classes: Vec<Partition> = partitions_of(n).collect();
        let terms: Vec<BigInt> = classes
            .par_iter()
            .map(|rho| {
                let powered = power_cycle_type(&CycleType::from_partition(rho), q)
                    .expect("q checked")
                    .to_partition();
                let chi = self
                    .chars
                    .mn_character(lambda, &powered)
                    .expect("powering preserves weight");
                chi * BigInt::from(class_data(rho).class_size)
            })
            .collect();
        let sum: BigInt = terms.into_iter().sum();
        finish(
            ExactScalar::ratio(sum, BigInt::from(factorial(n))),
            lambda,
            q,
            Method::Brute,
            start,
        )
    }

    /// Closed form through the cycle-count polynomial of `χ_λ`.
    pub fn closed_form(&self, lambda: &Partition, q: u64) -> Result<MultiplicityResult> {
        check_q(q)?;
        let mu = lambda.remove_tail()?;
        let start = Instant::now();
        if mu.is_empty() {
            return finish(ExactScalar::one(), lambda, q, Method::ClosedForm, start);
        }
        let n = lambda.weight();
        let delta = mu.weight();
        let mut total = ExactScalar::zero();
        for t in 0..=mu.len() as u64 {
            let column = Partition::column(t);
            for class in partitions_of(delta - t) {
                let coeff = self.chars.rim_hook_count(&mu, &column, &class)?;
                if coeff.is_zero() {
                    continue;
                }
                let orders: Vec<(u64, u32)> = class
                    .multiplicities()
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(i, &c)| (i as u64 + 1, c as u32))
                    .collect();
                let moment = self.moments.binomial_count_moment(&orders, q, n)?;
                let term = ExactScalar::from(coeff) * moment;
                if t % 2 == 1 {
                    total -= term;
                } else {
                    total += term;
                }
            }
        }
        finish(total, lambda, q, Method::ClosedForm, start)
    }

    /// Closed form for `λ = (n - |μ|, μ)`, rejecting `n - |μ| < μ_1`.
    pub fn closed_form_for_tail(
        &self,
        mu: &Partition,
        n: u64,
        q: u64,
    ) -> Result<MultiplicityResult> {
        self.closed_form(&lambda_from_tail(mu, n)?, q)
    }

    /// Main term `χ_μ(1)/Δ! · σ_{Δ-1}(q)` and the matching error scale.
    pub fn asymptotic(&self, mu: &Partition, q: u64) -> Result<AsymptoticEstimate> {
        check_q(q)?;
        let delta = mu.weight();
        if delta == 0 {
            return Err(Error::TrivialCharacter);
        }
        let within_range = delta < 64 && (1u64 << delta) <= q;
        if !within_range {
            log::debug!("Δ = {delta} exceeds log2(q) for q = {q}; the main term is outside its proven range");
        }
        let sigma = |a: u32| ExactScalar::from(divisor_sigma(a, q).expect("q checked"));
        let weight = ExactScalar::ratio(self.chars.dimension(mu), BigInt::from(factorial(delta)));
        let main_term = &weight * &sigma(delta as u32 - 1);
        let error_scale = match delta {
            1 => ExactScalar::one(),
            2 => sigma(0).pow(2),
            3 => &sigma(0) * &sigma(1),
            _ => {
                let q_pow = ExactScalar::from(BigUint::from(q).pow(delta as u32 - 2));
                let bracket = ExactScalar::from(delta) * sigma(0)
                    + ExactScalar::from(BigUint::from(2u32).pow(delta as u32));
                weight * q_pow * bracket
            }
        };
        Ok(AsymptoticEstimate {
            main_term,
            error_scale,
            delta,
            q,
            within_range,
        })
    }

    /// `Σ_{j=1}^{Δ} E[binom(c_1(π^q) + … + c_{j+1}(π^q), Δ - j)]` over
    /// uniform `π ∈ S_n`, the averaged error term of the main-term
    /// approximation.
    pub fn error_term_bound(&self, mu: &Partition, q: u64, n: u64) -> Result<ExactScalar> {
        check_q(q)?;
        let delta = mu.weight();
        if delta == 0 {
            return Err(Error::TrivialCharacter);
        }
        (1..=delta)
            .map(|j| {
                self.moments
                    .binomial_truncated_moment(j + 1, (delta - j) as u32, q, n)
            })
            .sum()
    }
}

/// `(n - |μ|, μ)`, or an error if that is not a partition.
pub fn lambda_from_tail(mu: &Partition, n: u64) -> Result<Partition> {
    let head = n
        .checked_sub(mu.weight())
        .filter(|&h| h >= mu.first().max(1));
    match head {
        Some(h) => mu.with_head(h),
        None => Err(Error::InvalidPartition(format!(
            "n = {n} is too small for tail ({mu}); need n ≥ {}",
            mu.weight() + mu.first().max(1)
        ))),
    }
}

/// Reference scale for [`MultiplicityEngine::error_term_bound`]:
/// `1, σ_0(q), σ_1(q), q^{Δ-2}/(Δ-1)!` for `Δ = 1, 2, 3, ≥ 4`.
pub fn error_term_envelope(delta: u64, q: u64) -> Result<ExactScalar> {
    Ok(match delta {
        0 => return Err(Error::TrivialCharacter),
        1 => ExactScalar::one(),
        2 => divisor_sigma(0, q)?.into(),
        3 => divisor_sigma(1, q)?.into(),
        _ => ExactScalar::ratio(
            BigInt::from(BigUint::from(q).pow(delta as u32 - 2)),
            BigInt::from(factorial(delta - 1)),
        ),
    })
}

/// `r_q` on each class of `S_n`, by powering all `n!` permutations.
pub fn brute_force_root_counts(n: u64, q: u64) -> Result<BTreeMap<Partition, BigUint>> {
    check_q(q)?;
    let mut hits: BTreeMap<Partition, BigUint> =
        partitions_of(n).map(|p| (p, BigUint::zero())).collect();
    for_each_permutation(n, |sigma| {
        *hits
            .get_mut(&cycle_type_of(&permutation_power(sigma, q)))
            .expect("every type is a partition") += 1u32;
    })?;
    for (rho, count) in hits.iter_mut() {
        let size = class_data(rho).class_size;
        debug_assert!(count.is_multiple_of(&size));
        *count /= size;
    }
    Ok(hits)
}
