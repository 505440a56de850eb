//! Named verification suites over fixed grids.
//!
//! Exact identities are asserted exactly. Asymptotic statements carry
//! unknown constants, so they are reported as a monitored constant
//! `K = |deviation| / scale` that must stay below a configurable threshold.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};

use crate::cycles::{
    poisson_moment_product, power_cycle_type, root_contributors, CycleType, MomentSpec,
};
use crate::error::{Error, Result};
use crate::multiplicity::{error_term_envelope, MultiplicityEngine};
use crate::number_theory::{
    binomial, divisor_sigma, is_prime, next_prime, odd_divisor_count, stirling1, stirling2,
    ExactScalar,
};
use crate::oracle::{cycle_type_of, for_each_permutation, permutation_power};
use crate::partition::{class_data, factorial, partitions_of, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Scharf,
    Agreement,
    Moments,
    Theorem,
    Stirling,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Scharf,
        Suite::Agreement,
        Suite::Moments,
        Suite::Theorem,
        Suite::Stirling,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Scharf => "scharf",
            Suite::Agreement => "agreement",
            Suite::Moments => "moments",
            Suite::Theorem => "theorem",
            Suite::Stirling => "stirling",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.as_str() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Upper limit for every monitored constant.
    pub threshold: ExactScalar,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            threshold: ExactScalar::integer(10),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Monitored {
    pub name: String,
    pub worst: ExactScalar,
    pub at: String,
    pub samples: u64,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: u64,
    pub failed: u64,
    /// First few failure messages.
    pub failures: Vec<String>,
    pub monitored: Vec<Monitored>,
}

const MAX_MESSAGES: usize = 20;

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            checks: 0,
            failed: 0,
            failures: Vec::new(),
            monitored: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_MESSAGES {
                self.failures.push(msg());
            }
        }
    }

    fn check_result<T>(&mut self, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => {
                self.checks += 1;
                Some(v)
            }
            Err(e) => {
                self.check(false, || e.to_string());
                None
            }
        }
    }

    /// Records `value` under `name` and checks it against the threshold.
    fn monitor(
        &mut self,
        name: &str,
        value: ExactScalar,
        at: impl Fn() -> String,
        threshold: &ExactScalar,
    ) {
        self.check(&value <= threshold, || {
            format!(
                "{name}: K = {} exceeds threshold at {}",
                value.to_f64(),
                at()
            )
        });
        match self.monitored.iter_mut().find(|m| m.name == name) {
            Some(m) => {
                m.samples += 1;
                if value > m.worst {
                    m.worst = value;
                    m.at = at();
                }
            }
            None => self.monitored.push(Monitored {
                name: name.to_string(),
                worst: value,
                at: at(),
                samples: 1,
            }),
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

pub fn run_suite(suite: Suite, config: &VerifyConfig, engine: &MultiplicityEngine) -> SuiteReport {
    let mut report = SuiteReport::new(suite);
    match suite {
        Suite::Scharf => scharf(&mut report, engine),
        Suite::Agreement => agreement(&mut report, engine),
        Suite::Moments => moments(&mut report, engine),
        Suite::Theorem => theorem(&mut report, engine, &config.threshold),
        Suite::Stirling => stirling(&mut report),
    }
    report
}

/// `count` integers from `lo` to `hi`, geometrically spaced, strictly
/// increasing.
pub fn log_spaced(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    let ratio = (hi as f64 / lo as f64).ln();
    let mut out: Vec<u64> = Vec::with_capacity(count);
    for i in 0..count {
        let x = if count == 1 {
            lo as f64
        } else {
            lo as f64 * (ratio * i as f64 / (count - 1) as f64).exp()
        };
        let mut v = x.round() as u64;
        if let Some(&last) = out.last() {
            v = v.max(last + 1);
        }
        out.push(v.min(hi.max(v)));
    }
    out
}

/// Published plateau values of `m_λ^(q)` for tails `(1)`, `(2)`, `(1,1)`.
pub fn published_constant(mu: &Partition, q: u64) -> Option<ExactScalar> {
    let s0 = ExactScalar::from(divisor_sigma(0, q).ok()?);
    let s1 = ExactScalar::from(divisor_sigma(1, q).ok()?);
    let odd = ExactScalar::from(odd_divisor_count(q).ok()?);
    let half = ExactScalar::ratio(1, 2);
    let three = ExactScalar::integer(3);
    let core = &s1 + &(&s0 * &s0) - &three * &s0;
    match mu.to_string().as_str() {
        "1" => Some(s0 - ExactScalar::one()),
        "2" => Some(half * (core + odd)),
        "1,1" => Some(half * (core - odd) + ExactScalar::one()),
        _ => None,
    }
}

fn scharf(report: &mut SuiteReport, engine: &MultiplicityEngine) {
    for n in 1..=8 {
        for lambda in partitions_of(n) {
            for q in 1..=12 {
                for r in [engine.brute(&lambda, q), engine.closed_form(&lambda, q)] {
                    // Both paths reject non-integral or negative totals.
                    report.check_result(r);
                }
            }
        }
    }
}

fn agreement(report: &mut SuiteReport, engine: &MultiplicityEngine) {
    for n in 1..=10 {
        for lambda in partitions_of(n) {
            for q in 1..=12 {
                let (Some(b), Some(c)) = (
                    report.check_result(engine.brute(&lambda, q)),
                    report.check_result(engine.closed_form(&lambda, q)),
                ) else {
                    continue;
                };
                report.check(b.value == c.value, || {
                    format!("λ={lambda} q={q}: brute {} ≠ closed {}", b.value, c.value)
                });
            }
        }
    }
    for mu in ["1", "2", "1,1"] {
        let mu: Partition = mu.parse().unwrap();
        for q in 2..=200 {
            let want = published_constant(&mu, q).unwrap();
            if let Some(got) =
                report.check_result(engine.closed_form_for_tail(&mu, 2 * mu.weight() * q, q))
            {
                report.check(ExactScalar::from(got.value.clone()) == want, || {
                    format!("C_({mu})^{q}: closed form {} ≠ published {want}", got.value)
                });
            }
        }
    }
    for delta in 1..=3 {
        for mu in partitions_of(delta) {
            for q in 2..=20 {
                let values: Vec<_> = [delta * q, delta * q + 1, delta * q + 7]
                    .into_iter()
                    .filter_map(|n| {
                        report
                            .check_result(engine.closed_form_for_tail(&mu, n, q))
                            .map(|r| r.value)
                    })
                    .collect();
                report.check(values.windows(2).all(|w| w[0] == w[1]), || {
                    format!("μ={mu} q={q}: values {values:?} not constant for n ≥ Δq")
                });
            }
        }
    }
}

/// `(1/n!) Σ_ρ |class ρ| f(type of π_ρ, type of π_ρ^q)` with `π_ρ^q` formed
/// by actually powering a representative permutation.
fn class_mean(n: u64, q: u64, f: impl Fn(&CycleType, &CycleType) -> BigInt) -> ExactScalar {
    let mut total = BigInt::default();
    for rho in partitions_of(n) {
        let mut perm = Vec::with_capacity(n as usize);
        let mut start = 0usize;
        for &len in rho.parts() {
            let len = len as usize;
            perm.extend(
                (start..start + len).map(|i| if i + 1 == start + len { start } else { i + 1 }),
            );
            start += len;
        }
        let powered = cycle_type_of(&permutation_power(&perm, q));
        let value = f(
            &CycleType::from_partition(&rho),
            &CycleType::from_partition(&powered),
        );
        total += value * BigInt::from(class_data(&rho).class_size);
    }
    ExactScalar::ratio(total, BigInt::from(factorial(n)))
}

/// Every monomial spec with `Σ k m ≤ max_weight`.
pub fn specs_up_to(max_weight: u64) -> Vec<MomentSpec> {
    fn rec(min_k: u64, budget: u64, prefix: &mut Vec<(u64, u32)>, out: &mut Vec<MomentSpec>) {
        for k in min_k..=budget {
            for m in 1..=(budget / k) {
                prefix.push((k, m as u32));
                out.push(MomentSpec::new(prefix.clone()).expect("distinct increasing k"));
                rec(k + 1, budget - k * m, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(1, max_weight, &mut Vec::new(), &mut out);
    out
}

fn moments(report: &mut SuiteReport, engine: &MultiplicityEngine) {
    let me = engine.moments();
    let specs = specs_up_to(8);
    for n in 1..=8 {
        for spec in &specs {
            let oracle = class_mean(n, 1, |t, _| BigInt::from(spec.evaluate(t)));
            let value = me.power_moment(spec, n);
            report.check(value == oracle, || {
                format!("power moment {spec} at n={n}: {value} ≠ exhaustive {oracle}")
            });
            if spec.saturation() > n {
                let bound = poisson_moment_product(spec);
                report.check(value <= bound, || {
                    format!("power moment {spec} at n={n} exceeds {bound}")
                });
            }
        }
    }
    for n in 1..=7 {
        for q in 1..=12 {
            let mut ok = true;
            let _ = for_each_permutation(n, |perm| {
                let direct = cycle_type_of(&permutation_power(perm, q));
                let via = power_cycle_type(&CycleType::from_partition(&cycle_type_of(perm)), q)
                    .map(|t| t.to_partition());
                ok &= via.as_ref() == Ok(&direct);
            });
            report.check(ok, || format!("powering mismatch for n={n} q={q}"));
        }
    }
    for q in 1..=500 {
        let s0 = ExactScalar::from(divisor_sigma(0, q).unwrap());
        let s1 = ExactScalar::from(divisor_sigma(1, q).unwrap());
        if let Some(m1) = report.check_result(me.root_count_power_moment(1, q, q)) {
            report.check(m1 == s0, || format!("E[c_1(π^{q})] ≠ σ_0"));
        }
        if let Some(m2) = report.check_result(me.root_count_power_moment(2, q, 2 * q)) {
            report.check(m2 == &s1 + &(&s0 * &s0), || {
                format!("E[c_1(π^{q})^2] ≠ σ_1 + σ_0²")
            });
        }
    }
    for n in 1..=8 {
        for q in 1..=12 {
            for delta in 1..=3u32 {
                let oracle = class_mean(n, q, |_, p| BigInt::from(p.count(1)).pow(delta));
                if let Some(v) = report.check_result(me.root_count_power_moment(delta, q, n)) {
                    report.check(v == oracle, || {
                        format!("E[c_1(π^{q})^{delta}] at n={n}: {v} ≠ {oracle}")
                    });
                }
                for r in 1..=3u64 {
                    let oracle = class_mean(n, q, |_, p| {
                        BigInt::from((1..=r).map(|d| p.count(d)).sum::<u64>()).pow(delta)
                    });
                    if let Some(v) = report.check_result(me.truncated_sum_moment(r, delta, q, n)) {
                        report.check(v == oracle, || {
                            format!("truncated r={r} δ={delta} q={q} n={n}: {v} ≠ {oracle}")
                        });
                    }
                }
            }
            for orders in [
                vec![(1u64, 2u32)],
                vec![(1, 1), (2, 1)],
                vec![(2, 2)],
                vec![(1, 2), (3, 1)],
                vec![(1, 3)],
            ] {
                let oracle = class_mean(n, q, |_, p| {
                    orders
                        .iter()
                        .map(|&(d, s)| BigInt::from(binomial(p.count(d), s as u64)))
                        .product()
                });
                if let Some(v) = report.check_result(me.binomial_count_moment(&orders, q, n)) {
                    report.check(v == oracle, || {
                        format!("binomial {orders:?} q={q} n={n}: {v} ≠ {oracle}")
                    });
                }
            }
        }
    }
}

fn ratio_in(value: &ExactScalar, lo: (i64, i64), hi: (i64, i64)) -> bool {
    value >= &ExactScalar::ratio(lo.0, lo.1) && value <= &ExactScalar::ratio(hi.0, hi.1)
}

/// Tails used for the main-term envelope.
pub const ENVELOPE_TAILS: [&str; 6] = ["1", "2", "1,1", "3", "2,1", "1,1,1"];

fn theorem(report: &mut SuiteReport, engine: &MultiplicityEngine, threshold: &ExactScalar) {
    let grid = log_spaced(2, 100_000, 30);
    let primes: Vec<u64> = grid
        .iter()
        .filter(|&&q| q >= 10_000)
        .map(|&q| next_prime(q))
        .collect();
    for mu in ENVELOPE_TAILS {
        let mu: Partition = mu.parse().unwrap();
        let delta = mu.weight();
        for &q in grid.iter().chain(&primes) {
            let (Some(exact), Some(est)) = (
                report.check_result(engine.closed_form_for_tail(&mu, delta * q, q)),
                report.check_result(engine.asymptotic(&mu, q)),
            ) else {
                continue;
            };
            let exact = ExactScalar::from(exact.value);
            let k = (&exact - &est.main_term).abs() / est.error_scale.clone();
            report.monitor(
                &format!("main-term envelope Δ={delta}"),
                k,
                || format!("μ=({mu}) q={q}"),
                threshold,
            );
            if delta >= 2 {
                let ratio = &exact / &est.main_term;
                if q >= 1_000 {
                    report.check(ratio_in(&ratio, (1, 2), (2, 1)), || {
                        format!("μ=({mu}) q={q}: ratio {} outside [0.5, 2]", ratio.to_f64())
                    });
                }
                if q >= 10_000 && is_prime(q) {
                    report.check(ratio_in(&ratio, (9, 10), (11, 10)), || {
                        format!(
                            "μ=({mu}) prime q={q}: ratio {} outside [0.9, 1.1]",
                            ratio.to_f64()
                        )
                    });
                }
            }
        }
    }

    // Second-order term for prime q.
    for q in (31..=97).filter(|&q| is_prime(q)) {
        for delta in 3..=6u32 {
            let Some(mean) = report.check_result(engine.moments().root_count_power_moment(
                delta,
                q,
                delta as u64 * q,
            )) else {
                continue;
            };
            let k = prime_residual_constant(&mean, delta, q);
            report.monitor(
                "prime second-order residual",
                k,
                || format!("q={q} δ={delta}"),
                threshold,
            );
        }
    }

    // Averaged error term against its envelope.
    for q in [16u64, 30, 64, 120, 360, 1024] {
        for delta in (1..=4).filter(|&d| 1u64 << d <= q) {
            let mu = Partition::row(delta);
            for n in [delta * q, 3 * delta * q] {
                let (Some(v), Some(env)) = (
                    report.check_result(engine.error_term_bound(&mu, q, n)),
                    report.check_result(error_term_envelope(delta, q)),
                ) else {
                    continue;
                };
                report.monitor(
                    "averaged error term",
                    v / env,
                    || format!("Δ={delta} q={q} n={n}"),
                    threshold,
                );
            }
        }
    }
}

/// `|E[c_1(π^q)^δ] - σ_{δ-1}(q) - q^{δ-2}(δ + 2^{δ-1} - 1)| / (3^δ q^{δ-3})`.
pub fn prime_residual_constant(mean: &ExactScalar, delta: u32, q: u64) -> ExactScalar {
    let sigma = ExactScalar::from(divisor_sigma(delta - 1, q).expect("q ≥ 1"));
    let second = ExactScalar::from(BigUint::from(q).pow(delta - 2))
        * ExactScalar::from(delta as u64 + (1u64 << (delta - 1)) - 1);
    let residual = (mean - &sigma - second).abs();
    let scale = ExactScalar::from(BigUint::from(3u32).pow(delta) * BigUint::from(q).pow(delta - 3));
    residual / scale
}

fn falling(x: u64, k: u64) -> BigInt {
    (0..k).map(|i| BigInt::from(x) - BigInt::from(i)).product()
}

fn stirling(report: &mut SuiteReport) {
    const N: u64 = 30;
    for n in 1..=N {
        report.check(
            stirling2(n, 2) == (BigUint::from(1u32) << (n - 1) as usize) - 1u32,
            || format!("{{{n} 2}} ≠ 2^(n-1) - 1"),
        );
        report.check(stirling2(n, n - 1) == binomial(n, 2), || {
            format!("{{{n} {}}} ≠ C(n,2)", n - 1)
        });
        for k in 1..=N {
            let lhs = BigInt::from(factorial(k) * stirling2(n, k));
            let rhs = BigInt::from(BigUint::from(k).pow(n as u32))
                - (1..k)
                    .map(|j| BigInt::from(factorial(k) / factorial(k - j) * stirling2(n, j)))
                    .sum::<BigInt>();
            report.check(lhs == rhs, || {
                format!("k!{{n k}} recurrence fails at n={n} k={k}")
            });
            if k <= n {
                report.check(
                    stirling1(n, k) == stirling1(n - 1, k) * (n - 1) + stirling1(n - 1, k - 1),
                    || format!("[n k] recurrence fails at n={n} k={k}"),
                );
                report.check(
                    factorial(k) * stirling1(n, k) <= factorial(n - 1) * binomial(n, k - 1),
                    || format!("[{n} {k}] exceeds (n-1)!/k! C(n,k-1)"),
                );
                report.check(
                    factorial(k) * stirling2(n, k) <= BigUint::from(k).pow(n as u32),
                    || format!("{{{n} {k}}} exceeds k^n/k!"),
                );
            }
        }
        // Polynomial identities of degree n, checked at n + 1 points and more.
        for x in 0..=N + 1 {
            let power = BigInt::from(x).pow(n as u32);
            let via_falling: BigInt = (1..=n)
                .map(|k| BigInt::from(stirling2(n, k)) * falling(x, k))
                .sum();
            report.check(power == via_falling, || {
                format!("x^n ≠ Σ{{n k}}(x)_k at n={n} x={x}")
            });
            let via_powers: BigInt = (1..=n)
                .map(|k| {
                    let term = BigInt::from(stirling1(n, k)) * BigInt::from(x).pow(k as u32);
                    if (n - k) % 2 == 1 {
                        -term
                    } else {
                        term
                    }
                })
                .sum();
            report.check(falling(x, n) == via_powers, || {
                format!("(x)_n ≠ Σ±[n k]x^k at n={n} x={x}")
            });
        }
    }
}

/// Exact cycle-type frequencies of `π^q` over `S_n`, for reports.
pub fn powered_type_distribution(n: u64, q: u64) -> BTreeMap<Partition, BigUint> {
    let mut out: BTreeMap<Partition, BigUint> = BTreeMap::new();
    for rho in partitions_of(n) {
        if let Ok(t) = power_cycle_type(&CycleType::from_partition(&rho), q) {
            *out.entry(t.to_partition()).or_default() += class_data(&rho).class_size;
        }
    }
    out
}

/// `Σ_{k | q} k` recomputed from contributor lists, for cross-checks.
pub fn contributor_weight(q: u64) -> u64 {
    root_contributors(1, q, q)
        .map(|c| c.iter().map(|&(k, _)| k).sum())
        .unwrap_or(0)
}
