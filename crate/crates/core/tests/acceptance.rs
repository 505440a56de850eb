//! Acceptance gate. Every criterion runs against oracles computed here from
//! first principles and prints one PASS/FAIL line.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rootmult_core::cycles::{power_cycle_type, CycleType, MomentSpec};
use rootmult_core::multiplicity::MultiplicityEngine;
use rootmult_core::number_theory::{stirling1, stirling2};
use rootmult_core::partition::partitions_of;
use rootmult_core::sampler::empirical_moment;
use rootmult_core::verify::{log_spaced, run_suite, Suite, VerifyConfig};
use rootmult_core::{ExactScalar, Partition};

// ---- independent oracles ----

fn sigma(alpha: u32, q: u64) -> BigInt {
    (1..=q)
        .filter(|d| q.is_multiple_of(*d))
        .map(|d| BigInt::from(d).pow(alpha))
        .sum()
}

fn sigma_fast(alpha: u32, q: u64) -> BigInt {
    let mut total = BigInt::zero();
    let mut d = 1;
    while d * d <= q {
        if q.is_multiple_of(d) {
            total += BigInt::from(d).pow(alpha);
            if d * d != q {
                total += BigInt::from(q / d).pow(alpha);
            }
        }
        d += 1;
    }
    total
}

fn odd_divisors(q: u64) -> BigInt {
    BigInt::from(
        (1..=q)
            .filter(|d| q.is_multiple_of(*d) && d % 2 == 1)
            .count(),
    )
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn fact(n: u64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Degree by the hook length formula.
fn hook_dimension(parts: &[u64]) -> BigInt {
    let n: u64 = parts.iter().sum();
    let mut hooks = BigInt::one();
    for (i, &row) in parts.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = parts[i + 1..].iter().filter(|&&r| r > j).count() as u64;
            hooks *= arm + leg + 1;
        }
    }
    fact(n) / hooks
}

fn cycle_lengths(perm: &[usize]) -> Vec<u64> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn naive_power(perm: &[usize], q: u64) -> Vec<usize> {
    let mut out: Vec<usize> = (0..perm.len()).collect();
    for _ in 0..q {
        out = out.iter().map(|&i| perm[i]).collect();
    }
    out
}

fn exact(x: &ExactScalar) -> BigRational {
    x.as_rational().clone()
}

fn partition(text: &str) -> Partition {
    text.parse().unwrap()
}

// ---- criteria ----

fn q2_universality() -> Result<String, String> {
    let engine = MultiplicityEngine::new();
    for n in 1..=8 {
        for lambda in partitions_of(n) {
            let b = engine.brute(&lambda, 2).map_err(|e| e.to_string())?.value;
            let c = engine
                .closed_form(&lambda, 2)
                .map_err(|e| e.to_string())?
                .value;
            if !b.is_one() || !c.is_one() {
                return Err(format!("λ={lambda}: brute {b}, closed {c}"));
            }
        }
    }
    // All multiplicities 1 means r_2(id) = Σ χ(1), the involution count.
    for n in 1..=7u64 {
        let involutions = (0..n as usize)
            .permutations(n as usize)
            .filter(|p| naive_power(p, 2).iter().enumerate().all(|(i, &x)| i == x))
            .count();
        let degrees: BigInt = partitions_of(n).map(|l| hook_dimension(l.parts())).sum();
        if degrees != BigInt::from(involutions) {
            return Err(format!(
                "n={n}: Σ χ(1) = {degrees}, involutions {involutions}"
            ));
        }
    }
    Ok("n ≤ 8, both paths".into())
}

fn paper_constants() -> Result<String, String> {
    let engine = MultiplicityEngine::new();
    let half = BigRational::new(1.into(), 2.into());
    for q in 2..=200 {
        let (s0, s1, odd) = (rat(sigma(0, q)), rat(sigma(1, q)), rat(odd_divisors(q)));
        let core = &s1 + &s0 * &s0 - rat(3) * &s0;
        let want = [
            ("1", &s0 - rat(1)),
            ("2", &half * (&core + &odd)),
            ("1,1", &half * (&core - &odd) + rat(1)),
        ];
        for (mu, value) in want {
            let mu = partition(mu);
            let got = engine
                .closed_form_for_tail(&mu, 2 * mu.weight() * q, q)
                .map_err(|e| e.to_string())?;
            if rat(got.value.clone()) != value {
                return Err(format!("μ=({mu}) q={q}: got {}, want {value}", got.value));
            }
        }
    }
    Ok("q = 2..200".into())
}

fn path_agreement() -> Result<String, String> {
    let engine = MultiplicityEngine::new();
    let mut count = 0;
    for n in 1..=10 {
        for lambda in partitions_of(n) {
            for q in 1..=12 {
                let b = engine.brute(&lambda, q).map_err(|e| e.to_string())?.value;
                let c = engine
                    .closed_form(&lambda, q)
                    .map_err(|e| e.to_string())?
                    .value;
                if b != c {
                    return Err(format!("λ={lambda} q={q}: brute {b} ≠ closed {c}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} (λ, q) pairs"))
}

fn root_count_closed_forms() -> Result<String, String> {
    let engine = MultiplicityEngine::new();
    let m = engine.moments();
    for q in 1..=500 {
        let (s0, s1) = (rat(sigma_fast(0, q)), rat(sigma_fast(1, q)));
        for n in [q, q + 3] {
            let v = exact(
                &m.root_count_power_moment(1, q, n)
                    .map_err(|e| e.to_string())?,
            );
            if v != s0 {
                return Err(format!("δ=1 q={q} n={n}: {v} ≠ {s0}"));
            }
        }
        for n in [2 * q, 2 * q + 5] {
            let v = exact(
                &m.root_count_power_moment(2, q, n)
                    .map_err(|e| e.to_string())?,
            );
            if v != &s1 + &s0 * &s0 {
                return Err(format!("δ=2 q={q} n={n}: {v}"));
            }
        }
    }
    Ok("q ≤ 500".into())
}

fn powering_rule() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_101);
    for i in 0..10_000 {
        let n = rng.random_range(1..=12usize);
        let q = rng.random_range(1..=100u64);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let direct = cycle_lengths(&naive_power(&perm, q));
        let before = Partition::new(cycle_lengths(&perm)).unwrap();
        let via =
            power_cycle_type(&CycleType::from_partition(&before), q).map_err(|e| e.to_string())?;
        if via.to_partition().parts() != direct.as_slice() {
            return Err(format!("pair {i}: π={perm:?} q={q}"));
        }
    }
    Ok("10^4 random pairs".into())
}

fn all_specs(budget: u64, min_k: u64) -> Vec<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    for k in min_k..=budget {
        for m in 1..=budget / k {
            out.push(vec![(k, m as u32)]);
            for rest in all_specs(budget - k * m, k + 1) {
                let mut v = vec![(k, m as u32)];
                v.extend(rest);
                out.push(v);
            }
        }
    }
    out
}

fn power_moments() -> Result<String, String> {
    let engine = MultiplicityEngine::new();
    let specs = all_specs(8, 1);
    let mut inequalities = 0;
    for n in 1..=8usize {
        let mut sums = vec![BigInt::zero(); specs.len()];
        for perm in (0..n).permutations(n) {
            let lengths = cycle_lengths(&perm);
            let count = |k: u64| lengths.iter().filter(|&&l| l == k).count() as u64;
            for (sum, spec) in sums.iter_mut().zip(&specs) {
                *sum += spec
                    .iter()
                    .map(|&(k, m)| BigInt::from(count(k)).pow(m))
                    .product::<BigInt>();
            }
        }
        for (sum, spec) in sums.into_iter().zip(&specs) {
            let oracle = BigRational::new(sum, fact(n as u64));
            let ms = MomentSpec::new(spec.clone()).map_err(|e| e.to_string())?;
            let got = exact(&engine.moments().power_moment(&ms, n as u64));
            if got != oracle {
                return Err(format!("spec {ms} n={n}: {got} ≠ {oracle}"));
            }
            let weight: u64 = spec.iter().map(|&(k, m)| k * m as u64).sum();
            if weight > n as u64 {
                // Poisson limit: Π E[Z_k^m] with Z_k ~ Poisson(1/k)
                let limit: BigRational = spec
                    .iter()
                    .map(|&(k, m)| {
                        (0..=m as u64)
                            .map(|s| {
                                rat(stirling2(m as u64, s)) / rat(BigInt::from(k).pow(s as u32))
                            })
                            .sum::<BigRational>()
                    })
                    .product();
                if got > limit {
                    return Err(format!("spec {ms} n={n}: {got} exceeds limit {limit}"));
                }
                inequalities += 1;
            }
        }
    }
    Ok(format!(
        "{} specs, {inequalities} active cutoffs",
        specs.len()
    ))
}

fn envelope() -> Result<String, String> {
    let engine = MultiplicityEngine::new();
    let grid = log_spaced(2, 100_000, 30);
    let mut primes: Vec<u64> = grid
        .iter()
        .filter(|&&q| q >= 10_000)
        .map(|&q| (q..).find(|&p| is_prime(p)).unwrap())
        .collect();
    primes.dedup();
    let mut worst = 0f64;
    for mu_text in ["1", "2", "1,1", "3", "2,1", "1,1,1"] {
        let mu = partition(mu_text);
        let delta = mu.weight();
        let weight = BigRational::new(hook_dimension(mu.parts()), fact(delta));
        for &q in grid.iter().chain(&primes) {
            let (s0, s1) = (rat(sigma_fast(0, q)), rat(sigma_fast(1, q)));
            let main = &weight * rat(sigma_fast(delta as u32 - 1, q));
            let scale = match delta {
                1 => rat(1),
                2 => &s0 * &s0,
                _ => &s0 * &s1,
            };
            let got = rat(engine
                .closed_form_for_tail(&mu, delta * q, q)
                .map_err(|e| e.to_string())?
                .value);
            let k = (&got - &main).abs() / &scale;
            worst = worst.max(num_traits::ToPrimitive::to_f64(&k).unwrap());
            if k > rat(10) {
                return Err(format!("μ=({mu}) q={q}: K = {k}"));
            }
            if delta >= 2 {
                let ratio = &got / &main;
                let within = |lo: (i64, i64), hi: (i64, i64)| {
                    ratio >= BigRational::new(lo.0.into(), lo.1.into())
                        && ratio <= BigRational::new(hi.0.into(), hi.1.into())
                };
                if q >= 1_000 && !within((1, 2), (2, 1)) {
                    return Err(format!("μ=({mu}) q={q}: ratio {ratio}"));
                }
                if q >= 10_000 && is_prime(q) && !within((9, 10), (11, 10)) {
                    return Err(format!("μ=({mu}) prime q={q}: ratio {ratio}"));
                }
            }
        }
    }
    Ok(format!(
        "30 grid points + {} primes, worst K = {worst:.4}",
        primes.len()
    ))
}

fn optimality_probe() -> Result<String, String> {
    let engine = MultiplicityEngine::new();
    let mut worst = 0f64;
    for q in (31..=97).filter(|&q| is_prime(q)) {
        for delta in 3..=6u32 {
            let mean = exact(
                &engine
                    .moments()
                    .root_count_power_moment(delta, q, delta as u64 * q)
                    .map_err(|e| e.to_string())?,
            );
            let second = rat(BigInt::from(q).pow(delta - 2) * (delta + (1 << (delta - 1)) - 1));
            let residual = (mean - rat(sigma(delta - 1, q)) - second).abs();
            let bound =
                rat(BigInt::from(10) * BigInt::from(3).pow(delta) * BigInt::from(q).pow(delta - 3));
            worst =
                worst.max(num_traits::ToPrimitive::to_f64(&(&residual / &bound)).unwrap() * 10.0);
            if residual > bound {
                return Err(format!("q={q} δ={delta}: residual {residual} > {bound}"));
            }
        }
    }
    Ok(format!("worst residual / 3^δ q^(δ-3) = {worst:.4}"))
}

fn stirling_suite() -> Result<String, String> {
    // Explicit formulas, independent of the recurrences.
    for n in 0..=30u64 {
        // rising factorial x(x+1)...(x+n-1) has coefficients [n k]
        let mut rising = vec![BigInt::one()];
        for i in 0..n {
            let mut next = vec![BigInt::zero(); rising.len() + 1];
            for (k, c) in rising.iter().enumerate() {
                next[k + 1] += c;
                next[k] += c * BigInt::from(i);
            }
            rising = next;
        }
        for k in 0..=n {
            let s2: BigInt = (0..=k)
                .map(|j| {
                    let term =
                        fact(k) / (fact(j) * fact(k - j)) * BigInt::from(k - j).pow(n as u32);
                    if j % 2 == 1 {
                        -term
                    } else {
                        term
                    }
                })
                .sum::<BigInt>()
                / fact(k);
            if BigInt::from(stirling2(n, k)) != s2 {
                return Err(format!("{{{n} {k}}}"));
            }
            if BigInt::from(stirling1(n, k)) != rising[k as usize] {
                return Err(format!("[{n} {k}]"));
            }
        }
    }
    let report = run_suite(
        Suite::Stirling,
        &VerifyConfig::default(),
        &MultiplicityEngine::new(),
    );
    if !report.passed() {
        return Err(format!("{:?}", report.failures));
    }
    Ok(format!(
        "tables match explicit formulas, {} identity checks",
        report.checks
    ))
}

fn monte_carlo() -> Result<String, String> {
    let engine = MultiplicityEngine::new();
    let cases: [(&str, u64, u64); 20] = [
        ("1:1", 6, 1),
        ("1:1", 6, 2),
        ("1:2", 8, 1),
        ("2:2", 10, 1),
        ("1:1", 100, 6),
        ("1:2", 100, 6),
        ("1:3", 50, 4),
        ("2:1", 20, 3),
        ("1:1,2:1", 12, 1),
        ("1:1,2:1", 30, 2),
        ("3:2", 15, 1),
        ("4:1", 7, 1),
        ("1:2", 3, 2),
        ("2:1", 5, 5),
        ("1:4", 40, 1),
        ("1:1", 1_000, 60),
        ("1:1", 10_000, 12),
        ("1:2", 10_000, 30),
        ("2:1", 10_000, 6),
        ("1:1,3:1", 10_000, 1),
    ];
    let mut reruns = 0;
    for (spec, n, q) in cases {
        let ms: MomentSpec = spec
            .parse()
            .map_err(|e: rootmult_core::Error| e.to_string())?;
        let symbolic = engine
            .moments()
            .root_cycle_power_moment(&ms, q, n)
            .map_err(|e| e.to_string())?
            .to_f64();
        let within = |seed: u64| -> Result<bool, String> {
            let r = empirical_moment(&ms, n, q, 100_000, seed).map_err(|e| e.to_string())?;
            let again = empirical_moment(&ms, n, q, 100_000, seed).map_err(|e| e.to_string())?;
            if r.mean != again.mean || r.standard_error.to_bits() != again.standard_error.to_bits()
            {
                return Err(format!("{spec} n={n} q={q}: not deterministic"));
            }
            Ok((r.estimate - symbolic).abs() <= 5.0 * r.standard_error)
        };
        if !within(1)? {
            reruns += 1;
            if !within(2)? {
                return Err(format!("{spec} n={n} q={q}: two misses against {symbolic}"));
            }
        }
    }
    Ok(format!("20 cases at 10^5 trials, {reruns} reruns"))
}

type Criterion = (u32, &'static str, fn() -> Result<String, String>, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            1,
            "q = 2 universality",
            q2_universality,
            Duration::from_secs(30),
        ),
        (
            2,
            "published constants",
            paper_constants,
            Duration::from_secs(60),
        ),
        (
            3,
            "brute / closed-form agreement",
            path_agreement,
            Duration::from_secs(600),
        ),
        (
            4,
            "root-count moment closed forms",
            root_count_closed_forms,
            Duration::from_secs(600),
        ),
        (5, "powering rule", powering_rule, Duration::from_secs(600)),
        (
            6,
            "cycle-count power moments",
            power_moments,
            Duration::from_secs(600),
        ),
        (7, "main-term envelope", envelope, Duration::from_secs(300)),
        (
            8,
            "prime second-order probe",
            optimality_probe,
            Duration::from_secs(60),
        ),
        (
            9,
            "Stirling identities",
            stirling_suite,
            Duration::from_secs(600),
        ),
        (
            10,
            "Monte Carlo consistency",
            monte_carlo,
            Duration::from_secs(600),
        ),
    ];
    let mut failed = 0;
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; exceeded {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!(
                "criterion {id:>2} PASS  {name}: {detail} ({:.2}s)",
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {id:>2} FAIL  {name}: {why} ({:.2}s)",
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
