//! Weight-graded expansion of products of powers and binomials of linear
//! forms in cycle counts.
//!
//! A linear form `L = Σ_k a_k c_k` raised to `δ` expands multinomially; each
//! `c_k^j` becomes `Σ_s {j s} (c_k)_s`, and `E[∏ (c_k)_{s_k}]` is
//! `∏ k^{-s_k}` when the weight `Σ k s_k` is at most `n`. Rather than listing
//! monomials one at a time, the expansion is carried as a polynomial in an
//! auxiliary degree variable `u` whose coefficients are polynomials in a
//! weight variable `t`, truncated at `t^n`. When every reachable weight is at
//! most `n` the weight grading is dropped entirely.
//!
//! Forms passed together must use disjoint sets of cycle lengths.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::number_theory::{stirling1, stirling2, ExactScalar};
use crate::partition::factorial;

#[derive(Clone, Debug)]
pub(crate) struct LinearForm {
    /// `(k, a_k)` pairs with distinct `k`.
    terms: Vec<(u64, u64)>,
}

impl LinearForm {
    pub(crate) fn new(terms: Vec<(u64, u64)>) -> Self {
        LinearForm { terms }
    }

    /// Largest weight any monomial of degree `degree` can carry.
    pub(crate) fn max_weight(&self, degree: u32) -> u64 {
        self.terms.iter().map(|&(k, _)| k).max().unwrap_or(0) * degree as u64
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Shape {
    Power(u32),
    Binomial(u32),
}

impl Shape {
    pub(crate) fn degree(self) -> u32 {
        match self {
            Shape::Power(m) | Shape::Binomial(m) => m,
        }
    }
}

/// Polynomial in the weight variable; with `cap = None` all weights are
/// folded onto zero.
#[derive(Clone, Debug)]
struct Graded {
    coeffs: BTreeMap<u64, ExactScalar>,
}

impl Graded {
    fn zero() -> Self {
        Graded {
            coeffs: BTreeMap::new(),
        }
    }

    fn constant(c: ExactScalar) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        Graded { coeffs }
    }

    fn add_term(&mut self, weight: u64, c: ExactScalar, cap: Option<u64>) {
        let w = match cap {
            None => 0,
            Some(n) if weight <= n => weight,
            Some(_) => return,
        };
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(w).or_insert_with(ExactScalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&w);
        }
    }

    fn mul(&self, other: &Graded, cap: Option<u64>) -> Graded {
        let mut out = Graded::zero();
        for (&wa, a) in &self.coeffs {
            for (&wb, b) in &other.coeffs {
                out.add_term(wa + wb, a * b, cap);
            }
        }
        out
    }

    fn add_scaled(&mut self, other: &Graded, scale: &ExactScalar, cap: Option<u64>) {
        for (&w, c) in &other.coeffs {
            self.add_term(w, c * scale, cap);
        }
    }

    fn total(&self) -> ExactScalar {
        self.coeffs.values().sum()
    }
}

/// `[u^j] Σ_i (a_i c_{k_i} u)^…` for one form: entry `j` is the weight-graded
/// expectation-ready expansion of `L^j / j!`.
fn form_series(form: &LinearForm, degree: u32, cap: Option<u64>) -> Vec<Graded> {
    let deg = degree as usize;
    let mut acc = vec![Graded::zero(); deg + 1];
    acc[0] = Graded::constant(ExactScalar::one());
    for &(k, a) in &form.terms {
        // (a^j / j!) Σ_s {j s} k^{-s} t^{k s}
        let mut var = Vec::with_capacity(deg + 1);
        for j in 0..=degree as u64 {
            let scale =
                ExactScalar::ratio(BigInt::from(a).pow(j as u32), BigInt::from(factorial(j)));
            let mut g = Graded::zero();
            for s in 0..=j {
                let s2 = stirling2(j, s);
                if s2 == num_bigint::BigUint::default() {
                    continue;
                }
                let c =
                    &scale * &ExactScalar::ratio(BigInt::from(s2), BigInt::from(k).pow(s as u32));
                g.add_term(k * s, c, cap);
            }
            var.push(g);
        }
        let mut next = vec![Graded::zero(); deg + 1];
        for (i, lhs) in acc.iter().enumerate() {
            if lhs.coeffs.is_empty() {
                continue;
            }
            for (j, rhs) in var.iter().enumerate().take(deg + 1 - i) {
                let prod = lhs.mul(rhs, cap);
                next[i + j].add_scaled(&prod, &ExactScalar::one(), cap);
            }
        }
        acc = next;
    }
    acc
}

fn factor_poly(form: &LinearForm, shape: Shape, cap: Option<u64>) -> Graded {
    let series = form_series(form, shape.degree(), cap);
    match shape {
        Shape::Power(m) => {
            let mut out = Graded::zero();
            out.add_scaled(
                &series[m as usize],
                &ExactScalar::from(BigInt::from(factorial(m as u64))),
                cap,
            );
            out
        }
        Shape::Binomial(s) => {
            // binom(L, s) = (1/s!) Σ_δ (-1)^{s-δ} [s δ] L^δ and L^δ = δ! [u^δ].
            let s_fact = BigInt::from(factorial(s as u64));
            let mut out = Graded::zero();
            for delta in 0..=s as u64 {
                let s1 = BigInt::from(stirling1(s as u64, delta));
                if s1 == BigInt::default() {
                    continue;
                }
                let signed = if (s as u64 - delta) % 2 == 1 { -s1 } else { s1 };
                let scale =
                    ExactScalar::ratio(signed * BigInt::from(factorial(delta)), s_fact.clone());
                out.add_scaled(&series[delta as usize], &scale, cap);
            }
            out
        }
    }
}

/// `E[∏_i f_i(L_i)]` over uniform `S_n` for forms with disjoint variables.
pub(crate) fn expected_product(factors: &[(LinearForm, Shape)], n: u64) -> ExactScalar {
    let reachable: u64 = factors.iter().map(|(f, s)| f.max_weight(s.degree())).sum();
    let cap = (reachable > n).then_some(n);
    let mut acc = Graded::constant(ExactScalar::one());
    for (form, shape) in factors {
        acc = acc.mul(&factor_poly(form, *shape, cap), cap);
        if acc.coeffs.is_empty() {
            break;
        }
    }
    acc.total()
}
