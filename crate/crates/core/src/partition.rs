//! Integer partitions, conjugacy-class bookkeeping for `S_n`, and rim-hook
//! geometry.
//!
//! Partitions are stored as weakly decreasing vectors of positive parts. The
//! empty partition is a regular value of weight zero. Partitions double as
//! cycle types (conjugacy classes) and as labels of irreducible characters.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// Builds a partition, rejecting zero parts and increasing sequences.
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} has a zero part"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary positive parts into a partition.
    pub fn from_unsorted(mut parts: Vec<u64>) -> Result<Self> {
        parts.sort_unstable_by_key(|&p| Reverse(p));
        Partition::new(parts)
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(n)`; empty for `n = 0`.
    pub fn row(n: u64) -> Self {
        if n == 0 {
            Partition::empty()
        } else {
            Partition { parts: vec![n] }
        }
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: u64) -> Self {
        Partition {
            parts: vec![1; n as usize],
        }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Largest part, zero for the empty partition.
    pub fn first(&self) -> u64 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// `λ \ λ_1`: drops the first row.
    pub fn remove_tail(&self) -> Result<Partition> {
        if self.parts.is_empty() {
            return Err(Error::EmptyPartition);
        }
        Ok(Partition {
            parts: self.parts[1..].to_vec(),
        })
    }

    /// `(head, self)` as a partition, if `head` is at least the first part.
    pub fn with_head(&self, head: u64) -> Result<Partition> {
        let mut parts = Vec::with_capacity(self.parts.len() + 1);
        parts.push(head);
        parts.extend_from_slice(&self.parts);
        Partition::new(parts)
    }

    /// Containment order: `other ⊆ self` iff `other_j ≤ self_j` for all `j`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(o, s)| o <= s)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.first();
        let parts = (1..=cols)
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count() as u64)
            .collect();
        Partition { parts }
    }

    /// Multiplicities `c_i` of each part size, indexed from 1; `counts()[i-1] = c_i`.
    pub fn multiplicities(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.first() as usize];
        for &p in &self.parts {
            counts[p as usize - 1] += 1;
        }
        counts
    }

    /// Product of hook lengths of the Young diagram.
    pub fn hook_product(&self) -> BigUint {
        let conj = self.conjugate();
        let mut prod = BigUint::one();
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row as usize {
                let arm = row - j as u64 - 1;
                let leg = conj.parts[j] - i as u64 - 1;
                prod *= arm + leg + 1;
            }
        }
        prod
    }

    /// Parts with a leading segment removed; used for cycle-type suffixes.
    pub(crate) fn suffix(&self, from: usize) -> Partition {
        Partition {
            parts: self.parts[from.min(self.parts.len())..].to_vec(),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidPartition(format!("cannot parse {tok:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Iterator over the partitions of `n` in decreasing lexicographic order,
/// starting at `(n)` and ending at `(1^n)`.
pub struct Partitions {
    next: Option<Vec<u64>>,
}

pub fn partitions_of(n: u64) -> Partitions {
    Partitions {
        next: Some(if n == 0 { Vec::new() } else { vec![n] }),
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        // Rightmost part greater than one gets decremented; everything after it
        // is refilled greedily with parts no larger than the new value.
        if let Some(pos) = current.iter().rposition(|&p| p > 1) {
            let mut succ = current[..pos].to_vec();
            let head = current[pos] - 1;
            let mut rest: u64 = current[pos..].iter().sum::<u64>() - head;
            succ.push(head);
            while rest > 0 {
                let part = rest.min(head);
                succ.push(part);
                rest -= part;
            }
            self.next = Some(succ);
        }
        Some(Partition { parts: current })
    }
}

/// Conjugacy-class data for a cycle type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassData {
    pub cycle_type: Partition,
    /// `z = ∏ i^{c_i} c_i!`
    pub centralizer_order: BigUint,
    /// `n! / z`
    pub class_size: BigUint,
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn class_data(cycle_type: &Partition) -> ClassData {
    let mut z = BigUint::one();
    for (i, &c) in cycle_type.multiplicities().iter().enumerate() {
        if c > 0 {
            z *= BigUint::from(i as u64 + 1).pow(c as u32) * factorial(c);
        }
    }
    let class_size = factorial(cycle_type.weight()) / &z;
    ClassData {
        cycle_type: cycle_type.clone(),
        centralizer_order: z,
        class_size,
    }
}

/// First-column bead positions `β_i = μ_i + (ℓ - 1 - i)`, strictly decreasing.
fn beta_set(mu: &Partition) -> Vec<u64> {
    let l = mu.len() as u64;
    mu.parts
        .iter()
        .enumerate()
        .map(|(i, &p)| p + l - 1 - i as u64)
        .collect()
}

fn from_beta_set(mut beta: Vec<u64>) -> Partition {
    beta.sort_unstable_by_key(|&b| Reverse(b));
    let l = beta.len() as u64;
    let parts = beta
        .iter()
        .enumerate()
        .map(|(i, &b)| b - (l - 1 - i as u64))
        .filter(|&p| p > 0)
        .collect();
    Partition { parts }
}

/// Every partition obtained from `mu` by deleting one rim hook of `length`
/// cells, paired with the hook's height (rows spanned minus one).
///
/// On the abacus a rim hook of length `t` is a bead sliding from `β` to the
/// vacant position `β - t`; the height is the number of beads jumped over.
pub fn rim_hooks(mu: &Partition, length: u64) -> Vec<(Partition, u32)> {
    if length == 0 {
        return Vec::new();
    }
    let beta = beta_set(mu);
    let mut out = Vec::new();
    for (idx, &b) in beta.iter().enumerate() {
        if b < length {
            continue;
        }
        let target = b - length;
        if beta.contains(&target) {
            continue;
        }
        let height = beta.iter().filter(|&&x| x > target && x < b).count() as u32;
        let mut moved = beta.clone();
        moved[idx] = target;
        out.push((from_beta_set(moved), height));
    }
    out
}

pub fn partition_count(n: u64) -> u64 {
    partitions_of(n).count() as u64
}
