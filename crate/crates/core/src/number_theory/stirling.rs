//! Stirling numbers of both kinds from cached dynamic-programming triangles.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub const DEFAULT_ROWS: usize = 64;

/// Triangles of unsigned Stirling numbers `[n k]` (first kind) and `{n k}`
/// (second kind) for `0 ≤ k ≤ n < rows`. Rows past the cached range are
/// recomputed on demand and not stored.
#[derive(Clone, Debug)]
pub struct StirlingTable {
    first: Vec<Vec<BigUint>>,
    second: Vec<Vec<BigUint>>,
}

fn next_first(prev: &[BigUint], n: usize) -> Vec<BigUint> {
    // [n k] = (n-1)[n-1 k] + [n-1 k-1]
    (0..=n)
        .map(|k| {
            let keep = prev.get(k).map(|v| v * (n as u64 - 1)).unwrap_or_default();
            let join = if k > 0 {
                prev[k - 1].clone()
            } else {
                BigUint::zero()
            };
            keep + join
        })
        .collect()
}

fn next_second(prev: &[BigUint], n: usize) -> Vec<BigUint> {
    // {n k} = k{n-1 k} + {n-1 k-1}
    (0..=n)
        .map(|k| {
            let keep = prev.get(k).map(|v| v * k as u64).unwrap_or_default();
            let join = if k > 0 {
                prev[k - 1].clone()
            } else {
                BigUint::zero()
            };
            keep + join
        })
        .collect()
}

impl StirlingTable {
    pub fn with_rows(rows: usize) -> Self {
        let rows = rows.max(1);
        let mut first = vec![vec![BigUint::one()]];
        let mut second = vec![vec![BigUint::one()]];
        for n in 1..rows {
            first.push(next_first(&first[n - 1], n));
            second.push(next_second(&second[n - 1], n));
        }
        StirlingTable { first, second }
    }

    pub fn rows(&self) -> usize {
        self.first.len()
    }

    /// Process-wide table with [`DEFAULT_ROWS`] rows unless one was installed
    /// first with [`StirlingTable::install_global`].
    pub fn global() -> &'static StirlingTable {
        GLOBAL.get_or_init(|| StirlingTable::with_rows(DEFAULT_ROWS))
    }

    /// Installs `table` as the global table. Fails if the global table has
    /// already been initialized.
    pub fn install_global(table: StirlingTable) -> Result<(), StirlingTable> {
        GLOBAL.set(table)
    }

    fn row(&self, n: usize, first_kind: bool) -> std::borrow::Cow<'_, [BigUint]> {
        let table = if first_kind {
            &self.first
        } else {
            &self.second
        };
        if let Some(row) = table.get(n) {
            return std::borrow::Cow::Borrowed(row);
        }
        let mut row = table
            .last()
            .cloned()
            .unwrap_or_else(|| vec![BigUint::one()]);
        for m in table.len()..=n {
            row = if first_kind {
                next_first(&row, m)
            } else {
                next_second(&row, m)
            };
        }
        std::borrow::Cow::Owned(row)
    }

    pub fn first_kind(&self, n: usize, k: usize) -> BigUint {
        if k > n {
            return BigUint::zero();
        }
        self.row(n, true)[k].clone()
    }

    pub fn second_kind(&self, n: usize, k: usize) -> BigUint {
        if k > n {
            return BigUint::zero();
        }
        self.row(n, false)[k].clone()
    }

    /// Textual dump: one `kind,n,k<TAB>value` line per entry, kind `1` or `2`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (kind, table) in [(1, &self.first), (2, &self.second)] {
            for (n, row) in table.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    out.push_str(&format!("{kind},{n},{k}\t{v}\n"));
                }
            }
        }
        out
    }

    /// Parses [`StirlingTable::to_tsv`] output. Every row is re-derived from
    /// its predecessor and rejected on mismatch, so a corrupted file can never
    /// feed wrong values into a computation.
    pub fn from_tsv(text: &str) -> Result<Self, String> {
        let mut first: Vec<Vec<BigUint>> = Vec::new();
        let mut second: Vec<Vec<BigUint>> = Vec::new();
        for (lineno, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let bad = || format!("line {}: malformed entry {line:?}", lineno + 1);
            let (key, value) = line.split_once('\t').ok_or_else(bad)?;
            let fields: Vec<usize> = key
                .split(',')
                .map(|f| f.parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            let [kind, n, k] = fields[..] else {
                return Err(bad());
            };
            let value: BigUint = value.trim().parse().map_err(|_| bad())?;
            let table = match kind {
                1 => &mut first,
                2 => &mut second,
                _ => return Err(bad()),
            };
            if table.len() == n && k == 0 {
                table.push(Vec::new());
            }
            let last = table.len().checked_sub(1);
            match table.get_mut(n) {
                Some(row) if row.len() == k && last == Some(n) => row.push(value),
                _ => return Err(format!("line {}: entries out of order", lineno + 1)),
            }
        }
        if first.is_empty() || first.len() != second.len() {
            return Err("first and second kind tables differ in length".into());
        }
        let expected = StirlingTable::with_rows(first.len());
        if expected.first != first || expected.second != second {
            return Err("table entries fail the defining recurrences".into());
        }
        Ok(expected)
    }
}

static GLOBAL: OnceLock<StirlingTable> = OnceLock::new();
