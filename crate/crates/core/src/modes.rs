//! Bipartitions of an n-mode system.
//!
//! Modes are 1-indexed everywhere in this module's public surface. A
//! bipartition `α|β` is stored in canonical form: the side containing mode 1
//! is part A, so `1|234` and `234|1` are the same value.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Largest mode count accepted by the enumerator (2^(n-1) - 1 bipartitions).
pub const MAX_MODES: usize = 24;

/// Which side of a bipartition is partially transposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    n: usize,
    alpha: Vec<usize>,
}

impl Bipartition {
    /// Validates `alpha` as one side of an `n`-mode split and canonicalizes
    /// it (mode 1 always in part A). Order of `alpha` does not matter.
    pub fn new(n: usize, alpha: &[usize]) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("bipartition needs n >= 2, got {n}")));
        }
        let mut sorted = alpha.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != alpha.len() {
            return Err(Error::invalid("duplicate mode in bipartition"));
        }
        if let Some(&m) = sorted.iter().find(|&&m| m == 0 || m > n) {
            return Err(Error::invalid(format!("mode {m} outside 1..={n}")));
        }
        if sorted.is_empty() || sorted.len() == n {
            return Err(Error::invalid("both parts of a bipartition must be non-empty"));
        }
        let alpha = if sorted[0] == 1 {
            sorted
        } else {
            (1..=n).filter(|m| sorted.binary_search(m).is_err()).collect()
        };
        Ok(Self { n, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Part A (contains mode 1), ascending.
    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    /// Part B, ascending.
    pub fn beta(&self) -> Vec<usize> {
        (1..=self.n).filter(|m| !self.contains(*m)).collect()
    }

    pub fn n_a(&self) -> usize {
        self.alpha.len()
    }

    pub fn contains(&self, mode: usize) -> bool {
        self.alpha.binary_search(&mode).is_ok()
    }

    /// Modes transposed when `side` is selected.
    pub fn transposed(&self, side: Side) -> Vec<usize> {
        match side {
            Side::A => self.alpha.clone(),
            Side::B => self.beta(),
        }
    }

    /// Is `mode` (1-indexed) flipped when transposing `side`?
    pub fn is_transposed(&self, mode: usize, side: Side) -> bool {
        self.contains(mode) == (side == Side::A)
    }
}

fn write_modes(f: &mut fmt::Formatter<'_>, modes: &[usize], sep: &str) -> fmt::Result {
    let parts: Vec<String> = modes.iter().map(usize::to_string).collect();
    f.write_str(&parts.join(sep))
}

/// Formats as `"13|24"`; systems with ten or more modes use commas
/// (`"1,10|2,3,..."`) so labels stay unambiguous.
impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n >= 10 { "," } else { "" };
        write_modes(f, &self.alpha, sep)?;
        f.write_str("|")?;
        write_modes(f, &self.beta(), sep)
    }
}

impl FromStr for Bipartition {
    type Err = Error;

    /// Parses `"13|24"` or `"1,3|2,4"`. The mode count is the total number of
    /// modes named on both sides, which must be exactly `1..=n`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('|')
            .ok_or_else(|| Error::invalid(format!("bipartition '{s}' lacks '|'")))?;
        let comma_separated = s.contains(',');
        let parse_side = |side: &str| -> Result<Vec<usize>> {
            let side = side.trim();
            if comma_separated {
                side.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::invalid(format!("bad mode '{t}' in '{s}'")))
                    })
                    .collect()
            } else {
                side.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::invalid(format!("bad mode '{c}' in '{s}'")))
                    })
                    .collect()
            }
        };
        let alpha = parse_side(a)?;
        let beta = parse_side(b)?;
        let n = alpha.len() + beta.len();
        let mut all: Vec<usize> = alpha.iter().chain(&beta).copied().collect();
        all.sort_unstable();
        if all != (1..=n).collect::<Vec<_>>() {
            return Err(Error::invalid(format!("'{s}' does not split modes 1..={n}")));
        }
        Self::new(n, &alpha)
    }
}

impl Bipartition {
    /// Parses a label against a known mode count.
    pub fn parse_for(n: usize, s: &str) -> Result<Self> {
        let bp: Self = s.parse()?;
        if bp.n != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bp.n,
            });
        }
        Ok(bp)
    }
}

fn check_mode_count(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!("need at least 2 modes, got {n}")));
    }
    if n > MAX_MODES {
        return Err(Error::invalid(format!(
            "at most {MAX_MODES} modes supported, got {n}"
        )));
    }
    Ok(())
}

/// All `2^(n-1) - 1` canonical bipartitions, sorted lexicographically by α.
pub fn enumerate_bipartitions(n: usize) -> Result<Vec<Bipartition>> {
    check_mode_count(n)?;
    // Bit k of `rest` selects mode k + 2 into part A alongside mode 1.
    let full = (1u64 << (n - 1)) - 1;
    let mut out: Vec<Bipartition> = (0..full)
        .map(|rest| {
            let mut alpha = vec![1];
            alpha.extend((0..n - 1).filter(|k| rest >> k & 1 == 1).map(|k| k + 2));
            Bipartition { n, alpha }
        })
        .collect();
    out.sort_by(|x, y| x.alpha.cmp(&y.alpha));
    Ok(out)
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of bipartitions in each class `(n_A, n - n_A)`, keyed by the
/// smaller side `n_A = 1..=⌊n/2⌋`.
pub fn class_counts(n: usize) -> Result<BTreeMap<usize, u64>> {
    check_mode_count(n)?;
    Ok((1..=n / 2)
        .map(|n_a| {
            let c = binomial(n as u64, n_a as u64);
            let count = if 2 * n_a == n { c / 2 } else { c };
            (n_a, count)
        })
        .collect())
}

/// Class key of a bipartition: the size of its smaller side.
pub fn class_of(bp: &Bipartition) -> usize {
    bp.n_a().min(bp.n - bp.n_a())
}

/// Diagonal ±1 matrix with −1 on the transposed modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    pub diag: Vec<i8>,
}

impl SignMatrix {
    pub fn to_matrix(&self) -> Matrix<i64> {
        Matrix::from_diagonal(&self.diag.iter().map(|&d| d as i64).collect::<Vec<_>>())
    }

    pub fn negated(&self) -> Self {
        Self {
            diag: self.diag.iter().map(|d| -d).collect(),
        }
    }
}

pub fn lambda_matrix(bp: &Bipartition, side: Side) -> SignMatrix {
    SignMatrix {
        diag: (1..=bp.n)
            .map(|m| if bp.is_transposed(m, side) { -1 } else { 1 })
            .collect(),
    }
}

/// Identity with rows `i` and `j` (1-indexed) swapped.
fn row_swap(n: usize, i: usize, j: usize) -> Matrix<i64> {
    let mut m = Matrix::identity(n);
    m.swap_rows(i - 1, j - 1);
    m
}

/// `P = P_{1,α_1} · P_{2,α_2} ⋯ P_{k,α_k}`: left-multiplying by `P` moves
/// seed row `i` to row `α_i`.
pub fn permutation_matrix(seed_size: usize, alpha: &[usize], n: usize) -> Result<Matrix<i64>> {
    if alpha.len() != seed_size {
        return Err(Error::invalid(format!(
            "seed size {seed_size} does not match |alpha| = {}",
            alpha.len()
        )));
    }
    if seed_size == 0 || seed_size >= n {
        return Err(Error::invalid(format!(
            "seed size must be in 1..{n}, got {seed_size}"
        )));
    }
    if alpha.windows(2).any(|w| w[0] >= w[1]) || alpha.iter().any(|&a| a == 0 || a > n) {
        return Err(Error::invalid(
            "alpha must be strictly increasing modes in 1..=n",
        ));
    }
    alpha
        .iter()
        .enumerate()
        .try_fold(Matrix::identity(n), |acc, (i, &a)| acc.matmul(&row_swap(n, i + 1, a)))
}
