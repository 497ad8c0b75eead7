//! Bloch sequences (staircase diagrams), their crossing numbers and z-strings.
//!
//! A Bloch sequence of order `n` is a list `(k_1, ..., k_n)` of nonnegative
//! integers summing to `n`. Drawn as a staircase, step `i` has width one and
//! height `k_i`; the main diagonal runs from the origin with slope one and
//! the upper diagonal is the same line shifted up by one unit.

use std::fmt;
use std::str::FromStr;

use num::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct BlochSequence {
    parts: Vec<u32>,
}

impl BlochSequence {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidSequence(
                "a Bloch sequence needs at least one part".into(),
            ));
        }
        let sum: u64 = parts.iter().map(|&k| u64::from(k)).sum();
        if sum != parts.len() as u64 {
            return Err(Error::InvalidSequence(format!(
                "parts sum to {sum} but the order is {}",
                parts.len()
            )));
        }
        Ok(BlochSequence { parts })
    }

    /// The order-zero sequence, argument of the first-order energy coefficient.
    pub fn empty() -> Self {
        BlochSequence { parts: Vec::new() }
    }

    /// Wraps a slice already known to satisfy the sum rule.
    pub(crate) fn from_parts_unchecked(parts: Vec<u32>) -> Self {
        debug_assert_eq!(
            parts.iter().map(|&k| k as usize).sum::<usize>(),
            parts.len()
        );
        BlochSequence { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn order(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Partial sums `K_1, ..., K_n`.
    pub fn partial_sums(&self) -> impl Iterator<Item = usize> + '_ {
        self.parts.iter().scan(0usize, |acc, &k| {
            *acc += k as usize;
            Some(*acc)
        })
    }
}

impl TryFrom<Vec<u32>> for BlochSequence {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            Ok(BlochSequence::empty())
        } else {
            BlochSequence::new(parts)
        }
    }
}

impl From<BlochSequence> for Vec<u32> {
    fn from(s: BlochSequence) -> Self {
        s.parts
    }
}

impl fmt::Display for BlochSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.parts))
    }
}

/// Parses the comma-separated command line form, e.g. `2,0,0,2`.
impl FromStr for BlochSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = s
            .split(',')
            .map(|p| {
                p.trim().parse::<u32>().map_err(|_| {
                    Error::InvalidSequence(format!("not a nonnegative integer: {p:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BlochSequence::new(parts)
    }
}

pub(crate) fn join(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// All Bloch sequences of order `n` in lexicographic order of their parts.
pub fn enumerate_sequences(n: usize, cap: usize) -> Result<Vec<BlochSequence>> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    check_cap(n, cap)?;
    Ok(compositions(n))
}

/// Like [`enumerate_sequences`] but maps order zero to the single empty sequence.
pub(crate) fn enumerate_with_empty(n: usize, cap: usize) -> Result<Vec<BlochSequence>> {
    if n == 0 {
        Ok(vec![BlochSequence::empty()])
    } else {
        enumerate_sequences(n, cap)
    }
}

fn compositions(n: usize) -> Vec<BlochSequence> {
    fn rec(slot: usize, remaining: usize, buf: &mut Vec<u32>, out: &mut Vec<BlochSequence>) {
        let n = buf.capacity();
        if slot + 1 == n {
            buf.push(remaining as u32);
            out.push(BlochSequence::from_parts_unchecked(buf.clone()));
            buf.pop();
            return;
        }
        for k in 0..=remaining {
            buf.push(k as u32);
            rec(slot + 1, remaining - k, buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(n);
    rec(0, n, &mut buf, &mut out);
    out
}

/// `K_p >= p` for every `p < n`: the staircase never dips below the main diagonal.
pub fn is_convex(s: &BlochSequence) -> bool {
    let n = s.order();
    s.partial_sums()
        .enumerate()
        .take(n.saturating_sub(1))
        .all(|(i, k)| k > i)
}

/// Number of Bloch sequences of order `n`, `C(2n-1, n)`.
pub fn count_sequences(n: usize) -> BigUint {
    binomial(2 * n - 1, n)
}

/// Number of convex sequences of order `n`, the Catalan number `(2n)!/(n!(n+1)!)`.
pub fn count_convex(n: usize) -> BigUint {
    binomial(2 * n, n) / BigUint::from(n + 1)
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Alternating crossing counts `N_1, n_1, ..., N_m, n_m`.
///
/// `N_i` counts strict up-crossings of the upper diagonal, `n_i` strict
/// down-crossings of the main diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct CrossingNumbers {
    pairs: Vec<(u32, u32)>,
}

impl CrossingNumbers {
    /// Builds from `(N_i, n_i)` pairs. Every entry except `N_1` and `n_m` must be positive.
    pub fn new(pairs: Vec<(u32, u32)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidCrossingNumbers(
                "at least one pair is required".into(),
            ));
        }
        let m = pairs.len();
        for (i, &(up, down)) in pairs.iter().enumerate() {
            if i > 0 && up == 0 {
                return Err(Error::InvalidCrossingNumbers(format!(
                    "N_{} is zero but only N_1 may vanish",
                    i + 1
                )));
            }
            if i + 1 < m && down == 0 {
                return Err(Error::InvalidCrossingNumbers(format!(
                    "n_{} is zero but only n_m may vanish",
                    i + 1
                )));
            }
        }
        Ok(CrossingNumbers { pairs })
    }

    pub fn from_flat(flat: &[u32]) -> Result<Self> {
        if !flat.len().is_multiple_of(2) {
            return Err(Error::InvalidCrossingNumbers(format!(
                "expected an even number of entries, got {}",
                flat.len()
            )));
        }
        CrossingNumbers::new(flat.chunks(2).map(|c| (c[0], c[1])).collect())
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn m(&self) -> usize {
        self.pairs.len()
    }

    pub fn flat(&self) -> Vec<u32> {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    pub fn ups(&self) -> impl Iterator<Item = u32> + '_ {
        self.pairs.iter().map(|p| p.0)
    }

    pub fn downs(&self) -> impl Iterator<Item = u32> + '_ {
        self.pairs.iter().map(|p| p.1)
    }

    /// `sum n_i`, the number of times the diagram passes below the main diagonal.
    pub fn total_down(&self) -> usize {
        self.downs().map(|n| n as usize).sum()
    }

    pub fn total_up(&self) -> usize {
        self.ups().map(|n| n as usize).sum()
    }
}

impl TryFrom<Vec<u32>> for CrossingNumbers {
    type Error = Error;
    fn try_from(flat: Vec<u32>) -> Result<Self> {
        CrossingNumbers::from_flat(&flat)
    }
}

impl From<CrossingNumbers> for Vec<u32> {
    fn from(c: CrossingNumbers) -> Self {
        c.flat()
    }
}

impl fmt::Display for CrossingNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.flat()))
    }
}

impl FromStr for CrossingNumbers {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let flat = s
            .split(',')
            .map(|p| {
                p.trim().parse::<u32>().map_err(|_| {
                    Error::InvalidCrossingNumbers(format!("not a nonnegative integer: {p:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CrossingNumbers::from_flat(&flat)
    }
}

/// Crossing numbers by a single left-to-right scan of the partial sums.
///
/// A path that only touches a diagonal triggers neither branch. The empty
/// sequence and diagonal-hugging paths yield the single pair `(0, 0)`.
pub fn crossing_numbers(s: &BlochSequence) -> CrossingNumbers {
    let mut pairs: Vec<(u32, u32)> = vec![(0, 0)];
    let mut above = true;
    let mut prev = 0usize;
    for (idx, k) in s.partial_sums().enumerate() {
        let i = idx + 1;
        if k > i && prev < i {
            if !above {
                pairs.push((0, 0));
                above = true;
            }
            pairs.last_mut().unwrap().0 += 1;
        } else if k < i && prev + 1 >= i {
            pairs.last_mut().unwrap().1 += 1;
            above = false;
        }
        prev = k;
    }
    CrossingNumbers { pairs }
}

/// Lowest-order diagram with the given crossing numbers:
/// `((2,0)^N_1, (0,2)^(n_1-1), 0,3,0, (2,0)^(N_2-1), ..., (2,0)^(N_m-1), (0,2)^n_m)`,
/// or `(1)` when the crossing numbers are `(0, 0)`.
pub fn canonical_diagram(cn: &CrossingNumbers) -> BlochSequence {
    let pairs = cn.pairs();
    let m = pairs.len();
    if m == 1 && pairs[0] == (0, 0) {
        return BlochSequence::from_parts_unchecked(vec![1]);
    }
    let mut parts = Vec::new();
    for (i, &(up, down)) in pairs.iter().enumerate() {
        let ups = if i == 0 { up } else { up - 1 };
        for _ in 0..ups {
            parts.extend_from_slice(&[2, 0]);
        }
        if i + 1 < m {
            for _ in 0..down - 1 {
                parts.extend_from_slice(&[0, 2]);
            }
            parts.extend_from_slice(&[0, 3, 0]);
        } else {
            for _ in 0..down {
                parts.extend_from_slice(&[0, 2]);
            }
        }
    }
    BlochSequence::from_parts_unchecked(parts)
}

/// Total `T`, length `L` and difference `D = T - L` of a z-string.
pub fn string_total(z: &[u32]) -> usize {
    z.iter().map(|&k| k as usize).sum()
}

pub fn string_difference(z: &[u32]) -> usize {
    string_total(z) - z.len()
}

/// The maximal zero-free runs `z_1, ..., z_q` of a sequence; `q - 1` is the number of zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZDecomposition {
    pub strings: Vec<Vec<u32>>,
}

impl ZDecomposition {
    pub fn q(&self) -> usize {
        self.strings.len()
    }

    /// Rebuilds `(z_1, 0, z_2, 0, ..., 0, z_q)`.
    pub fn reassemble(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (i, z) in self.strings.iter().enumerate() {
            if i > 0 {
                out.push(0);
            }
            out.extend_from_slice(z);
        }
        out
    }
}

pub fn z_decompose(s: &BlochSequence) -> ZDecomposition {
    ZDecomposition {
        strings: s.parts().split(|&k| k == 0).map(<[u32]>::to_vec).collect(),
    }
}
