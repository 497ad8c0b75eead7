//! Operator-equivalence classes of diagrams.
//!
//! Diagrams whose z-strings differ only by a permutation contribute the same
//! matrix element to the energy series. In the eigenvector series the first
//! string is pinned and only `z_2, ..., z_q` may be permuted. Each class is
//! represented by the member whose permutable strings are sorted descending.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coeff::{CoefficientEngine, Method};
use crate::diagram::{
    count_convex, count_sequences, enumerate_with_empty, is_convex, string_difference, z_decompose,
    BlochSequence, ZDecomposition,
};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Eigenvector series: `z_1` fixed.
    Vector,
    /// Energy series: all strings permutable.
    Energy,
}

/// Total order on z-strings: by `D`, then by length, then entrywise.
pub fn compare_strings(y: &[u32], z: &[u32]) -> Ordering {
    string_difference(y)
        .cmp(&string_difference(z))
        .then(y.len().cmp(&z.len()))
        .then_with(|| y.cmp(z))
}

/// `y < z` in the string order; errors on equal strings.
pub fn string_less_than(y: &[u32], z: &[u32]) -> Result<bool> {
    match compare_strings(y, z) {
        Ordering::Equal => Err(Error::EqualStrings),
        ord => Ok(ord == Ordering::Less),
    }
}

pub fn canonicalize(s: &BlochSequence, mode: Mode) -> BlochSequence {
    if s.is_empty() {
        return s.clone();
    }
    let ZDecomposition { mut strings } = z_decompose(s);
    let start = match mode {
        Mode::Energy => 0,
        Mode::Vector => 1.min(strings.len()),
    };
    strings[start..].sort_by(|a, b| compare_strings(b, a));
    BlochSequence::from_parts_unchecked(ZDecomposition { strings }.reassemble())
}

/// Whether the class survives when `<0|V|0> = 0`.
///
/// Every empty string between zeros, or at the end, leaves a bare `<0|V|0>`
/// factor. In energy mode an empty first string does too.
pub fn survives_offdiagonal(representative: &BlochSequence, mode: Mode) -> bool {
    if representative.is_empty() {
        // Only the first-order energy <0|V|0> itself.
        return false;
    }
    let z = z_decompose(representative);
    let start = match mode {
        Mode::Energy => 0,
        Mode::Vector => 1,
    };
    z.strings.iter().skip(start).all(|s| !s.is_empty())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceClass {
    pub representative: BlochSequence,
    pub members: Vec<BlochSequence>,
    pub c_eff: Rational,
    pub e_eff: Rational,
    pub mode: Mode,
}

impl EquivalenceClass {
    pub fn convex_members(&self) -> usize {
        self.members.iter().filter(|s| is_convex(s)).count()
    }
}

/// Partitions all order-`n` sequences into classes, ordered by representative.
///
/// Order zero is accepted and yields the single class of the empty sequence,
/// which the first-order energy needs.
pub fn group(
    n: usize,
    mode: Mode,
    engine: &CoefficientEngine,
    method: Method,
    cap: usize,
) -> Result<Vec<EquivalenceClass>> {
    let all = enumerate_with_empty(n, cap)?;
    let mut classes: BTreeMap<BlochSequence, EquivalenceClass> = BTreeMap::new();
    for s in all {
        let rep = canonicalize(&s, mode);
        let c = if s.is_empty() {
            Rational::one()
        } else {
            engine.c(&s, method)
        };
        let e = engine.e(&s, method);
        let class = classes
            .entry(rep.clone())
            .or_insert_with(|| EquivalenceClass {
                representative: rep,
                members: Vec::new(),
                c_eff: Rational::zero(),
                e_eff: Rational::zero(),
                mode,
            });
        class.members.push(s);
        class.c_eff += &c;
        class.e_eff += &e;
    }
    Ok(classes.into_values().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermCountRow {
    pub order: usize,
    pub sequences: String,
    pub convex: String,
    /// Energy-mode classes, all of them.
    pub energy_classes: usize,
    /// Energy-mode classes with nonzero effective `e`; the minimum term count.
    pub energy_terms: usize,
    pub vector_classes: usize,
    pub offdiag_vector_terms: usize,
    pub offdiag_energy_terms: usize,
    /// Lower bounds from distinct leading strings: `2^n - 1` and `2^n - n`.
    pub vector_lower_bound: String,
    pub energy_lower_bound: String,
    /// `sequences / (4^n / (2 sqrt(pi n)))`.
    pub asymptotic_ratio: f64,
}

pub fn term_count_report(
    n_max: usize,
    engine: &CoefficientEngine,
    cap: usize,
) -> Result<Vec<TermCountRow>> {
    if n_max > cap {
        return Err(Error::CapExceeded { n: n_max, cap });
    }
    (1..=n_max)
        .map(|n| term_count_row(n, engine, cap))
        .collect()
}

fn term_count_row(n: usize, engine: &CoefficientEngine, cap: usize) -> Result<TermCountRow> {
    let energy = group(n, Mode::Energy, engine, Method::Closed, cap)?;
    let vector = group(n, Mode::Vector, engine, Method::Closed, cap)?;
    let sequences = count_sequences(n);
    let seq_f = sequences
        .to_string()
        .parse::<f64>()
        .unwrap_or(f64::INFINITY);
    let nf = n as f64;
    let asym = 4f64.powi(n as i32) / (2.0 * (std::f64::consts::PI * nf).sqrt());
    let pow2 = num::BigUint::from(1u8) << n;
    Ok(TermCountRow {
        order: n,
        sequences: sequences.to_string(),
        convex: count_convex(n).to_string(),
        energy_classes: energy.len(),
        energy_terms: energy.iter().filter(|c| !c.e_eff.is_zero()).count(),
        vector_classes: vector.len(),
        offdiag_vector_terms: vector
            .iter()
            .filter(|c| !c.c_eff.is_zero() && survives_offdiagonal(&c.representative, Mode::Vector))
            .count(),
        offdiag_energy_terms: energy
            .iter()
            .filter(|c| !c.e_eff.is_zero() && survives_offdiagonal(&c.representative, Mode::Energy))
            .count(),
        vector_lower_bound: (&pow2 - 1u8).to_string(),
        energy_lower_bound: (&pow2 - num::BigUint::from(n)).to_string(),
        asymptotic_ratio: seq_f / asym,
    })
}
