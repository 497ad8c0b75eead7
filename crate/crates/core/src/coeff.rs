//! The rational coefficient functions `c` (eigenvector) and `e` (eigenvalue).
//!
//! Two independent routes are provided: the coupled recurrences, memoized
//! per engine, and the closed forms in terms of crossing numbers and the
//! central-binomial sequence `t(n) = C(2n, n) / 4^n`.

use std::collections::HashMap;
use std::sync::RwLock;

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::diagram::{binomial, crossing_numbers, BlochSequence, CrossingNumbers};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Closed,
    Recurrence,
}

/// `t(n) = C(2n, n) / 4^n`, with `t(0) = 1`.
pub fn t(n: usize) -> Rational {
    let central = BigInt::from(binomial(2 * n, n));
    let pow4 = BigInt::from(1u8) << (2 * n);
    Rational::new(central, pow4)
}

/// `t(n)` in floating point through log-gamma, `Gamma(n + 1/2) / (sqrt(pi) Gamma(n + 1))`.
pub fn t_f64(n: usize) -> f64 {
    use statrs::function::gamma::ln_gamma;
    let n = n as f64;
    (ln_gamma(n + 0.5) - ln_gamma(n + 1.0) - 0.5 * std::f64::consts::PI.ln()).exp()
}

/// Closed form for `c`: `t(sum_i n_i)`.
pub fn c_from_crossings(cn: &CrossingNumbers) -> Rational {
    t(cn.total_down())
}

/// Closed form for `e`:
/// `sum_i [t(a_i) - t(a_{i-1}) + [i = 1]] t(b_i)` with `a_i = N_1 + ... + N_i`
/// and `b_i = n_i + ... + n_m`.
pub fn e_from_crossings(cn: &CrossingNumbers) -> Rational {
    let ups: Vec<usize> = cn.ups().map(|x| x as usize).collect();
    let downs: Vec<usize> = cn.downs().map(|x| x as usize).collect();
    let mut total = Rational::zero();
    let mut a_prev = 0usize;
    let mut b = downs.iter().sum::<usize>();
    for (i, (&up, &down)) in ups.iter().zip(&downs).enumerate() {
        let a = a_prev + up;
        let mut weight = &t(a) - &t(a_prev);
        if i == 0 {
            weight = weight + Rational::one();
        }
        total += &(&weight * &t(b));
        a_prev = a;
        b -= down;
    }
    total
}

pub fn c_closed(s: &BlochSequence) -> Rational {
    c_from_crossings(&crossing_numbers(s))
}

pub fn e_closed(s: &BlochSequence) -> Rational {
    e_from_crossings(&crossing_numbers(s))
}

/// Memoizing evaluator for the `c`/`e` recurrences.
///
/// The caches are keyed on the exact part list and may be shared between
/// threads; concurrent queries always see identical values.
#[derive(Debug, Default)]
pub struct CoefficientEngine {
    c_memo: RwLock<HashMap<Vec<u32>, Rational>>,
    e_memo: RwLock<HashMap<Vec<u32>, Rational>>,
}

impl CoefficientEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn c(&self, s: &BlochSequence, method: Method) -> Rational {
        match method {
            Method::Closed => c_closed(s),
            Method::Recurrence => self.c_recurrence(s),
        }
    }

    pub fn e(&self, s: &BlochSequence, method: Method) -> Rational {
        match method {
            Method::Closed => e_closed(s),
            Method::Recurrence => self.e_recurrence(s),
        }
    }

    pub fn c_recurrence(&self, s: &BlochSequence) -> Rational {
        assert!(!s.is_empty(), "c is not defined on the empty sequence");
        self.c_parts(s.parts())
    }

    pub fn e_recurrence(&self, s: &BlochSequence) -> Rational {
        self.e_parts(s.parts())
    }

    pub fn cache_len(&self) -> (usize, usize) {
        (
            self.c_memo.read().unwrap().len(),
            self.e_memo.read().unwrap().len(),
        )
    }

    fn c_parts(&self, k: &[u32]) -> Rational {
        debug_assert!(
            is_bloch(k) && !k.is_empty(),
            "c called on invalid arguments {k:?}"
        );
        if let Some(v) = self.c_memo.read().unwrap().get(k) {
            return v.clone();
        }
        let value = self.c_uncached(k);
        self.c_memo
            .write()
            .unwrap()
            .insert(k.to_vec(), value.clone());
        value
    }

    fn c_uncached(&self, k: &[u32]) -> Rational {
        let n = k.len();
        if n == 1 {
            return Rational::one();
        }
        // K[m] = k_1 + ... + k_m, with K[0] = 0.
        let partial = prefix_sums(k);
        match k[0] {
            0 => {
                let mut total = Rational::zero();
                for m in 1..n {
                    let km = partial[m];
                    // Primed sum: k_{m+1} >= m - K_m >= 0.
                    if km > m || (k[m] as usize) < m - km {
                        continue;
                    }
                    let weight = 1 - i64::from(m == km) - i64::from(m == partial[m + 1]);
                    if weight == 0 {
                        continue;
                    }
                    // (m - K_m, k_m, ..., k_2)
                    let mut left = Vec::with_capacity(m);
                    left.push((m - km) as u32);
                    left.extend(k[1..m].iter().rev());
                    // (K_{m+1} - m, k_{m+2}, ..., k_n)
                    let mut right = Vec::with_capacity(n - m);
                    right.push((partial[m + 1] - m) as u32);
                    right.extend_from_slice(&k[m + 1..]);
                    let term = &self.c_parts(&left) * &self.c_parts(&right);
                    total += &(&Rational::new(weight, 2) * &term);
                }
                total
            }
            1 => self.c_parts(&k[1..]),
            first => {
                let mut total = Rational::zero();
                // Horizontal intersections with the upper diagonal: k_p = 0 and K_{p-1} = p.
                for p in 2..=n {
                    if k[p - 1] != 0 || partial[p - 1] != p {
                        continue;
                    }
                    let mut head = Vec::with_capacity(p - 1);
                    head.push(first - 1);
                    head.extend_from_slice(&k[1..p - 1]);
                    let term = &self.c_parts(&head) * &self.e_parts(&k[p..]);
                    total += &term;
                }
                total
            }
        }
    }

    fn e_parts(&self, k: &[u32]) -> Rational {
        debug_assert!(is_bloch(k), "e called on invalid arguments {k:?}");
        if k.is_empty() {
            return Rational::one();
        }
        if let Some(v) = self.e_memo.read().unwrap().get(k) {
            return v.clone();
        }
        let partial = prefix_sums(k);
        let mut value = self.c_parts(k);
        for p in 2..=k.len() {
            if k[p - 1] != 0 || partial[p] != p {
                continue;
            }
            // (0, k_1, ..., k_{p-1})
            let mut head = Vec::with_capacity(p);
            head.push(0);
            head.extend_from_slice(&k[..p - 1]);
            let term = &self.c_parts(&head) * &self.e_parts(&k[p..]);
            value = &value - &term;
        }
        self.e_memo
            .write()
            .unwrap()
            .insert(k.to_vec(), value.clone());
        value
    }
}

fn prefix_sums(k: &[u32]) -> Vec<usize> {
    let mut out = Vec::with_capacity(k.len() + 1);
    out.push(0);
    let mut acc = 0usize;
    for &x in k {
        acc += x as usize;
        out.push(acc);
    }
    out
}

fn is_bloch(k: &[u32]) -> bool {
    k.iter().map(|&x| x as usize).sum::<usize>() == k.len()
}
