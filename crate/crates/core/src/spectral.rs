//! Hamiltonians in the unperturbed eigenbasis, reduced resolvent powers and
//! the operator content of a single diagram.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diagram::BlochSequence;
use crate::error::{Error, Result};

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

pub const DEFAULT_GAP_TOL: f64 = 1e-9;
pub const HERMITIAN_REL_TOL: f64 = 1e-12;
/// `||V|| / gap` above this triggers an ill-conditioning warning.
pub const CONDITION_WARN: f64 = 1e8;

#[derive(Clone, Copy, Debug)]
pub struct LoadOptions {
    pub gap_tol: f64,
    pub hermitian_rel_tol: f64,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            gap_tol: DEFAULT_GAP_TOL,
            hermitian_rel_tol: HERMITIAN_REL_TOL,
        }
    }
}

/// Diagonal `H_0`, Hermitian perturbation `V` and the level to follow.
#[derive(Clone, Debug)]
pub struct HamiltonianSpec {
    h0: Vec<f64>,
    v: CMatrix,
    target: usize,
    min_gap: f64,
    warnings: Vec<String>,
}

/// One matrix entry on disk: a bare real or a `[re, im]` pair.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

/// On-disk form: `{"dim", "h0", "v", "target"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HamiltonianFile {
    dim: usize,
    h0: Vec<f64>,
    v: Vec<Vec<Entry>>,
    target: usize,
}

impl HamiltonianSpec {
    pub fn new(h0: Vec<f64>, v: CMatrix, target: usize, opts: LoadOptions) -> Result<Self> {
        let dim = h0.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch("empty spectrum".into()));
        }
        if v.nrows() != dim || v.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "h0 has {dim} levels but v is {}x{}",
                v.nrows(),
                v.ncols()
            )));
        }
        if target >= dim {
            return Err(Error::DimensionMismatch(format!(
                "target {target} out of range for dimension {dim}"
            )));
        }
        if h0.iter().any(|x| !x.is_finite())
            || v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Parse("non-finite matrix entry".into()));
        }

        let norm = v.norm();
        let allowed = opts.hermitian_rel_tol * norm;
        let mut deviation = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                deviation = deviation.max((v[(i, j)] - v[(j, i)].conj()).norm());
            }
        }
        if deviation > allowed {
            return Err(Error::NotHermitian { deviation, allowed });
        }

        let mut min_gap = f64::INFINITY;
        for (j, &level) in h0.iter().enumerate() {
            if j == target {
                continue;
            }
            let gap = (level - h0[target]).abs();
            if gap < opts.gap_tol {
                return Err(Error::DegenerateTarget {
                    target,
                    other: j,
                    gap,
                    gap_tol: opts.gap_tol,
                });
            }
            min_gap = min_gap.min(gap);
        }

        let mut warnings = Vec::new();
        if min_gap.is_finite() && norm / min_gap > CONDITION_WARN {
            let msg = format!(
                "resolvent is ill-conditioned: ||V|| / gap = {:e}",
                norm / min_gap
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }

        Ok(HamiltonianSpec {
            h0,
            v,
            target,
            min_gap,
            warnings,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_with(text, LoadOptions::default())
    }

    pub fn from_json_with(text: &str, opts: LoadOptions) -> Result<Self> {
        let file: HamiltonianFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.h0.len() != file.dim {
            return Err(Error::DimensionMismatch(format!(
                "dim is {} but h0 has {} entries",
                file.dim,
                file.h0.len()
            )));
        }
        if file.v.len() != file.dim || file.v.iter().any(|row| row.len() != file.dim) {
            return Err(Error::DimensionMismatch(format!(
                "v must be {0}x{0}",
                file.dim
            )));
        }
        let v = CMatrix::from_fn(file.dim, file.dim, |i, j| match file.v[i][j] {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        });
        Self::new(file.h0, v, file.target, opts)
    }

    pub fn to_json(&self) -> String {
        let real = self.is_real();
        let v = (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| {
                        let z = self.v[(i, j)];
                        if real {
                            Entry::Real(z.re)
                        } else {
                            Entry::Complex([z.re, z.im])
                        }
                    })
                    .collect()
            })
            .collect();
        let file = HamiltonianFile {
            dim: self.dim(),
            h0: self.h0.clone(),
            v,
            target: self.target,
        };
        serde_json::to_string(&file).expect("plain data serializes")
    }

    pub fn dim(&self) -> usize {
        self.h0.len()
    }

    pub fn h0(&self) -> &[f64] {
        &self.h0
    }

    pub fn v(&self) -> &CMatrix {
        &self.v
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn lambda0(&self) -> f64 {
        self.h0[self.target]
    }

    /// Smallest `|h0[j] - h0[target]|` over `j != target`; infinite in one dimension.
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn is_real(&self) -> bool {
        self.v.iter().all(|z| z.im == 0.0)
    }

    /// The unperturbed state `|lambda_0>`.
    pub fn target_vector(&self) -> CVector {
        let mut e = CVector::zeros(self.dim());
        e[self.target] = Complex64::new(1.0, 0.0);
        e
    }

    /// `(H_0 + eps V) x`.
    pub fn apply_hamiltonian(&self, eps: f64, x: &CVector) -> CVector {
        let mut out = &self.v * x * Complex64::new(eps, 0.0);
        for (i, &h) in self.h0.iter().enumerate() {
            out[i] += x[i] * h;
        }
        out
    }
}

/// Diagonal reduced resolvent powers: `S^0 = -P` and `S^k = Q / (lambda_0 - H_0)^k`.
#[derive(Clone, Debug)]
pub struct ResolventPowers {
    target: usize,
    /// `powers[k - 1][j] = 1 / (lambda_0 - h0[j])^k`, zero on the target.
    powers: Vec<Vec<f64>>,
    inverse_gaps: Vec<f64>,
}

impl ResolventPowers {
    pub fn new(spec: &HamiltonianSpec, max_k: usize) -> Self {
        let lambda0 = spec.lambda0();
        let inverse_gaps: Vec<f64> = spec
            .h0()
            .iter()
            .enumerate()
            .map(|(j, &h)| {
                if j == spec.target() {
                    0.0
                } else {
                    1.0 / (lambda0 - h)
                }
            })
            .collect();
        let mut res = ResolventPowers {
            target: spec.target(),
            powers: Vec::new(),
            inverse_gaps,
        };
        res.ensure(max_k);
        res
    }

    pub fn ensure(&mut self, max_k: usize) {
        while self.powers.len() < max_k {
            let next = match self.powers.last() {
                None => self.inverse_gaps.clone(),
                Some(prev) => prev
                    .iter()
                    .zip(&self.inverse_gaps)
                    .map(|(a, b)| a * b)
                    .collect(),
            };
            self.powers.push(next);
        }
    }

    /// Diagonal of `S^k` for `k >= 1`.
    pub fn diagonal(&self, k: usize) -> Vec<f64> {
        assert!(k >= 1);
        match self.powers.get(k - 1) {
            Some(d) => d.clone(),
            None => self.inverse_gaps.iter().map(|g| g.powi(k as i32)).collect(),
        }
    }

    pub fn apply(&self, k: usize, x: &CVector) -> CVector {
        if k == 0 {
            let mut out = CVector::zeros(x.len());
            out[self.target] = -x[self.target];
            return out;
        }
        let scale =
            |d: &[f64]| CVector::from_iterator(x.len(), x.iter().zip(d).map(|(z, s)| z * *s));
        match self.powers.get(k - 1) {
            Some(d) => scale(d),
            None => scale(&self.diagonal(k)),
        }
    }
}

/// Evaluates operator strings `S^{k_1} V ... S^{k_n} V |lambda_0>` for one spec.
#[derive(Clone, Debug)]
pub struct DiagramEvaluator<'a> {
    spec: &'a HamiltonianSpec,
    resolvent: ResolventPowers,
}

impl<'a> DiagramEvaluator<'a> {
    pub fn new(spec: &'a HamiltonianSpec, max_k: usize) -> Self {
        DiagramEvaluator {
            spec,
            resolvent: ResolventPowers::new(spec, max_k),
        }
    }

    pub fn spec(&self) -> &HamiltonianSpec {
        self.spec
    }

    pub fn resolvent(&self) -> &ResolventPowers {
        &self.resolvent
    }

    /// Applies `V` then `S^{k_i}`, consuming `k_n` first.
    pub fn vector(&self, s: &BlochSequence) -> CVector {
        let mut x = self.spec.target_vector();
        for &k in s.parts().iter().rev() {
            x = self.spec.v() * x;
            x = self.resolvent.apply(k as usize, &x);
        }
        x
    }

    /// `<lambda_0| V S^{k_1} V ... S^{k_n} V |lambda_0>`; `<0|V|0>` for the empty sequence.
    pub fn energy(&self, s: &BlochSequence) -> Complex64 {
        let x = self.vector(s);
        let t = self.spec.target();
        self.spec.v().row(t).transpose().dot(&x)
    }
}

pub fn eval_diagram_vector(s: &BlochSequence, spec: &HamiltonianSpec) -> CVector {
    DiagramEvaluator::new(spec, s.order()).vector(s)
}

pub fn eval_diagram_energy(s: &BlochSequence, spec: &HamiltonianSpec) -> Complex64 {
    DiagramEvaluator::new(spec, s.order()).energy(s)
}
