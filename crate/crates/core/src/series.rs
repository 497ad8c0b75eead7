//! Energy and eigenvector corrections to order `N` by three routes.
//!
//! * `Diagrammatic`: sums over all Bloch sequences weighted by `e` and `c`.
//! * `Textbook`: the coupled recurrences with `<0|lambda_n> = -1/2 sum <lambda_m|lambda_{n-m}>`.
//! * `BlochUnnormalised`: unit-weight sums over convex diagrams; the vectors
//!   are not normalised and have no component along `|lambda_0>`.

use std::fmt;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeff::{CoefficientEngine, Method};
use crate::diagram::{enumerate_with_empty, is_convex, BlochSequence};
use crate::equivalence::{group, Mode};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::spectral::{CVector, DiagramEvaluator, HamiltonianSpec, ResolventPowers};

/// Imaginary parts of `lambda_n` above this fraction of the term magnitude are reported.
pub const IMAG_WARN_REL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Diagrammatic,
    Textbook,
    BlochUnnormalised,
}

impl Route {
    pub fn is_normalised(self) -> bool {
        !matches!(self, Route::BlochUnnormalised)
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Diagrammatic => "diagrammatic",
            Route::Textbook => "textbook",
            Route::BlochUnnormalised => "bloch-unnormalised",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CorrectionSeries {
    pub route: Route,
    pub order: usize,
    pub grouped: bool,
    pub method: Option<Method>,
    /// `lambda_0, ..., lambda_N`.
    pub energies: Vec<f64>,
    /// `|lambda_0>, ..., |lambda_N>`.
    pub vectors: Vec<CVector>,
    /// Diagram terms with a nonzero coefficient that were evaluated.
    pub terms_evaluated: usize,
    pub diagnostics: Vec<String>,
}

impl CorrectionSeries {
    fn start(spec: &HamiltonianSpec, route: Route, order: usize) -> Self {
        CorrectionSeries {
            route,
            order,
            grouped: false,
            method: None,
            energies: vec![spec.lambda0()],
            vectors: vec![spec.target_vector()],
            terms_evaluated: 0,
            diagnostics: spec.warnings().to_vec(),
        }
    }

    fn push_energy(&mut self, n: usize, value: Complex64, magnitude: f64) {
        if value.im.abs() > IMAG_WARN_REL * magnitude.max(value.re.abs()) {
            let msg = format!("lambda_{n} has imaginary part {:e}", value.im);
            log::warn!("{msg}");
            self.diagnostics.push(msg);
        }
        self.energies.push(value.re);
    }

    /// `lambda(eps) = sum_n eps^n lambda_n`.
    pub fn energy_at(&self, eps: f64) -> f64 {
        self.energies
            .iter()
            .rev()
            .fold(0.0, |acc, &l| acc * eps + l)
    }

    /// `|lambda(eps)> = sum_n eps^n |lambda_n>`.
    pub fn vector_at(&self, eps: f64) -> CVector {
        let dim = self.vectors[0].len();
        self.vectors
            .iter()
            .rev()
            .fold(CVector::zeros(dim), |acc, v| {
                acc * Complex64::new(eps, 0.0) + v
            })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DiagrammaticOptions {
    pub grouping: bool,
    pub method: Method,
    pub cap: usize,
}

impl Default for DiagrammaticOptions {
    fn default() -> Self {
        DiagrammaticOptions {
            grouping: false,
            method: Method::Closed,
            cap: crate::diagram::DEFAULT_ENUMERATION_CAP,
        }
    }
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        Err(Error::InvalidOrder(order))
    } else {
        Ok(())
    }
}

/// Weighted diagram lists for one order, either per sequence or per class.
fn weighted_terms(
    n: usize,
    mode: Mode,
    engine: &CoefficientEngine,
    opts: &DiagrammaticOptions,
) -> Result<Vec<(BlochSequence, Rational)>> {
    if opts.grouping {
        Ok(group(n, mode, engine, opts.method, opts.cap)?
            .into_iter()
            .map(|class| {
                let w = match mode {
                    Mode::Energy => class.e_eff,
                    Mode::Vector => class.c_eff,
                };
                (class.representative, w)
            })
            .collect())
    } else {
        Ok(enumerate_with_empty(n, opts.cap)?
            .into_iter()
            .map(|s| {
                let w = match mode {
                    Mode::Energy => engine.e(&s, opts.method),
                    Mode::Vector => engine.c(&s, opts.method),
                };
                (s, w)
            })
            .collect())
    }
}

/// `lambda_n = sum e(k) <0|V S^k1 V ... S^k_{n-1} V|0>` over order `n - 1`,
/// `|lambda_n> = sum c(k) S^k1 V ... S^kn V |0>` over order `n`.
pub fn diagrammatic_series(
    spec: &HamiltonianSpec,
    order: usize,
    opts: DiagrammaticOptions,
    engine: &CoefficientEngine,
) -> Result<CorrectionSeries> {
    check_order(order)?;
    if order > opts.cap {
        return Err(Error::CapExceeded {
            n: order,
            cap: opts.cap,
        });
    }
    let ev = DiagramEvaluator::new(spec, order);
    let mut out = CorrectionSeries::start(spec, Route::Diagrammatic, order);
    out.grouped = opts.grouping;
    out.method = Some(opts.method);

    for n in 1..=order {
        let mut energy = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for (s, w) in weighted_terms(n - 1, Mode::Energy, engine, &opts)? {
            if w.is_zero() {
                continue;
            }
            let term = ev.energy(&s) * w.to_f64();
            magnitude += term.norm();
            energy += term;
            out.terms_evaluated += 1;
        }
        out.push_energy(n, energy, magnitude);

        let mut vector = CVector::zeros(spec.dim());
        for (s, w) in weighted_terms(n, Mode::Vector, engine, &opts)? {
            if w.is_zero() {
                continue;
            }
            vector += ev.vector(&s) * Complex64::new(w.to_f64(), 0.0);
            out.terms_evaluated += 1;
        }
        out.vectors.push(vector);
    }
    Ok(out)
}

/// Order-by-order evaluation of the coupled energy/vector recurrences.
pub fn textbook_series(spec: &HamiltonianSpec, order: usize) -> Result<CorrectionSeries> {
    check_order(order)?;
    let res = ResolventPowers::new(spec, 1);
    let target = spec.target();
    let mut out = CorrectionSeries::start(spec, Route::Textbook, order);
    let mut energies = vec![Complex64::new(spec.lambda0(), 0.0)];

    for n in 1..=order {
        // V|lambda_{n-1}> - sum_{m=1}^{n-1} |lambda_{n-m}> lambda_m
        let mut rhs = spec.v() * &out.vectors[n - 1];
        for (m, &energy) in energies.iter().enumerate().take(n).skip(1) {
            rhs -= &out.vectors[n - m] * energy;
        }
        let energy = rhs[target];
        let magnitude = rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        out.push_energy(n, energy, magnitude);
        energies.push(energy);

        let mut overlap = Complex64::new(0.0, 0.0);
        for m in 1..n {
            overlap += out.vectors[m].dotc(&out.vectors[n - m]);
        }
        let mut vector = res.apply(1, &rhs);
        vector[target] += overlap * -0.5;
        out.vectors.push(vector);
    }
    Ok(out)
}

/// Unit-weight sums over convex diagrams; `<lambda_0|lambda_bar_n> = 0` for `n >= 1`.
pub fn bloch_series(spec: &HamiltonianSpec, order: usize, cap: usize) -> Result<CorrectionSeries> {
    check_order(order)?;
    if order > cap {
        return Err(Error::CapExceeded { n: order, cap });
    }
    let ev = DiagramEvaluator::new(spec, order);
    let mut out = CorrectionSeries::start(spec, Route::BlochUnnormalised, order);
    for n in 1..=order {
        let mut energy = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for s in enumerate_with_empty(n - 1, cap)?
            .iter()
            .filter(|s| is_convex(s))
        {
            let term = ev.energy(s);
            magnitude += term.norm();
            energy += term;
            out.terms_evaluated += 1;
        }
        out.push_energy(n, energy, magnitude);

        let mut vector = CVector::zeros(spec.dim());
        for s in enumerate_with_empty(n, cap)?
            .iter()
            .filter(|s| is_convex(s))
        {
            vector += ev.vector(s);
            out.terms_evaluated += 1;
        }
        out.vectors.push(vector);
    }
    Ok(out)
}

/// `max_n |a_n - b_n| / max(|a_n|, |b_n|)` over the shared orders; zero when both vanish.
pub fn energy_deviation(a: &CorrectionSeries, b: &CorrectionSeries) -> f64 {
    a.energies
        .iter()
        .zip(&b.energies)
        .map(|(&x, &y)| relative(x - y, x.abs().max(y.abs())))
        .fold(0.0, f64::max)
}

/// Normwise relative deviation per order, maximised over orders:
/// `max_i |a_i - b_i| / max_i max(|a_i|, |b_i|)`.
pub fn vector_deviation(a: &CorrectionSeries, b: &CorrectionSeries) -> f64 {
    a.vectors
        .iter()
        .zip(&b.vectors)
        .map(|(x, y)| {
            let diff = x
                .iter()
                .zip(y.iter())
                .map(|(p, q)| (p - q).norm())
                .fold(0.0, f64::max);
            let scale = x
                .iter()
                .chain(y.iter())
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            relative(diff, scale)
        })
        .fold(0.0, f64::max)
}

fn relative(diff: f64, scale: f64) -> f64 {
    let diff = diff.abs();
    if diff == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        diff / scale
    }
}

/// `sum_{n+m <= N} <lambda_n|lambda_m>` for each truncation `N = 0..order`.
pub fn partial_norms(series: &CorrectionSeries) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(series.order + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for total in 0..=series.order {
        for n in 0..=total {
            acc += series.vectors[n].dotc(&series.vectors[total - n]);
        }
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_LEVEL: &str = r#"{"dim":2,"h0":[0,1],"v":[[0,1],[1,0]],"target":0}"#;

    fn two_level() -> HamiltonianSpec {
        HamiltonianSpec::from_json(TWO_LEVEL).unwrap()
    }

    fn three_level() -> HamiltonianSpec {
        HamiltonianSpec::from_json(
            r#"{"dim":3,"h0":[0,1.5,-2],"v":[[0.3,[0.5,0.25],0.1],[[0.5,-0.25],-0.2,[0,0.4]],[0.1,[0,-0.4],0.05]],"target":0}"#,
        )
        .unwrap()
    }

    #[test]
    fn first_order() {
        let spec = three_level();
        let eng = CoefficientEngine::new();
        let s = diagrammatic_series(&spec, 1, DiagrammaticOptions::default(), &eng).unwrap();
        assert_eq!(s.energies[1], 0.3);
        let expected = ResolventPowers::new(&spec, 1).apply(1, &(spec.v() * spec.target_vector()));
        assert_eq!(s.vectors[1], expected);
    }

    #[test]
    fn two_level_energies() {
        let spec = two_level();
        let eng = CoefficientEngine::new();
        let expected = [0.0, 0.0, -1.0, 0.0, 1.0];
        let routes = [
            diagrammatic_series(&spec, 4, DiagrammaticOptions::default(), &eng).unwrap(),
            textbook_series(&spec, 4).unwrap(),
            bloch_series(&spec, 4, 12).unwrap(),
        ];
        for s in &routes {
            for (got, want) in s.energies.iter().zip(expected) {
                assert!((got - want).abs() < 1e-12, "{} {:?}", s.route, s.energies);
            }
        }
    }

    #[test]
    fn textbook_phase_convention() {
        let spec = three_level();
        let s = textbook_series(&spec, 5).unwrap();
        assert_eq!(s.vectors[1][0], Complex64::new(0.0, 0.0));
        let l1 = &s.vectors[1];
        let expected = -0.5 * l1.dotc(l1);
        assert!((s.vectors[2][0] - expected).norm() < 1e-15);
        for n in 1..=5 {
            assert!(s.vectors[n][0].im.abs() < 1e-13);
        }
    }

    #[test]
    fn grouping_does_not_change_values() {
        let spec = three_level();
        let eng = CoefficientEngine::new();
        let plain = diagrammatic_series(&spec, 5, DiagrammaticOptions::default(), &eng).unwrap();
        let grouped = diagrammatic_series(
            &spec,
            5,
            DiagrammaticOptions {
                grouping: true,
                ..Default::default()
            },
            &eng,
        )
        .unwrap();
        assert!(energy_deviation(&plain, &grouped) < 1e-12);
        assert!(vector_deviation(&plain, &grouped) < 1e-12);
        assert!(grouped.terms_evaluated < plain.terms_evaluated);
    }

    #[test]
    fn bloch_first_order_matches_normalised() {
        let spec = three_level();
        let b = bloch_series(&spec, 3, 12).unwrap();
        let t = textbook_series(&spec, 3).unwrap();
        assert_eq!(b.vectors[1], t.vectors[1]);
        for n in 1..=3 {
            assert_eq!(b.vectors[n][0], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn order_zero_rejected() {
        let spec = two_level();
        assert!(matches!(
            textbook_series(&spec, 0),
            Err(Error::InvalidOrder(0))
        ));
        let eng = CoefficientEngine::new();
        let opts = DiagrammaticOptions {
            cap: 3,
            ..Default::default()
        };
        assert!(matches!(
            diagrammatic_series(&spec, 4, opts, &eng),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn evaluation_helpers() {
        let spec = two_level();
        let s = textbook_series(&spec, 4).unwrap();
        let eps = 0.1;
        let exact = (1.0 - (1.0f64 + 4.0 * eps * eps).sqrt()) / 2.0;
        assert!((s.energy_at(eps) - exact).abs() < 1e-5);
        let norms = partial_norms(&s);
        for z in norms {
            assert!((z.re - 1.0).abs() < 1e-14 && z.im.abs() < 1e-14);
        }
        assert_eq!(s.vector_at(0.0), spec.target_vector());
    }
}
