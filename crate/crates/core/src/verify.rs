//! Truncation residuals, norm defects and route-to-route comparison.
//!
//! The residual `(H_0 + eps V)|lambda(eps)> - lambda(eps)|lambda(eps)>` is
//! evaluated by first collecting it into a polynomial in `eps` whose vector
//! coefficients come straight from the series, then summing with Horner's
//! rule. Forming the vector at each `eps` and subtracting would bottom out at
//! double-precision cancellation long before `eps^(N+1)` becomes visible.

use num::complex::Complex64;
use serde::Serialize;

use crate::report::{sig17, sig17_opt, sig17_vec};
use crate::series::{energy_deviation, vector_deviation, CorrectionSeries, Route};
use crate::spectral::{CVector, HamiltonianSpec};

pub const MIN_FIT_POINTS: usize = 5;

#[derive(Clone, Debug, Serialize)]
pub struct EpsRow {
    #[serde(serialize_with = "sig17")]
    pub eps: f64,
    #[serde(serialize_with = "sig17")]
    pub residual: f64,
    #[serde(serialize_with = "sig17")]
    pub norm_defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RouteVerification {
    pub route: Route,
    pub order: usize,
    pub rows: Vec<EpsRow>,
    /// Least-squares slope of `ln residual` against `ln eps`.
    #[serde(serialize_with = "sig17_opt")]
    pub residual_slope: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub norm_defect_slope: Option<f64>,
    /// `max_{k <= N} ||r_k||`: how well each order solves its defining equation.
    #[serde(serialize_with = "sig17")]
    pub equation_defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RouteDelta {
    pub a: Route,
    pub b: Route,
    #[serde(serialize_with = "sig17")]
    pub energy: f64,
    /// Absent when one side is unnormalised, since its vectors differ by construction.
    #[serde(serialize_with = "sig17_opt")]
    pub vector: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    #[serde(serialize_with = "sig17_vec")]
    pub eps: Vec<f64>,
    pub routes: Vec<RouteVerification>,
    pub deltas: Vec<RouteDelta>,
    pub diagnostics: Vec<String>,
}

/// `count` log-spaced values from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Coefficients `r_k`, `k = 0..=2N`, of the residual polynomial.
pub fn residual_coefficients(spec: &HamiltonianSpec, series: &CorrectionSeries) -> Vec<CVector> {
    let order = series.order;
    let dim = spec.dim();
    let psi = |j: usize| series.vectors.get(j);
    (0..=2 * order)
        .map(|k| {
            let mut r = CVector::zeros(dim);
            if let Some(v) = psi(k) {
                for (i, &h) in spec.h0().iter().enumerate() {
                    r[i] += v[i] * h;
                }
            }
            if k >= 1 {
                if let Some(v) = psi(k - 1) {
                    r += spec.v() * v;
                }
            }
            for m in 0..=k.min(order) {
                if let Some(v) = psi(k - m) {
                    r -= v * Complex64::new(series.energies[m], 0.0);
                }
            }
            r
        })
        .collect()
}

/// Coefficients `g_k` of `<lambda(eps)|lambda(eps)> - 1`.
pub fn norm_coefficients(series: &CorrectionSeries) -> Vec<f64> {
    let order = series.order;
    (0..=2 * order)
        .map(|k| {
            let mut g = Complex64::new(0.0, 0.0);
            for m in k.saturating_sub(order)..=k.min(order) {
                g += series.vectors[m].dotc(&series.vectors[k - m]);
            }
            if k == 0 {
                g -= 1.0;
            }
            g.re
        })
        .collect()
}

fn horner_vector(coeffs: &[CVector], eps: f64) -> CVector {
    let dim = coeffs[0].len();
    coeffs.iter().rev().fold(CVector::zeros(dim), |acc, c| {
        acc * Complex64::new(eps, 0.0) + c
    })
}

fn horner(coeffs: &[f64], eps: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * eps + c)
}

/// Least-squares slope of `ln y` against `ln x` over points with `y > 0`.
///
/// Requires at least [`MIN_FIT_POINTS`] usable points spanning a decade.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return None;
    }
    let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < std::f64::consts::LN_10 * (1.0 - 1e-9) {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

pub fn verify_route(
    spec: &HamiltonianSpec,
    series: &CorrectionSeries,
    eps: &[f64],
) -> RouteVerification {
    let r = residual_coefficients(spec, series);
    let g = norm_coefficients(series);
    let rows: Vec<EpsRow> = eps
        .iter()
        .map(|&e| {
            let residual = horner_vector(&r, e).norm();
            let s = horner(&g, e);
            // | sqrt(1 + s) - 1 |, without cancellation
            let norm_defect = (s / ((1.0 + s).sqrt() + 1.0)).abs();
            EpsRow {
                eps: e,
                residual,
                norm_defect,
            }
        })
        .collect();
    let equation_defect = r[..=series.order]
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    RouteVerification {
        route: series.route,
        order: series.order,
        residual_slope: fit_loglog_slope(
            &rows.iter().map(|r| (r.eps, r.residual)).collect::<Vec<_>>(),
        ),
        norm_defect_slope: fit_loglog_slope(
            &rows
                .iter()
                .map(|r| (r.eps, r.norm_defect))
                .collect::<Vec<_>>(),
        ),
        rows,
        equation_defect,
    }
}

pub fn verify(
    spec: &HamiltonianSpec,
    series: &[CorrectionSeries],
    eps: &[f64],
) -> VerificationReport {
    let mut diagnostics = Vec::new();
    if fit_loglog_slope(&eps.iter().map(|&e| (e, 1.0)).collect::<Vec<_>>()).is_none() {
        diagnostics.push(format!(
            "slopes need at least {MIN_FIT_POINTS} positive eps values spanning a decade"
        ));
    }
    let routes = series.iter().map(|s| verify_route(spec, s, eps)).collect();
    let mut deltas = Vec::new();
    for (i, a) in series.iter().enumerate() {
        for b in &series[i + 1..] {
            let both_normalised = a.route.is_normalised() && b.route.is_normalised();
            deltas.push(RouteDelta {
                a: a.route,
                b: b.route,
                energy: energy_deviation(a, b),
                vector: both_normalised.then(|| vector_deviation(a, b)),
            });
        }
    }
    VerificationReport {
        eps: eps.to_vec(),
        routes,
        deltas,
        diagnostics,
    }
}
