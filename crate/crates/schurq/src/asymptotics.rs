//! Two-term Bessel asymptotics for the coefficient families, exact-series
//! convergence checks, and inequality crossover scans.
//!
//! Coefficients grow like e^(pi*sqrt(2n/3d)) and overflow any float long
//! before the default budget of n = 20000, so every exact/estimate comparison
//! happens in natural-log space: exact big integers are converted via bit
//! length plus their top bits, estimates are assembled from exponentially
//! scaled Bessel values.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::identities::{series_c_bilateral, series_e_product};
use crate::partitions::SchurParams;
use crate::qseries::ComplexNumericValue;

/// Default cap on exact series builds; big enough for every check in the
/// suite, small enough to stay in the minutes range.
pub const DEFAULT_BUDGET: usize = 20_000;

/// Which coefficient family: B has unrestricted smallest part, C requires the
/// smallest part to exceed d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    B,
    C,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            other => Err(Error::InvalidParams(format!(
                "unknown family {other:?}, expected B or C"
            ))),
        }
    }
}

/// A positive quantity carried as its natural log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogMagnitude {
    pub ln: f64,
}

impl LogMagnitude {
    pub fn from_ln(ln: f64) -> Self {
        assert!(ln.is_finite(), "log magnitude must be finite");
        LogMagnitude { ln }
    }

    /// Mantissa/exponent rendering in base 10.
    pub fn mantissa_exp10(&self) -> (f64, i64) {
        let log10 = self.ln / std::f64::consts::LN_10;
        let exp10 = log10.floor() as i64;
        let mantissa = 10f64.powf(log10 - exp10 as f64);
        (mantissa, exp10)
    }
}

impl std::fmt::Display for LogMagnitude {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (m, e) = self.mantissa_exp10();
        write!(f, "{m:.6}e{e}")
    }
}

/// Natural log of a positive big integer, from the bit length and the top
/// 53 bits; exact to f64 resolution at any size.
pub fn log_big(c: &BigInt) -> f64 {
    assert!(c.is_positive(), "log of a non-positive integer");
    let bits = c.bits();
    if bits <= 53 {
        return c.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 53;
    let top = (c >> shift).to_f64().expect("53 bits fit");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// The eight expansion constants: alpha/beta are the Bessel-term weights for
/// the coefficient expansions, the primed set the Taylor data of the scaled
/// generating functions near q = 1. They are linked by
/// alpha_j = pi/sqrt(6d) * alpha'_j and beta_j = pi^2/(6d) * beta'_j(r),
/// and beta'_2 = 2d/27 + beta'_1/3.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AsymptoticConstants {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub alpha_p1: f64,
    pub alpha_p2: f64,
    pub beta_p1: f64,
    pub beta_p2: f64,
}

pub fn constants(params: SchurParams) -> AsymptoticConstants {
    let d = params.d() as f64;
    let r = params.r() as f64;
    let pi = std::f64::consts::PI;
    let alpha_p1 = 1.0;
    let alpha_p2 = 1.0 / 3.0;
    let beta_p1 = d / 12.0 - r / 2.0 + r * r / (2.0 * d);
    let beta_p2 = 11.0 * d / 108.0 - r / 6.0 + r * r / (6.0 * d);
    let scale = pi * pi / (6.0 * d);
    AsymptoticConstants {
        alpha1: pi / (6.0 * d).sqrt() * alpha_p1,
        alpha2: pi / (6.0 * d).sqrt() * alpha_p2,
        beta1: scale * beta_p1,
        beta2: scale * beta_p2,
        alpha_p1,
        alpha_p2,
        beta_p1,
        beta_p2,
    }
}

/// Modified Bessel function I_s(x) for integer order (I_{-s} = I_s), by
/// direct power-series summation with terms added until below 1e-17
/// relative. Safe for x into the hundreds; for large x prefer the scaled
/// variant.
pub fn bessel_i(order: i32, x: f64) -> f64 {
    bessel_series(order.unsigned_abs(), x, 0.0)
}

/// Exponentially scaled modified Bessel function e^(-x) I_s(x).
pub fn bessel_i_scaled(order: i32, x: f64) -> f64 {
    bessel_series(order.unsigned_abs(), x, -x)
}

fn bessel_series(s: u32, x: f64, ln_scale: f64) -> f64 {
    assert!(x >= 0.0, "negative argument");
    if x == 0.0 {
        return if s == 0 { ln_scale.exp() } else { 0.0 };
    }
    let half = x / 2.0;
    // t_0 = (x/2)^s / s! times the scale, assembled in log space so neither
    // large x nor the scale can overflow the first term
    let mut ln_t0 = s as f64 * half.ln() + ln_scale;
    for k in 1..=s {
        ln_t0 -= (k as f64).ln();
    }
    let mut term = ln_t0.exp();
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= half * half / (k as f64 * (k + s) as f64);
        sum += term;
        if term < 1e-17 * sum {
            return sum;
        }
        assert!(k < 100_000, "Bessel series failed to converge");
    }
}

/// Asymptotic estimate of a coefficient in log space.
///
/// `terms = 1` uses the closed form e^(pi*sqrt(2n/3d)) / (2^(5/4) 3^(1/4)
/// d^(1/4) n^(3/4)), with the C family exactly one third of B. `terms = 2`
/// uses the two-term Bessel expansion
/// alpha * n^(-1/2) I_1(X) + beta * n^(-1) I_2(X) with X = pi*sqrt(2n/3d).
/// For small n the second term can drive the two-term form negative; that is
/// reported as an error rather than hidden.
pub fn estimate_coefficient(
    family: Family,
    params: SchurParams,
    n: u64,
    terms: u32,
) -> Result<LogMagnitude> {
    if n == 0 {
        return Err(Error::InvalidParams("estimates require n >= 1".into()));
    }
    let d = params.d() as f64;
    let nf = n as f64;
    let x = std::f64::consts::PI * (2.0 * nf / (3.0 * d)).sqrt();
    match terms {
        1 => {
            let ln = x
                - 1.25 * 2f64.ln()
                - 0.25 * 3f64.ln()
                - 0.25 * d.ln()
                - 0.75 * nf.ln()
                - if family == Family::C { 3f64.ln() } else { 0.0 };
            Ok(LogMagnitude::from_ln(ln))
        }
        2 => {
            let c = constants(params);
            let (alpha, beta) = match family {
                Family::B => (c.alpha1, c.beta1),
                Family::C => (c.alpha2, c.beta2),
            };
            let i1 = bessel_i_scaled(1, x);
            let i2 = bessel_i_scaled(2, x);
            let inner = alpha / nf.sqrt() * i1 + beta / nf * i2;
            if inner <= 0.0 {
                return Err(Error::NonPositiveEstimate { n });
            }
            Ok(LogMagnitude::from_ln(x + inner.ln()))
        }
        other => Err(Error::InvalidParams(format!(
            "terms must be 1 or 2, got {other}"
        ))),
    }
}

/// Exact coefficients c(0..=n_max) of the chosen family, built from the
/// generating-function series. Builds beyond the budget are rejected.
pub fn exact_coefficients(
    family: Family,
    params: SchurParams,
    n_max: usize,
    budget: usize,
) -> Result<Vec<BigInt>> {
    if n_max > budget {
        return Err(Error::BudgetExceeded {
            requested: n_max,
            budget,
        });
    }
    let series = match family {
        Family::B => series_e_product(params, n_max),
        Family::C => series_c_bilateral(params, n_max),
    };
    Ok(series.coeffs().to_vec())
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvergenceRow {
    pub n: u64,
    pub exact_log: f64,
    pub estimate_log: f64,
    /// exact / estimate
    pub ratio: f64,
}

/// Exact-versus-estimate table over the given n values, in log space.
pub fn convergence_report(
    family: Family,
    params: SchurParams,
    n_list: &[u64],
    terms: u32,
    budget: usize,
) -> Result<Vec<ConvergenceRow>> {
    let n_max = *n_list
        .iter()
        .max()
        .ok_or_else(|| Error::InvalidParams("convergence report needs at least one n".into()))?
        as usize;
    let exact = exact_coefficients(family, params, n_max, budget)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let c = &exact[n as usize];
        if !c.is_positive() {
            return Err(Error::InvalidParams(format!(
                "coefficient at n = {n} is not positive; no log-space ratio"
            )));
        }
        let exact_log = log_big(c);
        let estimate_log = estimate_coefficient(family, params, n, terms)?.ln;
        rows.push(ConvergenceRow {
            n,
            exact_log,
            estimate_log,
            ratio: (exact_log - estimate_log).exp(),
        });
    }
    Ok(rows)
}

/// Least N0 such that the `b` coefficients strictly dominate the `a`
/// coefficients on all of [N0, n_max]; None when the inequality has not
/// stabilized by n_max (in particular for identical parameters, where strict
/// inequality never holds).
pub fn crossover(
    a: SchurParams,
    b: SchurParams,
    family: Family,
    n_max: usize,
    budget: usize,
) -> Result<Option<u64>> {
    let ca = exact_coefficients(family, a, n_max, budget)?;
    let cb = exact_coefficients(family, b, n_max, budget)?;
    let mut last_violation: Option<usize> = None;
    for n in (0..=n_max).rev() {
        if cb[n] <= ca[n] {
            last_violation = Some(n);
            break;
        }
    }
    match last_violation {
        None => Ok(Some(0)),
        Some(v) if v == n_max => Ok(None),
        Some(v) => Ok(Some((v + 1) as u64)),
    }
}

/// Evaluate the chosen generating function at q = e^(-z) near the q = 1 cusp.
/// The truncation is auto-chosen from the growth/decay crossover
/// (pi*sqrt(2/(3d)) / Re z)^2 with a factor-4 margin, then the realized tail
/// bound is verified against `tol` by the evaluator itself.
pub fn eval_f_near_one(
    family: Family,
    params: SchurParams,
    z: Complex64,
    tol: f64,
) -> Result<ComplexNumericValue> {
    if z.re <= 0.0 {
        return Err(Error::EvalPointNotDecaying(z.re));
    }
    let d = params.d() as f64;
    let a = std::f64::consts::PI * (2.0 / (3.0 * d)).sqrt();
    let saddle = (a / z.re) * (a / z.re);
    let trunc = ((4.0 * saddle).ceil() as usize).max(64);
    let series = match family {
        Family::B => series_e_product(params, trunc),
        Family::C => series_c_bilateral(params, trunc),
    };
    series.eval_complex(z, tol)
}

/// Numeric check of the Taylor data of
/// G(q) = sum_n q^(dn(n+1)) / ((-q^r, -q^(d-r); q^d)_{n+1}) near q = 1:
/// the value tends to 1/3 and the z-derivative to 2d/27 (q = e^(-z)).
#[derive(Debug, Clone, Serialize)]
pub struct GExpansionReport {
    pub z_list: Vec<f64>,
    pub fitted_value: f64,
    pub fitted_derivative: f64,
    pub target_value: f64,
    pub target_derivative: f64,
    pub value_error: f64,
    pub derivative_rel_error: f64,
}

/// Evaluate G at each grid point and fit a polynomial of degree
/// len(z_list) - 1 through the samples (Richardson extrapolation; order 2 on
/// the default three-point grid). The fitted constant and slope approximate
/// G(0) and G'(0) with the O(z^2) contamination cancelled.
pub fn check_g_expansion(params: SchurParams, z_list: &[f64]) -> Result<GExpansionReport> {
    if z_list.len() < 2 {
        return Err(Error::InvalidParams(
            "need at least two z samples to fit a slope".into(),
        ));
    }
    if z_list.iter().any(|&z| z <= 0.0) {
        return Err(Error::InvalidParams("z samples must be positive".into()));
    }
    let values: Vec<f64> = z_list.iter().map(|&z| g_value(params, z)).collect();
    let coeffs = polyfit(z_list, &values);
    let d = params.d() as f64;
    let target_value = 1.0 / 3.0;
    let target_derivative = 2.0 * d / 27.0;
    Ok(GExpansionReport {
        z_list: z_list.to_vec(),
        fitted_value: coeffs[0],
        fitted_derivative: coeffs[1],
        target_value,
        target_derivative,
        value_error: (coeffs[0] - target_value).abs(),
        derivative_rel_error: ((coeffs[1] - target_derivative) / target_derivative).abs(),
    })
}

/// G(e^(-z)) by direct numeric summation; the q^(dn(n+1)) factor makes the
/// series converge after a handful of terms for any z > 0.
fn g_value(params: SchurParams, z: f64) -> f64 {
    let d = params.d() as f64;
    let r = params.r() as f64;
    let q = (-z).exp();
    let mut denom = 1.0f64;
    let mut acc = 0.0f64;
    for n in 0..10_000 {
        let nf = n as f64;
        denom *= (1.0 + q.powf(r + d * nf)) * (1.0 + q.powf(d - r + d * nf));
        let term = q.powf(d * nf * (nf + 1.0)) / denom;
        acc += term;
        if term < 1e-17 * acc {
            break;
        }
    }
    acc
}

/// Interpolating polynomial coefficients (ascending) through (x_i, y_i), by
/// Gaussian elimination on the Vandermonde system; grids here have at most a
/// handful of points.
fn polyfit(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let m = xs.len();
    let mut a = vec![vec![0.0f64; m + 1]; m];
    for (row, (&x, &y)) in a.iter_mut().zip(xs.iter().zip(ys)) {
        let mut p = 1.0;
        for cell in row.iter_mut().take(m) {
            *cell = p;
            p *= x;
        }
        row[m] = y;
    }
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("nonempty");
        a.swap(col, pivot);
        let p = a[col][col];
        assert!(p.abs() > 0.0, "degenerate grid");
        for row in 0..m {
            if row != col {
                let f = a[row][col] / p;
                let pivot_row = a[col].clone();
                for (cell, pv) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                    *cell -= f * pv;
                }
            }
        }
    }
    (0..m).map(|i| a[i][m] / a[i][i]).collect()
}
