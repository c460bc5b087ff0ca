//! Numeric evaluation of truncated series with quantified tail bounds.
//!
//! Evaluation is Horner-style in f64 (or Complex64 for q = e^(-z)). Every
//! result carries a tail bound obtained by geometric extrapolation: with
//! rho the largest ratio of consecutive nonzero coefficient magnitudes over
//! the trailing window, the discarded tail is bounded by
//! |c_N| * q0^(N+1) / (1 - rho*q0) provided rho*q0 < 1. The clamp is a
//! checked precondition; the coefficient families in scope grow like
//! e^(c*sqrt(n)), so it holds whenever the truncation is adequate. A zero
//! final coefficient is taken to mean the series terminates, which reports a
//! zero tail for exact polynomials.
//!
//! An exact high-precision mode evaluates integral series at rational points
//! with big-rational arithmetic and renders any number of decimal digits.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

use super::{big_to_f64_abs, QSeries};

/// A numeric evaluation result together with a bound on the truncation error.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NumericValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// Complex evaluation result with a bound on the truncation error (modulus).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexNumericValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

const RATIO_WINDOW: usize = 20;

/// Per-step growth ratio of the coefficient envelope over the trailing
/// window: the window is split in half and rho is the half-to-half ratio of
/// peak magnitudes, taken per index. For the monotone counting families this
/// equals the consecutive-coefficient ratio; for sign- or
/// magnitude-oscillating series (mock theta coefficients) raw pairwise
/// ratios spike on local dips and would spuriously trip the clamp, while the
/// envelope tracks the actual e^(c*sqrt(n)) growth. Returns 1.0 when either
/// half is all zeros.
fn trailing_ratio(series: &QSeries) -> f64 {
    let coeffs = series.coeffs();
    let n = coeffs.len();
    let window = RATIO_WINDOW.min(n);
    let half = (window / 2).max(1);
    let peak = |range: std::ops::Range<usize>| -> f64 {
        coeffs[range].iter().map(big_to_f64_abs).fold(0.0, f64::max)
    };
    let hi = peak(n - half..n);
    let lo = peak(n.saturating_sub(2 * half)..n - half);
    if hi == 0.0 || lo == 0.0 {
        return 1.0;
    }
    (hi / lo).powf(1.0 / half as f64)
}

fn tail_bound_at(series: &QSeries, modulus: f64) -> Result<f64> {
    let rho = trailing_ratio(series);
    if rho * modulus >= 1.0 {
        return Err(Error::TailClampFailed(rho * modulus));
    }
    let n = series.trunc();
    let c_last = big_to_f64_abs(&series.coeffs()[n]);
    Ok(c_last * modulus.powi(n as i32 + 1) / (1.0 - rho * modulus))
}

impl QSeries {
    /// Evaluate at a real point 0 < q0 < 1. Fractional offsets are applied by
    /// real exponentiation of q0.
    pub fn eval_real(&self, q0: f64) -> Result<NumericValue> {
        if !(q0 > 0.0 && q0 < 1.0) {
            return Err(Error::EvalPointOutOfRange(q0));
        }
        let tail = tail_bound_at(self, q0)?;
        let mut acc = 0.0f64;
        for c in self.coeffs().iter().rev() {
            acc = acc * q0 + big_to_f64(c);
        }
        let prefactor = q0.powf(self.offset24() as f64 / 24.0);
        Ok(NumericValue {
            value: acc * prefactor,
            tail_bound: tail * prefactor,
        })
    }

    /// Evaluate at q = e^(-z) with Re z > 0. The estimated tail must come in
    /// under `tol`, otherwise the evaluation is rejected along with an
    /// estimate of the truncation that would suffice.
    pub fn eval_complex(&self, z: Complex64, tol: f64) -> Result<ComplexNumericValue> {
        if z.re <= 0.0 {
            return Err(Error::EvalPointNotDecaying(z.re));
        }
        let modulus = (-z.re).exp();
        let prefactor_mod = modulus.powf(self.offset24() as f64 / 24.0);
        let tail = tail_bound_at(self, modulus)? * prefactor_mod;
        if tail > tol {
            let required = required_trunc_estimate(self, modulus, tol / prefactor_mod.max(1e-300));
            return Err(Error::ToleranceUnreachable {
                tol,
                trunc: self.trunc(),
                tail,
                required,
            });
        }
        let q = (-z).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs().iter().rev() {
            acc = acc * q + big_to_f64(c);
        }
        // q^(offset/24) on the principal branch of e^(-z*offset/24)
        let prefactor = (-z * (self.offset24() as f64 / 24.0)).exp();
        Ok(ComplexNumericValue {
            value: acc * prefactor,
            tail_bound: tail,
        })
    }

    /// Exact evaluation of an integral series at the rational point p/q,
    /// rendered to `digits` significant decimal digits (>= 50 available).
    /// This is the high-precision mode: no floating-point rounding enters the
    /// value; only the reported tail bound is estimated in f64.
    pub fn eval_real_decimal(&self, num: u64, den: u64, digits: usize) -> Result<(String, f64)> {
        if num == 0 || num >= den {
            return Err(Error::EvalPointOutOfRange(num as f64 / den as f64));
        }
        if !self.is_integral() {
            return Err(Error::InvalidParams(
                "high-precision evaluation requires an integral series (offset divisible by 24)"
                    .into(),
            ));
        }
        let whole_offset = self.offset24() / 24;
        let q0 = num as f64 / den as f64;
        let tail = tail_bound_at(self, q0)? * q0.powi(whole_offset as i32);

        // Horner with the denominator q^N cleared: A = sum_k c_k p^k q^(N-k).
        let n = self.trunc();
        let p = BigInt::from(num);
        let q = BigInt::from(den);
        let mut acc = self.coeffs()[n].clone();
        let mut qpow = BigInt::from(1u32);
        for k in (0..n).rev() {
            qpow *= &q;
            acc = acc * &p + &self.coeffs()[k] * &qpow;
        }
        // value = A / q^N * (p/q)^whole_offset
        let (numer, denom) = if whole_offset >= 0 {
            (
                acc * p.pow(whole_offset as u32),
                q.pow(n as u32 + whole_offset as u32),
            )
        } else {
            let m = (-whole_offset) as u32;
            (acc * q.pow(m), q.pow(n as u32) * p.pow(m))
        };
        Ok((render_decimal(&numer, &denom, digits), tail))
    }
}

/// Render numer/denom (denom > 0) to `digits` significant decimal digits in
/// scientific notation, rounding half away from zero.
fn render_decimal(numer: &BigInt, denom: &BigInt, digits: usize) -> String {
    use num_traits::One;
    assert!(digits >= 1 && denom.is_positive());
    if numer.is_zero() {
        return "0".to_string();
    }
    let negative = numer.is_negative();
    let numer_abs = numer.abs();
    // scaled = |numer| * 10^P / denom with headroom for rounding
    let p = digits + 2;
    let scaled: BigInt = numer_abs * BigInt::from(10u32).pow(p as u32) / denom;
    let s = scaled.to_string();
    // value = scaled * 10^(-P); significant digits are the leading ones
    let exp10 = s.len() as i64 - 1 - p as i64;
    let (mut mantissa, rest) = if s.len() > digits {
        (s[..digits].to_string(), &s[digits..])
    } else {
        (s.clone(), "")
    };
    let round_up = rest.chars().next().is_some_and(|c| c >= '5');
    if round_up {
        let bumped = mantissa.parse::<BigUint>().unwrap() + BigUint::one();
        let bs = bumped.to_string();
        if bs.len() > mantissa.len() {
            // carried all the way: 999.. -> 100.., exponent moves by one
            return format_scientific(negative, &bs[..digits.min(bs.len())], exp10 + 1);
        }
        mantissa = bs;
    }
    format_scientific(negative, &mantissa, exp10)
}

fn format_scientific(negative: bool, mantissa: &str, exp10: i64) -> String {
    let sign = if negative { "-" } else { "" };
    if mantissa.len() == 1 {
        format!("{sign}{mantissa}e{exp10}")
    } else {
        format!("{sign}{}.{}e{exp10}", &mantissa[..1], &mantissa[1..])
    }
}

fn big_to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        if c.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Crude estimate of the truncation needed for the tail to fall below tol at
/// the given modulus, extrapolating the trailing growth ratio.
fn required_trunc_estimate(series: &QSeries, modulus: f64, tol: f64) -> usize {
    let rho = trailing_ratio(series);
    let n = series.trunc();
    let c_last = big_to_f64_abs(&series.coeffs()[n]).max(1.0);
    let per_step = (rho * modulus).ln(); // < 0 when clamp holds
    if per_step >= 0.0 {
        return usize::MAX;
    }
    let current = c_last.ln() + (n as f64 + 1.0) * modulus.ln();
    let deficit = tol.ln() - current;
    if deficit >= 0.0 {
        return n;
    }
    n + (deficit / per_step).ceil() as usize
}

/// Jacobi theta from its defining bilateral sum, numerically:
///
/// ```text
/// theta(w; tau) = sum_{n in 1/2 + Z} e^(pi*i*n^2*tau + 2*pi*i*n*(w + 1/2))
/// ```
///
/// Requires Im tau > 0. Terms decay like e^(-pi*n^2*Im tau); summation stops
/// once the remaining terms are bounded below 1e-30 relative headroom, and
/// the discarded tail bound is reported.
pub fn theta_point(w: Complex64, tau: Complex64) -> Result<ComplexNumericValue> {
    if tau.im <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "theta requires Im tau > 0, got {}",
            tau.im
        )));
    }
    let i = Complex64::I;
    let pi = std::f64::consts::PI;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut m = 0i64;
    let term_at = |half_n: f64| -> Complex64 {
        (i * pi * half_n * half_n * tau + 2.0 * pi * i * half_n * (w + 0.5)).exp()
    };
    // |term| = e^(-pi n^2 Im tau - 2 pi n Im w); grows at most like e^(c|n|),
    // so the quadratic decay always wins.
    let mut last_mag = f64::INFINITY;
    loop {
        let n_pos = m as f64 + 0.5;
        let n_neg = -n_pos;
        let t1 = term_at(n_pos);
        let t2 = term_at(n_neg);
        sum += t1 + t2;
        let mag = t1.norm().max(t2.norm());
        if mag < 1e-30 && mag < last_mag {
            // next |n| increases the quadratic exponent further; bound the
            // tail by a geometric series with ratio of the last two shells
            let ratio = (mag / last_mag).min(0.5);
            let tail = 2.0 * mag * ratio / (1.0 - ratio);
            return Ok(ComplexNumericValue {
                value: sum,
                tail_bound: tail,
            });
        }
        last_mag = mag;
        m += 1;
        if m > 10_000 {
            return Err(Error::InvalidParams(
                "theta summation did not converge within 10000 shells".into(),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{pochhammer, PochhammerCount};

    #[test]
    fn polynomial_evaluates_exactly() {
        let a = QSeries::from_i64_coeffs(0, &[1, -1, 0, 0, 0, 0]); // 1 - q, trunc 5
        let v = a.eval_real(0.5).unwrap();
        assert_eq!(v.value, 0.5);
        assert_eq!(v.tail_bound, 0.0);
    }

    #[test]
    fn geometric_partial_sum() {
        let ones = QSeries::from_coeffs(0, vec![BigInt::from(1); 51]);
        let v = ones.eval_real(0.5).unwrap();
        let exact_partial = 2.0 - 2.0 * 0.5f64.powi(51);
        assert!((v.value - exact_partial).abs() < 1e-15);
        // the true remainder is 0.5^50; the geometric bound reproduces it
        assert!((v.tail_bound - 0.5f64.powi(50)).abs() < 1e-17);
        assert!((v.value + v.tail_bound - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_points_and_failed_clamp() {
        let a = QSeries::one(4);
        assert!(a.eval_real(0.0).is_err());
        assert!(a.eval_real(1.0).is_err());
        // coefficients doubling every step: rho = 2, clamp fails at q0 = 0.6
        let grow = QSeries::from_i64_coeffs(0, &[1, 2, 4, 8, 16, 32]);
        assert!(matches!(
            grow.eval_real(0.6),
            Err(Error::TailClampFailed(_))
        ));
        assert!(grow.eval_real(0.4).is_ok());
    }

    #[test]
    fn distinct_parts_product_evaluation() {
        // E_{3,1} as a series vs the direct numeric product at q0 = 0.9
        let e31 = pochhammer(-1, 1, 3, PochhammerCount::Infinite, 2000)
            .unwrap()
            .mul(&pochhammer(-1, 2, 3, PochhammerCount::Infinite, 2000).unwrap());
        let v = e31.eval_real(0.9).unwrap();
        assert!(v.tail_bound < 1e-6, "tail bound {} too large", v.tail_bound);
        let mut direct = 1.0f64;
        for n in 0.. {
            let f1 = 0.9f64.powi(1 + 3 * n);
            let f2 = 0.9f64.powi(2 + 3 * n);
            if f1 < 1e-18 {
                break;
            }
            direct *= (1.0 + f1) * (1.0 + f2);
        }
        assert!(
            (v.value - direct).abs() <= v.tail_bound + 1e-9 * direct,
            "series {} vs product {}",
            v.value,
            direct
        );
    }

    #[test]
    fn complex_agrees_with_real_on_the_axis() {
        let ones = QSeries::from_coeffs(0, vec![BigInt::from(1); 101]);
        let z = Complex64::new(std::f64::consts::LN_2, 0.0);
        let c = ones.eval_complex(z, 1e-9).unwrap();
        let r = ones.eval_real(0.5).unwrap();
        assert!((c.value.re - r.value).abs() < 1e-12);
        assert!(c.value.im.abs() < 1e-12);
        assert_eq!(QSeries::one(3).eval_complex(Complex64::new(2.0, 5.0), 1e-12).unwrap().value,
                   Complex64::new(1.0, 0.0));
    }

    #[test]
    fn complex_rejects_unreachable_tolerance() {
        let ones = QSeries::from_coeffs(0, vec![BigInt::from(1); 11]);
        let z = Complex64::new(0.01, 0.0);
        match ones.eval_complex(z, 1e-12) {
            Err(Error::ToleranceUnreachable { required, .. }) => {
                assert!(required > 10, "required trunc estimate {required}");
            }
            other => panic!("expected ToleranceUnreachable, got {other:?}"),
        }
    }

    #[test]
    fn high_precision_geometric_series() {
        // sum_{k=0..60} (1/2)^k = 2 - 2^(-60) exactly; the decimal expansion
        // of 2^(-60) terminates, so every rendered digit is checkable
        let ones = QSeries::from_coeffs(0, vec![BigInt::from(1); 61]);
        let (rendered, _) = ones.eval_real_decimal(1, 2, 55).unwrap();
        assert!(
            rendered.starts_with("1.999999999999999999132638262011596452794"),
            "{rendered}"
        );
        assert!(rendered.ends_with("e0"), "{rendered}");
    }

    #[test]
    fn high_precision_requires_integral_offset() {
        let eta_like = QSeries::from_i64_coeffs(1, &[1, -1]);
        assert!(eta_like.eval_real_decimal(1, 2, 30).is_err());
    }

    #[test]
    fn theta_point_converges() {
        let tau = Complex64::new(0.0, 1.0);
        let w = Complex64::new(0.3, 0.0);
        let v = theta_point(w, tau).unwrap();
        assert!(v.tail_bound < 1e-25);
        assert!(v.value.norm() > 0.0);
        // oddness: theta(-w) = -theta(w)
        let vm = theta_point(-w, tau).unwrap();
        assert!((vm.value + v.value).norm() < 1e-14);
        assert!(theta_point(w, Complex64::new(1.0, -0.5)).is_err());
    }
}
