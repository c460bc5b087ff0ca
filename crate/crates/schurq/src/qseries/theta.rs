//! Dedekind eta and the half-characteristic Jacobi theta specialization.
//!
//! Only the specialization w = 1/2 + r*tau, tau -> d*tau is needed: it is the
//! theta factor of the modular quotient representing the distinct-parts
//! generating function. Two independent constructions are provided, the
//! bilateral sum over half-integers and the triple-product form, so each can
//! check the other.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::partitions::SchurParams;

use super::{pochhammer, PochhammerCount, QSeries};

/// eta(m*tau) as a QSeries: offset 24*m/24 = m in 1/24 units, mantissa
/// prod_{n>=1} (1 - q^(m*n)).
pub fn eta_series(scale: usize, trunc: usize) -> QSeries {
    assert!(scale >= 1, "eta scale must be positive");
    let mut series = QSeries::one(trunc);
    let mut exp = scale;
    while exp <= trunc {
        series.mul_binomial(exp, 1);
        exp += scale;
    }
    series.shift_offset24(scale as i64)
}

/// theta(1/2 + r*tau; d*tau) in product form. Writing zeta = -q^r, the
/// triple-product prefactor -i*q^(d/8)*zeta^(-1/2) collapses to
/// -q^(d/8 - r/2), and the series is
///
/// ```text
/// -q^((3d-12r)/24) * (q^d; q^d)_inf * (-q^r; q^d)_inf * (-q^(d-r); q^d)_inf
/// ```
pub fn theta_half_shift_series(params: SchurParams, trunc: usize) -> Result<QSeries> {
    let d = params.d() as usize;
    let r = params.r() as usize;
    let mut series = pochhammer(1, d, d, PochhammerCount::Infinite, trunc)?;
    let even = pochhammer(-1, r, d, PochhammerCount::Infinite, trunc)?;
    let odd = pochhammer(-1, d - r, d, PochhammerCount::Infinite, trunc)?;
    series = series.mul(&even).mul(&odd).neg();
    Ok(series.shift_offset24(3 * d as i64 - 12 * r as i64))
}

/// theta(1/2 + r*tau; d*tau) directly from the bilateral sum over
/// n in 1/2 + Z. Every summand carries the phase e^(2*pi*i*n) = -1, so the
/// series is -sum_m q^(d*m(m+1)/2 + m*r + d/8 + r/2) over integer m. The
/// minimal exponent sits at m = -1, giving offset (3d - 12r)/24.
pub fn theta_sum_series(params: SchurParams, trunc: usize) -> Result<QSeries> {
    theta_sum_series_signed(params, trunc, false)
}

/// Same bilateral sum with w replaced by -w; used to exercise the oddness
/// transformation theta(-w) = -theta(w).
#[cfg(test)]
fn theta_sum_series_neg_w(params: SchurParams, trunc: usize) -> Result<QSeries> {
    theta_sum_series_signed(params, trunc, true)
}

fn theta_sum_series_signed(params: SchurParams, trunc: usize, negate_w: bool) -> Result<QSeries> {
    let d = params.d() as i64;
    let r = params.r() as i64;
    // exponent above the offset for index m:
    //   w = +(1/2 + r tau):  d*m(m+1)/2 + (m+1)*r,  minimal at m = -1
    //   w = -(1/2 + r tau):  d*m(m+1)/2 - m*r,      minimal at m = 0
    // both sit on the same offset (3d - 12r)/24.
    let index = |m: i64| -> i64 {
        if negate_w {
            d * m * (m + 1) / 2 - m * r
        } else {
            d * m * (m + 1) / 2 + (m + 1) * r
        }
    };
    let coefficient = if negate_w { BigInt::one() } else { -BigInt::one() };
    let mut coeffs = vec![BigInt::zero(); trunc + 1];
    let start = if negate_w { 0 } else { -1 };
    // walk outward in both directions until the exponent leaves the window
    let mut m = start;
    loop {
        let k = index(m);
        if k > trunc as i64 {
            break;
        }
        debug_assert!(k >= 0);
        coeffs[k as usize] = coefficient.clone();
        m += 1;
    }
    m = start - 1;
    loop {
        let k = index(m);
        if k > trunc as i64 {
            break;
        }
        debug_assert!(k >= 0);
        coeffs[k as usize] = coefficient.clone();
        m -= 1;
    }
    Ok(QSeries::from_coeffs(3 * d - 12 * r, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(d: u32, r: u32) -> SchurParams {
        SchurParams::new(d, r).unwrap()
    }

    #[test]
    fn eta_pentagonal_coefficients() {
        let eta = eta_series(1, 12);
        assert_eq!(eta.offset24(), 1);
        assert_eq!(
            eta.coeffs()
                .iter()
                .map(|c| i64::try_from(c).unwrap())
                .collect::<Vec<_>>(),
            vec![1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]
        );
    }

    #[test]
    fn eta_scaled() {
        let eta3 = eta_series(3, 6);
        assert_eq!(eta3.offset24(), 3);
        assert_eq!(
            eta3.coeffs()
                .iter()
                .map(|c| i64::try_from(c).unwrap())
                .collect::<Vec<_>>(),
            vec![1, 0, 0, -1, 0, 0, -1]
        );
        assert_eq!(eta_series(5, 40).coeffs()[0], BigInt::one());
    }

    #[test]
    fn theta_product_offsets_and_leading_sign() {
        let t31 = theta_half_shift_series(params(3, 1), 20).unwrap();
        assert_eq!(t31.offset24(), -3);
        assert_eq!(t31.coeffs()[0], -BigInt::one());

        let t52 = theta_half_shift_series(params(5, 2), 20).unwrap();
        assert_eq!(t52.offset24(), -9);
    }

    #[test]
    fn triple_product_instance() {
        for (d, r) in [(3, 1), (5, 1), (5, 2), (7, 3)] {
            let p = params(d, r);
            let by_product = theta_half_shift_series(p, 150).unwrap();
            let by_sum = theta_sum_series(p, 150).unwrap();
            assert_eq!(by_product, by_sum, "triple product at ({d}, {r})");
        }
    }

    #[test]
    fn theta_sum_is_odd_in_w() {
        for (d, r) in [(3, 1), (5, 2)] {
            let p = params(d, r);
            let plus = theta_sum_series(p, 100).unwrap();
            let minus = theta_sum_series_neg_w(p, 100).unwrap();
            assert_eq!(minus, plus.neg(), "oddness at ({d}, {r})");
        }
    }
}
