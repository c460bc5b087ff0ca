//! Truncated formal power series in q with exact big-integer coefficients.
//!
//! This module provides:
//! - [`QSeries`]: dense truncated series with a global exponent offset in
//!   units of 1/24 of a power of q
//! - [`pochhammer`]: q-Pochhammer products (sign*q^k; q^m)_count, finite or infinite
//! - [`eta_series`], [`theta_half_shift_series`], [`theta_sum_series`]: the
//!   eta function and the half-characteristic theta specialization (in `theta`)
//! - numeric evaluation at real and complex points with quantified tail
//!   bounds (in `eval`)
//!
//! The offset lattice: a series stores coefficients c_0, ..., c_N where c_k is
//! the exact coefficient of q^(offset24/24 + k). Every fractional exponent in
//! scope (q^(1/24), q^(d/8), q^(-d/12 + r/2), q^(-r/2)) is a multiple of 1/24,
//! so a single integer offset suffices. Coefficients below the offset are
//! exactly zero; coefficients above the truncation are unknown.

mod eval;
mod theta;

pub use eval::{ComplexNumericValue, NumericValue, theta_point};
pub use theta::{eta_series, theta_half_shift_series, theta_sum_series};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A truncated formal power series with exact integer coefficients and a
/// global exponent offset in units of 1/24.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    offset24: i64,
    coeffs: Vec<BigInt>,
}

impl QSeries {
    /// Build a series from raw coefficients; `coeffs[k]` is the coefficient of
    /// q^(offset24/24 + k). Panics on an empty coefficient list.
    pub fn from_coeffs(offset24: i64, coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a QSeries stores at least the constant term");
        QSeries { offset24, coeffs }
    }

    pub fn from_i64_coeffs(offset24: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(offset24, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The constant series 1, truncated at q^trunc.
    pub fn one(trunc: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); trunc + 1];
        coeffs[0] = BigInt::one();
        QSeries { offset24: 0, coeffs }
    }

    /// The zero series (all stored coefficients zero, offset 0).
    pub fn zero(trunc: usize) -> Self {
        QSeries {
            offset24: 0,
            coeffs: vec![BigInt::zero(); trunc + 1],
        }
    }

    /// q^(offset24/24) truncated at `trunc` powers above the offset.
    pub fn monomial24(offset24: i64, trunc: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); trunc + 1];
        coeffs[0] = BigInt::one();
        QSeries { offset24, coeffs }
    }

    pub fn offset24(&self) -> i64 {
        self.offset24
    }

    /// Truncation order N: coefficients are known for exponents
    /// offset24/24 + k with 0 <= k <= N.
    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// True iff the offset is a whole power of q.
    pub fn is_integral(&self) -> bool {
        self.offset24.rem_euclid(24) == 0
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Exact coefficient of q^n for a whole exponent n.
    pub fn coefficient(&self, n: i64) -> Result<BigInt> {
        self.coefficient_at24(24 * n)
    }

    /// Exact coefficient of q^(e24/24).
    pub fn coefficient_at24(&self, e24: i64) -> Result<BigInt> {
        let rel = e24 - self.offset24;
        let hi24 = self.offset24 + 24 * self.trunc() as i64;
        if rel.rem_euclid(24) != 0 || rel < 0 || e24 > hi24 {
            return Err(Error::ExponentOutOfRange {
                exponent24: e24,
                lo24: self.offset24,
                hi24,
            });
        }
        Ok(self.coeffs[(rel / 24) as usize].clone())
    }

    /// Product of two series. Offsets add; the result carries the coarser of
    /// the two truncations (no coefficient beyond it would be exact).
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let trunc = self.trunc().min(other.trunc());
        let mut coeffs = vec![BigInt::zero(); trunc + 1];
        // Schoolbook convolution; the factor builders below avoid this path
        // for binomial factors, so quadratic cost only arises for genuinely
        // dense operands.
        for (i, a) in self.coeffs.iter().enumerate().take(trunc + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(trunc + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QSeries {
            offset24: self.offset24 + other.offset24,
            coeffs,
        }
    }

    /// Multiplicative inverse to the same truncation. Requires constant term
    /// +1 or -1; coefficients of the inverse are then exact integers.
    pub fn inverse(&self) -> Result<QSeries> {
        let c0 = &self.coeffs[0];
        if !(c0 == &BigInt::one() || c0 == &(-BigInt::one())) {
            return Err(Error::NonUnitConstant {
                found: c0.to_string(),
            });
        }
        let n = self.trunc();
        let mut inv = vec![BigInt::zero(); n + 1];
        inv[0] = c0.clone(); // 1/(+1) = +1, 1/(-1) = -1
        for k in 1..=n {
            let mut acc = BigInt::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !inv[k - j].is_zero() {
                    acc += &self.coeffs[j] * &inv[k - j];
                }
            }
            // c0 * inv[k] + acc = 0, and 1/c0 = c0 for a unit.
            inv[k] = -(c0 * acc);
        }
        Ok(QSeries {
            offset24: -self.offset24,
            coeffs: inv,
        })
    }

    fn aligned_pair(&self, other: &QSeries) -> Result<(i64, usize, usize, usize)> {
        if (self.offset24 - other.offset24).rem_euclid(24) != 0 {
            return Err(Error::IncomparableOffsets {
                a24: self.offset24,
                b24: other.offset24,
            });
        }
        let offset = self.offset24.min(other.offset24);
        let shift_a = ((self.offset24 - offset) / 24) as usize;
        let shift_b = ((other.offset24 - offset) / 24) as usize;
        let top = (self.trunc() + shift_a).min(other.trunc() + shift_b);
        Ok((offset, shift_a, shift_b, top))
    }

    /// Sum after offset alignment. The result is truncated at the coarsest
    /// exponent both operands know.
    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        let (offset, shift_a, shift_b, top) = self.aligned_pair(other)?;
        let mut coeffs = vec![BigInt::zero(); top + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if k + shift_a <= top {
                coeffs[k + shift_a] += c;
            }
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            if k + shift_b <= top {
                coeffs[k + shift_b] += c;
            }
        }
        Ok(QSeries { offset24: offset, coeffs })
    }

    pub fn sub(&self, other: &QSeries) -> Result<QSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            offset24: self.offset24,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Exact multiplication by q^(delta24/24), tracked in the offset.
    pub fn shift_offset24(&self, delta24: i64) -> QSeries {
        QSeries {
            offset24: self.offset24 + delta24,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Multiplication by q^j realized as an index shift at fixed offset and
    /// truncation; coefficients pushed beyond the truncation are dropped
    /// (they were only known up to it anyway).
    pub fn shift_up(&self, j: usize) -> QSeries {
        let n = self.trunc();
        let mut coeffs = vec![BigInt::zero(); n + 1];
        if j <= n {
            coeffs[j..].clone_from_slice(&self.coeffs[..=n - j]);
        }
        QSeries {
            offset24: self.offset24,
            coeffs,
        }
    }

    /// In-place multiplication by the binomial (1 - sign * q^exp).
    /// Costs O(trunc - exp) big-integer operations. A factor with exp beyond
    /// the truncation is 1 to working precision and is skipped.
    pub fn mul_binomial(&mut self, exp: usize, sign: i8) {
        debug_assert!(sign == 1 || sign == -1);
        let n = self.trunc();
        if exp == 0 {
            // (1 - sign) is 0 or 2
            let factor = BigInt::from(1 - sign as i64);
            for c in &mut self.coeffs {
                *c *= &factor;
            }
            return;
        }
        if exp > n {
            return;
        }
        for i in (exp..=n).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            if sign == 1 {
                hi[0] -= &lo[i - exp];
            } else {
                hi[0] += &lo[i - exp];
            }
        }
    }

    /// In-place division by the binomial (1 - sign * q^exp), i.e.
    /// multiplication by the geometric series it inverts. Exact for any
    /// integer series since the binomial has unit constant term.
    pub fn div_binomial(&mut self, exp: usize, sign: i8) {
        debug_assert!(sign == 1 || sign == -1);
        assert!(exp > 0, "cannot divide by (1 - sign*q^0)");
        let n = self.trunc();
        if exp > n {
            return;
        }
        for i in exp..=n {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            if sign == 1 {
                hi[0] += &lo[i - exp];
            } else {
                hi[0] -= &lo[i - exp];
            }
        }
    }

    /// Restrict to a smaller truncation.
    pub fn truncated(&self, new_trunc: usize) -> QSeries {
        assert!(new_trunc <= self.trunc());
        QSeries {
            offset24: self.offset24,
            coeffs: self.coeffs[..=new_trunc].to_vec(),
        }
    }

    /// Largest stored index with a nonzero coefficient, if any.
    pub fn last_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }
}

pub(crate) fn big_to_f64_abs(c: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    c.abs().to_f64().unwrap_or(f64::INFINITY)
}

/// Order of a q-Pochhammer product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochhammerCount {
    Finite(usize),
    /// Infinite product; factors above the truncation cannot affect stored
    /// coefficients and are omitted.
    Infinite,
}

/// The q-Pochhammer symbol (sign*q^k; q^m)_count as a QSeries, truncated at
/// q^trunc. `sign` is +1 or -1; each factor is (1 - sign*q^(k + j*m)).
///
/// An infinite product requires k >= 1 so that the factors stabilize.
pub fn pochhammer(
    sign: i8,
    k: usize,
    step: usize,
    count: PochhammerCount,
    trunc: usize,
) -> Result<QSeries> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidParams(format!("sign must be +1 or -1, got {sign}")));
    }
    if step == 0 {
        return Err(Error::InvalidParams("pochhammer step must be positive".into()));
    }
    if count == PochhammerCount::Infinite && k == 0 {
        return Err(Error::DivergentProduct);
    }
    let mut series = QSeries::one(trunc);
    let limit = match count {
        PochhammerCount::Finite(n) => n,
        PochhammerCount::Infinite => usize::MAX,
    };
    let mut exp = k;
    for _ in 0..limit {
        if exp > trunc {
            // every remaining factor is 1 to working precision
            break;
        }
        series.mul_binomial(exp, sign);
        exp += step;
    }
    Ok(series)
}

/// Serialization mirror of [`QSeries`]; coefficients travel as decimal
/// strings so arbitrary-precision integers survive JSON round-trips.
#[derive(Serialize, Deserialize)]
struct QSeriesJson {
    offset24: i64,
    trunc: usize,
    coeffs: Vec<String>,
}

impl QSeries {
    pub fn to_json(&self) -> String {
        let repr = QSeriesJson {
            offset24: self.offset24,
            trunc: self.trunc(),
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        };
        serde_json::to_string(&repr).expect("QSeries serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<QSeries> {
        let repr: QSeriesJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParams(format!("bad QSeries JSON: {e}")))?;
        if repr.coeffs.len() != repr.trunc + 1 {
            return Err(Error::InvalidParams(format!(
                "QSeries JSON claims trunc {} but carries {} coefficients",
                repr.trunc,
                repr.coeffs.len()
            )));
        }
        let coeffs: std::result::Result<Vec<BigInt>, _> =
            repr.coeffs.iter().map(|s| s.parse::<BigInt>()).collect();
        Ok(QSeries {
            offset24: repr.offset24,
            coeffs: coeffs
                .map_err(|e| Error::InvalidParams(format!("bad coefficient string: {e}")))?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(coeffs: &[i64]) -> QSeries {
        QSeries::from_i64_coeffs(0, coeffs)
    }

    #[test]
    fn mul_small_polynomials() {
        // (1+q)(1-q) = 1 - q^2
        let a = qs(&[1, 1, 0]);
        let b = qs(&[1, -1, 0]);
        assert_eq!(a.mul(&b), qs(&[1, 0, -1]));

        // (1+q+q^2)^2 = 1 + 2q + 3q^2 + 2q^3 + q^4
        let c = QSeries::from_i64_coeffs(0, &[1, 1, 1, 0, 0]);
        assert_eq!(c.mul(&c), qs(&[1, 2, 3, 2, 1]));
    }

    #[test]
    fn mul_truncates_to_coarser_operand() {
        let a = qs(&[1, 1, 1, 1, 1, 1]);
        let b = qs(&[1, 1]);
        let prod = a.mul(&b);
        assert_eq!(prod.trunc(), 1);
        assert_eq!(prod, qs(&[1, 2]));
    }

    #[test]
    fn finite_product_of_pentagonal_factors() {
        // prod_{n=1..12} (1 - q^n) to q^12: Euler's pentagonal pattern.
        let mut series = QSeries::one(12);
        for n in 1..=12 {
            series.mul_binomial(n, 1);
        }
        assert_eq!(
            series,
            qs(&[1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1])
        );
    }

    #[test]
    fn inverse_of_geometric_factor() {
        let mut a = QSeries::one(5);
        a.mul_binomial(1, 1); // 1 - q
        let inv = a.inverse().unwrap();
        assert_eq!(inv, qs(&[1, 1, 1, 1, 1, 1]));
        assert_eq!(QSeries::one(4).inverse().unwrap(), QSeries::one(4));
    }

    #[test]
    fn inverse_of_e31_prefix() {
        // The distinct-parts series for (d,r) = (3,1) up to q^6.
        let e31 = qs(&[1, 1, 1, 1, 1, 2, 2]);
        let inv = e31.inverse().unwrap();
        assert_eq!(inv, qs(&[1, -1, 0, 0, 0, -1, 1]));
        let check = e31.mul(&inv);
        assert_eq!(check, QSeries::one(6));
    }

    #[test]
    fn inverse_rejects_non_unit_constant() {
        let a = qs(&[2, 1]);
        match a.inverse() {
            Err(Error::NonUnitConstant { found }) => assert_eq!(found, "2"),
            other => panic!("expected NonUnitConstant, got {other:?}"),
        }
    }

    #[test]
    fn pochhammer_finite_and_empty() {
        // (q;q)_2 = (1-q)(1-q^2) = 1 - q - q^2 + q^3
        let p = pochhammer(1, 1, 1, PochhammerCount::Finite(2), 4).unwrap();
        assert_eq!(p, qs(&[1, -1, -1, 1, 0]));
        // empty product
        let e = pochhammer(-1, 2, 3, PochhammerCount::Finite(0), 4).unwrap();
        assert_eq!(e, QSeries::one(4));
    }

    #[test]
    fn pochhammer_infinite_skips_high_factors() {
        // (-q; q^3)_inf to q^6 = (1+q)(1+q^4) = 1 + q + q^4 + q^5
        let p = pochhammer(-1, 1, 3, PochhammerCount::Infinite, 6).unwrap();
        assert_eq!(p, qs(&[1, 1, 0, 0, 1, 1, 0]));
        assert_eq!(p.coefficient(5).unwrap(), BigInt::one());
        assert_eq!(p.coefficient(2).unwrap(), BigInt::zero());
        assert_eq!(p.coefficient(0).unwrap(), BigInt::one());
    }

    #[test]
    fn pochhammer_infinite_rejects_k_zero() {
        assert!(matches!(
            pochhammer(1, 0, 1, PochhammerCount::Infinite, 4),
            Err(Error::DivergentProduct)
        ));
    }

    #[test]
    fn coefficient_range_checks() {
        let p = pochhammer(-1, 1, 3, PochhammerCount::Infinite, 6).unwrap();
        assert!(p.coefficient(7).is_err());
        assert!(p.coefficient(-1).is_err());
        // fractional offset: whole exponents are unrepresentable
        let eta_like = QSeries::from_i64_coeffs(1, &[1, -1]);
        assert!(eta_like.coefficient(1).is_err());
        assert_eq!(eta_like.coefficient_at24(25).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn add_aligns_offsets_on_the_24_lattice() {
        // q^1 * (1 + q) plus (1 + q): offsets 24 and 0.
        let a = QSeries::from_i64_coeffs(24, &[1, 1, 0]);
        let b = QSeries::from_i64_coeffs(0, &[1, 1, 0]);
        let sum = a.add(&b).unwrap();
        assert_eq!(sum.offset24(), 0);
        // known window: exponents 0..2 (a knows up to q^3, b only to q^2)
        assert_eq!(sum, qs(&[1, 2, 1]));
    }

    #[test]
    fn add_rejects_fractional_misalignment() {
        let a = QSeries::from_i64_coeffs(1, &[1]);
        let b = QSeries::from_i64_coeffs(0, &[1]);
        assert!(matches!(
            a.add(&b),
            Err(Error::IncomparableOffsets { .. })
        ));
    }

    #[test]
    fn shift_up_drops_overflow() {
        let a = qs(&[1, 2, 3]);
        assert_eq!(a.shift_up(1), qs(&[0, 1, 2]));
        assert_eq!(a.shift_up(5), qs(&[0, 0, 0]));
    }

    #[test]
    fn json_round_trip_keeps_big_coefficients() {
        let big: BigInt = BigInt::from(10).pow(40) + 7;
        let series = QSeries::from_coeffs(-3, vec![BigInt::one(), big.clone()]);
        let json = series.to_json();
        let back = QSeries::from_json(&json).unwrap();
        assert_eq!(back, series);
        assert!(json.contains("10000000000000000000000000000000000000007"));
    }
}
