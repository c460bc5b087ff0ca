//! Generating functions for the gap/congruence partition families and
//! verifiers for the identities relating them.
//!
//! Builders:
//! - [`series_e_product`]: distinct parts congruent to +-r (mod d), as the
//!   infinite product (-q^r, -q^(d-r); q^d)_inf
//! - [`series_c_bilateral`]: the smallest-part-beyond-d family via the folded
//!   bilateral sum with Pochhammer/eta prefactor
//! - [`series_c_andrews_rhs`]: Andrews' explicit evaluation at (d, r) = (3, 1)
//! - [`series_g3`]: the odd universal mock theta function g3(-q^a; q^m)
//! - [`series_theta_quotient`]: the theta/eta quotient with its rational
//!   q-power prefactor tracked on the 1/24 exponent lattice
//! - [`series_f_bivariate`]: the two-variable refinement f(x; q) whose x^m q^n
//!   coefficient counts admissible partitions of n with m parts
//!
//! Verifiers return a [`VerificationReport`] carrying the first mismatching
//! coefficient when a check fails; every verifier is exercised against a
//! deliberately corrupted input in the tests, so a silent false pass would be
//! caught.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::SchurParams;
use crate::qseries::{eta_series, theta_half_shift_series, QSeries};

/// Truncated series in x whose coefficients are q-series with offset 0 and a
/// shared q-truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    coeffs: Vec<QSeries>,
}

impl BivariateSeries {
    pub fn x_trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn q_trunc(&self) -> usize {
        self.coeffs[0].trunc()
    }

    /// The q-series coefficient of x^m.
    pub fn x_coefficient(&self, m: usize) -> &QSeries {
        &self.coeffs[m]
    }

    /// Exact coefficient of x^m q^n.
    pub fn coefficient(&self, m: usize, n: i64) -> Result<BigInt> {
        if m > self.x_trunc() {
            return Err(Error::InvalidParams(format!(
                "x-degree {m} beyond truncation {}",
                self.x_trunc()
            )));
        }
        self.coeffs[m].coefficient(n)
    }

    /// Exact reindexing x -> x * q^shift: the x^m coefficient picks up q^(m*shift).
    pub fn substitute_x_shift(&self, shift: usize) -> BivariateSeries {
        BivariateSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| c.shift_up(m * shift))
                .collect(),
        }
    }

    /// Collapse at x = 1 by summing the x-coefficients. Exact for q-exponents
    /// below the minimal weight of any admissible partition with more than
    /// x_trunc parts; callers choose x_trunc accordingly (see
    /// [`max_parts_within`]).
    pub fn collapse_at_one(&self) -> QSeries {
        let mut acc = QSeries::zero(self.q_trunc());
        for c in &self.coeffs {
            acc = acc.add(c).expect("offset-0 coefficients always align");
        }
        acc
    }

    /// Collapse at x = q^e: sum of q^(e*m)-shifted x-coefficients.
    pub fn collapse_at_x_power(&self, e: usize) -> QSeries {
        let mut acc = QSeries::zero(self.q_trunc());
        for (m, c) in self.coeffs.iter().enumerate() {
            acc = acc
                .add(&c.shift_up(e * m))
                .expect("offset-0 coefficients always align");
        }
        acc
    }
}

/// Outcome of an identity check, with the first mismatch located when it fails.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub trunc: usize,
    pub passed: bool,
    pub first_mismatch: Option<Mismatch>,
}

/// Location and values of the first differing coefficient. `exponent24` is
/// the q-exponent in units of 1/24 (a multiple of 24 for integral series);
/// `index` carries the x-degree or recurrence step for layered checks.
#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub index: Option<u64>,
    pub exponent24: i64,
    pub lhs: String,
    pub rhs: String,
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed {
            write!(f, "[PASS] {} (to q^{})", self.identity, self.trunc)
        } else {
            let m = self
                .first_mismatch
                .as_ref()
                .expect("failed report has a mismatch");
            let exp = if m.exponent24 % 24 == 0 {
                format!("q^{}", m.exponent24 / 24)
            } else {
                format!("q^({}/24)", m.exponent24)
            };
            let at = match m.index {
                Some(i) => format!(" (index {i})"),
                None => String::new(),
            };
            write!(
                f,
                "[FAIL] {}: first mismatch at {exp}{at}: lhs = {}, rhs = {}",
                self.identity, m.lhs, m.rhs
            )
        }
    }
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Coefficient-by-coefficient comparison of two series over their common
/// known window, after alignment on the 1/24 exponent lattice.
pub fn verify_equal(lhs: &QSeries, rhs: &QSeries, name: &str) -> Result<VerificationReport> {
    if (lhs.offset24() - rhs.offset24()).rem_euclid(24) != 0 {
        return Err(Error::IncomparableOffsets {
            a24: lhs.offset24(),
            b24: rhs.offset24(),
        });
    }
    let lo = lhs.offset24().min(rhs.offset24());
    let top =
        (lhs.offset24() + 24 * lhs.trunc() as i64).min(rhs.offset24() + 24 * rhs.trunc() as i64);
    let trunc = ((top - lo) / 24).max(0) as usize;
    let coeff_at = |s: &QSeries, e24: i64| -> BigInt {
        if e24 < s.offset24() {
            BigInt::zero()
        } else {
            s.coefficient_at24(e24)
                .expect("within window by construction")
        }
    };
    for k in 0..=trunc {
        let e24 = lo + 24 * k as i64;
        let a = coeff_at(lhs, e24);
        let b = coeff_at(rhs, e24);
        if a != b {
            return Ok(VerificationReport {
                identity: name.to_string(),
                trunc,
                passed: false,
                first_mismatch: Some(Mismatch {
                    index: None,
                    exponent24: e24,
                    lhs: a.to_string(),
                    rhs: b.to_string(),
                }),
            });
        }
    }
    Ok(VerificationReport {
        identity: name.to_string(),
        trunc,
        passed: true,
        first_mismatch: None,
    })
}

/// The generating function for partitions into distinct parts congruent to
/// +-r (mod d): the product (-q^r, -q^(d-r); q^d)_inf, built one binomial
/// factor at a time.
pub fn series_e_product(params: SchurParams, trunc: usize) -> QSeries {
    let d = params.d() as usize;
    let r = params.r() as usize;
    let mut series = QSeries::one(trunc);
    let mut e1 = r;
    while e1 <= trunc {
        series.mul_binomial(e1, -1);
        e1 += d;
    }
    let mut e2 = d - r;
    while e2 <= trunc {
        series.mul_binomial(e2, -1);
        e2 += d;
    }
    series
}

/// The universal mock theta function g3(x; q) specialized at x = -q^a,
/// q -> q^m:
///
/// ```text
/// sum_{n>=0} q^(m*n(n+1)) / ((-q^a; q^m)_{n+1} (-q^(m-a); q^m)_{n+1})
/// ```
///
/// The outer sum stops at the first index whose minimal exponent m*n(n+1)
/// exceeds the truncation. Requires 1 <= a < m so that both Pochhammer
/// factors expand in positive powers.
pub fn series_g3(a: u32, m: u32, trunc: usize) -> Result<QSeries> {
    if a < 1 || a >= m {
        return Err(Error::InvalidParams(format!(
            "g3 specialization needs 1 <= a < m, got a = {a}, m = {m}"
        )));
    }
    let a = a as usize;
    let m = m as usize;
    // running term: q^(m n(n+1)) / ((-q^a;q^m)_{n+1} (-q^(m-a);q^m)_{n+1})
    let mut term = QSeries::one(trunc);
    term.div_binomial(a, -1);
    term.div_binomial(m - a, -1);
    let mut acc = term.clone();
    let mut n = 1usize;
    loop {
        let min_exp = m * n * (n + 1);
        if min_exp > trunc {
            break;
        }
        // advance: multiply by q^(2mn) and divide by the two new factors
        term = term.shift_up(2 * m * n);
        term.div_binomial(a + m * n, -1);
        term.div_binomial(m - a + m * n, -1);
        acc = acc.add(&term)?;
        n += 1;
    }
    Ok(acc)
}

/// Andrews' evaluation of the (3, 1) family with smallest part beyond 3:
///
/// ```text
/// (-q;q)_inf / (q^6;q^6)_inf *
///   sum_{n>=0} (-1)^n q^(9n(n+1)/2) (1 - q^(6n+3)) / ((1+q^(3n+1))(1+q^(3n+2)))
/// ```
///
/// Summand denominators are inverted exactly; the outer sum stops once
/// q^(9n(n+1)/2) exceeds the truncation.
pub fn series_c_andrews_rhs(trunc: usize) -> QSeries {
    let mut sum = QSeries::zero(trunc);
    let mut n = 0usize;
    loop {
        let base = 9 * n * (n + 1) / 2;
        if base > trunc {
            break;
        }
        let mut term = QSeries::one(trunc).shift_up(base);
        term.mul_binomial(6 * n + 3, 1);
        term.div_binomial(3 * n + 1, -1);
        term.div_binomial(3 * n + 2, -1);
        if n % 2 == 1 {
            term = term.neg();
        }
        sum = sum.add(&term).expect("aligned by construction");
        n += 1;
    }
    // prefactor (-q;q)_inf / (q^6;q^6)_inf applied in place
    for e in 1..=trunc {
        sum.mul_binomial(e, -1);
    }
    let mut e = 6;
    while e <= trunc {
        sum.div_binomial(e, 1);
        e += 6;
    }
    sum
}

/// Folded bilateral-sum route to the smallest-part-beyond-d family:
///
/// ```text
/// (-q^r, -q^(d-r); q^d)_inf / (q^d; q^d)_inf
///     * sum_{n in Z} (-1)^n q^(3dn(n+1)/2) / (1 + q^(r+dn))
/// ```
///
/// Negative indices are folded to positive exponents: with m = -n-1 >= 0,
/// 1/(1+q^(r+dn)) = q^(d(m+1)-r) / (1+q^(d(m+1)-r)), so each m >= 0
/// contributes the pair
///
/// ```text
/// (-1)^m q^(3dm(m+1)/2) [ 1/(1+q^(r+dm)) - q^(d(m+1)-r)/(1+q^(d(m+1)-r)) ]
/// ```
pub fn series_c_bilateral(params: SchurParams, trunc: usize) -> QSeries {
    let d = params.d() as usize;
    let r = params.r() as usize;
    let mut sum = folded_bilateral_sum(params, trunc);
    // multiply by (-q^r, -q^(d-r); q^d)_inf and divide by (q^d; q^d)_inf,
    // all as O(trunc) binomial passes
    let mut e1 = r;
    while e1 <= trunc {
        sum.mul_binomial(e1, -1);
        e1 += d;
    }
    let mut e2 = d - r;
    while e2 <= trunc {
        sum.mul_binomial(e2, -1);
        e2 += d;
    }
    let mut e3 = d;
    while e3 <= trunc {
        sum.div_binomial(e3, 1);
        e3 += d;
    }
    sum
}

/// The bare folded bilateral sum (no product prefactor).
fn folded_bilateral_sum(params: SchurParams, trunc: usize) -> QSeries {
    let d = params.d() as usize;
    let r = params.r() as usize;
    let mut sum = QSeries::zero(trunc);
    let mut m = 0usize;
    loop {
        let base = 3 * d * m * (m + 1) / 2;
        if base > trunc {
            break;
        }
        // term from n = m >= 0
        let mut plus = QSeries::one(trunc).shift_up(base);
        plus.div_binomial(r + d * m, -1);
        // folded term from n = -(m+1)
        let fold_exp = d * (m + 1) - r;
        let mut minus = QSeries::one(trunc).shift_up(base + fold_exp);
        minus.div_binomial(fold_exp, -1);
        let mut term = plus.sub(&minus).expect("aligned by construction");
        if m % 2 == 1 {
            term = term.neg();
        }
        sum = sum.add(&term).expect("aligned by construction");
        m += 1;
    }
    sum
}

/// The modular-quotient route to the distinct-parts series:
/// -q^(-d/12 + r/2) * theta(1/2 + r*tau; d*tau) / eta(d*tau). All rational
/// q-powers ride on the 1/24 offset lattice and must cancel exactly; a
/// nonzero final offset signals a broken exponent ledger and is an error.
pub fn series_theta_quotient(params: SchurParams, trunc: usize) -> Result<QSeries> {
    let d = params.d() as usize;
    let theta = theta_half_shift_series(params, trunc)?;
    // divide by the eta mantissa via geometric passes, then undo its q^(d/24)
    let mut series = theta;
    let mut e = d;
    while e <= trunc {
        series.div_binomial(e, 1);
        e += d;
    }
    let eta_offset = eta_series(d, 0).offset24();
    series = series.shift_offset24(-eta_offset);
    // prefactor -q^(-d/12 + r/2) = -q^((-2d + 12r)/24)
    series = series
        .neg()
        .shift_offset24(-2 * d as i64 + 12 * params.r() as i64);
    if series.offset24() != 0 {
        return Err(Error::BrokenExponentLedger(series.offset24()));
    }
    Ok(series)
}

/// Hypergeometric coefficients A_n of the two-variable refinement: A_0 = 1 and
/// A_n = (-q^r, -q^(d-r); q^d)_n / (q^d; q^d)_n, each exact to the truncation.
pub fn hypergeometric_terms(params: SchurParams, n_max: usize, trunc: usize) -> Vec<QSeries> {
    let d = params.d() as usize;
    let r = params.r() as usize;
    let mut terms = Vec::with_capacity(n_max + 1);
    terms.push(QSeries::one(trunc));
    for n in 1..=n_max {
        let mut next = terms[n - 1].clone();
        next.mul_binomial(d * (n - 1) + r, -1);
        next.mul_binomial(d * n - r, -1);
        next.div_binomial(d * n, 1);
        terms.push(next);
    }
    terms
}

/// The two-variable refinement
///
/// ```text
/// f(x; q) = (x; q^d)_inf * sum_{n>=0} x^n (-q^r, -q^(d-r); q^d)_n / (q^d; q^d)_n
/// ```
///
/// truncated at x^x_trunc and q^q_trunc. Its x^m q^n coefficient counts the
/// admissible partitions of n with exactly m parts.
pub fn series_f_bivariate(params: SchurParams, x_trunc: usize, q_trunc: usize) -> BivariateSeries {
    let d = params.d() as usize;
    let terms = hypergeometric_terms(params, x_trunc, q_trunc);
    let mut f = BivariateSeries { coeffs: terms };
    // multiply by (x; q^d)_inf = prod_k (1 - x q^(dk)); factors with dk beyond
    // the q-truncation cannot touch stored coefficients
    let mut k = 0usize;
    while k * d <= q_trunc {
        for m in (1..=x_trunc).rev() {
            let shifted = f.coeffs[m - 1].shift_up(k * d);
            f.coeffs[m] = f.coeffs[m].sub(&shifted).expect("aligned");
        }
        k += 1;
    }
    f
}

/// Verify the q-difference equation
///
/// ```text
/// f(x) = (1 + x q^r + x q^(d-r)) f(x q^d) + x q^d (1 - x q^d) f(x q^(2d))
/// ```
///
/// as an exact identity of integer coefficients up to (x_trunc, q_trunc).
pub fn verify_qdifference(
    params: SchurParams,
    x_trunc: usize,
    q_trunc: usize,
) -> VerificationReport {
    qdifference_residual_check(params, x_trunc, q_trunc, false)
}

fn qdifference_residual_check(
    params: SchurParams,
    x_trunc: usize,
    q_trunc: usize,
    drop_correction: bool,
) -> VerificationReport {
    let d = params.d() as usize;
    let r = params.r() as usize;
    let f = series_f_bivariate(params, x_trunc, q_trunc);
    let fd = f.substitute_x_shift(d);
    let f2d = f.substitute_x_shift(2 * d);
    let name = "qdifference";
    for m in 0..=x_trunc {
        // coefficient of x^m in (1 + x(q^r + q^(d-r))) f(xq^d)
        let mut rhs = fd.coeffs[m].clone();
        if m >= 1 {
            rhs = rhs
                .add(&fd.coeffs[m - 1].shift_up(r))
                .and_then(|s| s.add(&fd.coeffs[m - 1].shift_up(d - r)))
                .expect("aligned");
        }
        // coefficient of x^m in x q^d (1 - x q^d) f(x q^(2d))
        if m >= 1 {
            rhs = rhs.add(&f2d.coeffs[m - 1].shift_up(d)).expect("aligned");
        }
        if m >= 2 && !drop_correction {
            rhs = rhs
                .sub(&f2d.coeffs[m - 2].shift_up(2 * d))
                .expect("aligned");
        }
        let mut report = verify_equal(&f.coeffs[m], &rhs, name).expect("offsets are 0");
        if !report.passed {
            if let Some(mm) = report.first_mismatch.as_mut() {
                mm.index = Some(m as u64);
            }
            return report;
        }
    }
    VerificationReport {
        identity: name.to_string(),
        trunc: q_trunc,
        passed: true,
        first_mismatch: None,
    }
}

/// Verify the division-free coefficient recurrence
///
/// ```text
/// (1 - q^(dn)) A_n = (1 + q^(d(n-1)+r)) (1 + q^(dn-r)) A_{n-1}
/// ```
///
/// for 1 <= n <= n_max on the closed-form A_n.
pub fn verify_an_recurrence(params: SchurParams, n_max: usize, trunc: usize) -> VerificationReport {
    let d = params.d() as usize;
    let r = params.r() as usize;
    let terms = hypergeometric_terms(params, n_max, trunc);
    let name = "an-recurrence";
    for n in 1..=n_max {
        let mut lhs = terms[n].clone();
        lhs.mul_binomial(d * n, 1);
        let mut rhs = terms[n - 1].clone();
        rhs.mul_binomial(d * (n - 1) + r, -1);
        rhs.mul_binomial(d * n - r, -1);
        let mut report = verify_equal(&lhs, &rhs, name).expect("offsets are 0");
        if !report.passed {
            if let Some(mm) = report.first_mismatch.as_mut() {
                mm.index = Some(n as u64);
            }
            return report;
        }
    }
    VerificationReport {
        identity: name.to_string(),
        trunc,
        passed: true,
        first_mismatch: None,
    }
}

/// Largest number of parts an admissible partition of weight <= n can have,
/// given the strict lower bound on parts. Used to pick x-truncations that
/// make the bivariate collapses exact.
pub fn max_parts_within(params: SchurParams, n: u64, min_exclusive: u64) -> usize {
    let d = params.d() as u64;
    // smallest admissible part exceeding the bound
    let mut base = min_exclusive + 1;
    while !params.residue_admissible(base) {
        base += 1;
    }
    // m parts weigh at least m*base + d*m(m-1)/2
    let mut m = 0u64;
    while (m + 1) * base + d * m * (m + 1) / 2 <= n {
        m += 1;
    }
    m as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{count_distinct_congruent, count_schur, count_schur_by_parts};
    use num_traits::One;

    fn params(d: u32, r: u32) -> SchurParams {
        SchurParams::new(d, r).unwrap()
    }

    fn coeffs_i64(s: &QSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn e_product_small_expansions() {
        let e31 = series_e_product(params(3, 1), 6);
        assert_eq!(coeffs_i64(&e31), vec![1, 1, 1, 1, 1, 2, 2]);
        // (5,2): distinct parts from {2, 3, 7, 8, ...}
        let e52 = series_e_product(params(5, 2), 5);
        assert_eq!(coeffs_i64(&e52), vec![1, 0, 1, 1, 0, 1]);
        for (d, r) in [(3, 1), (4, 1), (6, 2), (7, 3), (8, 3)] {
            let e = series_e_product(params(d, r), 10);
            assert_eq!(e.coeffs()[0], BigInt::one(), "constant term at ({d},{r})");
        }
    }

    #[test]
    fn e_product_matches_oracles() {
        for (d, r) in [(3, 1), (4, 1), (5, 2), (6, 1), (7, 3)] {
            let p = params(d, r);
            let series = series_e_product(p, 40);
            for n in 0..=40u64 {
                let coeff = series.coefficient(n as i64).unwrap();
                assert_eq!(
                    coeff,
                    BigInt::from(count_distinct_congruent(p, n)),
                    "E oracle at ({d},{r}), n = {n}"
                );
                assert_eq!(
                    coeff,
                    BigInt::from(count_schur(p, 0, n)),
                    "gap-condition count at ({d},{r}), n = {n}"
                );
            }
        }
    }

    #[test]
    fn g3_small_expansions() {
        let g = series_g3(1, 3, 6).unwrap();
        assert_eq!(coeffs_i64(&g), vec![1, -1, 0, 0, 1, -1, 1]);
        let g = series_g3(2, 5, 4).unwrap();
        assert_eq!(coeffs_i64(&g), vec![1, 0, -1, -1, 1]);
        for (a, m) in [(1u32, 3u32), (1, 4), (2, 5), (3, 7)] {
            let g = series_g3(a, m, 8).unwrap();
            assert_eq!(g.coeffs()[0], BigInt::one());
        }
        assert!(series_g3(0, 3, 5).is_err());
        assert!(series_g3(3, 3, 5).is_err());
    }

    #[test]
    fn andrews_rhs_matches_oracle() {
        let series = series_c_andrews_rhs(12);
        assert_eq!(
            coeffs_i64(&series),
            vec![1, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 2, 2]
        );
        let p31 = params(3, 1);
        let longer = series_c_andrews_rhs(40);
        for n in 0..=40u64 {
            assert_eq!(
                longer.coefficient(n as i64).unwrap(),
                BigInt::from(count_schur(p31, 3, n)),
                "Andrews RHS vs oracle at n = {n}"
            );
        }
    }

    #[test]
    fn bilateral_matches_oracle_and_andrews() {
        for (d, r) in [(3, 1), (4, 1), (5, 1), (5, 2), (6, 1), (6, 2)] {
            let p = params(d, r);
            let series = series_c_bilateral(p, 50);
            for n in 0..=50u64 {
                assert_eq!(
                    series.coefficient(n as i64).unwrap(),
                    BigInt::from(count_schur(p, d as u64, n)),
                    "bilateral vs oracle at ({d},{r}), n = {n}"
                );
            }
            // nothing below q^(d+1) except the constant
            for n in 1..=d as i64 {
                assert!(series.coefficient(n).unwrap().is_zero());
            }
        }
        let a = series_c_andrews_rhs(120);
        let b = series_c_bilateral(params(3, 1), 120);
        assert!(verify_equal(&a, &b, "andrews-c31").unwrap().passed);
    }

    /// The one-sided form the fold was derived from: each n >= 0 contributes
    /// (-1)^n q^(3dn(n+1)/2) (1 - q^(d(2n+1))) / ((1+q^(r+dn))(1+q^(d-r+dn))).
    fn one_sided_sum(p: SchurParams, trunc: usize) -> QSeries {
        let d = p.d() as usize;
        let r = p.r() as usize;
        let mut sum = QSeries::zero(trunc);
        let mut n = 0usize;
        loop {
            let base = 3 * d * n * (n + 1) / 2;
            if base > trunc {
                break;
            }
            let mut term = QSeries::one(trunc).shift_up(base);
            term.mul_binomial(d * (2 * n + 1), 1);
            term.div_binomial(r + d * n, -1);
            term.div_binomial(d - r + d * n, -1);
            if n % 2 == 1 {
                term = term.neg();
            }
            sum = sum.add(&term).unwrap();
            n += 1;
        }
        sum
    }

    #[test]
    fn bilateral_fold_matches_one_sided_route() {
        for (d, r) in [(3, 1), (5, 2), (7, 3)] {
            let p = params(d, r);
            let folded = folded_bilateral_sum(p, 150);
            let partial_fraction = one_sided_sum(p, 150);
            assert!(
                verify_equal(&folded, &partial_fraction, "fold").unwrap().passed,
                "fold disagrees at ({d},{r})"
            );
        }
    }

    #[test]
    fn theta_quotient_reproduces_distinct_parts() {
        for (d, r) in [(3, 1), (5, 2)] {
            let p = params(d, r);
            let quotient = series_theta_quotient(p, 60).unwrap();
            assert_eq!(quotient.offset24(), 0);
            let product = series_e_product(p, 60);
            assert!(verify_equal(&quotient, &product, "theta-quotient")
                .unwrap()
                .passed);
        }
    }

    #[test]
    fn universal_factorization() {
        // the bilateral series factors as (theta quotient) * g3(-q^r; q^d)
        for (d, r) in [(3, 1), (4, 1), (5, 2)] {
            let p = params(d, r);
            let lhs = series_theta_quotient(p, 80)
                .unwrap()
                .mul(&series_g3(r, d, 80).unwrap());
            let rhs = series_c_bilateral(p, 80);
            assert!(verify_equal(&lhs, &rhs, "univ-factorization")
                .unwrap()
                .passed);
        }
    }

    #[test]
    fn bivariate_counts_by_parts() {
        let p31 = params(3, 1);
        let f = series_f_bivariate(p31, 6, 25);
        assert_eq!(f.x_coefficient(0), &QSeries::one(25));
        for m in 0..=6usize {
            for n in 0..=25i64 {
                assert_eq!(
                    f.coefficient(m, n).unwrap(),
                    BigInt::from(count_schur_by_parts(p31, 0, n as u64, m as u64)),
                    "x^{m} q^{n}"
                );
            }
        }
    }

    #[test]
    fn bivariate_collapses() {
        for (d, r) in [(3, 1), (5, 2)] {
            let p = params(d, r);
            let n = 60usize;
            // x = 1 recovers the distinct-parts series
            let m_all = max_parts_within(p, n as u64, 0);
            let f = series_f_bivariate(p, m_all, n);
            let at_one = f.collapse_at_one();
            assert!(verify_equal(&at_one, &series_e_product(p, n), "x=1")
                .unwrap()
                .passed);
            // x = q^d recovers the smallest-part-beyond-d series
            let m_big = max_parts_within(p, n as u64, d as u64);
            let f2 = series_f_bivariate(p, m_big, n);
            let at_qd = f2.collapse_at_x_power(d as usize);
            assert!(verify_equal(&at_qd, &series_c_bilateral(p, n), "x=q^d")
                .unwrap()
                .passed);
        }
    }

    #[test]
    fn qdifference_holds_and_mutation_is_caught() {
        assert!(verify_qdifference(params(3, 1), 5, 20).passed);
        assert!(verify_qdifference(params(5, 2), 4, 20).passed);
        let broken = qdifference_residual_check(params(3, 1), 5, 20, true);
        assert!(!broken.passed);
        let mm = broken.first_mismatch.unwrap();
        assert!(mm.index.is_some());
        assert_ne!(mm.lhs, mm.rhs);
    }

    #[test]
    fn an_recurrence_holds() {
        assert!(verify_an_recurrence(params(3, 1), 6, 60).passed);
        assert!(verify_an_recurrence(params(4, 1), 5, 50).passed);
        // n = 1 instance directly: (1 - q^d) A_1 = (1 + q^r)(1 + q^(d-r))
        let p = params(5, 2);
        let terms = hypergeometric_terms(p, 1, 30);
        let mut lhs = terms[1].clone();
        lhs.mul_binomial(5, 1);
        let mut rhs = QSeries::one(30);
        rhs.mul_binomial(2, -1);
        rhs.mul_binomial(3, -1);
        assert!(verify_equal(&lhs, &rhs, "A1").unwrap().passed);
    }

    #[test]
    fn verify_equal_locates_mismatch() {
        let a = QSeries::from_i64_coeffs(0, &[1, 1]);
        let b = QSeries::from_i64_coeffs(0, &[1, -1]);
        let report = verify_equal(&a, &b, "negative-control").unwrap();
        assert!(!report.passed);
        let mm = report.first_mismatch.clone().unwrap();
        assert_eq!(mm.exponent24, 24);
        assert_eq!(mm.lhs, "1");
        assert_eq!(mm.rhs, "-1");
        // incomparable offsets are rejected outright
        let frac = QSeries::from_i64_coeffs(1, &[1]);
        assert!(verify_equal(&a, &frac, "x").is_err());
        // JSON form carries the mismatch
        assert!(report.to_json().contains("\"exponent24\":24"));
    }
}
