//! The one-shot verification matrix: every headline identity, asymptotic
//! property, and probabilistic check, run end to end with its tolerance
//! pinned in code. `schurq verify-all` prints one line per criterion; the
//! acceptance integration test asserts each one.

use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;

use crate::asymptotics::{
    check_g_expansion, constants, crossover, estimate_coefficient, eval_f_near_one,
    exact_coefficients, log_big, Family, DEFAULT_BUDGET,
};
use crate::error::Result;
use crate::identities::{
    series_c_andrews_rhs, series_c_bilateral, series_e_product,
    series_f_bivariate, series_g3, series_theta_quotient, verify_an_recurrence, verify_equal,
    verify_qdifference,
};
use crate::partitions::{
    count_congruence_classes_table, count_distinct_congruent, count_schur, count_schur_by_parts,
    GapPartitionCounter, SchurParams,
};
use crate::probability::{
    g3_series_value, simulate, theorem_prob_check, verify_uk_recurrence,
};
use crate::qseries::{eta_series, theta_half_shift_series, theta_point, theta_sum_series, QSeries};

use num_complex::Complex64;

/// Parameter set shared by the theta/universal-factorization criteria.
pub const STANDARD_PARAMS: [(u32, u32); 6] = [(3, 1), (4, 1), (5, 1), (5, 2), (7, 2), (7, 3)];

/// Configuration for a full verification run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Truncation for the exact identity checks.
    pub trunc: usize,
    /// Tolerance for the probability identity checks.
    pub tol: f64,
    /// Monte Carlo seed.
    pub seed: u64,
    /// Reduced scales for a seconds-scale smoke run.
    pub quick: bool,
    /// Test hook: corrupt one coefficient inside the named criterion and
    /// watch it fail.
    pub inject_mutation: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trunc: 200,
            tol: 1e-6,
            seed: 42,
            quick: false,
            inject_mutation: None,
        }
    }
}

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:2}. {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

struct Runner {
    cfg: SuiteConfig,
    outcomes: Vec<CriterionOutcome>,
}

impl Runner {
    fn run(&mut self, id: u32, name: &str, body: impl FnOnce(&SuiteConfig) -> Result<(bool, String)>) {
        let start = Instant::now();
        let (passed, detail) = match body(&self.cfg) {
            Ok(pair) => pair,
            Err(e) => (false, format!("error: {e}")),
        };
        self.outcomes.push(CriterionOutcome {
            id,
            name: name.to_string(),
            passed,
            detail,
            seconds: start.elapsed().as_secs_f64(),
        });
    }

    fn mutated(&self, criterion: &str) -> bool {
        self.cfg
            .inject_mutation
            .as_deref()
            .is_some_and(|m| m == criterion)
    }
}

/// Flip one coefficient; the standard mutation for negative controls.
fn corrupt(series: &QSeries) -> QSeries {
    let mut coeffs = series.coeffs().to_vec();
    let k = coeffs.len() / 2;
    coeffs[k] += 1;
    QSeries::from_coeffs(series.offset24(), coeffs)
}

fn params(d: u32, r: u32) -> SchurParams {
    SchurParams::new(d, r).expect("parameter table is valid")
}

fn all_valid_params(d_max: u32) -> Vec<SchurParams> {
    let mut v = Vec::new();
    for d in 3..=d_max {
        for r in 1..=(d - 1) / 2 {
            v.push(params(d, r));
        }
    }
    v
}

/// Run the complete acceptance matrix and return one outcome per criterion.
pub fn run_acceptance(cfg: SuiteConfig) -> Vec<CriterionOutcome> {
    let mut runner = Runner {
        cfg,
        outcomes: Vec::new(),
    };

    // 1. distinct-parts product vs both enumeration oracles
    let mutate = runner.mutated("schur");
    runner.run(1, "schur", move |cfg| {
        let n_max: u64 = if cfg.quick { 30 } else { 60 };
        for p in all_valid_params(8) {
            let mut series = series_e_product(p, n_max as usize);
            if mutate {
                series = corrupt(&series);
            }
            for n in 0..=n_max {
                let coeff = series.coefficient(n as i64)?;
                let by_distinct = BigInt::from(count_distinct_congruent(p, n));
                let by_gap = BigInt::from(count_schur(p, 0, n));
                if coeff != by_distinct || coeff != by_gap {
                    return Ok((
                        false,
                        format!("mismatch at {p}, n = {n}: series {coeff}, oracles {by_distinct}/{by_gap}"),
                    ));
                }
            }
        }
        Ok((true, format!("12 parameter pairs, n <= {n_max}, exact")))
    });

    // 2. Andrews' explicit series vs bilateral route and oracle
    let mutate = runner.mutated("andrews-c31");
    runner.run(2, "andrews-c31", move |cfg| {
        let trunc = if cfg.quick { 100 } else { 200 };
        let mut lhs = series_c_andrews_rhs(trunc);
        if mutate {
            lhs = corrupt(&lhs);
        }
        let rhs = series_c_bilateral(params(3, 1), trunc);
        let report = verify_equal(&lhs, &rhs, "andrews-c31")?;
        if !report.passed {
            return Ok((false, report.to_string()));
        }
        for n in 0..=60u64.min(trunc as u64) {
            if lhs.coefficient(n as i64)? != BigInt::from(count_schur(params(3, 1), 3, n)) {
                return Ok((false, format!("oracle mismatch at n = {n}")));
            }
        }
        Ok((true, format!("series equal to q^{trunc}, oracle match to 60")))
    });

    // 3. universal factorization: theta quotient * g3 = bilateral series
    let mutate = runner.mutated("univ-factorization");
    runner.run(3, "univ-factorization", move |cfg| {
        let trunc = if cfg.quick { 100 } else { 200 };
        for &(d, r) in &STANDARD_PARAMS {
            let p = params(d, r);
            let mut lhs = series_theta_quotient(p, trunc)?.mul(&series_g3(r, d, trunc)?);
            if mutate {
                lhs = corrupt(&lhs);
            }
            let rhs = series_c_bilateral(p, trunc);
            let report = verify_equal(&lhs, &rhs, "univ-factorization")?;
            if !report.passed {
                return Ok((false, format!("at ({d},{r}): {report}")));
            }
        }
        Ok((true, format!("6 parameter pairs to q^{trunc}")))
    });

    // 4. theta/eta quotient equals the distinct-parts product, offset 0
    let mutate = runner.mutated("theta-quotient");
    runner.run(4, "theta-quotient", move |cfg| {
        let trunc = if cfg.quick { 100 } else { 200 };
        for &(d, r) in &STANDARD_PARAMS {
            let p = params(d, r);
            let mut quotient = series_theta_quotient(p, trunc)?;
            if quotient.offset24() != 0 {
                return Ok((false, format!("offset {} at ({d},{r})", quotient.offset24())));
            }
            if mutate {
                quotient = corrupt(&quotient);
            }
            let report = verify_equal(&quotient, &series_e_product(p, trunc), "theta-quotient")?;
            if !report.passed {
                return Ok((false, format!("at ({d},{r}): {report}")));
            }
        }
        Ok((true, format!("6 parameter pairs to q^{trunc}, offsets cancel")))
    });

    // 5. q-difference equation, coefficient recurrence, bivariate counts
    let mutate = runner.mutated("qdifference");
    runner.run(5, "qdifference-and-recurrence", move |cfg| {
        let (m, n) = if cfg.quick { (4, 24) } else { (5, 40) };
        let (n_rec, trunc_rec) = if cfg.quick { (5, 40) } else { (8, 80) };
        for &(d, r) in &STANDARD_PARAMS {
            let p = params(d, r);
            let rep = verify_qdifference(p, m, n);
            if !rep.passed {
                return Ok((false, format!("qdifference at ({d},{r}): {rep}")));
            }
            let rep = verify_an_recurrence(p, n_rec, trunc_rec);
            if !rep.passed {
                return Ok((false, format!("recurrence at ({d},{r}): {rep}")));
            }
        }
        let p31 = params(3, 1);
        let f = series_f_bivariate(p31, 6, 25);
        for m in 0..=6usize {
            for n in 0..=25i64 {
                let mut expected = BigInt::from(count_schur_by_parts(p31, 0, n as u64, m as u64));
                if mutate && m == 2 && n == 10 {
                    expected += 1;
                }
                if f.coefficient(m, n)? != expected {
                    return Ok((false, format!("bivariate mismatch at x^{m} q^{n}")));
                }
            }
        }
        Ok((
            true,
            format!("q-difference at ({m},{n}), recurrence at ({n_rec},{trunc_rec}), counts by parts"),
        ))
    });

    // 6. theta bilateral sum equals triple-product form
    let mutate = runner.mutated("triple-product");
    runner.run(6, "triple-product", move |cfg| {
        let trunc = if cfg.quick { 100 } else { 200 };
        for &(d, r) in &STANDARD_PARAMS {
            let p = params(d, r);
            let mut by_sum = theta_sum_series(p, trunc)?;
            if mutate {
                by_sum = corrupt(&by_sum);
            }
            let by_product = theta_half_shift_series(p, trunc)?;
            let report = verify_equal(&by_sum, &by_product, "triple-product")?;
            if !report.passed {
                return Ok((false, format!("at ({d},{r}): {report}")));
            }
        }
        Ok((true, format!("6 parameter pairs to q^{trunc}")))
    });

    // 7. eta and theta inversion numerics
    runner.run(7, "inversion-numerics", |_| {
        // eta(i/t) = sqrt(t) eta(it) with q = e^(-2 pi t)
        let eta = eta_series(1, 600);
        for t in [0.5f64, 1.0, 2.0] {
            let lhs = eta.eval_real((-2.0 * std::f64::consts::PI / t).exp())?;
            let rhs = eta.eval_real((-2.0 * std::f64::consts::PI * t).exp())?;
            let diff = (lhs.value - t.sqrt() * rhs.value).abs();
            if diff >= 1e-8 {
                return Ok((false, format!("eta inversion off by {diff:e} at t = {t}")));
            }
        }
        // theta(w/tau; -1/tau) = -i sqrt(-i tau) e^(pi i w^2 / tau) theta(w; tau)
        // at tau = it, w = is
        for (s, t) in [(0.1f64, 0.7f64), (0.2, 1.3), (0.05, 0.9)] {
            let tau = Complex64::new(0.0, t);
            let w = Complex64::new(0.0, s);
            let lhs = theta_point(w / tau, -Complex64::new(1.0, 0.0) / tau)?;
            let rhs_theta = theta_point(w, tau)?;
            let i = Complex64::I;
            let factor = -i * (-i * tau).sqrt() * (i * std::f64::consts::PI * w * w / tau).exp();
            let diff = (lhs.value - factor * rhs_theta.value).norm();
            let allowance = 1e-6 + lhs.tail_bound + factor.norm() * rhs_theta.tail_bound;
            if diff >= allowance {
                return Ok((false, format!("theta inversion off by {diff:e} at (s,t)=({s},{t})")));
            }
        }
        Ok((true, "eta within 1e-8 at t in {0.5,1,2}; theta within 1e-6 at 3 points".into()))
    });

    // 8. the C/B coefficient ratio approaches 1/3
    runner.run(8, "bc-ratio", |cfg| {
        let grid: &[usize] = if cfg.quick {
            &[300, 600, 1250]
        } else {
            &[1250, 2500, 5000]
        };
        let n_top = *grid.last().expect("nonempty");
        let mut detail = String::new();
        for &(d, r) in &[(3u32, 1u32), (5, 2)] {
            let p = params(d, r);
            let b = exact_coefficients(Family::B, p, n_top, DEFAULT_BUDGET)?;
            let c = exact_coefficients(Family::C, p, n_top, DEFAULT_BUDGET)?;
            let mut prev = f64::INFINITY;
            for &n in grid {
                let dev = (3.0 * (log_big(&c[n]) - log_big(&b[n])).exp() - 1.0).abs();
                if dev >= prev {
                    return Ok((false, format!("deviation not decreasing at ({d},{r}), n = {n}")));
                }
                prev = dev;
            }
            if prev >= 0.05 {
                return Ok((false, format!("({d},{r}): final deviation {prev:.4} >= 0.05")));
            }
            detail.push_str(&format!("({d},{r}): |3C/B - 1| = {prev:.4} at {n_top}; "));
        }
        Ok((true, detail))
    });

    // 9. two-term expansion beats one term and converges
    runner.run(9, "two-term-expansion", |cfg| {
        let grid: &[u64] = if cfg.quick {
            &[500, 1000, 2000]
        } else {
            &[1000, 4000, 16000]
        };
        let n_top = *grid.last().expect("nonempty") as usize;
        let p = params(3, 1);
        let mut detail = String::new();
        for family in [Family::B, Family::C] {
            let exact = exact_coefficients(family, p, n_top, DEFAULT_BUDGET)?;
            let mut prev = f64::INFINITY;
            for &n in grid {
                let exact_log = log_big(&exact[n as usize]);
                let two = estimate_coefficient(family, p, n, 2)?.ln;
                let one = estimate_coefficient(family, p, n, 1)?.ln;
                let dev2 = ((exact_log - two).exp() - 1.0).abs();
                let dev1 = ((exact_log - one).exp() - 1.0).abs();
                if dev2 >= dev1 {
                    return Ok((false, format!("{family:?}: two terms no better at n = {n}")));
                }
                if dev2 >= prev {
                    return Ok((false, format!("{family:?}: |ratio-1| not decreasing at n = {n}")));
                }
                prev = dev2;
            }
            if prev >= 0.05 {
                return Ok((false, format!("{family:?}: final |ratio-1| = {prev:.4}")));
            }
            detail.push_str(&format!("{family:?}: |ratio-1| = {prev:.5} at {n_top}; "));
        }
        Ok((true, detail))
    });

    // 10. Taylor data of the scaled generating functions near q = 1
    runner.run(10, "cusp-expansion", |cfg| {
        for (d, r) in [(3u32, 1u32), (5, 2)] {
            let p = params(d, r);
            let report = check_g_expansion(p, &[0.2, 0.1, 0.05])?;
            if report.value_error >= 1e-3 {
                return Ok((false, format!("G(0) error {:.2e} at ({d},{r})", report.value_error)));
            }
            if report.derivative_rel_error >= 0.02 {
                return Ok((
                    false,
                    format!("G'(0) relative error {:.4} at ({d},{r})", report.derivative_rel_error),
                ));
            }
        }
        // scaled major-arc values match 1 + beta'_1 z with O(z^2) residual
        let p = params(3, 1);
        let beta_p1 = constants(p).beta_p1;
        let mut residuals = Vec::new();
        for z in [0.2f64, 0.1, 0.05] {
            let tol = if cfg.quick { 1e-8 } else { 1e-10 };
            let v = eval_f_near_one(Family::B, p, Complex64::new(z, 0.0), tol)?;
            let scale = (std::f64::consts::PI.powi(2) / (6.0 * 3.0 * z)).exp();
            let scaled = v.value.re / scale;
            residuals.push((scaled - (1.0 + beta_p1 * z)).abs());
        }
        for w in residuals.windows(2) {
            let ratio = w[0] / w[1];
            if !(2.5..=6.5).contains(&ratio) {
                return Ok((false, format!("residual ratio {ratio:.2} outside [2.5, 6.5]")));
            }
        }
        Ok((true, format!("G data within tolerance; residual ratios {:.2}, {:.2}",
            residuals[0] / residuals[1], residuals[1] / residuals[2])))
    });

    // 11. inequality crossovers with golden indices
    runner.run(11, "crossover", |cfg| {
        let n_max = if cfg.quick { 1000 } else { 2000 };
        // within fixed d the smaller r dominates; across d the smaller d does
        let cases: [(SchurParams, SchurParams, Family, Option<u64>); 4] = [
            (params(5, 2), params(5, 1), Family::B, Some(329)),
            (params(5, 2), params(5, 1), Family::C, Some(424)),
            (params(4, 1), params(3, 1), Family::B, Some(5)),
            (params(4, 1), params(3, 1), Family::C, Some(10)),
        ];
        let mut detail = String::new();
        for (a, b, family, golden) in cases {
            let found = crossover(a, b, family, n_max, DEFAULT_BUDGET)?;
            match found {
                None => return Ok((false, format!("{family:?} {b} over {a}: no stabilization"))),
                Some(n0) => {
                    if !cfg.quick && Some(n0) != golden {
                        return Ok((
                            false,
                            format!("{family:?} {b} over {a}: N0 = {n0}, golden {golden:?}"),
                        ));
                    }
                    detail.push_str(&format!("{family:?} {b}>{a} from {n0}; "));
                }
            }
        }
        Ok((true, detail))
    });

    // 12. gap partitions dominate the congruence count on the known window
    runner.run(12, "alder-andrews-window", |cfg| {
        let n_top = if cfg.quick { 120 } else { 200 };
        for d in 4u32..=8 {
            let table = count_congruence_classes_table(d + 3, &[1, d + 2], n_top as u64)?;
            let mut gaps = GapPartitionCounter::new(d as u64)?;
            for n in (2 * d as u64 + 9)..=n_top as u64 {
                let q_count = gaps.count(1, n);
                let big_q = &table[n as usize];
                if q_count <= *big_q {
                    return Ok((false, format!("failure at d = {d}, n = {n}")));
                }
            }
        }
        Ok((true, format!("d in 4..=8, 2d+9 <= n <= {n_top}, strict throughout")))
    });

    // 13. the two classical gap/congruence coincidences
    runner.run(13, "classical-identities", |cfg| {
        let n_top: u64 = if cfg.quick { 50 } else { 80 };
        let q1 = count_congruence_classes_table(5, &[1, 4], n_top)?;
        let q2 = count_congruence_classes_table(5, &[2, 3], n_top)?;
        let odd = count_congruence_classes_table(2, &[1], n_top)?;
        let mut gap2 = GapPartitionCounter::new(2)?;
        let mut gap1 = GapPartitionCounter::new(1)?;
        for n in 0..=n_top {
            if gap2.count(1, n) != q1[n as usize] {
                return Ok((false, format!("first gap-2 identity fails at n = {n}")));
            }
            if gap2.count(2, n) != q2[n as usize] {
                return Ok((false, format!("second gap-2 identity fails at n = {n}")));
            }
            if gap1.count(1, n) != odd[n as usize] {
                return Ok((false, format!("distinct-vs-odd fails at n = {n}")));
            }
        }
        Ok((true, format!("both gap-2 identities and distinct=odd to n = {n_top}")))
    });

    // 14. conditional-probability identities, recurrence, Monte Carlo
    runner.run(14, "probability", |cfg| {
        for (d, r, q) in [(3u32, 1u32, 0.3f64), (3, 1, 0.5), (5, 2, 0.4)] {
            let report = theorem_prob_check(params(d, r), q, 1e-6)?;
            if !report.passed {
                return Ok((false, format!("identity check at ({d},{r}), q = {q}: {report}")));
            }
        }
        for (d, r, q) in [(3u32, 1u32, 0.5f64), (5, 2, 0.6)] {
            let report = verify_uk_recurrence(params(d, r), q, 6, 1e-10)?;
            if !report.passed {
                return Ok((false, format!("recurrence at ({d},{r}), q = {q}: {report}")));
            }
        }
        let trials = if cfg.quick { 50_000 } else { 400_000 };
        let mut worst: f64 = 0.0;
        for (d, r, q) in [(3u32, 1u32, 0.5f64), (3, 1, 0.3)] {
            let sim = simulate(params(d, r), q, trials, cfg.seed)?;
            for e in &sim.entries {
                worst = worst.max(e.z.abs());
                if e.z.abs() >= 4.0 {
                    return Ok((
                        false,
                        format!("{} at ({d},{r}), q = {q}: z = {:.2}", e.quantity, e.z),
                    ));
                }
            }
        }
        Ok((true, format!("identities at 1e-6, recurrence at 1e-10, MC worst |z| = {worst:.2}")))
    });

    // 15. the mock theta value stays below 1 on the real segment
    runner.run(15, "g3-bound", |_| {
        let mut closest = f64::INFINITY;
        for (d, r) in [(3u32, 1u32), (4, 1), (5, 1), (5, 2), (7, 3)] {
            let p = params(d, r);
            for i in 1..=9u32 {
                let q = i as f64 / 10.0;
                let v = g3_series_value(p, q, 1e-9)?;
                if v.value + v.tail_bound >= 1.0 {
                    return Ok((
                        false,
                        format!("g3 = {} + tail {:e} not below 1 at ({d},{r}), q = {q}", v.value, v.tail_bound),
                    ));
                }
                closest = closest.min(1.0 - v.value - v.tail_bound);
            }
        }
        Ok((true, format!("5 parameter pairs, q in 0.1..0.9; min margin below 1 is {closest:.4}")))
    });

    // 16. every verifier catches a one-coefficient mutation
    runner.run(16, "negative-controls", |_| {
        let p = params(3, 1);
        let good = series_e_product(p, 60);
        let bad = corrupt(&good);
        let r1 = verify_equal(&bad, &series_e_product(p, 60), "mutated-schur")?;
        if r1.passed || r1.first_mismatch.is_none() {
            return Ok((false, "series mutation not located".into()));
        }
        let quotient = corrupt(&series_theta_quotient(p, 60)?);
        let r2 = verify_equal(&quotient, &series_e_product(p, 60), "mutated-quotient")?;
        if r2.passed || r2.first_mismatch.is_none() {
            return Ok((false, "quotient mutation not located".into()));
        }
        let sum = corrupt(&theta_sum_series(p, 80)?);
        let r3 = verify_equal(&sum, &theta_half_shift_series(p, 80)?, "mutated-theta")?;
        if r3.passed || r3.first_mismatch.is_none() {
            return Ok((false, "theta mutation not located".into()));
        }
        let r4 = crate::probability::verify_uk_recurrence_perturbed(p, 0.5, 5, 1e-10, (4, 1e-3))?;
        if r4.passed {
            return Ok((false, "perturbed recurrence not caught".into()));
        }
        let mm = r1.first_mismatch.expect("checked above");
        Ok((
            true,
            format!("all mutations caught; first located at q^{}", mm.exponent24 / 24),
        ))
    });

    runner.outcomes
}

/// True iff every criterion passed.
pub fn all_passed(outcomes: &[CriterionOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed)
}

/// JSON rendering of the whole matrix.
pub fn outcomes_to_json(outcomes: &[CriterionOutcome]) -> String {
    serde_json::to_string_pretty(outcomes).expect("outcome serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes_and_mutations_fail() {
        let outcomes = run_acceptance(SuiteConfig {
            quick: true,
            ..Default::default()
        });
        assert_eq!(outcomes.len(), 16);
        for o in &outcomes {
            assert!(o.passed, "{o}");
        }

        let mutated = run_acceptance(SuiteConfig {
            quick: true,
            inject_mutation: Some("schur".into()),
            ..Default::default()
        });
        let schur = mutated.iter().find(|o| o.name == "schur").unwrap();
        assert!(!schur.passed, "mutation hook had no effect");
        assert!(schur.detail.contains("mismatch"));
        assert!(!all_passed(&mutated));
    }
}
