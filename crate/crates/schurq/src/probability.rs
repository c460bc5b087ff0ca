//! The infinite independent-event model behind the conditional-probability
//! realization of the universal mock theta function.
//!
//! Fix real 0 < q < 1 and let events E_1, E_2, ... occur independently with
//! p_j = q^j / (1 + q^j). The gap events U and V impose, for each block n
//! (from n = 0 for U, n = 1 for V):
//!
//! - if E_{nd+r} occurs, then E_{nd+d-r} and E_{(n+1)d} do not;
//! - if E_{nd+d-r} occurs, then E_{(n+1)d} and E_{(n+1)d+r} do not;
//! - if E_{(n+1)d} occurs, then E_{(n+1)d+r}, E_{(n+1)d+d-r} and E_{(n+2)d}
//!   do not.
//!
//! Occurring indices in the residue classes 0, +-r (mod d) then form exactly
//! the gap-admissible partitions, and the conditional probabilities
//! P(U | V) and P(F_r F_{d-r} F_d | U) evaluate in closed form through the
//! renormalized generating function h(x) = f(x) / (-xq^r, -xq^(d-r), -xq^d;
//! q^d)_inf at x = q^(kd). Everything here is checked two ways: exact
//! numeric evaluation of those closed forms, and a seeded Monte Carlo
//! simulator over the truncated event space.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::identities::series_g3;
use crate::partitions::SchurParams;
use crate::qseries::NumericValue;

/// The truncated sample space: events E_1..E_J with the ignored tail
/// occurring with probability below epsilon per trial.
#[derive(Debug, Clone, Copy)]
pub struct ProbabilityModel {
    params: SchurParams,
    q: f64,
    epsilon: f64,
    j_trunc: usize,
}

impl ProbabilityModel {
    /// J is the least index with q^(J+1)/(1-q) <= epsilon, so that
    /// sum_{j>J} p_j < sum_{j>J} q^j stays below the tail budget.
    pub fn new(params: SchurParams, q: f64, epsilon: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::EvalPointOutOfRange(q));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParams(format!(
                "tail budget must be in (0,1), got {epsilon}"
            )));
        }
        let j = ((epsilon * (1.0 - q)).ln() / q.ln()).ceil() as usize;
        let j_trunc = j.max(2 * params.d() as usize + 1);
        // checked tail bound, not just the formula
        let tail = q.powi(j_trunc as i32 + 1) / (1.0 - q);
        if tail > epsilon {
            return Err(Error::InvalidParams(format!(
                "tail bound {tail:e} exceeds epsilon {epsilon:e}"
            )));
        }
        Ok(ProbabilityModel {
            params,
            q,
            epsilon,
            j_trunc,
        })
    }

    pub fn params(&self) -> SchurParams {
        self.params
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn j_trunc(&self) -> usize {
        self.j_trunc
    }

    pub fn event_prob(&self, j: u64) -> f64 {
        event_prob(j, self.q).expect("model q validated")
    }
}

/// p_j = q^j / (1 + q^j), the occurrence probability of E_j.
pub fn event_prob(j: u64, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::EvalPointOutOfRange(q));
    }
    if j == 0 {
        return Err(Error::InvalidParams("events are indexed from 1".into()));
    }
    let qj = q.powi(j as i32);
    Ok(qj / (1.0 + qj))
}

/// Complementary probability 1 - p_j = 1 / (1 + q^j).
pub fn event_prob_complement(j: u64, q: f64) -> Result<f64> {
    Ok(1.0 - event_prob(j, q)?)
}

/// One realization of the truncated event sequence; index j is 1-based and
/// indices beyond the truncation read as non-occurring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventConfiguration {
    occurred: Vec<bool>,
}

impl EventConfiguration {
    pub fn new(occurred: Vec<bool>) -> Self {
        EventConfiguration { occurred }
    }

    pub fn len(&self) -> usize {
        self.occurred.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occurred.is_empty()
    }

    /// Whether E_j occurred; j beyond the stored window is non-occurring.
    pub fn occurred(&self, j: u64) -> bool {
        j >= 1 && (j as usize) <= self.occurred.len() && self.occurred[j as usize - 1]
    }

    /// Indices of occurring events, descending.
    pub fn occurring_indices_desc(&self) -> Vec<u64> {
        let mut v: Vec<u64> = (1..=self.occurred.len() as u64)
            .filter(|&j| self.occurred(j))
            .collect();
        v.reverse();
        v
    }
}

fn satisfies_from(config: &EventConfiguration, params: SchurParams, start_block: u64) -> bool {
    let d = params.d() as u64;
    let r = params.r() as u64;
    let j_max = config.len() as u64;
    let mut n = start_block;
    loop {
        // all triggers of block n lie beyond the window: nothing can fail
        if n * d + r > j_max {
            return true;
        }
        if config.occurred(n * d + r)
            && (config.occurred(n * d + d - r) || config.occurred((n + 1) * d))
        {
            return false;
        }
        if config.occurred(n * d + d - r)
            && (config.occurred((n + 1) * d) || config.occurred((n + 1) * d + r))
        {
            return false;
        }
        if config.occurred((n + 1) * d)
            && (config.occurred((n + 1) * d + r)
                || config.occurred((n + 1) * d + d - r)
                || config.occurred((n + 2) * d))
        {
            return false;
        }
        n += 1;
    }
}

/// The gap event with conditions starting at E_r (block n = 0).
pub fn satisfies_u(config: &EventConfiguration, params: SchurParams) -> bool {
    satisfies_from(config, params, 0)
}

/// The gap event with conditions starting only at E_{d+r} (block n = 1); no
/// restriction is triggered by E_r, E_{d-r} or E_d.
pub fn satisfies_v(config: &EventConfiguration, params: SchurParams) -> bool {
    satisfies_from(config, params, 1)
}

const PRODUCT_EPS: f64 = 1e-18;

/// P(U_k) = h(q^(kd)) where h(x) = f(x) / (-xq^r, -xq^(d-r), -xq^d; q^d)_inf,
/// evaluated by numeric summation of the hypergeometric series for f and
/// direct products. U_0 is the unconditioned gap event U itself, where the
/// closed form collapses to prod_{n>=1} (1 + q^(dn))^(-1).
pub fn exact_prob_u_k(params: SchurParams, q: f64, k: u32, tol: f64) -> Result<NumericValue> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::EvalPointOutOfRange(q));
    }
    let d = params.d() as i32;
    let value = if k == 0 {
        // h(1) via the product identity; the hypergeometric series for f
        // degenerates at x = 1 (vanishing prefactor against a divergent sum)
        let mut p = 1.0f64;
        let mut n = 1;
        loop {
            let f = q.powi(d * n);
            if f < PRODUCT_EPS {
                break;
            }
            p /= 1.0 + f;
            n += 1;
        }
        p
    } else {
        let x = q.powi(d * k as i32);
        hyper_f(params, q, x) / triple_product(params, q, x)
    };
    let tail = product_tail_estimate(q);
    if tail > tol {
        return Err(Error::ToleranceUnreachable {
            tol,
            trunc: 0,
            tail,
            required: 0,
        });
    }
    Ok(NumericValue {
        value,
        tail_bound: tail,
    })
}

/// f(x) = (x; q^d)_inf * sum_n x^n (-q^r, -q^(d-r); q^d)_n / (q^d; q^d)_n
/// summed numerically; requires |x| < 1 for convergence of the sum.
fn hyper_f(params: SchurParams, q: f64, x: f64) -> f64 {
    let d = params.d() as f64;
    let r = params.r() as f64;
    debug_assert!(x < 1.0);
    let mut prefactor = 1.0f64;
    let mut k = 0.0f64;
    loop {
        let f = x * q.powf(d * k);
        if f < PRODUCT_EPS {
            break;
        }
        prefactor *= 1.0 - f;
        k += 1.0;
    }
    let mut acc = 0.0f64;
    let mut term = 1.0f64;
    let mut n = 0.0f64;
    loop {
        acc += term;
        n += 1.0;
        term *= x * (1.0 + q.powf(d * (n - 1.0) + r)) * (1.0 + q.powf(d * n - r))
            / (1.0 - q.powf(d * n));
        if term.abs() < PRODUCT_EPS * acc.abs() {
            break;
        }
    }
    prefactor * acc
}

/// (-xq^r, -xq^(d-r), -xq^d; q^d)_inf at real x.
fn triple_product(params: SchurParams, q: f64, x: f64) -> f64 {
    let d = params.d() as f64;
    let r = params.r() as f64;
    let mut p = 1.0f64;
    for shift in [r, d - r, d] {
        let mut i = 0.0f64;
        loop {
            let f = x * q.powf(shift + d * i);
            if f < PRODUCT_EPS {
                break;
            }
            p *= 1.0 + f;
            i += 1.0;
        }
    }
    p
}

fn product_tail_estimate(q: f64) -> f64 {
    // all series/products above stop once factors deviate from 1 by less
    // than PRODUCT_EPS; the remaining relative error is a geometric tail
    PRODUCT_EPS / (1.0 - q)
}

/// g3(-q^r; q^d) at real q by direct summation (the route independent of the
/// series module).
pub fn g3_numeric(params: SchurParams, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::EvalPointOutOfRange(q));
    }
    let d = params.d() as f64;
    let r = params.r() as f64;
    let mut denom = 1.0f64;
    let mut acc = 0.0f64;
    for n in 0..100_000 {
        let nf = n as f64;
        denom *= (1.0 + q.powf(r + d * nf)) * (1.0 + q.powf(d - r + d * nf));
        let term = q.powf(d * nf * (nf + 1.0)) / denom;
        acc += term;
        if term < PRODUCT_EPS * acc {
            break;
        }
    }
    Ok(acc)
}

/// g3(-q^r; q^d) at real q through the truncated series builder, with the
/// truncation raised until the reported tail bound clears `tol`.
pub fn g3_series_value(params: SchurParams, q: f64, tol: f64) -> Result<NumericValue> {
    let mut trunc = 256usize;
    loop {
        let series = series_g3(params.r(), params.d(), trunc)?;
        match series.eval_real(q) {
            Ok(v) if v.tail_bound <= tol => return Ok(v),
            Ok(_) | Err(Error::TailClampFailed(_)) if trunc < 1 << 16 => trunc *= 2,
            Ok(v) => {
                return Err(Error::ToleranceUnreachable {
                    tol,
                    trunc,
                    tail: v.tail_bound,
                    required: 2 * trunc,
                })
            }
            Err(e) => return Err(e),
        }
    }
}

/// One labelled numeric comparison.
#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
    pub tol: f64,
    pub passed: bool,
}

impl CheckEntry {
    fn new(label: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let abs_diff = (lhs - rhs).abs();
        CheckEntry {
            label: label.to_string(),
            lhs,
            rhs,
            abs_diff,
            tol,
            passed: abs_diff <= tol,
        }
    }
}

/// A bundle of numeric comparisons with an overall verdict.
#[derive(Debug, Clone, Serialize)]
pub struct NumericCheckReport {
    pub name: String,
    pub entries: Vec<CheckEntry>,
    pub passed: bool,
}

impl NumericCheckReport {
    fn from_entries(name: &str, entries: Vec<CheckEntry>) -> Self {
        let passed = entries.iter().all(|e| e.passed);
        NumericCheckReport {
            name: name.to_string(),
            entries,
            passed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

impl std::fmt::Display for NumericCheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "[{}] {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name
        )?;
        for e in &self.entries {
            writeln!(
                f,
                "  {} {}: lhs = {:.12}, rhs = {:.12}, |diff| = {:.3e} (tol {:.1e})",
                if e.passed { "ok " } else { "BAD" },
                e.label,
                e.lhs,
                e.rhs,
                e.abs_diff,
                e.tol
            )?;
        }
        Ok(())
    }
}

/// Check both conditional-probability identities at a real point:
///
/// 1. P(U | V) = 1 / ((1+q^r)(1+q^(d-r))(1+q^d) g3(-q^r; q^d))
/// 2. P(F_r F_(d-r) F_d | U) = g3(-q^r; q^d)
///
/// The probability side comes from the exact U_k evaluations; the mock theta
/// side is computed by two independent routes (truncated series evaluation
/// and direct numeric summation) which must also agree with each other.
pub fn theorem_prob_check(params: SchurParams, q: f64, tol: f64) -> Result<NumericCheckReport> {
    let d = params.d() as u64;
    let r = params.r() as u64;
    let pu = exact_prob_u_k(params, q, 0, tol)?.value;
    let pv = exact_prob_u_k(params, q, 1, tol)?.value;
    let g3_direct = g3_numeric(params, q)?;
    let g3_series = g3_series_value(params, q, tol)?.value;

    let pb_r = event_prob_complement(r, q)?;
    let pb_dr = event_prob_complement(d - r, q)?;
    let pb_d = event_prob_complement(d, q)?;

    let part1_prob = pu / pv;
    let part1_closed = pb_r * pb_dr * pb_d / g3_series;
    let part2_prob = pb_r * pb_dr * pb_d * pv / pu;

    let entries = vec![
        CheckEntry::new("P(U|V) vs closed form", part1_prob, part1_closed, tol),
        CheckEntry::new("P(F F F | U) vs series g3", part2_prob, g3_series, tol),
        CheckEntry::new("series g3 vs direct g3", g3_series, g3_direct, tol),
    ];
    Ok(NumericCheckReport::from_entries("theorem-prob", entries))
}

/// Verify the two-step recurrence satisfied by P(U_k): with p/pbar the event
/// probabilities at the block indices,
///
/// ```text
/// P(U_k) = (p_{kd+r} pbar_{kd+d-r} pbar_{(k+1)d}
///           + pbar_{kd+r} p_{kd+d-r} pbar_{(k+1)d}
///           + pbar_{kd+r} pbar_{kd+d-r} pbar_{(k+1)d}) P(U_{k+1})
///        + (pbar_{kd+r} pbar_{kd+d-r} p_{(k+1)d} pbar_{(k+1)d+r} pbar_{(k+1)d+d-r} pbar_{(k+2)d}
///           - pbar_{kd+r} p_{kd+d-r} pbar_{(k+1)d} p_{(k+1)d+r} pbar_{(k+1)d+d-r} pbar_{(k+2)d}) P(U_{k+2})
/// ```
///
/// within `tol` for 0 <= k <= k_max.
pub fn verify_uk_recurrence(
    params: SchurParams,
    q: f64,
    k_max: u32,
    tol: f64,
) -> Result<NumericCheckReport> {
    uk_recurrence_check(params, q, k_max, tol, None)
}

/// Same check with one event probability perturbed by `delta`; the negative
/// control for the recurrence verifier.
pub fn verify_uk_recurrence_perturbed(
    params: SchurParams,
    q: f64,
    k_max: u32,
    tol: f64,
    perturb: (u64, f64),
) -> Result<NumericCheckReport> {
    uk_recurrence_check(params, q, k_max, tol, Some(perturb))
}

fn uk_recurrence_check(
    params: SchurParams,
    q: f64,
    k_max: u32,
    tol: f64,
    perturb: Option<(u64, f64)>,
) -> Result<NumericCheckReport> {
    let d = params.d() as u64;
    let r = params.r() as u64;
    let mut u_values = Vec::with_capacity(k_max as usize + 3);
    for k in 0..=k_max + 2 {
        u_values.push(exact_prob_u_k(params, q, k, tol.min(1e-12))?.value);
    }
    let p = |j: u64| -> f64 {
        let base = event_prob(j, q).expect("validated q");
        match perturb {
            Some((pj, delta)) if pj == j => base + delta,
            _ => base,
        }
    };
    let pb = |j: u64| -> f64 { 1.0 - p(j) };
    let mut entries = Vec::new();
    for k in 0..=k_max as u64 {
        let c1 = p(k * d + r) * pb(k * d + d - r) * pb((k + 1) * d)
            + pb(k * d + r) * p(k * d + d - r) * pb((k + 1) * d)
            + pb(k * d + r) * pb(k * d + d - r) * pb((k + 1) * d);
        let c2 = pb(k * d + r)
            * pb(k * d + d - r)
            * p((k + 1) * d)
            * pb((k + 1) * d + r)
            * pb((k + 1) * d + d - r)
            * pb((k + 2) * d)
            - pb(k * d + r)
                * p(k * d + d - r)
                * pb((k + 1) * d)
                * p((k + 1) * d + r)
                * pb((k + 1) * d + d - r)
                * pb((k + 2) * d);
        let lhs = u_values[k as usize];
        let rhs = c1 * u_values[k as usize + 1] + c2 * u_values[k as usize + 2];
        entries.push(CheckEntry::new(&format!("k = {k}"), lhs, rhs, tol));
    }
    Ok(NumericCheckReport::from_entries("uk-recurrence", entries))
}

/// One estimated quantity of a simulation run.
#[derive(Debug, Clone, Serialize)]
pub struct SimEntry {
    pub quantity: String,
    pub estimate: f64,
    pub stderr: f64,
    pub target: f64,
    pub z: f64,
}

/// Result of a seeded Monte Carlo run over the truncated event space.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub d: u32,
    pub r: u32,
    pub q: f64,
    pub trials: u64,
    pub seed: u64,
    pub epsilon: f64,
    pub j_trunc: usize,
    pub count_u: u64,
    pub count_v: u64,
    pub count_fff_and_u: u64,
    pub entries: Vec<SimEntry>,
}

impl SimulationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Run `trials` independent realizations of E_1..E_J with per-trial
/// substreams of a counter-based generator (ChaCha8 keyed by `seed`, stream
/// = trial index), tally the gap events, and compare the estimates against
/// exact targets. Conditional quantities are estimated by rejection, using
/// only the trials where the conditioning event holds. Counts are integers
/// summed across trials, so the report is bit-identical however the trials
/// are scheduled across threads.
pub fn simulate(params: SchurParams, q: f64, trials: u64, seed: u64) -> Result<SimulationReport> {
    const EPSILON: f64 = 1e-9;
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be >= 1".into()));
    }
    if EPSILON * trials as f64 >= 0.1 {
        return Err(Error::InvalidParams(format!(
            "expected tail events {:.2} not below 0.1; reduce trials",
            EPSILON * trials as f64
        )));
    }
    let model = ProbabilityModel::new(params, q, EPSILON)?;
    let j = model.j_trunc();
    let probs: Vec<f64> = (1..=j as u64).map(|i| model.event_prob(i)).collect();
    let d = params.d() as u64;
    let r = params.r() as u64;

    let (count_u, count_v, count_fff_and_u) = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let occurred: Vec<bool> = probs.iter().map(|&p| rng.random::<f64>() < p).collect();
            let config = EventConfiguration::new(occurred);
            let u = satisfies_u(&config, params);
            let v = satisfies_v(&config, params);
            let fff = !config.occurred(r) && !config.occurred(d - r) && !config.occurred(d);
            (u as u64, v as u64, (fff && u) as u64)
        })
        .reduce(
            || (0u64, 0u64, 0u64),
            |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
        );

    let tol = 1e-10;
    let target_u = exact_prob_u_k(params, q, 0, tol)?.value;
    let target_v = exact_prob_u_k(params, q, 1, tol)?.value;
    let target_u_given_v = target_u / target_v;
    let target_fff_given_u = g3_numeric(params, q)?;

    let entry = |name: &str, hits: u64, outof: u64, target: f64| -> SimEntry {
        let est = hits as f64 / outof as f64;
        let stderr = (est * (1.0 - est) / outof as f64).sqrt();
        let z = if stderr > 0.0 {
            (est - target) / stderr
        } else if (est - target).abs() < 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        SimEntry {
            quantity: name.to_string(),
            estimate: est,
            stderr,
            target,
            z,
        }
    };
    let entries = vec![
        entry("P(U)", count_u, trials, target_u),
        entry("P(U|V)", count_u, count_v, target_u_given_v),
        entry("P(FrFdrFd|U)", count_fff_and_u, count_u, target_fff_given_u),
    ];

    Ok(SimulationReport {
        d: params.d(),
        r: params.r(),
        q,
        trials,
        seed,
        epsilon: EPSILON,
        j_trunc: j,
        count_u,
        count_v,
        count_fff_and_u,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{is_schur_admissible, Partition};

    fn params(d: u32, r: u32) -> SchurParams {
        SchurParams::new(d, r).unwrap()
    }

    fn config_from_indices(j_max: usize, indices: &[u64]) -> EventConfiguration {
        let mut occurred = vec![false; j_max];
        for &i in indices {
            occurred[i as usize - 1] = true;
        }
        EventConfiguration::new(occurred)
    }

    #[test]
    fn event_probabilities() {
        assert!((event_prob(1, 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((event_prob(2, 0.5).unwrap() - 0.2).abs() < 1e-15);
        assert!(event_prob(3, 1e-9).unwrap() < 1e-26);
        assert!(event_prob(0, 0.5).is_err());
        assert!(event_prob(1, 1.5).is_err());
        assert!(
            (event_prob(4, 0.7).unwrap() + event_prob_complement(4, 0.7).unwrap() - 1.0).abs()
                < 1e-15
        );
    }

    #[test]
    fn model_truncation_bound() {
        let m = ProbabilityModel::new(params(3, 1), 0.5, 1e-9).unwrap();
        let j = m.j_trunc();
        assert!(0.5f64.powi(j as i32 + 1) / 0.5 <= 1e-9);
        // 31 events suffice at q = 1/2 for a 1e-9 tail
        assert_eq!(j, 31);
        assert!(ProbabilityModel::new(params(3, 1), 0.0, 1e-9).is_err());
    }

    #[test]
    fn predicate_examples() {
        let p31 = params(3, 1);
        let all_false = EventConfiguration::new(vec![false; 12]);
        assert!(satisfies_u(&all_false, p31));
        assert!(satisfies_v(&all_false, p31));

        // E_1 and E_2 together violate the first block for U, but V has no
        // conditions below E_4
        let c = config_from_indices(12, &[1, 2]);
        assert!(!satisfies_u(&c, p31));
        assert!(satisfies_v(&c, p31));

        // occurring {7, 4} mirrors an admissible gap partition
        let c = config_from_indices(12, &[4, 7]);
        assert!(satisfies_u(&c, p31));

        // E_3 occurring forbids E_4 (block n = 0, third family)
        let c = config_from_indices(12, &[3, 4]);
        assert!(!satisfies_u(&c, p31));
        assert!(satisfies_v(&c, p31));
    }

    #[test]
    fn u_matches_gap_admissibility_exhaustively() {
        // occurring residue-class indices, read as parts, must form an
        // admissible partition exactly when U holds
        for p in [params(3, 1), params(5, 2)] {
            let j = 12usize;
            for mask in 0u32..(1 << j) {
                let occurred: Vec<bool> = (0..j).map(|i| mask >> i & 1 == 1).collect();
                let config = EventConfiguration::new(occurred);
                let parts: Vec<u64> = config
                    .occurring_indices_desc()
                    .into_iter()
                    .filter(|&i| p.residue_admissible(i))
                    .collect();
                let partition = Partition::new(parts).unwrap();
                assert_eq!(
                    satisfies_u(&config, p),
                    is_schur_admissible(&partition, p, 0),
                    "mask {mask:b} at {p}"
                );
            }
        }
    }

    #[test]
    fn irrelevant_indices_never_matter() {
        let p = params(5, 2);
        let j = 11usize;
        for mask in 0u32..(1 << j) {
            let occurred: Vec<bool> = (0..j).map(|i| mask >> i & 1 == 1).collect();
            let base = EventConfiguration::new(occurred.clone());
            let u = satisfies_u(&base, p);
            let v = satisfies_v(&base, p);
            for flip in 1..=j as u64 {
                if p.residue_admissible(flip) {
                    continue;
                }
                let mut flipped = occurred.clone();
                flipped[flip as usize - 1] = !flipped[flip as usize - 1];
                let fc = EventConfiguration::new(flipped);
                assert_eq!(u, satisfies_u(&fc, p), "U changed by E_{flip}");
                assert_eq!(v, satisfies_v(&fc, p), "V changed by E_{flip}");
            }
        }
    }

    #[test]
    fn v_ignores_the_first_block_triggers() {
        let p = params(4, 1);
        for mask in 0u32..(1 << 10) {
            let occurred: Vec<bool> = (0..10).map(|i| mask >> i & 1 == 1).collect();
            let base = EventConfiguration::new(occurred.clone());
            let v = satisfies_v(&base, p);
            for flip in [1u64, 3, 4] {
                let mut flipped = occurred.clone();
                flipped[flip as usize - 1] = !flipped[flip as usize - 1];
                assert_eq!(
                    v,
                    satisfies_v(&EventConfiguration::new(flipped), p),
                    "V changed by E_{flip}"
                );
            }
        }
    }

    #[test]
    fn exact_u_probability_values() {
        // P(U) = prod (1 + q^(3n))^(-1) at q = 1/2
        let v = exact_prob_u_k(params(3, 1), 0.5, 0, 1e-10).unwrap();
        assert!((v.value - 0.8732639418837083).abs() < 1e-13);
        let pv = exact_prob_u_k(params(3, 1), 0.5, 1, 1e-10).unwrap();
        assert!((pv.value - 0.9964348971760564).abs() < 1e-13);
        // increasing in k toward 1
        let mut prev = v.value;
        for k in 1..=5 {
            let vk = exact_prob_u_k(params(3, 1), 0.5, k, 1e-10).unwrap().value;
            assert!(vk > prev, "P(U_k) not increasing at k = {k}");
            assert!(vk < 1.0 + 1e-12);
            prev = vk;
        }
        // q -> 0+: nothing occurs
        for k in 0..=3 {
            let vk = exact_prob_u_k(params(5, 2), 1e-6, k, 1e-10).unwrap().value;
            assert!((vk - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn g3_routes_agree() {
        for (p, q) in [
            (params(3, 1), 0.3),
            (params(3, 1), 0.5),
            (params(5, 2), 0.4),
            (params(7, 3), 0.6),
        ] {
            let direct = g3_numeric(p, q).unwrap();
            let series = g3_series_value(p, q, 1e-9).unwrap();
            assert!(
                (direct - series.value).abs() <= 1e-9 + series.tail_bound,
                "routes disagree at {p}, q = {q}: {direct} vs {}",
                series.value
            );
        }
        assert!((g3_numeric(params(3, 1), 0.3).unwrap() - 0.7062253986958344).abs() < 1e-13);
    }

    #[test]
    fn theorem_check_examples() {
        let report = theorem_prob_check(params(3, 1), 0.3, 1e-6).unwrap();
        assert!(report.passed, "{report}");
        // part (2) value at q = 0.3
        assert!((report.entries[1].rhs - 0.7062253986958344).abs() < 1e-10);
        let report = theorem_prob_check(params(5, 2), 0.4, 1e-6).unwrap();
        assert!(report.passed, "{report}");
        assert!((report.entries[1].rhs - 0.8102999558605579).abs() < 1e-10);
        // empty-event limit: both parts tend to 1
        let report = theorem_prob_check(params(3, 1), 0.01, 1e-6).unwrap();
        assert!(report.passed);
        assert!((report.entries[0].lhs - 1.0).abs() < 0.02);
        assert!((report.entries[1].lhs - 1.0).abs() < 0.02);
    }

    #[test]
    fn uk_recurrence_and_negative_control() {
        let ok = verify_uk_recurrence(params(3, 1), 0.5, 6, 1e-10).unwrap();
        assert!(ok.passed, "{ok}");
        let ok = verify_uk_recurrence(params(5, 2), 0.6, 5, 1e-10).unwrap();
        assert!(ok.passed, "{ok}");
        // perturbing one p_j breaks it
        let broken =
            verify_uk_recurrence_perturbed(params(3, 1), 0.5, 6, 1e-10, (4, 1e-3)).unwrap();
        assert!(!broken.passed);
        assert!(broken.entries.iter().any(|e| !e.passed && e.abs_diff > 1e-6));
    }

    #[test]
    fn simulation_hits_targets() {
        let report = simulate(params(3, 1), 0.5, 100_000, 42).unwrap();
        for e in &report.entries {
            assert!(
                e.z.abs() < 4.0,
                "{} missed: estimate {} target {} z {}",
                e.quantity,
                e.estimate,
                e.target,
                e.z
            );
        }
        // near-empty configurations at tiny q
        let report = simulate(params(3, 1), 0.01, 20_000, 7).unwrap();
        for e in &report.entries {
            assert!(e.estimate > 0.97, "{} = {}", e.quantity, e.estimate);
        }
        assert!(simulate(params(3, 1), 0.5, 0, 1).is_err());
    }

    #[test]
    fn simulation_is_deterministic() {
        let a = simulate(params(5, 2), 0.4, 30_000, 123).unwrap();
        let b = simulate(params(5, 2), 0.4, 30_000, 123).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let c = simulate(params(5, 2), 0.4, 30_000, 124).unwrap();
        assert_ne!(a.count_u, 0);
        assert!(a.count_u != c.count_u || a.count_v != c.count_v);
    }
}
