//! Python bindings for the q-series laboratory: the series type, the
//! generating-function builders, enumeration oracles, identity verifiers,
//! asymptotic estimates, and the probability model.
//!
//! Build with `cargo build -p schurq-py --release`; the resulting
//! `libschurq_py.so` imports as `schurq_py` (see python/smoke_test.py).

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use schurq::asymptotics::{self, Family};
use schurq::identities;
use schurq::partitions::{self, SchurParams};
use schurq::probability;
use schurq::qseries;

fn err(e: schurq::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn params(d: u32, r: u32) -> PyResult<SchurParams> {
    SchurParams::new(d, r).map_err(err)
}

fn family(name: &str) -> PyResult<Family> {
    name.parse().map_err(err)
}

/// Recursive JSON -> Python conversion for report objects.
fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(match value {
        serde_json::Value::Null => py.None(),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().unbind().into(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.unbind().into()
            } else {
                n.as_f64()
                    .ok_or_else(|| PyRuntimeError::new_err("non-finite number"))?
                    .into_pyobject(py)?
                    .unbind()
                    .into()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.unbind().into(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.unbind().into()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, json_to_py(py, v)?)?;
            }
            dict.unbind().into()
        }
    })
}

fn report_to_py(py: Python<'_>, json: &str) -> PyResult<Py<PyAny>> {
    let value: serde_json::Value =
        serde_json::from_str(json).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    json_to_py(py, &value)
}

/// Truncated power series in q with exact integer coefficients and an
/// exponent offset in units of 1/24.
#[pyclass(name = "QSeries", frozen)]
struct PyQSeries {
    inner: qseries::QSeries,
}

#[pymethods]
impl PyQSeries {
    #[getter]
    fn offset24(&self) -> i64 {
        self.inner.offset24()
    }

    #[getter]
    fn trunc(&self) -> usize {
        self.inner.trunc()
    }

    /// Exact coefficient of q^n (whole exponents).
    fn coefficient(&self, n: i64) -> PyResult<BigInt> {
        self.inner.coefficient(n).map_err(err)
    }

    /// All stored coefficients, lowest exponent first.
    fn coefficients(&self) -> Vec<BigInt> {
        self.inner.coeffs().to_vec()
    }

    fn mul(&self, other: &PyQSeries) -> PyQSeries {
        PyQSeries {
            inner: self.inner.mul(&other.inner),
        }
    }

    fn add(&self, other: &PyQSeries) -> PyResult<PyQSeries> {
        Ok(PyQSeries {
            inner: self.inner.add(&other.inner).map_err(err)?,
        })
    }

    fn inverse(&self) -> PyResult<PyQSeries> {
        Ok(PyQSeries {
            inner: self.inner.inverse().map_err(err)?,
        })
    }

    /// Evaluate at real 0 < q0 < 1; returns (value, tail_bound).
    fn eval(&self, q0: f64) -> PyResult<(f64, f64)> {
        let v = self.inner.eval_real(q0).map_err(err)?;
        Ok((v.value, v.tail_bound))
    }

    /// Exact evaluation at the rational point num/den rendered to the given
    /// number of significant decimal digits; returns (decimal, tail_bound).
    fn eval_decimal(&self, num: u64, den: u64, digits: usize) -> PyResult<(String, f64)> {
        self.inner.eval_real_decimal(num, den, digits).map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyQSeries> {
        Ok(PyQSeries {
            inner: qseries::QSeries::from_json(text).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "QSeries(offset24={}, trunc={})",
            self.inner.offset24(),
            self.inner.trunc()
        )
    }

    fn __eq__(&self, other: &PyQSeries) -> bool {
        self.inner == other.inner
    }
}

fn wrap(inner: qseries::QSeries) -> PyQSeries {
    PyQSeries { inner }
}

// --- series builders --------------------------------------------------------

/// (sign*q^k; q^m)_count; count = None means the infinite product.
#[pyfunction]
#[pyo3(signature = (sign, k, step, count, trunc))]
fn pochhammer(
    sign: i8,
    k: usize,
    step: usize,
    count: Option<usize>,
    trunc: usize,
) -> PyResult<PyQSeries> {
    let count = match count {
        Some(n) => qseries::PochhammerCount::Finite(n),
        None => qseries::PochhammerCount::Infinite,
    };
    Ok(wrap(
        qseries::pochhammer(sign, k, step, count, trunc).map_err(err)?,
    ))
}

#[pyfunction]
fn eta_series(scale: usize, trunc: usize) -> PyQSeries {
    wrap(qseries::eta_series(scale, trunc))
}

#[pyfunction]
fn theta_product_series(d: u32, r: u32, trunc: usize) -> PyResult<PyQSeries> {
    Ok(wrap(
        qseries::theta_half_shift_series(params(d, r)?, trunc).map_err(err)?,
    ))
}

#[pyfunction]
fn theta_sum_series(d: u32, r: u32, trunc: usize) -> PyResult<PyQSeries> {
    Ok(wrap(
        qseries::theta_sum_series(params(d, r)?, trunc).map_err(err)?,
    ))
}

#[pyfunction]
fn series_e_product(d: u32, r: u32, trunc: usize) -> PyResult<PyQSeries> {
    Ok(wrap(identities::series_e_product(params(d, r)?, trunc)))
}

#[pyfunction]
fn series_c_bilateral(d: u32, r: u32, trunc: usize) -> PyResult<PyQSeries> {
    Ok(wrap(identities::series_c_bilateral(params(d, r)?, trunc)))
}

#[pyfunction]
fn series_c_andrews(trunc: usize) -> PyQSeries {
    wrap(identities::series_c_andrews_rhs(trunc))
}

#[pyfunction]
fn series_g3(a: u32, m: u32, trunc: usize) -> PyResult<PyQSeries> {
    Ok(wrap(identities::series_g3(a, m, trunc).map_err(err)?))
}

#[pyfunction]
fn series_theta_quotient(d: u32, r: u32, trunc: usize) -> PyResult<PyQSeries> {
    Ok(wrap(
        identities::series_theta_quotient(params(d, r)?, trunc).map_err(err)?,
    ))
}

// --- enumeration oracles ------------------------------------------------------

/// Gap-admissible partition count with all parts > min_exclusive.
#[pyfunction]
fn count_schur(d: u32, r: u32, min_exclusive: u64, n: u64) -> PyResult<BigInt> {
    Ok(partitions::count_schur(params(d, r)?, min_exclusive, n).into())
}

#[pyfunction]
fn count_schur_by_parts(
    d: u32,
    r: u32,
    min_exclusive: u64,
    n: u64,
    parts: u64,
) -> PyResult<BigInt> {
    Ok(partitions::count_schur_by_parts(params(d, r)?, min_exclusive, n, parts).into())
}

#[pyfunction]
fn count_distinct_congruent(d: u32, r: u32, n: u64) -> PyResult<BigInt> {
    Ok(partitions::count_distinct_congruent(params(d, r)?, n).into())
}

#[pyfunction]
fn count_congruence_classes(modulus: u32, residues: Vec<u32>, n: u64) -> PyResult<BigInt> {
    Ok(partitions::count_congruence_classes(modulus, &residues, n)
        .map_err(err)?
        .into())
}

#[pyfunction]
fn count_gap_partitions(gap: u64, min_part: u64, n: u64) -> PyResult<BigInt> {
    Ok(partitions::count_gap_partitions(gap, min_part, n)
        .map_err(err)?
        .into())
}

// --- verification ---------------------------------------------------------------

/// Check one named identity; returns a dict with `passed` and, on failure,
/// `first_mismatch`. Names: schur, bilateral, theta-quotient,
/// univ-factorization, andrews-c31, qdifference, an-recurrence,
/// triple-product.
#[pyfunction]
#[pyo3(signature = (identity, d = None, r = None, trunc = 200))]
fn verify_identity(
    py: Python<'_>,
    identity: &str,
    d: Option<u32>,
    r: Option<u32>,
    trunc: usize,
) -> PyResult<Py<PyAny>> {
    let need = || -> PyResult<SchurParams> {
        match (d, r) {
            (Some(d), Some(r)) => params(d, r),
            _ => Err(PyValueError::new_err("this identity needs d and r")),
        }
    };
    let report = match identity {
        "schur" => {
            let p = need()?;
            let series = identities::series_e_product(p, trunc);
            let mut mismatch = None;
            for n in 0..=trunc.min(60) as u64 {
                let lhs = series.coefficient(n as i64).map_err(err)?;
                let rhs = BigInt::from(partitions::count_distinct_congruent(p, n));
                if lhs != rhs {
                    mismatch = Some((n, lhs, rhs));
                    break;
                }
            }
            let dict = PyDict::new(py);
            dict.set_item("identity", "schur")?;
            dict.set_item("passed", mismatch.is_none())?;
            if let Some((n, lhs, rhs)) = mismatch {
                dict.set_item("first_mismatch", (n, lhs.to_string(), rhs.to_string()))?;
            }
            return Ok(dict.unbind().into());
        }
        "bilateral" => {
            let p = need()?;
            let lhs = identities::series_c_bilateral(p, trunc);
            let rhs = identities::series_e_product(p, trunc)
                .mul(&identities::series_g3(p.r(), p.d(), trunc).map_err(err)?);
            identities::verify_equal(&lhs, &rhs, "bilateral").map_err(err)?
        }
        "theta-quotient" => {
            let p = need()?;
            identities::verify_equal(
                &identities::series_theta_quotient(p, trunc).map_err(err)?,
                &identities::series_e_product(p, trunc),
                "theta-quotient",
            )
            .map_err(err)?
        }
        "univ-factorization" => {
            let p = need()?;
            let lhs = identities::series_theta_quotient(p, trunc)
                .map_err(err)?
                .mul(&identities::series_g3(p.r(), p.d(), trunc).map_err(err)?);
            identities::verify_equal(
                &lhs,
                &identities::series_c_bilateral(p, trunc),
                "univ-factorization",
            )
            .map_err(err)?
        }
        "andrews-c31" => {
            let lhs = identities::series_c_andrews_rhs(trunc);
            let rhs = identities::series_c_bilateral(params(3, 1)?, trunc);
            identities::verify_equal(&lhs, &rhs, "andrews-c31").map_err(err)?
        }
        "qdifference" => identities::verify_qdifference(need()?, 5, trunc.min(60)),
        "an-recurrence" => identities::verify_an_recurrence(need()?, 8, trunc),
        "triple-product" => {
            let p = need()?;
            identities::verify_equal(
                &qseries::theta_sum_series(p, trunc).map_err(err)?,
                &qseries::theta_half_shift_series(p, trunc).map_err(err)?,
                "triple-product",
            )
            .map_err(err)?
        }
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown identity {other:?}"
            )))
        }
    };
    report_to_py(py, &report.to_json())
}

// --- asymptotics -----------------------------------------------------------------

#[pyfunction]
fn asymptotic_constants(py: Python<'_>, d: u32, r: u32) -> PyResult<Py<PyAny>> {
    let c = asymptotics::constants(params(d, r)?);
    report_to_py(py, &serde_json::to_string(&c).expect("serializable"))
}

/// Natural log of the asymptotic coefficient estimate ('B' or 'C', 1 or 2 terms).
#[pyfunction]
fn estimate_log(which: &str, d: u32, r: u32, n: u64, terms: u32) -> PyResult<f64> {
    Ok(
        asymptotics::estimate_coefficient(family(which)?, params(d, r)?, n, terms)
            .map_err(err)?
            .ln,
    )
}

/// Exact coefficients of the chosen family up to n_max.
#[pyfunction]
fn exact_coefficients(which: &str, d: u32, r: u32, n_max: usize) -> PyResult<Vec<BigInt>> {
    asymptotics::exact_coefficients(
        family(which)?,
        params(d, r)?,
        n_max,
        asymptotics::DEFAULT_BUDGET,
    )
    .map_err(err)
}

/// Least index from which the `b` family dominates the `a` family through
/// n_max, or None.
#[pyfunction]
fn crossover(
    which: &str,
    a_d: u32,
    a_r: u32,
    b_d: u32,
    b_r: u32,
    n_max: usize,
) -> PyResult<Option<u64>> {
    asymptotics::crossover(
        params(a_d, a_r)?,
        params(b_d, b_r)?,
        family(which)?,
        n_max,
        asymptotics::DEFAULT_BUDGET,
    )
    .map_err(err)
}

// --- probability -------------------------------------------------------------------

/// P(U_k) for the gap event starting at block k.
#[pyfunction]
#[pyo3(signature = (d, r, q, k = 0))]
fn exact_prob_u(d: u32, r: u32, q: f64, k: u32) -> PyResult<f64> {
    Ok(probability::exact_prob_u_k(params(d, r)?, q, k, 1e-10)
        .map_err(err)?
        .value)
}

/// g3(-q^r; q^d) at a real point.
#[pyfunction]
fn g3_value(d: u32, r: u32, q: f64) -> PyResult<f64> {
    probability::g3_numeric(params(d, r)?, q).map_err(err)
}

/// Both conditional-probability identities at a real point, as a dict.
#[pyfunction]
#[pyo3(signature = (d, r, q, tol = 1e-6))]
fn theorem_prob_check(py: Python<'_>, d: u32, r: u32, q: f64, tol: f64) -> PyResult<Py<PyAny>> {
    let report = probability::theorem_prob_check(params(d, r)?, q, tol).map_err(err)?;
    report_to_py(py, &report.to_json())
}

/// Seeded Monte Carlo over the truncated event space, as a dict.
#[pyfunction]
#[pyo3(signature = (d, r, q, trials = 100_000, seed = 42))]
fn simulate(py: Python<'_>, d: u32, r: u32, q: f64, trials: u64, seed: u64) -> PyResult<Py<PyAny>> {
    let report = probability::simulate(params(d, r)?, q, trials, seed).map_err(err)?;
    report_to_py(py, &report.to_json())
}

#[pymodule]
fn schurq_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQSeries>()?;
    m.add_function(wrap_pyfunction!(pochhammer, m)?)?;
    m.add_function(wrap_pyfunction!(eta_series, m)?)?;
    m.add_function(wrap_pyfunction!(theta_product_series, m)?)?;
    m.add_function(wrap_pyfunction!(theta_sum_series, m)?)?;
    m.add_function(wrap_pyfunction!(series_e_product, m)?)?;
    m.add_function(wrap_pyfunction!(series_c_bilateral, m)?)?;
    m.add_function(wrap_pyfunction!(series_c_andrews, m)?)?;
    m.add_function(wrap_pyfunction!(series_g3, m)?)?;
    m.add_function(wrap_pyfunction!(series_theta_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(count_schur, m)?)?;
    m.add_function(wrap_pyfunction!(count_schur_by_parts, m)?)?;
    m.add_function(wrap_pyfunction!(count_distinct_congruent, m)?)?;
    m.add_function(wrap_pyfunction!(count_congruence_classes, m)?)?;
    m.add_function(wrap_pyfunction!(count_gap_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_constants, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_log, m)?)?;
    m.add_function(wrap_pyfunction!(exact_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(crossover, m)?)?;
    m.add_function(wrap_pyfunction!(exact_prob_u, m)?)?;
    m.add_function(wrap_pyfunction!(g3_value, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_prob_check, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
