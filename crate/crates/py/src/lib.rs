//! Python bindings. Results with several fields come back as plain dicts.

use kaden_core::euler::{self, StreamBump, TestField};
use kaden_core::measures::{KadenSheet, SheetMu, TimeZeroSheet, VorticitySheet};
use kaden_core::moments::{self, EnergyMethod};
use kaden_core::quadrature::QuadConfig;
use kaden_core::velocity::{self, KadenStrategy, MatchingScheme};
use kaden_core::{reproduce, Error, RunConfig};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Domain { .. } | Error::Config(_) | Error::OnSupport { .. } | Error::NearSheet { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => {
            let list = PyList::empty(py);
            for x in a {
                list.append(to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(m) => {
            let dict = PyDict::new(py);
            for (k, x) in m {
                dict.set_item(k, to_py(py, x)?)?;
            }
            dict.into_any()
        }
    })
}

fn dict<'py>(py: Python<'py>, x: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    to_py(py, &v)
}

/// Sheet exponent `μ ∈ (1/2, 1)` together with `α = 2 - 1/μ`.
#[pyclass(name = "SheetMu", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PySheetMu(SheetMu);

#[pymethods]
impl PySheetMu {
    #[new]
    fn new(mu: f64) -> PyResult<Self> {
        SheetMu::new(mu).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn from_alpha(alpha: f64) -> PyResult<Self> {
        SheetMu::from_alpha(alpha).map(Self).map_err(py_err)
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.0.mu()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    fn __repr__(&self) -> String {
        format!("SheetMu(mu={}, alpha={})", self.0.mu(), self.0.alpha())
    }
}

fn sheet(measure: &str, mu: SheetMu, t: f64) -> PyResult<VorticitySheet> {
    match measure {
        "timezero" => Ok(TimeZeroSheet::new(mu).into()),
        "kaden" => Ok(KadenSheet::new(mu, t).map_err(py_err)?.into()),
        other => Err(PyValueError::new_err(format!("unknown measure {other:?}"))),
    }
}

fn field(json: &str) -> PyResult<TestField> {
    let bump: StreamBump = serde_json::from_str(json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    TestField::new(bump).map_err(py_err)
}

/// `PV∫_0^∞ t^(α-1)/(1-t) dt` as `(value, error_estimate)`.
#[pyfunction]
fn pv_lemma(alpha: f64) -> PyResult<(f64, f64)> {
    let r = velocity::pv_lemma_value(alpha, &QuadConfig::default()).map_err(py_err)?;
    Ok((r.value, r.error_estimate))
}

/// Velocity of the time-zero sheet at `(x1, x2)` as `(v1, v2, error_estimate)`.
#[pyfunction]
fn velocity_timezero(x1: f64, x2: f64, mu: PySheetMu) -> PyResult<(f64, f64, f64)> {
    let s = velocity::velocity_timezero([x1, x2], mu.0, &QuadConfig::default()).map_err(py_err)?;
    Ok((s.vector[0], s.vector[1], s.error_estimate))
}

#[pyfunction]
#[pyo3(signature = (x1, x2, mu, t = 1.0))]
fn velocity_kaden(x1: f64, x2: f64, mu: PySheetMu, t: f64) -> PyResult<(f64, f64, f64)> {
    let sh = KadenSheet::new(mu.0, t).map_err(py_err)?;
    let r = velocity::kaden_velocity(
        &sh,
        Complex64::new(x1, x2),
        KadenStrategy::PhaseSubstitution,
        &QuadConfig::default(),
    )
    .map_err(py_err)?;
    Ok((r.value.re, r.value.im, r.error_estimate))
}

#[pyfunction]
#[pyo3(signature = (measure, mu, r, t = 1.0, method = "series"))]
fn surface_energy<'py>(
    py: Python<'py>,
    measure: &str,
    mu: PySheetMu,
    r: f64,
    t: f64,
    method: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let method = match method {
        "series" => EnergyMethod::Series,
        "direct" => EnergyMethod::Direct,
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    let cfg = RunConfig::default();
    let res = moments::surface_energy(&sheet(measure, mu.0, t)?, r, method, cfg.max_series_order, &cfg.quad)
        .map_err(py_err)?;
    dict(py, &res)
}

#[pyfunction]
fn surface_energy_closed(mu: PySheetMu, r: f64) -> PyResult<f64> {
    moments::surface_energy_closed(mu.0, r).map_err(py_err)
}

/// Inner moments `0..=order` and outer moments `1..=order` as complex lists.
#[pyfunction]
#[pyo3(signature = (measure, mu, r, order, t = 1.0))]
fn moment_table<'py>(
    py: Python<'py>,
    measure: &str,
    mu: PySheetMu,
    r: f64,
    order: u32,
    t: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let m = moments::moment_table(&sheet(measure, mu.0, t)?, r, order, &QuadConfig::default()).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("r", m.r)?;
    out.set_item("inner", m.inner)?;
    out.set_item("outer", m.outer)?;
    out.set_item("error_estimate", m.error_estimate)?;
    out.set_item("truncation_bound", m.truncation_bound)?;
    out.set_item("converged", m.converged)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (gamma = 1.0, scheme = "listing"))]
fn matching_lhs<'py>(py: Python<'py>, gamma: f64, scheme: &str) -> PyResult<Bound<'py, PyAny>> {
    let scheme = match scheme {
        "listing" => MatchingScheme::Listing,
        "adaptive" => MatchingScheme::Adaptive,
        other => return Err(PyValueError::new_err(format!("unknown scheme {other:?}"))),
    };
    let r = velocity::matching_lhs(gamma, scheme, &QuadConfig::default()).map_err(py_err)?;
    dict(py, &r)
}

/// Momentum pairing against a bump given as JSON.
#[pyfunction]
fn momentum_form<'py>(py: Python<'py>, mu: PySheetMu, field_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let r = euler::momentum_form(mu.0, &field(field_json)?, &QuadConfig::default()).map_err(py_err)?;
    dict(py, &r)
}

#[pyfunction]
fn line_rhs(mu: PySheetMu, field_json: &str) -> PyResult<(f64, f64)> {
    let r = euler::line_rhs(mu.0, &field(field_json)?, &QuadConfig::default()).map_err(py_err)?;
    Ok((r.value, r.error_estimate))
}

#[pyfunction]
fn impulse_y() -> PyResult<(f64, f64)> {
    let r = euler::impulse_y(&QuadConfig::default()).map_err(py_err)?;
    Ok((r.y[0], r.y[1]))
}

#[pyfunction]
fn condition_report<'py>(py: Python<'py>, mu: PySheetMu) -> PyResult<Bound<'py, PyAny>> {
    let r = euler::condition_report(mu.0, &QuadConfig::default()).map_err(py_err)?;
    dict(py, &r)
}

#[pyfunction]
fn run_criterion<'py>(py: Python<'py>, id: u32) -> PyResult<Bound<'py, PyAny>> {
    dict(py, &reproduce::run_criterion(id, &RunConfig::default()))
}

#[pymodule]
fn kaden(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySheetMu>()?;
    m.add_function(wrap_pyfunction!(pv_lemma, m)?)?;
    m.add_function(wrap_pyfunction!(velocity_timezero, m)?)?;
    m.add_function(wrap_pyfunction!(velocity_kaden, m)?)?;
    m.add_function(wrap_pyfunction!(surface_energy, m)?)?;
    m.add_function(wrap_pyfunction!(surface_energy_closed, m)?)?;
    m.add_function(wrap_pyfunction!(moment_table, m)?)?;
    m.add_function(wrap_pyfunction!(matching_lhs, m)?)?;
    m.add_function(wrap_pyfunction!(momentum_form, m)?)?;
    m.add_function(wrap_pyfunction!(line_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(impulse_y, m)?)?;
    m.add_function(wrap_pyfunction!(condition_report, m)?)?;
    m.add_function(wrap_pyfunction!(run_criterion, m)?)?;
    Ok(())
}
