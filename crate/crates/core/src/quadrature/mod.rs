//! Adaptive quadrature kernels.
//!
//! Everything here is built on a 21-point Gauss–Kronrod rule driven by a
//! global adaptive bisection loop. On top of it sit the pieces the sheet
//! integrals need: power-law endpoint substitutions, half-line tails with an
//! analytic truncation bound, symmetric-excision principal values with a
//! recorded ε-trace, and a per-period integrator for phases of the form
//! `c·t^(-p)` that accumulate infinitely many oscillations at `t = 0`.
//!
//! A fixed-level tanh–sinh rule is also provided; it mirrors the node
//! schedule of the arbitrary-precision library that produced the published
//! matching table, so that table can be regenerated node for node.

mod adaptive;
mod extrapolation;
mod finite;
mod halfline;
mod kronrod;
mod oscillatory;
mod pv;
mod tanh_sinh;

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use extrapolation::{richardson_at_zero, wynn_epsilon};
pub use finite::{integrate_finite, integrate_finite_with, EndpointSingularity};
pub use halfline::{integrate_halfline, integrate_halfline_with, HalflineOptions};
pub use oscillatory::{
    integrate_near_zero_oscillatory, integrate_power_phase, integrate_power_phase_complex,
    PowerPhase, Trig, Upper,
};
pub use pv::{extrapolate_trace, pv_cauchy, pv_symmetric_core, PvDomain, PvProblem};
pub use tanh_sinh::{Abscissa, TanhSinh};

pub(crate) use adaptive::adaptive;

/// Values a quadrature can accumulate: real or complex.
pub trait QuadValue:
    Copy
    + Default
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<f64, Output = Self>
{
    fn magnitude(self) -> f64;
    fn is_finite_value(self) -> bool;
    fn recip(self) -> Self;
}

impl QuadValue for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
    fn recip(self) -> Self {
        1.0 / self
    }
}

impl QuadValue for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn recip(self) -> Self {
        self.inv()
    }
}

/// Where the analytic tail bound of a half-line integral starts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailCutoff {
    /// Pick the cutoff from the integrand's breakpoints and the lower limit.
    Adaptive,
    /// Fixed cutoff abscissa.
    Fixed(f64),
}

/// Tolerances and limits shared by every integrator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Excision half-widths for principal values, strictly decreasing.
    pub excision_schedule: Vec<f64>,
    pub tail_cutoff: TailCutoff,
    /// Panels per oscillation period in the phase-linearised variable.
    pub period_panels: usize,
    /// Hard cap on the number of periods the oscillatory integrator walks.
    pub max_periods: usize,
    /// Evaluate independent panels/terms on the rayon pool.
    pub parallel: bool,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            max_subdivisions: 4000,
            excision_schedule: (1..=9).map(|k| 10f64.powi(-k)).collect(),
            tail_cutoff: TailCutoff::Adaptive,
            period_panels: 2,
            max_periods: 400_000,
            parallel: false,
        }
    }
}

impl QuadConfig {
    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return bad("tolerances must be non-negative".into());
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return bad("abs_tol and rel_tol cannot both be zero".into());
        }
        if self.max_subdivisions == 0 {
            return bad("max_subdivisions must be positive".into());
        }
        if self.period_panels == 0 {
            return bad("period_panels must be positive".into());
        }
        if self.max_periods == 0 {
            return bad("max_periods must be positive".into());
        }
        if self.excision_schedule.is_empty() {
            return bad("excision_schedule is empty".into());
        }
        if self
            .excision_schedule
            .iter()
            .any(|e| !(e.is_finite() && *e > 0.0))
        {
            return bad("excision_schedule entries must be positive".into());
        }
        if self.excision_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return bad("excision_schedule must be strictly decreasing".into());
        }
        if let TailCutoff::Fixed(x) = self.tail_cutoff {
            if !(x.is_finite() && x > 0.0) {
                return bad(format!("tail cutoff must be positive, got {x}"));
            }
        }
        Ok(())
    }

    /// Error target for a value of the given magnitude.
    pub fn target(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

/// One entry of a principal-value excision trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub eps: f64,
    pub value: f64,
}

/// Outcome of a quadrature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult<T = f64> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excision_trace: Option<Vec<TraceEntry>>,
}

impl<T: QuadValue> IntegralResult<T> {
    pub fn exact(value: T) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
            excision_trace: None,
        }
    }

    /// Sum of two independent pieces of one integral.
    pub fn plus(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
            excision_trace: self.excision_trace.or(other.excision_trace),
        }
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.value = self.value * factor;
        self.error_estimate *= factor.abs();
        self
    }

    pub fn map<U: QuadValue>(self, f: impl FnOnce(T) -> U) -> IntegralResult<U> {
        IntegralResult {
            value: f(self.value),
            error_estimate: self.error_estimate,
            evaluations: self.evaluations,
            converged: self.converged,
            excision_trace: self.excision_trace,
        }
    }
}

impl IntegralResult<Complex64> {
    pub fn re(&self) -> IntegralResult<f64> {
        self.clone().map(|z| z.re)
    }
    pub fn im(&self) -> IntegralResult<f64> {
        self.clone().map(|z| z.im)
    }
}

/// Runs a quadrature whose integrand can fail, returning the first failure.
pub(crate) fn fallible<T: QuadValue>(
    run: impl FnOnce(&dyn Fn(f64) -> T) -> Result<IntegralResult<T>>,
    eval: impl Fn(f64) -> Result<T>,
) -> Result<IntegralResult<T>> {
    let failure: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);
    let f = |x: f64| match eval(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            T::default() * f64::NAN
        }
    };
    let out = run(&f);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    out
}

/// Compensated (Neumaier) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accumulator<T> {
    sum: T,
    compensation: T,
}

impl<T: QuadValue> Accumulator<T> {
    pub(crate) fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.magnitude() >= x.magnitude() {
            self.compensation = self.compensation + ((self.sum - t) + x);
        } else {
            self.compensation = self.compensation + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> T {
        self.sum + self.compensation
    }
}

pub(crate) fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain {
            what: "integration limits",
            constraint: "finite",
            value: if a.is_finite() { b } else { a },
        });
    }
    if a >= b {
        return Err(Error::Domain {
            what: "upper limit",
            constraint: "> lower limit",
            value: b,
        });
    }
    Ok(())
}
