//! Complex moments of the sheets, the moment series for the circle average
//! of `|v|²`, and the energies built on it.
//!
//! On `|x| = r` the Laurent expansion of the Biot–Savart kernel and
//! Parseval give
//!
//! ```text
//! (1/2π)∫|v(re^{iθ})|² dθ = (1/4π²)·(Σ_{n≥0} r^{-2n-2}|m_{r,n}|² + Σ_{k≥1} r^{2k-2}|M_{r,k}|²).
//! ```
//!
//! Moments are computed in the scaled form `m̃ = m / r^(n+α)`,
//! `M̃ = M / r^(α-k)`, so every term of the series is `r^(2α-2)|m̃|²`.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::measures::{KadenSheet, SheetMu, TimeZeroSheet, VorticitySheet};
use crate::quadrature::{
    fallible, integrate_finite, integrate_finite_with, integrate_power_phase_complex, EndpointSingularity,
    HalflineOptions, integrate_halfline_with, IntegralResult, PowerPhase, QuadConfig, Upper,
};
use crate::velocity::{kaden_velocity, velocity_timezero, KadenStrategy};

fn check_r(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(domain("r", "> 0", r))
    }
}

/// Explicit constant in `|m_{r,n}| ≤ α r^(n+α)/(n+α)`.
pub fn inner_moment_bound(params: SheetMu, r: f64, n: u32) -> f64 {
    let a = params.alpha();
    let e = n as f64 + a;
    a * r.powf(e) / e
}

/// Explicit constant in `|M_{r,k}| ≤ α r^(α-k)/(k-α)`.
pub fn outer_moment_bound(params: SheetMu, r: f64, k: u32) -> f64 {
    let a = params.alpha();
    let e = k as f64 - a;
    a * r.powf(-e) / e
}

// Phase rate of the spiral at radius r in the scaled variable σ = s/r:
// θ(rσ) = c·σ^(-1/μ) with c = (t/2π)·r^(-1/μ).
fn spiral_c(k: &KadenSheet, r: f64) -> f64 {
    k.angle(r)
}

fn moment_cfg(cfg: &QuadConfig, scale: f64) -> QuadConfig {
    QuadConfig {
        abs_tol: (cfg.rel_tol * scale * 0.1).max(cfg.abs_tol * scale),
        ..cfg.clone()
    }
}

fn scaled_inner(sheet: &VorticitySheet, r: f64, n: u32, cfg: &QuadConfig) -> Result<IntegralResult<Complex64>> {
    let a = sheet.params().alpha();
    let e = n as f64 + a;
    match sheet {
        VorticitySheet::TimeZero(_) => Ok(IntegralResult::exact(Complex64::from(a / e))),
        VorticitySheet::Kaden(_) if n == 0 => Ok(IntegralResult::exact(Complex64::from(1.0))),
        VorticitySheet::Kaden(k) => {
            let p = 1.0 / k.params.mu();
            let omega = n as f64 * spiral_c(k, r);
            let mcfg = moment_cfg(cfg, a / e);
            if omega >= CONTOUR_OMEGA {
                // u = σ^(-1/μ): m̃ = (α/p)∫_1^∞ u^(-γ-1) e^(iωu) du, γ = (n+α)/p,
                // taken up the line 1 + iy.
                let gamma = e / p;
                let leg = |x: f64| (Complex64::new(1.0, x / omega).ln() * (-gamma - 1.0) - x).exp();
                let back = integrate_halfline_with(leg, 0.0, -4.0, &HalflineOptions::default(), &mcfg)?;
                let factor = Complex64::new(0.0, a / (p * omega)) * Complex64::from_polar(1.0, omega);
                return Ok(back.map(|v| v * factor).with_scaled_error(a / (p * omega)));
            }
            let phase = PowerPhase::new(omega, p).with_amplitude_exponent(e - 1.0);
            let amp = |s: f64| Complex64::from(a * s.powf(e - 1.0));
            integrate_power_phase_complex(amp, &phase, 0.0, Upper::Finite(1.0), &mcfg)
        }
    }
}

/// Phase rate above which moment integrals are taken along rotated paths.
const CONTOUR_OMEGA: f64 = 40.0;

fn scaled_outer(sheet: &VorticitySheet, r: f64, k: u32, cfg: &QuadConfig) -> Result<IntegralResult<Complex64>> {
    if k == 0 {
        return Err(domain("k", ">= 1", 0.0));
    }
    let a = sheet.params().alpha();
    let e = k as f64 - a;
    match sheet {
        VorticitySheet::TimeZero(_) => Ok(IntegralResult::exact(Complex64::from(a / e))),
        VorticitySheet::Kaden(ks) => {
            let p = 1.0 / ks.params.mu();
            let beta = e / p;
            let omega = k as f64 * spiral_c(ks, r);
            let r = linear_phase_unit(beta, omega, &moment_cfg(cfg, 1.0 / beta))?;
            Ok(r.map(|v| v * (a / p)).with_scaled_error(a / p))
        }
    }
}

/// `∫_0^1 u^(β-1) e^(-iωu) du` for `β > 0`, `ω ≥ 0`.
///
/// For large `ω` the path is turned into the lower half-plane: down the
/// imaginary axis from 0, which gives `e^(-iπβ/2)Γ(β)ω^(-β)`, and back up
/// to 1 along `1 - iy`, which is free of oscillation.
fn linear_phase_unit(beta: f64, omega: f64, cfg: &QuadConfig) -> Result<IntegralResult<Complex64>> {
    let left = (beta < 1.0).then_some(beta - 1.0);
    if omega < beta.max(CONTOUR_OMEGA) {
        let f = |u: f64| Complex64::from_polar(u.powf(beta - 1.0), -omega * u);
        let periods = (omega / (2.0 * PI)).ceil() as usize;
        let breaks: Vec<f64> = (1..periods).map(|j| j as f64 / periods as f64).collect();
        let ends = EndpointSingularity { left, right: None };
        return integrate_finite_with(f, 0.0, 1.0, ends, &breaks, cfg);
    }
    let axis = Complex64::from_polar(
        (libm::lgamma(beta) - beta * omega.ln()).exp(),
        -0.5 * PI * beta,
    );
    // y = x/ω on the return leg.
    let leg = |x: f64| (Complex64::new(1.0, -x / omega).ln() * (beta - 1.0) - x).exp();
    let back = integrate_halfline_with(leg, 0.0, -4.0, &HalflineOptions::default(), cfg)?;
    let factor = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0 / omega, -omega);
    Ok(IntegralResult::exact(axis).plus(back.map(|v| v * factor).with_scaled_error(1.0 / omega)))
}

/// `m_{r,n} = ∫_{B(0,r)} u^n dω(u)`.
pub fn inner_moment(sheet: &VorticitySheet, r: f64, n: u32, cfg: &QuadConfig) -> Result<IntegralResult<Complex64>> {
    check_r(r)?;
    let scale = r.powf(n as f64 + sheet.params().alpha());
    Ok(scaled_inner(sheet, r, n, cfg)?.map(|v| v * scale).with_scaled_error(scale))
}

/// `M_{r,k} = ∫_{|u|>r} u^(-k) dω(u)`, `k ≥ 1`.
pub fn outer_moment(sheet: &VorticitySheet, r: f64, k: u32, cfg: &QuadConfig) -> Result<IntegralResult<Complex64>> {
    check_r(r)?;
    let scale = r.powf(sheet.params().alpha() - k as f64);
    Ok(scaled_outer(sheet, r, k, cfg)?.map(|v| v * scale).with_scaled_error(scale))
}

trait ScaleError {
    fn with_scaled_error(self, s: f64) -> Self;
}

impl ScaleError for IntegralResult<Complex64> {
    fn with_scaled_error(mut self, s: f64) -> Self {
        self.error_estimate *= s;
        self
    }
}

/// Inner moments `n = 0..=order` and outer moments `k = 1..=order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub r: f64,
    pub inner: Vec<Complex64>,
    pub outer: Vec<Complex64>,
    /// Largest quadrature error over the table.
    pub error_estimate: f64,
    /// Bound on the series terms beyond `order`, from the moment bounds.
    pub truncation_bound: f64,
    pub converged: bool,
}

pub fn moment_table(sheet: &VorticitySheet, r: f64, order: u32, cfg: &QuadConfig) -> Result<MomentTable> {
    check_r(r)?;
    cfg.validate()?;
    let params = sheet.params();
    let inner: Vec<_> = (0..=order)
        .map(|n| inner_moment(sheet, r, n, cfg))
        .collect::<Result<_>>()?;
    let outer: Vec<_> = (1..=order)
        .map(|k| outer_moment(sheet, r, k, cfg))
        .collect::<Result<_>>()?;
    let all = inner.iter().chain(outer.iter());
    let error_estimate = all.clone().map(|m| m.error_estimate).fold(0.0, f64::max);
    let converged = all.clone().all(|m| m.converged);
    Ok(MomentTable {
        r,
        inner: inner.into_iter().map(|m| m.value).collect(),
        outer: outer.into_iter().map(|m| m.value).collect(),
        error_estimate,
        converged,
        truncation_bound: series_bound_tail(params.alpha(), order + 1) * r.powf(2.0 * params.alpha() - 2.0)
            / (4.0 * PI * PI),
    })
}

/// `Σ_{n≥m} α²/(n+α)² + Σ_{k≥m} α²/(k-α)²`.
fn series_bound_tail(a: f64, m: u32) -> f64 {
    model_tail(a, a, 0.0, m) + model_tail(a, -a, 0.0, m)
}

/// `Σ_{n≥m} α² / ((n+shift)² + (q·n)²)`.
///
/// Direct summation followed by Euler–Maclaurin with two correction terms.
fn model_tail(a: f64, shift: f64, q: f64, m: u32) -> f64 {
    let f = |x: f64| a * a / ((x + shift).powi(2) + (q * x).powi(2));
    let df = |x: f64| {
        let d = (x + shift).powi(2) + (q * x).powi(2);
        -a * a * (2.0 * (x + shift) + 2.0 * q * q * x) / (d * d)
    };
    const DIRECT: u32 = 256;
    let mut sum = 0.0;
    for n in m..m + DIRECT {
        sum += f(n as f64);
    }
    let x = (m + DIRECT) as f64;
    // ∫_x^∞ α²/(A(y+β)² + A g²) dy with A = 1+q², β = shift/A, g = |shift|·q/A.
    let big_a = 1.0 + q * q;
    let beta = shift / big_a;
    let g = shift.abs() * q / big_a;
    let y = x + beta;
    let integral = if g > 0.0 {
        a * a / big_a * (g / y).atan() / g
    } else {
        a * a / (big_a * y)
    };
    sum + integral + 0.5 * f(x) - df(x) / 12.0
}

/// Circle average of `|v|²` from the moment series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesAverage {
    pub r: f64,
    /// Number of terms summed explicitly on each side.
    pub order: u32,
    pub value: f64,
    pub error_estimate: f64,
    /// Series remainder accounted for analytically.
    pub tail: f64,
    /// Worst-case remainder from the moment bounds alone.
    pub truncation_bound: f64,
    pub evaluations: usize,
    pub converged: bool,
}

const BLOCK: u32 = 16;
const MIN_ORDER: u32 = 32;

/// `(1/4π²)·(Σ r^{-2n-2}|m_{r,n}|² + Σ r^{2k-2}|M_{r,k}|²)`.
///
/// Terms are added in blocks until the remainder, estimated from the
/// large-order form `|m̃_n|² ≈ α²/((n+α)² + (n·c/μ)²)`, is known to
/// within the target or `max_order` is reached.
pub fn spherical_average_series(
    sheet: &VorticitySheet,
    r: f64,
    max_order: u32,
    cfg: &QuadConfig,
) -> Result<SeriesAverage> {
    check_r(r)?;
    cfg.validate()?;
    if max_order < 1 {
        return Err(domain("max_order", ">= 1", max_order as f64));
    }
    let a = sheet.params().alpha();
    let q = match sheet {
        VorticitySheet::TimeZero(_) => 0.0,
        VorticitySheet::Kaden(k) => spiral_c(k, r) / k.params.mu(),
    };
    let model_in = |n: f64| a * a / ((n + a).powi(2) + (q * n).powi(2));
    let model_out = |k: f64| a * a / ((k - a).powi(2) + (q * k).powi(2));

    let term = |n: u32| -> Result<(f64, f64, f64, usize, bool)> {
        let mi = scaled_inner(sheet, r, n, cfg)?;
        let mut s = mi.value.norm_sqr();
        let mut err = 2.0 * mi.value.norm() * mi.error_estimate + mi.error_estimate.powi(2);
        let mut evals = mi.evaluations;
        let mut conv = mi.converged;
        let mut dev = s - model_in(n as f64);
        if n >= 1 {
            let mo = scaled_outer(sheet, r, n, cfg)?;
            let so = mo.value.norm_sqr();
            s += so;
            err += 2.0 * mo.value.norm() * mo.error_estimate + mo.error_estimate.powi(2);
            evals += mo.evaluations;
            conv &= mo.converged;
            dev = (dev + so - model_out(n as f64)) * (n as f64).powi(4);
        }
        Ok((s, err, dev, evals, conv))
    };

    let mut sum = 0.0;
    let mut quad_err = 0.0;
    let mut evals = 0;
    let mut pieces_converged = true;
    let mut devs: Vec<f64> = Vec::new();
    let mut next = 0u32;
    let scale = r.powf(2.0 * a - 2.0) / (4.0 * PI * PI);
    loop {
        let end = (next + BLOCK).min(max_order + 1);
        let block: Vec<_> = if cfg.parallel {
            (next..end).into_par_iter().map(term).collect::<Result<_>>()?
        } else {
            (next..end).map(term).collect::<Result<_>>()?
        };
        for (s, e, d, ev, c) in block {
            sum += s;
            quad_err += e;
            devs.push(d);
            evals += ev;
            pieces_converged &= c;
        }
        next = end;
        let order = next - 1;
        let tail = model_tail(a, a, q, order + 1) + model_tail(a, -a, q, order + 1);
        // Inner and outer deviations from the large-order form cancel to
        // leading order; their sum behaves like C/n^4.
        let recent = &devs[devs.len().saturating_sub(BLOCK as usize)..];
        let c_last = *recent.last().unwrap_or(&0.0);
        let spread = recent.iter().map(|c| (c - c_last).abs()).fold(0.0, f64::max);
        let n = order as f64;
        let quartic_tail = 1.0 / (3.0 * (n + 0.5).powi(3));
        let correction = if order >= 1 { c_last * quartic_tail } else { 0.0 };
        let tail_err = 2.0 * spread * quartic_tail + c_last.abs() * quartic_tail / n.max(1.0);
        let tail = tail + correction;
        let value = (sum + tail) * scale;
        let error_estimate = (quad_err + tail_err) * scale;
        let done = order >= MIN_ORDER.min(max_order) && error_estimate <= cfg.target(value);
        if done || order >= max_order {
            return Ok(SeriesAverage {
                r,
                order,
                value,
                error_estimate,
                tail: tail * scale,
                truncation_bound: series_bound_tail(a, order + 1) * scale,
                evaluations: evals,
                converged: pieces_converged && error_estimate <= cfg.target(value),
            });
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyMethod {
    /// Moment series.
    #[default]
    Series,
    /// Angular quadrature of Biot–Savart velocities on the circle.
    Direct,
}

/// `∫_{∂B(0,r)} |v|² dS`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult {
    pub r: f64,
    pub method: EnergyMethod,
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// `πα² r^(2α-1) / (2 sin²πα)` for the half-line sheet.
pub fn surface_energy_closed(params: SheetMu, r: f64) -> Result<f64> {
    check_r(r)?;
    let a = params.alpha();
    Ok(PI * a * a * r.powf(2.0 * a - 1.0) / (2.0 * (PI * a).sin().powi(2)))
}

/// Default number of series terms per side when none is configured.
pub const DEFAULT_MAX_SERIES_ORDER: u32 = 1024;

pub fn surface_energy(
    sheet: &VorticitySheet,
    r: f64,
    method: EnergyMethod,
    max_order: u32,
    cfg: &QuadConfig,
) -> Result<EnergyResult> {
    check_r(r)?;
    match method {
        EnergyMethod::Series => {
            let s = spherical_average_series(sheet, r, max_order, cfg)?;
            let c = 2.0 * PI * r;
            Ok(EnergyResult {
                r,
                method,
                value: s.value * c,
                error_estimate: s.error_estimate * c,
                evaluations: s.evaluations,
                converged: s.converged,
            })
        }
        EnergyMethod::Direct => surface_energy_direct(sheet, r, cfg),
    }
}

fn surface_energy_direct(sheet: &VorticitySheet, r: f64, cfg: &QuadConfig) -> Result<EnergyResult> {
    cfg.validate()?;
    // Node velocities are judged by the error they feed into the total.
    let inner_cfg = QuadConfig {
        abs_tol: cfg.abs_tol * 0.1,
        rel_tol: cfg.rel_tol * 0.1,
        ..cfg.clone()
    };
    let worst = RefCell::new((0.0f64, true));
    let start = match sheet {
        VorticitySheet::TimeZero(_) => 0.0,
        VorticitySheet::Kaden(k) => k.crossing_angle(r),
    };
    let eval = |theta: f64| -> Result<f64> {
        let z = Complex64::from_polar(r, start + theta);
        let (v, err, conv) = match sheet {
            VorticitySheet::TimeZero(tz) => {
                let s = velocity_timezero([z.re, z.im], tz.params, &inner_cfg)?;
                (Complex64::new(s.vector[0], s.vector[1]), s.error_estimate, s.converged)
            }
            VorticitySheet::Kaden(k) => {
                let s = kaden_velocity(k, z, KadenStrategy::PhaseSubstitution, &inner_cfg)?;
                (s.value, s.error_estimate, s.converged)
            }
        };
        let mut w = worst.borrow_mut();
        w.0 = w.0.max(2.0 * v.norm() * err + err * err);
        w.1 &= conv || err.is_finite();
        Ok(v.norm_sqr())
    };
    let res = fallible(|f| integrate_finite(f, 0.0, 2.0 * PI, cfg), eval)?;
    let (pointwise, inner_ok) = worst.into_inner();
    let error_estimate = r * (res.error_estimate + 2.0 * PI * pointwise);
    let value = r * res.value;
    Ok(EnergyResult {
        r,
        method: EnergyMethod::Direct,
        value,
        error_estimate,
        evaluations: res.evaluations,
        converged: res.converged && inner_ok && error_estimate <= cfg.target(value),
    })
}

/// `∫_{B(0,r)} |v|² dx = πα r^(2α) / (4 sin²πα)` for the half-line sheet.
pub fn ball_energy_closed(params: SheetMu, r: f64) -> Result<f64> {
    check_r(r)?;
    let a = params.alpha();
    Ok(PI * a * r.powf(2.0 * a) / (4.0 * (PI * a).sin().powi(2)))
}

/// `∫_0^r ∫_{∂B(0,ρ)} |v|² dS dρ` with the moment series on every circle.
pub fn ball_energy(sheet: &TimeZeroSheet, r: f64, cfg: &QuadConfig) -> Result<IntegralResult> {
    check_r(r)?;
    let vs = VorticitySheet::TimeZero(*sheet);
    let a = sheet.params.alpha();
    let eval = |rho: f64| -> Result<f64> {
        Ok(surface_energy(&vs, rho, EnergyMethod::Series, DEFAULT_MAX_SERIES_ORDER, cfg)?.value)
    };
    fallible(
        |f| integrate_finite_with(f, 0.0, r, EndpointSingularity::left(2.0 * a - 1.0), &[], cfg),
        eval,
    )
}

/// `∫_{B(0,r)} |v|² dx` by polar quadrature of the closed-form velocity.
pub fn ball_energy_polar(params: SheetMu, r: f64, cfg: &QuadConfig) -> Result<IntegralResult> {
    check_r(r)?;
    let a = params.alpha();
    let ring = |rho: f64| -> Result<f64> {
        let inner = |theta: f64| {
            let w = crate::velocity::complex_velocity_timezero(Complex64::from_polar(rho, theta), a);
            w.norm_sqr()
        };
        Ok(rho * integrate_finite(inner, 0.0, 2.0 * PI, cfg)?.value)
    };
    fallible(
        |f| integrate_finite_with(f, 0.0, r, EndpointSingularity::left(2.0 * a - 1.0), &[], cfg),
        ring,
    )
}

/// Pushforward check: `∫ density` over `(0, r)` against `r^α`.
pub fn mass_by_quadrature(sheet: &VorticitySheet, r: f64, cfg: &QuadConfig) -> Result<IntegralResult> {
    check_r(r)?;
    let a = sheet.params().alpha();
    integrate_finite_with(
        |s: f64| a * s.powf(a - 1.0),
        0.0,
        r,
        EndpointSingularity::left(a - 1.0),
        &[],
        cfg,
    )
}
