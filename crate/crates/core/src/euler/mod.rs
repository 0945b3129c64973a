//! Weak-form steady Euler checks for the half-line sheet.
//!
//! Test fields are perpendicular gradients of compactly supported bumps, so
//! they are divergence-free exactly and the pressure drops out of every
//! pairing. The momentum pairing `∬ vᵢvⱼ ∂ᵢφⱼ` is compared against the point
//! force `Y·φ(0)` at `α = 1/2` and against the line distribution carried by
//! the half-line when `α > 1/2`.

mod conditions;
mod field;
mod polar;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use conditions::{condition_report, ConditionReport, ConditionThresholds, DECAY_RADII, TRACE_RADII};
pub(crate) use conditions::loglog_slope;
pub use field::{Profile, StreamBump, TestField};

use crate::error::{domain, Result};
use crate::measures::SheetMu;
use crate::moments::ball_energy_closed;
use crate::quadrature::{
    fallible, integrate_finite_with, EndpointSingularity, IntegralResult, QuadConfig,
    TraceEntry,
};
use crate::velocity::{complex_velocity_timezero, pv_lemma_value, trace_closed, velocity_timezero};
use polar::{polar_integral, Disk};

/// First component of the impulse vector at `α = 1/2`, from a
/// two-million-point angular sum of the closed-form velocity.
pub const IMPULSE_Y1: f64 = -0.196_349_540_849_362_07;

/// Excision radii of the momentum pairing's trace.
pub const EXCISION_RADII: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

fn velocity(x: [f64; 2], alpha: f64) -> [f64; 2] {
    let w = complex_velocity_timezero(Complex64::new(x[0], x[1]), alpha);
    [w.re, w.im]
}

fn disk_of(b: &StreamBump) -> Disk {
    Disk {
        center: b.center,
        radius: b.radius,
    }
}

fn frobenius(g: &[[f64; 2]; 2]) -> f64 {
    (g[0][0].powi(2) + g[0][1].powi(2) + g[1][0].powi(2) + g[1][1].powi(2)).sqrt()
}

/// `Σᵢⱼ vᵢvⱼ ∂ᵢφⱼ` packed with `|v|²·|∇φ|` in the imaginary part.
fn momentum_density(x: [f64; 2], alpha: f64, field: &TestField) -> Complex64 {
    let g = field.gradient(x);
    if g == [[0.0; 2]; 2] {
        return Complex64::default();
    }
    let v = velocity(x, alpha);
    let mut s = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            s += v[i] * v[j] * g[i][j];
        }
    }
    Complex64::new(s, (v[0] * v[0] + v[1] * v[1]) * frobenius(&g))
}

/// Outcome of the momentum pairing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumForm {
    pub value: f64,
    pub error_estimate: f64,
    /// `∬ |v|²·|∇φ|`, the size against which the value is judged.
    pub scale: f64,
    /// Values with `B(0, δ)` removed, when the support comes near the origin.
    pub excision_trace: Vec<TraceEntry>,
    /// `sup|∇φ|·∫_{B(0,δ)}|v|²` for each trace entry.
    pub excision_bounds: Vec<f64>,
    pub evaluations: usize,
    pub converged: bool,
}

/// `∬ Σᵢⱼ vᵢvⱼ ∂ᵢφⱼ dx` over the support of `field`.
pub fn momentum_form(params: SheetMu, field: &TestField, cfg: &QuadConfig) -> Result<MomentumForm> {
    cfg.validate()?;
    field.source.validate()?;
    let a = params.alpha();
    let disk = disk_of(&field.source);
    let f = |x: [f64; 2]| momentum_density(x, a, field);
    let full = polar_integral(disk, 0.0, 2.0 * a - 1.0, f, cfg)?;
    let value = full.value.re;
    let scale = full.value.im;

    let mut excision_trace = Vec::new();
    let mut excision_bounds = Vec::new();
    let mut evaluations = full.evaluations;
    let mut trace_ok = true;
    if disk.origin_distance() < EXCISION_RADII[0] {
        let gsup = field.gradient_sup();
        for &delta in &EXCISION_RADII {
            let cut = polar_integral(disk, delta, 2.0 * a - 1.0, f, cfg)?;
            let bound = gsup * ball_energy_closed(params, delta)?;
            evaluations += cut.evaluations;
            trace_ok &= cut.converged
                && (cut.value.re - value).abs() <= bound + full.error_estimate + cut.error_estimate;
            excision_trace.push(TraceEntry {
                eps: delta,
                value: cut.value.re,
            });
            excision_bounds.push(bound);
        }
    }
    Ok(MomentumForm {
        value,
        error_estimate: full.error_estimate,
        scale,
        excision_trace,
        excision_bounds,
        evaluations,
        converged: full.converged && trace_ok,
    })
}

/// The momentum pairing restricted to `|x| > r`.
pub fn momentum_outside(params: SheetMu, field: &TestField, r: f64, cfg: &QuadConfig) -> Result<IntegralResult> {
    if !(r > 0.0) {
        return Err(domain("r", "> 0", r));
    }
    let a = params.alpha();
    let res = polar_integral(disk_of(&field.source), r, 2.0 * a - 1.0, |x| momentum_density(x, a, field), cfg)?;
    Ok(res.map(|z| z.re))
}

/// The boundary integrals that the momentum pairing over `|x| > r` reduces
/// to once the Euler equations hold off the sheet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTerms {
    pub r: f64,
    /// `∮_{∂B(0,r)} (v·n)(v·φ) dS`, `n = -x/r`.
    pub circle_flux: f64,
    /// `-∮_{∂B(0,r)} ½|v|²(φ·n) dS`.
    pub circle_pressure: f64,
    /// `-∫_r^∞ v₂·(φ·(v⁺ - v⁻)) ds`.
    pub line_flux: f64,
    /// `∫_r^∞ ½(|v⁺|² - |v⁻|²)·φ₂ ds`.
    pub line_jump: f64,
    pub total: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

pub fn boundary_terms(params: SheetMu, r: f64, field: &TestField, cfg: &QuadConfig) -> Result<BoundaryTerms> {
    cfg.validate()?;
    field.source.validate()?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain("r", "> 0", r));
    }
    let a = params.alpha();
    let circle = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let x = [r * c, r * s];
        let phi = field.phi(x);
        if phi == [0.0, 0.0] {
            return Complex64::default();
        }
        let v = velocity(x, a);
        let vx = v[0] * c + v[1] * s;
        let vphi = v[0] * phi[0] + v[1] * phi[1];
        let v2 = v[0] * v[0] + v[1] * v[1];
        let phix = phi[0] * c + phi[1] * s;
        Complex64::new(-vx * vphi * r, 0.5 * v2 * phix * r)
    };
    let circ = integrate_finite_with(circle, 0.0, 2.0 * PI, EndpointSingularity::default(), &[], cfg)?;

    let mut line = IntegralResult::exact(Complex64::default());
    if let Some((lo, hi)) = disk_of(&field.source).axis_chord() {
        let lo = lo.max(r);
        if hi > lo {
            let eval = |s: f64| -> Result<Complex64> {
                let (up, down) = trace_closed(s, params)?;
                let phi = field.phi([s, 0.0]);
                let jump = [up[0] - down[0], up[1] - down[1]];
                let flux = -up[1] * (phi[0] * jump[0] + phi[1] * jump[1]);
                let n2 = |v: [f64; 2]| v[0] * v[0] + v[1] * v[1];
                Ok(Complex64::new(flux, 0.5 * (n2(up) - n2(down)) * phi[1]))
            };
            line = fallible(
                |f| integrate_finite_with(f, lo, hi, EndpointSingularity::default(), &[], cfg),
                eval,
            )?;
        }
    }
    let total = circ.value.re + circ.value.im + line.value.re + line.value.im;
    Ok(BoundaryTerms {
        r,
        circle_flux: circ.value.re,
        circle_pressure: circ.value.im,
        line_flux: line.value.re,
        line_jump: line.value.im,
        total,
        error_estimate: circ.error_estimate + line.error_estimate,
        converged: circ.converged && line.converged,
    })
}

/// Impulse vector `Y = ∮_{∂B(0,1)} ½|v|²x - (v·x)v dS` at `α = 1/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Impulse {
    pub y: [f64; 2],
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// `Y` from Biot–Savart velocities on the unit circle.
pub fn impulse_y(cfg: &QuadConfig) -> Result<Impulse> {
    cfg.validate()?;
    let params = SheetMu::from_alpha(0.5)?;
    let inner_cfg = QuadConfig {
        abs_tol: cfg.abs_tol * 0.1,
        rel_tol: cfg.rel_tol * 0.1,
        ..cfg.clone()
    };
    let worst = std::cell::Cell::new(0.0f64);
    let eval = |theta: f64| -> Result<Complex64> {
        let (s, c) = theta.sin_cos();
        let sample = velocity_timezero([c, s], params, &inner_cfg)?;
        let v = sample.vector;
        let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
        worst.set(worst.get().max(3.0 * n * sample.error_estimate));
        let vx = v[0] * c + v[1] * s;
        let half = 0.5 * n * n;
        Ok(Complex64::new(half * c - vx * v[0], half * s - vx * v[1]))
    };
    let res = fallible(
        |f| integrate_finite_with(f, 0.0, 2.0 * PI, EndpointSingularity::default(), &[], cfg),
        eval,
    )?;
    let error_estimate = res.error_estimate + 2.0 * PI * worst.get();
    Ok(Impulse {
        y: [res.value.re, res.value.im],
        error_estimate,
        evaluations: res.evaluations,
        converged: res.converged && error_estimate <= cfg.target(res.value.norm()),
    })
}

/// `∫_0^∞ α s^(α-1) v₂(s, 0) φ₁(s, 0) ds`, the action of the line force.
pub fn line_rhs(params: SheetMu, field: &TestField, cfg: &QuadConfig) -> Result<IntegralResult> {
    cfg.validate()?;
    field.source.validate()?;
    let a = params.alpha();
    if !(a > 0.5) {
        return Err(domain("alpha", "> 1/2", a));
    }
    let pv = pv_lemma_value(a, cfg)?;
    let coeff = a * a / (2.0 * PI) * pv.value;
    let Some((lo, hi)) = disk_of(&field.source).axis_chord() else {
        return Ok(IntegralResult::exact(0.0));
    };
    let ends = if lo == 0.0 {
        EndpointSingularity::left(2.0 * a - 2.0)
    } else {
        EndpointSingularity::default()
    };
    let f = |s: f64| s.powf(2.0 * a - 2.0) * field.phi([s, 0.0])[0];
    let base = integrate_finite_with(f, lo, hi, ends, &[], cfg)?;
    let mut out = base.clone().scaled(coeff);
    out.error_estimate += (a * a / (2.0 * PI) * base.value).abs() * pv.error_estimate;
    out.converged &= pv.converged;
    Ok(out)
}

/// Outcome of `∬ v·∇ψ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakDivergence {
    pub value: f64,
    pub error_estimate: f64,
    /// `∬ |v|·|∇ψ|`.
    pub scale: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// `∬ v·∇ψ dx`; vanishes when `v` is divergence-free across the sheet.
pub fn weak_divergence(params: SheetMu, bump: &StreamBump, cfg: &QuadConfig) -> Result<WeakDivergence> {
    cfg.validate()?;
    bump.validate()?;
    let a = params.alpha();
    let f = |x: [f64; 2]| {
        let g = bump.gradient(x);
        if g == [0.0, 0.0] {
            return Complex64::default();
        }
        let v = velocity(x, a);
        Complex64::new(v[0] * g[0] + v[1] * g[1], v[0].hypot(v[1]) * g[0].hypot(g[1]))
    };
    let res = polar_integral(disk_of(bump), 0.0, a, f, cfg)?;
    Ok(WeakDivergence {
        value: res.value.re,
        error_estimate: res.error_estimate,
        scale: res.value.im,
        evaluations: res.evaluations,
        converged: res.converged,
    })
}

/// `∫ φ₁(s, 0) ds` over the positive axis, used by tests as a plain oracle.
#[cfg(test)]
fn axis_integral(field: &TestField, weight: impl Fn(f64) -> f64, cfg: &QuadConfig) -> f64 {
    match disk_of(&field.source).axis_chord() {
        Some((lo, hi)) => crate::quadrature::integrate_finite(|s| weight(s) * field.phi([s, 0.0])[0], lo, hi, cfg).unwrap().value,
        None => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(c: [f64; 2], r: f64, a: f64, p: Profile) -> TestField {
        TestField::new(StreamBump::new(c, r, a, p).unwrap()).unwrap()
    }

    fn cfg() -> QuadConfig {
        QuadConfig::default().with_tolerances(1e-12, 1e-9)
    }

    #[test]
    fn impulse_matches_frozen_value() {
        let y = impulse_y(&cfg()).unwrap();
        assert!(y.converged);
        assert!((y.y[0] - IMPULSE_Y1).abs() < 1e-8, "{:?}", y.y);
        assert!(y.y[1].abs() < 1e-8);
        let bound = 1.5 * PI / 8.0;
        assert!(y.y[0].hypot(y.y[1]) <= bound);
    }

    #[test]
    fn impulse_by_midpoint_sum() {
        let n = 200_000;
        let mut y = [0.0, 0.0];
        for k in 0..n {
            let t = (k as f64 + 0.5) * 2.0 * PI / n as f64;
            let (s, c) = t.sin_cos();
            let v = velocity([c, s], 0.5);
            let vx = v[0] * c + v[1] * s;
            let h = 0.5 * (v[0] * v[0] + v[1] * v[1]);
            y[0] += h * c - vx * v[0];
            y[1] += h * s - vx * v[1];
        }
        let w = 2.0 * PI / n as f64;
        assert!((y[0] * w - IMPULSE_Y1).abs() < 1e-9);
        assert!((y[1] * w).abs() < 1e-9);
    }

    #[test]
    fn away_from_sheet_pairing_vanishes() {
        let p = SheetMu::new(0.8).unwrap();
        let f = bump([0.3, 0.55], 0.4, 1.0, Profile::Polynomial { order: 4 });
        let m = momentum_form(p, &f, &cfg()).unwrap();
        assert!(m.excision_trace.is_empty());
        assert!(m.value.abs() <= 1e-8 * m.scale, "{} vs {}", m.value, m.scale);
    }

    #[test]
    fn point_force_at_half() {
        let p = SheetMu::from_alpha(0.5).unwrap();
        let f = bump([0.1, -0.2], 1.0, 1.0, Profile::Polynomial { order: 5 });
        let m = momentum_form(p, &f, &cfg()).unwrap();
        let expect = IMPULSE_Y1 * f.phi([0.0, 0.0])[0];
        assert!(m.converged);
        assert!((m.value - expect).abs() <= 1e-6 * expect.abs(), "{} vs {}", m.value, expect);
    }

    #[test]
    fn line_force_above_half() {
        let p = SheetMu::from_alpha(0.75).unwrap();
        let f = bump([1.0, 0.2], 0.8, 1.0, Profile::SmoothExponential);
        let m = momentum_form(p, &f, &cfg()).unwrap();
        let l = line_rhs(p, &f, &cfg()).unwrap();
        assert!((m.value - l.value).abs() <= 1e-6 * l.value.abs(), "{} vs {}", m.value, l.value);
    }

    #[test]
    fn line_rhs_against_explicit_product() {
        let a = 0.75;
        let p = SheetMu::from_alpha(a).unwrap();
        let f = bump([1.0, 0.0], 0.5, 1.0, Profile::Polynomial { order: 4 });
        let l = line_rhs(p, &f, &cfg()).unwrap();
        // pv factor π·cot(3π/4) = -π, so v₂(s, 0) = -(3/8)·s^(-1/4).
        let direct = axis_integral(&f, |s| a * s.powf(a - 1.0) * (-(3.0 / 8.0) * s.powf(a - 1.0)), &cfg());
        assert!((l.value - direct).abs() < 1e-8);
        let none = bump([1.0, 0.0], 0.5, 1.0, Profile::Polynomial { order: 4 });
        assert!(line_rhs(SheetMu::from_alpha(0.5).unwrap(), &none, &cfg()).is_err());
    }

    #[test]
    fn boundary_terms_reproduce_outer_pairing() {
        for a in [0.5, 0.75] {
            let p = SheetMu::from_alpha(a).unwrap();
            let f = bump([0.4, 0.1], 1.0, 1.0, Profile::Polynomial { order: 4 });
            for r in [0.1, 0.3] {
                let b = boundary_terms(p, r, &f, &cfg()).unwrap();
                let m = momentum_outside(p, &f, r, &cfg()).unwrap();
                assert!(b.line_jump.abs() < 1e-12);
                if a == 0.5 {
                    assert!(b.line_flux.abs() < 1e-12);
                }
                assert!((b.total - m.value).abs() < 1e-7 * m.value.abs().max(1.0), "a={a} r={r}: {} vs {}", b.total, m.value);
            }
        }
    }

    #[test]
    fn weak_divergence_vanishes() {
        let p = SheetMu::from_alpha(0.75).unwrap();
        for b in [
            StreamBump::new([1.0, 0.0], 0.5, 1.0, Profile::Polynomial { order: 3 }).unwrap(),
            StreamBump::new([0.0, 0.0], 1.0, 1.0, Profile::SmoothExponential).unwrap(),
        ] {
            let w = weak_divergence(p, &b, &cfg()).unwrap();
            assert!(w.value.abs() <= 1e-8 * w.scale, "{} vs {}", w.value, w.scale);
        }
    }
}
