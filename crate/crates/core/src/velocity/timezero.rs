use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{VelocityMethod, VelocitySample};
use crate::error::{domain, Error, Result};
use crate::measures::SheetMu;
use crate::quadrature::{
    integrate_finite_with, integrate_halfline_with, pv_cauchy, richardson_at_zero,
    EndpointSingularity, HalflineOptions, IntegralResult, PvProblem, QuadConfig,
};

fn check_off_support(x: [f64; 2]) -> Result<()> {
    if !(x[0].is_finite() && x[1].is_finite()) {
        return Err(domain("point", "finite", if x[0].is_finite() { x[1] } else { x[0] }));
    }
    if x[1] == 0.0 && x[0] >= 0.0 {
        return Err(Error::OnSupport { x: x[0], y: x[1] });
    }
    Ok(())
}

/// `w(z) = -(iα / (2 sin πα))·(-z̄)^(α-1)` on the principal branch.
pub fn complex_velocity_timezero(z: Complex64, alpha: f64) -> Complex64 {
    let factor = Complex64::new(0.0, -alpha / (2.0 * (PI * alpha).sin()));
    factor * (-z.conj()).powf(alpha - 1.0)
}

/// Closed-form velocity of the half-line sheet.
pub fn velocity_timezero_closed(x: [f64; 2], params: SheetMu) -> Result<[f64; 2]> {
    check_off_support(x)?;
    let w = complex_velocity_timezero(Complex64::new(x[0], x[1]), params.alpha());
    Ok([w.re, w.im])
}

/// Biot–Savart quadrature of the half-line sheet's velocity.
pub fn velocity_timezero(x: [f64; 2], params: SheetMu, cfg: &QuadConfig) -> Result<VelocitySample> {
    check_off_support(x)?;
    let alpha = params.alpha();
    let zbar = Complex64::new(x[0], -x[1]);
    let f = |s: f64| (zbar - s).inv() * (alpha * s.powf(alpha - 1.0));
    let mut breakpoints = Vec::new();
    if x[0] > 0.0 {
        breakpoints.push(x[0]);
        let mut w = x[1].abs();
        while w < x[0] {
            breakpoints.extend([x[0] - w, x[0] + w]);
            w *= 8.0;
        }
        breakpoints.push(2.0 * x[0]);
        breakpoints.sort_by(f64::total_cmp);
    }
    let opts = HalflineOptions {
        left_exponent: Some(alpha - 1.0),
        breakpoints,
    };
    let r = integrate_halfline_with(f, 0.0, alpha - 2.0, &opts, cfg)?;
    let w = r.value * Complex64::new(0.0, 1.0 / (2.0 * PI));
    Ok(VelocitySample {
        point: x,
        vector: [w.re, w.im],
        method: VelocityMethod::Quadrature,
        error_estimate: r.error_estimate / (2.0 * PI),
        converged: r.converged,
    })
}

/// `π·cot(πα)`, the value of `PV∫_0^∞ t^(α-1)/(1-t) dt`.
pub fn pv_lemma_closed_form(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(PI / (PI * alpha).tan())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(domain("alpha", "in (0, 1)", alpha))
    }
}

/// `PV∫_0^∞ t^(α-1)/(1-t) dt` by symmetric excision, with its ε-trace.
pub fn pv_lemma_value(alpha: f64, cfg: &QuadConfig) -> Result<IntegralResult> {
    check_alpha(alpha)?;
    let problem = PvProblem::halfline(0.0, alpha - 2.0, 1.0).with_lower_exponent(alpha - 1.0);
    pv_cauchy(|t: f64| t.powf(alpha - 1.0) / (1.0 - t), &problem, cfg)
}

/// The same value through the regular integral `∫_0^1 (t^(α-1) - t^(-α))/(1-t) dt`.
pub fn pv_lemma_reduction(alpha: f64, cfg: &QuadConfig) -> Result<IntegralResult> {
    check_alpha(alpha)?;
    let f = |t: f64| {
        let u = 1.0 - t;
        let l = if t < 0.5 { t.ln() } else { (-u).ln_1p() };
        // t^(α-1) - t^(-α) = t^(-α)·expm1((2α-1)·ln t)
        (-alpha * l).exp() * ((2.0 * alpha - 1.0) * l).exp_m1() / u
    };
    let ends = EndpointSingularity::left((alpha - 1.0).min(-alpha));
    integrate_finite_with(f, 0.0, 1.0, ends, &[], cfg)
}

/// Closed-form one-sided traces `(v⁺, v⁻)` on the half-line at `s`.
pub fn trace_closed(s: f64, params: SheetMu) -> Result<([f64; 2], [f64; 2])> {
    if !(s > 0.0) {
        return Err(domain("s", "> 0", s));
    }
    let a = params.alpha();
    let base = s.powf(a - 1.0);
    let v2 = a / (2.0 * PI) * base * pv_lemma_closed_form(a)?;
    let v1 = 0.5 * a * base;
    Ok(([-v1, v2], [v1, v2]))
}

fn trace(s: f64, params: SheetMu, side: f64, cfg: &QuadConfig) -> Result<VelocitySample> {
    if !(s > 0.0) {
        return Err(domain("s", "> 0", s));
    }
    let a = params.alpha();
    let base = s.powf(a - 1.0);
    let pv = pv_lemma_value(a, cfg)?;
    Ok(VelocitySample {
        point: [s, 0.0],
        vector: [-side * 0.5 * a * base, a / (2.0 * PI) * base * pv.value],
        method: VelocityMethod::Quadrature,
        error_estimate: a / (2.0 * PI) * base * pv.error_estimate,
        converged: pv.converged,
    })
}

/// `v⁺(s, 0)`, the limit from `x₂ > 0`.
pub fn trace_above(s: f64, params: SheetMu, cfg: &QuadConfig) -> Result<VelocitySample> {
    trace(s, params, 1.0, cfg)
}

/// `v⁻(s, 0)`, the limit from `x₂ < 0`.
pub fn trace_below(s: f64, params: SheetMu, cfg: &QuadConfig) -> Result<VelocitySample> {
    trace(s, params, -1.0, cfg)
}

/// Approach to the half-line from one side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideLimit {
    /// `(x₂, v₁, v₂)` along the schedule.
    pub samples: Vec<[f64; 3]>,
    pub extrapolated: [f64; 2],
    pub trace: [f64; 2],
    pub distance: f64,
    /// Distance to the trace shrinks along the schedule.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceLimitReport {
    pub s: f64,
    pub alpha: f64,
    pub above: SideLimit,
    pub below: SideLimit,
}

/// Evaluate `v(s, ±x₂)` along a decreasing schedule and extrapolate `x₂ → 0`.
pub fn trace_limit_check(
    s: f64,
    params: SheetMu,
    x2_schedule: &[f64],
    cfg: &QuadConfig,
) -> Result<TraceLimitReport> {
    if !(s > 0.0) {
        return Err(domain("s", "> 0", s));
    }
    if x2_schedule.is_empty() || x2_schedule.iter().any(|h| !(*h > 0.0)) {
        return Err(domain("x2 schedule", "non-empty and positive", f64::NAN));
    }
    if x2_schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(domain("x2 schedule", "strictly decreasing", f64::NAN));
    }
    let up = trace_above(s, params, cfg)?.vector;
    let down = trace_below(s, params, cfg)?.vector;

    let side = |sign: f64, target: [f64; 2]| -> Result<SideLimit> {
        let mut samples = Vec::with_capacity(x2_schedule.len());
        for &h in x2_schedule {
            let v = velocity_timezero([s, sign * h], params, cfg)?.vector;
            samples.push([h, v[0], v[1]]);
        }
        let xs: Vec<f64> = samples.iter().map(|p| p[0]).collect();
        let v1: Vec<f64> = samples.iter().map(|p| p[1]).collect();
        let v2: Vec<f64> = samples.iter().map(|p| p[2]).collect();
        let extrapolated = [richardson_at_zero(&xs, &v1).0, richardson_at_zero(&xs, &v2).0];
        let dist = |v: [f64; 2]| ((v[0] - target[0]).powi(2) + (v[1] - target[1]).powi(2)).sqrt();
        let monotone = samples
            .windows(2)
            .all(|w| dist([w[1][1], w[1][2]]) <= dist([w[0][1], w[0][2]]));
        Ok(SideLimit {
            distance: dist(extrapolated),
            samples,
            extrapolated,
            trace: target,
            monotone,
        })
    };
    Ok(TraceLimitReport {
        s,
        alpha: params.alpha(),
        above: side(1.0, up)?,
        below: side(-1.0, down)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn half() -> SheetMu {
        SheetMu::from_alpha(0.5).unwrap()
    }

    #[test]
    fn closed_form_example() {
        let v = velocity_timezero_closed([0.0, 1.0], half()).unwrap();
        let e = -1.0 / (4.0 * 2f64.sqrt());
        assert_abs_diff_eq!(v[0], e, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1], e, epsilon = 1e-15);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let cfg = QuadConfig::default();
        for alpha in [0.3, 0.5, 0.75] {
            let p = SheetMu::from_alpha(alpha).unwrap();
            for x in [[0.0, 1.0], [1.0, -1.0], [-2.0, 0.0], [3.0, 0.2], [0.5, -1e-3]] {
                let q = velocity_timezero(x, p, &cfg).unwrap();
                let c = velocity_timezero_closed(x, p).unwrap();
                assert!(q.converged);
                assert_abs_diff_eq!(q.vector[0], c[0], epsilon = 1e-9);
                assert_abs_diff_eq!(q.vector[1], c[1], epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn support_is_rejected() {
        assert!(velocity_timezero_closed([1.0, 0.0], half()).is_err());
        assert!(velocity_timezero_closed([0.0, 0.0], half()).is_err());
        assert!(velocity_timezero_closed([-1.0, 0.0], half()).is_ok());
    }

    #[test]
    fn pv_paths_agree() {
        let cfg = QuadConfig::default();
        for alpha in [0.25, 0.5, 0.75] {
            let e = pv_lemma_value(alpha, &cfg).unwrap();
            let r = pv_lemma_reduction(alpha, &cfg).unwrap();
            let c = pv_lemma_closed_form(alpha).unwrap();
            assert_abs_diff_eq!(e.value, r.value, epsilon = 1e-9);
            assert_abs_diff_eq!(r.value, c, epsilon = 1e-9);
        }
        assert!(pv_lemma_value(1.5, &cfg).is_err());
    }

    #[test]
    fn trace_examples() {
        let cfg = QuadConfig::default();
        let up = trace_above(1.0, half(), &cfg).unwrap().vector;
        let down = trace_below(1.0, half(), &cfg).unwrap().vector;
        assert_abs_diff_eq!(up[0], -0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(down[0], 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(up[1], 0.0, epsilon = 1e-9);
        let p = SheetMu::from_alpha(0.75).unwrap();
        let up = trace_above(1.0, p, &cfg).unwrap().vector;
        assert_abs_diff_eq!(up[0], -0.375, epsilon = 1e-12);
        assert_abs_diff_eq!(up[1], -0.375, epsilon = 1e-9);
    }
}
