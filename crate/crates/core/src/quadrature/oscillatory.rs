use std::f64::consts::PI;

use num_complex::Complex64;

use super::{
    adaptive, integrate_finite_with, integrate_halfline_with, wynn_epsilon, EndpointSingularity,
    HalflineOptions, IntegralResult, QuadConfig, QuadValue,
};
use crate::error::{domain, Error, Result};

/// Phase `c·t^(-p) + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerPhase {
    pub c: f64,
    pub p: f64,
    pub offset: f64,
    /// Power-law exponent of the amplitude at `t = 0`, estimated if absent.
    pub amplitude_exponent: Option<f64>,
}

impl PowerPhase {
    pub fn new(c: f64, p: f64) -> Self {
        Self {
            c,
            p,
            offset: 0.0,
            amplitude_exponent: None,
        }
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn with_amplitude_exponent(mut self, gamma: f64) -> Self {
        self.amplitude_exponent = Some(gamma);
        self
    }

    fn angle(&self, t: f64) -> f64 {
        self.c * t.powf(-self.p) + self.offset
    }
}

/// Real trigonometric factor for [`integrate_power_phase`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Cos,
    Sin,
}

/// Upper limit of a power-phase integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Upper {
    Finite(f64),
    /// Amplitude bounded by `C·t^decay_hint` at infinity.
    Infinite { decay_hint: f64 },
}

// Number of full periods allowed on the directly integrated part.
const DIRECT_PERIODS: f64 = 8.0;
const HALF_PERIODS_BEFORE_WYNN: usize = 24;
const WYNN_WINDOW: usize = 40;

/// ∫_0^b h(t) dt for an integrand whose oscillation accumulates at `t = 0`
/// with phase `c·t^(-p)`.
///
/// In `u = t^(-p)` the oscillation has fixed period `2π/|c|`. The integral is
/// walked half-period by half-period from `u = b^(-p)` outwards. The walk
/// stops once the remaining tail bound `2·G(U)/|c|` meets the target, with
/// `G(u) = envelope(t(u))·|dt/du|`, or earlier when Wynn's ε-extrapolation of
/// the half-period partial sums settles inside that bound. The caller is
/// responsible for removing any non-oscillating mean from `h`.
pub fn integrate_near_zero_oscillatory<T, H, E>(
    h: H,
    envelope: E,
    c: f64,
    p: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<IntegralResult<T>>
where
    T: QuadValue,
    H: Fn(f64) -> T,
    E: Fn(f64) -> f64,
{
    cfg.validate()?;
    if !(c.is_finite() && c != 0.0) {
        return Err(domain("phase constant c", "finite and nonzero", c));
    }
    if !(p.is_finite() && p > 0.0) {
        return Err(domain("phase exponent p", "> 0", p));
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(domain("upper limit", "> 0", b));
    }
    let inv_p = 1.0 / p;
    let t_of = |u: f64| u.powf(-inv_p);
    let jac = |u: f64| inv_p * u.powf(-inv_p - 1.0);
    let g_env = |u: f64| envelope(t_of(u)) * jac(u);

    let u0 = b.powf(-p);
    let half = PI / c.abs();

    // The u-amplitude must eventually decrease for the tail bound to hold.
    let probe = |k: i32| g_env(u0.max(half) * 2f64.powi(k));
    let (far, near) = (probe(24), probe(12));
    if !(far.is_finite() && near.is_finite()) || far >= near && far > 0.0 {
        return Err(Error::UntamedAmplitude(format!(
            "|amplitude·dt/du| does not decay in u = t^-{p}: {near:e} at u = {:e}, {far:e} at u = {:e}",
            u0.max(half) * 2f64.powi(12),
            u0.max(half) * 2f64.powi(24)
        )));
    }

    let integrand = |u: f64| h(t_of(u)) * jac(u);
    let panels = cfg.period_panels.div_ceil(2).max(1);
    let piece_cfg = QuadConfig {
        abs_tol: (cfg.abs_tol * 1e-3).max(f64::MIN_POSITIVE),
        rel_tol: cfg.rel_tol * 1e-3,
        max_subdivisions: 64,
        ..cfg.clone()
    };

    let mut sum = T::default();
    let mut quad_err = 0.0;
    let mut evals = 0;
    let mut converged_pieces = true;
    let mut partials: Vec<T> = Vec::new();
    let max_half_periods = 2 * cfg.max_periods;
    let mut points = vec![0.0; panels + 1];

    let mut k = 0usize;
    let mut u = u0;
    loop {
        let next = u0 + (k + 1) as f64 * half;
        for (j, pt) in points.iter_mut().enumerate() {
            *pt = u + (next - u) * j as f64 / panels as f64;
        }
        let piece = adaptive(&integrand, &points, &piece_cfg)?;
        sum = sum + piece.value;
        quad_err += piece.error_estimate;
        evals += piece.evaluations;
        converged_pieces &= piece.converged;
        partials.push(sum);
        k += 1;
        u = next;

        let bound = 2.0 * g_env(u) / c.abs();
        let target = cfg.target(sum.magnitude());
        if bound + quad_err <= target {
            return Ok(IntegralResult {
                value: sum,
                error_estimate: bound + quad_err,
                evaluations: evals,
                converged: converged_pieces,
                excision_trace: None,
            });
        }
        if k >= HALF_PERIODS_BEFORE_WYNN && k % 8 == 0 {
            let s = partials.len().saturating_sub(WYNN_WINDOW);
            if let Some((w, werr)) = wynn_epsilon(&partials[s..]) {
                let err = werr + quad_err;
                if err <= 0.5 * target && (w - sum).magnitude() <= 1.5 * bound {
                    return Ok(IntegralResult {
                        value: w,
                        error_estimate: err,
                        evaluations: evals,
                        converged: converged_pieces,
                        excision_trace: None,
                    });
                }
            }
        }
        if k >= max_half_periods {
            return Ok(IntegralResult {
                value: sum,
                error_estimate: bound + quad_err,
                evaluations: evals,
                converged: false,
                excision_trace: None,
            });
        }
    }
}

fn estimate_exponent<T: QuadValue>(g: &impl Fn(f64) -> T, t: f64) -> f64 {
    let (t1, t2) = (t * 1e-3, t * 1e-6);
    let (a1, a2) = (g(t1).magnitude(), g(t2).magnitude());
    if a1 == 0.0 || a2 == 0.0 {
        return 0.0;
    }
    (a1 / a2).ln() / (t1 / t2).ln()
}

fn power_phase_core<T, G>(
    g: G,
    phase: &PowerPhase,
    a: f64,
    upper: Upper,
    cfg: &QuadConfig,
) -> Result<IntegralResult<Complex64>>
where
    T: QuadValue + Into<Complex64>,
    G: Fn(f64) -> T,
{
    cfg.validate()?;
    if !(phase.p.is_finite() && phase.p > 0.0) {
        return Err(domain("phase exponent p", "> 0", phase.p));
    }
    if !(a.is_finite() && a >= 0.0) {
        return Err(domain("lower limit", ">= 0", a));
    }
    if let Upper::Finite(b) = upper {
        if !(b > a) {
            return Err(domain("upper limit", "> lower limit", b));
        }
    }
    let full = |t: f64| -> Complex64 { g(t).into() * Complex64::from_polar(1.0, phase.angle(t)) };

    // Split point: the phase changes by at most DIRECT_PERIODS periods above it.
    let split = if phase.c == 0.0 || a > 0.0 {
        a
    } else {
        (phase.c.abs() / (2.0 * PI * DIRECT_PERIODS)).powf(1.0 / phase.p)
    };
    let split = match upper {
        Upper::Finite(b) => split.min(b),
        Upper::Infinite { .. } => split,
    };

    let half_cfg = QuadConfig {
        abs_tol: cfg.abs_tol / 2.0,
        ..cfg.clone()
    };

    let mut result = IntegralResult::exact(Complex64::default());
    let mut left_exponent = if a == 0.0 {
        phase.amplitude_exponent
    } else {
        None
    };
    if split > a {
        let gamma = phase
            .amplitude_exponent
            .unwrap_or_else(|| estimate_exponent(&g, split));
        if !(gamma > -1.0 - phase.p) {
            return Err(Error::UntamedAmplitude(format!(
                "amplitude ~ t^{gamma:.3} at 0 is too singular for phase t^-{}",
                phase.p
            )));
        }
        let env = |t: f64| g(t).magnitude();
        result = integrate_near_zero_oscillatory(full, env, phase.c, phase.p, split, &half_cfg)?;
        left_exponent = None;
    }

    let rest = match upper {
        Upper::Finite(b) if b > split => integrate_finite_with(
            full,
            split,
            b,
            EndpointSingularity {
                left: left_exponent,
                right: None,
            },
            &[],
            &half_cfg,
        )?,
        Upper::Finite(_) => IntegralResult::exact(Complex64::default()),
        Upper::Infinite { decay_hint } => integrate_halfline_with(
            full,
            split,
            decay_hint,
            &HalflineOptions {
                left_exponent,
                breakpoints: vec![],
            },
            &half_cfg,
        )?,
    };
    result = result.plus(rest);
    result.converged =
        result.converged && result.error_estimate <= cfg.target(result.value.magnitude());
    Ok(result)
}

/// ∫_a^b g(t)·trig(c·t^(-p) + offset) dt for real amplitudes.
pub fn integrate_power_phase<G: Fn(f64) -> f64>(
    g: G,
    trig: Trig,
    phase: &PowerPhase,
    a: f64,
    upper: Upper,
    cfg: &QuadConfig,
) -> Result<IntegralResult> {
    let r = power_phase_core(g, phase, a, upper, cfg)?;
    Ok(match trig {
        Trig::Cos => r.re(),
        Trig::Sin => r.im(),
    })
}

/// ∫_a^b g(t)·exp(i(c·t^(-p) + offset)) dt for complex amplitudes.
pub fn integrate_power_phase_complex<G: Fn(f64) -> Complex64>(
    g: G,
    phase: &PowerPhase,
    a: f64,
    upper: Upper,
    cfg: &QuadConfig,
) -> Result<IntegralResult<Complex64>> {
    power_phase_core(g, phase, a, upper, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_finite;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_phase_reduces_to_plain_integral() {
        let r = integrate_power_phase(
            f64::sqrt,
            Trig::Cos,
            &PowerPhase::new(0.0, 1.0),
            0.0,
            Upper::Finite(1.0),
            &QuadConfig::default(),
        )
        .unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 2.0 / 3.0, epsilon = 1e-11);
    }

    #[test]
    fn bounded_phase_on_halfline() {
        let cfg = QuadConfig::default();
        let r = integrate_power_phase(
            |t: f64| t.powi(-2),
            Trig::Cos,
            &PowerPhase::new(1.0, 3.0),
            1.0,
            Upper::Infinite { decay_hint: -2.0 },
            &cfg,
        )
        .unwrap();
        // Substituting x = t^-1: ∫_0^1 cos(x³) dx.
        let direct = integrate_finite(|x: f64| (x * x * x).cos(), 0.0, 1.0, &cfg).unwrap();
        assert_abs_diff_eq!(r.value, direct.value, epsilon = 1e-10);
    }

    #[test]
    fn accumulating_oscillation_matches_known_value() {
        // ∫_0^1 sin(1/t) dt = sin 1 - Ci(1)
        let ci1 = 0.337_403_922_900_968_1;
        let r = integrate_power_phase(
            |_t: f64| 1.0,
            Trig::Sin,
            &PowerPhase::new(1.0, 1.0),
            0.0,
            Upper::Finite(1.0),
            &QuadConfig::default(),
        )
        .unwrap();
        assert!(r.converged, "{r:?}");
        assert_abs_diff_eq!(r.value, 1f64.sin() - ci1, epsilon = 1e-9);
    }

    #[test]
    fn untamed_amplitude_rejected() {
        let e = integrate_power_phase(
            |t: f64| t.powf(-2.5),
            Trig::Cos,
            &PowerPhase::new(1.0, 1.0),
            0.0,
            Upper::Finite(1.0),
            &QuadConfig::default(),
        );
        assert!(matches!(e, Err(Error::UntamedAmplitude(_))));
    }
}
