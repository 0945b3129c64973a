//! Polar quadrature over a disk, centred at the origin of the sheet.
//!
//! Rays leave the origin at angle `θ ∈ (0, 2π)`, so the half-line sheet sits
//! on the boundary of the angular range and every integrand is smooth in `θ`
//! on the open interval.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::quadrature::{fallible, integrate_finite_with, EndpointSingularity, IntegralResult, QuadConfig};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Disk {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Disk {
    pub fn origin_distance(&self) -> f64 {
        (self.center[0].hypot(self.center[1]) - self.radius).max(0.0)
    }

    /// Angular sub-intervals of `(0, 2π)` whose rays meet the disk.
    pub fn windows(&self) -> Vec<(f64, f64)> {
        let d = self.center[0].hypot(self.center[1]);
        if d <= self.radius {
            return vec![(0.0, 2.0 * PI)];
        }
        let half = (self.radius / d).asin();
        let mid = self.center[1].atan2(self.center[0]).rem_euclid(2.0 * PI);
        let (lo, hi) = (mid - half, mid + half);
        if lo < 0.0 {
            vec![(0.0, hi), (lo + 2.0 * PI, 2.0 * PI)]
        } else if hi > 2.0 * PI {
            vec![(0.0, hi - 2.0 * PI), (lo, 2.0 * PI)]
        } else {
            vec![(lo, hi)]
        }
    }

    /// Radii where the ray at `theta` is inside the disk.
    pub fn chord(&self, theta: f64) -> Option<(f64, f64)> {
        let (s, c) = theta.sin_cos();
        let b = self.center[0] * c + self.center[1] * s;
        let c2 = self.center[0].powi(2) + self.center[1].powi(2) - self.radius.powi(2);
        let disc = b * b - c2;
        if disc <= 0.0 {
            return None;
        }
        let root = disc.sqrt();
        let hi = b + root;
        if hi <= 0.0 {
            return None;
        }
        Some(((b - root).max(0.0), hi))
    }

    /// Intersection of the disk with the positive `x₁`-axis.
    pub fn axis_chord(&self) -> Option<(f64, f64)> {
        let [c1, c2] = self.center;
        let h2 = self.radius.powi(2) - c2 * c2;
        if h2 <= 0.0 {
            return None;
        }
        let h = h2.sqrt();
        let (a, b) = ((c1 - h).max(0.0), c1 + h);
        (b > a).then_some((a, b))
    }
}

/// `∬ f(x) dx` over the disk minus `B(0, delta)`.
///
/// `left_exponent` is the power of `ρ` (Jacobian included) that the
/// integrand follows as the ray starts at the origin.
pub(crate) fn polar_integral<F>(
    disk: Disk,
    delta: f64,
    left_exponent: f64,
    f: F,
    cfg: &QuadConfig,
) -> Result<IntegralResult<Complex64>>
where
    F: Fn([f64; 2]) -> Complex64,
{
    let inner_cfg = QuadConfig {
        abs_tol: cfg.abs_tol * 0.1,
        rel_tol: cfg.rel_tol * 0.1,
        ..cfg.clone()
    };
    let worst = Cell::new(0.0f64);
    let inner_ok = Cell::new(true);
    let inner_evals = Cell::new(0usize);
    let ray = |theta: f64| -> Result<Complex64> {
        let Some((lo, hi)) = disk.chord(theta) else {
            return Ok(Complex64::default());
        };
        let lo = lo.max(delta);
        if hi <= lo {
            return Ok(Complex64::default());
        }
        let ends = if lo == 0.0 {
            EndpointSingularity::left(left_exponent)
        } else {
            EndpointSingularity::default()
        };
        let (s, c) = theta.sin_cos();
        let r = integrate_finite_with(|rho: f64| f([rho * c, rho * s]) * rho, lo, hi, ends, &[], &inner_cfg)?;
        worst.set(worst.get().max(r.error_estimate));
        inner_ok.set(inner_ok.get() && r.converged);
        inner_evals.set(inner_evals.get() + r.evaluations);
        Ok(r.value)
    };
    let mut total = IntegralResult::exact(Complex64::default());
    for (a, b) in disk.windows() {
        let piece = fallible(
            |g| integrate_finite_with(g, a, b, EndpointSingularity::default(), &[], cfg),
            &ray,
        )?;
        let span = b - a;
        total = total.plus(IntegralResult {
            error_estimate: piece.error_estimate + span * worst.get(),
            ..piece
        });
        worst.set(0.0);
    }
    total.evaluations += inner_evals.get();
    total.converged &= inner_ok.get();
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_areas() {
        let cfg = QuadConfig::default();
        for (c, r) in [([0.0, 0.0], 1.0), ([0.3, -0.2], 1.0), ([2.0, 0.1], 0.5), ([-1.0, 2.0], 0.7), ([1.0, 0.0], 1.0)] {
            let d = Disk { center: c, radius: r };
            let a = polar_integral(d, 0.0, 1.0, |_| Complex64::new(1.0, 0.0), &cfg).unwrap();
            assert!((a.value.re - PI * r * r).abs() < 1e-9, "{c:?}: {}", a.value.re);
        }
    }

    #[test]
    fn excised_area() {
        let cfg = QuadConfig::default();
        let d = Disk { center: [0.1, 0.0], radius: 1.0 };
        let a = polar_integral(d, 0.05, 1.0, |_| Complex64::new(1.0, 0.0), &cfg).unwrap();
        assert!((a.value.re - PI * (1.0 - 0.0025)).abs() < 1e-9);
    }

    #[test]
    fn first_moment() {
        let cfg = QuadConfig::default();
        let d = Disk { center: [1.5, -0.4], radius: 0.8 };
        let a = polar_integral(d, 0.0, 1.0, |x| Complex64::new(x[0], x[1]), &cfg).unwrap();
        let area = PI * 0.64;
        assert!((a.value.re - 1.5 * area).abs() < 1e-9);
        assert!((a.value.im + 0.4 * area).abs() < 1e-9);
    }
}
