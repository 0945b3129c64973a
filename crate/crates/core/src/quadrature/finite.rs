use super::{adaptive, check_interval, IntegralResult, QuadConfig, QuadValue};
use crate::error::{domain, Result};

/// Known power-law behaviour `|s - endpoint|^β` of the integrand at an end.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EndpointSingularity {
    pub left: Option<f64>,
    pub right: Option<f64>,
}

impl EndpointSingularity {
    pub fn left(beta: f64) -> Self {
        Self {
            left: Some(beta),
            right: None,
        }
    }
    pub fn right(beta: f64) -> Self {
        Self {
            left: None,
            right: Some(beta),
        }
    }
    pub fn both(left: f64, right: f64) -> Self {
        Self {
            left: Some(left),
            right: Some(right),
        }
    }
}

/// ∫_a^b f by globally adaptive Gauss–Kronrod.
pub fn integrate_finite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<IntegralResult> {
    integrate_finite_with(f, a, b, EndpointSingularity::default(), &[], cfg)
}

// Exponent k of s - a = L·u^k that turns s^β ds into a polynomial weight in u.
fn grading(beta: f64) -> f64 {
    let m = (1.0 + beta).ceil().max(1.0);
    m / (1.0 + beta)
}

/// ∫_a^b f with optional endpoint power singularities and interior breakpoints.
///
/// A singular end is integrated on its own panel after the substitution
/// `s = a + L·u^k`, `k = m/(1+β)`, which removes the power law.
pub fn integrate_finite_with<T, F>(
    f: F,
    a: f64,
    b: f64,
    ends: EndpointSingularity,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> Result<IntegralResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    cfg.validate()?;
    check_interval(a, b)?;
    for beta in [ends.left, ends.right].into_iter().flatten() {
        if !(beta > -1.0) {
            return Err(domain("endpoint exponent", "> -1", beta));
        }
    }

    let mut points = vec![a];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|x| *x > a && *x < b)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    points.extend(inner);
    points.push(b);
    if ends.left.is_some() && ends.right.is_some() && points.len() == 2 {
        points.insert(1, 0.5 * (a + b));
    }

    let pieces = 1 + usize::from(ends.left.is_some()) + usize::from(ends.right.is_some());
    let piece_cfg = QuadConfig {
        abs_tol: cfg.abs_tol / pieces as f64,
        ..cfg.clone()
    };

    let mut lo = 0;
    let mut hi = points.len() - 1;
    let mut result = IntegralResult::exact(T::default());

    if let Some(beta) = ends.left {
        let p1 = points[1];
        let len = p1 - a;
        let k = grading(beta);
        let g = |u: f64| f(a + len * u.powf(k)) * (len * k * u.powf(k - 1.0));
        result = result.plus(adaptive(g, &[0.0, 1.0], &piece_cfg)?);
        lo = 1;
    }
    if let Some(beta) = ends.right {
        let pm = points[hi - 1];
        let len = b - pm;
        let k = grading(beta);
        let g = |u: f64| f(b - len * u.powf(k)) * (len * k * u.powf(k - 1.0));
        result = result.plus(adaptive(g, &[0.0, 1.0], &piece_cfg)?);
        hi -= 1;
    }
    if hi > lo {
        result = result.plus(adaptive(&f, &points[lo..=hi], &piece_cfg)?);
    }
    result.converged =
        result.converged || result.error_estimate <= cfg.target(result.value.magnitude());
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn polynomial() {
        let r = integrate_finite(|t| t, 0.0, 1.0, &cfg()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn inverse_square_root_with_hint() {
        let r = integrate_finite_with(
            |s: f64| s.powf(-0.5),
            0.0,
            1.0,
            EndpointSingularity::left(-0.5),
            &[],
            &cfg(),
        )
        .unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn inverse_square_root_by_bisection() {
        let r = integrate_finite(|s: f64| s.powf(-0.5), 0.0, 1.0, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-8);
    }

    #[test]
    fn cosine_over_period() {
        let r = integrate_finite(f64::cos, 0.0, 2.0 * PI, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn both_ends_singular() {
        // Beta function B(1/4, 3/4) = π / sin(π/4).
        let r = integrate_finite_with(
            |s: f64| s.powf(-0.75) * (1.0 - s).powf(-0.25),
            0.0,
            1.0,
            EndpointSingularity::both(-0.75, -0.25),
            &[],
            &cfg(),
        )
        .unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, PI * 2f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn rejects_non_integrable_exponent() {
        let e = integrate_finite_with(
            |s: f64| 1.0 / s,
            0.0,
            1.0,
            EndpointSingularity::left(-1.0),
            &[],
            &cfg(),
        );
        assert!(e.is_err());
    }

    #[test]
    fn rejects_reversed_interval() {
        assert!(integrate_finite(|t| t, 1.0, 0.0, &cfg()).is_err());
    }
}
