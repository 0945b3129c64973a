use super::{
    adaptive, integrate_finite_with, EndpointSingularity, IntegralResult, QuadConfig, QuadValue,
    TailCutoff,
};
use crate::error::{domain, Error, Result};

/// Extra structure of a half-line integrand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HalflineOptions {
    /// Power-law exponent of the integrand at the lower limit.
    pub left_exponent: Option<f64>,
    /// Interior points where the integrand is not smooth.
    pub breakpoints: Vec<f64>,
}

/// ∫_a^∞ f for f dominated by `C·s^decay_hint`, `decay_hint < -1`.
pub fn integrate_halfline<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    decay_hint: f64,
    cfg: &QuadConfig,
) -> Result<IntegralResult> {
    integrate_halfline_with(f, a, decay_hint, &HalflineOptions::default(), cfg)
}

/// Half-line integral with endpoint and breakpoint information.
///
/// `[a, T]` is integrated directly. On `[T, S]` the map `s = T·u^(-q)` with
/// `q = -1/(h+1)` flattens the `s^h` profile to a constant in `u`. The
/// remainder beyond `S` is bounded by `C·S^(h+1)/(-h-1)`, with `S` placed
/// so that the bound is a tenth of the error target.
pub fn integrate_halfline_with<T, F>(
    f: F,
    a: f64,
    decay_hint: f64,
    opts: &HalflineOptions,
    cfg: &QuadConfig,
) -> Result<IntegralResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    cfg.validate()?;
    if !(a.is_finite() && a >= 0.0) {
        return Err(domain("lower limit", ">= 0 and finite", a));
    }
    if !(decay_hint < -1.0) {
        return Err(Error::NotIntegrable { decay_hint });
    }
    let h = decay_hint;

    let last_break = opts
        .breakpoints
        .iter()
        .copied()
        .filter(|x| x.is_finite())
        .fold(a, f64::max);
    let cut = match cfg.tail_cutoff {
        TailCutoff::Fixed(x) => x.max(last_break),
        TailCutoff::Adaptive => 2.0 * last_break.max(1.0),
    };

    let half_cfg = QuadConfig {
        abs_tol: cfg.abs_tol / 2.0,
        ..cfg.clone()
    };

    let mut result = if cut > a {
        let ends = EndpointSingularity {
            left: opts.left_exponent,
            right: None,
        };
        integrate_finite_with(&f, a, cut, ends, &opts.breakpoints, &half_cfg)?
    } else {
        IntegralResult::exact(T::default())
    };

    // Envelope constant of |f(s)| ≤ C·s^h sampled along a geometric grid.
    let mut c_env: f64 = 0.0;
    for j in 0..16 {
        let s = cut * 2f64.powi(j);
        let v = f(s);
        if !v.is_finite_value() {
            return Err(Error::NonFinite { abscissa: s });
        }
        c_env = c_env.max(v.magnitude() * s.powf(-h));
    }
    c_env *= 2.0;
    result.evaluations += 16;

    let target = cfg.target(result.value.magnitude()) / 10.0;
    let ln_cut = cut.ln();
    let mut ln_s = if c_env > 0.0 {
        ((target * (-h - 1.0)) / c_env).ln() / (h + 1.0)
    } else {
        ln_cut
    };
    ln_s = ln_s.clamp(ln_cut, ln_cut + 690.0);
    let q = -1.0 / (h + 1.0);
    let tail_bound = c_env * (ln_s * (h + 1.0)).exp() / (-h - 1.0);

    if ln_s > ln_cut {
        let u_min = ((ln_cut - ln_s) / q).exp();
        let g = |u: f64| f(cut * u.powf(-q)) * (q * cut * u.powf(-q - 1.0));
        result = result.plus(adaptive(g, &[u_min, 1.0], &half_cfg)?);
    }
    result.error_estimate += tail_bound;
    result.converged &= tail_bound <= 10.0 * target;
    result.converged =
        result.converged && result.error_estimate <= cfg.target(result.value.magnitude());
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn inverse_square() {
        let r = integrate_halfline(|t: f64| t.powi(-2), 1.0, -2.0, &QuadConfig::default()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn exponential() {
        let r = integrate_halfline(|s: f64| (-s).exp(), 0.0, -2.0, &QuadConfig::default()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn power_law_with_singular_start() {
        let opts = HalflineOptions {
            left_exponent: Some(-0.5),
            breakpoints: vec![],
        };
        let r = integrate_halfline_with(
            |s: f64| s.powf(-0.5) / (1.0 + s * s),
            0.0,
            -2.5,
            &opts,
            &QuadConfig::default(),
        )
        .unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, PI / 2f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn slow_decay_is_bounded() {
        // ∫_1^∞ s^{-1.25} ds = 4
        let r =
            integrate_halfline(|s: f64| s.powf(-1.25), 1.0, -1.25, &QuadConfig::default()).unwrap();
        assert_abs_diff_eq!(r.value, 4.0, epsilon = 1e-8);
    }

    #[test]
    fn rejects_non_integrable_hint() {
        let e = integrate_halfline(|s: f64| 1.0 / s, 1.0, -1.0, &QuadConfig::default());
        assert!(matches!(e, Err(Error::NotIntegrable { .. })));
    }

    #[test]
    fn fixed_cutoff_agrees() {
        let cfg = QuadConfig {
            tail_cutoff: TailCutoff::Fixed(7.5),
            ..QuadConfig::default()
        };
        let r = integrate_halfline(|s: f64| 1.0 / (1.0 + s * s), 0.0, -2.0, &cfg).unwrap();
        assert_abs_diff_eq!(r.value, PI / 2.0, epsilon = 1e-10);
    }
}
