use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::measures::{KadenSheet, SheetMu};
use crate::quadrature::{
    adaptive, integrate_halfline_with, integrate_near_zero_oscillatory, HalflineOptions,
    IntegralResult, QuadConfig,
};

/// Points closer than this to the spiral are rejected.
pub const SPIRAL_TOLERANCE: f64 = 1e-8;

/// How the accumulation of turns at the spiral centre is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KadenStrategy {
    /// Linearise the phase with `u = s^(-1/μ)` and walk half-periods.
    #[default]
    PhaseSubstitution,
    /// Direct Gauss–Kronrod on one panel per turn, truncated by a
    /// first-derivative bound near the centre.
    GradedPanels,
}

struct Setup {
    alpha: f64,
    inv_mu: f64,
    t: f64,
    zbar: Complex64,
    rho: f64,
    nearest: (f64, f64),
}

impl Setup {
    fn new(sheet: &KadenSheet, z: Complex64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(domain("point", "finite", z.norm()));
        }
        let rho = z.norm();
        if rho == 0.0 {
            return Err(domain("|z|", "> 0 (spiral centre)", 0.0));
        }
        let nearest = sheet.nearest_point(z);
        if nearest.0 < SPIRAL_TOLERANCE {
            return Err(Error::NearSheet {
                x: z.re,
                y: z.im,
                distance: nearest.0,
                arc: nearest.1,
            });
        }
        Ok(Self {
            alpha: sheet.params.alpha(),
            inv_mu: 1.0 / sheet.params.mu(),
            t: sheet.t(),
            zbar: z.conj(),
            rho,
            nearest,
        })
    }

    fn theta(&self, s: f64) -> f64 {
        self.t / (2.0 * PI) * s.powf(-self.inv_mu)
    }

    fn dtheta(&self, s: f64) -> f64 {
        self.t / (2.0 * PI) * self.inv_mu * s.powf(-self.inv_mu - 1.0)
    }

    fn conj_point(&self, s: f64) -> Complex64 {
        Complex64::from_polar(s, -self.theta(s))
    }

    fn full(&self, s: f64) -> Complex64 {
        (self.zbar - self.conj_point(s)).inv() * (self.alpha * s.powf(self.alpha - 1.0))
    }

    // full(s) - α s^(α-1)/z̄
    fn remainder(&self, s: f64) -> Complex64 {
        let yb = self.conj_point(s);
        yb * (self.alpha * s.powf(self.alpha - 1.0)) / (self.zbar * (self.zbar - yb))
    }

    fn remainder_envelope(&self, s: f64) -> f64 {
        self.alpha * s.powf(self.alpha) / (self.rho * (self.rho - s))
    }

    fn far_breakpoints(&self, from: f64) -> Vec<f64> {
        let (d, arc) = self.nearest;
        [self.rho, arc - d, arc, arc + d]
            .into_iter()
            .filter(|b| *b > from)
            .collect()
    }
}

/// Velocity `w = v₁ + i·v₂` induced by the Kaden sheet at `z`.
pub fn kaden_velocity(
    sheet: &KadenSheet,
    z: Complex64,
    strategy: KadenStrategy,
    cfg: &QuadConfig,
) -> Result<IntegralResult<Complex64>> {
    cfg.validate()?;
    let st = Setup::new(sheet, z)?;
    let r = match strategy {
        KadenStrategy::PhaseSubstitution => phase_substitution(&st, cfg)?,
        KadenStrategy::GradedPanels => graded_panels(&st, cfg)?,
    };
    Ok(r.map(|v| v * Complex64::new(0.0, 1.0 / (2.0 * PI))))
}

/// The self-similar profile `w(z) = v(z, 1)`.
pub fn kaden_profile(
    params: SheetMu,
    z: Complex64,
    cfg: &QuadConfig,
) -> Result<IntegralResult<Complex64>> {
    let sheet = KadenSheet::new(params, 1.0)?;
    kaden_velocity(&sheet, z, KadenStrategy::PhaseSubstitution, cfg)
}

fn split_cfg(cfg: &QuadConfig) -> QuadConfig {
    QuadConfig {
        abs_tol: cfg.abs_tol / 2.0,
        ..cfg.clone()
    }
}

fn phase_substitution(st: &Setup, cfg: &QuadConfig) -> Result<IntegralResult<Complex64>> {
    let half = split_cfg(cfg);
    let s_star = 0.5 * st.rho;
    let lead = IntegralResult::exact(Complex64::from(s_star.powf(st.alpha)) / st.zbar);
    let near = integrate_near_zero_oscillatory(
        |s: f64| st.remainder(s),
        |s: f64| st.remainder_envelope(s),
        -st.t / (2.0 * PI),
        st.inv_mu,
        s_star,
        &half,
    )?;
    let opts = HalflineOptions {
        left_exponent: None,
        breakpoints: st.far_breakpoints(s_star),
    };
    let far = integrate_halfline_with(|s: f64| st.full(s), s_star, st.alpha - 2.0, &opts, &half)?;
    Ok(lead.plus(near).plus(far))
}

fn graded_panels(st: &Setup, cfg: &QuadConfig) -> Result<IntegralResult<Complex64>> {
    let half = split_cfg(cfg);
    let a = st.alpha;
    let z2 = st.rho * st.rho;
    // |∫_0^b remainder| ≤ first-derivative bound on the leading harmonic plus
    // the absolute size of the higher harmonics.
    let bound = |b: f64| {
        4.0 * a * b.powf(a) / (z2 * st.dtheta(b))
            + a * b.powf(a + 2.0) / ((a + 2.0) * z2 * (st.rho - b))
    };
    let target = half.abs_tol.max(half.rel_tol * (st.rho.powf(a - 1.0))) / 4.0;
    let s_star = 0.5 * st.rho;
    let max_turns = cfg.max_periods as f64;
    let (mut lo, mut hi) = (s_star * 1e-12, s_star);
    if bound(hi) <= target {
        lo = hi;
    }
    while hi / lo > 1.0 + 1e-6 && bound(lo) <= target {
        let mid = (lo * hi).sqrt();
        if bound(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut s_b = lo;
    let turns = |s: f64| (st.theta(s) - st.theta(s_star)) / (2.0 * PI);
    let mut truncated = false;
    if turns(s_b) > max_turns {
        s_b = radius_for_turns(st, s_star, max_turns);
        truncated = true;
    }
    let tail_bound = bound(s_b);

    // One breakpoint per turn between s_b and s_star.
    let mut points = vec![s_b];
    let mut s = s_b;
    while s < s_star {
        let step = 2.0 * PI / st.dtheta(s);
        if step > s {
            break;
        }
        s += step;
        if s < s_star {
            points.push(s);
        }
    }
    points.push(s_star);
    let panel_cfg = QuadConfig {
        max_subdivisions: 4 * points.len() + cfg.max_subdivisions,
        ..half.clone()
    };
    let body = adaptive(|s: f64| st.full(s), &points, &panel_cfg)?;
    let opts = HalflineOptions {
        left_exponent: None,
        breakpoints: st.far_breakpoints(s_star),
    };
    let far = integrate_halfline_with(|s: f64| st.full(s), s_star, a - 2.0, &opts, &half)?;
    let mut head = IntegralResult::exact(Complex64::from(s_b.powf(a)) / st.zbar);
    head.error_estimate = tail_bound;
    head.converged = !truncated;
    let mut r = head.plus(body).plus(far);
    r.converged = r.converged && r.error_estimate <= cfg.target(r.value.norm());
    Ok(r)
}

fn radius_for_turns(st: &Setup, s_star: f64, turns: f64) -> f64 {
    let theta = st.theta(s_star) + 2.0 * PI * turns;
    (theta * 2.0 * PI / st.t).powf(-1.0 / st.inv_mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sheet(mu: f64, t: f64) -> KadenSheet {
        KadenSheet::new(SheetMu::new(mu).unwrap(), t).unwrap()
    }

    #[test]
    fn strategies_agree_at_2i() {
        let cfg = QuadConfig::default();
        let k = sheet(2.0 / 3.0, 1.0);
        let z = Complex64::new(0.0, 2.0);
        let a = kaden_velocity(&k, z, KadenStrategy::PhaseSubstitution, &cfg).unwrap();
        let b = kaden_velocity(&k, z, KadenStrategy::GradedPanels, &cfg).unwrap();
        assert!(a.converged && b.converged, "{a:?} {b:?}");
        assert!((a.value - b.value).norm() < 1e-8, "{:?} vs {:?}", a.value, b.value);
    }

    #[test]
    fn rejects_points_on_spiral() {
        let k = sheet(2.0 / 3.0, 1.0);
        let z = k.spiral_point(1.3).unwrap();
        let e = kaden_velocity(&k, z, KadenStrategy::PhaseSubstitution, &QuadConfig::default());
        assert!(matches!(e, Err(Error::NearSheet { .. })));
    }
}
