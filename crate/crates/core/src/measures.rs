//! The two vorticity measures: the power-law sheet on the half-line and the
//! Kaden spiral at time `t`.
//!
//! Both are parametrised by arc radius `s > 0` with the same density
//! `α·s^(α-1)`, `α = 2 - 1/μ`; the Kaden sheet winds that density around the
//! spiral `s·exp(i·(t/2π)·s^(-1/μ))`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::{
    integrate_finite_with, integrate_halfline_with, EndpointSingularity, HalflineOptions,
    IntegralResult, QuadConfig,
};

/// The exponent pair `(μ, α = 2 - 1/μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MuRepr", into = "MuRepr")]
pub struct SheetMu {
    mu: f64,
    alpha: f64,
}

#[derive(Serialize, Deserialize)]
struct MuRepr {
    mu: f64,
}

impl TryFrom<MuRepr> for SheetMu {
    type Error = Error;
    fn try_from(r: MuRepr) -> Result<Self> {
        SheetMu::new(r.mu)
    }
}

impl From<SheetMu> for MuRepr {
    fn from(m: SheetMu) -> Self {
        MuRepr { mu: m.mu }
    }
}

impl SheetMu {
    /// μ must lie strictly inside (1/2, 1).
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.5 && mu < 1.0) {
            return Err(domain("mu", "in (1/2, 1)", mu));
        }
        Ok(Self {
            mu,
            alpha: 2.0 - 1.0 / mu,
        })
    }

    /// The pair with `α` in (0, 1), i.e. `μ = 1/(2 - α)`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(domain("alpha", "in (0, 1)", alpha));
        }
        Ok(Self {
            mu: 1.0 / (2.0 - alpha),
            alpha,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

fn check_radius(what: &'static str, s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(domain(what, "> 0", s))
    }
}

/// `α·x₁^(α-1)` on the half-line `Σ = {x₂ = 0, x₁ ≥ 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeZeroSheet {
    pub params: SheetMu,
}

/// Kaden spiral sheet at time `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KadenSheet {
    pub params: SheetMu,
    t: f64,
}

impl TimeZeroSheet {
    pub fn new(params: SheetMu) -> Self {
        Self { params }
    }
}

impl KadenSheet {
    pub fn new(params: SheetMu, t: f64) -> Result<Self> {
        check_radius("t", t)?;
        Ok(Self { params, t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Spiral angle `(t/2π)·s^(-1/μ)`, unreduced.
    pub fn angle(&self, s: f64) -> f64 {
        self.t / (2.0 * PI) * s.powf(-1.0 / self.params.mu)
    }

    /// Arc radius at which the unreduced spiral angle equals `theta > 0`.
    pub fn radius_at_angle(&self, theta: f64) -> f64 {
        (theta * 2.0 * PI / self.t).powf(-self.params.mu)
    }

    pub fn spiral_point(&self, s: f64) -> Result<Complex64> {
        check_radius("s", s)?;
        Ok(Complex64::from_polar(s, self.angle(s)))
    }

    /// Radius on the spiral carrying cumulative vorticity `gamma`.
    pub fn radius_of_circulation(&self, gamma: f64) -> Result<f64> {
        check_radius("gamma", gamma)?;
        let mu = self.params.mu;
        Ok(gamma.powf(mu / (2.0 * mu - 1.0)))
    }

    /// Angle in `[0, 2π)` where the spiral crosses the circle `|x| = r`.
    pub fn crossing_angle(&self, r: f64) -> f64 {
        self.angle(r).rem_euclid(2.0 * PI)
    }

    /// Distance from `z` to the spiral and the arc radius of the nearest point.
    pub fn nearest_point(&self, z: Complex64) -> (f64, f64) {
        let rho = z.norm();
        if rho == 0.0 {
            return (0.0, 0.0);
        }
        let two_pi = 2.0 * PI;
        let phi = z.arg().rem_euclid(two_pi);
        // Turn index of the crossing of the ray arg z nearest to |z|.
        let j0 = ((self.angle(rho) - phi) / two_pi).round() as i64;
        let dist2 = |s: f64| (z - Complex64::from_polar(s, self.angle(s))).norm_sqr();
        let crossing = |j: i64| {
            let th = phi + two_pi * j as f64;
            (th > 0.0).then(|| self.radius_at_angle(th))
        };
        let mut best = (f64::INFINITY, rho);
        for j in (j0 - 1)..=(j0 + 1) {
            let Some(sj) = crossing(j) else { continue };
            let lo = crossing(j + 1).unwrap_or(0.5 * sj).min(sj);
            let hi = crossing(j - 1).unwrap_or(2.0 * sj.max(rho)).max(sj);
            let s = golden_min(&dist2, lo, hi);
            for cand in [s, sj] {
                let d = dist2(cand).sqrt();
                if d < best.0 {
                    best = (d, cand);
                }
            }
        }
        best
    }
}

fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Either vorticity measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "measure", rename_all = "snake_case")]
pub enum VorticitySheet {
    TimeZero(TimeZeroSheet),
    Kaden(KadenSheet),
}

/// Radial extent of a pushforward integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialRange {
    /// `lo < s < hi`.
    Between(f64, f64),
    /// `s > lo`, with `|f(u)|·density` bounded by `C·s^decay_hint`.
    Beyond { lo: f64, decay_hint: f64 },
}

impl From<TimeZeroSheet> for VorticitySheet {
    fn from(s: TimeZeroSheet) -> Self {
        Self::TimeZero(s)
    }
}

impl From<KadenSheet> for VorticitySheet {
    fn from(s: KadenSheet) -> Self {
        Self::Kaden(s)
    }
}

impl VorticitySheet {
    pub fn params(&self) -> SheetMu {
        match self {
            Self::TimeZero(s) => s.params,
            Self::Kaden(s) => s.params,
        }
    }

    /// Vorticity per unit arc radius.
    pub fn density(&self, s: f64) -> Result<f64> {
        check_radius("s", s)?;
        let a = self.params().alpha;
        Ok(a * s.powf(a - 1.0))
    }

    /// Point of the support at arc radius `s`.
    pub fn point(&self, s: f64) -> Result<Complex64> {
        match self {
            Self::TimeZero(_) => {
                check_radius("s", s)?;
                Ok(Complex64::new(s, 0.0))
            }
            Self::Kaden(k) => k.spiral_point(s),
        }
    }

    /// `ω(B(0, r)) = r^α`.
    pub fn ball_mass(&self, r: f64) -> Result<f64> {
        check_radius("r", r)?;
        Ok(r.powf(self.params().alpha))
    }

    /// `∫ f dω` over the arc radii in `range`.
    pub fn pushforward_integral<F: Fn(Complex64) -> Complex64>(
        &self,
        f: F,
        range: RadialRange,
        cfg: &QuadConfig,
    ) -> Result<IntegralResult<Complex64>> {
        let alpha = self.params().alpha;
        let g = |s: f64| {
            let u = match self {
                Self::TimeZero(_) => Complex64::new(s, 0.0),
                Self::Kaden(k) => Complex64::from_polar(s, k.angle(s)),
            };
            f(u) * (alpha * s.powf(alpha - 1.0))
        };
        match range {
            RadialRange::Between(lo, hi) => {
                if !(lo >= 0.0) {
                    return Err(domain("lower radius", ">= 0", lo));
                }
                let ends = if lo == 0.0 {
                    EndpointSingularity::left(alpha - 1.0)
                } else {
                    EndpointSingularity::default()
                };
                integrate_finite_with(g, lo, hi, ends, &[], cfg)
            }
            RadialRange::Beyond { lo, decay_hint } => {
                let opts = HalflineOptions {
                    left_exponent: (lo == 0.0).then_some(alpha - 1.0),
                    breakpoints: vec![],
                };
                integrate_halfline_with(g, lo, decay_hint, &opts, cfg)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn kaden(mu: f64, t: f64) -> KadenSheet {
        KadenSheet::new(SheetMu::new(mu).unwrap(), t).unwrap()
    }

    #[test]
    fn mu_bounds() {
        assert!(SheetMu::new(0.5).is_err());
        assert!(SheetMu::new(1.0).is_err());
        assert!(SheetMu::new(f64::NAN).is_err());
        let m = SheetMu::new(2.0 / 3.0).unwrap();
        assert_abs_diff_eq!(m.alpha(), 0.5, epsilon = 1e-15);
        let back = SheetMu::from_alpha(0.75).unwrap();
        assert_abs_diff_eq!(back.mu(), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn density_examples() {
        let tz = VorticitySheet::TimeZero(TimeZeroSheet::new(SheetMu::from_alpha(0.5).unwrap()));
        assert_abs_diff_eq!(tz.density(1.0).unwrap(), 0.5);
        let k = VorticitySheet::Kaden(kaden(2.0 / 3.0, 1.0));
        assert_abs_diff_eq!(k.density(4.0).unwrap(), 0.25, epsilon = 1e-15);
        let tz = VorticitySheet::TimeZero(TimeZeroSheet::new(SheetMu::from_alpha(0.75).unwrap()));
        assert_abs_diff_eq!(tz.density(1.0).unwrap(), 0.75);
        assert!(tz.density(0.0).is_err());
        assert!(tz.density(-1.0).is_err());
    }

    #[test]
    fn spiral_point_examples() {
        let k = kaden(2.0 / 3.0, 1.0);
        let z = k.spiral_point(1.0).unwrap();
        assert_abs_diff_eq!(z.arg(), 1.0 / (2.0 * PI), epsilon = 1e-15);
        assert_abs_diff_eq!(z.norm(), 1.0, epsilon = 1e-15);
        let s = k.radius_of_circulation(1.0).unwrap();
        assert_abs_diff_eq!(s, 1.0);
        assert!(k.spiral_point(0.0).is_err());
    }

    #[test]
    fn ball_mass_examples() {
        let k = VorticitySheet::Kaden(kaden(2.0 / 3.0, 1.0));
        assert_abs_diff_eq!(k.ball_mass(4.0).unwrap(), 2.0, epsilon = 1e-14);
        let tz = VorticitySheet::TimeZero(TimeZeroSheet::new(SheetMu::new(0.8).unwrap()));
        assert_abs_diff_eq!(tz.ball_mass(0.01).unwrap(), 0.031_622_776_601_683_79, epsilon = 1e-15);
    }

    #[test]
    fn pushforward_examples() {
        let cfg = QuadConfig::default();
        let tz = VorticitySheet::TimeZero(TimeZeroSheet::new(SheetMu::from_alpha(0.5).unwrap()));
        let one = tz
            .pushforward_integral(|_| Complex64::new(1.0, 0.0), RadialRange::Between(0.0, 1.0), &cfg)
            .unwrap();
        assert_abs_diff_eq!(one.value.re, 1.0, epsilon = 1e-10);
        let id = tz
            .pushforward_integral(|u| u, RadialRange::Between(0.0, 1.0), &cfg)
            .unwrap();
        assert_abs_diff_eq!(id.value.re, 1.0 / 3.0, epsilon = 1e-10);
        let inv = tz
            .pushforward_integral(
                |u| u.inv(),
                RadialRange::Beyond {
                    lo: 1.0,
                    decay_hint: -1.5,
                },
                &cfg,
            )
            .unwrap();
        assert_abs_diff_eq!(inv.value.re, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn nearest_point_on_spiral_is_zero_distance() {
        let k = kaden(2.0 / 3.0, 1.0);
        for s in [0.3, 1.0, 2.5] {
            let z = k.spiral_point(s).unwrap();
            let (d, arc) = k.nearest_point(z);
            assert!(d < 1e-12, "s = {s}: d = {d}");
            assert_abs_diff_eq!(arc, s, epsilon = 1e-9);
        }
        let (d, _) = k.nearest_point(Complex64::new(0.0, 2.0));
        assert!(d > 0.1);
    }
}
