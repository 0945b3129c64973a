use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Radial profile `b(q)` of a bump, `q = |x - c|²/R²`, supported on `q < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    /// `(1 - q)^order`, `C^(order-1)` across the support boundary.
    Polynomial { order: u32 },
    /// `exp(-q/(1 - q))`, smooth everywhere.
    SmoothExponential,
}

impl Profile {
    /// `(b, b', b'')` at `q`.
    fn eval(&self, q: f64) -> (f64, f64, f64) {
        if q >= 1.0 {
            return (0.0, 0.0, 0.0);
        }
        match *self {
            Profile::Polynomial { order } => {
                let k = order as i32;
                let u = 1.0 - q;
                let kf = k as f64;
                (u.powi(k), -kf * u.powi(k - 1), kf * (kf - 1.0) * u.powi(k - 2))
            }
            Profile::SmoothExponential => {
                let u = 1.0 - q;
                let b = (-q / u).exp();
                if b == 0.0 {
                    return (0.0, 0.0, 0.0);
                }
                let g1 = -1.0 / (u * u);
                let g2 = -2.0 / (u * u * u);
                (b, b * g1, b * (g1 * g1 + g2))
            }
        }
    }
}

/// Compactly supported scalar bump `ψ(x) = A·b(|x - c|²/R²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StreamBump {
    pub center: [f64; 2],
    pub radius: f64,
    pub amplitude: f64,
    pub profile: Profile,
}

impl StreamBump {
    pub fn new(center: [f64; 2], radius: f64, amplitude: f64, profile: Profile) -> Result<Self> {
        let b = Self {
            center,
            radius,
            amplitude,
            profile,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.center[0].is_finite() && self.center[1].is_finite()) {
            return Err(domain("center", "finite", f64::NAN));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(domain("radius", "> 0", self.radius));
        }
        if !self.amplitude.is_finite() {
            return Err(domain("amplitude", "finite", self.amplitude));
        }
        if let Profile::Polynomial { order } = self.profile {
            if order < 3 {
                return Err(domain("polynomial order", ">= 3", order as f64));
            }
        }
        Ok(())
    }

    fn offset(&self, x: [f64; 2]) -> ([f64; 2], f64) {
        let d = [x[0] - self.center[0], x[1] - self.center[1]];
        let q = (d[0] * d[0] + d[1] * d[1]) / (self.radius * self.radius);
        (d, q)
    }

    pub fn value(&self, x: [f64; 2]) -> f64 {
        let (_, q) = self.offset(x);
        self.amplitude * self.profile.eval(q).0
    }

    pub fn gradient(&self, x: [f64; 2]) -> [f64; 2] {
        let (d, q) = self.offset(x);
        let b1 = self.profile.eval(q).1;
        let s = 2.0 * self.amplitude * b1 / (self.radius * self.radius);
        [s * d[0], s * d[1]]
    }

    /// `∂_i∂_j ψ`.
    pub fn hessian(&self, x: [f64; 2]) -> [[f64; 2]; 2] {
        let (d, q) = self.offset(x);
        let (_, b1, b2) = self.profile.eval(q);
        let r2 = self.radius * self.radius;
        let a = self.amplitude;
        let mut h = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let diag = if i == j { 2.0 * b1 / r2 } else { 0.0 };
                h[i][j] = a * (4.0 * b2 * d[i] * d[j] / (r2 * r2) + diag);
            }
        }
        h
    }

    /// True when the closed support disk avoids the half-line and the origin.
    pub fn avoids_sheet(&self) -> bool {
        let [c1, c2] = self.center;
        let r = self.radius;
        if c2.abs() >= r {
            return true;
        }
        let h = (r * r - c2 * c2).sqrt();
        c1 + h <= 0.0
    }
}

/// Divergence-free test field `φ = (∂₂ψ, -∂₁ψ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TestField {
    pub source: StreamBump,
}

impl TestField {
    pub fn new(source: StreamBump) -> Result<Self> {
        source.validate()?;
        Ok(Self { source })
    }

    pub fn phi(&self, x: [f64; 2]) -> [f64; 2] {
        let g = self.source.gradient(x);
        [g[1], -g[0]]
    }

    /// `G[i][j] = ∂_i φ_j`.
    pub fn gradient(&self, x: [f64; 2]) -> [[f64; 2]; 2] {
        let h = self.source.hessian(x);
        [[h[0][1], -h[0][0]], [h[1][1], -h[1][0]]]
    }

    /// `(φ(x), ∇φ(x))`.
    pub fn eval(&self, x: [f64; 2]) -> ([f64; 2], [[f64; 2]; 2]) {
        (self.phi(x), self.gradient(x))
    }

    /// Largest Frobenius norm of `∇φ` over a polar sample of the support.
    pub fn gradient_sup(&self) -> f64 {
        let [c1, c2] = self.source.center;
        let r = self.source.radius;
        let mut m: f64 = 0.0;
        for i in 0..=64 {
            let rho = r * i as f64 / 64.0;
            for j in 0..64 {
                let t = 2.0 * std::f64::consts::PI * j as f64 / 64.0;
                let g = self.gradient([c1 + rho * t.cos(), c2 + rho * t.sin()]);
                let f = (g[0][0].powi(2) + g[0][1].powi(2) + g[1][0].powi(2) + g[1][1].powi(2)).sqrt();
                m = m.max(f);
            }
        }
        m
    }
}
