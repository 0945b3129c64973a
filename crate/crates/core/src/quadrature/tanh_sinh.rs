use std::f64::consts::PI;

use super::{Accumulator, IntegralResult};
use crate::error::{domain, Error, Result};

/// Quadrature node with both endpoint distances carried exactly.
///
/// Integrands with a pole at an endpoint should use the distances rather
/// than `x`, which loses them to rounding near the ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    pub from_lower: f64,
    pub from_upper: f64,
}

/// Fixed-schedule tanh–sinh rule.
///
/// Level `m` adds nodes at step `2^-m` in the sinh variable (level 1 also
/// carries the centre node); nodes closer to an endpoint than
/// `truncation` are dropped. Each level's estimate uses every node of the
/// preceding levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TanhSinh {
    pub levels: u32,
    pub truncation: f64,
    /// Stop early once the level-to-level error indicator reaches this.
    pub epsilon: f64,
    /// Binary precision used by the error indicator's floor.
    pub precision_bits: u32,
}

impl TanhSinh {
    /// Schedule that a `dps`-digit arbitrary-precision evaluation selects.
    pub fn for_decimal_digits(dps: u32) -> Self {
        let prec = ((dps as f64 + 1.0) * std::f64::consts::LOG2_10).round() as u32;
        let levels = (4.0 + (prec as f64 / 30.0).log2().max(0.0)) as u32 + 2;
        Self {
            levels,
            truncation: 2f64.powi(-(prec as i32) - 10),
            epsilon: 2f64.powi(-(prec as i32) - 3),
            precision_bits: prec,
        }
    }

    fn nodes(&self, level: u32, mut visit: impl FnMut(f64, f64)) {
        // visit(d, w): d = 1 - x for x >= 0 paired with -x, plus the centre.
        // Level 1 starts at t = 0, which is the centre node.
        let (t0, h) = if level == 1 {
            (0.0, 0.5)
        } else {
            (2f64.powi(-(level as i32)), 2f64.powi(1 - level as i32))
        };
        let kmax = 20usize << level;
        for k in 0..=kmax {
            let t = t0 + k as f64 * h;
            let y = 0.5 * PI * t.sinh();
            let d = 2.0 / ((2.0 * y).exp() + 1.0);
            if !(d > self.truncation) {
                break;
            }
            let w = 0.5 * PI * t.cosh() / y.cosh().powi(2);
            visit(d, w);
        }
    }

    fn run(&self, mut f: impl FnMut(f64, f64, bool) -> Result<f64>) -> Result<IntegralResult> {
        // f(d, w, centre): node pair at distance d from the ends.
        if self.levels == 0 {
            return Err(domain("tanh-sinh levels", ">= 1", 0.0));
        }
        let mut acc = Accumulator::<f64>::default();
        let mut estimates: Vec<f64> = Vec::new();
        let mut evals = 0;
        let mut err = f64::INFINITY;
        for level in 1..=self.levels {
            let mut inner: Result<()> = Ok(());
            self.nodes(level, |d, w| {
                if inner.is_err() {
                    return;
                }
                let centre = level == 1 && d == 1.0;
                match f(d, w, centre) {
                    Ok(v) => {
                        acc.add(v);
                        evals += if centre { 1 } else { 2 };
                    }
                    Err(e) => inner = Err(e),
                }
            });
            inner?;
            let h = 2f64.powi(-(level as i32));
            estimates.push(acc.total() * h);
            err = self.error_indicator(&estimates);
            if err <= self.epsilon {
                break;
            }
        }
        let value = *estimates.last().unwrap();
        Ok(IntegralResult {
            value,
            error_estimate: err,
            evaluations: evals,
            converged: err <= self.epsilon,
            excision_trace: None,
        })
    }

    fn error_indicator(&self, r: &[f64]) -> f64 {
        let n = r.len();
        if n < 3 {
            return f64::INFINITY;
        }
        let prec = -(self.precision_bits as f64) * std::f64::consts::LOG10_2;
        let d1 = (r[n - 1] - r[n - 2]).abs();
        let d2 = (r[n - 1] - r[n - 3]).abs();
        if d1 == 0.0 {
            return 10f64.powf(prec);
        }
        let d1 = d1.log10();
        let d2 = if d2 == 0.0 { prec } else { d2.log10() };
        let d4 = (d1 * d1 / d2).max(2.0 * d1).max(prec).min(0.0);
        10f64.powi(d4 as i32)
    }

    /// ∫_a^b f with `f` receiving the node and its endpoint distances.
    pub fn integrate_finite(
        &self,
        a: f64,
        b: f64,
        f: impl Fn(Abscissa) -> f64,
    ) -> Result<IntegralResult> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(domain("upper limit", "> lower limit and finite", b));
        }
        let c = 0.5 * (b - a);
        let eval = |from_lower: f64, from_upper: f64| -> Result<f64> {
            let x = if from_lower <= from_upper {
                a + from_lower
            } else {
                b - from_upper
            };
            let v = f(Abscissa {
                x,
                from_lower,
                from_upper,
            });
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFinite { abscissa: x })
            }
        };
        let r = self.run(|d, w, centre| {
            if centre {
                return Ok(w * eval(c, c)?);
            }
            let up = eval(c * (2.0 - d), c * d)?;
            let lo = eval(c * d, c * (2.0 - d))?;
            Ok(w * (up + lo))
        })?;
        Ok(r.scaled(c))
    }

    /// ∫_a^∞ f via `x = a - 1 + 2/(1+y)`, `y ∈ (-1, 1)`.
    pub fn integrate_to_infinity(
        &self,
        a: f64,
        f: impl Fn(Abscissa) -> f64,
    ) -> Result<IntegralResult> {
        if !a.is_finite() {
            return Err(domain("lower limit", "finite", a));
        }
        // (1+y, 1-y) pairs are passed exactly.
        let eval = |one_plus: f64, one_minus: f64| -> Result<f64> {
            let u = 2.0 / one_plus;
            let from_lower = one_minus / one_plus;
            let x = a + from_lower;
            let v = f(Abscissa {
                x,
                from_lower,
                from_upper: f64::INFINITY,
            });
            if v.is_finite() {
                Ok(v * 0.5 * u * u)
            } else {
                Err(Error::NonFinite { abscissa: x })
            }
        };
        self.run(|d, w, centre| {
            if centre {
                return Ok(w * eval(1.0, 1.0)?);
            }
            Ok(w * (eval(2.0 - d, d)? + eval(d, 2.0 - d)?))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_for_hundred_digits() {
        let ts = TanhSinh::for_decimal_digits(100);
        assert_eq!(ts.precision_bits, 336);
        assert_eq!(ts.levels, 9);
    }

    #[test]
    fn smooth_finite_integral() {
        let ts = TanhSinh::for_decimal_digits(15);
        let r = ts.integrate_finite(0.0, 1.0, |p| p.x.exp()).unwrap();
        assert!((r.value - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity() {
        let ts = TanhSinh::for_decimal_digits(30);
        let r = ts
            .integrate_finite(0.0, 1.0, |p| p.from_lower.powf(-0.5))
            .unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn infinite_range() {
        let ts = TanhSinh::for_decimal_digits(30);
        let r = ts
            .integrate_to_infinity(0.0, |p| 1.0 / (1.0 + p.x * p.x))
            .unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-12);
    }
}
