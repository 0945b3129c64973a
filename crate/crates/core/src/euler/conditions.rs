use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measures::{SheetMu, TimeZeroSheet, VorticitySheet};
use crate::moments::{surface_energy, EnergyMethod, DEFAULT_MAX_SERIES_ORDER};
use crate::quadrature::QuadConfig;
use crate::velocity::{pv_lemma_value, trace_above, trace_below};

/// Radii at which `∫_{∂B(0,r)} |v|²` is sampled for the decay condition.
pub const DECAY_RADII: [f64; 3] = [1e-3, 1e-2, 1e-1];

/// Arc radii at which the tangential jump is sampled.
pub const TRACE_RADII: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionThresholds {
    /// Decay holds when the fitted exponent exceeds this.
    pub decay_exponent: f64,
    /// Matching holds when `|v₂(1, 0)|` is at most this.
    pub matching: f64,
    /// Pressure continuity holds when the sampled jump is at most this.
    pub pressure: f64,
}

impl Default for ConditionThresholds {
    fn default() -> Self {
        Self {
            decay_exponent: 1e-3,
            matching: 1e-3,
            pressure: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub mu: f64,
    pub alpha: f64,
    pub decay_holds: bool,
    /// `(r, ∫_{∂B(0,r)} |v|² dS)`.
    pub decay_witness: Vec<[f64; 2]>,
    /// Least-squares slope of the witness in log-log coordinates.
    pub decay_exponent: f64,
    pub matching_holds: bool,
    /// `v₂(1, 0)`.
    pub matching_witness: f64,
    pub pressure_continuity_holds: bool,
    /// `max |v₁⁺ - v₁⁻|` over the sampled arc radii.
    pub pressure_witness: f64,
    pub thresholds: ConditionThresholds,
    /// All three conditions hold.
    pub weak_euler: bool,
}

pub(crate) fn loglog_slope(points: &[[f64; 2]]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p[0].ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p[1].ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn condition_report(params: SheetMu, cfg: &QuadConfig) -> Result<ConditionReport> {
    let thresholds = ConditionThresholds::default();
    let sheet = VorticitySheet::TimeZero(TimeZeroSheet::new(params));
    let a = params.alpha();

    let mut decay_witness = Vec::with_capacity(DECAY_RADII.len());
    for r in DECAY_RADII {
        let e = surface_energy(&sheet, r, EnergyMethod::Series, DEFAULT_MAX_SERIES_ORDER, cfg)?;
        decay_witness.push([r, e.value]);
    }
    let decay_exponent = loglog_slope(&decay_witness);

    let matching_witness = a / (2.0 * PI) * pv_lemma_value(a, cfg)?.value;

    let mut pressure_witness: f64 = 0.0;
    for s in TRACE_RADII {
        let up = trace_above(s, params, cfg)?.vector;
        let down = trace_below(s, params, cfg)?.vector;
        pressure_witness = pressure_witness.max((up[0] - down[0]).abs());
    }

    let decay_holds = decay_exponent > thresholds.decay_exponent;
    let matching_holds = matching_witness.abs() <= thresholds.matching;
    let pressure_continuity_holds = pressure_witness <= thresholds.pressure;
    Ok(ConditionReport {
        mu: params.mu(),
        alpha: a,
        decay_holds,
        decay_witness,
        decay_exponent,
        matching_holds,
        matching_witness,
        pressure_continuity_holds,
        pressure_witness,
        thresholds,
        weak_euler: decay_holds && matching_holds && pressure_continuity_holds,
    })
}
