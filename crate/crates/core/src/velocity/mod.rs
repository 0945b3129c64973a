//! Biot–Savart velocities of the two sheets.
//!
//! Velocities are written as `w = v₁ + i·v₂`. With that convention the
//! Biot–Savart law reads `w(x) = (i/2π) ∫ dω(y) / (x̄ - ȳ)`.

mod kaden;
mod matching;
mod timezero;

use serde::{Deserialize, Serialize};

pub use kaden::{kaden_profile, kaden_velocity, KadenStrategy, SPIRAL_TOLERANCE};
pub use matching::{
    matching_integrand, matching_lhs, MatchingResult, MatchingScheme, MATCHING_RHS,
};
pub use timezero::{
    complex_velocity_timezero, pv_lemma_closed_form, pv_lemma_reduction, pv_lemma_value,
    trace_above, trace_below, trace_closed, trace_limit_check, velocity_timezero,
    velocity_timezero_closed, SideLimit, TraceLimitReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VelocityMethod {
    ClosedForm,
    Quadrature,
}

/// A velocity value at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VelocitySample {
    pub point: [f64; 2],
    pub vector: [f64; 2],
    pub method: VelocityMethod,
    pub error_estimate: f64,
    pub converged: bool,
}
