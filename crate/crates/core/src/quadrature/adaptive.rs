use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::kronrod::{gk21, EVALS_PER_RULE};
use super::{Accumulator, IntegralResult, QuadConfig, QuadValue};
use crate::error::Result;

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn too_narrow(a: f64, b: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    b - a <= 256.0 * f64::EPSILON * scale
}

/// Globally adaptive Gauss–Kronrod over `points[0]..points[last]`, with the
/// interior points as initial breakpoints.
pub(crate) fn adaptive<T, F>(mut f: F, points: &[f64], cfg: &QuadConfig) -> Result<IntegralResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    debug_assert!(points.len() >= 2);
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment<T>> = Vec::new();
    let mut total = T::default();
    let mut err = 0.0;
    let mut evals = 0;

    for w in points.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let r = gk21(&mut f, w[0], w[1])?;
        evals += EVALS_PER_RULE;
        total = total + r.value;
        err += r.error;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value: r.value,
            error: r.error,
        });
    }

    let mut converged = false;
    let mut count = heap.len();
    loop {
        if err <= cfg.target(total.magnitude()) {
            converged = true;
            break;
        }
        if count >= cfg.max_subdivisions {
            break;
        }
        let Some(seg) = heap.pop() else { break };
        if too_narrow(seg.a, seg.b) {
            frozen.push(seg);
            continue;
        }
        let mid = 0.5 * (seg.a + seg.b);
        let left = gk21(&mut f, seg.a, mid)?;
        let right = gk21(&mut f, mid, seg.b)?;
        evals += 2 * EVALS_PER_RULE;
        count += 1;
        total = total + (left.value + right.value - seg.value);
        err += left.error + right.error - seg.error;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: left.value,
            error: left.error,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: right.value,
            error: right.error,
        });
    }

    let mut segments: Vec<Segment<T>> = heap.into_vec();
    segments.extend(frozen);
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut acc = Accumulator::default();
    let mut error_estimate = 0.0;
    for s in &segments {
        acc.add(s.value);
        error_estimate += s.error;
    }
    let value = acc.total();
    let converged = converged || error_estimate <= cfg.target(value.magnitude());
    Ok(IntegralResult {
        value,
        error_estimate,
        evaluations: evals,
        converged,
        excision_trace: None,
    })
}
