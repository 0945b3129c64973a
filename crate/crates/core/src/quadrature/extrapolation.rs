use super::QuadValue;

/// Neville extrapolation of the samples `(xs[i], ys[i])` to `x = 0`.
///
/// Returns the top-order estimate and the difference to the estimate one
/// order lower as an error indicator.
pub fn richardson_at_zero(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    match n {
        0 => return (f64::NAN, f64::INFINITY),
        1 => return (ys[0], f64::INFINITY),
        _ => {}
    }
    let mut p = ys.to_vec();
    let mut prev_top = p[n - 1];
    for m in 1..n {
        for i in (m..n).rev() {
            let (xi, xim) = (xs[i], xs[i - m]);
            p[i] = (xi * p[i - 1] - xim * p[i]) / (xi - xim);
        }
        if m < n - 1 {
            prev_top = p[n - 1];
        }
    }
    let top = p[n - 1];
    (top, (top - prev_top).abs())
}

/// Wynn's ε-algorithm on a sequence of partial sums.
///
/// Returns the highest even-column estimate and an error indicator built
/// from the two preceding even-column estimates.
pub fn wynn_epsilon<T: QuadValue>(seq: &[T]) -> Option<(T, f64)> {
    let n = seq.len();
    if n < 3 {
        return None;
    }
    let mut prev: Vec<T> = vec![T::default(); n + 1];
    let mut cur: Vec<T> = seq.to_vec();
    let mut estimates: Vec<T> = vec![seq[n - 1]];
    let mut col = 0;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        let mut degenerate = false;
        for j in 0..cur.len() - 1 {
            let d = cur[j + 1] - cur[j];
            let scale = cur[j + 1].magnitude().max(cur[j].magnitude());
            if d.magnitude() <= 4.0 * f64::EPSILON * scale || d.magnitude() == 0.0 {
                degenerate = true;
                break;
            }
            next.push(prev[j + 1] + d.recip());
        }
        if degenerate {
            break;
        }
        col += 1;
        prev = cur;
        cur = next;
        if col % 2 == 0 {
            if let Some(last) = cur.last() {
                if !last.is_finite_value() {
                    break;
                }
                estimates.push(*last);
            }
        }
    }
    let k = estimates.len();
    let best = estimates[k - 1];
    let err = match k {
        1 => (seq[n - 1] - seq[n - 2]).magnitude(),
        2 => (best - estimates[0]).magnitude(),
        _ => (best - estimates[k - 2]).magnitude() + (best - estimates[k - 3]).magnitude(),
    };
    Some((best, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_removes_polynomial_error() {
        let xs = [1e-1, 1e-2, 1e-3, 1e-4];
        let ys: Vec<f64> = xs.iter().map(|e| 2.0 + 3.0 * e - 5.0 * e * e).collect();
        let (v, _) = richardson_at_zero(&xs, &ys);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // ln 2 = 1 - 1/2 + 1/3 - ...
        let mut s = 0.0;
        let partial: Vec<f64> = (1..=15)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        let (v, err) = wynn_epsilon(&partial).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-10, "{v}");
        assert!(err < 1e-7);
    }

    #[test]
    fn wynn_handles_constant_sequence() {
        let (v, e) = wynn_epsilon(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(e, 0.0);
    }
}
