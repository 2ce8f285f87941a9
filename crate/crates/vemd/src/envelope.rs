//! Cubic-spline envelope interpolation.
//!
//! Envelopes are natural cubic splines through the signal values at the
//! extrema of a projected signal, evaluated in grid-index coordinates. Knot
//! sets are mirror-extended by [`MIRROR_COUNT`] extrema per side before
//! interpolation so the natural boundary conditions act far from the domain.
//! With exactly two extrema the envelope degenerates to the line through
//! them, which keeps late sifting stages defined.

use crate::error::{Result, VemdError};
use crate::scalar::Scalar;
use crate::signal::{ExtremaSet, VectorSignal};

/// Extrema mirrored across each boundary before spline interpolation.
pub const MIRROR_COUNT: usize = 2;

/// Interpolation knots: strictly increasing grid positions (possibly
/// extended beyond the domain) and one value sequence per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineKnots<S> {
    positions: Vec<i64>,
    values: Vec<Vec<S>>,
}

impl<S: Scalar> SplineKnots<S> {
    /// Validates positions (strictly increasing, at least 2) and per-channel
    /// value sequences of matching length.
    pub fn new(positions: Vec<i64>, values: Vec<Vec<S>>) -> Result<Self> {
        if positions.len() < 2 {
            return Err(VemdError::InvalidKnots(format!(
                "need at least 2 knots, got {}",
                positions.len()
            )));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(VemdError::InvalidKnots(
                "positions must be strictly increasing".to_string(),
            ));
        }
        if values.is_empty() {
            return Err(VemdError::InvalidKnots("no value channels".to_string()));
        }
        if values.iter().any(|v| v.len() != positions.len()) {
            return Err(VemdError::InvalidKnots(
                "value count differs from position count".to_string(),
            ));
        }
        Ok(SplineKnots { positions, values })
    }

    /// Samples the given channels at `indices` to form knots.
    pub fn from_indices(channels: &[Vec<S>], indices: &[usize]) -> Result<Self> {
        let positions = indices.iter().map(|&i| i as i64).collect();
        let values = channels
            .iter()
            .map(|ch| indices.iter().map(|&i| ch[i]).collect())
            .collect();
        SplineKnots::new(positions, values)
    }

    /// Number of knots.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    /// Always false after construction.
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Knot positions in grid-index coordinates.
    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    /// Number of interpolated channels.
    pub fn num_channels(&self) -> usize {
        self.values.len()
    }

    /// Values of channel `c`, aligned with `positions`.
    pub fn channel_values(&self, c: usize) -> &[S] {
        &self.values[c]
    }
}

/// Upper and lower envelopes of a signal; `C` is `Vec<S>` for 1-D envelopes
/// and `Vec<Vec<S>>` for multi-channel envelopes.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopePair<C> {
    /// Envelope through the maxima.
    pub upper: C,
    /// Envelope through the minima.
    pub lower: C,
}

/// Reflects up to `count` knots across each end of `domain = (lo, hi)`:
/// position `p` maps to `2·lo - p` (or `2·hi - p`) with its values copied.
/// Knots sitting exactly on a boundary are skipped, so positions stay
/// strictly increasing and no duplicates arise.
pub fn mirror_extend<S: Scalar>(
    knots: &SplineKnots<S>,
    domain: (i64, i64),
    count: usize,
) -> Result<SplineKnots<S>> {
    let (lo, hi) = domain;
    if lo >= hi {
        return Err(VemdError::InvalidConfig(format!(
            "empty mirror domain ({lo}, {hi})"
        )));
    }
    if count == 0 {
        return Err(VemdError::InvalidConfig(
            "mirror count must be at least 1".to_string(),
        ));
    }

    let positions = knots.positions();
    let left_src: Vec<usize> = (0..knots.len())
        .filter(|&i| positions[i] > lo)
        .take(count)
        .collect();
    let right_src: Vec<usize> = (0..knots.len())
        .rev()
        .filter(|&i| positions[i] < hi)
        .take(count)
        .collect();
    if left_src.is_empty() || right_src.is_empty() {
        return Err(VemdError::BoundaryExtension(
            "no interior knot to reflect".to_string(),
        ));
    }

    let mut new_positions = Vec::with_capacity(knots.len() + left_src.len() + right_src.len());
    new_positions.extend(left_src.iter().rev().map(|&i| 2 * lo - positions[i]));
    new_positions.extend_from_slice(positions);
    new_positions.extend(right_src.iter().rev().map(|&i| 2 * hi - positions[i]));

    let new_values = (0..knots.num_channels())
        .map(|c| {
            let vals = knots.channel_values(c);
            let mut v = Vec::with_capacity(new_positions.len());
            v.extend(left_src.iter().rev().map(|&i| vals[i]));
            v.extend_from_slice(vals);
            v.extend(right_src.iter().rev().map(|&i| vals[i]));
            v
        })
        .collect();

    SplineKnots::new(new_positions, new_values)
}

/// Second derivatives of the natural cubic spline through `(x, y)`,
/// via the standard tridiagonal (Thomas) solve.
fn natural_second_derivatives<S: Scalar>(x: &[S], y: &[S]) -> Vec<S> {
    let k = x.len();
    let mut m = vec![S::zero(); k];
    if k < 3 {
        return m;
    }
    let six = S::cast(6.0);
    let two = S::cast(2.0);

    // Interior unknowns m[1..k-1]; natural ends are zero.
    let rows = k - 2;
    let mut diag = vec![S::zero(); rows];
    let mut rhs = vec![S::zero(); rows];
    let mut sup = vec![S::zero(); rows];
    let mut sub = vec![S::zero(); rows];
    for r in 0..rows {
        let i = r + 1;
        let h_prev = x[i] - x[i - 1];
        let h_next = x[i + 1] - x[i];
        sub[r] = h_prev;
        diag[r] = two * (h_prev + h_next);
        sup[r] = h_next;
        rhs[r] = six * ((y[i + 1] - y[i]) / h_next - (y[i] - y[i - 1]) / h_prev);
    }
    // Forward sweep.
    for r in 1..rows {
        let w = sub[r] / diag[r - 1];
        diag[r] = diag[r] - w * sup[r - 1];
        rhs[r] = rhs[r] - w * rhs[r - 1];
    }
    // Back substitution.
    m[rows] = rhs[rows - 1] / diag[rows - 1];
    for r in (0..rows - 1).rev() {
        m[r + 1] = (rhs[r] - sup[r] * m[r + 2]) / diag[r];
    }
    m
}

/// Evaluates the interpolant through the knots on the grid `0..grid_len-1`,
/// one output sequence per channel. Natural cubic spline for three or more
/// knots; the straight line through both knots when exactly two. Grid points
/// outside the knot span use the boundary segment's polynomial.
pub fn cubic_spline_eval<S: Scalar>(
    knots: &SplineKnots<S>,
    grid_len: usize,
) -> Result<Vec<Vec<S>>> {
    let k = knots.len();
    let positions = knots.positions();
    let x: Vec<S> = positions.iter().map(|&p| S::cast(p as f64)).collect();
    let six = S::cast(6.0);

    let mut out = Vec::with_capacity(knots.num_channels());
    for c in 0..knots.num_channels() {
        let y = knots.channel_values(c);
        let mut values = vec![S::zero(); grid_len];
        if k == 2 {
            let slope = (y[1] - y[0]) / (x[1] - x[0]);
            for (i, v) in values.iter_mut().enumerate() {
                *v = y[0] + (S::from_index(i) - x[0]) * slope;
            }
        } else {
            let m = natural_second_derivatives(&x, y);
            let mut seg = 0usize;
            for (i, v) in values.iter_mut().enumerate() {
                let q = i as i64;
                while seg + 2 < k && positions[seg + 1] <= q {
                    seg += 1;
                }
                let h = x[seg + 1] - x[seg];
                let xq = S::from_index(i);
                let a = (x[seg + 1] - xq) / h;
                let b = (xq - x[seg]) / h;
                *v = a * y[seg]
                    + b * y[seg + 1]
                    + ((a * a * a - a) * m[seg] + (b * b * b - b) * m[seg + 1]) * h * h / six;
            }
        }
        out.push(values);
    }
    Ok(out)
}

/// Splines through the given channels at `indices`, mirror-extended when
/// three or more knots exist.
fn interpolate_channels<S: Scalar>(
    channels: &[Vec<S>],
    indices: &[usize],
    grid_len: usize,
) -> Result<Vec<Vec<S>>> {
    let knots = SplineKnots::from_indices(channels, indices)?;
    if knots.len() >= 3 {
        let extended = mirror_extend(&knots, (0, grid_len as i64 - 1), MIRROR_COUNT)?;
        cubic_spline_eval(&extended, grid_len)
    } else {
        cubic_spline_eval(&knots, grid_len)
    }
}

/// Upper and lower envelopes of a 1-D signal through its extrema.
pub fn envelopes_1d<S: Scalar>(
    samples: &[S],
    extrema: &ExtremaSet,
) -> Result<EnvelopePair<Vec<S>>> {
    if extrema.maxima.len() < 2 || extrema.minima.len() < 2 {
        return Err(VemdError::InsufficientExtrema {
            maxima: extrema.maxima.len(),
            minima: extrema.minima.len(),
        });
    }
    let channel = vec![samples.to_vec()];
    let mut upper = interpolate_channels(&channel, &extrema.maxima, samples.len())?;
    let mut lower = interpolate_channels(&channel, &extrema.minima, samples.len())?;
    Ok(EnvelopePair {
        upper: upper.pop().expect("one channel in"),
        lower: lower.pop().expect("one channel in"),
    })
}

/// Multi-channel envelopes: every channel is interpolated independently
/// through the same extrema indices with the same mirroring, so projecting
/// the result along the direction that produced `extrema` reproduces the
/// 1-D envelopes.
pub fn envelopes_memd<S: Scalar>(
    signal: &VectorSignal<S>,
    extrema: &ExtremaSet,
) -> Result<EnvelopePair<Vec<Vec<S>>>> {
    if extrema.maxima.len() < 2 || extrema.minima.len() < 2 {
        return Err(VemdError::InsufficientExtrema {
            maxima: extrema.maxima.len(),
            minima: extrema.minima.len(),
        });
    }
    let upper = interpolate_channels(signal.channels(), &extrema.maxima, signal.len())?;
    let lower = interpolate_channels(signal.channels(), &extrema.minima, signal.len())?;
    Ok(EnvelopePair { upper, lower })
}
