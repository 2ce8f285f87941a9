//! Vector-valued signals on a uniform time grid, projection onto a
//! direction, and strict local-extrema detection of 1-D signals.

use crate::error::{Result, VemdError};
use crate::scalar::{dot, norm2, unit_norm_tolerance, Scalar};
use crate::DirectionSet;

/// `d` channels sampled on a shared uniform grid of `T` points.
///
/// Channels always have identical length, `dt > 0`, and every sample is
/// finite. The channel count is 1 (degenerate single-channel path) or 3
/// (curve in space).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSignal<S> {
    channels: Vec<Vec<S>>,
    dt: S,
    t0: S,
}

impl<S: Scalar> VectorSignal<S> {
    /// Validates and wraps channel data.
    pub fn new(channels: Vec<Vec<S>>, dt: S, t0: S) -> Result<Self> {
        let d = channels.len();
        if d != 1 && d != 3 {
            return Err(VemdError::InvalidSignal(format!(
                "channel count must be 1 or 3, got {d}"
            )));
        }
        let len = channels[0].len();
        if len < 2 {
            return Err(VemdError::TooShort { len, min: 2 });
        }
        if channels.iter().any(|c| c.len() != len) {
            return Err(VemdError::InvalidSignal(
                "channels differ in length".to_string(),
            ));
        }
        if !(dt > S::zero()) || !dt.is_finite() {
            return Err(VemdError::InvalidSignal("dt must be positive".to_string()));
        }
        if !t0.is_finite() {
            return Err(VemdError::InvalidSignal("t0 must be finite".to_string()));
        }
        if channels.iter().flatten().any(|v| !v.is_finite()) {
            return Err(VemdError::InvalidSignal(
                "samples must be finite".to_string(),
            ));
        }
        Ok(VectorSignal { channels, dt, t0 })
    }

    /// Internal constructor for values derived from an already valid signal.
    pub(crate) fn from_parts(channels: Vec<Vec<S>>, dt: S, t0: S) -> Self {
        VectorSignal { channels, dt, t0 }
    }

    /// Number of channels `d`.
    pub fn dim(&self) -> usize {
        self.channels.len()
    }

    /// Number of samples `T`.
    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    /// Always false; signals hold at least two samples.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Time step.
    pub fn dt(&self) -> S {
        self.dt
    }

    /// Start time.
    pub fn t0(&self) -> S {
        self.t0
    }

    /// Time of sample `i`.
    pub fn time(&self, i: usize) -> S {
        self.t0 + S::from_index(i) * self.dt
    }

    /// Samples of channel `c`.
    pub fn channel(&self, c: usize) -> &[S] {
        &self.channels[c]
    }

    /// All channels.
    pub fn channels(&self) -> &[Vec<S>] {
        &self.channels
    }

    /// The `d`-vector at sample `i`, written into `out`.
    pub fn sample_into(&self, i: usize, out: &mut [S]) {
        for (o, c) in out.iter_mut().zip(&self.channels) {
            *o = c[i];
        }
    }

    /// Channel-wise difference with matching shape.
    pub fn subtract(&self, rhs: &Self) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(VemdError::ShapeMismatch {
                expected: self.dim(),
                got: rhs.dim(),
            });
        }
        if self.len() != rhs.len() {
            return Err(VemdError::ShapeMismatch {
                expected: self.len(),
                got: rhs.len(),
            });
        }
        let channels = self
            .channels
            .iter()
            .zip(&rhs.channels)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| x - y).collect())
            .collect();
        Ok(VectorSignal::from_parts(channels, self.dt, self.t0))
    }

    /// Frobenius norm over all channels and samples.
    pub fn norm(&self) -> S {
        self.channels
            .iter()
            .flatten()
            .fold(S::zero(), |acc, &v| acc + v * v)
            .sqrt()
    }
}

/// Sorted index sets of the strict local maxima and minima of a 1-D signal.
///
/// Maxima and minima interleave: between two consecutive maxima lies at
/// least one minimum, and vice versa.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExtremaSet {
    /// Grid indices of local maxima, strictly increasing.
    pub maxima: Vec<usize>,
    /// Grid indices of local minima, strictly increasing.
    pub minima: Vec<usize>,
}

impl ExtremaSet {
    /// Total number of extrema.
    pub fn total(&self) -> usize {
        self.maxima.len() + self.minima.len()
    }
}

/// Projects the signal onto a unit direction: sample `i` of the output is
/// the dot product of `direction` with the channel values at `i`.
pub fn project<S: Scalar>(signal: &VectorSignal<S>, direction: &[S]) -> Result<Vec<S>> {
    if direction.len() != signal.dim() {
        return Err(VemdError::ShapeMismatch {
            expected: signal.dim(),
            got: direction.len(),
        });
    }
    let norm = norm2(direction);
    if (norm - S::one()).abs() > unit_norm_tolerance::<S>() {
        return Err(VemdError::NotUnitNorm {
            norm: norm.to_f64().unwrap_or(f64::NAN),
        });
    }
    let len = signal.len();
    let mut out = vec![S::zero(); len];
    for (c, channel) in signal.channels().iter().enumerate() {
        let p = direction[c];
        for (o, &v) in out.iter_mut().zip(channel) {
            *o += p * v;
        }
    }
    Ok(out)
}

/// Detects strict local extrema under the plateau rule: a run of equal
/// samples flanked by strictly smaller (larger) samples on both sides is one
/// maximum (minimum), located at the run's first index. Endpoints are never
/// extrema.
pub fn find_extrema<S: Scalar>(samples: &[S]) -> Result<ExtremaSet> {
    let len = samples.len();
    if len < 3 {
        return Err(VemdError::TooShort { len, min: 3 });
    }
    let mut extrema = ExtremaSet::default();
    let mut run_start = 0;
    for i in 1..=len {
        if i < len && samples[i] == samples[run_start] {
            continue;
        }
        // Run [run_start, i); runs touching an endpoint are skipped.
        if run_start > 0 && i < len {
            let value = samples[run_start];
            let left = samples[run_start - 1];
            let right = samples[i];
            if left < value && right < value {
                extrema.maxima.push(run_start);
            } else if left > value && right > value {
                extrema.minima.push(run_start);
            }
        }
        run_start = i;
    }
    Ok(extrema)
}

/// Maximum over all directions of the projected signal's extrema count;
/// the decomposition loop stops when this drops below 2.
pub fn extrema_count<S: Scalar>(
    signal: &VectorSignal<S>,
    directions: &DirectionSet<S>,
) -> Result<usize> {
    if signal.len() < 3 {
        return Ok(0);
    }
    let mut best = 0;
    for dir in directions.iter() {
        let projected = project(signal, dir)?;
        best = best.max(find_extrema(&projected)?.total());
    }
    Ok(best)
}

/// `p · q` for two direction vectors (exposed for metric helpers).
pub fn direction_dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    dot(a, b)
}
