//! Optimization-based lifting of 1-D envelopes into multi-channel space.
//!
//! Given a direction `p`, a 1-D envelope `u` interpolated in the projected
//! space, and the curve values at the projected extrema, the lifted envelope
//! `U` is the minimizer of the discrete Sobolev seminorm
//! `S^(n)[U] = Σ_c ‖D_n U_c‖²` subject to
//!
//! * projection: `p · U(i) = u(i)` at every sample, and
//! * interpolation: `U(t_k) = H(t_k)` at every extremum.
//!
//! Both constraint families touch a single sample each, so ordering the
//! unknowns and multipliers sample by sample makes the KKT system
//! `[[2Q, Aᵀ], [A, 0]]` banded with a bandwidth independent of `T`; one
//! banded LU with partial pivoting solves it in `O(T)`. Projection rows at
//! anchor samples are dropped: they follow from the anchor rows because the
//! envelope interpolates the projected extrema, and removing them keeps `A`
//! full row rank.

use crate::banded::BandedMatrix;
use crate::error::{Result, VemdError};
use crate::scalar::{dot, norm2, unit_norm_tolerance, Scalar};
use crate::signal::VectorSignal;

/// `n`-th order finite-difference operator on `T` samples: the
/// `(T-n) × T` band matrix whose row `r` carries the stencil
/// `binomial(n, j)·(-1)^(n-j)` in columns `r..=r+n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOperator<S> {
    order: usize,
    len: usize,
    stencil: Vec<S>,
}

/// Builds the difference operator; `1 <= order <= 3` and `len > order`.
pub fn diff_operator<S: Scalar>(order: usize, len: usize) -> Result<DiffOperator<S>> {
    if !(1..=3).contains(&order) {
        return Err(VemdError::InvalidConfig(format!(
            "derivative order must be 1, 2 or 3, got {order}"
        )));
    }
    if len <= order {
        return Err(VemdError::TooShort {
            len,
            min: order + 1,
        });
    }
    let mut stencil = vec![S::zero(); order + 1];
    let mut binom = 1i64;
    for (j, slot) in stencil.iter_mut().enumerate() {
        let sign = if (order - j) % 2 == 0 { 1 } else { -1 };
        *slot = S::cast((sign * binom) as f64);
        binom = binom * (order as i64 - j as i64) / (j as i64 + 1);
    }
    Ok(DiffOperator {
        order,
        len,
        stencil,
    })
}

impl<S: Scalar> DiffOperator<S> {
    /// Derivative order `n`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of columns `T`.
    pub fn len(&self) -> usize {
        self.len
    }

    /// Never true; construction requires `len > order`.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of rows `T - n`.
    pub fn rows(&self) -> usize {
        self.len - self.order
    }

    /// Entry `(row, col)`; zero outside the stencil.
    pub fn coefficient(&self, row: usize, col: usize) -> S {
        if col >= row && col <= row + self.order {
            self.stencil[col - row]
        } else {
            S::zero()
        }
    }

    /// Applies the operator to a sample vector.
    pub fn apply(&self, x: &[S]) -> Vec<S> {
        debug_assert_eq!(x.len(), self.len);
        (0..self.rows())
            .map(|r| {
                self.stencil
                    .iter()
                    .enumerate()
                    .fold(S::zero(), |acc, (j, &c)| acc + c * x[r + j])
            })
            .collect()
    }

    /// Entry `(i, j)` of the Gram matrix `DᵀD`, banded with bandwidth `n`.
    pub fn gram(&self, i: usize, j: usize) -> S {
        let lo = i.max(j).saturating_sub(self.order);
        let hi = i.min(j).min(self.rows() - 1);
        let mut acc = S::zero();
        let mut r = lo;
        while r <= hi {
            acc += self.stencil[i - r] * self.stencil[j - r];
            r += 1;
        }
        acc
    }

    /// Trace of `DᵀD`.
    pub fn gram_trace(&self) -> S {
        (0..self.len).fold(S::zero(), |acc, i| acc + self.gram(i, i))
    }
}

/// Sobolev seminorm `Σ_c ‖D_n x_c‖₂²`; zero exactly on per-channel
/// polynomials of degree below `n`.
pub fn sobolev<S: Scalar>(signal: &VectorSignal<S>, order: usize) -> Result<S> {
    let diff = diff_operator::<S>(order, signal.len())?;
    Ok(signal.channels().iter().fold(S::zero(), |acc, ch| {
        diff.apply(ch).iter().fold(acc, |a, &v| a + v * v)
    }))
}

/// One lifting problem: direction, 1-D target envelope, and the anchor
/// samples the lifted envelope must pass through.
#[derive(Debug, Clone)]
pub struct BackProjectionProblem<'a, S> {
    direction: &'a [S],
    target_envelope: &'a [S],
    anchor_indices: &'a [usize],
    anchor_values: Vec<Vec<S>>,
    order: usize,
}

impl<'a, S: Scalar> BackProjectionProblem<'a, S> {
    /// Validates and wraps a problem. `anchor_values[k]` is the `d`-vector
    /// the solution must take at sample `anchor_indices[k]`; its projection
    /// onto `direction` must agree with the target envelope there.
    pub fn new(
        direction: &'a [S],
        target_envelope: &'a [S],
        anchor_indices: &'a [usize],
        anchor_values: Vec<Vec<S>>,
        order: usize,
    ) -> Result<Self> {
        let len = target_envelope.len();
        if !(1..=3).contains(&order) {
            return Err(VemdError::InvalidConfig(format!(
                "derivative order must be 1, 2 or 3, got {order}"
            )));
        }
        if len <= order {
            return Err(VemdError::TooShort {
                len,
                min: order + 1,
            });
        }
        let dim = direction.len();
        let norm = norm2(direction);
        if (norm - S::one()).abs() > unit_norm_tolerance::<S>() {
            return Err(VemdError::NotUnitNorm {
                norm: norm.to_f64().unwrap_or(f64::NAN),
            });
        }
        if anchor_indices.len() < 2 {
            return Err(VemdError::InsufficientExtrema {
                maxima: anchor_indices.len(),
                minima: anchor_indices.len(),
            });
        }
        if anchor_indices.windows(2).any(|w| w[0] >= w[1])
            || *anchor_indices.last().unwrap() >= len
        {
            return Err(VemdError::InvalidConfig(
                "anchor indices must be strictly increasing grid indices".to_string(),
            ));
        }
        if anchor_values.len() != anchor_indices.len() {
            return Err(VemdError::ShapeMismatch {
                expected: anchor_indices.len(),
                got: anchor_values.len(),
            });
        }
        if anchor_values.iter().any(|v| v.len() != dim) {
            return Err(VemdError::ShapeMismatch {
                expected: dim,
                got: anchor_values.iter().map(|v| v.len()).find(|&l| l != dim).unwrap_or(0),
            });
        }

        let scale = S::one()
            + target_envelope
                .iter()
                .fold(S::zero(), |m, v| m.max(v.abs()));
        let tol = consistency_tolerance::<S>() * scale;
        for (k, (&idx, values)) in anchor_indices.iter().zip(&anchor_values).enumerate() {
            let violation = (dot(direction, values) - target_envelope[idx]).abs();
            if violation > tol {
                return Err(VemdError::InconsistentConstraints {
                    index: k,
                    violation: violation.to_f64().unwrap_or(f64::NAN),
                });
            }
        }

        Ok(BackProjectionProblem {
            direction,
            target_envelope,
            anchor_indices,
            anchor_values,
            order,
        })
    }

    /// Builds a problem whose anchor values are read from `signal` at the
    /// anchor indices.
    pub fn from_signal(
        signal: &VectorSignal<S>,
        direction: &'a [S],
        target_envelope: &'a [S],
        anchor_indices: &'a [usize],
        order: usize,
    ) -> Result<Self> {
        if target_envelope.len() != signal.len() {
            return Err(VemdError::ShapeMismatch {
                expected: signal.len(),
                got: target_envelope.len(),
            });
        }
        let anchor_values = anchor_indices
            .iter()
            .map(|&i| signal.channels().iter().map(|ch| ch[i]).collect())
            .collect();
        BackProjectionProblem::new(
            direction,
            target_envelope,
            anchor_indices,
            anchor_values,
            order,
        )
    }

    /// Number of channels `d`.
    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    /// Number of samples `T`.
    pub fn len(&self) -> usize {
        self.target_envelope.len()
    }

    /// Never true.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Derivative order of the smoothness objective.
    pub fn order(&self) -> usize {
        self.order
    }
}

/// One equality-constraint row; every row involves only the unknowns of a
/// single sample, which is what keeps the KKT system banded.
#[derive(Debug, Clone, PartialEq)]
pub enum Constraint<S> {
    /// `Σ_c coefficients[c] · x_c[sample] = rhs`.
    Projection { sample: usize, coefficients: Vec<S> },
    /// `x_channel[sample] = rhs`.
    Anchor { sample: usize, channel: usize },
}

impl<S> Constraint<S> {
    /// Sample index the row acts on.
    pub fn sample(&self) -> usize {
        match self {
            Constraint::Projection { sample, .. } => *sample,
            Constraint::Anchor { sample, .. } => *sample,
        }
    }
}

/// Assembled quadratic program: block-diagonal Gram objective plus the
/// stacked constraint rows `A x = b` over `d·T` unknowns.
#[derive(Debug, Clone)]
pub struct AssembledSystem<S> {
    /// Channel count `d`.
    pub dim: usize,
    /// Sample count `T`.
    pub len: usize,
    /// Difference operator whose Gram matrix forms each diagonal block of `Q`.
    pub diff: DiffOperator<S>,
    /// Constraint rows; projection rows at anchor samples are omitted.
    pub constraints: Vec<Constraint<S>>,
    /// Right-hand side aligned with `constraints`.
    pub rhs: Vec<S>,
}

impl<S: Scalar> AssembledSystem<S> {
    /// Number of constraint rows `(T - K) + d·K`.
    pub fn num_rows(&self) -> usize {
        self.constraints.len()
    }

    /// Number of unknowns `d·T`.
    pub fn num_cols(&self) -> usize {
        self.dim * self.len
    }

    /// Residual `max_r |A_r x - b_r|` of a candidate solution given as
    /// channel-major data.
    pub fn constraint_residual(&self, channels: &[Vec<S>]) -> S {
        let mut worst = S::zero();
        for (row, &b) in self.constraints.iter().zip(&self.rhs) {
            let value = match row {
                Constraint::Projection {
                    sample,
                    coefficients,
                } => coefficients
                    .iter()
                    .enumerate()
                    .fold(S::zero(), |acc, (c, &p)| acc + p * channels[c][*sample]),
                Constraint::Anchor { sample, channel } => channels[*channel][*sample],
            };
            worst = worst.max((value - b).abs());
        }
        worst
    }
}

/// Assembles the quadratic form and constraint system of a problem.
pub fn assemble<S: Scalar>(problem: &BackProjectionProblem<'_, S>) -> AssembledSystem<S> {
    let len = problem.len();
    let dim = problem.dim();
    let diff = diff_operator::<S>(problem.order, len).expect("problem validated");

    let mut is_anchor = vec![false; len];
    for &i in problem.anchor_indices {
        is_anchor[i] = true;
    }

    let mut constraints = Vec::with_capacity(len - problem.anchor_indices.len() + dim * problem.anchor_indices.len());
    let mut rhs = Vec::with_capacity(constraints.capacity());
    for (sample, &anchored) in is_anchor.iter().enumerate() {
        if !anchored {
            constraints.push(Constraint::Projection {
                sample,
                coefficients: problem.direction.to_vec(),
            });
            rhs.push(problem.target_envelope[sample]);
        }
    }
    for (&sample, values) in problem.anchor_indices.iter().zip(&problem.anchor_values) {
        for (channel, &v) in values.iter().enumerate() {
            constraints.push(Constraint::Anchor { sample, channel });
            rhs.push(v);
        }
    }

    AssembledSystem {
        dim,
        len,
        diff,
        constraints,
        rhs,
    }
}

/// Tolerance on anchor/envelope consistency and constraint feasibility.
fn consistency_tolerance<S: Scalar>() -> S {
    S::cast(1e-8).max(S::epsilon() * S::cast(1e4))
}

/// Solves the KKT system of `sys` with the objective scaled by
/// `gram_scale` and `regularization` added to the diagonal of `Q`.
/// Unknowns and multipliers are interleaved sample by sample.
fn solve_kkt<S: Scalar>(
    sys: &AssembledSystem<S>,
    gram_scale: S,
    regularization: S,
) -> Result<Vec<Vec<S>>> {
    let dim = sys.dim;
    let len = sys.len;
    let order = sys.diff.order();

    let mut rows_at_sample: Vec<Vec<usize>> = vec![Vec::new(); len];
    for (r, c) in sys.constraints.iter().enumerate() {
        rows_at_sample[c.sample()].push(r);
    }

    // Block offsets: sample i holds its d unknowns then its multipliers.
    let mut offset = Vec::with_capacity(len + 1);
    let mut pos = 0usize;
    for rows in &rows_at_sample {
        offset.push(pos);
        pos += dim + rows.len();
    }
    offset.push(pos);
    let total = pos;

    let mut multiplier_pos = vec![0usize; sys.constraints.len()];
    for (i, rows) in rows_at_sample.iter().enumerate() {
        for (k, &r) in rows.iter().enumerate() {
            multiplier_pos[r] = offset[i] + dim + k;
        }
    }

    let mut bandwidth = 0usize;
    for i in 0..len {
        let reach = (i + order).min(len - 1);
        bandwidth = bandwidth.max(offset[reach] - offset[i]);
        bandwidth = bandwidth.max(offset[i + 1] - offset[i] - 1);
    }

    let mut kkt = BandedMatrix::new(total, bandwidth, bandwidth);
    let two = S::cast(2.0);
    for c in 0..dim {
        for i in 0..len {
            let row = offset[i] + c;
            for j in i.saturating_sub(order)..=(i + order).min(len - 1) {
                let q = sys.diff.gram(i, j) * gram_scale;
                if q != S::zero() {
                    kkt.add(row, offset[j] + c, two * q);
                }
            }
            if regularization != S::zero() {
                kkt.add(row, row, two * regularization);
            }
        }
    }
    for (r, constraint) in sys.constraints.iter().enumerate() {
        let mp = multiplier_pos[r];
        match constraint {
            Constraint::Projection {
                sample,
                coefficients,
            } => {
                for (c, &p) in coefficients.iter().enumerate() {
                    let vp = offset[*sample] + c;
                    kkt.add(mp, vp, p);
                    kkt.add(vp, mp, p);
                }
            }
            Constraint::Anchor { sample, channel } => {
                let vp = offset[*sample] + channel;
                kkt.add(mp, vp, S::one());
                kkt.add(vp, mp, S::one());
            }
        }
    }

    let mut rhs = vec![S::zero(); total];
    for (r, &b) in sys.rhs.iter().enumerate() {
        rhs[multiplier_pos[r]] = b;
    }

    let solution = kkt.solve(&rhs)?;

    // First-order optimality: the full KKT residual must be small relative
    // to the right-hand side.
    let mut residual = vec![S::zero(); total];
    kkt.matvec(&solution, &mut residual);
    let mut worst = S::zero();
    for (r, &b) in residual.iter().zip(&rhs) {
        worst = worst.max((*r - b).abs());
    }
    let rhs_scale = S::one() + rhs.iter().fold(S::zero(), |m, v| m.max(v.abs()));
    if worst > consistency_tolerance::<S>() * rhs_scale {
        return Err(VemdError::SingularSystem);
    }

    let mut channels = vec![vec![S::zero(); len]; dim];
    for (c, channel) in channels.iter_mut().enumerate() {
        for (i, value) in channel.iter_mut().enumerate() {
            *value = solution[offset[i] + c];
        }
    }
    Ok(channels)
}

/// Minimizes the Sobolev objective under the projection and anchor
/// constraints, returning the lifted envelope as channel-major data.
///
/// A numerically singular factorization triggers one retry with
/// `Q + εI`, `ε = 1e-10·trace(Q)/(d·T)`; if that also fails the caller is
/// expected to skip the direction.
pub fn solve_backprojection<S: Scalar>(
    problem: &BackProjectionProblem<'_, S>,
) -> Result<Vec<Vec<S>>> {
    let sys = assemble(problem);
    let feasible = |channels: &Vec<Vec<S>>| {
        let scale = S::one() + sys.rhs.iter().fold(S::zero(), |m, v| m.max(v.abs()));
        sys.constraint_residual(channels) <= consistency_tolerance::<S>() * scale
    };

    match solve_kkt(&sys, S::one(), S::zero()) {
        Ok(channels) if feasible(&channels) => return Ok(channels),
        Ok(_) | Err(VemdError::SingularSystem) => {}
        Err(e) => return Err(e),
    }

    let trace = sys.diff.gram_trace() * S::from_index(sys.dim);
    let epsilon = S::cast(1e-10) * trace / S::from_index(sys.dim * sys.len);
    let channels = solve_kkt(&sys, S::one(), epsilon)?;
    if feasible(&channels) {
        Ok(channels)
    } else {
        Err(VemdError::SingularSystem)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stencils_match_binomial_signs() {
        let d2 = diff_operator::<f64>(2, 5).unwrap();
        assert_eq!(d2.stencil, vec![1.0, -2.0, 1.0]);
        assert_eq!(d2.rows(), 3);

        let d3 = diff_operator::<f64>(3, 6).unwrap();
        assert_eq!(d3.stencil, vec![-1.0, 3.0, -3.0, 1.0]);

        let d1 = diff_operator::<f64>(1, 4).unwrap();
        assert_eq!(d1.apply(&[5.0, 5.0, 5.0, 5.0]), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn diff_operator_rejects_bad_input() {
        assert!(matches!(
            diff_operator::<f64>(0, 5),
            Err(VemdError::InvalidConfig(_))
        ));
        assert!(matches!(
            diff_operator::<f64>(4, 9),
            Err(VemdError::InvalidConfig(_))
        ));
        assert!(matches!(
            diff_operator::<f64>(3, 3),
            Err(VemdError::TooShort { .. })
        ));
    }

    #[test]
    fn polynomials_below_order_are_annihilated() {
        for order in 1..=3usize {
            let diff = diff_operator::<f64>(order, 12).unwrap();
            for degree in 0..order {
                let poly: Vec<f64> = (0..12).map(|i| (i as f64).powi(degree as i32)).collect();
                for v in diff.apply(&poly) {
                    assert!(v.abs() < 1e-9, "order {order} degree {degree}");
                }
            }
        }
    }

    #[test]
    fn sobolev_known_values() {
        let linear = VectorSignal::new(
            vec![
                (0..8).map(|i| 2.0 * i as f64 + 1.0).collect(),
                (0..8).map(|i| -0.5 * i as f64).collect(),
                vec![3.0; 8],
            ],
            1.0,
            0.0,
        )
        .unwrap();
        assert_relative_eq!(sobolev(&linear, 2).unwrap(), 0.0, epsilon = 1e-12);

        let bump = VectorSignal::new(vec![vec![0.0, 1.0, 0.0]], 1.0, 0.0).unwrap();
        assert_relative_eq!(sobolev(&bump, 2).unwrap(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn gram_matches_explicit_product() {
        for order in 1..=3usize {
            let len = 11;
            let diff = diff_operator::<f64>(order, len).unwrap();
            for i in 0..len {
                for j in 0..len {
                    let explicit: f64 = (0..diff.rows())
                        .map(|r| diff.coefficient(r, i) * diff.coefficient(r, j))
                        .sum();
                    assert_relative_eq!(diff.gram(i, j), explicit, epsilon = 1e-12);
                }
            }
        }
    }

    fn unit3(v: [f64; 3]) -> Vec<f64> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.iter().map(|x| x / n).collect()
    }

    #[test]
    fn assemble_counts_rows_and_has_full_rank() {
        let direction = unit3([1.0, 2.0, -1.0]);
        let target: Vec<f64> = (0..8).map(|i| (i as f64 * 0.7).sin()).collect();
        let anchors = [2usize, 5];
        // Anchor vectors chosen on channel 0 so they project onto the target.
        let anchor_values: Vec<Vec<f64>> = anchors
            .iter()
            .map(|&i| vec![target[i] / direction[0], 0.0, 0.0])
            .collect();
        let problem =
            BackProjectionProblem::new(&direction, &target, &anchors, anchor_values, 2).unwrap();
        let sys = assemble(&problem);
        assert_eq!(sys.num_rows(), (8 - 2) + 2 * 3);
        assert_eq!(sys.num_cols(), 24);

        // Dense rank check.
        let mut dense = nalgebra::DMatrix::<f64>::zeros(sys.num_rows(), sys.num_cols());
        for (r, row) in sys.constraints.iter().enumerate() {
            match row {
                Constraint::Projection {
                    sample,
                    coefficients,
                } => {
                    for (c, &p) in coefficients.iter().enumerate() {
                        dense[(r, c * 8 + sample)] = p;
                    }
                }
                Constraint::Anchor { sample, channel } => {
                    dense[(r, channel * 8 + sample)] = 1.0;
                }
            }
        }
        assert_eq!(dense.rank(1e-10), 12);
    }

    #[test]
    fn single_channel_solution_is_the_envelope() {
        let direction = [1.0f64];
        let target: Vec<f64> = (0..40).map(|i| 1.0 + (i as f64 * 0.4).sin()).collect();
        let anchors = [5usize, 21, 37];
        let anchor_values: Vec<Vec<f64>> = anchors.iter().map(|&i| vec![target[i]]).collect();
        let problem =
            BackProjectionProblem::new(&direction, &target, &anchors, anchor_values, 2).unwrap();
        let solution = solve_backprojection(&problem).unwrap();
        for i in 0..40 {
            assert_relative_eq!(solution[0][i], target[i], epsilon = 1e-8);
        }
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        let direction = unit3([0.5, 0.5, 0.70710678118654752]);
        let target = vec![0.0f64; 24];
        let anchors = [3usize, 19];
        let anchor_values = vec![vec![0.0; 3], vec![0.0; 3]];
        let problem =
            BackProjectionProblem::new(&direction, &target, &anchors, anchor_values, 2).unwrap();
        let solution = solve_backprojection(&problem).unwrap();
        for ch in &solution {
            for &v in ch {
                assert!(v.abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn minimizer_ignores_uniform_scaling_of_the_difference_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let direction = unit3([0.3, -1.1, 0.8]);
        let len = 30;
        let channels: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..len).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let anchors = [4usize, 12, 23];
        let anchor_values: Vec<Vec<f64>> = anchors
            .iter()
            .map(|&i| channels.iter().map(|ch| ch[i]).collect())
            .collect();
        let mut target: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
        for (&i, values) in anchors.iter().zip(&anchor_values) {
            target[i] = dot(&direction, values);
        }
        for order in [2usize, 3] {
            let problem = BackProjectionProblem::new(
                &direction,
                &target,
                &anchors,
                anchor_values.clone(),
                order,
            )
            .unwrap();
            let sys = assemble(&problem);
            // Scaling D by 10 scales the Gram matrix by 100.
            let base = solve_kkt(&sys, 1.0, 0.0).unwrap();
            let scaled = solve_kkt(&sys, 100.0, 0.0).unwrap();
            for c in 0..3 {
                for i in 0..len {
                    assert!(
                        (base[c][i] - scaled[c][i]).abs() <= 1e-9 * (1.0 + base[c][i].abs()),
                        "order {order} channel {c} sample {i}"
                    );
                }
            }
        }
    }

    #[test]
    fn rank_deficient_third_order_two_anchor_case_is_regularized() {
        // With n = 3 and exactly two anchors the reduced Hessian is
        // singular; the fallback must still return a feasible solution.
        let direction = unit3([1.0, 1.0, 1.0]);
        let len = 16;
        let target: Vec<f64> = (0..len).map(|i| (i as f64 * 0.5).cos()).collect();
        let anchors = [2usize, 13];
        let anchor_values: Vec<Vec<f64>> = anchors
            .iter()
            .map(|&i| vec![target[i] / (3.0 * direction[0]); 3])
            .collect();
        let problem =
            BackProjectionProblem::new(&direction, &target, &anchors, anchor_values.clone(), 3)
                .unwrap();
        let solution = solve_backprojection(&problem).unwrap();
        let sys = assemble(&problem);
        let scale = 1.0 + sys.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(sys.constraint_residual(&solution) <= 1e-8 * scale);
    }

    #[test]
    fn inconsistent_anchors_are_rejected() {
        let direction = unit3([1.0, 0.0, 0.0]);
        let target = vec![0.0f64; 10];
        let anchors = [2usize, 7];
        let anchor_values = vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 0.0]];
        assert!(matches!(
            BackProjectionProblem::new(&direction, &target, &anchors, anchor_values, 2),
            Err(VemdError::InconsistentConstraints { .. })
        ));
    }

    #[test]
    fn anchor_validation_errors() {
        let direction = unit3([1.0, 0.0, 0.0]);
        let target = vec![0.0f64; 10];
        assert!(matches!(
            BackProjectionProblem::new(&direction, &target, &[3], vec![vec![0.0; 3]], 2),
            Err(VemdError::InsufficientExtrema { .. })
        ));
        assert!(matches!(
            BackProjectionProblem::new(
                &direction,
                &target,
                &[7, 3],
                vec![vec![0.0; 3], vec![0.0; 3]],
                2
            ),
            Err(VemdError::InvalidConfig(_))
        ));
    }
}
