//! Quasi-uniform projection directions on the unit sphere.
//!
//! Directions are derived from Hammersley points: the `m`-th point pairs the
//! uniform fraction `m/M` with the van der Corput radical inverse `z_b(m)`.
//! The unit square maps area-preservingly onto the cylinder
//! `[0, 2π) × [-1, 1)` via `φ = 2π·m/M`, `z = 2·z_b(m) - 1`, and the
//! cylinder projects onto the sphere, which spreads the points nearly
//! uniformly. The whole construction is deterministic in `(M, b)`.

use crate::error::{Result, VemdError};
use crate::scalar::Scalar;

/// One Hammersley point in the unit square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HammersleyPoint<S> {
    /// Uniform coordinate `m/M`.
    pub u: S,
    /// Radical-inverse coordinate `z_b(m)`.
    pub v: S,
}

/// Deterministic set of unit projection directions.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet<S> {
    directions: Vec<Vec<S>>,
    base: u64,
}

impl<S: Scalar> DirectionSet<S> {
    /// The single direction `(1)` used for one-channel signals, where the
    /// projection is the identity and no sphere sampling is involved.
    pub fn single_channel() -> Self {
        DirectionSet {
            directions: vec![vec![S::one()]],
            base: 2,
        }
    }

    /// Number of directions.
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    /// True when the set holds no directions (never after construction).
    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Dimension of each direction vector.
    pub fn dim(&self) -> usize {
        self.directions[0].len()
    }

    /// Prime base used for the radical inverse.
    pub fn base(&self) -> u64 {
        self.base
    }

    /// Direction at index `m`.
    pub fn direction(&self, m: usize) -> &[S] {
        &self.directions[m]
    }

    /// Iterates over directions in index order.
    pub fn iter(&self) -> impl Iterator<Item = &[S]> {
        self.directions.iter().map(|d| d.as_slice())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut k = 3;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

fn check_base(base: u64) -> Result<()> {
    if is_prime(base) {
        Ok(())
    } else {
        Err(VemdError::InvalidBase(base))
    }
}

/// Radical inverse `z_b(m)`: the base-`b` digits of `m` mirrored across the
/// radix point. `z_b(0) = 0`; all values lie in `[0, 1)`.
pub fn radical_inverse<S: Scalar>(m: u64, base: u64) -> Result<S> {
    check_base(base)?;
    // Reverse the digits exactly in integer arithmetic, then divide once.
    let mut reversed: u128 = 0;
    let mut denom: u128 = 1;
    let mut rest = m as u128;
    let b = base as u128;
    while rest > 0 {
        reversed = reversed * b + rest % b;
        denom *= b;
        rest /= b;
    }
    Ok(S::cast(reversed as f64 / denom as f64))
}

/// The `M`-point Hammersley set `{(m/M, z_b(m)) : m = 0..M-1}` in index order.
pub fn hammersley_set<S: Scalar>(count: usize, base: u64) -> Result<Vec<HammersleyPoint<S>>> {
    check_base(base)?;
    if count == 0 {
        return Err(VemdError::EmptyDirectionSet);
    }
    let total = S::from_index(count);
    (0..count)
        .map(|m| {
            Ok(HammersleyPoint {
                u: S::from_index(m) / total,
                v: radical_inverse(m as u64, base)?,
            })
        })
        .collect()
}

/// Maps a unit-square point onto the unit sphere through the cylinder
/// `φ = 2π·u`, `z = 2v - 1`.
pub fn to_sphere<S: Scalar>(point: HammersleyPoint<S>) -> [S; 3] {
    let phi = S::cast(2.0) * S::PI() * point.u;
    let z = S::cast(2.0) * point.v - S::one();
    let radius = (S::one() - z * z).max(S::zero()).sqrt();
    [radius * phi.cos(), radius * phi.sin(), z]
}

/// `M` quasi-uniform unit directions on the sphere for prime base `b`.
pub fn direction_set<S: Scalar>(count: usize, base: u64) -> Result<DirectionSet<S>> {
    let directions = hammersley_set(count, base)?
        .into_iter()
        .map(|p| to_sphere(p).to_vec())
        .collect();
    Ok(DirectionSet { directions, base })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::collections::BTreeSet;

    #[test]
    fn radical_inverse_known_values() {
        assert_eq!(radical_inverse::<f64>(0, 2).unwrap(), 0.0);
        assert_eq!(radical_inverse::<f64>(3, 2).unwrap(), 0.75);
        assert_eq!(radical_inverse::<f64>(1, 5).unwrap(), 0.2);
        // digits of 6 in base 2 are 110, mirrored to 0.011.
        assert_eq!(radical_inverse::<f64>(6, 2).unwrap(), 0.375);
    }

    #[test]
    fn radical_inverse_rejects_bad_bases() {
        for b in [0, 1, 4, 6, 9, 21] {
            assert_eq!(
                radical_inverse::<f64>(5, b).unwrap_err(),
                VemdError::InvalidBase(b)
            );
        }
    }

    #[test]
    fn radical_inverse_block_bijectivity() {
        // For m in [0, b^k) the values are exactly the k-digit base-b
        // fractions, all distinct.
        for (b, k) in [(2u64, 6u32), (3, 4), (5, 3)] {
            let block = b.pow(k);
            let mut seen = BTreeSet::new();
            for m in 0..block {
                let v = radical_inverse::<f64>(m, b).unwrap();
                let scaled = v * block as f64;
                assert_relative_eq!(scaled, scaled.round(), max_relative = 1e-12);
                assert!(seen.insert(scaled.round() as u64), "duplicate at m={m}");
            }
            assert_eq!(seen.len(), block as usize);
        }
    }

    #[test]
    fn hammersley_set_matches_hand_evaluation() {
        let one = hammersley_set::<f64>(1, 2).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!((one[0].u, one[0].v), (0.0, 0.0));

        let four = hammersley_set::<f64>(4, 2).unwrap();
        let expected = [(0.0, 0.0), (0.25, 0.5), (0.5, 0.25), (0.75, 0.75)];
        for (p, e) in four.iter().zip(expected) {
            assert_eq!((p.u, p.v), e);
        }

        let two = hammersley_set::<f64>(2, 3).unwrap();
        assert_eq!(two[0].u, 0.0);
        assert_relative_eq!(two[1].v, 1.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn hammersley_set_rejects_zero_count() {
        assert_eq!(
            hammersley_set::<f64>(0, 2).unwrap_err(),
            VemdError::EmptyDirectionSet
        );
    }

    #[test]
    fn sphere_map_known_points() {
        let p = to_sphere(HammersleyPoint { u: 0.0, v: 0.5 });
        assert_abs_diff_eq!(p[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p[2], 0.0, epsilon = 1e-12);

        let p = to_sphere(HammersleyPoint { u: 0.25, v: 0.5 });
        assert_abs_diff_eq!(p[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p[1], 1.0, epsilon = 1e-12);

        let p = to_sphere(HammersleyPoint { u: 0.0, v: 0.0 });
        assert_eq!(p, [0.0, 0.0, -1.0]);
    }

    #[test]
    fn directions_are_unit_norm_and_deterministic() {
        let a = direction_set::<f64>(512, 2).unwrap();
        let b = direction_set::<f64>(512, 2).unwrap();
        assert_eq!(a, b);
        for dir in a.iter() {
            let norm: f64 = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_direction_collapses_to_south_pole() {
        let set = direction_set::<f64>(1, 2).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.direction(0), &[0.0, 0.0, -1.0]);
    }

    #[test]
    fn bases_give_distinct_sets() {
        let a = direction_set::<f64>(512, 2).unwrap();
        let b = direction_set::<f64>(512, 5).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn no_near_duplicate_directions_at_512() {
        let set = direction_set::<f64>(512, 2).unwrap();
        for i in 0..set.len() {
            for j in (i + 1)..set.len() {
                let d: f64 = set
                    .direction(i)
                    .iter()
                    .zip(set.direction(j))
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                assert!(d > 1e-9, "directions {i} and {j} nearly coincide");
            }
        }
    }

    #[test]
    fn centroid_is_near_zero_at_512() {
        let set = direction_set::<f64>(512, 2).unwrap();
        let mut mean = [0.0f64; 3];
        for dir in set.iter() {
            for (m, x) in mean.iter_mut().zip(dir) {
                *m += x;
            }
        }
        let n = set.len() as f64;
        let norm = mean.iter().map(|m| (m / n) * (m / n)).sum::<f64>().sqrt();
        assert!(norm <= 0.05, "centroid norm {norm} too large");
    }

    #[test]
    fn only_zero_radical_inverse_reaches_the_pole() {
        let set = direction_set::<f64>(64, 2).unwrap();
        for (m, dir) in set.iter().enumerate() {
            if m == 0 {
                assert_eq!(dir[2], -1.0);
            } else {
                assert!(dir[2] > -1.0, "m={m} unexpectedly at the pole");
            }
        }
    }

    #[test]
    fn z_coordinates_equidistribute_at_512() {
        // z = 2 z_2(m) - 1 over a full dyadic block fills [-1, 1) evenly:
        // each of 8 equal bins receives exactly 64 of the 512 points.
        let set = direction_set::<f64>(512, 2).unwrap();
        let mut bins = [0usize; 8];
        for dir in set.iter() {
            let z = dir[2];
            let idx = (((z + 1.0) / 2.0 * 8.0).floor() as usize).min(7);
            bins[idx] += 1;
        }
        assert_eq!(bins, [64; 8]);
    }

    #[test]
    fn works_in_single_precision() {
        let set = direction_set::<f32>(32, 3).unwrap();
        for dir in set.iter() {
            let norm: f32 = dir.iter().map(|x| x * x).sum::<f32>().sqrt();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-6);
        }
    }
}
