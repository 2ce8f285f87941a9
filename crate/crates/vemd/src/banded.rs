//! Banded LU factorization with partial pivoting.
//!
//! LAPACK-style band storage: entry `(i, j)` of an `n × n` matrix with `kl`
//! sub- and `ku` superdiagonals lives at `ab[j·ldab + kl + ku + i - j]` with
//! `ldab = 2·kl + ku + 1`. The extra `kl` rows on top hold the fill-in that
//! row interchanges produce, so the factored upper bandwidth is `kl + ku`.

use crate::error::{Result, VemdError};
use crate::scalar::Scalar;

/// Square banded matrix under assembly.
#[derive(Debug, Clone)]
pub struct BandedMatrix<S> {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<S>,
}

impl<S: Scalar> BandedMatrix<S> {
    /// Zero matrix of size `n` with `kl` sub- and `ku` superdiagonals.
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        BandedMatrix {
            n,
            kl,
            ku,
            ldab,
            ab: vec![S::zero(); ldab * n],
        }
    }

    /// Matrix size.
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(j <= i + self.ku && i <= j + self.kl, "entry ({i},{j}) outside band");
        j * self.ldab + self.kl + self.ku + i - j
    }

    /// Accumulates `value` into entry `(i, j)`.
    pub fn add(&mut self, i: usize, j: usize, value: S) {
        let s = self.slot(i, j);
        self.ab[s] += value;
    }

    /// Entry `(i, j)`, zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> S {
        if j > i + self.ku || i > j + self.kl {
            S::zero()
        } else {
            self.ab[self.slot(i, j)]
        }
    }

    /// `y = A·x`.
    pub fn matvec(&self, x: &[S], y: &mut [S]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        y.fill(S::zero());
        for j in 0..self.n {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl).min(self.n - 1);
            let xj = x[j];
            for i in lo..=hi {
                y[i] += self.ab[j * self.ldab + self.kl + self.ku + i - j] * xj;
            }
        }
    }

    /// LU factorization with partial pivoting; the matrix itself is kept
    /// for residual computations.
    pub fn factor(&self) -> Result<BandedLu<S>> {
        let n = self.n;
        let kl = self.kl;
        let ku_eff = self.kl + self.ku;
        let ldab = self.ldab;
        let mut ab = self.ab.clone();
        let mut ipiv = vec![0usize; n];

        let max_abs = ab.iter().fold(S::zero(), |m, v| m.max(v.abs()));
        if max_abs == S::zero() {
            return Err(VemdError::SingularSystem);
        }
        let pivot_tol = max_abs * S::epsilon() * S::cast(16.0);

        let idx = |i: usize, j: usize| -> usize { j * ldab + kl + self.ku + i - j };

        for j in 0..n {
            let km = kl.min(n - 1 - j);
            // Partial pivot over rows j..=j+km of column j.
            let mut piv = 0usize;
            let mut piv_val = ab[idx(j, j)].abs();
            for r in 1..=km {
                let v = ab[idx(j + r, j)].abs();
                if v > piv_val {
                    piv_val = v;
                    piv = r;
                }
            }
            if piv_val <= pivot_tol {
                return Err(VemdError::SingularSystem);
            }
            ipiv[j] = j + piv;
            let jend = (j + ku_eff).min(n - 1);
            if piv != 0 {
                for col in j..=jend {
                    ab.swap(idx(j, col), idx(j + piv, col));
                }
            }
            let pivot = ab[idx(j, j)];
            for r in 1..=km {
                let multiplier = ab[idx(j + r, j)] / pivot;
                ab[idx(j + r, j)] = multiplier;
                if multiplier != S::zero() {
                    for col in (j + 1)..=jend {
                        let u = ab[idx(j, col)];
                        ab[idx(j + r, col)] = ab[idx(j + r, col)] - multiplier * u;
                    }
                }
            }
        }

        Ok(BandedLu {
            n,
            kl,
            ku_eff,
            ldab,
            ku_orig: self.ku,
            ab,
            ipiv,
        })
    }

    /// Factors once and solves with one step of iterative refinement.
    pub fn solve(&self, rhs: &[S]) -> Result<Vec<S>> {
        let lu = self.factor()?;
        let mut x = rhs.to_vec();
        lu.solve_in_place(&mut x);

        // One refinement pass tightens the residual at negligible cost.
        let mut residual = vec![S::zero(); self.n];
        self.matvec(&x, &mut residual);
        for (r, &b) in residual.iter_mut().zip(rhs) {
            *r = b - *r;
        }
        lu.solve_in_place(&mut residual);
        for (xi, d) in x.iter_mut().zip(&residual) {
            *xi += *d;
        }
        Ok(x)
    }
}

/// Factored form `P·A = L·U` in band storage.
#[derive(Debug, Clone)]
pub struct BandedLu<S> {
    n: usize,
    kl: usize,
    ku_eff: usize,
    ku_orig: usize,
    ldab: usize,
    ab: Vec<S>,
    ipiv: Vec<usize>,
}

impl<S: Scalar> BandedLu<S> {
    /// Solves `A·x = rhs` in place.
    pub fn solve_in_place(&self, rhs: &mut [S]) {
        debug_assert_eq!(rhs.len(), self.n);
        let idx = |i: usize, j: usize| -> usize { j * self.ldab + self.kl + self.ku_orig + i - j };

        // Forward: apply interchanges and L.
        for j in 0..self.n {
            rhs.swap(j, self.ipiv[j]);
            let km = self.kl.min(self.n - 1 - j);
            let bj = rhs[j];
            if bj != S::zero() {
                for r in 1..=km {
                    let l = self.ab[idx(j + r, j)];
                    rhs[j + r] = rhs[j + r] - l * bj;
                }
            }
        }
        // Backward: U has bandwidth ku_eff after pivoting.
        for j in (0..self.n).rev() {
            let xj = rhs[j] / self.ab[idx(j, j)];
            rhs[j] = xj;
            if xj != S::zero() {
                let lo = j.saturating_sub(self.ku_eff);
                for i in lo..j {
                    let u = self.ab[idx(i, j)];
                    rhs[i] = rhs[i] - u * xj;
                }
            }
        }
    }
}
