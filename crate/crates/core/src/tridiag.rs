//! Symmetric tridiagonal pencils `K x = λ M x` with diagonal positive `M`:
//! Sturm counts, bisection and inverse iteration.

use crate::{Error, Result};

const MAX_INVERSE_ITERATIONS: usize = 30;
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct TridiagPencil {
    diag: Vec<f64>,
    off: Vec<f64>,
    mass: Vec<f64>,
}

impl TridiagPencil {
    /// `diag` has length `N`, `off` length `N−1`, `mass` length `N` and positive.
    pub fn new(diag: Vec<f64>, off: Vec<f64>, mass: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::invalid("diag", "empty pencil"));
        }
        if off.len() + 1 != n || mass.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: mass.len(),
            });
        }
        if let Some(i) = mass.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::NotPositiveDefinite {
                pivot: i,
                value: mass[i],
            });
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::invalid("stiffness", "non-finite entry"));
        }
        Ok(TridiagPencil { diag, off, mass })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// `K x`.
    pub fn apply_stiffness(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.off[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Number of eigenvalues strictly below `sigma` (negative pivots of the
    /// `LDLᵀ` factorization of `K − σM`).
    pub fn sturm_count(&self, sigma: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = 0.0;
        for i in 0..self.len() {
            let mut d = self.diag[i] - sigma * self.mass[i];
            if i > 0 {
                d -= self.off[i - 1] * self.off[i - 1] / q;
            }
            if d == 0.0 {
                d = -tiny;
            }
            if d < 0.0 {
                count += 1;
            }
            q = d;
        }
        count
    }

    /// Interval containing the whole spectrum (Gershgorin on `M^{-1/2} K M^{-1/2}`).
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let c = self.diag[i] / self.mass[i];
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs() / (self.mass[i] * self.mass[i - 1]).sqrt();
            }
            if i + 1 < n {
                r += self.off[i].abs() / (self.mass[i] * self.mass[i + 1]).sqrt();
            }
            lo = lo.min(c - r);
            hi = hi.max(c + r);
        }
        let pad = 1e-12 * (lo.abs().max(hi.abs())).max(1.0);
        (lo - pad, hi + pad)
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection on Sturm counts.
    pub fn eigenvalue(&self, index: usize) -> Result<f64> {
        if index >= self.len() {
            return Err(Error::invalid("index", format!("{index} >= {}", self.len())));
        }
        let (mut lo, mut hi) = self.spectral_bounds();
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Eigenvector for an eigenvalue estimate by inverse iteration on `K − σM`,
    /// `M`-orthogonalized against `previous` and normalized to `xᵀMx = 1`.
    pub fn inverse_iteration(&self, lambda: f64, previous: &[Vec<f64>]) -> Result<Vec<f64>> {
        let n = self.len();
        let scale = self
            .diag
            .iter()
            .zip(&self.mass)
            .map(|(d, w)| (d / w).abs())
            .fold(lambda.abs(), f64::max)
            .max(1.0);
        // perturb off the eigenvalue so the shifted matrix is safely invertible
        let sigma = lambda + 1e-10 * scale;
        let shifted: Vec<f64> = (0..n).map(|i| self.diag[i] - sigma * self.mass[i]).collect();
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.1 * ((i as f64 + 1.0) * 0.618_033_988_75).fract())
            .collect();
        let mut residual = f64::INFINITY;
        for _ in 0..MAX_INVERSE_ITERATIONS {
            let rhs: Vec<f64> = x.iter().zip(&self.mass).map(|(a, w)| a * w).collect();
            x = solve_tridiagonal(&shifted, &self.off, &rhs)?;
            self.orthogonalize(&mut x, previous);
            self.normalize(&mut x)?;
            residual = self.residual(lambda, &x);
            if residual < RESIDUAL_TOL * scale {
                return Ok(x);
            }
        }
        Err(Error::Convergence {
            iterations: MAX_INVERSE_ITERATIONS,
            residual,
        })
    }

    /// The `count` smallest eigenpairs, eigenvectors `M`-orthonormal.
    pub fn smallest(&self, count: usize) -> Result<Vec<(f64, Vec<f64>)>> {
        let mut out: Vec<(f64, Vec<f64>)> = Vec::with_capacity(count);
        for i in 0..count {
            let lambda = self.eigenvalue(i)?;
            let prev: Vec<Vec<f64>> = out.iter().map(|(_, v)| v.clone()).collect();
            let v = self.inverse_iteration(lambda, &prev)?;
            out.push((lambda, v));
        }
        Ok(out)
    }

    /// `‖K x − λ M x‖₂ / ‖M^{1/2} x‖₂`.
    pub fn residual(&self, lambda: f64, x: &[f64]) -> f64 {
        let kx = self.apply_stiffness(x);
        let r: f64 = kx
            .iter()
            .zip(x)
            .zip(&self.mass)
            .map(|((k, xi), w)| (k - lambda * w * xi).powi(2))
            .sum();
        r.sqrt() / self.m_inner(x, x).sqrt()
    }

    pub fn m_inner(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(y).zip(&self.mass).map(|((a, b), w)| a * b * w).sum()
    }

    fn orthogonalize(&self, x: &mut [f64], previous: &[Vec<f64>]) {
        for _ in 0..2 {
            for v in previous {
                let c = self.m_inner(x, v);
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi -= c * vi;
                }
            }
        }
    }

    fn normalize(&self, x: &mut [f64]) -> Result<()> {
        let norm = self.m_inner(x, x).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        for xi in x.iter_mut() {
            *xi /= norm;
        }
        Ok(())
    }
}

/// Solves a symmetric tridiagonal system with Gaussian elimination and
/// partial pivoting (the factor gains one superdiagonal).
pub fn solve_tridiagonal(diag: &[f64], off: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    // rows are stored as (sub, main, sup, sup2) relative to the pivot column
    let mut main = diag.to_vec();
    let mut sup: Vec<f64> = (0..n).map(|i| if i + 1 < n { off[i] } else { 0.0 }).collect();
    let mut sub: Vec<f64> = (0..n).map(|i| if i > 0 { off[i - 1] } else { 0.0 }).collect();
    let mut sup2 = vec![0.0; n];
    let mut b = rhs.to_vec();
    let tiny = f64::EPSILON * diag.iter().fold(0.0_f64, |m, d| m.max(d.abs())).max(1e-300);
    for i in 0..n.saturating_sub(1) {
        // candidate rows: i (main[i], sup[i], sup2[i]) and i+1 (sub[i+1], main[i+1], sup[i+1])
        if sub[i + 1].abs() > main[i].abs() {
            let (a0, a1, a2, ab) = (main[i], sup[i], sup2[i], b[i]);
            main[i] = sub[i + 1];
            sup[i] = main[i + 1];
            sup2[i] = sup[i + 1];
            b[i] = b[i + 1];
            sub[i + 1] = a0;
            main[i + 1] = a1;
            sup[i + 1] = a2;
            b[i + 1] = ab;
        }
        if main[i] == 0.0 {
            main[i] = tiny;
        }
        let factor = sub[i + 1] / main[i];
        main[i + 1] -= factor * sup[i];
        sup[i + 1] -= factor * sup2[i];
        b[i + 1] -= factor * b[i];
        sub[i + 1] = 0.0;
    }
    if main[n - 1] == 0.0 {
        main[n - 1] = tiny;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s -= sup[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= sup2[i] * x[i + 2];
        }
        x[i] = s / main[i];
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Convergence {
            iterations: 0,
            residual: f64::INFINITY,
        });
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::solve_generalized;
    use crate::Matrix;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn laplacian(n: usize, l: f64) -> TridiagPencil {
        let h = l / (n + 1) as f64;
        TridiagPencil::new(vec![2.0 / h; n], vec![-1.0 / h; n - 1], vec![h; n]).unwrap()
    }

    #[test]
    fn dirichlet_laplacian_eigenvalues() {
        let n = 200;
        let p = laplacian(n, PI);
        let h = PI / (n + 1) as f64;
        for m in 1..=5 {
            let exact_discrete = (2.0 - 2.0 * (m as f64 * h).cos()) / (h * h);
            assert_abs_diff_eq!(p.eigenvalue(m - 1).unwrap(), exact_discrete, epsilon = 1e-10);
            assert!((exact_discrete - (m * m) as f64).abs() < 1e-3 * (m * m) as f64);
        }
    }

    #[test]
    fn sturm_count_brackets() {
        let p = laplacian(50, PI);
        assert_eq!(p.sturm_count(0.0), 0);
        assert_eq!(p.sturm_count(1.5), 1);
        assert_eq!(p.sturm_count(4.5), 2);
        let (_, hi) = p.spectral_bounds();
        assert_eq!(p.sturm_count(hi), 50);
    }

    #[test]
    fn matches_dense_solver_on_random_pencil() {
        let n = 12;
        let diag: Vec<f64> = (0..n).map(|i| 3.0 + (i as f64 * 0.7).sin()).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| -0.5 - 0.3 * (i as f64 * 1.3).cos()).collect();
        let mass: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * (i as f64 * 0.4).cos().abs()).collect();
        let p = TridiagPencil::new(diag.clone(), off.clone(), mass.clone()).unwrap();
        let a = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                diag[i]
            } else if i + 1 == j {
                off[i]
            } else if j + 1 == i {
                off[j]
            } else {
                0.0
            }
        });
        let b = Matrix::from_fn(n, n, |i, j| if i == j { mass[i] } else { 0.0 });
        let (dense, _) = solve_generalized(&a, &b).unwrap();
        let pairs = p.smallest(n).unwrap();
        for (i, (lam, v)) in pairs.iter().enumerate() {
            assert_abs_diff_eq!(*lam, dense[i], epsilon = 1e-11);
            assert!(p.residual(*lam, v) < 1e-9);
            for (_, w) in &pairs[..i] {
                assert!(p.m_inner(v, w).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn pivoting_solver_handles_small_pivots() {
        let diag = vec![1e-14, 2.0, 3.0, 1.0];
        let off = vec![1.0, 0.5, -1.0];
        let x_true = vec![1.0, -2.0, 0.5, 3.0];
        let mut rhs = vec![0.0; 4];
        for i in 0..4 {
            rhs[i] = diag[i] * x_true[i];
            if i > 0 {
                rhs[i] += off[i - 1] * x_true[i - 1];
            }
            if i < 3 {
                rhs[i] += off[i] * x_true[i + 1];
            }
        }
        let x = solve_tridiagonal(&diag, &off, &rhs).unwrap();
        for (a, b) in x.iter().zip(&x_true) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_bad_mass() {
        assert!(TridiagPencil::new(vec![1.0, 1.0], vec![0.0], vec![1.0, 0.0]).is_err());
        assert!(TridiagPencil::new(vec![1.0, 1.0], vec![], vec![1.0, 1.0]).is_err());
    }
}
