//! Dense symmetric and symmetric-definite eigenproblems: Cholesky factors,
//! greedy pivoted Cholesky for rank revealing, and cyclic Jacobi rotations.

use crate::{Error, Matrix, Result, Vector};

const JACOBI_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Lower-triangular `L` with `B = L Lᵀ`.
pub fn cholesky(b: &Matrix) -> Result<Matrix> {
    let n = b.nrows();
    if b.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.ncols(),
        });
    }
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = b[(j, j)];
        for c in 0..j {
            d -= l[(j, c)] * l[(j, c)];
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot: j, value: d });
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in (j + 1)..n {
            let mut s = b[(i, j)];
            for c in 0..j {
                s -= l[(i, c)] * l[(j, c)];
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Greedy diagonal-pivoted Cholesky. Returns the indices of a maximal subset
/// whose Schur-complement pivots exceed `rel_tol · max_i B_ii`, in ascending
/// index order.
pub fn pivoted_cholesky(b: &Matrix, rel_tol: f64) -> Vec<usize> {
    let n = b.nrows();
    let scale = (0..n).map(|i| b[(i, i)]).fold(0.0_f64, f64::max);
    if scale <= 0.0 {
        return Vec::new();
    }
    let mut residual: Vec<f64> = (0..n).map(|i| b[(i, i)]).collect();
    // columns of the partial factor, one per accepted pivot
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut active = vec![true; n];
    loop {
        let best = (0..n)
            .filter(|&i| active[i])
            .max_by(|&a, &b| residual[a].total_cmp(&residual[b]).then(b.cmp(&a)));
        let Some(piv) = best else { break };
        if residual[piv] <= rel_tol * scale {
            break;
        }
        let root = residual[piv].sqrt();
        let col: Vec<f64> = (0..n)
            .map(|i| {
                let mut s = b[(i, piv)];
                for c in &cols {
                    s -= c[i] * c[piv];
                }
                s / root
            })
            .collect();
        for i in 0..n {
            residual[i] -= col[i] * col[i];
        }
        active[piv] = false;
        chosen.push(piv);
        cols.push(col);
    }
    chosen.sort_unstable();
    chosen
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues ascending and the matching orthonormal eigenvectors as
/// columns.
pub fn symmetric_eigen(s: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = s.nrows();
    if s.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: s.ncols(),
        });
    }
    let mut a = (s + s.transpose()) * 0.5;
    let mut v = Matrix::identity(n, n);
    let target = JACOBI_TOL * a.norm().max(1.0);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) < target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                rotate(&mut a, &mut v, p, q, c, sn);
            }
        }
    }
    if !converged && off_norm(&a) >= target {
        return Err(Error::Convergence {
            iterations: MAX_SWEEPS,
            residual: off_norm(&a),
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

fn off_norm(a: &Matrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Applies the rotation zeroing `a[p][q]`: `A ← JᵀAJ`, `V ← VJ`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.nrows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Solves `A x = λ B x` for symmetric `A` and symmetric positive definite
/// `B`. Eigenvalues ascending; eigenvectors are the columns of the returned
/// matrix, normalized so that `Xᵀ B X = I`.
pub fn solve_generalized(a: &Matrix, b: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.nrows(),
        });
    }
    let l = cholesky(b)?;
    // C = L⁻¹ A L⁻ᵀ via two triangular solves
    let y = forward_solve(&l, a);
    let c = forward_solve(&l, &y.transpose());
    let (values, w) = symmetric_eigen(&c)?;
    let x = backward_solve_transposed(&l, &w);
    Ok((values, x))
}

/// `L⁻¹ M` for lower-triangular `L`.
fn forward_solve(l: &Matrix, m: &Matrix) -> Matrix {
    let n = l.nrows();
    let mut out = m.clone();
    for col in 0..m.ncols() {
        for i in 0..n {
            let mut s = out[(i, col)];
            for j in 0..i {
                s -= l[(i, j)] * out[(j, col)];
            }
            out[(i, col)] = s / l[(i, i)];
        }
    }
    out
}

/// `L⁻ᵀ M` for lower-triangular `L`.
fn backward_solve_transposed(l: &Matrix, m: &Matrix) -> Matrix {
    let n = l.nrows();
    let mut out = m.clone();
    for col in 0..m.ncols() {
        for i in (0..n).rev() {
            let mut s = out[(i, col)];
            for j in (i + 1)..n {
                s -= l[(j, i)] * out[(j, col)];
            }
            out[(i, col)] = s / l[(i, i)];
        }
    }
    out
}

/// `xᵀ B y`.
pub fn b_inner(b: &Matrix, x: &Vector, y: &Vector) -> f64 {
    x.dot(&(b * y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use approx::assert_abs_diff_eq;

    fn random_spd(n: usize, seed: u64, shift: f64) -> Matrix {
        let g = rng::gaussian_matrix(n, n, &mut rng::seeded(seed));
        &g * g.transpose() + Matrix::identity(n, n) * shift
    }

    fn random_sym(n: usize, seed: u64) -> Matrix {
        let g = rng::gaussian_matrix(n, n, &mut rng::seeded(seed));
        (&g + g.transpose()) * 0.5
    }

    #[test]
    fn small_examples() {
        let (vals, _) = solve_generalized(
            &Matrix::from_diagonal(&Vector::from_vec(vec![1.0, 4.0])),
            &Matrix::identity(2, 2),
        )
        .unwrap();
        assert_abs_diff_eq!(vals[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(vals[1], 4.0, epsilon = 1e-14);
        let a = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (vals, _) = solve_generalized(&a, &Matrix::identity(2, 2)).unwrap();
        assert_abs_diff_eq!(vals[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(vals[1], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn cholesky_reconstructs_and_rejects_indefinite() {
        let b = random_spd(7, 1, 0.1);
        let l = cholesky(&b).unwrap();
        assert!((&l * l.transpose() - &b).amax() < 1e-12);
        let bad = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(cholesky(&bad), Err(Error::NotPositiveDefinite { pivot: 1, .. })));
    }

    #[test]
    fn generalized_eigenpairs_are_b_orthonormal() {
        let a = random_sym(9, 2);
        let b = random_spd(9, 3, 0.5);
        let (vals, x) = solve_generalized(&a, &b).unwrap();
        assert!((x.transpose() * &b * &x - Matrix::identity(9, 9)).amax() < 1e-10);
        for (i, lam) in vals.iter().enumerate() {
            let xi = x.column(i).into_owned();
            assert!((&a * &xi - &b * &xi * *lam).amax() < 1e-10);
        }
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    /// Roots of `det(A − λB)` found by sign-change scanning and bisection,
    /// independent of the Jacobi path.
    fn char_poly_roots(a: &Matrix, b: &Matrix, lo: f64, hi: f64) -> Vec<f64> {
        let det = |lam: f64| (a - b * lam).determinant();
        let steps = 200_000;
        let mut roots = Vec::new();
        let mut x0 = lo;
        let mut f0 = det(x0);
        for s in 1..=steps {
            let x1 = lo + (hi - lo) * s as f64 / steps as f64;
            let f1 = det(x1);
            if f0 == 0.0 {
                roots.push(x0);
            } else if f0.signum() != f1.signum() && f1 != 0.0 {
                let (mut l, mut r, mut fl) = (x0, x1, f0);
                for _ in 0..200 {
                    let mid = 0.5 * (l + r);
                    let fm = det(mid);
                    if fm.signum() == fl.signum() {
                        l = mid;
                        fl = fm;
                    } else {
                        r = mid;
                    }
                }
                roots.push(0.5 * (l + r));
            }
            x0 = x1;
            f0 = f1;
        }
        roots
    }

    #[test]
    fn matches_characteristic_polynomial_oracle() {
        let a = random_sym(6, 4);
        let b = random_spd(6, 5, 1.0);
        let (vals, _) = solve_generalized(&a, &b).unwrap();
        let roots = char_poly_roots(&a, &b, vals[0] - 1.0, vals[5] + 1.0);
        assert_eq!(roots.len(), 6);
        for (v, r) in vals.iter().zip(&roots) {
            assert_abs_diff_eq!(*v, *r, epsilon = 1e-9);
        }
    }

    #[test]
    fn jacobi_handles_degenerate_spectra() {
        let q = rng::haar_orthogonal(6, &mut rng::seeded(6));
        let d = Matrix::from_diagonal(&Vector::from_vec(vec![1.0, 1.0, 1.0, 2.0, 2.0, 5.0]));
        let s = &q * d * q.transpose();
        let (vals, v) = symmetric_eigen(&s).unwrap();
        for (got, want) in vals.iter().zip([1.0, 1.0, 1.0, 2.0, 2.0, 5.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        assert!((v.transpose() * &v - Matrix::identity(6, 6)).amax() < 1e-12);
    }

    #[test]
    fn pivoted_cholesky_finds_rank() {
        // columns 0..4 random, column 4 = col0 + col1, column 5 = 2·col2
        let g = rng::gaussian_matrix(10, 4, &mut rng::seeded(7));
        let mut f = Matrix::zeros(10, 6);
        for c in 0..4 {
            f.set_column(c, &g.column(c));
        }
        f.set_column(4, &(g.column(0) + g.column(1)));
        f.set_column(5, &(g.column(2) * 2.0));
        let b = f.transpose() * &f;
        let kept = pivoted_cholesky(&b, 1e-10);
        assert_eq!(kept.len(), 4);
        let sub = Matrix::from_fn(4, 4, |i, j| b[(kept[i], kept[j])]);
        assert!(cholesky(&sub).is_ok());
        assert!(pivoted_cholesky(&Matrix::zeros(3, 3), 1e-10).is_empty());
    }
}
