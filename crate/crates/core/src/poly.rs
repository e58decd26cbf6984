//! Sparse multivariate polynomials with exact first and second derivatives.

use std::collections::BTreeMap;

use crate::Matrix;

/// Exponent vector of a monomial, one entry per variable.
pub type Exponents = Vec<u8>;

/// A real polynomial in a fixed number of variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, f64>,
}

/// Value, gradient and Hessian of a polynomial at a point.
#[derive(Clone, Debug)]
pub struct PolyJet {
    pub value: f64,
    pub grad: Vec<f64>,
    /// Row-major `nvars × nvars`.
    pub hess: Vec<f64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, 1.0)
    }

    pub fn monomial(exps: Exponents, coeff: f64) -> Self {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, coeff);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, f64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&a| a as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, exps: Exponents, coeff: f64) {
        assert_eq!(exps.len(), self.nvars, "exponent length");
        if coeff == 0.0 {
            return;
        }
        let entry = self.terms.entry(exps).or_insert(0.0);
        *entry += coeff;
        if *entry == 0.0 {
            self.terms.retain(|_, c| *c != 0.0);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: f64) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if s != 0.0 {
            for (e, c) in self.terms() {
                out.add_term(e.clone(), c * s);
            }
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Returns the polynomial `x ↦ self(M x)`.
    pub fn substitute_linear(&self, m: &Matrix) -> Poly {
        assert_eq!(m.nrows(), self.nvars);
        assert_eq!(m.ncols(), self.nvars);
        let linear: Vec<Poly> = (0..self.nvars)
            .map(|i| {
                let mut row = Poly::zero(self.nvars);
                for j in 0..self.nvars {
                    row.add_term(unit_exps(self.nvars, j), m[(i, j)]);
                }
                row
            })
            .collect();

        // powers[i][a] = (row i)^a, built lazily up to the needed degree
        let max_deg = self.degree();
        let mut powers: Vec<Vec<Poly>> = linear
            .iter()
            .map(|l| vec![Poly::constant(self.nvars, 1.0), l.clone()])
            .collect();
        for (i, row) in powers.iter_mut().enumerate() {
            while row.len() <= max_deg {
                let next = row.last().unwrap().mul(&linear[i]);
                row.push(next);
            }
        }

        let mut out = Poly::zero(self.nvars);
        for (e, c) in self.terms() {
            let mut term = Poly::constant(self.nvars, c);
            for (i, &a) in e.iter().enumerate() {
                if a > 0 {
                    term = term.mul(&powers[i][a as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, &c)| {
                c * e
                    .iter()
                    .zip(x)
                    .map(|(&a, &xi)| xi.powi(a as i32))
                    .product::<f64>()
            })
            .sum()
    }

    /// Value, gradient and Hessian at `x`, all exact up to rounding.
    pub fn jet(&self, x: &[f64]) -> PolyJet {
        let m = self.nvars;
        let mut value = 0.0;
        let mut grad = vec![0.0; m];
        let mut hess = vec![0.0; m * m];
        // f0 = x^a, f1 = a x^(a-1), f2 = a(a-1) x^(a-2)
        let mut f0 = vec![0.0; m];
        let mut f1 = vec![0.0; m];
        let mut f2 = vec![0.0; m];
        for (e, &c) in &self.terms {
            for i in 0..m {
                let a = e[i] as i32;
                let xi = x[i];
                f0[i] = xi.powi(a);
                f1[i] = if a >= 1 { a as f64 * xi.powi(a - 1) } else { 0.0 };
                f2[i] = if a >= 2 {
                    (a * (a - 1)) as f64 * xi.powi(a - 2)
                } else {
                    0.0
                };
            }
            value += c * f0.iter().product::<f64>();
            for i in 0..m {
                if f1[i] == 0.0 && f2[i] == 0.0 {
                    continue;
                }
                let others: f64 = (0..m).filter(|&j| j != i).map(|j| f0[j]).product();
                grad[i] += c * f1[i] * others;
                hess[i * m + i] += c * f2[i] * others;
                for j in (i + 1)..m {
                    if f1[i] == 0.0 || f1[j] == 0.0 {
                        continue;
                    }
                    let rest: f64 = (0..m)
                        .filter(|&l| l != i && l != j)
                        .map(|l| f0[l])
                        .product();
                    let v = c * f1[i] * f1[j] * rest;
                    hess[i * m + j] += v;
                    hess[j * m + i] += v;
                }
            }
        }
        PolyJet { value, grad, hess }
    }
}

pub(crate) fn unit_exps(nvars: usize, i: usize) -> Exponents {
    let mut e = vec![0; nvars];
    e[i] = 1;
    e
}

/// All exponent vectors in `nvars` variables with total degree `≤ max_degree`,
/// ordered by total degree and then lexicographically.
pub fn monomials_up_to(nvars: usize, max_degree: usize) -> Vec<Exponents> {
    let mut out = Vec::new();
    for deg in 0..=max_degree {
        let mut cur = vec![0u8; nvars];
        compositions(nvars, deg, 0, &mut cur, &mut out);
    }
    out
}

fn compositions(nvars: usize, remaining: usize, idx: usize, cur: &mut Exponents, out: &mut Vec<Exponents>) {
    if idx == nvars - 1 {
        cur[idx] = remaining as u8;
        out.push(cur.clone());
        return;
    }
    for a in (0..=remaining).rev() {
        cur[idx] = a as u8;
        compositions(nvars, remaining - a, idx + 1, cur, out);
    }
    cur[idx] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sample() -> Poly {
        // 2 x^2 y - 3 y z + z^3 + 1
        let mut p = Poly::zero(3);
        p.add_term(vec![2, 1, 0], 2.0);
        p.add_term(vec![0, 1, 1], -3.0);
        p.add_term(vec![0, 0, 3], 1.0);
        p.add_term(vec![0, 0, 0], 1.0);
        p
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_up_to(3, 1).len(), 4);
        assert_eq!(monomials_up_to(3, 3).len(), 20);
        assert_eq!(monomials_up_to(4, 2).len(), 15);
    }

    #[test]
    fn jet_matches_central_differences() {
        let p = sample();
        let x = [0.3, -0.7, 0.5];
        let jet = p.jet(&x);
        assert_abs_diff_eq!(jet.value, p.eval(&x), epsilon = 1e-14);
        let h = 1e-5;
        for i in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let fd = (p.eval(&xp) - p.eval(&xm)) / (2.0 * h);
            assert_abs_diff_eq!(jet.grad[i], fd, epsilon = 1e-8);
            for j in 0..3 {
                let gp = p.jet(&xp).grad[j];
                let gm = p.jet(&xm).grad[j];
                assert_abs_diff_eq!(jet.hess[i * 3 + j], (gp - gm) / (2.0 * h), epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn substitution_composes() {
        let p = sample();
        let m = Matrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.2, 0.3, 1.0]);
        let q = p.substitute_linear(&m);
        let x = nalgebra::DVector::from_vec(vec![0.4, 0.1, -0.9]);
        let mx = &m * &x;
        assert_abs_diff_eq!(q.eval(x.as_slice()), p.eval(mx.as_slice()), epsilon = 1e-13);
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut p = Poly::var(2, 0);
        p.add_term(vec![1, 0], -1.0);
        assert!(p.is_zero());
        assert_eq!(p.degree(), 0);
    }
}
