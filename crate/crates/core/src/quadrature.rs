//! Integration on `S^n(1/k)`.
//!
//! Product rules are exact for polynomial integrands of ambient degree
//! `≤ 2·res − 1`:
//! * `n = 2`: Gauss–Legendre in `z = cos θ` times the trapezoid rule in the
//!   azimuth (`2·res` points);
//! * `n = 3`: Gauss–Chebyshev of the second kind in `cos ψ` (weight
//!   `sin²ψ dψ`) times the `n = 2` rule on the slice spheres.
//!
//! Other dimensions use Monte Carlo. All sums use a fixed pairwise order so
//! results are bitwise reproducible for a given rule regardless of the number
//! of worker threads.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fields::VectorField;
use crate::geometry::SphereModel;
use crate::{rng, Error, Result, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuadKind {
    Product { res: usize },
    MonteCarlo { count: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    model: SphereModel,
    nodes: Vec<Vector>,
    weights: Vec<f64>,
    kind: QuadKind,
}

impl QuadratureRule {
    pub fn model(&self) -> &SphereModel {
        &self.model
    }

    pub fn nodes(&self) -> &[Vector] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> QuadKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest ambient polynomial degree integrated exactly, if any.
    pub fn exactness_degree(&self) -> Option<usize> {
        match self.kind {
            QuadKind::Product { res } => Some(2 * res - 1),
            QuadKind::MonteCarlo { .. } => None,
        }
    }

    #[cfg(test)]
    pub(crate) fn from_parts(model: SphereModel, nodes: Vec<Vector>, weights: Vec<f64>, kind: QuadKind) -> Self {
        QuadratureRule {
            model,
            nodes,
            weights,
            kind,
        }
    }

    /// Builds the rule described by `kind` on `model`.
    pub fn from_kind(model: SphereModel, kind: QuadKind) -> Result<Self> {
        match kind {
            QuadKind::Product { res } => product_rule(model, res),
            QuadKind::MonteCarlo { count, seed } => monte_carlo_rule(model, count, seed),
        }
    }

    /// `∫ g dM` as the weighted node sum.
    pub fn integrate_scalar<G>(&self, g: G) -> Result<f64>
    where
        G: Fn(&Vector) -> Result<f64> + Sync,
    {
        let terms: Vec<f64> = self
            .nodes
            .par_iter()
            .zip(self.weights.par_iter())
            .enumerate()
            .map(|(i, (p, w))| {
                let v = g(p)?;
                if !v.is_finite() {
                    return Err(Error::NonFinite { node: i });
                }
                Ok(w * v)
            })
            .collect::<Result<_>>()?;
        Ok(tree_sum(&terms))
    }

    /// `∫ ⟨X, Y⟩ dM`.
    pub fn integrate_pairing(&self, x: &dyn VectorField, y: &dyn VectorField) -> Result<f64> {
        self.integrate_scalar(|p| Ok(x.eval(p)?.dot(&y.eval(p)?)))
    }

    /// `‖X‖_{L²}`.
    pub fn l2_norm(&self, x: &dyn VectorField) -> Result<f64> {
        Ok(self
            .integrate_scalar(|p| Ok(x.eval(p)?.norm_squared()))?
            .max(0.0)
            .sqrt())
    }
}

/// Deterministic product rule for `n ∈ {2, 3}`.
pub fn product_rule(model: SphereModel, res: usize) -> Result<QuadratureRule> {
    if res < 8 {
        return Err(Error::invalid("res", format!("need res >= 8, got {res}")));
    }
    let r = model.radius();
    let (unit_nodes, unit_weights) = match model.n() {
        2 => unit_s2_rule(res),
        3 => {
            let (s2_nodes, s2_weights) = unit_s2_rule(res);
            let (t, wt) = gauss_chebyshev_second(res);
            let mut nodes = Vec::with_capacity(res * s2_nodes.len());
            let mut weights = Vec::with_capacity(nodes.capacity());
            for (&ti, &wi) in t.iter().zip(&wt) {
                let rho = (1.0 - ti * ti).sqrt();
                for (y, &wy) in s2_nodes.iter().zip(&s2_weights) {
                    nodes.push(Vector::from_vec(vec![rho * y[0], rho * y[1], rho * y[2], ti]));
                    weights.push(wi * wy);
                }
            }
            (nodes, weights)
        }
        n => return Err(Error::UnsupportedDimension { n }),
    };
    let scale = r.powi(model.n() as i32);
    Ok(QuadratureRule {
        model,
        nodes: unit_nodes.into_iter().map(|p| p * r).collect(),
        weights: unit_weights.into_iter().map(|w| w * scale).collect(),
        kind: QuadKind::Product { res },
    })
}

fn unit_s2_rule(res: usize) -> (Vec<Vector>, Vec<f64>) {
    let (z, wz) = gauss_legendre(res);
    let m = 2 * res;
    let dphi = 2.0 * PI / m as f64;
    let mut nodes = Vec::with_capacity(res * m);
    let mut weights = Vec::with_capacity(res * m);
    for (&zi, &wi) in z.iter().zip(&wz) {
        let rho = (1.0 - zi * zi).sqrt();
        for j in 0..m {
            let (s, c) = (j as f64 * dphi).sin_cos();
            nodes.push(Vector::from_vec(vec![rho * c, rho * s, zi]));
            weights.push(wi * dphi);
        }
    }
    (nodes, weights)
}

/// Uniform Monte Carlo rule: normalized Gaussian vectors, equal weights.
pub fn monte_carlo_rule(model: SphereModel, count: usize, seed: u64) -> Result<QuadratureRule> {
    if count < 1000 {
        return Err(Error::invalid("count", format!("need count >= 1000, got {count}")));
    }
    let mut g = rng::seeded(seed);
    let dim = model.ambient_dim();
    let nodes: Vec<Vector> = (0..count)
        .map(|_| rng::sphere_point(dim, model.radius(), &mut g))
        .collect();
    let w = model.volume() / count as f64;
    Ok(QuadratureRule {
        model,
        nodes,
        weights: vec![w; count],
        kind: QuadKind::MonteCarlo { count, seed },
    })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; count];
    let mut w = vec![0.0; count];
    let nf = count as f64;
    for i in 0..count.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(count, z);
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(count, z);
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[count - 1 - i] = z;
        w[i] = wi;
        w[count - 1 - i] = wi;
    }
    if count % 2 == 1 {
        x[count / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Nodes and weights for `∫_{-1}^{1} √(1-t²) g(t) dt`.
pub fn gauss_chebyshev_second(count: usize) -> (Vec<f64>, Vec<f64>) {
    let h = PI / (count + 1) as f64;
    (1..=count)
        .rev()
        .map(|i| {
            let (s, c) = (i as f64 * h).sin_cos();
            (c, h * s * s)
        })
        .unzip()
}

/// Pairwise summation in a fixed order.
pub fn tree_sum(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    tree_sum(&values[..mid]) + tree_sum(&values[mid..])
}
