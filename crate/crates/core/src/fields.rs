//! Tangent vector fields on `S^n(1/k)` given as tangential projections of
//! ambient polynomial maps, with exact covariant calculus.
//!
//! A field is stored as a polynomial map `P: R^{n+1} → R^{n+1}` and evaluated as
//! `X(p) = P(p) − k²⟨P(p),p⟩p`. Its extension `X̃(x) = P(x) − k²⟨P(x),x⟩x` is a
//! polynomial on all of `R^{n+1}`, so the Gauss formula gives
//!
//! * `∇_u X = T(DX̃ u)` with `T = I − k² p pᵀ`,
//! * `(∇²X)(u,u) = T(D²X̃[u,u]) − k² u ⟨p, DX̃ u⟩ − k²|u|² T(DX̃ p)`,
//!
//! and `div∇X` is the trace of the second over an orthonormal frame. Every
//! derivative is a monomial derivative, so the only numerical error anywhere
//! downstream is quadrature.

use serde::{Deserialize, Serialize};

use crate::geometry::{SphereModel, TangentVector};
use crate::poly::{monomials_up_to, unit_exps, Exponents, Poly};
use crate::quadrature::QuadratureRule;
use crate::{rng, Error, Matrix, Result, Vector};

/// Degree cap for ambient polynomial fields.
pub const MAX_DEGREE: usize = 6;

const SKEW_TOL: f64 = 1e-12;
const TANGENCY_TOL: f64 = 1e-10;
const MIN_MASS: f64 = 1e-14;

/// Anything that can be evaluated as a tangent field on a sphere.
pub trait VectorField: Sync {
    fn ambient_dim(&self) -> usize;
    fn eval(&self, p: &Vector) -> Result<Vector>;
}

/// Imaginary quaternion unit generating a left-invariant field on `S³`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HopfAxis {
    I,
    J,
    K,
}

impl HopfAxis {
    pub const ALL: [HopfAxis; 3] = [HopfAxis::I, HopfAxis::J, HopfAxis::K];

    /// Matrix of `p ↦ e·p` on `R⁴ = H`, coordinates `(1, i, j, k)`.
    pub fn left_multiplication(self) -> Matrix {
        let rows: [[f64; 4]; 4] = match self {
            HopfAxis::I => [
                [0.0, -1.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, -1.0],
                [0.0, 0.0, 1.0, 0.0],
            ],
            HopfAxis::J => [
                [0.0, 0.0, -1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [1.0, 0.0, 0.0, 0.0],
                [0.0, -1.0, 0.0, 0.0],
            ],
            HopfAxis::K => [
                [0.0, 0.0, 0.0, -1.0],
                [0.0, 0.0, -1.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
            ],
        };
        Matrix::from_fn(4, 4, |i, j| rows[i][j])
    }
}

/// Pointwise first- and second-order data of a field at one point.
#[derive(Clone, Debug)]
pub struct FieldJet {
    /// `X(p)`.
    pub value: Vector,
    /// `∇_{E_i} X` for the frame used.
    pub cov: Vec<Vector>,
    /// `div∇X(p)`, when requested.
    pub rough_lap: Option<Vector>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmbientPolyField {
    model: SphereModel,
    comps: Vec<Poly>,
}

impl AmbientPolyField {
    pub fn new(model: SphereModel, comps: Vec<Poly>) -> Result<Self> {
        let m = model.ambient_dim();
        if comps.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: comps.len(),
            });
        }
        if let Some(bad) = comps.iter().find(|c| c.nvars() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: bad.nvars(),
            });
        }
        let field = AmbientPolyField { model, comps };
        if field.degree() > MAX_DEGREE {
            return Err(Error::invalid(
                "degree",
                format!("degree {} exceeds cap {MAX_DEGREE}", field.degree()),
            ));
        }
        Ok(field)
    }

    pub fn zero(model: SphereModel) -> Self {
        let m = model.ambient_dim();
        AmbientPolyField {
            model,
            comps: vec![Poly::zero(m); m],
        }
    }

    /// `V_w(p) = w − k²⟨w,p⟩p`.
    pub fn projection(model: SphereModel, w: &Vector) -> Result<Self> {
        let m = model.ambient_dim();
        if w.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: w.len(),
            });
        }
        Self::new(model, w.iter().map(|&c| Poly::constant(m, c)).collect())
    }

    /// `X(p) = A p` for skew-symmetric `A`.
    pub fn killing(model: SphereModel, a: &Matrix) -> Result<Self> {
        let m = model.ambient_dim();
        if a.nrows() != m || a.ncols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: a.nrows(),
            });
        }
        let skew_defect = (a + a.transpose()).abs().max();
        if skew_defect > SKEW_TOL {
            return Err(Error::invalid("A", format!("not skew-symmetric (defect {skew_defect:e})")));
        }
        Ok(Self::linear(model, a))
    }

    /// Rotation generator in the coordinate plane `(i, j)`: `e_j e_iᵀ − e_i e_jᵀ`.
    pub fn plane_rotation(model: SphereModel, i: usize, j: usize) -> Result<Self> {
        let m = model.ambient_dim();
        if i >= m || j >= m || i == j {
            return Err(Error::invalid("plane", format!("bad coordinate plane ({i}, {j})")));
        }
        let mut a = Matrix::zeros(m, m);
        a[(j, i)] = 1.0;
        a[(i, j)] = -1.0;
        Self::killing(model, &a)
    }

    /// Left-invariant field `p ↦ e·p` on `S³`.
    pub fn hopf(model: SphereModel, axis: HopfAxis) -> Result<Self> {
        if model.n() != 3 {
            return Err(Error::invalid("n", "Hopf fields need n = 3"));
        }
        Self::killing(model, &axis.left_multiplication())
    }

    /// Tangential part of the ambient field `e_out · x^exps`.
    pub fn monomial(model: SphereModel, out: usize, exps: Exponents) -> Result<Self> {
        let m = model.ambient_dim();
        if out >= m {
            return Err(Error::invalid("out_coord", format!("{out} >= {m}")));
        }
        let mut comps = vec![Poly::zero(m); m];
        comps[out] = Poly::monomial(exps, 1.0);
        Self::new(model, comps)
    }

    /// Standard-normal coefficients on every monomial of degree `≤ degree`.
    pub fn random(model: SphereModel, degree: usize, seed: u64) -> Result<Self> {
        let m = model.ambient_dim();
        let mut g = rng::seeded(seed);
        let monos = monomials_up_to(m, degree);
        let comps = (0..m)
            .map(|_| {
                let coeffs = rng::gaussian_vector(monos.len(), &mut g);
                let mut p = Poly::zero(m);
                for (e, c) in monos.iter().zip(coeffs.iter()) {
                    p.add_term(e.clone(), *c);
                }
                p
            })
            .collect();
        Self::new(model, comps)
    }

    fn linear(model: SphereModel, a: &Matrix) -> Self {
        let m = model.ambient_dim();
        let comps = (0..m)
            .map(|r| {
                let mut p = Poly::zero(m);
                for c in 0..m {
                    p.add_term(unit_exps(m, c), a[(r, c)]);
                }
                p
            })
            .collect();
        AmbientPolyField { model, comps }
    }

    pub fn model(&self) -> &SphereModel {
        &self.model
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn degree(&self) -> usize {
        self.comps.iter().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &AmbientPolyField) -> Result<Self> {
        if self.model != other.model {
            return Err(Error::invalid("model", "fields live on different spheres"));
        }
        Ok(AmbientPolyField {
            model: self.model,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        AmbientPolyField {
            model: self.model,
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
        }
    }

    /// `Σ c_i X_i` over fields on the same sphere.
    pub fn combination(model: SphereModel, fields: &[&AmbientPolyField], coeffs: &[f64]) -> Result<Self> {
        let mut out = AmbientPolyField::zero(model);
        for (f, &c) in fields.iter().zip(coeffs) {
            if c != 0.0 {
                out = out.add(&f.scale(c))?;
            }
        }
        Ok(out)
    }

    /// Pullback by an orthogonal map: `x ↦ gᵀ P(g x)`, which represents
    /// `dg⁻¹ X(g p)`.
    pub fn pullback(&self, g: &Matrix) -> Self {
        let m = self.model.ambient_dim();
        let moved: Vec<Poly> = self.comps.iter().map(|c| c.substitute_linear(g)).collect();
        let comps = (0..m)
            .map(|a| {
                let mut out = Poly::zero(m);
                for (b, poly) in moved.iter().enumerate() {
                    let coeff = g[(b, a)];
                    if coeff != 0.0 {
                        out = out.add(&poly.scale(coeff));
                    }
                }
                out
            })
            .collect();
        AmbientPolyField {
            model: self.model,
            comps,
        }
    }

    pub fn eval(&self, p: &Vector) -> Result<TangentVector> {
        self.model.check_point(p)?;
        Ok(TangentVector::unchecked(p.clone(), self.value_unchecked(p)))
    }

    pub(crate) fn value_unchecked(&self, p: &Vector) -> Vector {
        self.model.project_unchecked(p, &self.ambient_value(p))
    }

    /// `P(x)` before tangential projection; defined on all of `R^{n+1}`.
    pub fn ambient_value(&self, x: &Vector) -> Vector {
        Vector::from_iterator(x.len(), self.comps.iter().map(|c| c.eval(x.as_slice())))
    }

    /// `∇_u X` at `p`.
    pub fn covariant_derivative(&self, p: &Vector, u: &Vector) -> Result<TangentVector> {
        self.model.check_point(p)?;
        check_tangent(p, u)?;
        let (_, jac, _) = self.ambient_jets(p, false);
        Ok(TangentVector::unchecked(
            p.clone(),
            self.model.project_unchecked(p, &(&jac * u)),
        ))
    }

    /// `div∇X` at `p` (the rough Laplacian with its geometric sign, so that
    /// eigenfields satisfy `−div∇X = λX`).
    pub fn rough_laplacian(&self, p: &Vector) -> Result<TangentVector> {
        self.model.check_point(p)?;
        let frame = self.model.frame_unchecked(p);
        self.rough_laplacian_with_frame(p, &frame)
    }

    pub fn rough_laplacian_with_frame(&self, p: &Vector, frame: &[Vector]) -> Result<TangentVector> {
        self.model.check_point(p)?;
        check_frame(&self.model, p, frame)?;
        let jet = self.jet_unchecked(p, frame, true);
        Ok(TangentVector::unchecked(p.clone(), jet.rough_lap.unwrap()))
    }

    pub fn divergence(&self, p: &Vector) -> Result<f64> {
        self.model.check_point(p)?;
        let frame = self.model.frame_unchecked(p);
        self.divergence_with_frame(p, &frame)
    }

    pub fn divergence_with_frame(&self, p: &Vector, frame: &[Vector]) -> Result<f64> {
        self.model.check_point(p)?;
        check_frame(&self.model, p, frame)?;
        let jet = self.jet_unchecked(p, frame, false);
        Ok(divergence_of(&jet, frame))
    }

    /// `|Kill(X)|²` with `Kill(X)(U,V) = (⟨∇_U X,V⟩ + ⟨∇_V X,U⟩)/2`.
    pub fn kill_tensor_norm_sq(&self, p: &Vector) -> Result<f64> {
        self.model.check_point(p)?;
        let frame = self.model.frame_unchecked(p);
        self.kill_tensor_norm_sq_with_frame(p, &frame)
    }

    pub fn kill_tensor_norm_sq_with_frame(&self, p: &Vector, frame: &[Vector]) -> Result<f64> {
        self.model.check_point(p)?;
        check_frame(&self.model, p, frame)?;
        let jet = self.jet_unchecked(p, frame, false);
        Ok(kill_norm_sq_of(&jet, frame))
    }

    /// Value, frame derivatives and (optionally) `div∇X` at a point already
    /// known to lie on the sphere.
    pub fn jet_unchecked(&self, p: &Vector, frame: &[Vector], second: bool) -> FieldJet {
        let k2 = self.model.k() * self.model.k();
        let (value, jac, hess) = self.ambient_jets(p, second);
        let project = |w: &Vector| self.model.project_unchecked(p, w);
        let cov: Vec<Vector> = frame.iter().map(|e| project(&(&jac * e))).collect();
        let rough_lap = hess.map(|hess| {
            let m = p.len();
            let jp = project(&(&jac * p));
            let mut lap = Vector::zeros(m);
            for e in frame {
                let second_dir = Vector::from_iterator(m, hess.iter().map(|h| e.dot(&(h * e))));
                lap += project(&second_dir);
                let je = &jac * e;
                lap.axpy(-k2 * p.dot(&je), e, 1.0);
                lap.axpy(-k2, &jp, 1.0);
            }
            lap
        });
        FieldJet {
            value,
            cov,
            rough_lap,
        }
    }

    /// `X̃(p)`, `DX̃(p)` and, if asked, the Hessians `D²X̃_a(p)`.
    fn ambient_jets(&self, p: &Vector, second: bool) -> (Vector, Matrix, Option<Vec<Matrix>>) {
        let m = p.len();
        let k2 = self.model.k() * self.model.k();
        let jets: Vec<_> = self.comps.iter().map(|c| c.jet(p.as_slice())).collect();

        let s: f64 = (0..m).map(|b| jets[b].value * p[b]).sum();
        let ds: Vec<f64> = (0..m)
            .map(|i| (0..m).map(|b| jets[b].grad[i] * p[b]).sum::<f64>() + jets[i].value)
            .collect();

        let value = Vector::from_fn(m, |a, _| jets[a].value - k2 * s * p[a]);
        let jac = Matrix::from_fn(m, m, |a, i| {
            let delta = if a == i { s } else { 0.0 };
            jets[a].grad[i] - k2 * (ds[i] * p[a] + delta)
        });
        if !second {
            return (value, jac, None);
        }
        let d2s = Matrix::from_fn(m, m, |i, j| {
            (0..m).map(|b| jets[b].hess[i * m + j] * p[b]).sum::<f64>()
                + jets[i].grad[j]
                + jets[j].grad[i]
        });
        let hess = (0..m)
            .map(|a| {
                Matrix::from_fn(m, m, |i, j| {
                    let mut v = jets[a].hess[i * m + j] - k2 * d2s[(i, j)] * p[a];
                    if a == j {
                        v -= k2 * ds[i];
                    }
                    if a == i {
                        v -= k2 * ds[j];
                    }
                    v
                })
            })
            .collect();
        (value, jac, Some(hess))
    }
}

impl VectorField for AmbientPolyField {
    fn ambient_dim(&self) -> usize {
        self.model.ambient_dim()
    }

    fn eval(&self, p: &Vector) -> Result<Vector> {
        self.model.check_point(p)?;
        Ok(self.value_unchecked(p))
    }
}

fn check_tangent(p: &Vector, u: &Vector) -> Result<()> {
    if u.len() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: u.len(),
        });
    }
    if u.dot(p).abs() > TANGENCY_TOL * u.norm() * p.norm() {
        return Err(Error::Domain(format!(
            "direction is not tangent: <u,p> = {:e}",
            u.dot(p)
        )));
    }
    Ok(())
}

fn check_frame(model: &SphereModel, p: &Vector, frame: &[Vector]) -> Result<()> {
    if frame.len() != model.n() {
        return Err(Error::DimensionMismatch {
            expected: model.n(),
            got: frame.len(),
        });
    }
    for (i, a) in frame.iter().enumerate() {
        check_tangent(p, a)?;
        for (j, b) in frame.iter().enumerate().skip(i) {
            let expect = if i == j { 1.0 } else { 0.0 };
            if (a.dot(b) - expect).abs() > TANGENCY_TOL {
                return Err(Error::Domain("frame is not orthonormal".into()));
            }
        }
    }
    Ok(())
}

pub(crate) fn divergence_of(jet: &FieldJet, frame: &[Vector]) -> f64 {
    jet.cov.iter().zip(frame).map(|(c, e)| c.dot(e)).sum()
}

pub(crate) fn kill_norm_sq_of(jet: &FieldJet, frame: &[Vector]) -> f64 {
    let n = frame.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let sym = 0.5 * (jet.cov[i].dot(&frame[j]) + jet.cov[j].dot(&frame[i]));
            total += sym * sym;
        }
    }
    total
}

fn cov_norm_sq(jet: &FieldJet) -> f64 {
    jet.cov.iter().map(|c| c.norm_squared()).sum()
}

fn check_rule(x: &AmbientPolyField, rule: &QuadratureRule) -> Result<()> {
    if x.model() != rule.model() {
        return Err(Error::invalid("rule", "quadrature rule is for a different sphere"));
    }
    Ok(())
}

/// `F(X) = ∫‖∇X‖² / ∫‖X‖²`.
pub fn energy(x: &AmbientPolyField, rule: &QuadratureRule) -> Result<f64> {
    check_rule(x, rule)?;
    let model = *x.model();
    let mass = rule.integrate_scalar(|p| Ok(x.value_unchecked(p).norm_squared()))?;
    if mass <= MIN_MASS {
        return Err(Error::ZeroNorm);
    }
    let stiffness = rule.integrate_scalar(|p| {
        let frame = model.frame_unchecked(p);
        Ok(cov_norm_sq(&x.jet_unchecked(p, &frame, false)))
    })?;
    Ok(stiffness / mass)
}

/// `∫‖∇X‖² − ∫(Ric(X,X) + 2|Kill X|² − (div X)²)` with the constant-curvature
/// Ricci tensor `(n−1)k² g`. Zero for every smooth field.
pub fn bochner_yano_residual(x: &AmbientPolyField, rule: &QuadratureRule) -> Result<f64> {
    check_rule(x, rule)?;
    let model = *x.model();
    let ric = (model.n() - 1) as f64 * model.k() * model.k();
    rule.integrate_scalar(|p| {
        let frame = model.frame_unchecked(p);
        let jet = x.jet_unchecked(p, &frame, false);
        let div = divergence_of(&jet, &frame);
        let rhs = ric * jet.value.norm_squared() + 2.0 * kill_norm_sq_of(&jet, &frame) - div * div;
        Ok(cov_norm_sq(&jet) - rhs)
    })
}
