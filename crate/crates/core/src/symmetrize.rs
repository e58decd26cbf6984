//! Averaging of tangent fields over compact groups of isometries of a sphere,
//! and the identities that such averages satisfy.
//!
//! Every group acts linearly on the ambient space by orthogonal matrices, so
//! `dg_p = g` on tangent vectors and the symmetrization of `X` is
//! `X_G(p) = mean_g gᵀ X(g p)` with Haar measure normalized to total mass 1.

use rayon::prelude::*;
use serde::Serialize;

use crate::fields::{AmbientPolyField, VectorField};
use crate::geometry::SphereModel;
use crate::poly::{monomials_up_to, unit_exps, Poly};
use crate::quadrature::{tree_sum, QuadratureRule};
use crate::{rng, Error, Matrix, Result, Vector};

const ORTHO_TOL: f64 = 1e-10;
/// Tolerance for preconditions checked on exact (finite-sum) averages.
pub const EXACT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum GroupSpec {
    /// A finite group listed element by element (must contain the identity and
    /// be closed under products).
    Finite(Vec<Matrix>),
    /// `count` equally spaced rotations in the coordinate plane `(i, j)`.
    PlanarRotations { plane: (usize, usize), count: usize },
    /// Haar samples of the stabilizer of `v` in `O(n+1)`.
    IsotropyAt { v: Vector, count: usize, seed: u64 },
    /// Haar samples of the full orthogonal group `O(n+1)`.
    Haar { count: usize, seed: u64 },
}

impl GroupSpec {
    /// `{id, reflection negating coordinate `coord`}`.
    pub fn reflection(dim: usize, coord: usize) -> Result<Self> {
        if coord >= dim {
            return Err(Error::invalid("coord", format!("{coord} >= {dim}")));
        }
        let mut r = Matrix::identity(dim, dim);
        r[(coord, coord)] = -1.0;
        Ok(GroupSpec::Finite(vec![Matrix::identity(dim, dim), r]))
    }

    /// Finite and planar groups are averaged exactly.
    pub fn is_exact(&self) -> bool {
        matches!(self, GroupSpec::Finite(_) | GroupSpec::PlanarRotations { .. })
    }

    /// Number of elements in the (possibly sampled) average.
    pub fn len(&self) -> usize {
        match self {
            GroupSpec::Finite(g) => g.len(),
            GroupSpec::PlanarRotations { count, .. }
            | GroupSpec::IsotropyAt { count, .. }
            | GroupSpec::Haar { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Precondition tolerance for averages over this group: `EXACT_TOL` in
    /// exact modes, `5/√count` for sampled ones.
    pub fn tolerance(&self) -> f64 {
        if self.is_exact() {
            EXACT_TOL
        } else {
            5.0 / (self.len() as f64).sqrt()
        }
    }

    /// The matrices averaged over, validated for dimension `dim`.
    pub fn elements(&self, dim: usize) -> Result<Vec<Matrix>> {
        let elems = match self {
            GroupSpec::Finite(list) => {
                validate_finite(list, dim)?;
                list.clone()
            }
            GroupSpec::PlanarRotations { plane, count } => {
                let (i, j) = *plane;
                if i >= dim || j >= dim || i == j {
                    return Err(Error::invalid("plane", format!("bad plane ({i}, {j}) in dimension {dim}")));
                }
                if *count == 0 {
                    return Err(Error::invalid("count", "need at least one rotation"));
                }
                (0..*count)
                    .map(|t| plane_rotation(dim, i, j, 2.0 * std::f64::consts::PI * t as f64 / *count as f64))
                    .collect()
            }
            GroupSpec::IsotropyAt { v, count, seed } => {
                if v.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: v.len(),
                    });
                }
                if *count == 0 {
                    return Err(Error::invalid("count", "need at least one sample"));
                }
                isotropy_samples(v, *count, *seed)?
            }
            GroupSpec::Haar { count, seed } => {
                if *count == 0 {
                    return Err(Error::invalid("count", "need at least one sample"));
                }
                let mut g = rng::seeded(*seed);
                (0..*count).map(|_| rng::haar_orthogonal(dim, &mut g)).collect()
            }
        };
        Ok(elems)
    }
}

fn check_orthogonal(g: &Matrix, dim: usize) -> Result<()> {
    if g.nrows() != dim || g.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: g.nrows(),
        });
    }
    let defect = (g.transpose() * g - Matrix::identity(dim, dim)).amax();
    if defect > ORTHO_TOL {
        return Err(Error::invalid("group", format!("matrix not orthogonal (defect {defect:e})")));
    }
    Ok(())
}

fn validate_finite(list: &[Matrix], dim: usize) -> Result<()> {
    for g in list {
        check_orthogonal(g, dim)?;
    }
    let id = Matrix::identity(dim, dim);
    let contains = |m: &Matrix| list.iter().any(|g| (g - m).amax() <= ORTHO_TOL);
    if !contains(&id) {
        return Err(Error::invalid("group", "finite group must contain the identity"));
    }
    for a in list {
        for b in list {
            if !contains(&(a * b)) {
                return Err(Error::invalid("group", "finite group is not closed under products"));
            }
        }
    }
    Ok(())
}

/// Rotation by `angle` taking `e_i` towards `e_j`.
pub fn plane_rotation(dim: usize, i: usize, j: usize, angle: f64) -> Matrix {
    let (s, c) = angle.sin_cos();
    let mut g = Matrix::identity(dim, dim);
    g[(i, i)] = c;
    g[(j, j)] = c;
    g[(j, i)] = s;
    g[(i, j)] = -s;
    g
}

/// Orthogonal `Q` (a Householder reflection) whose last column is `v/|v|`.
fn basis_with_last(v: &Vector) -> Result<Matrix> {
    let m = v.len();
    let norm = v.norm();
    if !(norm > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let unit = v / norm;
    let mut e = Vector::zeros(m);
    e[m - 1] = 1.0;
    let u = &e - &unit;
    if u.norm() < 1e-14 {
        return Ok(Matrix::identity(m, m));
    }
    let u = u.normalize();
    Ok(Matrix::identity(m, m) - &u * u.transpose() * 2.0)
}

/// Haar samples `Q diag(O, 1) Qᵀ`, `O ∈ O(n)`, of the stabilizer of `v`.
fn isotropy_samples(v: &Vector, count: usize, seed: u64) -> Result<Vec<Matrix>> {
    let m = v.len();
    let q = basis_with_last(v)?;
    let mut g = rng::seeded(seed);
    Ok((0..count)
        .map(|_| {
            let o = rng::haar_orthogonal(m - 1, &mut g);
            let mut block = Matrix::identity(m, m);
            block.view_mut((0, 0), (m - 1, m - 1)).copy_from(&o);
            &q * block * q.transpose()
        })
        .collect())
}

/// The average `X_G`. Both variants hold an exact polynomial representative;
/// they differ in how faithfully it represents the true group average.
#[derive(Clone, Debug)]
pub enum SymmetrizedField {
    /// Finite average of polynomial pullbacks.
    Exact(AmbientPolyField),
    /// Empirical mean over `samples` sampled group elements.
    Sampled { mean: AmbientPolyField, samples: usize },
}

impl SymmetrizedField {
    pub fn model(&self) -> &SphereModel {
        self.field().model()
    }

    pub fn field(&self) -> &AmbientPolyField {
        match self {
            SymmetrizedField::Exact(f) | SymmetrizedField::Sampled { mean: f, .. } => f,
        }
    }

    pub fn as_exact(&self) -> Option<&AmbientPolyField> {
        match self {
            SymmetrizedField::Exact(f) => Some(f),
            SymmetrizedField::Sampled { .. } => None,
        }
    }
}

impl VectorField for SymmetrizedField {
    fn ambient_dim(&self) -> usize {
        self.model().ambient_dim()
    }

    fn eval(&self, p: &Vector) -> Result<Vector> {
        VectorField::eval(self.field(), p)
    }
}

/// Mean of `f(g)` over `elements`, summed in a fixed pairwise order.
fn sampled_mean(elements: &[Matrix], f: impl Fn(&Matrix) -> Vector + Sync + Send) -> Vector {
    let values: Vec<Vector> = elements.par_iter().map(f).collect();
    let m = values[0].len();
    let mut out = Vector::zeros(m);
    let mut column = vec![0.0; values.len()];
    for a in 0..m {
        for (c, v) in column.iter_mut().zip(&values) {
            *c = v[a];
        }
        out[a] = tree_sum(&column) / values.len() as f64;
    }
    out
}

/// The empirical mean `x ↦ mean_g gᵀ P(g x)` as a polynomial map.
///
/// The mean of pullbacks has the same degree as `P`, so it is recovered
/// exactly (to rounding) by least squares on `2·#monomials` generic points
/// of the ambient space; only those points pay the per-sample cost.
fn sampled_average(x: &AmbientPolyField, elements: &[Matrix]) -> Result<AmbientPolyField> {
    let model = *x.model();
    let m = model.ambient_dim();
    let monos = monomials_up_to(m, x.degree());
    let rows = 2 * monos.len();
    let mut r = rng::seeded(0x5eed);
    let points: Vec<Vector> = (0..rows)
        .map(|_| rng::gaussian_vector(m, &mut r) * model.radius())
        .collect();
    let values: Vec<Vector> = points
        .iter()
        .map(|p| sampled_mean(elements, |g| g.transpose() * x.ambient_value(&(g * p))))
        .collect();
    let vandermonde = Matrix::from_fn(rows, monos.len(), |i, j| {
        Poly::monomial(monos[j].clone(), 1.0).eval(points[i].as_slice())
    });
    let rhs = Matrix::from_fn(rows, m, |i, a| values[i][a]);
    let coeffs = vandermonde
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Domain(format!("least-squares fit failed: {e}")))?;
    let comps = (0..m)
        .map(|a| {
            let mut poly = Poly::zero(m);
            for (j, e) in monos.iter().enumerate() {
                poly.add_term(e.clone(), coeffs[(j, a)]);
            }
            poly
        })
        .collect();
    AmbientPolyField::new(model, comps)
}

fn check_dim(x: &AmbientPolyField, g: &[Matrix]) -> Result<()> {
    let m = x.model().ambient_dim();
    if let Some(bad) = g.iter().find(|g| g.nrows() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: bad.nrows(),
        });
    }
    Ok(())
}

fn exact_average(x: &AmbientPolyField, elements: &[Matrix]) -> AmbientPolyField {
    let weight = 1.0 / elements.len() as f64;
    elements
        .iter()
        .fold(AmbientPolyField::zero(*x.model()), |acc, g| {
            acc.add(&x.pullback(g).scale(weight)).expect("same sphere")
        })
}

/// `X_G`.
pub fn symmetrize(x: &AmbientPolyField, group: &GroupSpec) -> Result<SymmetrizedField> {
    let elements = group.elements(x.model().ambient_dim())?;
    check_dim(x, &elements)?;
    if group.is_exact() {
        Ok(SymmetrizedField::Exact(exact_average(x, &elements)))
    } else {
        Ok(SymmetrizedField::Sampled {
            mean: sampled_average(x, &elements)?,
            samples: elements.len(),
        })
    }
}

/// Elements used to probe invariance: the group itself in exact modes, fresh
/// samples (seed offset) otherwise.
fn probe_elements(group: &GroupSpec, dim: usize, samples: usize, seed: u64) -> Result<Vec<Matrix>> {
    match group {
        GroupSpec::IsotropyAt { v, .. } => isotropy_samples(v, samples, seed),
        GroupSpec::Haar { .. } => {
            let mut g = rng::seeded(seed);
            Ok((0..samples).map(|_| rng::haar_orthogonal(dim, &mut g)).collect())
        }
        _ => group.elements(dim),
    }
}

/// `max ‖gᵀ X_G(g p) − X_G(p)‖` over probe elements `g` and `samples` random
/// points `p`.
pub fn invariance_check(xg: &SymmetrizedField, group: &GroupSpec, samples: usize, seed: u64) -> Result<f64> {
    let model = *xg.model();
    let dim = model.ambient_dim();
    let probes = probe_elements(group, dim, samples, seed ^ 0x9e37_79b9)?;
    let mut r = rng::seeded(seed);
    let points: Vec<Vector> = (0..samples).map(|_| rng::sphere_point(dim, model.radius(), &mut r)).collect();
    let mut worst = 0.0_f64;
    for (i, p) in points.iter().enumerate() {
        let here = xg.eval(p)?;
        let gs: Vec<&Matrix> = if group.is_exact() {
            probes.iter().collect()
        } else {
            vec![&probes[i % probes.len()]]
        };
        for g in gs {
            let moved = g.transpose() * xg.eval(&(g * p))?;
            worst = worst.max((moved - &here).norm());
        }
    }
    Ok(worst)
}

/// `max ‖(div∇X)_G − div∇(X_G)‖` over random points. Exact modes only.
pub fn commutation_defect(x: &AmbientPolyField, group: &GroupSpec, samples: usize, seed: u64) -> Result<f64> {
    if !group.is_exact() {
        return Err(Error::ExactModeRequired(
            "commutation defect needs a finite or planar group".into(),
        ));
    }
    let model = *x.model();
    let dim = model.ambient_dim();
    let elements = group.elements(dim)?;
    let xg = exact_average(x, &elements);
    let mut r = rng::seeded(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let p = rng::sphere_point(dim, model.radius(), &mut r);
        let lap_of_avg = xg.rough_laplacian(&p)?.vec;
        let mut avg_of_lap = Vector::zeros(dim);
        for g in &elements {
            avg_of_lap += g.transpose() * x.rough_laplacian(&(g * &p))?.vec;
        }
        avg_of_lap /= elements.len() as f64;
        worst = worst.max((avg_of_lap - lap_of_avg).norm());
    }
    Ok(worst)
}

fn l2_norm(x: &dyn VectorField, rule: &QuadratureRule) -> Result<f64> {
    rule.l2_norm(x)
}

/// `∫⟨W, V⟩` after checking that `V` is `G`-invariant and `W_G ≡ 0`.
pub fn product_orthogonality(
    w: &AmbientPolyField,
    v: &AmbientPolyField,
    group: &GroupSpec,
    rule: &QuadratureRule,
) -> Result<f64> {
    let tol = group.tolerance();
    let v_norm = l2_norm(v, rule)?;
    if v_norm > 0.0 {
        let defect = invariance_check(&SymmetrizedField::Exact(v.clone()), group, 32, 1)?;
        let rms = v_norm / rule.model().volume().sqrt();
        if defect > tol * rms {
            return Err(Error::Precondition(format!(
                "V is not G-invariant: defect {defect:e} > {:e}",
                tol * rms
            )));
        }
    }
    require_zero_mean(w, group, rule, "W")?;
    rule.integrate_pairing(w, v)
}

/// Fails unless `‖X_G‖ ≤ tol · ‖X‖` in `L²`.
fn require_zero_mean(x: &AmbientPolyField, group: &GroupSpec, rule: &QuadratureRule, name: &str) -> Result<()> {
    let norm = l2_norm(x, rule)?;
    if norm == 0.0 {
        return Ok(());
    }
    let xg = symmetrize(x, group)?;
    let sym_norm = l2_norm(&xg, rule)?;
    let tol = group.tolerance();
    if sym_norm > tol * norm {
        return Err(Error::Precondition(format!(
            "{name}_G is not zero: |{name}_G| / |{name}| = {:e} > {tol:e}",
            sym_norm / norm
        )));
    }
    Ok(())
}

/// `∫⟨X(p), v⟩ dp` for `X` with zero mean over the isotropy group at `v`.
pub fn zero_mean_function_check(x: &AmbientPolyField, group: &GroupSpec, rule: &QuadratureRule) -> Result<f64> {
    let GroupSpec::IsotropyAt { v, .. } = group else {
        return Err(Error::invalid("group", "zero-mean check needs an isotropy group"));
    };
    require_zero_mean(x, group, rule, "X")?;
    let v = v.clone();
    rule.integrate_scalar(|p| Ok(x.value_unchecked(p).dot(&v)))
}

/// Empirical mean of `⟨h u, v⟩` over `count` Haar samples `h ∈ O(dim)`.
pub fn transitive_average(u: &Vector, v: &Vector, count: usize, seed: u64) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    if count == 0 {
        return Err(Error::invalid("count", "need at least one sample"));
    }
    let mut g = rng::seeded(seed);
    let values: Vec<f64> = (0..count)
        .map(|_| (rng::haar_orthogonal(u.len(), &mut g) * u).dot(v))
        .collect();
    Ok(tree_sum(&values) / count as f64)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OrbitReport {
    /// Largest component of `X_G` tangent to the orbit through the sample.
    pub max_defect: f64,
    pub checked: usize,
    /// Samples too close to `±v` for the meridian to be defined.
    pub skipped: usize,
}

/// Largest orbit-tangential component `‖X − ⟨X, ν⟩ν‖` of `XG` over random
/// points, with `ν` the unit meridian direction away from `v`.
pub fn orbit_orthogonality_check(xg: &dyn VectorField, model: &SphereModel, v: &Vector, samples: usize, seed: u64) -> Result<OrbitReport> {
    let dim = model.ambient_dim();
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: v.len(),
        });
    }
    let mut r = rng::seeded(seed);
    let mut report = OrbitReport {
        max_defect: 0.0,
        checked: 0,
        skipped: 0,
    };
    for _ in 0..samples {
        let p = rng::sphere_point(dim, model.radius(), &mut r);
        let t = model.tangent_project(&p, v)?;
        if t.norm() < 1e-8 * v.norm() {
            report.skipped += 1;
            continue;
        }
        let nu = -t.normalize();
        let x = xg.eval(&p)?;
        let defect = (&x - &nu * x.dot(&nu)).norm();
        report.max_defect = report.max_defect.max(defect);
        report.checked += 1;
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EigenInstanceReport {
    pub norm_x: f64,
    pub norm_xg: f64,
    /// `max ‖−div∇X − λX‖` at the rule nodes.
    pub base_defect: f64,
    /// `max ‖−div∇X_G − λX_G‖` at the rule nodes.
    pub eigen_defect: f64,
    /// `X_G` vanished (relative norm below `1e−10`).
    pub annihilated: bool,
}

/// Symmetrizes an eigenfield over an exact group and reports whether the
/// result is again an eigenfield for the same eigenvalue.
pub fn invariant_eigenfield_instance(
    x: &AmbientPolyField,
    lambda: f64,
    group: &GroupSpec,
    rule: &QuadratureRule,
) -> Result<EigenInstanceReport> {
    let xg = match symmetrize(x, group)? {
        SymmetrizedField::Exact(f) => f,
        SymmetrizedField::Sampled { .. } => {
            return Err(Error::ExactModeRequired("eigenfield instances need a finite or planar group".into()))
        }
    };
    let defect = |f: &AmbientPolyField| -> Result<f64> {
        let mut worst = 0.0_f64;
        for p in rule.nodes() {
            let r = f.rough_laplacian(p)?.vec + f.value_unchecked(p) * lambda;
            worst = worst.max(r.norm());
        }
        Ok(worst)
    };
    let norm_x = l2_norm(x, rule)?;
    let norm_xg = l2_norm(&xg, rule)?;
    Ok(EigenInstanceReport {
        norm_x,
        norm_xg,
        base_defect: defect(x)?,
        eigen_defect: defect(&xg)?,
        annihilated: norm_xg <= 1e-10 * norm_x.max(f64::MIN_POSITIVE),
    })
}

/// Alternating exact averages over the circles in `planes`, `rounds` times;
/// returns `‖X‖` followed by the norm after each round. The iterates converge
/// to the average over the group generated by the circles.
pub fn iterated_circle_average(
    x: &AmbientPolyField,
    planes: &[(usize, usize)],
    count: usize,
    rounds: usize,
    rule: &QuadratureRule,
) -> Result<Vec<f64>> {
    let mut norms = vec![l2_norm(x, rule)?];
    let mut cur = x.clone();
    for _ in 0..rounds {
        for &plane in planes {
            cur = match symmetrize(&cur, &GroupSpec::PlanarRotations { plane, count })? {
                SymmetrizedField::Exact(f) => f,
                SymmetrizedField::Sampled { .. } => unreachable!("planar groups are exact"),
            };
        }
        norms.push(l2_norm(&cur, rule)?);
    }
    Ok(norms)
}

/// `V_{k²⟨w,v⟩v}`: the isotropy average at `v` of the projection field `V_w`.
pub fn isotropy_projection_average(model: SphereModel, w: &Vector, v: &Vector) -> Result<AmbientPolyField> {
    let k2 = model.k() * model.k();
    AmbientPolyField::projection(model, &(v * (k2 * w.dot(v))))
}

/// Polynomial fields of degree `≤ degree` invariant under the isotropy group
/// at `v`: the tangential parts of `⟨x, v⟩^j v`, `j = 0..=degree`.
pub fn isotropy_invariant_fields(model: SphereModel, v: &Vector, degree: usize) -> Result<Vec<AmbientPolyField>> {
    let m = model.ambient_dim();
    if v.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: v.len(),
        });
    }
    let mut linear = Poly::zero(m);
    for (i, &c) in v.iter().enumerate() {
        linear.add_term(unit_exps(m, i), c);
    }
    let mut power = Poly::constant(m, 1.0);
    let mut out = Vec::with_capacity(degree + 1);
    for j in 0..=degree {
        if j > 0 {
            power = power.mul(&linear);
        }
        out.push(AmbientPolyField::new(model, v.iter().map(|&c| power.scale(c)).collect())?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::product_rule;
    use nalgebra::dvector;

    fn s2() -> SphereModel {
        SphereModel::new(2, 1.0).unwrap()
    }

    fn north(model: &SphereModel) -> Vector {
        let mut v = Vector::zeros(model.ambient_dim());
        v[model.n()] = model.radius();
        v
    }

    fn sup_diff(a: &dyn VectorField, b: &dyn VectorField, model: &SphereModel, samples: usize) -> f64 {
        let mut r = rng::seeded(99);
        (0..samples)
            .map(|_| {
                let p = rng::sphere_point(model.ambient_dim(), model.radius(), &mut r);
                (a.eval(&p).unwrap() - b.eval(&p).unwrap()).norm()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn group_validation() {
        assert!(GroupSpec::Finite(vec![Matrix::identity(3, 3) * 2.0]).elements(3).is_err());
        let r = GroupSpec::reflection(3, 2).unwrap();
        let GroupSpec::Finite(list) = &r else { unreachable!() };
        assert!(GroupSpec::Finite(vec![list[1].clone()]).elements(3).is_err());
        let rot = plane_rotation(3, 0, 1, 0.3);
        assert!(GroupSpec::Finite(vec![Matrix::identity(3, 3), rot]).elements(3).is_err());
        assert!(GroupSpec::PlanarRotations { plane: (0, 3), count: 4 }.elements(3).is_err());
        let iso = GroupSpec::IsotropyAt {
            v: dvector![0.0, 0.6, 0.8],
            count: 50,
            seed: 3,
        };
        for g in iso.elements(3).unwrap() {
            check_orthogonal(&g, 3).unwrap();
            assert!((&g * dvector![0.0, 0.6, 0.8] - dvector![0.0, 0.6, 0.8]).norm() < 1e-10);
        }
    }

    #[test]
    fn sampled_mean_is_recovered_exactly() {
        // a single sampled element: the fitted mean must equal the pullback
        let m = SphereModel::new(3, 1.5).unwrap();
        let x = AmbientPolyField::random(m, 3, 30).unwrap();
        let g = GroupSpec::Haar { count: 1, seed: 31 };
        let elem = g.elements(4).unwrap().remove(0);
        let xg = symmetrize(&x, &g).unwrap();
        assert!(sup_diff(&xg, &x.pullback(&elem), &m, 50) < 1e-11);
    }

    #[test]
    fn trivial_group_is_identity() {
        let m = s2();
        let x = AmbientPolyField::random(m, 3, 1).unwrap();
        let g = GroupSpec::Finite(vec![Matrix::identity(3, 3)]);
        let xg = symmetrize(&x, &g).unwrap();
        assert!(sup_diff(&xg, &x, &m, 50) < 1e-13);
        assert_eq!(commutation_defect(&x, &g, 10, 1).unwrap(), 0.0);
    }

    #[test]
    fn exact_averages_are_invariant() {
        let m = SphereModel::new(3, 1.0).unwrap();
        let x = AmbientPolyField::random(m, 3, 2).unwrap();
        let refl = GroupSpec::reflection(4, 3).unwrap();
        let xg = symmetrize(&x, &refl).unwrap();
        assert!(invariance_check(&xg, &refl, 50, 3).unwrap() < 1e-10);
        let rot = GroupSpec::PlanarRotations { plane: (0, 1), count: 8 };
        let xg = symmetrize(&x, &rot).unwrap();
        assert!(invariance_check(&xg, &rot, 20, 4).unwrap() < 1e-10);
        // idempotence
        let again = symmetrize(xg.as_exact().unwrap(), &rot).unwrap();
        assert!(sup_diff(&again, &xg, &m, 50) < 1e-10);
    }

    #[test]
    fn planar_average_is_exact_once_count_is_large_enough() {
        // continuous invariance: probe with rotations not in the discrete set
        let m = s2();
        let x = AmbientPolyField::random(m, 3, 5).unwrap();
        let xg = symmetrize(&x, &GroupSpec::PlanarRotations { plane: (0, 1), count: 8 }).unwrap();
        let mut r = rng::seeded(6);
        for t in [0.1, 0.77, 2.3] {
            let g = plane_rotation(3, 0, 1, t);
            let p = rng::sphere_point(3, 1.0, &mut r);
            let d = g.transpose() * xg.eval(&(&g * &p)).unwrap() - xg.eval(&p).unwrap();
            assert!(d.norm() < 1e-10);
        }
    }

    #[test]
    fn isotropy_average_of_projection_matches_closed_form() {
        for (n, k) in [(2, 1.0), (3, 2.0)] {
            let m = SphereModel::new(n, k).unwrap();
            let v = north(&m);
            let w = rng::gaussian_vector(n + 1, &mut rng::seeded(7));
            let count = 20_000;
            let g = GroupSpec::IsotropyAt {
                v: v.clone(),
                count,
                seed: 7,
            };
            let xg = symmetrize(&AmbientPolyField::projection(m, &w).unwrap(), &g).unwrap();
            let closed = isotropy_projection_average(m, &w, &v).unwrap();
            let d = sup_diff(&xg, &closed, &m, 20);
            assert!(d < 5.0 * w.norm() / (count as f64).sqrt(), "{d}");
            // w ⟂ v averages to (nearly) zero
            let mut wp = w.clone();
            wp[n] = 0.0;
            let zero = symmetrize(&AmbientPolyField::projection(m, &wp).unwrap(), &g).unwrap();
            let d = sup_diff(&zero, &AmbientPolyField::zero(m), &m, 20);
            assert!(d < 5.0 * wp.norm() / (count as f64).sqrt());
        }
    }

    #[test]
    fn sampled_invariance_decays_with_count() {
        let m = s2();
        let v = north(&m);
        let x = AmbientPolyField::random(m, 2, 8).unwrap();
        let defects: Vec<f64> = [400, 1600, 6400]
            .iter()
            .map(|&count| {
                let g = GroupSpec::IsotropyAt {
                    v: v.clone(),
                    count,
                    seed: 9,
                };
                invariance_check(&symmetrize(&x, &g).unwrap(), &g, 40, 10).unwrap()
            })
            .collect();
        for (d, count) in defects.iter().zip([400.0_f64, 1600.0, 6400.0]) {
            assert!(*d < 20.0 / count.sqrt(), "{defects:?}");
        }
        assert!(defects[2] < defects[0]);
    }

    #[test]
    fn commutation_with_rough_laplacian() {
        let m = s2();
        let refl = GroupSpec::reflection(3, 2).unwrap();
        let proj = AmbientPolyField::projection(m, &dvector![0.3, -1.0, 0.7]).unwrap();
        assert!(commutation_defect(&proj, &refl, 50, 11).unwrap() < 1e-9);
        let kill = AmbientPolyField::plane_rotation(m, 0, 2).unwrap();
        let rot = GroupSpec::PlanarRotations { plane: (0, 1), count: 16 };
        assert!(commutation_defect(&kill, &rot, 50, 12).unwrap() < 1e-9);
        let x = AmbientPolyField::random(m, 3, 13).unwrap();
        assert!(commutation_defect(&x, &rot, 20, 14).unwrap() < 1e-9);
        let iso = GroupSpec::IsotropyAt {
            v: north(&m),
            count: 10,
            seed: 1,
        };
        assert!(matches!(commutation_defect(&x, &iso, 5, 1), Err(Error::ExactModeRequired(_))));
    }

    #[test]
    fn product_and_zero_mean_lemmas() {
        let m = s2();
        let rule = product_rule(m, 10).unwrap();
        let v = north(&m);
        let g = GroupSpec::IsotropyAt {
            v: v.clone(),
            count: 100_000,
            seed: 7,
        };
        let w = AmbientPolyField::projection(m, &dvector![1.0, -0.5, 0.0]).unwrap();
        let vf = AmbientPolyField::projection(m, &v).unwrap();
        assert!(product_orthogonality(&w, &vf, &g, &rule).unwrap().abs() < 1e-6);
        assert!(product_orthogonality(&w, &AmbientPolyField::zero(m), &g, &rule).unwrap().abs() < 1e-15);
        // W not zero-mean → refused
        assert!(matches!(product_orthogonality(&vf, &vf, &g, &rule), Err(Error::Precondition(_))));

        assert!(zero_mean_function_check(&w, &g, &rule).unwrap().abs() < 1e-6);
        let a = Matrix::from_row_slice(3, 3, &[0.0, 0.4, -1.0, -0.4, 0.0, 0.3, 1.0, -0.3, 0.0]);
        let kill = AmbientPolyField::killing(m, &a).unwrap();
        assert!(zero_mean_function_check(&kill, &g, &rule).unwrap().abs() < 1e-6);
        assert_eq!(zero_mean_function_check(&AmbientPolyField::zero(m), &g, &rule).unwrap(), 0.0);
    }

    #[test]
    fn decomposition_into_invariant_and_zero_mean_parts() {
        let m = SphereModel::new(3, 1.0).unwrap();
        let rule = product_rule(m, 8).unwrap();
        let v = north(&m);
        let g = GroupSpec::IsotropyAt {
            v: v.clone(),
            count: 100_000,
            seed: 3,
        };
        let w = rng::gaussian_vector(4, &mut rng::seeded(15));
        let vw = AmbientPolyField::projection(m, &w).unwrap();
        let invariant = isotropy_projection_average(m, &w, &v).unwrap();
        let rest = vw.add(&invariant.scale(-1.0)).unwrap();
        assert!(product_orthogonality(&rest, &invariant, &g, &rule).unwrap().abs() < 1e-6);
    }

    #[test]
    fn transitive_average_is_small() {
        let u = dvector![0.0, 0.0, 1.0];
        let count = 100_000;
        let bound = 5.0 / (count as f64).sqrt();
        assert!(transitive_average(&u, &u, count, 7).unwrap().abs() < bound);
        assert!(transitive_average(&u, &dvector![1.0, 0.0, 0.0], count, 7).unwrap().abs() < bound);
        // radius 1/2: bound scales with r²
        let half = dvector![0.0, 0.0, 0.5];
        assert!(transitive_average(&half, &half, count, 8).unwrap().abs() < 0.25 * bound);
    }

    #[test]
    fn transitive_average_follows_clt_scaling() {
        let u = dvector![0.0, 0.0, 1.0];
        let rms = |count: usize| {
            let s: f64 = (0..40).map(|seed| transitive_average(&u, &u, count, seed).unwrap().powi(2)).sum();
            (s / 40.0).sqrt()
        };
        let ratio = rms(1000) / rms(4000);
        assert!((ratio - 2.0).abs() < 0.6, "{ratio}");
    }

    #[test]
    fn invariant_fields_are_meridional() {
        let m = s2();
        let v = north(&m);
        let proj = AmbientPolyField::projection(m, &v).unwrap();
        let rep = orbit_orthogonality_check(&proj, &m, &v, 200, 16).unwrap();
        assert!(rep.max_defect < 1e-10 && rep.checked == 200);
        let count = 100_000;
        let g = GroupSpec::IsotropyAt {
            v: v.clone(),
            count,
            seed: 17,
        };
        let x = AmbientPolyField::random(m, 2, 18).unwrap();
        let xg = symmetrize(&x, &g).unwrap();
        let rep = orbit_orthogonality_check(&xg, &m, &v, 20, 19).unwrap();
        assert!(rep.max_defect < 5.0 / (count as f64).sqrt(), "{rep:?}");
        let zero = orbit_orthogonality_check(&AmbientPolyField::zero(m), &m, &v, 10, 1).unwrap();
        assert_eq!(zero.max_defect, 0.0);
    }

    #[test]
    fn eigenfield_instances() {
        let m = s2();
        let rule = product_rule(m, 8).unwrap();
        let refl = GroupSpec::reflection(3, 2).unwrap();
        let e1 = AmbientPolyField::projection(m, &dvector![1.0, 0.0, 0.0]).unwrap();
        let rep = invariant_eigenfield_instance(&e1, 1.0, &refl, &rule).unwrap();
        assert!(rep.eigen_defect < 1e-9 && !rep.annihilated && (rep.norm_xg - rep.norm_x).abs() < 1e-12);
        let e3 = AmbientPolyField::projection(m, &dvector![0.0, 0.0, 1.0]).unwrap();
        let rep = invariant_eigenfield_instance(&e3, 1.0, &refl, &rule).unwrap();
        assert!(rep.annihilated);
    }

    #[test]
    fn two_circles_average_to_zero() {
        let m = s2();
        let rule = product_rule(m, 8).unwrap();
        let x = AmbientPolyField::random(m, 2, 20).unwrap();
        let norms = iterated_circle_average(&x, &[(0, 1), (1, 2)], 8, 12, &rule).unwrap();
        assert!(norms.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(norms[12] < 1e-3 * norms[0], "{norms:?}");
    }

    #[test]
    fn linearity_and_norm_bound() {
        let m = s2();
        let rule = product_rule(m, 8).unwrap();
        let g = GroupSpec::PlanarRotations { plane: (1, 2), count: 10 };
        let x = AmbientPolyField::random(m, 3, 21).unwrap();
        let y = AmbientPolyField::random(m, 2, 22).unwrap();
        let lhs = symmetrize(&x.scale(2.0).add(&y.scale(-0.5)).unwrap(), &g).unwrap();
        let xg = symmetrize(&x, &g).unwrap();
        let yg = symmetrize(&y, &g).unwrap();
        let rhs = xg.as_exact().unwrap().scale(2.0).add(&yg.as_exact().unwrap().scale(-0.5)).unwrap();
        assert!(sup_diff(&lhs, &rhs, &m, 30) < 1e-12);
        assert!(rule.l2_norm(&xg).unwrap() <= rule.l2_norm(&x).unwrap() + 1e-10);
    }

    #[test]
    fn invariant_span_is_invariant() {
        let m = SphereModel::new(3, 1.0).unwrap();
        let v = dvector![0.0, 0.6, 0.0, 0.8];
        let iso = GroupSpec::IsotropyAt {
            v: v.clone(),
            count: 20,
            seed: 23,
        };
        for f in isotropy_invariant_fields(m, &v, 3).unwrap() {
            let d = invariance_check(&SymmetrizedField::Exact(f), &iso, 20, 24).unwrap();
            assert!(d < 1e-10);
        }
    }
}
