//! Rayleigh–Ritz approximation of the bottom of the rough-Laplacian spectrum
//! over spans of polynomial tangent fields.

use rayon::prelude::*;
use serde::Serialize;

use crate::eigen::{self, cholesky, pivoted_cholesky, symmetric_eigen};
use crate::fields::{AmbientPolyField, HopfAxis, MAX_DEGREE};
use crate::geometry::SphereModel;
use crate::poly::{monomials_up_to, Exponents};
use crate::quadrature::{monte_carlo_rule, product_rule, QuadratureRule};
use crate::symmetrize::{isotropy_invariant_fields, symmetrize, GroupSpec};
use crate::{Error, Matrix, Result, Vector};

/// Relative pivot threshold for discarding linearly dependent members.
pub const RANK_TOL: f64 = 1e-10;
/// Members with `‖X‖_{L²} < NORM_TOL · Vol` are dropped.
pub const NORM_TOL: f64 = 1e-8;
/// Monte Carlo size used when no product rule exists (`n > 3`).
pub const DEFAULT_MC_COUNT: usize = 20_000;
pub const DEFAULT_MC_SEED: u64 = 1;
const CHUNK: usize = 64;

/// Product rule with `res = max(2d + 4, 8)` for `n ≤ 3`, a seeded Monte Carlo rule
/// otherwise.
pub fn default_rule(model: SphereModel, degree: usize) -> Result<QuadratureRule> {
    if model.n() <= 3 {
        product_rule(model, (2 * degree + 4).max(8))
    } else {
        monte_carlo_rule(model, DEFAULT_MC_COUNT, DEFAULT_MC_SEED)
    }
}

/// A linearly independent family of polynomial tangent fields.
#[derive(Clone, Debug)]
pub struct Dictionary {
    model: SphereModel,
    candidates: usize,
    fields: Vec<AmbientPolyField>,
    labels: Vec<String>,
}

fn monomial_label(out: usize, exps: &Exponents) -> String {
    let powers: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(i, &a)| if a == 1 { format!("x{i}") } else { format!("x{i}^{a}") })
        .collect();
    if powers.is_empty() {
        format!("e{out}")
    } else {
        format!("e{out}*{}", powers.join("*"))
    }
}

/// All projected monomial fields `e_l x^α`, `|α| ≤ d`, filtered to a basis.
pub fn build_dictionary(model: SphereModel, degree: usize) -> Result<Dictionary> {
    let rule = default_rule(model, degree)?;
    build_dictionary_with_rule(model, degree, &rule)
}

pub fn build_dictionary_with_rule(model: SphereModel, degree: usize, rule: &QuadratureRule) -> Result<Dictionary> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::invalid("degree", format!("need 1 <= d <= {MAX_DEGREE}, got {degree}")));
    }
    let m = model.ambient_dim();
    let monos = monomials_up_to(m, degree);
    let mut fields = Vec::with_capacity(m * monos.len());
    let mut labels = Vec::with_capacity(m * monos.len());
    for out in 0..m {
        for e in &monos {
            fields.push(AmbientPolyField::monomial(model, out, e.clone())?);
            labels.push(monomial_label(out, e));
        }
    }
    Dictionary::from_fields(model, fields, labels, rule)
}

impl Dictionary {
    /// Filters `fields`: drops near-zero members, then keeps a maximal subset
    /// with well-conditioned mass matrix (greedy pivoted Cholesky).
    pub fn from_fields(
        model: SphereModel,
        fields: Vec<AmbientPolyField>,
        labels: Vec<String>,
        rule: &QuadratureRule,
    ) -> Result<Self> {
        if labels.len() != fields.len() {
            return Err(Error::DimensionMismatch {
                expected: fields.len(),
                got: labels.len(),
            });
        }
        if fields.iter().any(|f| f.model() != &model) || rule.model() != &model {
            return Err(Error::invalid("model", "fields and rule must live on the same sphere"));
        }
        let candidates = fields.len();
        let mass = accumulate(rule, &fields, false)?.mass;
        let floor = NORM_TOL * model.volume();
        let nonzero: Vec<usize> = (0..candidates).filter(|&i| mass[(i, i)].sqrt() >= floor).collect();
        let sub = Matrix::from_fn(nonzero.len(), nonzero.len(), |i, j| mass[(nonzero[i], nonzero[j])]);
        let kept: Vec<usize> = pivoted_cholesky(&sub, RANK_TOL).into_iter().map(|i| nonzero[i]).collect();
        Ok(Dictionary {
            model,
            candidates,
            fields: kept.iter().map(|&i| fields[i].clone()).collect(),
            labels: kept.iter().map(|&i| labels[i].clone()).collect(),
        })
    }

    pub fn model(&self) -> &SphereModel {
        &self.model
    }

    /// Number of fields offered before filtering.
    pub fn candidates(&self) -> usize {
        self.candidates
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn fields(&self) -> &[AmbientPolyField] {
        &self.fields
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self) -> usize {
        self.fields.iter().map(AmbientPolyField::degree).max().unwrap_or(0)
    }

    /// `Σ c_i X_i`.
    pub fn combine(&self, coeffs: &[f64]) -> Result<AmbientPolyField> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: coeffs.len(),
            });
        }
        let refs: Vec<&AmbientPolyField> = self.fields.iter().collect();
        AmbientPolyField::combination(self.model, &refs, coeffs)
    }
}

/// Integrated Gram data of a family of fields.
struct Grams {
    stiffness: Matrix,
    mass: Matrix,
    /// `∫⟨div∇X_i, div∇X_j⟩` and `∫⟨div∇X_i, X_j⟩`, when requested.
    lap: Option<(Matrix, Matrix)>,
}

fn add_grams(mut a: Grams, b: Grams) -> Grams {
    a.stiffness += b.stiffness;
    a.mass += b.mass;
    if let (Some((ll, lp)), Some((ll2, lp2))) = (a.lap.as_mut(), b.lap) {
        *ll += ll2;
        *lp += lp2;
    }
    a
}

/// Sums node contributions chunk by chunk; chunk results are combined in a
/// fixed pairwise order so the outcome does not depend on the thread count.
fn accumulate(rule: &QuadratureRule, fields: &[AmbientPolyField], with_lap: bool) -> Result<Grams> {
    let model = *rule.model();
    let (n, m, count) = (model.n(), model.ambient_dim(), fields.len());
    let nodes = rule.nodes();
    let weights = rule.weights();
    let chunks: Vec<Result<Grams>> = (0..nodes.len())
        .collect::<Vec<_>>()
        .par_chunks(CHUNK)
        .map(|idx| {
            let rows = idx.len();
            let mut phi = Matrix::zeros(rows * m, count);
            let mut psi = Matrix::zeros(rows * m * n, count);
            let mut lap = if with_lap { Matrix::zeros(rows * m, count) } else { Matrix::zeros(0, 0) };
            for (r, &q) in idx.iter().enumerate() {
                let p = &nodes[q];
                let sw = weights[q].sqrt();
                let frame = model.frame_unchecked(p);
                for (c, f) in fields.iter().enumerate() {
                    let jet = f.jet_unchecked(p, &frame, with_lap);
                    for a in 0..m {
                        phi[(r * m + a, c)] = sw * jet.value[a];
                    }
                    for (i, d) in jet.cov.iter().enumerate() {
                        for a in 0..m {
                            psi[((r * n + i) * m + a, c)] = sw * d[a];
                        }
                    }
                    if let Some(l) = &jet.rough_lap {
                        for a in 0..m {
                            lap[(r * m + a, c)] = sw * l[a];
                        }
                    }
                }
            }
            if !phi.iter().chain(psi.iter()).chain(lap.iter()).all(|v| v.is_finite()) {
                return Err(Error::NonFinite { node: idx[0] });
            }
            Ok(Grams {
                stiffness: psi.transpose() * &psi,
                mass: phi.transpose() * &phi,
                lap: with_lap.then(|| (lap.transpose() * &lap, lap.transpose() * &phi)),
            })
        })
        .collect();
    let mut parts = chunks.into_iter().collect::<Result<Vec<_>>>()?;
    if parts.is_empty() {
        return Err(Error::invalid("rule", "empty quadrature rule"));
    }
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => add_grams(a, b),
                None => a,
            });
        }
        parts = next;
    }
    let mut g = parts.pop().unwrap();
    symmetrize_in_place(&mut g.stiffness);
    symmetrize_in_place(&mut g.mass);
    if let Some((ll, _)) = g.lap.as_mut() {
        symmetrize_in_place(ll);
    }
    Ok(g)
}

fn symmetrize_in_place(a: &mut Matrix) {
    let s = (&*a + a.transpose()) * 0.5;
    *a = s;
}

fn check_exactness(rule: &QuadratureRule, degree: usize) -> Result<()> {
    if let Some(exact) = rule.exactness_degree() {
        if exact < 2 * degree + 2 {
            return Err(Error::RuleTooCoarse(format!(
                "exactness degree {exact} < {} needed for degree-{degree} fields",
                2 * degree + 2
            )));
        }
    }
    Ok(())
}

/// `A_ij = ∫⟨∇X_i, ∇X_j⟩`, `B_ij = ∫⟨X_i, X_j⟩`.
pub fn gram_matrices(dict: &Dictionary, rule: &QuadratureRule) -> Result<(Matrix, Matrix)> {
    check_exactness(rule, dict.degree())?;
    let g = accumulate(rule, &dict.fields, false)?;
    if cholesky(&g.mass).is_err() {
        return Err(Error::RuleTooCoarse("mass matrix is not positive definite".into()));
    }
    Ok((g.stiffness, g.mass))
}

/// Ritz values and vectors.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralResult {
    /// Ascending, with multiplicity.
    pub eigenvalues: Vec<f64>,
    /// Column `i` holds the coefficients of the `i`-th Ritz field; columns are
    /// `B`-orthonormal.
    #[serde(skip)]
    pub coefficients: Matrix,
    /// `‖−div∇X̂ − λX̂‖_{L²}` per Ritz field (empty when not computed).
    pub residuals: Vec<f64>,
}

/// Generalized symmetric-definite eigenproblem `A x = λ B x`.
pub fn solve_generalized(a: &Matrix, b: &Matrix) -> Result<SpectralResult> {
    let (eigenvalues, coefficients) = eigen::solve_generalized(a, b)?;
    Ok(SpectralResult {
        eigenvalues,
        coefficients,
        residuals: Vec::new(),
    })
}

/// Full Rayleigh–Ritz solve with residual certificates.
pub fn ritz(dict: &Dictionary, rule: &QuadratureRule) -> Result<SpectralResult> {
    check_exactness(rule, dict.degree())?;
    let g = accumulate(rule, &dict.fields, true)?;
    let mut res = solve_generalized(&g.stiffness, &g.mass).map_err(|e| match e {
        Error::NotPositiveDefinite { .. } => Error::RuleTooCoarse(format!("{e}")),
        other => other,
    })?;
    let (ll, lp) = g.lap.expect("requested");
    let lp_sym = (&lp + lp.transpose()) * 0.5;
    res.residuals = res
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &lam)| {
            let c = res.coefficients.column(i).into_owned();
            let form = &ll + &lp_sym * (2.0 * lam) + &g.mass * (lam * lam);
            c.dot(&(form * &c)).max(0.0).sqrt()
        })
        .collect();
    Ok(res)
}

/// `δ̂₁` over the degree-`d` dictionary (default rule when `rule` is `None`).
pub fn min_energy(model: SphereModel, degree: usize, rule: Option<&QuadratureRule>) -> Result<f64> {
    let owned;
    let rule = match rule {
        Some(r) => r,
        None => {
            owned = default_rule(model, degree)?;
            &owned
        }
    };
    let dict = build_dictionary_with_rule(model, degree, rule)?;
    let (a, b) = gram_matrices(&dict, rule)?;
    Ok(solve_generalized(&a, &b)?.eigenvalues[0])
}

/// Number of Ritz values within `tol` of `lambda`.
pub fn multiplicity_report(result: &SpectralResult, lambda: f64, tol: f64) -> usize {
    result.eigenvalues.iter().filter(|&&v| (v - lambda).abs() <= tol).count()
}

/// Spectrum of the span of explicitly given fields.
pub fn restricted_spectrum(model: SphereModel, fields: Vec<AmbientPolyField>, rule: &QuadratureRule) -> Result<(Dictionary, SpectralResult)> {
    let labels = (0..fields.len()).map(|i| format!("f{i}")).collect();
    let dict = Dictionary::from_fields(model, fields, labels, rule)?;
    let res = ritz(&dict, rule)?;
    Ok((dict, res))
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantGap {
    /// `δ̂₁` over the full degree-`d` dictionary.
    pub full: f64,
    /// Smallest Ritz value over the left-invariant span.
    pub invariant: f64,
    /// `max |B_ij − b δ_ij| / b` for the Hopf mass matrix (`b` its mean diagonal).
    pub hopf_mass_defect: f64,
    /// `F` of each Hopf field.
    pub hopf_energies: Vec<f64>,
}

/// Full minimum versus minimum over the left-invariant fields on `S³`.
pub fn invariant_subspace_min(model: SphereModel, degree: usize, rule: &QuadratureRule) -> Result<InvariantGap> {
    if model.n() != 3 {
        return Err(Error::invalid("n", "the left-invariant span needs n = 3"));
    }
    let hopf: Vec<AmbientPolyField> = HopfAxis::ALL
        .iter()
        .map(|&a| AmbientPolyField::hopf(model, a))
        .collect::<Result<_>>()?;
    let g = accumulate(rule, &hopf, false)?;
    let mean_diag = (0..3).map(|i| g.mass[(i, i)]).sum::<f64>() / 3.0;
    let hopf_mass_defect = (&g.mass - Matrix::identity(3, 3) * mean_diag).amax() / mean_diag;
    let hopf_energies = (0..3).map(|i| g.stiffness[(i, i)] / g.mass[(i, i)]).collect();
    let invariant = solve_generalized(&g.stiffness, &g.mass)?.eigenvalues[0];
    let full = min_energy(model, degree, Some(rule))?;
    Ok(InvariantGap {
        full,
        invariant,
        hopf_mass_defect,
        hopf_energies,
    })
}

/// `∫⟨X_i, Y_j⟩` for dictionary members `X_i` and arbitrary fields `Y_j`.
pub fn cross_gram(dict: &Dictionary, others: &[AmbientPolyField], rule: &QuadratureRule) -> Result<Matrix> {
    let mut all = dict.fields.clone();
    all.extend_from_slice(others);
    let g = accumulate(rule, &all, false)?;
    let n = dict.len();
    Ok(g.mass.view((0, n), (n, others.len())).into_owned())
}

/// Largest angle between a vector of `span(x)` and the subspace `span(w)`,
/// all in coordinates with inner product `B`. Columns of `x` are tested one
/// at a time.
pub fn max_angle_into(b: &Matrix, x: &Matrix, w: &Matrix) -> Result<f64> {
    let gram = w.transpose() * b * w;
    let l = cholesky(&gram)?;
    let mut worst = 0.0_f64;
    for c in 0..x.ncols() {
        let xc = x.column(c).into_owned();
        let norm2 = xc.dot(&(b * &xc));
        if norm2 <= 0.0 {
            continue;
        }
        // ‖P_W x‖² = rᵀ G⁻¹ r with r = Wᵀ B x
        let r = w.transpose() * (b * &xc);
        let y = l.solve_lower_triangular(&r).expect("nonsingular factor");
        let cos2 = (y.norm_squared() / norm2).clamp(0.0, 1.0);
        worst = worst.max(cos2.sqrt().acos());
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct AlignmentReport {
    pub min_eigenvalue: f64,
    /// Ritz values within `cluster_tol` of the minimum.
    pub cluster_size: usize,
    /// Largest angle from a projection field to the bottom eigenspace.
    pub projection_to_eigenspace: f64,
    /// Angle from the first Ritz field to the span of projection fields.
    pub ritz_to_projection_span: f64,
}

/// Compares the bottom Ritz eigenspace with the span of projection fields.
pub fn projection_alignment(dict: &Dictionary, rule: &QuadratureRule, cluster_tol: f64) -> Result<AlignmentReport> {
    let model = *dict.model();
    let m = model.ambient_dim();
    let (a, b) = gram_matrices(dict, rule)?;
    let res = solve_generalized(&a, &b)?;
    let lam = res.eigenvalues[0];
    let cluster = multiplicity_report(&res, lam, cluster_tol);
    let projections: Vec<AmbientPolyField> = (0..m)
        .map(|i| {
            let mut e = Vector::zeros(m);
            e[i] = 1.0;
            AmbientPolyField::projection(model, &e)
        })
        .collect::<Result<_>>()?;
    // projection fields in dictionary coordinates: B⁻¹ C
    let c = cross_gram(dict, &projections, rule)?;
    let lb = cholesky(&b)?;
    let proj_coords = lb.transpose().solve_upper_triangular(&lb.solve_lower_triangular(&c).unwrap()).unwrap();
    let eigenspace = res.coefficients.columns(0, cluster).into_owned();
    let first = res.coefficients.columns(0, 1).into_owned();
    Ok(AlignmentReport {
        min_eigenvalue: lam,
        cluster_size: cluster,
        projection_to_eigenspace: max_angle_into(&b, &proj_coords, &eigenspace)?,
        ritz_to_projection_span: max_angle_into(&b, &first, &proj_coords)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroMeanReport {
    pub min_energy: f64,
    /// `(n−1)k²`.
    pub bound: f64,
    /// Dimension of the invariant span removed.
    pub invariant_dim: usize,
    pub subspace_dim: usize,
    /// `‖(X_min)_G‖ / ‖X_min‖` for the minimizer under a sampled isotropy
    /// average (cross-check that the subspace really has zero mean).
    pub minimizer_mean_ratio: f64,
    pub sample_count: usize,
}

/// Minimum of `F` over dictionary fields with zero mean over the isotropy
/// group at `v`.
///
/// The average over the isotropy group is the `L²`-orthogonal projection onto
/// invariant fields, and the invariant polynomial fields of degree `≤ d` are
/// spanned by the tangential parts of `⟨x,v⟩^j v`. The zero-mean subspace is
/// therefore the `B`-orthogonal complement of that span.
pub fn zero_mean_min(
    model: SphereModel,
    degree: usize,
    v: &Vector,
    rule: &QuadratureRule,
    samples: usize,
    seed: u64,
) -> Result<ZeroMeanReport> {
    model.check_point(v)?;
    let dict = build_dictionary_with_rule(model, degree, rule)?;
    let (a, b) = gram_matrices(&dict, rule)?;
    let invariant = isotropy_invariant_fields(model, v, degree)?;
    let c = cross_gram(&dict, &invariant, rule)?;
    // null space of Cᵀ from the eigenvectors of C Cᵀ with (near) zero eigenvalue
    let (vals, vecs) = symmetric_eigen(&(&c * c.transpose()))?;
    let top = vals.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let null: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] <= 1e-10 * top).collect();
    let z = Matrix::from_fn(dict.len(), null.len(), |r, col| vecs[(r, null[col])]);
    let az = z.transpose() * &a * &z;
    let bz = z.transpose() * &b * &z;
    let res = solve_generalized(&az, &bz)?;
    let coeffs = &z * res.coefficients.column(0);
    let minimizer = dict.combine(coeffs.as_slice())?;
    let group = GroupSpec::IsotropyAt {
        v: v.clone(),
        count: samples,
        seed,
    };
    let mean = symmetrize(&minimizer, &group)?;
    let ratio = rule.l2_norm(&mean)? / rule.l2_norm(&minimizer)?;
    Ok(ZeroMeanReport {
        min_energy: res.eigenvalues[0],
        bound: (model.n() - 1) as f64 * model.k() * model.k(),
        invariant_dim: dict.len() - null.len(),
        subspace_dim: null.len(),
        minimizer_mean_ratio: ratio,
        sample_count: samples,
    })
}
