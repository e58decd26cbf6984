use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use vfenergy::acceptance::{self, Check, CriterionReport, ExpectedFrom, CRITERIA};
use vfenergy::fields::{AmbientPolyField, HopfAxis};
use vfenergy::geometry::ProfileKind;
use vfenergy::parse::{parse_group_spec, QuadSpec};
use vfenergy::radial::{reilly_defect, solve_smallest, RadialProblem, ReillySummary, GAP_TOL};
use vfenergy::rayleigh::{
    build_dictionary_with_rule, default_rule, multiplicity_report, restricted_spectrum, ritz, zero_mean_min,
    SpectralResult, ZeroMeanReport,
};
use vfenergy::symmetrize::{
    commutation_defect, invariance_check, orbit_orthogonality_check, symmetrize, GroupSpec, OrbitReport,
};
use vfenergy::{Error, QuadratureRule, Result, SphereModel, Vector};

use crate::config::{RadialConfig, Restrict, SpectrumConfig, SymmetrizeConfig, VerifyConfig};

/// Samples behind the isotropy average in `zero-mean` restrictions.
const ZERO_MEAN_SAMPLES: usize = 20_000;
const MULTIPLICITY_TOL: f64 = 1e-4;

fn rule_for(model: SphereModel, quad: &Option<QuadSpec>, degree: usize) -> Result<QuadratureRule> {
    match quad {
        Some(q) => q.build(model),
        None => default_rule(model, degree),
    }
}

#[derive(Debug, Serialize)]
pub struct SpectrumOutput {
    pub dictionary_size: usize,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Ritz values within 1e-4 of `k²` and `(n−1)k²`, keyed by the value.
    pub multiplicities: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_mean: Option<ZeroMeanReport>,
    pub comparisons: Vec<Check>,
}

fn truncated(res: &SpectralResult, eigs: usize) -> (Vec<f64>, Vec<f64>) {
    let m = eigs.min(res.eigenvalues.len());
    (res.eigenvalues[..m].to_vec(), res.residuals[..m.min(res.residuals.len())].to_vec())
}

pub fn spectrum(c: &SpectrumConfig) -> Result<(&'static str, SpectrumOutput)> {
    let model = SphereModel::new(c.n, c.k)?;
    let rule = rule_for(model, &c.quad, c.degree)?;
    let k2 = c.k * c.k;
    let top = (c.n - 1) as f64 * k2;
    let multiplicities = |res: &SpectralResult| {
        let mut m = BTreeMap::new();
        for lam in [k2, top] {
            m.insert(format!("{lam:?}"), multiplicity_report(res, lam, MULTIPLICITY_TOL));
        }
        m
    };
    match &c.restrict {
        None => {
            let dict = build_dictionary_with_rule(model, c.degree, &rule)?;
            let res = ritz(&dict, &rule)?;
            let (eigenvalues, residuals) = truncated(&res, c.eigs);
            let comparisons = vec![Check::near("smallest Ritz value", eigenvalues[0], k2, 1e-6, ExpectedFrom::ClosedForm)];
            Ok((
                "sphere-infimum",
                SpectrumOutput {
                    dictionary_size: dict.len(),
                    eigenvalues,
                    residuals,
                    multiplicities: multiplicities(&res),
                    zero_mean: None,
                    comparisons,
                },
            ))
        }
        Some(Restrict::Hopf) => {
            let fields = HopfAxis::ALL
                .iter()
                .map(|&a| AmbientPolyField::hopf(model, a))
                .collect::<Result<Vec<_>>>()?;
            let (dict, res) = restricted_spectrum(model, fields, &rule)?;
            let (eigenvalues, residuals) = truncated(&res, c.eigs);
            let comparisons = vec![Check::near("smallest invariant Ritz value", eigenvalues[0], 2.0 * k2, 1e-6, ExpectedFrom::ClosedForm)];
            Ok((
                "s3-invariant-gap",
                SpectrumOutput {
                    dictionary_size: dict.len(),
                    eigenvalues,
                    residuals,
                    multiplicities: multiplicities(&res),
                    zero_mean: None,
                    comparisons,
                },
            ))
        }
        Some(Restrict::ZeroMean(v)) => {
            let v = Vector::from_column_slice(v);
            let norm = v.norm();
            if norm == 0.0 {
                return Err(Error::InvalidArgument {
                    field: "restrict",
                    reason: "zero-mean point must be nonzero".into(),
                });
            }
            // the direction is what matters; place it on the sphere
            let v = v * (model.radius() / norm);
            let rep = zero_mean_min(model, c.degree, &v, &rule, ZERO_MEAN_SAMPLES, c.seed)?;
            let comparisons = vec![Check::at_least(
                "zero-mean minimum against (n-1)k^2",
                rep.min_energy,
                rep.bound - 1e-4,
                ExpectedFrom::ClosedForm,
            )];
            Ok((
                "zero-mean-bound",
                SpectrumOutput {
                    dictionary_size: rep.subspace_dim,
                    eigenvalues: vec![rep.min_energy],
                    residuals: Vec::new(),
                    multiplicities: BTreeMap::new(),
                    zero_mean: Some(rep),
                    comparisons,
                },
            ))
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RadialOutput {
    pub k: f64,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    /// `λ₁ − k²`.
    pub gap: f64,
    pub ric_margin: f64,
    pub ricci_gate: bool,
    /// Smallest Reilly defect of the first eigenfunction on the interior.
    pub reilly_min: f64,
    pub reilly: ReillySummary,
    pub comparisons: Vec<Check>,
}

pub fn radial(c: &RadialConfig) -> Result<(&'static str, RadialOutput)> {
    let profile = c.profile.build(c.n)?;
    let round_k = match profile.kind() {
        ProfileKind::Round { k } => Some(*k),
        _ => None,
    };
    let k = match (c.k, round_k) {
        (Some(k), _) | (None, Some(k)) => k,
        (None, None) => profile.largest_admissible_k(c.grid)?,
    };
    let gate = profile.ricci_lower_bound_check(k, c.grid)?;
    let prob = RadialProblem::new(profile.clone(), c.grid, k)?;
    let res = solve_smallest(&prob, c.eigs)?;
    let gap = res.eigenvalues[0] - k * k;
    let reilly = reilly_defect(&res.eigenfunctions[0], &profile, k)?.summary();
    let is_round = round_k.is_some_and(|k0| (k0 - k).abs() <= 1e-9);
    let mut comparisons = Vec::new();
    if is_round {
        comparisons.push(Check::near("lambda_1 against k^2", res.eigenvalues[0], k * k, GAP_TOL, ExpectedFrom::ClosedForm));
    } else if gate.passed {
        comparisons.push(Check::above("lambda_1 - k^2", gap, GAP_TOL, ExpectedFrom::ClosedForm));
    }
    if let Some(path) = &c.csv {
        write_eigen_csv(path, &res.s, &res.eigenfunctions)?;
    }
    Ok((
        if is_round { "radial-ground-truth" } else { "rigidity" },
        RadialOutput {
            k,
            residuals: res.diagnostics.iter().map(|d| d.residual).collect(),
            eigenvalues: res.eigenvalues,
            gap,
            ric_margin: gate.margin,
            ricci_gate: gate.passed,
            reilly_min: reilly.min_defect,
            reilly,
            comparisons,
        },
    ))
}

/// `s,h1,h2,…` at 17 significant digits.
pub fn eigen_csv(s: &[f64], h: &[Vec<f64>]) -> String {
    let mut out = String::from("s");
    for i in 1..=h.len() {
        write!(out, ",h{i}").unwrap();
    }
    out.push('\n');
    for (j, sj) in s.iter().enumerate() {
        write!(out, "{sj:.16e}").unwrap();
        for col in h {
            write!(out, ",{:.16e}", col[j]).unwrap();
        }
        out.push('\n');
    }
    out
}

fn write_eigen_csv(path: &Path, s: &[f64], h: &[Vec<f64>]) -> Result<()> {
    std::fs::write(path, eigen_csv(s, h))?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct SymmetrizeOutput {
    pub exact: bool,
    pub group_size: usize,
    pub norm_x: f64,
    pub norm_xg: f64,
    pub invariance_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commutation_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit: Option<OrbitReport>,
    pub comparisons: Vec<Check>,
}

pub fn symmetrize_cmd(c: &SymmetrizeConfig) -> Result<(&'static str, SymmetrizeOutput)> {
    let model = SphereModel::new(c.n, c.k)?;
    let x = c.field.build(model)?;
    let group = parse_group_spec(&c.group, model.ambient_dim())?;
    let rule = rule_for(model, &c.quad, x.degree().max(1))?;
    let xg = symmetrize(&x, &group)?;
    let norm_x = rule.l2_norm(&x)?;
    let norm_xg = rule.l2_norm(&xg)?;
    let rms = (norm_x / model.volume().sqrt()).max(f64::MIN_POSITIVE);
    let tol = group.tolerance();
    let invariance_defect = invariance_check(&xg, &group, c.samples, c.seed)?;
    let mut comparisons = vec![
        Check::below("invariance defect / rms |X|", invariance_defect / rms, tol, ExpectedFrom::Internal),
        Check::at_least("|X| - |X_G| (norm non-increase)", norm_x - norm_xg, -1e-9 * norm_x.max(1.0), ExpectedFrom::Internal),
    ];
    let commutation = if group.is_exact() {
        let d = commutation_defect(&x, &group, c.samples, c.seed)?;
        comparisons.push(Check::below("commutation defect / rms |X|", d / rms, 1e-9, ExpectedFrom::ClosedForm));
        Some(d)
    } else {
        None
    };
    let orbit = if let GroupSpec::IsotropyAt { v, .. } = &group {
        let rep = orbit_orthogonality_check(&xg, &model, v, c.samples, c.seed)?;
        comparisons.push(Check::below("orbit-tangential part / rms |X|", rep.max_defect / rms, tol, ExpectedFrom::Internal));
        Some(rep)
    } else {
        None
    };
    Ok((
        "symmetrization-laws",
        SymmetrizeOutput {
            exact: group.is_exact(),
            group_size: group.len(),
            norm_x,
            norm_xg,
            invariance_defect,
            commutation_defect: commutation,
            orbit,
            comparisons,
        },
    ))
}

#[derive(Debug, Serialize)]
pub struct VerifyOutput {
    pub passed: bool,
    pub criteria: Vec<CriterionReport>,
}

pub fn verify(c: &VerifyConfig) -> VerifyOutput {
    let ids: Vec<usize> = if c.criteria.is_empty() {
        (1..=CRITERIA).collect()
    } else {
        c.criteria.clone()
    };
    let criteria: Vec<CriterionReport> = ids.par_iter().map(|&id| acceptance::run(id)).collect();
    VerifyOutput {
        passed: criteria.iter().all(|r| r.passed),
        criteria,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_seventeen_digits() {
        let text = eigen_csv(&[0.1, 0.2], &[vec![1.0 / 3.0, 2.0], vec![-1e-300, 0.0]]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "s,h1,h2");
        assert_eq!(lines[1], "1.0000000000000001e-1,3.3333333333333331e-1,-1.0000000000000000e-300");
        for tok in lines[1].split(',').chain(lines[2].split(',')) {
            let back: f64 = tok.parse().unwrap();
            assert_eq!(format!("{back:.16e}"), tok);
        }
    }
}
