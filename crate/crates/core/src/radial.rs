//! Radial fields `V = h(s) grad s` on warped products `ds² + f(s)² g_{S^{n-1}}`.
//!
//! The rough-Laplacian eigenproblem for such fields reduces to the
//! Sturm–Liouville problem
//!
//! `−(f^{n−1} h′)′ + (n−1) f^{n−3} (f′)² h = λ f^{n−1} h`, `h(0) = h(l) = 0`,
//!
//! discretized with flux differences on the interior grid `s_j = j l/(N+1)`.

use serde::Serialize;

use crate::geometry::{ProfileKind, WarpedProfile};
use crate::tridiag::TridiagPencil;
use crate::{Error, Result};

pub const MIN_GRID: usize = 64;
pub const MAX_EIGS: usize = 10;
/// Discretization tolerance for the sign of `λ₁ − k²`.
pub const GAP_TOL: f64 = 5e-4;
/// Fraction of `[0, l]` trimmed at each pole for pointwise diagnostics.
pub const INTERIOR_TRIM: f64 = 0.05;

#[derive(Clone, Debug)]
pub struct RadialProblem {
    profile: WarpedProfile,
    grid: usize,
    k: f64,
}

impl RadialProblem {
    pub fn new(profile: WarpedProfile, grid: usize, k: f64) -> Result<Self> {
        if grid < MIN_GRID {
            return Err(Error::invalid("grid", format!("need N >= {MIN_GRID}, got {grid}")));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::invalid("k", format!("need k > 0, got {k}")));
        }
        Ok(RadialProblem { profile, grid, k })
    }

    pub fn profile(&self) -> &WarpedProfile {
        &self.profile
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn step(&self) -> f64 {
        self.profile.length() / (self.grid + 1) as f64
    }

    /// Interior nodes `s_1, …, s_N`.
    pub fn nodes(&self) -> Vec<f64> {
        let ds = self.step();
        (1..=self.grid).map(|j| j as f64 * ds).collect()
    }

    /// Stiffness (tridiagonal) and mass (diagonal) of the discrete problem.
    pub fn assemble(&self) -> Result<TridiagPencil> {
        let n = self.profile.n() as i32;
        let profile = &self.profile;
        assemble_with(self.profile.length(), self.grid, |s| {
            let j = profile.jet_unchecked(s);
            let p = j.f.powi(n - 1);
            let q = (n - 1) as f64 * j.f.powi(n - 3) * j.df * j.df;
            (p, q)
        })
    }
}

/// Assembles `−(p h′)′ + q h = λ p h` with Dirichlet ends; `coeff(s) = (p, q)`.
fn assemble_with(l: f64, grid: usize, coeff: impl Fn(f64) -> (f64, f64)) -> Result<TridiagPencil> {
    let ds = l / (grid + 1) as f64;
    let flux: Vec<f64> = (0..=grid).map(|j| coeff((j as f64 + 0.5) * ds).0).collect();
    let mut diag = Vec::with_capacity(grid);
    let mut mass = Vec::with_capacity(grid);
    for j in 1..=grid {
        let (p, q) = coeff(j as f64 * ds);
        diag.push((flux[j - 1] + flux[j]) / ds + q * ds);
        mass.push(p * ds);
    }
    let off = (1..grid).map(|j| -flux[j] / ds).collect();
    TridiagPencil::new(diag, off, mass)
}

/// Per-eigenpair consistency data.
#[derive(Clone, Debug, Serialize)]
pub struct PairDiagnostics {
    /// `‖K h − λ M h‖ / ‖h‖_M`.
    pub residual: f64,
    /// Discrete Rayleigh quotient of the eigenfunction.
    pub quotient: f64,
    /// `∫ h² f^{n−1}`.
    pub weighted_norm: f64,
    pub reilly: ReillySummary,
}

#[derive(Clone, Debug, Serialize)]
pub struct RadialResult {
    pub s: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    /// Eigenfunctions sampled on `s`, unit weighted norm, positive first lobe.
    pub eigenfunctions: Vec<Vec<f64>>,
    pub diagnostics: Vec<PairDiagnostics>,
}

/// The `count` smallest eigenpairs.
pub fn solve_smallest(prob: &RadialProblem, count: usize) -> Result<RadialResult> {
    if count == 0 || count > MAX_EIGS {
        return Err(Error::invalid("eigs", format!("need 1 <= m <= {MAX_EIGS}, got {count}")));
    }
    let pencil = prob.assemble()?;
    let pairs = pencil.smallest(count)?;
    let mut eigenvalues = Vec::with_capacity(count);
    let mut eigenfunctions = Vec::with_capacity(count);
    let mut diagnostics = Vec::with_capacity(count);
    for (lambda, mut h) in pairs {
        fix_sign(&mut h);
        let quotient = quotient(&pencil, &h)?;
        let reilly = reilly_defect(&h, &prob.profile, prob.k)?.summary();
        diagnostics.push(PairDiagnostics {
            residual: pencil.residual(lambda, &h),
            quotient,
            weighted_norm: pencil.m_inner(&h, &h),
            reilly,
        });
        eigenvalues.push(lambda);
        eigenfunctions.push(h);
    }
    Ok(RadialResult {
        s: prob.nodes(),
        eigenvalues,
        eigenfunctions,
        diagnostics,
    })
}

/// Makes the first entry of non-negligible size positive.
fn fix_sign(h: &mut [f64]) {
    let max = h.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if let Some(first) = h.iter().find(|v| v.abs() > 1e-6 * max) {
        if *first < 0.0 {
            h.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

fn quotient(pencil: &TridiagPencil, h: &[f64]) -> Result<f64> {
    let mass = pencil.m_inner(h, h);
    if !(mass > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let kh = pencil.apply_stiffness(h);
    Ok(kh.iter().zip(h).map(|(a, b)| a * b).sum::<f64>() / mass)
}

/// Discrete `∫[(h′)² + (n−1)(f′/f)² h²] f^{n−1} / ∫ h² f^{n−1}` for `h` sampled on
/// the interior grid of length `h.len()` (zero at both poles).
pub fn radial_energy(h: &[f64], profile: &WarpedProfile) -> Result<f64> {
    let prob = RadialProblem::new(profile.clone(), h.len(), 1.0)?;
    quotient(&prob.assemble()?, h)
}

/// Pointwise equality diagnostics of the Reilly inequality for `f = φ∘s`,
/// `φ′ = h`, on the interior grid.
#[derive(Clone, Debug, Serialize)]
pub struct ReillyDefect {
    pub s: Vec<f64>,
    /// `D = n[(φ″)² + (φ′)²|B|²] − (Δf)²`.
    pub defect: Vec<f64>,
    /// `φ″ + Hφ′`, zero at equality.
    pub phi_defect: Vec<f64>,
    /// `Δf + n k² f`, zero when `f` is a Laplace eigenfunction with eigenvalue `nk²`.
    pub laplace_defect: Vec<f64>,
    /// `∫ D f^{n−1}` over the whole grid.
    pub weighted_integral: f64,
    trim: (usize, usize),
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ReillySummary {
    pub min_defect: f64,
    pub max_defect: f64,
    pub weighted_integral: f64,
    pub max_phi_defect: f64,
    pub max_laplace_defect: f64,
}

impl ReillyDefect {
    /// Index range of the trimmed interior `[INTERIOR_TRIM·l, (1−INTERIOR_TRIM)·l]`.
    pub fn interior(&self) -> std::ops::Range<usize> {
        self.trim.0..self.trim.1
    }

    pub fn summary(&self) -> ReillySummary {
        let r = self.interior();
        let max_abs = |v: &[f64]| v[r.clone()].iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        ReillySummary {
            min_defect: self.defect[r.clone()].iter().copied().fold(f64::INFINITY, f64::min),
            max_defect: self.defect[r.clone()].iter().copied().fold(f64::NEG_INFINITY, f64::max),
            weighted_integral: self.weighted_integral,
            max_phi_defect: max_abs(&self.phi_defect),
            max_laplace_defect: max_abs(&self.laplace_defect),
        }
    }
}

pub fn reilly_defect(h: &[f64], profile: &WarpedProfile, k: f64) -> Result<ReillyDefect> {
    let grid = h.len();
    let prob = RadialProblem::new(profile.clone(), grid, k)?;
    let ds = prob.step();
    let s = prob.nodes();
    let n = profile.n() as f64;
    let at = |j: isize| -> f64 {
        if j < 0 || j as usize >= grid {
            0.0
        } else {
            h[j as usize]
        }
    };
    let dh: Vec<f64> = (0..grid as isize).map(|j| (at(j + 1) - at(j - 1)) / (2.0 * ds)).collect();

    // φ by the cumulative trapezoid rule from s = 0, shifted to zero weighted mean
    let mut phi = Vec::with_capacity(grid);
    let mut acc = 0.0;
    for j in 0..grid as isize {
        acc += 0.5 * (at(j - 1) + at(j)) * ds;
        phi.push(acc);
    }
    let weights: Vec<f64> = s
        .iter()
        .map(|&x| profile.jet_unchecked(x).f.powi(profile.n() as i32 - 1) * ds)
        .collect();
    let total: f64 = weights.iter().sum();
    let mean = phi.iter().zip(&weights).map(|(a, w)| a * w).sum::<f64>() / total;
    phi.iter_mut().for_each(|v| *v -= mean);

    let mut defect = Vec::with_capacity(grid);
    let mut phi_defect = Vec::with_capacity(grid);
    let mut laplace_defect = Vec::with_capacity(grid);
    for j in 0..grid {
        let mc = profile.mean_curvature(s[j])?;
        let b2 = profile.second_fundamental_norm_sq(s[j])?;
        let (d1, d2) = (h[j], dh[j]);
        let lap = d2 - (n - 1.0) * mc * d1;
        defect.push(n * (d2 * d2 + d1 * d1 * b2) - lap * lap);
        phi_defect.push(d2 + mc * d1);
        laplace_defect.push(lap + n * k * k * phi[j]);
    }
    let weighted_integral = defect.iter().zip(&weights).map(|(d, w)| d * w).sum();
    let l = profile.length();
    let lo = s.iter().position(|&x| x >= INTERIOR_TRIM * l).unwrap_or(0);
    let hi = s.iter().rposition(|&x| x <= (1.0 - INTERIOR_TRIM) * l).map_or(grid, |i| i + 1);
    Ok(ReillyDefect {
        s,
        defect,
        phi_defect,
        laplace_defect,
        weighted_integral,
        trim: (lo, hi),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityReport {
    pub k: f64,
    pub ric_margin: f64,
    pub lambda1: f64,
    pub gap: f64,
    pub round_flag: bool,
    /// `gap ≥ −GAP_TOL`, and `gap ≤ GAP_TOL` when the profile is round.
    pub consistent: bool,
}

/// Compares `λ₁` against `k²` on a profile satisfying `Ric ≥ (n−1)k²`.
pub fn rigidity_experiment(profile: &WarpedProfile, k: f64, grid: usize) -> Result<RigidityReport> {
    let check = profile.ricci_lower_bound_check(k, grid.max(16))?;
    if !check.passed {
        return Err(Error::RicciHypothesis {
            margin: check.margin,
        });
    }
    let prob = RadialProblem::new(profile.clone(), grid, k)?;
    let lambda1 = prob.assemble()?.eigenvalue(0)?;
    let gap = lambda1 - k * k;
    let round_flag = matches!(profile.kind(), ProfileKind::Round { k: k0 } if (k0 - k).abs() <= 1e-9);
    let consistent = gap >= -GAP_TOL && (!round_flag || gap <= GAP_TOL);
    Ok(RigidityReport {
        k,
        ric_margin: check.margin,
        lambda1,
        gap,
        round_flag,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn round(n: usize, k: f64, grid: usize) -> RadialProblem {
        RadialProblem::new(WarpedProfile::round(n, k).unwrap(), grid, k).unwrap()
    }

    fn correlation(a: &[f64], b: &[f64], w: &[f64]) -> f64 {
        let ip = |x: &[f64], y: &[f64]| x.iter().zip(y).zip(w).map(|((p, q), r)| p * q * r).sum::<f64>();
        ip(a, b) / (ip(a, a) * ip(b, b)).sqrt()
    }

    #[test]
    fn stiffness_reproduces_sin_at_second_order() {
        // max |M⁻¹K sin − sin| over the trimmed interior
        let defect = |grid: usize| {
            let prob = round(2, 1.0, grid);
            let pencil = prob.assemble().unwrap();
            let s = prob.nodes();
            let h: Vec<f64> = s.iter().map(|x| x.sin()).collect();
            let kh = pencil.apply_stiffness(&h);
            s.iter()
                .enumerate()
                .filter(|(_, &x)| x > INTERIOR_TRIM * PI && x < (1.0 - INTERIOR_TRIM) * PI)
                .map(|(j, _)| (kh[j] / pencil.mass()[j] - h[j]).abs())
                .fold(0.0, f64::max)
        };
        let ds = PI / 401.0;
        let coarse = defect(400);
        assert!(coarse < 10.0 * ds * ds, "{coarse}");
        let ratio = coarse / defect(801);
        assert!((ratio - 4.0).abs() < 0.5, "{ratio}");
    }

    #[test]
    fn frozen_coefficients_give_dirichlet_laplacian() {
        let l = 2.0;
        let pencil = assemble_with(l, 500, |_| (1.0, 0.0)).unwrap();
        for m in 1..=4 {
            let exact = (m as f64 * PI / l).powi(2);
            assert!((pencil.eigenvalue(m - 1).unwrap() - exact).abs() < 1e-4 * exact);
        }
    }

    #[test]
    fn flux_form_matches_direct_form() {
        // h'' - (n-1)H h' - |B|² h = -λ h in the direct form; compare the two
        // operators on a smooth test function vanishing at both poles
        for n in [2usize, 3, 4] {
            let profile = WarpedProfile::perturbed(n, 1.0, 0.07).unwrap();
            let prob = RadialProblem::new(profile.clone(), 1000, 1.0).unwrap();
            let pencil = prob.assemble().unwrap();
            let s = prob.nodes();
            let g = |x: f64| {
                let (s1, s2) = (x.sin(), (2.0 * x).sin());
                (s1 + 0.15 * s2, x.cos() + 0.3 * (2.0 * x).cos(), -s1 - 0.6 * s2)
            };
            let h: Vec<f64> = s.iter().map(|&x| g(x).0).collect();
            let kh = pencil.apply_stiffness(&h);
            for (j, &x) in s.iter().enumerate() {
                if x < 0.3 || x > PI - 0.3 {
                    continue;
                }
                let (v, d1, d2) = g(x);
                let mc = profile.mean_curvature(x).unwrap();
                let b2 = profile.second_fundamental_norm_sq(x).unwrap();
                let direct = -(d2 - (n - 1) as f64 * mc * d1 - b2 * v);
                let flux = kh[j] / pencil.mass()[j];
                assert!((direct - flux).abs() < 1e-4, "n={n} s={x}: {direct} vs {flux}");
            }
        }
    }

    #[test]
    fn round_ground_state() {
        let prob = round(2, 1.0, 2000);
        let res = solve_smallest(&prob, 3).unwrap();
        assert!((res.eigenvalues[0] - 1.0).abs() < 1e-4);
        let sin: Vec<f64> = res.s.iter().map(|x| x.sin()).collect();
        let w = prob.assemble().unwrap().mass().to_vec();
        assert!(correlation(&res.eigenfunctions[0], &sin, &w) > 0.9999);
        assert!(res.eigenfunctions[0][0] > 0.0);
        for d in &res.diagnostics {
            assert_abs_diff_eq!(d.weighted_norm, 1.0, epsilon = 1e-10);
        }
        assert!(res.eigenvalues[1] > res.eigenvalues[0]);
        let prob = round(3, 2.0, 2000);
        assert!((solve_smallest(&prob, 1).unwrap().eigenvalues[0] - 4.0).abs() < 5e-4);
    }

    #[test]
    fn weighted_orthogonality() {
        let prob = RadialProblem::new(WarpedProfile::perturbed(3, 1.0, 0.05).unwrap(), 800, 1.0).unwrap();
        let pencil = prob.assemble().unwrap();
        let res = solve_smallest(&prob, 4).unwrap();
        for i in 0..4 {
            for j in 0..i {
                assert!(pencil.m_inner(&res.eigenfunctions[i], &res.eigenfunctions[j]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn second_order_convergence() {
        for n in [2usize, 3, 4, 5] {
            for k in [1.0, 2.0] {
                let err = |grid| {
                    (round(n, k, grid).assemble().unwrap().eigenvalue(0).unwrap() - k * k).abs()
                };
                let ratio = err(1000) / err(2000);
                assert!((ratio - 4.0).abs() < 0.5, "n={n} k={k} ratio={ratio}");
            }
        }
    }

    #[test]
    fn refinement_is_monotone() {
        let values: Vec<f64> = [250, 500, 1000, 2000]
            .iter()
            .map(|&g| round(3, 1.0, g).assemble().unwrap().eigenvalue(0).unwrap())
            .collect();
        let diffs: Vec<f64> = values.windows(2).map(|w| (w[0] - w[1]).abs()).collect();
        assert!(diffs.windows(2).all(|d| d[1] < d[0]));
    }

    #[test]
    fn quotient_matches_eigenvalue_and_bounds_trials() {
        let profile = WarpedProfile::round(2, 1.0).unwrap();
        let prob = round(2, 1.0, 2000);
        let res = solve_smallest(&prob, 1).unwrap();
        let q = radial_energy(&res.eigenfunctions[0], &profile).unwrap();
        assert!((q - res.eigenvalues[0]).abs() < 1e-8);
        let sin: Vec<f64> = res.s.iter().map(|x| x.sin()).collect();
        assert!((radial_energy(&sin, &profile).unwrap() - 1.0).abs() < 1e-5);
        let sin2: Vec<f64> = res.s.iter().map(|x| (2.0 * x).sin()).collect();
        let q2 = radial_energy(&sin2, &profile).unwrap();
        assert!(q2 > 1.0 && q2 >= res.eigenvalues[0] - 1e-8);
        assert!(matches!(radial_energy(&vec![0.0; 100], &profile), Err(Error::ZeroNorm)));
    }

    #[test]
    fn reilly_equality_on_round_spheres() {
        for n in [2usize, 3, 4, 5] {
            let prob = round(n, 1.0, 2000);
            let res = solve_smallest(&prob, 1).unwrap();
            let r = res.diagnostics[0].reilly;
            assert!(r.max_phi_defect < 1e-3, "n={n}: {}", r.max_phi_defect);
            assert!(r.max_laplace_defect < 1e-3, "n={n}: {}", r.max_laplace_defect);
            assert!(r.min_defect >= -1e-6);
        }
    }

    #[test]
    fn reilly_defect_is_positive_off_the_round_case() {
        let profile = WarpedProfile::perturbed(2, 1.0, 0.1).unwrap();
        let prob = RadialProblem::new(profile.clone(), 2000, 1.0).unwrap();
        let res = solve_smallest(&prob, 1).unwrap();
        let rd = reilly_defect(&res.eigenfunctions[0], &profile, 1.0).unwrap();
        assert!(rd.weighted_integral > 1e-6);
        let l = profile.length();
        for j in rd.interior() {
            assert!(rd.defect[j] >= -1e-6);
            // D = (n-1)(h' + Hh)² vanishes at the symmetry point only
            if (rd.s[j] - 0.5 * l).abs() > 0.05 * l {
                assert!(rd.defect[j] > 0.0, "s = {}", rd.s[j]);
            }
        }
    }

    #[test]
    fn rigidity_round_and_perturbed() {
        let r = rigidity_experiment(&WarpedProfile::round(2, 1.0).unwrap(), 1.0, 2000).unwrap();
        assert!(r.round_flag && r.consistent && r.gap.abs() <= GAP_TOL);
        let p = WarpedProfile::perturbed(2, 1.0, 0.05).unwrap();
        let k = p.largest_admissible_k(2000).unwrap();
        let r = rigidity_experiment(&p, k, 2000).unwrap();
        assert!(!r.round_flag && r.consistent && r.gap > GAP_TOL, "{r:?}");
        assert!(matches!(rigidity_experiment(&p, 1.0, 2000), Err(Error::RicciHypothesis { .. })));
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = WarpedProfile::round(2, 1.0).unwrap();
        assert!(RadialProblem::new(p.clone(), 10, 1.0).is_err());
        assert!(RadialProblem::new(p.clone(), 100, 0.0).is_err());
        assert!(solve_smallest(&RadialProblem::new(p, 100, 1.0).unwrap(), 11).is_err());
    }
}
