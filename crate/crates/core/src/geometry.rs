//! Manifold models: the round sphere `S^n(1/k) ⊂ R^{n+1}` and warped products
//! `ds² + f(s)² g_{S^{n-1}}` on `[0, l]`, with the curvature data of their
//! geodesic spheres.
//!
//! Sign convention: mean curvature is taken with respect to the unit normal
//! pointing to the center, so `H(s) = -f'(s)/f(s)`. On the round profile this
//! gives `Δs = -(n-1)H = (n-1) k cot(ks)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vector};

const ON_SPHERE_TOL: f64 = 1e-12;
const TANGENCY_TOL: f64 = 1e-10;
const CLOSURE_TOL: f64 = 1e-9;
/// Closure tolerance for tabulated profiles, whose derivatives come from a spline.
const TABULATED_CLOSURE_TOL: f64 = 1e-6;
const RICCI_SLACK: f64 = 1e-9;

/// Round sphere of radius `1/k` in `R^{n+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereModel {
    n: usize,
    k: f64,
}

impl SphereModel {
    pub fn new(n: usize, k: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("n", format!("need n >= 2, got {n}")));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::invalid("k", format!("need k > 0, got {k}")));
        }
        Ok(SphereModel { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Ambient dimension `n + 1`.
    pub fn ambient_dim(&self) -> usize {
        self.n + 1
    }

    pub fn radius(&self) -> f64 {
        1.0 / self.k
    }

    /// `Vol(S^n(1/k))`.
    pub fn volume(&self) -> f64 {
        unit_sphere_volume(self.n) * self.radius().powi(self.n as i32)
    }

    pub fn check_point(&self, p: &Vector) -> Result<()> {
        if p.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: p.len(),
            });
        }
        let r = self.radius();
        let norm = p.norm();
        if !((norm - r).abs() <= ON_SPHERE_TOL * r) {
            return Err(Error::OffSphere { norm, radius: r });
        }
        Ok(())
    }

    /// `w - k²⟨w,p⟩p`, the tangential part of an ambient vector.
    pub fn tangent_project(&self, p: &Vector, w: &Vector) -> Result<Vector> {
        self.check_point(p)?;
        if w.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: p.len(),
                got: w.len(),
            });
        }
        Ok(self.project_unchecked(p, w))
    }

    pub(crate) fn project_unchecked(&self, p: &Vector, w: &Vector) -> Vector {
        w - p * (self.k * self.k * w.dot(p))
    }

    /// Orthonormal basis of `T_p S^n` by Gram–Schmidt on the projected
    /// standard basis, in fixed coordinate order.
    pub fn orthonormal_frame(&self, p: &Vector) -> Result<Vec<Vector>> {
        self.check_point(p)?;
        Ok(self.frame_unchecked(p))
    }

    pub(crate) fn frame_unchecked(&self, p: &Vector) -> Vec<Vector> {
        let dim = self.ambient_dim();
        let unit_normal = p * self.k;
        let mut frame: Vec<Vector> = Vec::with_capacity(self.n);
        for i in 0..dim {
            if frame.len() == self.n {
                break;
            }
            let mut v = Vector::zeros(dim);
            v[i] = 1.0;
            // two passes of modified Gram–Schmidt against normal + frame
            for _ in 0..2 {
                let c = v.dot(&unit_normal);
                v.axpy(-c, &unit_normal, 1.0);
                for e in &frame {
                    let c = v.dot(e);
                    v.axpy(-c, e, 1.0);
                }
            }
            let norm = v.norm();
            if norm > 1e-6 {
                frame.push(v / norm);
            }
        }
        frame
    }
}

/// Volume of the unit sphere `S^n ⊂ R^{n+1}`.
pub fn unit_sphere_volume(n: usize) -> f64 {
    // V_0 = 2, V_1 = 2π, V_n = 2π/(n-1) V_{n-2}
    let (mut v, start) = if n % 2 == 0 { (2.0, 0) } else { (2.0 * PI, 1) };
    let mut m = start;
    while m < n {
        m += 2;
        v *= 2.0 * PI / (m as f64 - 1.0);
    }
    v
}

/// A tangent vector with its base point.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub point: Vector,
    pub vec: Vector,
}

impl TangentVector {
    pub fn new(point: Vector, vec: Vector) -> Result<Self> {
        let scale = vec.norm() * point.norm();
        if vec.dot(&point).abs() > TANGENCY_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Domain(format!(
                "vector not tangent: <v,p> = {:e}",
                vec.dot(&point)
            )));
        }
        Ok(TangentVector { point, vec })
    }

    pub(crate) fn unchecked(point: Vector, vec: Vector) -> Self {
        TangentVector { point, vec }
    }
}

/// Warping function of a rotationally symmetric metric.
#[derive(Clone, Debug, PartialEq)]
pub enum ProfileKind {
    /// `f(s) = sin(ks)/k` on `[0, π/k]`: the round sphere of radius `1/k`.
    Round { k: f64 },
    /// `f(s) = sin(ks)/k + ε sin³(ks)` on `[0, π/k]`.
    Perturbed { k: f64, eps: f64 },
    /// Samples `(s_i, f_i)` with natural cubic-spline interpolation.
    Tabulated(CubicSpline),
}

/// `f, f', f''` at one abscissa.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileJet {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
}

/// A compact warped product `M = [0,l] × S^{n-1}` with metric
/// `ds² + f(s)² g_{S^{n-1}}` closing smoothly at both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct WarpedProfile {
    n: usize,
    kind: ProfileKind,
}

impl WarpedProfile {
    pub fn round(n: usize, k: f64) -> Result<Self> {
        Self::new(n, ProfileKind::Round { k })
    }

    pub fn perturbed(n: usize, k: f64, eps: f64) -> Result<Self> {
        Self::new(n, ProfileKind::Perturbed { k, eps })
    }

    pub fn tabulated(n: usize, s: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        Self::new(n, ProfileKind::Tabulated(CubicSpline::natural(s, f)?))
    }

    pub fn new(n: usize, kind: ProfileKind) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("n", format!("need n >= 2, got {n}")));
        }
        match &kind {
            ProfileKind::Round { k } | ProfileKind::Perturbed { k, .. } => {
                if !(*k > 0.0 && k.is_finite()) {
                    return Err(Error::invalid("k", format!("need k > 0, got {k}")));
                }
            }
            ProfileKind::Tabulated(sp) => {
                if sp.start() != 0.0 {
                    return Err(Error::invalid("profile", "tabulated s must start at 0"));
                }
            }
        }
        if let ProfileKind::Perturbed { eps, .. } = &kind {
            if !eps.is_finite() {
                return Err(Error::invalid("eps", "must be finite"));
            }
        }
        let profile = WarpedProfile { n, kind };
        profile.validate()?;
        Ok(profile)
    }

    fn validate(&self) -> Result<()> {
        let l = self.length();
        let tol = match self.kind {
            ProfileKind::Tabulated(_) => TABULATED_CLOSURE_TOL,
            _ => CLOSURE_TOL,
        };
        let start = self.jet_unchecked(0.0);
        let end = self.jet_unchecked(l);
        if start.f.abs() > tol || end.f.abs() > tol {
            return Err(Error::Domain(format!(
                "profile must vanish at both ends: f(0) = {:e}, f(l) = {:e}",
                start.f, end.f
            )));
        }
        if (start.df - 1.0).abs() > tol || (end.df + 1.0).abs() > tol {
            return Err(Error::Domain(format!(
                "profile does not close smoothly: f'(0) = {}, f'(l) = {}",
                start.df, end.df
            )));
        }
        let probes = 1024;
        for j in 1..probes {
            let s = l * j as f64 / probes as f64;
            if self.jet_unchecked(s).f <= 0.0 {
                return Err(Error::Domain(format!("profile not positive at s = {s}")));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    /// Diameter `l` (arc length between the two poles).
    pub fn length(&self) -> f64 {
        match &self.kind {
            ProfileKind::Round { k } | ProfileKind::Perturbed { k, .. } => PI / k,
            ProfileKind::Tabulated(sp) => sp.end(),
        }
    }

    /// `Some(k)` when this is exactly the round profile of curvature `k²`.
    pub fn round_k(&self) -> Option<f64> {
        match self.kind {
            ProfileKind::Round { k } => Some(k),
            ProfileKind::Perturbed { k, eps } if eps == 0.0 => Some(k),
            _ => None,
        }
    }

    /// `f, f', f''` at `s ∈ [0, l]`.
    pub fn jet(&self, s: f64) -> Result<ProfileJet> {
        if !(0.0..=self.length()).contains(&s) {
            return Err(Error::Domain(format!(
                "s = {s} outside [0, {}]",
                self.length()
            )));
        }
        Ok(self.jet_unchecked(s))
    }

    pub(crate) fn jet_unchecked(&self, s: f64) -> ProfileJet {
        match &self.kind {
            ProfileKind::Round { k } => {
                let (sn, cs) = (k * s).sin_cos();
                ProfileJet {
                    f: sn / k,
                    df: cs,
                    d2f: -k * sn,
                }
            }
            ProfileKind::Perturbed { k, eps } => {
                let (sn, cs) = (k * s).sin_cos();
                ProfileJet {
                    f: sn / k + eps * sn.powi(3),
                    df: cs + 3.0 * eps * k * sn * sn * cs,
                    d2f: -k * sn + eps * k * k * (6.0 * sn * cs * cs - 3.0 * sn.powi(3)),
                }
            }
            ProfileKind::Tabulated(sp) => sp.jet(s),
        }
    }

    fn interior_jet(&self, s: f64) -> Result<ProfileJet> {
        let l = self.length();
        if !(s > 0.0 && s < l) {
            return Err(Error::Domain(format!("s = {s} outside the open interval (0, {l})")));
        }
        Ok(self.jet_unchecked(s))
    }

    /// `H(s) = -f'/f`, normal pointing to the center.
    pub fn mean_curvature(&self, s: f64) -> Result<f64> {
        let j = self.interior_jet(s)?;
        Ok(-j.df / j.f)
    }

    /// `|B|²(s) = (n-1)(f'/f)²`; geodesic spheres are umbilic.
    pub fn second_fundamental_norm_sq(&self, s: f64) -> Result<f64> {
        let j = self.interior_jet(s)?;
        let ratio = j.df / j.f;
        Ok((self.n - 1) as f64 * ratio * ratio)
    }

    /// `H² - |B|²/(n-1)`. Nonpositive for any hypersurface; zero when umbilic.
    pub fn umbilicity_discriminant(&self, s: f64) -> Result<f64> {
        let h = self.mean_curvature(s)?;
        let b2 = self.second_fundamental_norm_sq(s)?;
        Ok(h * h - b2 / (self.n - 1) as f64)
    }

    /// Ricci curvature in the radial direction and along the geodesic spheres.
    pub fn ricci(&self, s: f64) -> Result<RicciComponents> {
        let j = self.interior_jet(s)?;
        let n = self.n as f64;
        Ok(RicciComponents {
            radial: -(n - 1.0) * j.d2f / j.f,
            tangential: -j.d2f / j.f + (n - 2.0) * (1.0 - j.df * j.df) / (j.f * j.f),
        })
    }

    /// Checks `Ric ≥ (n-1)k²` on the interior grid `s_j = j l/(grid+1)`.
    pub fn ricci_lower_bound_check(&self, k: f64, grid: usize) -> Result<RicciCheck> {
        if grid < 16 {
            return Err(Error::invalid("grid", format!("need grid >= 16, got {grid}")));
        }
        let min_ricci = self.min_ricci(grid)?;
        let margin = min_ricci - (self.n - 1) as f64 * k * k;
        Ok(RicciCheck {
            passed: margin >= -RICCI_SLACK,
            margin,
            min_ricci,
        })
    }

    /// Smallest Ricci eigenvalue over the interior grid.
    pub fn min_ricci(&self, grid: usize) -> Result<f64> {
        let l = self.length();
        let mut min = f64::INFINITY;
        for j in 1..=grid {
            let ric = self.ricci(j as f64 * l / (grid + 1) as f64)?;
            min = min.min(ric.radial).min(ric.tangential);
        }
        Ok(min)
    }

    /// Largest `k` for which `Ric ≥ (n-1)k²` holds on the grid (0 if Ricci is
    /// somewhere negative).
    pub fn largest_admissible_k(&self, grid: usize) -> Result<f64> {
        let min = self.min_ricci(grid)?;
        Ok((min.max(0.0) / (self.n - 1) as f64).sqrt())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RicciComponents {
    pub radial: f64,
    pub tangential: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RicciCheck {
    pub passed: bool,
    pub margin: f64,
    pub min_ricci: f64,
}

/// Natural cubic spline through strictly increasing abscissae.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicSpline {
    s: Vec<f64>,
    f: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn natural(s: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        let n = s.len();
        if n != f.len() {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: f.len(),
            });
        }
        if n < 4 {
            return Err(Error::invalid("profile", "need at least 4 knots"));
        }
        if s.iter().chain(&f).any(|v| !v.is_finite()) {
            return Err(Error::invalid("profile", "non-finite sample"));
        }
        if s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("profile", "abscissae must be strictly increasing"));
        }
        // tridiagonal system for interior second derivatives (Thomas algorithm)
        let mut m = vec![0.0; n];
        let inner = n - 2;
        let mut diag = vec![0.0; inner];
        let mut upper = vec![0.0; inner];
        let mut rhs = vec![0.0; inner];
        for i in 1..n - 1 {
            let h0 = s[i] - s[i - 1];
            let h1 = s[i + 1] - s[i];
            diag[i - 1] = 2.0 * (h0 + h1);
            upper[i - 1] = h1;
            rhs[i - 1] = 6.0 * ((f[i + 1] - f[i]) / h1 - (f[i] - f[i - 1]) / h0);
        }
        for i in 1..inner {
            let lower = s[i + 1] - s[i];
            let w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for i in (0..inner).rev() {
            let next = if i + 1 < inner { m[i + 2] } else { 0.0 };
            m[i + 1] = (rhs[i] - upper[i] * next) / diag[i];
        }
        Ok(CubicSpline { s, f, m })
    }

    pub fn start(&self) -> f64 {
        self.s[0]
    }

    pub fn end(&self) -> f64 {
        *self.s.last().unwrap()
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.s, &self.f)
    }

    pub fn jet(&self, x: f64) -> ProfileJet {
        let n = self.s.len();
        let i = match self.s.partition_point(|&v| v <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.s[i + 1] - self.s[i];
        let a = (self.s[i + 1] - x) / h;
        let b = (x - self.s[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let (f0, f1) = (self.f[i], self.f[i + 1]);
        ProfileJet {
            f: a * f0 + b * f1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0,
            df: (f1 - f0) / h - (3.0 * a * a - 1.0) * h * m0 / 6.0 + (3.0 * b * b - 1.0) * h * m1 / 6.0,
            d2f: a * m0 + b * m1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::dvector;

    #[test]
    fn projection_examples() {
        let s2 = SphereModel::new(2, 1.0).unwrap();
        let p = dvector![0.0, 0.0, 1.0];
        assert_eq!(s2.tangent_project(&p, &dvector![0.0, 0.0, 5.0]).unwrap(), dvector![0.0, 0.0, 0.0]);
        assert_eq!(s2.tangent_project(&p, &dvector![3.0, 0.0, 0.0]).unwrap(), dvector![3.0, 0.0, 0.0]);
        let s2k2 = SphereModel::new(2, 2.0).unwrap();
        let q = dvector![0.0, 0.0, 0.5];
        let out = s2k2.tangent_project(&q, &dvector![1.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!((out - dvector![1.0, 0.0, 0.0]).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn off_sphere_is_rejected() {
        let s2 = SphereModel::new(2, 1.0).unwrap();
        let err = s2.tangent_project(&dvector![0.0, 0.0, 1.1], &dvector![1.0, 0.0, 0.0]);
        assert!(matches!(err, Err(Error::OffSphere { .. })));
        assert!(SphereModel::new(1, 1.0).is_err());
        assert!(SphereModel::new(2, 0.0).is_err());
    }

    #[test]
    fn projector_is_idempotent_and_symmetric() {
        let m = SphereModel::new(3, 1.7).unwrap();
        let mut rng = crate::rng::seeded(1);
        let p = crate::rng::sphere_point(4, m.radius(), &mut rng);
        let proj = crate::Matrix::from_fn(4, 4, |i, j| {
            let mut e = Vector::zeros(4);
            e[j] = 1.0;
            m.tangent_project(&p, &e).unwrap()[i]
        });
        assert!((&proj * &proj - &proj).abs().max() < 1e-12);
        assert!((proj.transpose() - &proj).abs().max() < 1e-12);
    }

    #[test]
    fn frame_at_north_pole() {
        let s2 = SphereModel::new(2, 1.0).unwrap();
        let frame = s2.orthonormal_frame(&dvector![0.0, 0.0, 1.0]).unwrap();
        assert_eq!(frame, vec![dvector![1.0, 0.0, 0.0], dvector![0.0, 1.0, 0.0]]);
    }

    #[test]
    fn frames_are_orthonormal_and_tangent() {
        let mut rng = crate::rng::seeded(2);
        for (n, k) in [(2, 1.0), (3, 2.0), (4, 0.5)] {
            let m = SphereModel::new(n, k).unwrap();
            for _ in 0..50 {
                let p = crate::rng::sphere_point(n + 1, m.radius(), &mut rng);
                let frame = m.orthonormal_frame(&p).unwrap();
                assert_eq!(frame.len(), n);
                for (i, a) in frame.iter().enumerate() {
                    assert!(a.dot(&p).abs() < 1e-12);
                    for (j, b) in frame.iter().enumerate() {
                        let expect = if i == j { 1.0 } else { 0.0 };
                        assert!((a.dot(b) - expect).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn sphere_volumes() {
        assert_abs_diff_eq!(unit_sphere_volume(2), 4.0 * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(unit_sphere_volume(3), 2.0 * PI * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(unit_sphere_volume(4), 8.0 * PI * PI / 3.0, epsilon = 1e-13);
        let m = SphereModel::new(3, 2.0).unwrap();
        assert_abs_diff_eq!(m.volume(), 2.0 * PI * PI / 8.0, epsilon = 1e-14);
    }

    #[test]
    fn curvature_examples() {
        let r1 = WarpedProfile::round(2, 1.0).unwrap();
        assert_abs_diff_eq!(r1.mean_curvature(PI / 2.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r1.mean_curvature(PI / 4.0).unwrap(), -1.0, epsilon = 1e-14);
        let r2 = WarpedProfile::round(2, 2.0).unwrap();
        assert_abs_diff_eq!(r2.mean_curvature(PI / 8.0).unwrap(), -2.0, epsilon = 1e-14);

        let r3 = WarpedProfile::round(3, 1.0).unwrap();
        assert_abs_diff_eq!(r3.second_fundamental_norm_sq(PI / 4.0).unwrap(), 2.0, epsilon = 1e-14);
        for n in 2..6 {
            let r = WarpedProfile::round(n, 1.0).unwrap();
            assert_abs_diff_eq!(r.second_fundamental_norm_sq(PI / 2.0).unwrap(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn curvature_needs_open_interval() {
        let r = WarpedProfile::round(2, 1.0).unwrap();
        assert!(matches!(r.mean_curvature(0.0), Err(Error::Domain(_))));
        assert!(matches!(r.ricci(PI), Err(Error::Domain(_))));
        assert!(r.second_fundamental_norm_sq(-0.1).is_err());
    }

    #[test]
    fn umbilicity_holds_on_every_profile() {
        let mut rng = crate::rng::seeded(9);
        use rand::Rng;
        for profile in [
            WarpedProfile::round(3, 1.3).unwrap(),
            WarpedProfile::perturbed(4, 1.0, 0.07).unwrap(),
            WarpedProfile::perturbed(2, 2.0, 0.02).unwrap(),
        ] {
            let l = profile.length();
            for _ in 0..100 {
                let s = rng.random_range(1e-3..l - 1e-3);
                let h = profile.mean_curvature(s).unwrap();
                let b2 = profile.second_fundamental_norm_sq(s).unwrap();
                let n = profile.n() as f64;
                assert!((b2 - (n - 1.0) * h * h).abs() <= 1e-12 * b2.max(1.0));
                assert!(profile.umbilicity_discriminant(s).unwrap() <= 1e-12 * b2.max(1.0));
            }
        }
    }

    #[test]
    fn round_profiles_are_consistent() {
        for (n, k) in [(2, 1.0), (3, 1.0), (3, 2.0), (5, 0.7)] {
            let r = WarpedProfile::round(n, k).unwrap();
            let l = r.length();
            assert_abs_diff_eq!(l, PI / k, epsilon = 1e-15);
            for j in 1..=1000 {
                let s = l * j as f64 / 1001.0;
                let h = r.mean_curvature(s).unwrap();
                assert!((h + k / (k * s).tan()).abs() < 1e-10 * (1.0 + h.abs()));
                let ric = r.ricci(s).unwrap();
                let expect = (n - 1) as f64 * k * k;
                assert!((ric.radial - expect).abs() < 1e-10, "{n} {k} {s} {ric:?}");
                assert!((ric.tangential - expect).abs() < 1e-10, "{n} {k} {s} {ric:?}");
            }
        }
    }

    #[test]
    fn ricci_round_examples() {
        let r = WarpedProfile::round(3, 1.0).unwrap();
        let ric = r.ricci(0.7).unwrap();
        assert_abs_diff_eq!(ric.radial, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ric.tangential, 2.0, epsilon = 1e-12);
        let r = WarpedProfile::round(2, 2.0).unwrap();
        let ric = r.ricci(0.3).unwrap();
        assert_abs_diff_eq!(ric.radial, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ric.tangential, 4.0, epsilon = 1e-12);
    }

    /// Ricci components from second differences of `f` alone.
    fn fd_ricci(f: impl Fn(f64) -> f64, n: usize, s: f64) -> (f64, f64) {
        let h = 1e-5;
        let f0 = f(s);
        let d1 = (f(s + h) - f(s - h)) / (2.0 * h);
        let d2 = (f(s + h) - 2.0 * f0 + f(s - h)) / (h * h);
        let n = n as f64;
        (-(n - 1.0) * d2 / f0, -d2 / f0 + (n - 2.0) * (1.0 - d1 * d1) / (f0 * f0))
    }

    #[test]
    fn perturbed_ricci_matches_finite_differences() {
        let eps = 0.05;
        let f = |s: f64| s.sin() + eps * s.sin().powi(3);
        for n in [2, 3, 4] {
            let p = WarpedProfile::perturbed(n, 1.0, eps).unwrap();
            for s in [PI / 2.0, 0.4, 2.5] {
                let (rad, tan) = fd_ricci(f, n, s);
                let ric = p.ricci(s).unwrap();
                assert!((ric.radial - rad).abs() < 1e-4, "{n} {s}");
                assert!((ric.tangential - tan).abs() < 1e-4, "{n} {s}");
            }
        }
    }

    #[test]
    fn ricci_gate() {
        let r = WarpedProfile::round(3, 1.0).unwrap();
        let ok = r.ricci_lower_bound_check(1.0, 64).unwrap();
        assert!(ok.passed);
        assert!(ok.margin.abs() < 1e-9);
        assert!(!r.ricci_lower_bound_check(1.1, 64).unwrap().passed);
        assert!(r.ricci_lower_bound_check(1.0, 8).is_err());
    }

    #[test]
    fn perturbed_gate_matches_fd_oracle() {
        let eps = 0.05;
        let f = |s: f64| s.sin() + eps * s.sin().powi(3);
        for n in [2, 3] {
            let p = WarpedProfile::perturbed(n, 1.0, eps).unwrap();
            let grid = 400;
            let mut fd_min = f64::INFINITY;
            for j in 1..=grid {
                let s = PI * j as f64 / (grid + 1) as f64;
                let (a, b) = fd_ricci(f, n, s);
                fd_min = fd_min.min(a).min(b);
            }
            let k_fd = (fd_min / (n - 1) as f64).sqrt();
            // slightly inside / outside the oracle's threshold
            assert!(p.ricci_lower_bound_check(k_fd - 1e-3, grid).unwrap().passed);
            assert!(!p.ricci_lower_bound_check(k_fd + 1e-3, grid).unwrap().passed);
        }
    }

    #[test]
    fn invalid_profiles_are_rejected() {
        // eps < -1 makes f = sin(s)(1 + eps sin²s) negative inside (0, π)
        assert!(WarpedProfile::perturbed(2, 1.0, -1.5).is_err());
        // f(s) = sin(s)/2 does not close smoothly
        let s: Vec<f64> = (0..100).map(|i| PI * i as f64 / 99.0).collect();
        let f: Vec<f64> = s.iter().map(|x| x.sin() / 2.0).collect();
        assert!(WarpedProfile::tabulated(2, s, f).is_err());
    }

    #[test]
    fn tabulated_round_profile_is_accurate() {
        let count = 512;
        let s: Vec<f64> = (0..count).map(|i| PI * i as f64 / (count - 1) as f64).collect();
        let f: Vec<f64> = s.iter().map(|x| x.sin()).collect();
        let tab = WarpedProfile::tabulated(3, s, f).unwrap();
        assert_abs_diff_eq!(tab.length(), PI, epsilon = 1e-15);
        let mut max_df: f64 = 0.0;
        let mut max_d2f: f64 = 0.0;
        for j in 0..=4000 {
            let x = PI * j as f64 / 4000.0;
            let jet = tab.jet(x).unwrap();
            max_df = max_df.max((jet.df - x.cos()).abs());
            max_d2f = max_d2f.max((jet.d2f + x.sin()).abs());
        }
        assert!(max_df <= 1e-6, "{max_df}");
        assert!(max_d2f <= 1e-4, "{max_d2f}");
    }
}
