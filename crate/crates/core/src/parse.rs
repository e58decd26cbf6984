//! Text formats accepted from the command line and from files.
//!
//! Each spec type has a canonical `Display` form that `FromStr` accepts
//! back, so configurations round-trip.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::fields::{AmbientPolyField, HopfAxis, MAX_DEGREE};
use crate::geometry::{SphereModel, WarpedProfile};
use crate::poly::Poly;
use crate::quadrature::{QuadKind, QuadratureRule};
use crate::symmetrize::GroupSpec;
use crate::{Error, Result, Vector};

/// Smallest tabulated profile accepted.
pub const MIN_PROFILE_ROWS: usize = 64;
/// Upper bound on coordinate indices, counts and similar integers.
const MAX_INDEX: usize = 64;
const MAX_COUNT: usize = 100_000_000;

fn perr(reason: impl Into<String>) -> Error {
    Error::parse(1, reason)
}

fn number(tok: &str) -> Result<f64> {
    let v: f64 = tok.trim().parse().map_err(|_| perr(format!("bad number `{tok}`")))?;
    if !v.is_finite() {
        return Err(perr(format!("non-finite number `{tok}`")));
    }
    Ok(v)
}

fn integer(tok: &str, max: usize) -> Result<usize> {
    let v: usize = tok.trim().parse().map_err(|_| perr(format!("bad integer `{tok}`")))?;
    if v > max {
        return Err(perr(format!("integer {v} exceeds {max}")));
    }
    Ok(v)
}

/// 1-based coordinate index in the text, 0-based in the result.
fn coord(tok: &str) -> Result<usize> {
    match integer(tok, MAX_INDEX)? {
        0 => Err(perr("coordinates are numbered from 1")),
        c => Ok(c - 1),
    }
}

fn vector(tok: &str) -> Result<Vec<f64>> {
    let v = tok.split(',').map(number).collect::<Result<Vec<_>>>()?;
    if v.len() > MAX_INDEX {
        return Err(perr("vector too long"));
    }
    Ok(v)
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

/// `key=value` pairs separated by commas, each key allowed once.
fn key_values<'a>(tok: &'a str, allowed: &[&str]) -> Result<Vec<(&'a str, &'a str)>> {
    let mut out: Vec<(&str, &str)> = Vec::new();
    for part in tok.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| perr(format!("expected key=value, got `{part}`")))?;
        let k = k.trim();
        if !allowed.contains(&k) {
            return Err(perr(format!("unknown key `{k}`")));
        }
        if out.iter().any(|(seen, _)| *seen == k) {
            return Err(perr(format!("duplicate key `{k}`")));
        }
        out.push((k, v.trim()));
    }
    Ok(out)
}

fn lookup<'a>(pairs: &[(&str, &'a str)], key: &str) -> Option<&'a str> {
    pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

// ---------------------------------------------------------------- fields

/// `proj:0,0,1`, `killing:xy` (or `killing:1,2`), `hopf:i`, `poly:PATH`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FieldSpec {
    Projection(Vec<f64>),
    /// Rotation in the plane of two 0-based coordinates.
    Killing(usize, usize),
    Hopf(HopfAxis),
    Poly(PathBuf),
}

const AXES: [char; 4] = ['x', 'y', 'z', 'w'];

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = s.split_once(':').ok_or_else(|| perr("expected kind:args"))?;
        match head.trim() {
            "proj" => Ok(FieldSpec::Projection(vector(rest)?)),
            "killing" => {
                let rest = rest.trim();
                let (i, j) = if let Some((a, b)) = rest.split_once(',') {
                    (coord(a)?, coord(b)?)
                } else {
                    let chars: Vec<char> = rest.chars().collect();
                    if chars.len() != 2 {
                        return Err(perr("killing plane needs two axes, e.g. `xy` or `1,2`"));
                    }
                    let idx = |c: char| {
                        AXES.iter()
                            .position(|&a| a == c)
                            .ok_or_else(|| perr(format!("unknown axis `{c}`")))
                    };
                    (idx(chars[0])?, idx(chars[1])?)
                };
                if i == j {
                    return Err(perr("killing plane needs two distinct axes"));
                }
                Ok(FieldSpec::Killing(i, j))
            }
            "hopf" => match rest.trim() {
                "i" => Ok(FieldSpec::Hopf(HopfAxis::I)),
                "j" => Ok(FieldSpec::Hopf(HopfAxis::J)),
                "k" => Ok(FieldSpec::Hopf(HopfAxis::K)),
                other => Err(perr(format!("unknown Hopf axis `{other}`"))),
            },
            "poly" if !rest.trim().is_empty() => Ok(FieldSpec::Poly(PathBuf::from(rest.trim()))),
            other => Err(perr(format!("unknown field kind `{other}`"))),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Projection(w) => write!(f, "proj:{}", fmt_vec(w)),
            FieldSpec::Killing(i, j) => write!(f, "killing:{},{}", i + 1, j + 1),
            FieldSpec::Hopf(a) => write!(
                f,
                "hopf:{}",
                match a {
                    HopfAxis::I => "i",
                    HopfAxis::J => "j",
                    HopfAxis::K => "k",
                }
            ),
            FieldSpec::Poly(p) => write!(f, "poly:{}", p.display()),
        }
    }
}

impl TryFrom<String> for FieldSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FieldSpec> for String {
    fn from(s: FieldSpec) -> String {
        s.to_string()
    }
}

impl FieldSpec {
    /// Builds the field, reading the polynomial file if needed.
    pub fn build(&self, model: SphereModel) -> Result<AmbientPolyField> {
        let m = model.ambient_dim();
        match self {
            FieldSpec::Projection(w) => {
                if w.len() != m {
                    return Err(Error::DimensionMismatch {
                        expected: m,
                        got: w.len(),
                    });
                }
                AmbientPolyField::projection(model, &Vector::from_column_slice(w))
            }
            FieldSpec::Killing(i, j) => AmbientPolyField::plane_rotation(model, *i, *j),
            FieldSpec::Hopf(a) => AmbientPolyField::hopf(model, *a),
            FieldSpec::Poly(path) => parse_poly_csv(&std::fs::read_to_string(path)?, model),
        }
    }
}

/// Rows `out_coord, e_1, …, e_{n+1}, coefficient` (1-based output coordinate);
/// blank lines and lines starting with `#` are ignored.
pub fn parse_poly_csv(text: &str, model: SphereModel) -> Result<AmbientPolyField> {
    let m = model.ambient_dim();
    let mut comps = vec![Poly::zero(m); m];
    let mut rows = 0;
    for (line, fields) in csv_rows(text) {
        let at = |e: Error| match e {
            Error::Parse { reason, .. } => Error::parse(line, reason),
            other => other,
        };
        if fields.len() != m + 2 {
            return Err(Error::parse(line, format!("expected {} columns, got {}", m + 2, fields.len())));
        }
        let out = coord(fields[0]).map_err(at)?;
        if out >= m {
            return Err(Error::parse(line, format!("output coordinate {} > {m}", out + 1)));
        }
        let mut exps = Vec::with_capacity(m);
        for tok in &fields[1..=m] {
            exps.push(integer(tok, MAX_DEGREE).map_err(at)? as u8);
        }
        let deg: usize = exps.iter().map(|&e| e as usize).sum();
        if deg > MAX_DEGREE {
            return Err(Error::parse(line, format!("monomial degree {deg} exceeds {MAX_DEGREE}")));
        }
        let c = number(fields[m + 1]).map_err(at)?;
        comps[out].add_term(exps, c);
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::parse(1, "no monomial rows"));
    }
    AmbientPolyField::new(model, comps)
}

/// Non-blank, non-comment lines with their 1-based line numbers, split on commas.
fn csv_rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split(',').map(str::trim).collect()))
}

// ---------------------------------------------------------------- groups

/// `finite:reflect:3`, `rot:1,2:16`, `isotropy:0,0,1:100000:seed=7`,
/// `haar:100000:seed=7` for groups acting on `R^dim`. Coordinates are 1-based.
pub fn parse_group_spec(s: &str, dim: usize) -> Result<GroupSpec> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    let seed_of = |tok: Option<&&str>| -> Result<u64> {
        match tok {
            None => Ok(0),
            Some(t) => {
                let kv = key_values(t, &["seed"])?;
                lookup(&kv, "seed")
                    .unwrap()
                    .parse()
                    .map_err(|_| perr(format!("bad seed `{t}`")))
            }
        }
    };
    let count_of = |tok: &str| -> Result<usize> {
        match integer(tok, MAX_COUNT)? {
            0 => Err(perr("count must be positive")),
            c => Ok(c),
        }
    };
    let in_range = |c: usize| -> Result<usize> {
        if c < dim {
            Ok(c)
        } else {
            Err(perr(format!("coordinate {} > {dim}", c + 1)))
        }
    };
    match parts.as_slice() {
        ["finite", "reflect", c] => GroupSpec::reflection(dim, in_range(coord(c)?)?),
        ["rot", plane, count] => {
            let (a, b) = plane.split_once(',').ok_or_else(|| perr("rotation plane needs `i,j`"))?;
            let (i, j) = (in_range(coord(a)?)?, in_range(coord(b)?)?);
            if i == j {
                return Err(perr("rotation plane needs two distinct axes"));
            }
            Ok(GroupSpec::PlanarRotations {
                plane: (i, j),
                count: count_of(count)?,
            })
        }
        ["isotropy", v, count, rest @ ..] if rest.len() <= 1 => {
            let v = vector(v)?;
            if v.len() != dim {
                return Err(perr(format!("isotropy point needs {dim} coordinates, got {}", v.len())));
            }
            Ok(GroupSpec::IsotropyAt {
                v: Vector::from_vec(v),
                count: count_of(count)?,
                seed: seed_of(rest.first())?,
            })
        }
        ["haar", count, rest @ ..] if rest.len() <= 1 => Ok(GroupSpec::Haar {
            count: count_of(count)?,
            seed: seed_of(rest.first())?,
        }),
        _ => Err(perr(format!("unrecognized group `{s}`"))),
    }
}

/// Canonical text of a group spec (finite groups other than a single
/// reflection have no text form).
pub fn group_to_string(g: &GroupSpec) -> Option<String> {
    match g {
        GroupSpec::Finite(els) if els.len() == 2 => {
            let r = &els[1];
            let dim = r.nrows();
            let c = (0..dim).find(|&i| r[(i, i)] < 0.0)?;
            (GroupSpec::reflection(dim, c).ok()?.elements(dim).ok()? == *els).then(|| format!("finite:reflect:{}", c + 1))
        }
        GroupSpec::Finite(_) => None,
        GroupSpec::PlanarRotations { plane, count } => Some(format!("rot:{},{}:{count}", plane.0 + 1, plane.1 + 1)),
        GroupSpec::IsotropyAt { v, count, seed } => Some(format!("isotropy:{}:{count}:seed={seed}", fmt_vec(v.as_slice()))),
        GroupSpec::Haar { count, seed } => Some(format!("haar:{count}:seed={seed}")),
    }
}

// ---------------------------------------------------------------- profiles

/// `round:k=1`, `perturbed:k=1,eps=0.05`, `file:PATH`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ProfileSpec {
    Round { k: f64 },
    Perturbed { k: f64, eps: f64 },
    File(PathBuf),
}

impl FromStr for ProfileSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = s.split_once(':').ok_or_else(|| perr("expected kind:args"))?;
        match head.trim() {
            "round" => {
                let kv = key_values(rest, &["k"])?;
                let k = number(lookup(&kv, "k").ok_or_else(|| perr("round profile needs k"))?)?;
                Ok(ProfileSpec::Round { k })
            }
            "perturbed" => {
                let kv = key_values(rest, &["k", "eps"])?;
                let k = number(lookup(&kv, "k").ok_or_else(|| perr("perturbed profile needs k"))?)?;
                let eps = number(lookup(&kv, "eps").ok_or_else(|| perr("perturbed profile needs eps"))?)?;
                Ok(ProfileSpec::Perturbed { k, eps })
            }
            "file" if !rest.trim().is_empty() => Ok(ProfileSpec::File(PathBuf::from(rest.trim()))),
            other => Err(perr(format!("unknown profile kind `{other}`"))),
        }
    }
}

impl fmt::Display for ProfileSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileSpec::Round { k } => write!(f, "round:k={k:?}"),
            ProfileSpec::Perturbed { k, eps } => write!(f, "perturbed:k={k:?},eps={eps:?}"),
            ProfileSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl TryFrom<String> for ProfileSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ProfileSpec> for String {
    fn from(s: ProfileSpec) -> String {
        s.to_string()
    }
}

impl ProfileSpec {
    pub fn build(&self, n: usize) -> Result<WarpedProfile> {
        match self {
            ProfileSpec::Round { k } => WarpedProfile::round(n, *k),
            ProfileSpec::Perturbed { k, eps } => WarpedProfile::perturbed(n, *k, *eps),
            ProfileSpec::File(path) => {
                let (s, f) = parse_profile_csv(&std::fs::read_to_string(path)?)?;
                WarpedProfile::tabulated(n, s, f)
            }
        }
    }

    /// Curvature scale attached to closed-form profiles.
    pub fn k(&self) -> Option<f64> {
        match self {
            ProfileSpec::Round { k } | ProfileSpec::Perturbed { k, .. } => Some(*k),
            ProfileSpec::File(_) => None,
        }
    }
}

/// CSV with header `s,f`, strictly increasing `s` starting at 0, at least
/// [`MIN_PROFILE_ROWS`] rows.
pub fn parse_profile_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rows = csv_rows(text);
    match rows.next() {
        Some((_, h)) if h == ["s", "f"] => {}
        Some((line, _)) => return Err(Error::parse(line, "header must be `s,f`")),
        None => return Err(Error::parse(1, "empty profile table")),
    }
    let (mut s, mut f) = (Vec::new(), Vec::new());
    for (line, fields) in rows {
        let at = |e: Error| match e {
            Error::Parse { reason, .. } => Error::parse(line, reason),
            other => other,
        };
        if fields.len() != 2 {
            return Err(Error::parse(line, format!("expected 2 columns, got {}", fields.len())));
        }
        let (si, fi) = (number(fields[0]).map_err(at)?, number(fields[1]).map_err(at)?);
        if s.is_empty() && si != 0.0 {
            return Err(Error::parse(line, "s must start at 0"));
        }
        if let Some(&prev) = s.last() {
            if si <= prev {
                return Err(Error::parse(line, "s must be strictly increasing"));
            }
        }
        s.push(si);
        f.push(fi);
    }
    if s.len() < MIN_PROFILE_ROWS {
        return Err(Error::parse(1, format!("need at least {MIN_PROFILE_ROWS} rows, got {}", s.len())));
    }
    Ok((s, f))
}

// ---------------------------------------------------------------- quadrature

/// `product:res=24` or `mc:count=100000,seed=1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct QuadSpec(pub QuadKind);

impl FromStr for QuadSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = s.split_once(':').ok_or_else(|| perr("expected kind:args"))?;
        match head.trim() {
            "product" => {
                let kv = key_values(rest, &["res"])?;
                let res = integer(lookup(&kv, "res").ok_or_else(|| perr("product rule needs res"))?, 4096)?;
                Ok(QuadSpec(QuadKind::Product { res }))
            }
            "mc" => {
                let kv = key_values(rest, &["count", "seed"])?;
                let count = integer(lookup(&kv, "count").ok_or_else(|| perr("mc rule needs count"))?, MAX_COUNT)?;
                let seed = match lookup(&kv, "seed") {
                    Some(t) => t.parse().map_err(|_| perr(format!("bad seed `{t}`")))?,
                    None => 0,
                };
                Ok(QuadSpec(QuadKind::MonteCarlo { count, seed }))
            }
            other => Err(perr(format!("unknown quadrature kind `{other}`"))),
        }
    }
}

impl fmt::Display for QuadSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            QuadKind::Product { res } => write!(f, "product:res={res}"),
            QuadKind::MonteCarlo { count, seed } => write!(f, "mc:count={count},seed={seed}"),
        }
    }
}

impl TryFrom<String> for QuadSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<QuadSpec> for String {
    fn from(s: QuadSpec) -> String {
        s.to_string()
    }
}

impl QuadSpec {
    pub fn build(&self, model: SphereModel) -> Result<QuadratureRule> {
        QuadratureRule::from_kind(model, self.0)
    }
}
