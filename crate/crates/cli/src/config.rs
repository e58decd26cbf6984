//! Run configurations: what the command line resolves to, what `--config`
//! loads and what every report embeds.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use vfenergy::acceptance::CRITERIA;
use vfenergy::parse::{parse_group_spec, FieldSpec, ProfileSpec, QuadSpec};
use vfenergy::quadrature::QuadKind;

pub const SCHEMA: &str = "vfenergy-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandConfig,
    /// JSON report destination; stdout when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum CommandConfig {
    Spectrum(SpectrumConfig),
    Radial(RadialConfig),
    Symmetrize(SymmetrizeConfig),
    Verify(VerifyConfig),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub n: usize,
    pub k: f64,
    pub degree: usize,
    /// Default: product rule for `n ≤ 3`, Monte Carlo otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<QuadSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restrict: Option<Restrict>,
    /// Number of Ritz values reported.
    pub eigs: usize,
    /// Seed for the sampled isotropy check of `zero-mean` restrictions.
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialConfig {
    pub profile: ProfileSpec,
    pub n: usize,
    pub grid: usize,
    pub eigs: usize,
    /// Comparison curvature; default is the profile's `k` for round
    /// profiles and the largest admissible one otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    /// Eigenfunction table destination.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetrizeConfig {
    pub n: usize,
    pub k: f64,
    pub field: FieldSpec,
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<QuadSpec>,
    /// Random points used by the pointwise checks.
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Criterion numbers to run; all when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub criteria: Vec<usize>,
}

/// `hopf` or `zero-mean:v₁,…,v_{n+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Restrict {
    Hopf,
    ZeroMean(Vec<f64>),
}

impl FromStr for Restrict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "hopf" {
            return Ok(Restrict::Hopf);
        }
        let v = s
            .strip_prefix("zero-mean:")
            .ok_or_else(|| format!("expected `hopf` or `zero-mean:v`, got `{s}`"))?;
        v.split(',')
            .map(|t| match t.trim().parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(format!("bad coordinate `{t}`")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Restrict::ZeroMean)
    }
}

impl fmt::Display for Restrict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Restrict::Hopf => write!(f, "hopf"),
            Restrict::ZeroMean(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
                write!(f, "zero-mean:{}", parts.join(","))
            }
        }
    }
}

impl TryFrom<String> for Restrict {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Restrict> for String {
    fn from(r: Restrict) -> String {
        r.to_string()
    }
}

/// Invalid configuration, reported with the offending field.
#[derive(Debug, thiserror::Error)]
#[error("invalid `{field}`: {reason}")]
pub struct UsageError {
    pub field: String,
    pub reason: String,
}

fn usage(field: &str, reason: impl Into<String>) -> UsageError {
    UsageError {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn check_sphere(n: usize, k: f64) -> Result<(), UsageError> {
    if n < 2 {
        return Err(usage("n", format!("need n >= 2, got {n}")));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(usage("k", format!("need k > 0, got {k}")));
    }
    Ok(())
}

fn check_quad(quad: &Option<QuadSpec>, n: usize) -> Result<(), UsageError> {
    match quad.map(|q| q.0) {
        Some(QuadKind::Product { res }) => {
            if n > 3 {
                return Err(usage("quad", format!("product rules exist for n <= 3 only (n = {n}); use mc")));
            }
            if res < 8 {
                return Err(usage("quad", format!("need res >= 8, got {res}")));
            }
        }
        Some(QuadKind::MonteCarlo { count, .. }) if count < 1000 => {
            return Err(usage("quad", format!("need count >= 1000, got {count}")));
        }
        _ => {}
    }
    Ok(())
}

impl RunConfig {
    /// Checks every parameter against the preconditions of the routine it
    /// feeds, naming the first offending field.
    pub fn validate(&self) -> Result<(), UsageError> {
        match &self.command {
            CommandConfig::Spectrum(c) => {
                check_sphere(c.n, c.k)?;
                if !(1..=6).contains(&c.degree) {
                    return Err(usage("degree", format!("need 1 <= degree <= 6, got {}", c.degree)));
                }
                check_quad(&c.quad, c.n)?;
                if c.eigs == 0 {
                    return Err(usage("eigs", "need at least one eigenvalue"));
                }
                match &c.restrict {
                    Some(Restrict::Hopf) if c.n != 3 => {
                        return Err(usage("restrict", "hopf restriction needs n = 3"));
                    }
                    Some(Restrict::ZeroMean(v)) if v.len() != c.n + 1 => {
                        return Err(usage("restrict", format!("zero-mean point needs {} coordinates", c.n + 1)));
                    }
                    _ => {}
                }
            }
            CommandConfig::Radial(c) => {
                if c.n < 2 {
                    return Err(usage("n", format!("need n >= 2, got {}", c.n)));
                }
                if c.grid < 64 {
                    return Err(usage("grid", format!("need grid >= 64, got {}", c.grid)));
                }
                if !(1..=10).contains(&c.eigs) {
                    return Err(usage("eigs", format!("need 1 <= eigs <= 10, got {}", c.eigs)));
                }
                if let Some(k) = c.k {
                    if !(k > 0.0 && k.is_finite()) {
                        return Err(usage("k", format!("need k > 0, got {k}")));
                    }
                }
                if let Some(k) = c.profile.k() {
                    if !(k > 0.0 && k.is_finite()) {
                        return Err(usage("profile", format!("need k > 0, got {k}")));
                    }
                }
            }
            CommandConfig::Symmetrize(c) => {
                check_sphere(c.n, c.k)?;
                check_quad(&c.quad, c.n)?;
                parse_group_spec(&c.group, c.n + 1).map_err(|e| usage("group", e.to_string()))?;
                if c.samples == 0 {
                    return Err(usage("samples", "need at least one sample"));
                }
            }
            CommandConfig::Verify(c) => {
                if let Some(&bad) = c.criteria.iter().find(|&&i| i == 0 || i > CRITERIA) {
                    return Err(usage("criteria", format!("criterion {bad} outside 1..={CRITERIA}")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, UsageError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| usage("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum() -> RunConfig {
        RunConfig {
            command: CommandConfig::Spectrum(SpectrumConfig {
                n: 3,
                k: 0.5,
                degree: 2,
                quad: Some("mc:count=5000,seed=4".parse().unwrap()),
                restrict: Some(Restrict::ZeroMean(vec![0.0, 0.0, 0.0, 2.0])),
                eigs: 5,
                seed: 9,
            }),
            output: Some("out.json".into()),
        }
    }

    #[test]
    fn json_round_trip_is_a_fixed_point() {
        let configs = [
            spectrum(),
            RunConfig {
                command: CommandConfig::Radial(RadialConfig {
                    profile: "perturbed:k=1,eps=0.05".parse().unwrap(),
                    n: 3,
                    grid: 500,
                    eigs: 3,
                    k: Some(0.8),
                    csv: Some("h.csv".into()),
                }),
                output: None,
            },
            RunConfig {
                command: CommandConfig::Symmetrize(SymmetrizeConfig {
                    n: 2,
                    k: 1.0,
                    field: "killing:xz".parse().unwrap(),
                    group: "isotropy:0,0,1:1000:seed=7".into(),
                    quad: None,
                    samples: 20,
                    seed: 1,
                }),
                output: None,
            },
            RunConfig {
                command: CommandConfig::Verify(VerifyConfig { criteria: vec![3, 11] }),
                output: None,
            },
        ];
        for cfg in configs {
            let text = cfg.to_json();
            let back = RunConfig::from_json(&text).unwrap();
            assert_eq!(back, cfg);
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn validation_names_the_field() {
        let field = |cfg: RunConfig| cfg.validate().unwrap_err().field;
        let mut c = spectrum();
        if let CommandConfig::Spectrum(s) = &mut c.command {
            s.degree = 7;
        }
        assert_eq!(field(c), "degree");
        let mut c = spectrum();
        if let CommandConfig::Spectrum(s) = &mut c.command {
            s.quad = Some("product:res=10".parse().unwrap());
            s.n = 4;
        }
        assert_eq!(field(c), "quad");
        let mut c = spectrum();
        if let CommandConfig::Spectrum(s) = &mut c.command {
            s.restrict = Some(Restrict::Hopf);
            s.n = 2;
        }
        assert_eq!(field(c), "restrict");
        let c = RunConfig {
            command: CommandConfig::Verify(VerifyConfig { criteria: vec![12] }),
            output: None,
        };
        assert_eq!(field(c), "criteria");
        assert_eq!(RunConfig::from_json("{\"command\":{\"verify\":{}},\"extra\":1}").unwrap_err().field, "config");
    }

    #[test]
    fn restrict_syntax() {
        assert_eq!("hopf".parse::<Restrict>().unwrap(), Restrict::Hopf);
        assert_eq!("zero-mean:0,0,1".parse::<Restrict>().unwrap(), Restrict::ZeroMean(vec![0.0, 0.0, 1.0]));
        assert!("zero-mean:".parse::<Restrict>().is_err());
        assert!("hopf:i".parse::<Restrict>().is_err());
    }
}
