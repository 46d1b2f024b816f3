//! On-disk surface specifications.

use std::collections::BTreeMap;
use std::path::Path;

use ruled::generators::{catalog, generate, GeneratorConfig, KappaProfile};
use ruled::surface::{Expectation, ParamRange, ParamValue};
use ruled::{RuledSurfaceSpec, Vec3};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpecFile {
    Catalog {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, ParamValue>,
    },
    PrescribedKappa {
        profile: ProfileFile,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s1_range: Option<[f64; 2]>,
        #[serde(default)]
        alpha: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        step: Option<f64>,
    },
    Sampled {
        u: Vec<f64>,
        f: Vec<[f64; 3]>,
        q: Vec<[f64; 3]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fd_step: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expected: Option<Expectation>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileFile {
    Constant { kappa: f64 },
    ConstantSigma { d: f64 },
    Tabulated { s1: Vec<f64>, kappa: Vec<f64> },
}

impl SurfaceSpecFile {
    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Schema {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Builds the surface; parameter errors are reported against `path`.
    pub fn build(&self, path: &Path) -> CliResult<RuledSurfaceSpec> {
        self.build_inner().map_err(|e| match e {
            ruled::Error::CylindricalDirector { .. } => e.into(),
            other => CliError::Schema {
                path: path.to_path_buf(),
                message: other.to_string(),
            },
        })
    }

    fn build_inner(&self) -> ruled::Result<RuledSurfaceSpec> {
        match self {
            SurfaceSpecFile::Catalog { name, params } => catalog(name, params),
            SurfaceSpecFile::PrescribedKappa {
                profile,
                s1_range,
                alpha,
                step,
            } => {
                let range = s1_range
                    .map(|[lo, hi]| ParamRange::new(lo, hi))
                    .transpose()?;
                let profile = profile.to_profile(range)?;
                let step = step.unwrap_or_else(|| (profile.domain.len() / 64.0).min(0.01));
                let expected = profile.expectation();
                Ok(generate(&GeneratorConfig::new(profile, step, *alpha))?
                    .with_expectation(expected))
            }
            SurfaceSpecFile::Sampled {
                u,
                f,
                q,
                fd_step,
                expected,
            } => {
                let rows = |v: &[[f64; 3]]| v.iter().map(|p| Vec3::from(*p)).collect::<Vec<_>>();
                let spec = RuledSurfaceSpec::sampled(u.clone(), rows(f), rows(q), *fd_step)?;
                Ok(spec.with_expectation(expected.clone().unwrap_or_default()))
            }
        }
    }
}

impl ProfileFile {
    fn to_profile(&self, range: Option<ParamRange>) -> ruled::Result<KappaProfile> {
        let need = || {
            range.ok_or_else(|| {
                ruled::Error::BadParams("`s1_range` is required for this profile".into())
            })
        };
        match self {
            ProfileFile::Constant { kappa } => KappaProfile::constant(*kappa, need()?),
            ProfileFile::ConstantSigma { d } => KappaProfile::constant_sigma(*d, need()?),
            ProfileFile::Tabulated { s1, kappa } => {
                let mut p = KappaProfile::tabulated(s1.clone(), kappa.clone())?;
                if let Some(r) = range {
                    p.domain = r;
                }
                Ok(p)
            }
        }
    }
}

/// Tabulates `surface` on `count` uniform parameter values.
pub fn tabulate(surface: &RuledSurfaceSpec, count: usize) -> CliResult<SurfaceSpecFile> {
    let grid = ruled::SampleGrid::uniform(surface.range, count)?;
    let mut u = Vec::with_capacity(count);
    let mut f = Vec::with_capacity(count);
    let mut q = Vec::with_capacity(count);
    for &t in grid.values() {
        u.push(t);
        f.push(surface.base_jet(t)?.d0.into());
        q.push(surface.director_jet(t)?.d0.normalize().into());
    }
    Ok(SurfaceSpecFile::Sampled {
        u,
        f,
        q,
        fd_step: None,
        expected: Some(surface.expected.clone()),
    })
}
