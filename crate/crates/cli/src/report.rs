//! Report documents and their text encodings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ruled::audit::Audit;
use ruled::slant::{ConstancyResult, SlantReport, SlantVerdict};
use ruled::surface::{Expectation, Provenance};
use ruled::{FrameSample, Vec3};
use serde::Serialize;

pub const TOOL: &str = "slant";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct ReportFile {
    pub meta: Meta,
    pub samples: Vec<FrameSample>,
    pub slant: SlantBlock,
    pub audits: BTreeMap<String, Audit>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub tol: f64,
    pub angle_tol: f64,
    pub samples: usize,
    pub range: [f64; 2],
    pub provenance: Provenance,
    pub expected: Expectation,
}

/// A slant verdict whose scalar is named after what it measures.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictBlock {
    pub verdict: bool,
    pub axis: Vec3,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cos_angle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub darboux_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    pub residual: f64,
    pub fit_residual: f64,
    pub spread: f64,
    pub degenerate: bool,
    pub tie: bool,
}

impl VerdictBlock {
    fn unit(v: &SlantVerdict) -> Self {
        Self::build(v, Some(v.constant), None)
    }

    fn raw(v: &SlantVerdict) -> Self {
        Self::build(v, None, Some(v.constant))
    }

    fn build(v: &SlantVerdict, cos_angle: Option<f64>, darboux_constant: Option<f64>) -> Self {
        Self {
            verdict: v.verdict,
            axis: v.axis,
            cos_angle,
            darboux_constant,
            angle: v.angle,
            residual: v.residual,
            fit_residual: v.fit_residual,
            spread: v.spread,
            degenerate: v.degenerate,
            tie: v.tie,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SlantBlock {
    pub q_slant: VerdictBlock,
    pub h_slant: VerdictBlock,
    pub a_slant: VerdictBlock,
    pub darboux_strict: VerdictBlock,
    pub darboux_angular: VerdictBlock,
    pub kappa: ConstancyResult,
    pub sigma: ConstancyResult,
}

impl From<&SlantReport> for SlantBlock {
    fn from(r: &SlantReport) -> Self {
        Self {
            q_slant: VerdictBlock::unit(&r.q),
            h_slant: VerdictBlock::unit(&r.h),
            a_slant: VerdictBlock::unit(&r.a),
            darboux_strict: VerdictBlock::raw(&r.darboux_strict),
            darboux_angular: VerdictBlock::unit(&r.darboux_angular),
            kappa: r.kappa,
            sigma: r.sigma,
        }
    }
}

/// Shortest decimal that reads back to the same `f64`, with `-0` printed as `0`.
/// Very small and very large magnitudes use exponent notation.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_finite() && (x.abs() < 1e-5 || x.abs() >= 1e16) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

pub const CSV_HEADER: &str =
    "u,s1,kappa,kappa_prime,sigma,qx,qy,qz,hx,hy,hz,ax,ay,az,Wx,Wy,Wz,cx,cy,cz";

pub fn samples_csv(samples: &[FrameSample]) -> String {
    let mut out = String::with_capacity(64 * 20 * (samples.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in samples {
        let scalars = [s.u, s.s1, s.kappa, s.kappa_prime, s.sigma];
        let vectors = [s.q, s.h, s.a, s.w, s.striction_point];
        let fields: Vec<String> = scalars
            .into_iter()
            .chain(vectors.iter().flat_map(|v| v.iter().copied()))
            .map(num)
            .collect();
        let _ = writeln!(out, "{}", fields.join(","));
    }
    out
}
