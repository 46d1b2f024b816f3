//! Ruled surfaces with prescribed conical curvature.
//!
//! The frame equations are integrated in `s1` with fixed-step RK4 and
//! re-orthonormalized after every step. The striction curve is then recovered
//! as `c' = cos α·q + sin α·a`, which is orthogonal to `h` and therefore keeps
//! `c` on the striction curve of the generated surface.

mod catalog;
mod spline;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{det3, Jet3, Param, Vec3};
use crate::surface::{CurveSource, Expectation, ParamRange, Provenance, RuledSurfaceSpec};

pub use catalog::{catalog, CATALOG_NAMES};
pub use spline::CubicSpline;

/// How κ varies along the spherical-image arc length.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProfileKind {
    Constant {
        kappa: f64,
    },
    /// `σ ≡ d`, realized by `κ(s1) = d·s1 / √(1 − d²s1²)`.
    ConstantSigma {
        d: f64,
    },
    Tabulated {
        s1: Vec<f64>,
        kappa: Vec<f64>,
        #[serde(skip)]
        spline: CubicSpline,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaProfile {
    #[serde(flatten)]
    pub kind: ProfileKind,
    pub domain: ParamRange,
}

impl KappaProfile {
    pub fn constant(kappa: f64, domain: ParamRange) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::BadParams("kappa must be finite".into()));
        }
        Ok(Self {
            kind: ProfileKind::Constant { kappa },
            domain,
        })
    }

    pub fn constant_sigma(d: f64, domain: ParamRange) -> Result<Self> {
        let reach = d.abs() * domain.lo.abs().max(domain.hi.abs());
        if !d.is_finite() || !(reach < 1.0) {
            return Err(Error::BadParams(format!(
                "constant_sigma needs |d·s1| < 1 on the domain, got {reach}"
            )));
        }
        Ok(Self {
            kind: ProfileKind::ConstantSigma { d },
            domain,
        })
    }

    /// Natural cubic spline through `(s1[i], kappa[i])`; the domain is the knot span.
    pub fn tabulated(s1: Vec<f64>, kappa: Vec<f64>) -> Result<Self> {
        let spline = CubicSpline::natural(s1.clone(), kappa.clone())?;
        let (lo, hi) = spline.domain();
        Ok(Self {
            kind: ProfileKind::Tabulated { s1, kappa, spline },
            domain: ParamRange::new(lo, hi)?,
        })
    }

    /// `(κ, dκ/ds1)` at `s1`, continuing the profile past its domain where the
    /// formula allows (stencils near the ends step slightly outside).
    pub fn eval(&self, s1: f64) -> Result<(f64, f64)> {
        match &self.kind {
            ProfileKind::Constant { kappa } => Ok((*kappa, 0.0)),
            ProfileKind::ConstantSigma { d } => {
                let x = d * s1;
                let rest = 1.0 - x * x;
                if !(rest > 0.0) {
                    return Err(self.out_of_domain(s1));
                }
                Ok((x / rest.sqrt(), d / rest.powf(1.5)))
            }
            ProfileKind::Tabulated { spline, .. } => Ok(spline.eval(s1)),
        }
    }

    fn out_of_domain(&self, s1: f64) -> Error {
        Error::OutOfDomain {
            s1,
            lo: self.domain.lo,
            hi: self.domain.hi,
        }
    }

    /// What the profile implies about the generated surface.
    pub fn expectation(&self) -> Expectation {
        match self.kind {
            ProfileKind::Constant { kappa } => Expectation {
                kappa: Some(kappa),
                sigma: Some(0.0),
                q_slant: if kappa == 0.0 {
                    Some(false)
                } else if kappa.abs() >= 0.01 {
                    Some(true)
                } else {
                    None
                },
                h_slant: Some(false),
                a_slant: Some(true),
                darboux_strict: Some(true),
                darboux_angular: Some(true),
                ..Default::default()
            },
            ProfileKind::ConstantSigma { d } if d.abs() >= 0.01 => Expectation {
                sigma: Some(d),
                h_slant: Some(true),
                darboux_strict: Some(false),
                darboux_angular: Some(true),
                ..Default::default()
            },
            _ => Expectation::default(),
        }
    }
}

/// `κ(s1)` for `s1` inside the profile domain.
pub fn kappa_of_s1(profile: &KappaProfile, s1: f64) -> Result<f64> {
    let slack = 1e-12 * profile.domain.len();
    if !(s1 >= profile.domain.lo - slack && s1 <= profile.domain.hi + slack) {
        return Err(profile.out_of_domain(s1));
    }
    profile.eval(s1).map(|(k, _)| k)
}

/// Orthonormal right-handed triple `{q, h, a}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthoFrame {
    pub q: Vec3,
    pub h: Vec3,
    pub a: Vec3,
}

impl OrthoFrame {
    pub fn identity() -> Self {
        Self {
            q: Vec3::x(),
            h: Vec3::y(),
            a: Vec3::z(),
        }
    }

    /// Largest deviation from orthonormality and right-handedness.
    pub fn defect(&self) -> f64 {
        [
            self.q.norm_squared() - 1.0,
            self.h.norm_squared() - 1.0,
            self.a.norm_squared() - 1.0,
            self.q.dot(&self.h),
            self.q.dot(&self.a),
            self.h.dot(&self.a),
            det3(&self.q, &self.h, &self.a) - 1.0,
        ]
        .iter()
        .fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Gram–Schmidt in the order q, h, a.
    pub fn orthonormalized(&self) -> Self {
        let q = self.q.normalize();
        let h = (self.h - q * q.dot(&self.h)).normalize();
        let a = (self.a - q * q.dot(&self.a) - h * h.dot(&self.a)).normalize();
        Self { q, h, a }
    }

    fn derivative(&self, kappa: f64) -> Self {
        Self {
            q: self.h,
            h: -self.q + self.a * kappa,
            a: -self.h * kappa,
        }
    }

    fn axpy(&self, t: f64, d: &Self) -> Self {
        Self {
            q: self.q + d.q * t,
            h: self.h + d.h * t,
            a: self.a + d.a * t,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub profile: KappaProfile,
    /// Nominal RK4 step in `s1`; shortened so the domain splits evenly.
    pub step: f64,
    /// Direction of the striction-curve tangent in the q–a plane.
    pub alpha: f64,
    pub initial_frame: OrthoFrame,
    /// Striction-curve point at the start of the domain.
    pub origin: Vec3,
}

impl GeneratorConfig {
    pub fn new(profile: KappaProfile, step: f64, alpha: f64) -> Self {
        Self {
            profile,
            step,
            alpha,
            initial_frame: OrthoFrame::identity(),
            origin: Vec3::zeros(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let len = self.profile.domain.len();
        if !(self.step > 0.0) || self.step > len / 64.0 {
            return Err(Error::InvalidConfig(format!(
                "step {} must lie in (0, {}]",
                self.step,
                len / 64.0
            )));
        }
        if !self.alpha.is_finite() {
            return Err(Error::InvalidConfig("alpha must be finite".into()));
        }
        let defect = self.initial_frame.defect();
        if !(defect <= 1e-12) {
            return Err(Error::InvalidConfig(format!(
                "initial frame is not orthonormal and right-handed (defect {defect:e})"
            )));
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        let len = self.profile.domain.len();
        ((len / self.step) - 1e-9).ceil().max(1.0) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameNode {
    pub s1: f64,
    pub frame: OrthoFrame,
}

fn rk4_step(profile: &KappaProfile, frame: &OrthoFrame, s: f64, dt: f64) -> Result<OrthoFrame> {
    let (k0, _) = profile.eval(s)?;
    let (km, _) = profile.eval(s + 0.5 * dt)?;
    let (k1, _) = profile.eval(s + dt)?;
    let d1 = frame.derivative(k0);
    let d2 = frame.axpy(0.5 * dt, &d1).derivative(km);
    let d3 = frame.axpy(0.5 * dt, &d2).derivative(km);
    let d4 = frame.axpy(dt, &d3).derivative(k1);
    let next = OrthoFrame {
        q: frame.q + (d1.q + d2.q * 2.0 + d3.q * 2.0 + d4.q) * (dt / 6.0),
        h: frame.h + (d1.h + d2.h * 2.0 + d3.h * 2.0 + d4.h) * (dt / 6.0),
        a: frame.a + (d1.a + d2.a * 2.0 + d3.a * 2.0 + d4.a) * (dt / 6.0),
    };
    Ok(next.orthonormalized())
}

/// Integrates `q' = h, h' = −q + κa, a' = −κh` across the profile domain.
pub fn integrate_frame(config: &GeneratorConfig) -> Result<Vec<FrameNode>> {
    config.validate()?;
    let domain = config.profile.domain;
    let n = config.steps();
    let dt = domain.len() / n as f64;
    let mut nodes = Vec::with_capacity(n + 1);
    let mut frame = config.initial_frame;
    nodes.push(FrameNode {
        s1: domain.lo,
        frame,
    });
    for i in 0..n {
        let s = domain.lo + i as f64 * dt;
        frame = rk4_step(&config.profile, &frame, s, dt)?;
        let s_next = if i + 1 == n {
            domain.hi
        } else {
            domain.lo + (i + 1) as f64 * dt
        };
        nodes.push(FrameNode { s1: s_next, frame });
    }
    Ok(nodes)
}

#[derive(Debug)]
struct Generated {
    nodes: Vec<FrameNode>,
    base_points: Vec<Vec3>,
    profile: KappaProfile,
    cos_alpha: f64,
    sin_alpha: f64,
}

impl Generated {
    fn tangent(&self, f: &OrthoFrame) -> Vec3 {
        f.q * self.cos_alpha + f.a * self.sin_alpha
    }

    fn locate(&self, s: f64) -> usize {
        self.nodes.partition_point(|n| n.s1 <= s).saturating_sub(1)
    }

    /// Frame at `s` by one RK4 step from the node at or below `s`.
    fn frame_at(&self, s: f64) -> Result<(usize, OrthoFrame)> {
        let k = self.locate(s);
        let node = self.nodes[k];
        let frame = if s == node.s1 {
            node.frame
        } else {
            rk4_step(&self.profile, &node.frame, node.s1, s - node.s1)?
        };
        Ok((k, frame))
    }

    fn director_jet(&self, s: f64) -> Result<Jet3> {
        let (_, f) = self.frame_at(s)?;
        let (kappa, kp) = self.profile.eval(s)?;
        Ok(Jet3::new(
            f.q,
            f.h,
            -f.q + f.a * kappa,
            -f.h * (1.0 + kappa * kappa) + f.a * kp,
            Param::U,
        ))
    }

    fn base_jet(&self, s: f64) -> Result<Jet3> {
        let (k, f) = self.frame_at(s)?;
        let node = self.nodes[k];
        let dt = s - node.s1;
        let point = if dt == 0.0 {
            self.base_points[k]
        } else {
            let mid = rk4_step(&self.profile, &node.frame, node.s1, 0.5 * dt)?;
            self.base_points[k]
                + (self.tangent(&node.frame) + self.tangent(&mid) * 4.0 + self.tangent(&f))
                    * (dt / 6.0)
        };
        let (kappa, kp) = self.profile.eval(s)?;
        let (ca, sa) = (self.cos_alpha, self.sin_alpha);
        let bend = ca - kappa * sa;
        Ok(Jet3::new(
            point,
            self.tangent(&f),
            f.h * bend,
            -f.h * (kp * sa) + (-f.q + f.a * kappa) * bend,
            Param::U,
        ))
    }
}

#[derive(Debug)]
struct GeneratedDirector(Arc<Generated>);

impl CurveSource for GeneratedDirector {
    fn jet(&self, t: f64) -> Result<Jet3> {
        self.0.director_jet(t)
    }
}

#[derive(Debug)]
struct GeneratedBase(Arc<Generated>);

impl CurveSource for GeneratedBase {
    fn jet(&self, t: f64) -> Result<Jet3> {
        self.0.base_jet(t)
    }
}

/// Assembles the ruled surface swept by `q` along the striction curve
/// `c(s1) = origin + ∫ (cos α·q + sin α·a) ds1`, with `u = s1`.
///
/// `c` is accumulated node to node by Simpson's rule. Director jets come
/// straight from the frame equations, so they are exact for the integrated frame.
pub fn build_surface(nodes: Vec<FrameNode>, config: &GeneratorConfig) -> Result<RuledSurfaceSpec> {
    if nodes.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: nodes.len(),
        });
    }
    let mut generated = Generated {
        base_points: Vec::with_capacity(nodes.len()),
        nodes,
        profile: config.profile.clone(),
        cos_alpha: config.alpha.cos(),
        sin_alpha: config.alpha.sin(),
    };
    let mut c = config.origin;
    generated.base_points.push(c);
    for w in generated.nodes.windows(2) {
        let dt = w[1].s1 - w[0].s1;
        let mid = rk4_step(&generated.profile, &w[0].frame, w[0].s1, 0.5 * dt)?;
        c += (generated.tangent(&w[0].frame)
            + generated.tangent(&mid) * 4.0
            + generated.tangent(&w[1].frame))
            * (dt / 6.0);
        generated.base_points.push(c);
    }
    let range = ParamRange::new(
        generated.nodes[0].s1,
        generated.nodes[generated.nodes.len() - 1].s1,
    )?;
    let shared = Arc::new(generated);
    Ok(RuledSurfaceSpec::new(
        Arc::new(GeneratedBase(shared.clone())),
        Arc::new(GeneratedDirector(shared)),
        range,
        Provenance::PrescribedKappa {
            profile: config.profile.clone(),
            alpha: config.alpha,
            step: config.step,
        },
    )
    .with_expectation(config.profile.expectation()))
}

/// `integrate_frame` followed by `build_surface`.
pub fn generate(config: &GeneratorConfig) -> Result<RuledSurfaceSpec> {
    let nodes = integrate_frame(config)?;
    build_surface(nodes, config)
}
