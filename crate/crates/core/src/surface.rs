//! Ruled surfaces `r(u, v) = f(u) + v·q(u)` as a pair of jet-valued curves.

use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::KappaProfile;
use crate::geometry::{fd_jet, Jet3, Param, Vec3};

/// A space curve that can be queried for its jet at any parameter.
pub trait CurveSource: Send + Sync + fmt::Debug {
    fn jet(&self, t: f64) -> Result<Jet3>;

    fn point(&self, t: f64) -> Result<Vec3> {
        self.jet(t).map(|j| j.d0)
    }
}

/// A curve given by a closed-form jet.
pub struct AnalyticCurve {
    label: &'static str,
    eval: Box<dyn Fn(f64) -> Jet3 + Send + Sync>,
}

impl AnalyticCurve {
    pub fn new(label: &'static str, eval: impl Fn(f64) -> Jet3 + Send + Sync + 'static) -> Self {
        Self {
            label,
            eval: Box::new(eval),
        }
    }
}

impl fmt::Debug for AnalyticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticCurve")
            .field("label", &self.label)
            .finish()
    }
}

impl CurveSource for AnalyticCurve {
    fn jet(&self, t: f64) -> Result<Jet3> {
        let j = (self.eval)(t);
        if j.is_finite() {
            Ok(j)
        } else {
            Err(Error::NonFiniteSample { at: t })
        }
    }
}

/// Number of neighbouring samples in each local interpolation window.
const WINDOW: usize = 8;

/// A tabulated curve, interpolated by a local degree-7 polynomial through the
/// eight samples nearest to the query and differentiated with [`fd_jet`].
#[derive(Debug, Clone)]
pub struct SampledCurve {
    u: Vec<f64>,
    points: Vec<Vec3>,
    unit: bool,
    step: f64,
}

impl SampledCurve {
    /// `unit` renormalizes interpolated points onto the unit sphere (for directors).
    pub fn new(u: Vec<f64>, points: Vec<Vec3>, unit: bool, step: f64) -> Result<Self> {
        if u.len() != points.len() {
            return Err(Error::BadParams(format!(
                "{} parameters but {} points",
                u.len(),
                points.len()
            )));
        }
        if u.len() < WINDOW {
            return Err(Error::InsufficientSamples {
                needed: WINDOW,
                got: u.len(),
            });
        }
        if u.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::BadParams(
                "sample parameters must be strictly increasing".into(),
            ));
        }
        if !(step > 0.0) {
            return Err(Error::BadParams(
                "finite-difference step must be positive".into(),
            ));
        }
        Ok(Self {
            u,
            points,
            unit,
            step,
        })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    fn window_start(&self, t: f64) -> usize {
        let n = self.u.len();
        let idx = self.u.partition_point(|&x| x < t);
        idx.saturating_sub(WINDOW / 2).min(n - WINDOW)
    }

    fn interpolate(&self, start: usize, t: f64) -> Vec3 {
        let xs = &self.u[start..start + WINDOW];
        let ps = &self.points[start..start + WINDOW];
        let mut acc = Vec3::zeros();
        for i in 0..WINDOW {
            let mut w = 1.0;
            for j in 0..WINDOW {
                if i != j {
                    w *= (t - xs[j]) / (xs[i] - xs[j]);
                }
            }
            acc += ps[i] * w;
        }
        if self.unit {
            acc.normalize()
        } else {
            acc
        }
    }
}

impl CurveSource for SampledCurve {
    fn jet(&self, t: f64) -> Result<Jet3> {
        // One window per query keeps the stencil on a single smooth polynomial.
        let start = self.window_start(t);
        fd_jet(|x| self.interpolate(start, x), t, self.step)
    }

    fn point(&self, t: f64) -> Result<Vec3> {
        Ok(self.interpolate(self.window_start(t), t))
    }
}

/// A proper rigid motion `x ↦ R·x + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidMotion {
    pub rotation: Matrix3<f64>,
    pub translation: Vec3,
}

impl RigidMotion {
    pub fn new(rotation: Matrix3<f64>, translation: Vec3) -> Result<Self> {
        let dev = (rotation.transpose() * rotation - Matrix3::identity()).amax();
        if dev > 1e-12 || rotation.determinant() < 0.0 {
            return Err(Error::NonOrthogonalInput { deviation: dev });
        }
        Ok(Self {
            rotation,
            translation,
        })
    }

    pub fn apply_vector(&self, v: &Vec3) -> Vec3 {
        self.rotation * v
    }

    pub fn apply_point(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }
}

#[derive(Debug)]
struct Moved {
    inner: Arc<dyn CurveSource>,
    rotation: Matrix3<f64>,
    offset: Vec3,
}

impl CurveSource for Moved {
    fn jet(&self, t: f64) -> Result<Jet3> {
        Ok(self.inner.jet(t)?.map_linear(&self.rotation, &self.offset))
    }
}

/// Values a catalog surface takes as parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    List(Vec<f64>),
}

/// Where a surface came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Provenance {
    Catalog {
        name: String,
        params: std::collections::BTreeMap<String, ParamValue>,
    },
    PrescribedKappa {
        profile: KappaProfile,
        alpha: f64,
        step: f64,
    },
    Sampled {
        count: usize,
        fd_step: f64,
    },
}

/// Invariants a surface is known to have by construction. Unset fields make no claim.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub darboux_vector: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_slant: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_slant: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_slant: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub darboux_strict: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub darboux_angular: Option<bool>,
}

/// Closed parameter interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamRange {
    pub lo: f64,
    pub hi: f64,
}

impl ParamRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::BadParams(format!(
                "degenerate parameter range [{lo}, {hi}]"
            )))
        }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, t: f64) -> bool {
        (self.lo..=self.hi).contains(&t)
    }
}

/// A ruled surface: base curve `f`, unit director `q`, and the parameter range
/// both are valid on.
#[derive(Debug, Clone)]
pub struct RuledSurfaceSpec {
    pub base: Arc<dyn CurveSource>,
    pub director: Arc<dyn CurveSource>,
    pub range: ParamRange,
    pub provenance: Provenance,
    pub expected: Expectation,
}

impl RuledSurfaceSpec {
    pub fn new(
        base: Arc<dyn CurveSource>,
        director: Arc<dyn CurveSource>,
        range: ParamRange,
        provenance: Provenance,
    ) -> Self {
        Self {
            base,
            director,
            range,
            provenance,
            expected: Expectation::default(),
        }
    }

    pub fn with_expectation(mut self, expected: Expectation) -> Self {
        self.expected = expected;
        self
    }

    /// Builds a surface from tabulated base points and directors.
    pub fn sampled(u: Vec<f64>, f: Vec<Vec3>, q: Vec<Vec3>, fd_step: Option<f64>) -> Result<Self> {
        if u.len() < 16 {
            return Err(Error::InsufficientSamples {
                needed: 16,
                got: u.len(),
            });
        }
        if f.len() != u.len() || q.len() != u.len() {
            return Err(Error::BadParams("u, f and q must have equal length".into()));
        }
        if let Some((i, _)) = q
            .iter()
            .enumerate()
            .find(|(_, v)| (v.norm() - 1.0).abs() > 1e-6)
        {
            return Err(Error::BadParams(format!(
                "director row {i} is not a unit vector"
            )));
        }
        let range = ParamRange::new(u[0], u[u.len() - 1])?;
        let step = fd_step.unwrap_or(1e-3 * range.len());
        let count = u.len();
        let base = SampledCurve::new(u.clone(), f, false, step)?;
        let director = SampledCurve::new(u, q, true, step)?;
        Ok(Self::new(
            Arc::new(base),
            Arc::new(director),
            range,
            Provenance::Sampled {
                count,
                fd_step: step,
            },
        ))
    }

    pub fn director_jet(&self, u: f64) -> Result<Jet3> {
        let j = self.director.jet(u)?;
        j.expect_param(Param::U)?;
        Ok(j)
    }

    pub fn base_jet(&self, u: f64) -> Result<Jet3> {
        let j = self.base.jet(u)?;
        j.expect_param(Param::U)?;
        Ok(j)
    }

    /// Surface point `f(u) + v·q(u)`.
    pub fn point(&self, u: f64, v: f64) -> Result<Vec3> {
        Ok(self.base.point(u)? + self.director.point(u)? * v)
    }

    /// The same surface after a rigid motion.
    pub fn transformed(&self, motion: &RigidMotion) -> Self {
        let base = Moved {
            inner: self.base.clone(),
            rotation: motion.rotation,
            offset: motion.translation,
        };
        let director = Moved {
            inner: self.director.clone(),
            rotation: motion.rotation,
            offset: Vec3::zeros(),
        };
        let mut expected = self.expected.clone();
        expected.darboux_vector = expected
            .darboux_vector
            .map(|w| motion.apply_vector(&Vec3::from(w)).into());
        Self {
            base: Arc::new(base),
            director: Arc::new(director),
            range: self.range,
            provenance: self.provenance.clone(),
            expected,
        }
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.provenance, Provenance::Sampled { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize) -> (Vec<f64>, Vec<Vec3>) {
        let u: Vec<f64> = (0..n).map(|i| i as f64 * 0.05).collect();
        let p = u.iter().map(|t| Vec3::new(t.cos(), t.sin(), 0.0)).collect();
        (u, p)
    }

    #[test]
    fn sampled_curve_reproduces_circle_jet() {
        let (u, p) = circle(64);
        let c = SampledCurve::new(u, p, true, 1e-3).unwrap();
        let j = c.jet(1.23).unwrap();
        let t: f64 = 1.23;
        assert!((j.d0 - Vec3::new(t.cos(), t.sin(), 0.0)).norm() < 1e-10);
        assert!((j.d1 - Vec3::new(-t.sin(), t.cos(), 0.0)).norm() < 1e-8);
        assert!((j.d2 + Vec3::new(t.cos(), t.sin(), 0.0)).norm() < 1e-6);
        assert!((j.d3 - Vec3::new(t.sin(), -t.cos(), 0.0)).norm() < 1e-4);
    }

    #[test]
    fn sampled_curve_rejects_unsorted_parameters() {
        let (mut u, p) = circle(16);
        u.swap(3, 4);
        assert!(SampledCurve::new(u, p, false, 1e-3).is_err());
    }

    #[test]
    fn sampled_surface_validation() {
        let (u, p) = circle(10);
        assert!(matches!(
            RuledSurfaceSpec::sampled(u, p.clone(), p, None),
            Err(Error::InsufficientSamples { .. })
        ));
        let (u, p) = circle(20);
        let mut q = p.clone();
        q[5] *= 1.01;
        assert!(matches!(
            RuledSurfaceSpec::sampled(u, p, q, None),
            Err(Error::BadParams(_))
        ));
    }

    #[test]
    fn rigid_motion_rejects_reflections() {
        let m = Matrix3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
        assert!(RigidMotion::new(m, Vec3::zeros()).is_err());
        assert!(RigidMotion::new(Matrix3::identity(), Vec3::x()).is_ok());
    }

    #[test]
    fn degenerate_range_rejected() {
        assert!(ParamRange::new(1.0, 1.0).is_err());
        assert!(ParamRange::new(0.0, f64::NAN).is_err());
    }
}
