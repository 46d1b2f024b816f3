//! Vectors, curve jets and the chain rule that carries raw-parameter jets over
//! to the arc length of the director's spherical image.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Director derivative norm below which a ruled surface counts as cylindrical.
pub const EPS_CYL: f64 = 1e-9;

/// Scalar triple product `⟨a, b × c⟩`, i.e. `det(a, b, c)` with the vectors as columns.
pub fn det3(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    a.dot(&b.cross(c))
}

/// The parameter a jet is differentiated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    /// The raw surface parameter.
    U,
    /// Arc length of the director's trace on the unit sphere.
    S1,
}

/// A curve point together with its first three derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub d0: Vec3,
    pub d1: Vec3,
    pub d2: Vec3,
    pub d3: Vec3,
    pub param: Param,
}

impl Jet3 {
    pub fn new(d0: Vec3, d1: Vec3, d2: Vec3, d3: Vec3, param: Param) -> Self {
        Self {
            d0,
            d1,
            d2,
            d3,
            param,
        }
    }

    /// Jet of a curve that does not move.
    pub fn constant(p: Vec3, param: Param) -> Self {
        Self::new(p, Vec3::zeros(), Vec3::zeros(), Vec3::zeros(), param)
    }

    pub fn expect_param(&self, expected: Param) -> Result<()> {
        if self.param == expected {
            Ok(())
        } else {
            Err(Error::TagError {
                expected,
                found: self.param,
            })
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.d0, self.d1, self.d2, self.d3]
            .iter()
            .all(|v| v.iter().all(|c| c.is_finite()))
    }

    /// Applies a linear map to every derivative and an offset to the value.
    pub fn map_linear(&self, m: &nalgebra::Matrix3<f64>, offset: &Vec3) -> Self {
        Self::new(
            m * self.d0 + offset,
            m * self.d1,
            m * self.d2,
            m * self.d3,
            self.param,
        )
    }
}

/// Central-difference jet of `curve` at `u0`.
///
/// `d1` and `d2` use the 5-point fourth-order stencils; `d3` uses the 5-point
/// second-order stencil. Errors are `O(step⁴)`, `O(step⁴)` and `O(step²)`.
pub fn fd_jet<F>(curve: F, u0: f64, step: f64) -> Result<Jet3>
where
    F: Fn(f64) -> Vec3,
{
    debug_assert!(step > 0.0);
    let mut s = [Vec3::zeros(); 5];
    for (k, slot) in s.iter_mut().enumerate() {
        let t = u0 + (k as f64 - 2.0) * step;
        let p = curve(t);
        if !p.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFiniteSample { at: t });
        }
        *slot = p;
    }
    let [m2, m1, c, p1, p2] = s;
    let d1 = (-p2 + p1 * 8.0 - m1 * 8.0 + m2) / (12.0 * step);
    let d2 = (-p2 + p1 * 16.0 - c * 30.0 + m1 * 16.0 - m2) / (12.0 * step * step);
    let d3 = (p2 - p1 * 2.0 + m1 * 2.0 - m2) / (2.0 * step * step * step);
    Ok(Jet3::new(c, d1, d2, d3, Param::U))
}

/// First three derivatives of `s1` with respect to `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S1Derivatives {
    pub s1p: f64,
    pub s1pp: f64,
    pub s1ppp: f64,
}

impl S1Derivatives {
    pub const IDENTITY: Self = Self {
        s1p: 1.0,
        s1pp: 0.0,
        s1ppp: 0.0,
    };
}

/// `ds1/du = ‖dq/du‖` and its next two derivatives, from a director jet in `u`.
pub fn s1_derivatives(q_jet_u: &Jet3) -> Result<S1Derivatives> {
    q_jet_u.expect_param(Param::U)?;
    let (d1, d2, d3) = (q_jet_u.d1, q_jet_u.d2, q_jet_u.d3);
    let speed = d1.norm();
    if !(speed > EPS_CYL) {
        return Err(Error::CylindricalDirector { u: f64::NAN });
    }
    let d12 = d1.dot(&d2);
    Ok(S1Derivatives {
        s1p: speed,
        s1pp: d12 / speed,
        s1ppp: (d2.dot(&d2) + d1.dot(&d3)) / speed - d12 * d12 / speed.powi(3),
    })
}

/// Re-expresses a `u`-jet as derivatives with respect to `s1` (order-3 chain rule).
pub fn reparam_to_s1(jet_u: &Jet3, s1d: &S1Derivatives) -> Result<Jet3> {
    jet_u.expect_param(Param::U)?;
    let S1Derivatives { s1p, s1pp, s1ppp } = *s1d;
    let d1 = jet_u.d1 / s1p;
    let d2 = (jet_u.d2 * s1p - jet_u.d1 * s1pp) / s1p.powi(3);
    let d3 = jet_u.d3 / s1p.powi(3) - jet_u.d2 * (3.0 * s1pp / s1p.powi(4))
        + jet_u.d1 * (3.0 * s1pp * s1pp / s1p.powi(5) - s1ppp / s1p.powi(4));
    Ok(Jet3::new(jet_u.d0, d1, d2, d3, Param::S1))
}
