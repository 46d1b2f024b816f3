//! Striction curve, the orthonormal frame `{q, h, a}`, conical curvature and the
//! Darboux vector of a non-cylindrical ruled surface.
//!
//! All derivatives denoted with a prime are taken with respect to `s1`, the arc
//! length of the director's trace on the unit sphere. The frame obeys
//!
//! ```text
//! q' = h,   h' = -q + κ a,   a' = -κ h
//! ```
//!
//! and rotates with angular velocity `W = κ q + a`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{det3, reparam_to_s1, s1_derivatives, Jet3, Param, Vec3, EPS_CYL};
use crate::surface::{ParamRange, RuledSurfaceSpec};

const ORTHO_TOL: f64 = 1e-9;

/// Foot of the common perpendicular of neighbouring rulings on the ruling at `u`.
pub fn striction_point(f_jet: &Jet3, q_jet: &Jet3) -> Result<Vec3> {
    f_jet.expect_param(Param::U)?;
    q_jet.expect_param(Param::U)?;
    let qq = q_jet.d1.dot(&q_jet.d1);
    if !(qq > EPS_CYL * EPS_CYL) {
        return Err(Error::CylindricalDirector { u: f64::NAN });
    }
    Ok(f_jet.d0 - q_jet.d0 * (q_jet.d1.dot(&f_jet.d1) / qq))
}

/// Central tangent `a = (q × q̇)/‖q̇‖`.
pub fn asymptotic_normal(q_jet: &Jet3) -> Result<Vec3> {
    let speed = q_jet.d1.norm();
    if !(speed > EPS_CYL) {
        return Err(Error::CylindricalDirector { u: f64::NAN });
    }
    // ‖q × q̇‖ = ‖q̇‖ for a unit director; normalizing absorbs interpolation noise.
    Ok(q_jet.d0.cross(&q_jet.d1).normalize())
}

/// Central normal `h = a × q`.
pub fn central_normal(q: &Vec3, a: &Vec3) -> Result<Vec3> {
    let deviation = (q.norm() - 1.0)
        .abs()
        .max((a.norm() - 1.0).abs())
        .max(q.dot(a).abs());
    if !(deviation <= ORTHO_TOL) {
        return Err(Error::NonOrthogonalInput { deviation });
    }
    Ok(a.cross(q))
}

/// Conical curvature `κ = det(q, q', q'')`.
pub fn conical_curvature(q_s1: &Jet3) -> Result<f64> {
    q_s1.expect_param(Param::S1)?;
    Ok(det3(&q_s1.d0, &q_s1.d1, &q_s1.d2))
}

/// `κ' = det(q, q', q''')`; the two other terms of the product rule vanish.
pub fn kappa_prime(q_s1: &Jet3) -> Result<f64> {
    q_s1.expect_param(Param::S1)?;
    Ok(det3(&q_s1.d0, &q_s1.d1, &q_s1.d3))
}

pub fn darboux_vector(kappa: f64, q: &Vec3, a: &Vec3) -> Vec3 {
    q * kappa + a
}

/// `σ = κ' / (1 + κ²)^{3/2}`, constant exactly on h-slant surfaces.
pub fn sigma(kappa: f64, kappa_prime: f64) -> f64 {
    kappa_prime / (1.0 + kappa * kappa).powf(1.5)
}

/// The frame and curvature data at a single parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameSample {
    pub u: f64,
    /// Spherical-image arc length, measured from the first sample of a grid.
    pub s1: f64,
    pub q: Vec3,
    pub h: Vec3,
    pub a: Vec3,
    pub kappa: f64,
    pub kappa_prime: f64,
    pub sigma: f64,
    #[serde(rename = "W")]
    pub w: Vec3,
    pub striction_point: Vec3,
    /// `ds1/du` at this sample.
    #[serde(skip)]
    pub s1_rate: f64,
}

/// Evaluates the frame at `u`. The returned sample has `s1 = 0`;
/// [`frame_samples`] fills in accumulated arc length.
pub fn frame_at(surface: &RuledSurfaceSpec, u: f64) -> Result<FrameSample> {
    let with_u = |e: Error| match e {
        Error::CylindricalDirector { .. } => Error::CylindricalDirector { u },
        other => other,
    };
    let q_u = surface.director_jet(u)?;
    let f_u = surface.base_jet(u)?;
    let sd = s1_derivatives(&q_u).map_err(with_u)?;
    let q_s1 = reparam_to_s1(&q_u, &sd)?;
    let q = q_u.d0;
    let a = asymptotic_normal(&q_u).map_err(with_u)?;
    let h = central_normal(&q, &a)?;
    let kappa = conical_curvature(&q_s1)?;
    let kp = kappa_prime(&q_s1)?;
    let c = striction_point(&f_u, &q_u).map_err(with_u)?;
    let sample = FrameSample {
        u,
        s1: 0.0,
        q,
        h,
        a,
        kappa,
        kappa_prime: kp,
        sigma: sigma(kappa, kp),
        w: darboux_vector(kappa, &q, &a),
        striction_point: c,
        s1_rate: sd.s1p,
    };
    let finite = [sample.kappa, sample.kappa_prime, sample.sigma]
        .iter()
        .all(|x| x.is_finite())
        && sample.striction_point.iter().all(|x| x.is_finite());
    if finite {
        Ok(sample)
    } else {
        Err(Error::NonFiniteSample { at: u })
    }
}

/// Strictly increasing parameter values spanning a range.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    u_values: Vec<f64>,
}

impl SampleGrid {
    /// `count` equally spaced values including both endpoints.
    pub fn uniform(range: ParamRange, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: count,
            });
        }
        let n = (count - 1) as f64;
        let u_values = (0..count)
            .map(|i| {
                if i + 1 == count {
                    range.hi
                } else {
                    range.lo + range.len() * (i as f64 / n)
                }
            })
            .collect();
        Ok(Self { u_values })
    }

    pub fn from_values(u_values: Vec<f64>) -> Result<Self> {
        if u_values.len() < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: u_values.len(),
            });
        }
        if u_values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::BadParams("grid must be strictly increasing".into()));
        }
        Ok(Self { u_values })
    }

    pub fn count(&self) -> usize {
        self.u_values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.u_values
    }
}

/// Frames at every grid point, with `s1` accumulated by composite Simpson
/// quadrature of `‖q̇‖` (one midpoint per grid interval).
pub fn frame_samples(surface: &RuledSurfaceSpec, grid: &SampleGrid) -> Result<Vec<FrameSample>> {
    let speed = |u: f64| -> Result<f64> {
        let s = surface.director_jet(u)?.d1.norm();
        if s > EPS_CYL {
            Ok(s)
        } else {
            Err(Error::CylindricalDirector { u })
        }
    };
    let mut out: Vec<FrameSample> = Vec::with_capacity(grid.count());
    for &u in grid.values() {
        let mut sample = frame_at(surface, u)?;
        if let Some(prev) = out.last() {
            let mid = 0.5 * (prev.u + u);
            let ds = (u - prev.u) / 6.0 * (prev.s1_rate + 4.0 * speed(mid)? + sample.s1_rate);
            sample.s1 = prev.s1 + ds;
        }
        out.push(sample);
    }
    Ok(out)
}

/// Worst-case deviations of numerically differentiated frame vectors from the
/// frame equations, in matrix form and in `v' = W × v` form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetResiduals {
    /// `‖q' − h‖`, `‖h' − (−q + κa)‖`, `‖a' + κh‖`.
    pub matrix_form: [f64; 3],
    /// `‖q' − W×q‖`, `‖h' − W×h‖`, `‖a' − W×a‖`.
    pub cross_form: [f64; 3],
}

impl FrenetResiduals {
    pub fn max(&self) -> f64 {
        self.matrix_form
            .iter()
            .chain(self.cross_form.iter())
            .fold(0.0, |m, &x| m.max(x))
    }
}

/// Differentiates the frame at `u` with a 5-point stencil of width `step` in
/// `u` and compares against the frame equations.
pub fn frenet_residuals(surface: &RuledSurfaceSpec, u: f64, step: f64) -> Result<FrenetResiduals> {
    let centre = frame_at(surface, u)?;
    let mut frames = [centre; 5];
    for (k, slot) in frames.iter_mut().enumerate() {
        if k != 2 {
            *slot = frame_at(surface, u + (k as f64 - 2.0) * step)?;
        }
    }
    let diff = |get: fn(&FrameSample) -> Vec3| {
        let v: Vec<Vec3> = frames.iter().map(get).collect();
        (-v[4] + v[3] * 8.0 - v[1] * 8.0 + v[0]) / (12.0 * step * centre.s1_rate)
    };
    let dq = diff(|f| f.q);
    let dh = diff(|f| f.h);
    let da = diff(|f| f.a);
    let FrameSample {
        q, h, a, kappa, w, ..
    } = centre;
    Ok(FrenetResiduals {
        matrix_form: [
            (dq - h).norm(),
            (dh - (-q + a * kappa)).norm(),
            (da + h * kappa).norm(),
        ],
        cross_form: [
            (dq - w.cross(&q)).norm(),
            (dh - w.cross(&h)).norm(),
            (da - w.cross(&a)).norm(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::catalog;
    use crate::surface::ParamValue;
    use approx::assert_abs_diff_eq;
    use std::collections::BTreeMap;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_6, PI, SQRT_2};

    fn u_jet(d0: Vec3, d1: Vec3) -> Jet3 {
        Jet3::new(d0, d1, Vec3::zeros(), Vec3::zeros(), Param::U)
    }

    fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, ParamValue> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), ParamValue::Number(*v)))
            .collect()
    }

    fn near(a: &Vec3, b: &Vec3, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn striction_of_helicoid_is_its_axis() {
        let u: f64 = 0.8;
        let f = u_jet(Vec3::new(0.0, 0.0, u), Vec3::z());
        let q = u_jet(
            Vec3::new(u.cos(), u.sin(), 0.0),
            Vec3::new(-u.sin(), u.cos(), 0.0),
        );
        assert_eq!(striction_point(&f, &q).unwrap(), Vec3::new(0.0, 0.0, u));
    }

    #[test]
    fn striction_of_hyperboloid_is_waist_circle() {
        let u: f64 = 2.1;
        let f = u_jet(
            Vec3::new(u.cos(), u.sin(), 0.0),
            Vec3::new(-u.sin(), u.cos(), 0.0),
        );
        let q = u_jet(
            Vec3::new(-u.sin(), u.cos(), 1.0) / SQRT_2,
            Vec3::new(-u.cos(), -u.sin(), 0.0) / SQRT_2,
        );
        assert!(near(&striction_point(&f, &q).unwrap(), &f.d0, 1e-15));
    }

    #[test]
    fn striction_of_radial_plane_is_origin() {
        let u: f64 = 0.3;
        let f = u_jet(
            Vec3::new(u.cos(), u.sin(), 0.0),
            Vec3::new(-u.sin(), u.cos(), 0.0),
        );
        let q = f;
        assert!(striction_point(&f, &q).unwrap().norm() < 1e-15);
    }

    #[test]
    fn striction_rejects_cylinders() {
        let f = u_jet(Vec3::zeros(), Vec3::x());
        let q = u_jet(Vec3::z(), Vec3::zeros());
        assert!(matches!(
            striction_point(&f, &q),
            Err(Error::CylindricalDirector { .. })
        ));
        assert!(matches!(
            asymptotic_normal(&q),
            Err(Error::CylindricalDirector { .. })
        ));
    }

    #[test]
    fn asymptotic_normal_examples() {
        let u: f64 = 1.3;
        let q = u_jet(
            Vec3::new(u.cos(), u.sin(), 0.0),
            Vec3::new(-u.sin(), u.cos(), 0.0),
        );
        assert!(near(&asymptotic_normal(&q).unwrap(), &Vec3::z(), 1e-15));

        let b = FRAC_PI_4;
        let lat = u_jet(
            Vec3::new(b.cos(), 0.0, b.sin()),
            Vec3::new(0.0, b.cos(), 0.0),
        );
        let a = asymptotic_normal(&lat).unwrap();
        assert!(near(
            &a,
            &Vec3::new(-FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2),
            1e-15
        ));

        let scaled = u_jet(lat.d0, lat.d1 * 7.5);
        assert!(near(&asymptotic_normal(&scaled).unwrap(), &a, 1e-15));
    }

    #[test]
    fn central_normal_examples() {
        assert_eq!(central_normal(&Vec3::x(), &Vec3::z()).unwrap(), Vec3::y());
        let q = Vec3::new(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2);
        let a = Vec3::new(-FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2);
        assert!(near(&central_normal(&q, &a).unwrap(), &Vec3::y(), 1e-15));
        assert!(matches!(
            central_normal(&Vec3::x(), &Vec3::new(0.1, 0.0, 1.0).normalize()),
            Err(Error::NonOrthogonalInput { .. })
        ));
    }

    /// Director jet of a latitude circle at height `sin β`, reparametrized to `s1`.
    fn latitude_s1(beta: f64, u: f64) -> Jet3 {
        let (cb, sb) = (beta.cos(), beta.sin());
        let (c, s) = (u.cos(), u.sin());
        let ju = Jet3::new(
            Vec3::new(cb * c, cb * s, sb),
            Vec3::new(-cb * s, cb * c, 0.0),
            Vec3::new(-cb * c, -cb * s, 0.0),
            Vec3::new(cb * s, -cb * c, 0.0),
            Param::U,
        );
        reparam_to_s1(&ju, &s1_derivatives(&ju).unwrap()).unwrap()
    }

    #[test]
    fn conical_curvature_examples() {
        assert_abs_diff_eq!(conical_curvature(&latitude_s1(0.0, 0.5)).unwrap(), 0.0);
        assert_abs_diff_eq!(
            conical_curvature(&latitude_s1(FRAC_PI_4, 0.5)).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            conical_curvature(&latitude_s1(FRAC_PI_6, 0.5)).unwrap(),
            0.5773502692,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            kappa_prime(&latitude_s1(FRAC_PI_6, 0.5)).unwrap(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn curvature_needs_s1_jets() {
        let j = Jet3::constant(Vec3::x(), Param::U);
        assert!(matches!(conical_curvature(&j), Err(Error::TagError { .. })));
        assert!(matches!(kappa_prime(&j), Err(Error::TagError { .. })));
    }

    #[test]
    fn triple_product_and_projection_agree() {
        for &beta in &[0.2, 0.7, 1.2] {
            let j = latitude_s1(beta, 0.9);
            let a = asymptotic_normal(&Jet3 {
                param: Param::U,
                ..j
            })
            .unwrap();
            let projected = (j.d2 + j.d0).dot(&a);
            assert_abs_diff_eq!(conical_curvature(&j).unwrap(), projected, epsilon = 1e-9);
        }
    }

    #[test]
    fn darboux_and_sigma() {
        assert_eq!(darboux_vector(0.0, &Vec3::x(), &Vec3::z()), Vec3::z());
        assert_eq!(sigma(3.0, 0.0), 0.0);
        assert_abs_diff_eq!(sigma(1.0, 1.0), 0.3535533906, epsilon = 1e-10);
    }

    #[test]
    fn helicoid_samples() {
        let s = catalog("helicoid", &BTreeMap::new()).unwrap();
        let grid = SampleGrid::uniform(s.range, 64).unwrap();
        for f in frame_samples(&s, &grid).unwrap() {
            assert!(f.kappa.abs() < 1e-12);
            assert!(near(&f.w, &Vec3::z(), 1e-12));
            assert!(near(&f.a, &Vec3::z(), 1e-12));
        }
    }

    #[test]
    fn hyperboloid_darboux_vector() {
        let s = catalog("hyperboloid", &BTreeMap::new()).unwrap();
        let grid = SampleGrid::uniform(s.range, 32).unwrap();
        for f in frame_samples(&s, &grid).unwrap() {
            assert!(near(&f.w, &Vec3::new(0.0, 0.0, SQRT_2), 1e-12));
        }
    }

    #[test]
    fn latitude_arc_length() {
        let s = catalog("latitude_cone", &params(&[("beta", FRAC_PI_4)])).unwrap();
        let grid = SampleGrid::uniform(s.range, 128).unwrap();
        let samples = frame_samples(&s, &grid).unwrap();
        assert_abs_diff_eq!(
            samples.last().unwrap().s1,
            2.0 * PI * FRAC_PI_4.cos(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(samples.last().unwrap().s1, 4.442882938, epsilon = 1e-9);
    }

    #[test]
    fn sixteen_samples_strictly_increasing() {
        for name in ["helicoid", "hyperboloid", "radial_plane"] {
            let s = catalog(name, &BTreeMap::new()).unwrap();
            let grid = SampleGrid::uniform(s.range, 16).unwrap();
            let samples = frame_samples(&s, &grid).unwrap();
            assert_eq!(samples.len(), 16);
            assert!(samples.windows(2).all(|w| w[1].s1 > w[0].s1));
        }
    }

    #[test]
    fn frame_is_right_handed_orthonormal() {
        let s = catalog("constant_sigma", &params(&[("d", 0.5)])).unwrap();
        let grid = SampleGrid::uniform(s.range, 40).unwrap();
        for f in frame_samples(&s, &grid).unwrap() {
            assert!((f.q.cross(&f.h) - f.a).norm() < 1e-9);
            assert_abs_diff_eq!(det3(&f.q, &f.h, &f.a), 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(
                f.w.norm(),
                (1.0 + f.kappa * f.kappa).sqrt(),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                f.sigma,
                f.kappa_prime / (1.0 + f.kappa * f.kappa).powf(1.5),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn grid_validation() {
        assert!(SampleGrid::uniform(ParamRange::new(0.0, 1.0).unwrap(), 1).is_err());
        assert!(SampleGrid::from_values(vec![0.0, 0.0, 1.0]).is_err());
        let g = SampleGrid::uniform(ParamRange::new(-1.0, 2.0).unwrap(), 7).unwrap();
        assert_eq!(g.values().first(), Some(&-1.0));
        assert_eq!(g.values().last(), Some(&2.0));
    }
}
