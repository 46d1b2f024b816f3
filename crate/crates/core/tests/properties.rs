mod common;

use nalgebra::{Rotation3, Unit};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ruled::frame::{frame_samples, SampleGrid};
use ruled::geometry::{fd_jet, reparam_to_s1, s1_derivatives, S1Derivatives};
use ruled::slant::{classify, detect_axis, AxisDecomposition, DEFAULT_ANGLE_TOL, DEFAULT_TOL};
use ruled::{Jet3, Param, RigidMotion, Vec3};

use common::{catalog_fixtures, named};

fn vec3() -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-3.0..3.0f64).prop_map(Vec3::from)
}

fn rotation() -> impl Strategy<Value = Rotation3<f64>> {
    (vec3(), -3.1..3.1f64).prop_filter_map("axis too short", |(axis, angle)| {
        Unit::try_new(axis, 1e-3).map(|a| Rotation3::from_axis_angle(&a, angle))
    })
}

/// Jet of a unit director built from a random spherical curve.
fn unit_director_jet(c: [f64; 6], u: f64) -> Jet3 {
    let curve = move |t: f64| {
        let theta = 1.0 + c[0] * t + c[1] * t * t;
        let phi = c[2] * t + c[3] * (c[4] * t).sin() + c[5];
        Vec3::new(
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        )
    };
    fd_jet(curve, u, 1e-3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cross_product_identities(a in vec3(), b in vec3(), c in vec3()) {
        let scale = 1.0 + a.norm() * b.norm() * c.norm();
        prop_assert!((a.cross(&b).dot(&a)).abs() < 1e-12 * scale);
        let lhs = a.cross(&b.cross(&c));
        let rhs = b * a.dot(&c) - c * a.dot(&b);
        prop_assert!((lhs - rhs).norm() < 1e-12 * scale);
        prop_assert!((ruled::geometry::det3(&a, &b, &c) - a.dot(&b.cross(&c))).abs() < 1e-12 * scale);
    }

    #[test]
    fn arc_length_reparam_of_unit_director(c in prop::array::uniform6(0.3..1.2f64), u in -0.5..0.5f64) {
        let jet = unit_director_jet(c, u);
        let sd = s1_derivatives(&jet).unwrap();
        let s = reparam_to_s1(&jet, &sd).unwrap();
        prop_assert_eq!(s.param, Param::S1);
        prop_assert!(s.d0.dot(&s.d1).abs() < 1e-9);
        prop_assert!((s.d1.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn linear_reparam_inverts(d in prop::array::uniform4(vec3()), rate in 0.1..10.0f64) {
        let jet = Jet3::new(d[0], d[1], d[2], d[3], Param::U);
        let forward = S1Derivatives { s1p: rate, s1pp: 0.0, s1ppp: 0.0 };
        let s = reparam_to_s1(&jet, &forward).unwrap();
        // Scaling back to u multiplies the k-th derivative by rate^k.
        let back = [s.d0, s.d1 * rate, s.d2 * rate.powi(2), s.d3 * rate.powi(3)];
        for (x, y) in back.iter().zip([jet.d0, jet.d1, jet.d2, jet.d3]) {
            prop_assert!((x - y).norm() < 1e-12 * (1.0 + y.norm()));
        }
    }

    #[test]
    fn latitude_axis_is_recovered_after_rotation(beta in 0.2..1.3f64, rot in rotation()) {
        let motion = RigidMotion::new(*rot.matrix(), Vec3::new(0.5, -1.0, 2.0)).unwrap();
        let s = named("latitude_cone", &[("beta", beta)]).transformed(&motion);
        let grid = SampleGrid::uniform(s.range, 64).unwrap();
        let samples = frame_samples(&s, &grid).unwrap();
        let q: Vec<Vec3> = samples.iter().map(|x| x.q).collect();
        let s1: Vec<f64> = samples.iter().map(|x| x.s1).collect();
        let fit = detect_axis(&q, &s1).unwrap();
        let want = rot * Vec3::z();
        prop_assert!((fit.axis - want).norm() < 1e-9, "{:?} vs {:?}", fit.axis, want);
        let dec = AxisDecomposition::of_axis(&samples, &fit.axis);
        for i in 0..samples.len() {
            prop_assert!((dec.reconstruct(&samples, i) - fit.axis).norm() < 1e-9);
        }
    }
}

#[test]
fn analytic_jets_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (name, s) in catalog_fixtures() {
        let step = 1e-3 * s.range.len();
        for _ in 0..64 {
            let u = rng.random_range(s.range.lo + 3.0 * step..s.range.hi - 3.0 * step);
            for (which, jet, fd) in [
                (
                    "director",
                    s.director_jet(u).unwrap(),
                    fd_jet(|t| s.director_jet(t).unwrap().d0, u, step),
                ),
                (
                    "base",
                    s.base_jet(u).unwrap(),
                    fd_jet(|t| s.base_jet(t).unwrap().d0, u, step),
                ),
            ] {
                let fd = fd.unwrap();
                for (k, a, b, tol) in [
                    (1, jet.d1, fd.d1, 1e-5),
                    (2, jet.d2, fd.d2, 1e-5),
                    (3, jet.d3, fd.d3, 1e-3),
                ] {
                    for i in 0..3 {
                        let rel = (a[i] - b[i]).abs() / a[i].abs().max(1.0);
                        assert!(
                            rel < tol,
                            "{name} {which} d{k}[{i}] at u={u}: {} vs {}",
                            a[i],
                            b[i]
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn rigid_motion_preserves_scalars_and_verdicts() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let axis = Unit::new_normalize(Vec3::new(rng.random(), rng.random(), rng.random()));
    let rot = Rotation3::from_axis_angle(&axis, rng.random_range(0.5..2.5));
    let motion = RigidMotion::new(*rot.matrix(), Vec3::new(3.0, -2.0, 1.0)).unwrap();
    for (name, s) in catalog_fixtures() {
        let moved = s.transformed(&motion);
        let grid = SampleGrid::uniform(s.range, 128).unwrap();
        let a = frame_samples(&s, &grid).unwrap();
        let b = frame_samples(&moved, &grid).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.kappa - y.kappa).abs() < 1e-9, "{name}");
            assert!((x.sigma - y.sigma).abs() < 1e-9, "{name}");
            assert!((x.s1 - y.s1).abs() < 1e-9, "{name}");
            assert!((rot * x.w - y.w).norm() < 1e-9, "{name}");
            assert!(
                (motion.apply_point(&x.striction_point) - y.striction_point).norm() < 1e-9,
                "{name}"
            );
        }
        let ra = classify(&s, &grid, DEFAULT_TOL, DEFAULT_ANGLE_TOL).unwrap();
        let rb = classify(&moved, &grid, DEFAULT_TOL, DEFAULT_ANGLE_TOL).unwrap();
        for (va, vb) in [
            (ra.q, rb.q),
            (ra.h, rb.h),
            (ra.a, rb.a),
            (ra.darboux_strict, rb.darboux_strict),
            (ra.darboux_angular, rb.darboux_angular),
        ] {
            assert_eq!(va.verdict, vb.verdict, "{name}");
            assert!((va.constant - vb.constant).abs() < 1e-9, "{name}");
            if va.verdict {
                assert!((rot * va.axis - vb.axis).norm() < 1e-9, "{name}");
            }
        }
    }
}
