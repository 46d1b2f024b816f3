#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ruled::generators::catalog;
use ruled::surface::ParamValue;
use ruled::RuledSurfaceSpec;

pub fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, ParamValue> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), ParamValue::Number(*v)))
        .collect()
}

pub fn named(name: &str, pairs: &[(&str, f64)]) -> RuledSurfaceSpec {
    catalog(name, &params(pairs)).unwrap()
}

pub fn tabulated(knots: Vec<f64>, values: Vec<f64>, alpha: f64) -> RuledSurfaceSpec {
    let mut p = BTreeMap::new();
    p.insert("knots".to_string(), ParamValue::List(knots));
    p.insert("values".to_string(), ParamValue::List(values));
    p.insert("alpha".to_string(), ParamValue::Number(alpha));
    catalog("tabulated_kappa", &p).unwrap()
}

/// One representative of every catalog entry.
pub fn catalog_fixtures() -> Vec<(String, RuledSurfaceSpec)> {
    let knots: Vec<f64> = (0..9).map(|i| -1.0 + 0.25 * i as f64).collect();
    let values: Vec<f64> = knots.iter().map(|s| 0.5 + 0.8 * s - 0.3 * s * s).collect();
    vec![
        ("helicoid".into(), named("helicoid", &[])),
        (
            "latitude_cone".into(),
            named("latitude_cone", &[("beta", FRAC_PI_4)]),
        ),
        (
            "hyperboloid".into(),
            named("hyperboloid", &[("radius", 1.5), ("pitch", 0.7)]),
        ),
        ("radial_plane".into(), named("radial_plane", &[])),
        (
            "constant_sigma".into(),
            named("constant_sigma", &[("d", 0.5)]),
        ),
        ("tabulated_kappa".into(), tabulated(knots, values, 0.3)),
    ]
}

/// Tabulated-κ surfaces with seeded random knot values in [−2, 2].
pub fn random_tabulated(count: usize, seed: u64) -> Vec<RuledSurfaceSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(5..=10);
            let len = rng.random_range(1.0..3.0);
            let knots: Vec<f64> = (0..n).map(|i| len * i as f64 / (n - 1) as f64).collect();
            let values: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let alpha = rng.random_range(-1.5..1.5);
            tabulated(knots, values, alpha)
        })
        .collect()
}
