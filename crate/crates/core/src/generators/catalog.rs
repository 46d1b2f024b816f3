//! Named closed-form surfaces used as exemplars and test fixtures.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Jet3, Param, Vec3};
use crate::surface::{
    AnalyticCurve, CurveSource, Expectation, ParamRange, ParamValue, Provenance, RuledSurfaceSpec,
};

use super::{generate, GeneratorConfig, KappaProfile};

pub const CATALOG_NAMES: [&str; 6] = [
    "helicoid",
    "latitude_cone",
    "hyperboloid",
    "radial_plane",
    "constant_sigma",
    "tabulated_kappa",
];

struct Params<'a> {
    map: &'a BTreeMap<String, ParamValue>,
    seen: BTreeSet<&'static str>,
}

impl<'a> Params<'a> {
    fn new(map: &'a BTreeMap<String, ParamValue>) -> Self {
        Self {
            map,
            seen: BTreeSet::new(),
        }
    }

    fn number(&mut self, key: &'static str) -> Result<Option<f64>> {
        self.seen.insert(key);
        match self.map.get(key) {
            None => Ok(None),
            Some(ParamValue::Number(x)) if x.is_finite() => Ok(Some(*x)),
            Some(_) => Err(Error::BadParams(format!("`{key}` must be a finite number"))),
        }
    }

    fn list(&mut self, key: &'static str) -> Result<Option<Vec<f64>>> {
        self.seen.insert(key);
        match self.map.get(key) {
            None => Ok(None),
            Some(ParamValue::List(v)) => Ok(Some(v.clone())),
            Some(_) => Err(Error::BadParams(format!("`{key}` must be a list"))),
        }
    }

    fn range(&mut self, default: (f64, f64)) -> Result<ParamRange> {
        match self.list("range")? {
            None => ParamRange::new(default.0, default.1),
            Some(v) if v.len() == 2 => ParamRange::new(v[0], v[1]),
            Some(_) => Err(Error::BadParams("`range` must have two entries".into())),
        }
    }

    fn finish(self) -> Result<()> {
        match self.map.keys().find(|k| !self.seen.contains(k.as_str())) {
            Some(k) => Err(Error::BadParams(format!("unknown parameter `{k}`"))),
            None => Ok(()),
        }
    }
}

fn analytic(
    label: &'static str,
    eval: impl Fn(f64) -> Jet3 + Send + Sync + 'static,
) -> Arc<dyn CurveSource> {
    Arc::new(AnalyticCurve::new(label, eval))
}

fn v(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3::new(x, y, z)
}

/// Builds a named surface.
///
/// | name | parameters (defaults) |
/// |---|---|
/// | `helicoid` | `pitch` (1), `range` ([0, 2π]) |
/// | `latitude_cone` | `beta` ∈ (0, π/2), `range` |
/// | `hyperboloid` | `radius` (1), `pitch` (1), `range` |
/// | `radial_plane` | `range` |
/// | `constant_sigma` | `d`, `alpha` (0), `range` (±min(1.8, 0.95/\|d\|)) |
/// | `tabulated_kappa` | `knots`, `values`, `alpha` (0), `step` (0.01) |
pub fn catalog(name: &str, params: &BTreeMap<String, ParamValue>) -> Result<RuledSurfaceSpec> {
    let mut p = Params::new(params);
    let provenance = Provenance::Catalog {
        name: name.to_string(),
        params: params.clone(),
    };
    let full_turn = (0.0, TAU);
    let spec = match name {
        "helicoid" => {
            let pitch = p.number("pitch")?.unwrap_or(1.0);
            let range = p.range(full_turn)?;
            let base = analytic("helicoid base", move |u| {
                Jet3::new(
                    v(0.0, 0.0, pitch * u),
                    v(0.0, 0.0, pitch),
                    Vec3::zeros(),
                    Vec3::zeros(),
                    Param::U,
                )
            });
            RuledSurfaceSpec::new(base, equator(), range, provenance).with_expectation(
                Expectation {
                    kappa: Some(0.0),
                    sigma: Some(0.0),
                    darboux_vector: Some([0.0, 0.0, 1.0]),
                    q_slant: Some(false),
                    h_slant: Some(false),
                    a_slant: Some(true),
                    darboux_strict: Some(true),
                    darboux_angular: Some(true),
                },
            )
        }
        "latitude_cone" => {
            let beta = p
                .number("beta")?
                .ok_or_else(|| Error::BadParams("latitude_cone needs `beta`".into()))?;
            if !(beta > 0.0 && beta < std::f64::consts::FRAC_PI_2) {
                return Err(Error::BadParams(format!(
                    "beta = {beta} is outside (0, π/2)"
                )));
            }
            let range = p.range(full_turn)?;
            let base = analytic("origin", |_| Jet3::constant(Vec3::zeros(), Param::U));
            RuledSurfaceSpec::new(base, latitude(beta), range, provenance).with_expectation(
                Expectation {
                    kappa: Some(beta.tan()),
                    sigma: Some(0.0),
                    darboux_vector: Some([0.0, 0.0, 1.0 / beta.cos()]),
                    q_slant: Some(true),
                    h_slant: Some(false),
                    a_slant: Some(true),
                    darboux_strict: Some(true),
                    darboux_angular: Some(true),
                },
            )
        }
        "hyperboloid" => {
            let radius = p.number("radius")?.unwrap_or(1.0);
            let pitch = p.number("pitch")?.unwrap_or(1.0);
            if !(radius > 0.0) {
                return Err(Error::BadParams(
                    "hyperboloid radius must be positive".into(),
                ));
            }
            let range = p.range(full_turn)?;
            let base = analytic("waist circle", move |u| circle_jet(radius, u));
            let norm = (1.0 + pitch * pitch).sqrt();
            let director = analytic("hyperboloid director", move |u| {
                let (c, s) = (u.cos(), u.sin());
                Jet3::new(
                    v(-s, c, pitch) / norm,
                    v(-c, -s, 0.0) / norm,
                    v(s, -c, 0.0) / norm,
                    v(c, s, 0.0) / norm,
                    Param::U,
                )
            });
            RuledSurfaceSpec::new(base, director, range, provenance).with_expectation(Expectation {
                kappa: Some(pitch),
                sigma: Some(0.0),
                darboux_vector: Some([0.0, 0.0, norm]),
                q_slant: Some(pitch.abs() >= 0.01),
                h_slant: Some(false),
                a_slant: Some(true),
                darboux_strict: Some(true),
                darboux_angular: Some(true),
            })
        }
        "radial_plane" => {
            let range = p.range(full_turn)?;
            let base = analytic("unit circle", |u| circle_jet(1.0, u));
            RuledSurfaceSpec::new(base, equator(), range, provenance).with_expectation(
                Expectation {
                    kappa: Some(0.0),
                    sigma: Some(0.0),
                    darboux_vector: Some([0.0, 0.0, 1.0]),
                    q_slant: Some(false),
                    h_slant: Some(false),
                    a_slant: Some(true),
                    darboux_strict: Some(true),
                    darboux_angular: Some(true),
                },
            )
        }
        "constant_sigma" => {
            let d = p
                .number("d")?
                .ok_or_else(|| Error::BadParams("constant_sigma needs `d`".into()))?;
            let alpha = p.number("alpha")?.unwrap_or(0.0);
            let reach = if d == 0.0 {
                1.8
            } else {
                (0.95 / d.abs()).min(1.8)
            };
            let range = p.range((-reach, reach))?;
            let profile = KappaProfile::constant_sigma(d, range)?;
            constant_sigma_surface(d, alpha, range, provenance)
                .with_expectation(profile.expectation())
        }
        "tabulated_kappa" => {
            let knots = p
                .list("knots")?
                .ok_or_else(|| Error::BadParams("tabulated_kappa needs `knots`".into()))?;
            let values = p
                .list("values")?
                .ok_or_else(|| Error::BadParams("tabulated_kappa needs `values`".into()))?;
            let alpha = p.number("alpha")?.unwrap_or(0.0);
            let profile = KappaProfile::tabulated(knots, values)?;
            let step = p
                .number("step")?
                .unwrap_or_else(|| (profile.domain.len() / 64.0).min(0.01));
            let mut spec = generate(&GeneratorConfig::new(profile, step, alpha))?;
            spec.provenance = provenance;
            spec
        }
        other => return Err(Error::UnknownCatalogName(other.to_string())),
    };
    p.finish()?;
    Ok(spec)
}

fn circle_jet(r: f64, u: f64) -> Jet3 {
    let (c, s) = (u.cos(), u.sin());
    Jet3::new(
        v(r * c, r * s, 0.0),
        v(-r * s, r * c, 0.0),
        v(-r * c, -r * s, 0.0),
        v(r * s, -r * c, 0.0),
        Param::U,
    )
}

fn equator() -> Arc<dyn CurveSource> {
    analytic("equator", |u| circle_jet(1.0, u))
}

fn latitude(beta: f64) -> Arc<dyn CurveSource> {
    let (cb, sb) = (beta.cos(), beta.sin());
    analytic("latitude circle", move |u| {
        let j = circle_jet(cb, u);
        Jet3 {
            d0: j.d0 + v(0.0, 0.0, sb),
            ..j
        }
    })
}

/// Closed-form frame of the `σ ≡ d` surface, parametrized by `s1`.
///
/// The fixed axis is `e3`. `h` runs along the circle of latitude
/// `⟨h, e3⟩ = d/√(1+d²)` at angular speed `√(1+d²)/√(1−d²s²)`, and the
/// normalized Darboux vector is `√(1+d²)·e3 − d·h`.
#[derive(Debug, Clone, Copy)]
struct SigmaFrame {
    d: f64,
}

impl SigmaFrame {
    /// `(q, h, a, κ, κ')` at `s`.
    fn at(&self, s: f64) -> (Vec3, Vec3, Vec3, f64, f64) {
        let d = self.d;
        let x = d * s;
        let rest = 1.0 - x * x;
        let kappa = x / rest.sqrt();
        let kp = d / rest.powf(1.5);
        let big = (1.0 + d * d).sqrt();
        let phi = if d.abs() < 1e-12 {
            big * s
        } else {
            big * x.asin() / d
        };
        let (cp, sp) = (phi.cos(), phi.sin());
        let h = v(cp / big, sp / big, d / big);
        let t = v(-sp, cp, 0.0);
        let w_hat = v(0.0, 0.0, big) - h * d;
        let r = (1.0 + kappa * kappa).sqrt();
        let q = (w_hat * kappa - t) / r;
        let a = (w_hat + t * kappa) / r;
        (q, h, a, kappa, kp)
    }
}

/// Five-point Gauss–Legendre nodes on [−1, 1] and their weights.
const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

#[derive(Debug)]
struct SigmaSurface {
    frame: SigmaFrame,
    cos_alpha: f64,
    sin_alpha: f64,
    knots: Vec<f64>,
    cumulative: Vec<Vec3>,
}

impl SigmaSurface {
    fn tangent(&self, s: f64) -> Vec3 {
        let (q, _, a, _, _) = self.frame.at(s);
        q * self.cos_alpha + a * self.sin_alpha
    }

    fn integral(&self, from: f64, to: f64) -> Vec3 {
        let (mid, half) = (0.5 * (from + to), 0.5 * (to - from));
        GAUSS5.iter().fold(Vec3::zeros(), |acc, &(x, w)| {
            acc + self.tangent(mid + half * x) * (w * half)
        })
    }

    fn base_point(&self, s: f64) -> Vec3 {
        let k = self.knots.partition_point(|&x| x <= s).saturating_sub(1);
        self.cumulative[k] + self.integral(self.knots[k], s)
    }
}

fn constant_sigma_surface(
    d: f64,
    alpha: f64,
    range: ParamRange,
    provenance: Provenance,
) -> RuledSurfaceSpec {
    let pieces = (range.len() / 0.05).ceil() as usize;
    let knots: Vec<f64> = (0..=pieces)
        .map(|i| range.lo + range.len() * i as f64 / pieces as f64)
        .collect();
    let mut surface = SigmaSurface {
        frame: SigmaFrame { d },
        cos_alpha: alpha.cos(),
        sin_alpha: alpha.sin(),
        knots,
        cumulative: Vec::new(),
    };
    let mut acc = Vec3::zeros();
    surface.cumulative.push(acc);
    for w in surface.knots.windows(2) {
        acc += surface.integral(w[0], w[1]);
        surface.cumulative.push(acc);
    }
    let frame = surface.frame;
    let director = analytic("constant-sigma director", move |s| {
        let (q, h, a, kappa, kp) = frame.at(s);
        Jet3::new(
            q,
            h,
            -q + a * kappa,
            -h * (1.0 + kappa * kappa) + a * kp,
            Param::U,
        )
    });
    let shared = Arc::new(surface);
    let base = analytic("constant-sigma striction curve", move |s| {
        let (q, h, a, kappa, kp) = shared.frame.at(s);
        let (ca, sa) = (shared.cos_alpha, shared.sin_alpha);
        let bend = ca - kappa * sa;
        Jet3::new(
            shared.base_point(s),
            q * ca + a * sa,
            h * bend,
            -h * (kp * sa) + (-q + a * kappa) * bend,
            Param::U,
        )
    });
    RuledSurfaceSpec::new(base, director, range, provenance)
}
