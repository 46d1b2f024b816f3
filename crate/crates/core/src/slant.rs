//! Constancy tests, fixed-axis detection and q-/h-/a-/Darboux-slant classification.

use std::ops::{Add, Mul, Sub};

use nalgebra::{Matrix3, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{frame_samples, FrameSample, SampleGrid};
use crate::geometry::Vec3;
use crate::surface::RuledSurfaceSpec;

/// Default constancy tolerance for surfaces with analytic jets.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Default constancy tolerance for sampled surfaces.
pub const SAMPLED_TOL: f64 = 1e-3;
/// `|cos θ|` must exceed this for a slant verdict (θ = π/2 is excluded).
pub const DEFAULT_ANGLE_TOL: f64 = 1e-3;
/// Minimum sample count for classification.
pub const MIN_SAMPLES: usize = 16;

const DEGENERATE_TRACE: f64 = 1e-18;
const EIGEN_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstancyResult {
    pub mean: f64,
    /// `max − min` over the samples.
    pub spread: f64,
    /// `spread / (1 + |mean|)`.
    pub relative_spread: f64,
    pub is_constant: bool,
}

pub fn constancy(values: &[f64], tol: f64) -> Result<ConstancyResult> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(i) = values.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFiniteSample { at: i as f64 });
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let spread = hi - lo;
    let relative_spread = spread / (1.0 + mean.abs());
    Ok(ConstancyResult {
        mean,
        spread,
        relative_spread,
        is_constant: relative_spread < tol,
    })
}

/// Derivatives over a non-uniform grid, from the local interpolant through the
/// five nearest samples (fewer if the grid is shorter).
pub fn sample_derivative<T>(values: &[T], s: &[f64]) -> Vec<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let n = values.len();
    assert_eq!(n, s.len());
    assert!(n >= 2);
    let width = n.min(STENCIL);
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(width / 2).min(n - width);
            let nodes = &s[lo..lo + width];
            let w = lagrange_slope_weights(nodes, s[i]);
            let base = values[lo];
            // Weights sum to zero, so differencing against `base` is exact.
            (1..width).fold(values[lo] - base, |acc, j| {
                acc + (values[lo + j] - base) * w[j]
            })
        })
        .collect()
}

const STENCIL: usize = 5;

/// Weights `w` with `p'(x) = Σ w_j y_j` for the interpolant through `nodes`.
fn lagrange_slope_weights(nodes: &[f64], x: f64) -> Vec<f64> {
    let m = nodes.len();
    (0..m)
        .map(|j| {
            let denom: f64 = (0..m)
                .filter(|&k| k != j)
                .map(|k| nodes[j] - nodes[k])
                .product();
            let numer: f64 = (0..m)
                .filter(|&k| k != j)
                .map(|k| {
                    (0..m)
                        .filter(|&l| l != j && l != k)
                        .map(|l| x - nodes[l])
                        .product::<f64>()
                })
                .sum();
            numer / denom
        })
        .collect()
}

/// Best fixed axis for a family of unit-ish vectors sampled along `s1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisFit {
    pub axis: Vec3,
    /// Smallest eigenvalue of `Σ v'v'ᵀ` over its trace; in `[0, 1/3]`.
    pub residual: f64,
    /// The vectors do not move; `axis` is their mean direction.
    pub degenerate: bool,
    /// The two smallest eigenvalues coincide, so no axis is singled out.
    pub tie: bool,
}

/// Fits the direction `u` minimizing `Σ ⟨v'(s1), u⟩²`.
///
/// A fixed axis with `⟨v, u⟩` constant annihilates every `v'`, so `u` is the
/// eigenvector of the smallest eigenvalue of `M = Σ v'v'ᵀ`. The axis sign is
/// chosen so that the mean of `⟨v, u⟩` is non-negative.
pub fn detect_axis(vectors: &[Vec3], s1: &[f64]) -> Result<AxisFit> {
    if vectors.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: vectors.len(),
        });
    }
    if s1.len() != vectors.len() {
        return Err(Error::BadParams(
            "one s1 value per vector is required".into(),
        ));
    }
    let mean = vectors.iter().fold(Vec3::zeros(), |acc, v| acc + v) / vectors.len() as f64;
    let orient = |axis: Vec3| {
        if mean.dot(&axis) < 0.0 {
            -axis
        } else {
            axis
        }
    };
    let gram = sample_derivative(vectors, s1)
        .iter()
        .fold(Matrix3::zeros(), |m, d| m + d * d.transpose());
    let trace = gram.trace();
    if trace < DEGENERATE_TRACE {
        let norm = mean.norm();
        if !(norm > 0.0) {
            return Err(Error::DegenerateSpan);
        }
        return Ok(AxisFit {
            axis: mean / norm,
            residual: 0.0,
            degenerate: true,
            tie: false,
        });
    }
    let eig = SymmetricEigen::new(gram);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let smallest = eig.eigenvalues[order[0]].max(0.0);
    let second = eig.eigenvalues[order[1]];
    let axis = eig.eigenvectors.column(order[0]).normalize();
    Ok(AxisFit {
        axis: orient(axis),
        residual: smallest / trace,
        degenerate: false,
        tie: (second - smallest) / trace < EIGEN_TIE,
    })
}

/// Frame coordinates `(coeff_q, coeff_h, coeff_a)` of a vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameCoefficients {
    pub q: f64,
    pub h: f64,
    pub a: f64,
}

impl FrameCoefficients {
    pub fn to_world(&self, sample: &FrameSample) -> Vec3 {
        sample.q * self.q + sample.h * self.h + sample.a * self.a
    }

    pub fn norm(&self) -> f64 {
        (self.q * self.q + self.h * self.h + self.a * self.a).sqrt()
    }
}

/// Axis of an h-slant surface with `σ ≡ d`, in frame coordinates:
/// `u = κ/√(1+κ²)·q + d·h + 1/√(1+κ²)·a`.
pub fn h_slant_axis(kappa: f64, d: f64) -> FrameCoefficients {
    let r = (1.0 + kappa * kappa).sqrt();
    FrameCoefficients {
        q: kappa / r,
        h: d,
        a: 1.0 / r,
    }
}

/// Frame coefficients of one fixed vector at every sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisDecomposition {
    pub coeff_q: Vec<f64>,
    pub coeff_h: Vec<f64>,
    pub coeff_a: Vec<f64>,
}

impl AxisDecomposition {
    pub fn of_axis(samples: &[FrameSample], axis: &Vec3) -> Self {
        Self {
            coeff_q: samples.iter().map(|s| s.q.dot(axis)).collect(),
            coeff_h: samples.iter().map(|s| s.h.dot(axis)).collect(),
            coeff_a: samples.iter().map(|s| s.a.dot(axis)).collect(),
        }
    }

    pub fn at(&self, i: usize) -> FrameCoefficients {
        FrameCoefficients {
            q: self.coeff_q[i],
            h: self.coeff_h[i],
            a: self.coeff_a[i],
        }
    }

    pub fn reconstruct(&self, samples: &[FrameSample], i: usize) -> Vec3 {
        self.at(i).to_world(&samples[i])
    }

    /// `coeff_a·√(1+κ²)`, constant up to sign on h-slant surfaces.
    pub fn n_values(&self, samples: &[FrameSample]) -> Vec<f64> {
        self.coeff_a
            .iter()
            .zip(samples)
            .map(|(b2, s)| b2 * (1.0 + s.kappa * s.kappa).sqrt())
            .collect()
    }
}

/// Outcome of one slant test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlantVerdict {
    pub verdict: bool,
    /// Unit axis, sign chosen so that `constant ≥ 0`.
    pub axis: Vec3,
    /// Mean of `⟨v, axis⟩`; for the strict Darboux test this is `⟨W, u⟩` and may exceed 1.
    pub constant: f64,
    /// `acos(constant)` when `v` is a unit vector.
    pub angle: Option<f64>,
    pub fit_residual: f64,
    /// Relative spread of `⟨v, axis⟩`.
    pub spread: f64,
    /// `max(fit_residual, spread)`; a true verdict has `residual < tol`.
    pub residual: f64,
    pub degenerate: bool,
    pub tie: bool,
}

fn judge(
    vectors: &[Vec3],
    s1: &[f64],
    tol: f64,
    unit: bool,
    angle_tol: Option<f64>,
) -> Result<SlantVerdict> {
    let fit = detect_axis(vectors, s1)?;
    let dots: Vec<f64> = vectors.iter().map(|v| v.dot(&fit.axis)).collect();
    let c = constancy(&dots, tol)?;
    let residual = fit.residual.max(c.relative_spread);
    let steep_enough = angle_tol.is_none_or(|t| c.mean.abs() > t);
    Ok(SlantVerdict {
        verdict: !fit.tie && residual < tol && steep_enough,
        axis: fit.axis,
        constant: c.mean,
        angle: unit.then(|| c.mean.clamp(-1.0, 1.0).acos()),
        fit_residual: fit.residual,
        spread: c.relative_spread,
        residual,
        degenerate: fit.degenerate,
        tie: fit.tie,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlantReport {
    pub q: SlantVerdict,
    pub h: SlantVerdict,
    pub a: SlantVerdict,
    /// `⟨W, u⟩` constant for a fixed `u`.
    pub darboux_strict: SlantVerdict,
    /// The angle between `W` and a fixed `u` is constant.
    pub darboux_angular: SlantVerdict,
    pub kappa: ConstancyResult,
    pub sigma: ConstancyResult,
}

pub fn classify(
    surface: &RuledSurfaceSpec,
    grid: &SampleGrid,
    tol: f64,
    angle_tol: f64,
) -> Result<SlantReport> {
    let samples = frame_samples(surface, grid)?;
    classify_samples(&samples, tol, angle_tol)
}

pub fn classify_samples(samples: &[FrameSample], tol: f64, angle_tol: f64) -> Result<SlantReport> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: samples.len(),
        });
    }
    let s1: Vec<f64> = samples.iter().map(|s| s.s1).collect();
    let pick = |f: fn(&FrameSample) -> Vec3| samples.iter().map(f).collect::<Vec<_>>();
    let w = pick(|s| s.w);
    let w_hat: Vec<Vec3> = w.iter().map(|v| v.normalize()).collect();
    let kappas: Vec<f64> = samples.iter().map(|s| s.kappa).collect();
    let sigmas: Vec<f64> = samples.iter().map(|s| s.sigma).collect();
    let strict = judge(&w, &s1, tol, false, None)?;
    Ok(SlantReport {
        q: judge(&pick(|s| s.q), &s1, tol, true, Some(angle_tol))?,
        h: judge(&pick(|s| s.h), &s1, tol, true, Some(angle_tol))?,
        a: judge(&pick(|s| s.a), &s1, tol, true, Some(angle_tol))?,
        darboux_strict: SlantVerdict {
            verdict: !strict.tie && strict.spread < tol,
            ..strict
        },
        darboux_angular: judge(&w_hat, &s1, tol, true, None)?,
        kappa: constancy(&kappas, tol)?,
        sigma: constancy(&sigmas, tol)?,
    })
}
