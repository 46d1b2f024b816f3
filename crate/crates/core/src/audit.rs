//! Numerical audits of the h-slant and Darboux-slant characterizations.
//!
//! Each audit evaluates a surface on a grid and records individual checks;
//! failed checks are data, not errors.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{frame_samples, FrameSample, SampleGrid};
use crate::geometry::det3;
use crate::geometry::Vec3;
use crate::slant::{
    classify_samples, constancy, h_slant_axis, sample_derivative, AxisDecomposition, SlantReport,
    DEFAULT_ANGLE_TOL,
};
use crate::surface::RuledSurfaceSpec;

/// Tolerance for checks that differentiate sampled coefficient functions.
pub const DIFFERENCE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TheoremId {
    #[serde(rename = "2.1")]
    HSlantSigma,
    #[serde(rename = "3.1")]
    DarbouxConstantKappa,
    #[serde(rename = "cor3.1")]
    DarbouxDeterminant,
    #[serde(rename = "3.2")]
    HSlantIsDarboux,
    #[serde(rename = "3.3-3.4")]
    DarbouxAxisCoupling,
}

impl TheoremId {
    pub const ALL: [TheoremId; 5] = [
        TheoremId::HSlantSigma,
        TheoremId::DarbouxConstantKappa,
        TheoremId::DarbouxDeterminant,
        TheoremId::HSlantIsDarboux,
        TheoremId::DarbouxAxisCoupling,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::HSlantSigma => "2.1",
            TheoremId::DarbouxConstantKappa => "3.1",
            TheoremId::DarbouxDeterminant => "cor3.1",
            TheoremId::HSlantIsDarboux => "3.2",
            TheoremId::DarbouxAxisCoupling => "3.3-3.4",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::BadParams(format!("unknown theorem id `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditStatus {
    Passed,
    Failed,
    /// Hypotheses not met; nothing beyond consistency was checked.
    Vacuous,
    /// Hypotheses met only in the excluded right-angle case.
    Degenerate,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Check {
    fn close(name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        let residual = (value - expected).abs();
        Self {
            name: name.into(),
            value,
            expected,
            residual,
            tol,
            passed: residual < tol,
        }
    }

    /// A non-negative error measure that must stay below `tol`.
    fn below(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self::close(name, residual, 0.0, tol)
    }

    fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: f64::from(u8::from(ok)),
            expected: 1.0,
            residual: f64::from(u8::from(!ok)),
            tol: 0.5,
            passed: ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Audit {
    pub theorem: TheoremId,
    pub status: AuditStatus,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Audit {
    fn new(theorem: TheoremId) -> Self {
        Self {
            theorem,
            status: AuditStatus::Passed,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Sets `status`, unless some check failed.
    fn conclude(mut self, status: AuditStatus) -> Self {
        self.status = if self.all_passed() {
            status
        } else {
            AuditStatus::Failed
        };
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn mean_vec(v: &[Vec3]) -> Vec3 {
    v.iter().fold(Vec3::zeros(), |acc, x| acc + x) / v.len() as f64
}

fn max_pairwise_distance(v: &[Vec3]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, x) in v.iter().enumerate() {
        for y in &v[i + 1..] {
            worst = worst.max((x - y).norm());
        }
    }
    worst
}

/// Shared state for auditing one surface: its samples and classification.
#[derive(Debug, Clone)]
pub struct Auditor {
    pub samples: Vec<FrameSample>,
    pub report: SlantReport,
    pub tol: f64,
    pub angle_tol: f64,
    s1: Vec<f64>,
}

impl Auditor {
    pub fn new(
        surface: &RuledSurfaceSpec,
        grid: &SampleGrid,
        tol: f64,
        angle_tol: f64,
    ) -> Result<Self> {
        let samples = frame_samples(surface, grid)?;
        Self::from_samples(samples, tol, angle_tol)
    }

    pub fn from_samples(samples: Vec<FrameSample>, tol: f64, angle_tol: f64) -> Result<Self> {
        let report = classify_samples(&samples, tol, angle_tol)?;
        let s1 = samples.iter().map(|s| s.s1).collect();
        Ok(Self {
            samples,
            report,
            tol,
            angle_tol,
            s1,
        })
    }

    fn interior(&self) -> std::ops::Range<usize> {
        1..self.samples.len() - 1
    }

    /// `σ` constant (and non-zero) exactly when the surface is h-slant; the
    /// axis is then `κ/√(1+κ²)·q + σ·h + 1/√(1+κ²)·a`.
    pub fn theorem_2_1(&self) -> Audit {
        let mut audit = Audit::new(TheoremId::HSlantSigma);
        let tol = self.tol;
        let sigma = self.report.sigma;
        let d = sigma.mean;
        let hypothesis = sigma.is_constant && d.abs() > self.angle_tol;
        let status;
        if hypothesis {
            let axes: Vec<Vec3> = self
                .samples
                .iter()
                .map(|s| h_slant_axis(s.kappa, d).to_world(s))
                .collect();
            audit.checks.push(Check::below(
                "axis_fixed_in_space",
                max_pairwise_distance(&axes),
                tol,
            ));
            audit.checks.push(Check::below(
                "h_dot_axis_equals_sigma",
                max_abs(self.samples.iter().zip(&axes).map(|(s, u)| s.h.dot(u) - d)),
                tol,
            ));
            let axis = mean_vec(&axes);
            audit.checks.push(Check::close(
                "axis_norm",
                axis.norm(),
                (1.0 + d * d).sqrt(),
                tol,
            ));
            let dec = AxisDecomposition::of_axis(&self.samples, &axis);
            let n_sq: Vec<f64> = dec.n_values(&self.samples).iter().map(|n| n * n).collect();
            match constancy(&n_sq, tol) {
                Ok(c) => {
                    audit
                        .checks
                        .push(Check::below("n_squared_constant", c.relative_spread, tol))
                }
                Err(e) => audit.notes.push(format!("n² constancy unavailable: {e}")),
            }
            self.push_coefficient_system(&mut audit, &dec);
            status = AuditStatus::Passed;
        } else if sigma.is_constant {
            audit.notes.push(format!(
                "σ ≡ {d:e} is within the right-angle exclusion; forward direction skipped"
            ));
            status = AuditStatus::Degenerate;
        } else {
            audit
                .notes
                .push("σ is not constant; forward direction not applicable".into());
            status = AuditStatus::Vacuous;
        }
        let h_slant = self.report.h.verdict;
        if h_slant {
            audit.checks.push(Check::below(
                "h_slant_implies_sigma_constant",
                sigma.relative_spread,
                tol,
            ));
        }
        audit.checks.push(Check::holds(
            "h_slant_iff_sigma_constant",
            h_slant == hypothesis,
        ));
        audit.conclude(status)
    }

    /// `b1' = c`, `b1 = κ b2`, `b2' = −c κ` for the frame coefficients of a fixed axis.
    fn push_coefficient_system(&self, audit: &mut Audit, dec: &AxisDecomposition) {
        let b1p = sample_derivative(&dec.coeff_q, &self.s1);
        let b2p = sample_derivative(&dec.coeff_a, &self.s1);
        let range = self.interior();
        let first = max_abs(range.clone().map(|i| b1p[i] - dec.coeff_h[i]));
        let second = max_abs(
            range
                .clone()
                .map(|i| dec.coeff_q[i] - self.samples[i].kappa * dec.coeff_a[i]),
        );
        let third = max_abs(range.map(|i| b2p[i] + dec.coeff_h[i] * self.samples[i].kappa));
        audit.checks.push(Check::below(
            "system_b1_prime_minus_c",
            first,
            DIFFERENCE_TOL,
        ));
        audit
            .checks
            .push(Check::below("system_b1_minus_kappa_b2", second, self.tol));
        audit.checks.push(Check::below(
            "system_b2_prime_plus_c_kappa",
            third,
            DIFFERENCE_TOL,
        ));
    }

    /// A strict Darboux-slant surface has constant κ; conversely constant κ fixes `W`.
    pub fn theorem_3_1(&self) -> Audit {
        let mut audit = Audit::new(TheoremId::DarbouxConstantKappa);
        let strict = self.report.darboux_strict.verdict;
        let kappa_const = self.report.kappa.is_constant;
        audit.checks.push(Check::holds(
            "darboux_strict_implies_kappa_constant",
            !strict || kappa_const,
        ));
        if kappa_const {
            let w: Vec<Vec3> = self.samples.iter().map(|s| s.w).collect();
            let mean = mean_vec(&w);
            audit.checks.push(Check::below(
                "kappa_constant_implies_w_fixed",
                w.iter().map(|x| (x - mean).norm()).fold(0.0, f64::max),
                self.tol,
            ));
        }
        let status = if strict {
            AuditStatus::Passed
        } else {
            audit
                .notes
                .push("surface is not strictly Darboux slant; implication holds vacuously".into());
            AuditStatus::Vacuous
        };
        audit.conclude(status)
    }

    /// `det(W, W', W'') = κ'²`, computed from `W' = κ'q` and `W'' = κ''q + κ'h`
    /// with `κ''` differenced over the samples.
    pub fn corollary_3_1(&self) -> Audit {
        let mut audit = Audit::new(TheoremId::DarbouxDeterminant);
        let kp: Vec<f64> = self.samples.iter().map(|s| s.kappa_prime).collect();
        let kpp = sample_derivative(&kp, &self.s1);
        let dets: Vec<f64> = self
            .samples
            .iter()
            .zip(&kpp)
            .map(|(s, &k2)| {
                let w1 = s.q * s.kappa_prime;
                let w2 = s.q * k2 + s.h * s.kappa_prime;
                det3(&s.w, &w1, &w2)
            })
            .collect();
        let identity = max_abs(dets.iter().zip(&kp).map(|(d, k)| d - k * k));
        audit.checks.push(Check::below(
            "det_equals_kappa_prime_squared",
            identity,
            self.tol,
        ));
        if self.report.darboux_strict.verdict {
            audit.checks.push(Check::below(
                "det_vanishes_when_darboux_strict",
                max_abs(dets),
                self.tol,
            ));
        } else {
            audit
                .notes
                .push("not strictly Darboux slant; only the identity was checked".into());
        }
        audit.conclude(AuditStatus::Passed)
    }

    /// On an h-slant surface, the angle between `W` and the unit axis is
    /// constant with cosine `1/√(1+d²)`, where `d = ⟨h, u⟩` for the
    /// non-normalized axis.
    pub fn theorem_3_2(&self) -> Audit {
        let mut audit = Audit::new(TheoremId::HSlantIsDarboux);
        if !self.report.h.verdict {
            audit
                .notes
                .push("surface is not h-slant; nothing to check".into());
            return audit.conclude(AuditStatus::Vacuous);
        }
        let d = self.report.sigma.mean;
        let mut axis = self.report.h.axis;
        if axis.dot(&self.samples[0].h) * d < 0.0 {
            axis = -axis;
        }
        let cos_lambda: Vec<f64> = self
            .samples
            .iter()
            .map(|s| s.w.normalize().dot(&axis))
            .collect();
        let c = match constancy(&cos_lambda, self.tol) {
            Ok(c) => c,
            Err(e) => {
                audit.notes.push(format!("cos λ unavailable: {e}"));
                return audit.conclude(AuditStatus::Failed);
            }
        };
        let expected = 1.0 / (1.0 + d * d).sqrt();
        audit.checks.push(Check::below(
            "cos_lambda_constant",
            c.relative_spread,
            self.tol,
        ));
        audit
            .checks
            .push(Check::close("cos_lambda_value", c.mean, expected, self.tol));
        audit.checks.push(Check::close(
            "h_dot_unit_axis",
            self.report.h.constant.abs(),
            d.abs() * expected,
            self.tol,
        ));
        audit.conclude(AuditStatus::Passed)
    }

    /// Frame coefficients `(a1, a2, a3)` of fixed axes on a constant-κ surface:
    /// `κ a1 + a3 = ⟨W, u⟩`, and `a2` is constant iff `a3 = ⟨W, u⟩/(1+κ²)`.
    ///
    /// Always audits `Ŵ`, plus any `extra_axes`.
    pub fn theorems_3_3_3_4(&self, extra_axes: &[Vec3]) -> Result<Audit> {
        if !self.report.kappa.is_constant {
            return Err(Error::NotDarbouxSlant);
        }
        let mut audit = Audit::new(TheoremId::DarbouxAxisCoupling);
        let tol = self.tol;
        let kappa = self.report.kappa.mean;
        let w_hat = mean_vec(&self.samples.iter().map(|s| s.w).collect::<Vec<_>>()).normalize();
        if self.report.h.verdict && self.report.darboux_strict.verdict {
            audit
                .notes
                .push("surface is both h-slant and strictly Darboux slant".into());
        } else {
            audit.notes.push(format!(
                "hypotheses jointly satisfied: false (h_slant = {}, darboux_strict = {})",
                self.report.h.verdict, self.report.darboux_strict.verdict
            ));
        }
        let axes = std::iter::once(("w_hat".to_string(), w_hat)).chain(
            extra_axes
                .iter()
                .enumerate()
                .map(|(i, u)| (format!("axis{i}"), *u)),
        );
        for (label, axis) in axes {
            let dec = AxisDecomposition::of_axis(&self.samples, &axis);
            let big_c: Vec<f64> = self.samples.iter().map(|s| s.w.dot(&axis)).collect();
            let c_mean = big_c.iter().sum::<f64>() / big_c.len() as f64;
            let eq33 = max_abs(
                (0..self.samples.len())
                    .map(|i| self.samples[i].kappa * dec.coeff_q[i] + dec.coeff_a[i] - c_mean),
            );
            audit.checks.push(Check::below(
                format!("{label}:kappa_a1_plus_a3_equals_c"),
                eq33,
                tol,
            ));

            let a1 = constancy(&dec.coeff_q, tol)?;
            let a2 = constancy(&dec.coeff_h, tol)?;
            let a3 = constancy(&dec.coeff_a, tol)?;
            let a3_target = c_mean / (1.0 + kappa * kappa);
            let a3_matches = a3.is_constant && (a3.mean - a3_target).abs() < tol;
            audit.checks.push(Check::holds(
                format!("{label}:a2_constant_iff_a3_coupled"),
                a2.is_constant == a3_matches,
            ));
            if a2.is_constant {
                audit.checks.push(Check::close(
                    format!("{label}:a3_value"),
                    a3.mean,
                    a3_target,
                    tol,
                ));
                audit.checks.push(Check::holds(
                    format!("{label}:a2_constant_implies_a1_a3_constant"),
                    a1.is_constant && a3.is_constant,
                ));
            }

            // a1' = a2, a1 + a2' = κ a3, a3' = −κ a2 for any fixed axis.
            let d1 = sample_derivative(&dec.coeff_q, &self.s1);
            let d2 = sample_derivative(&dec.coeff_h, &self.s1);
            let d3 = sample_derivative(&dec.coeff_a, &self.s1);
            let system = max_abs(self.interior().flat_map(|i| {
                let k = self.samples[i].kappa;
                [
                    d1[i] - dec.coeff_h[i],
                    dec.coeff_q[i] + d2[i] - k * dec.coeff_a[i],
                    k * dec.coeff_h[i] + d3[i],
                ]
            }));
            audit.checks.push(Check::below(
                format!("{label}:coefficient_system"),
                system,
                DIFFERENCE_TOL,
            ));
        }
        Ok(audit.conclude(AuditStatus::Passed))
    }

    /// Runs one audit; the Darboux-coupling audit on a non-constant κ surface
    /// comes back as `NotApplicable`.
    pub fn run(&self, theorem: TheoremId) -> Audit {
        match theorem {
            TheoremId::HSlantSigma => self.theorem_2_1(),
            TheoremId::DarbouxConstantKappa => self.theorem_3_1(),
            TheoremId::DarbouxDeterminant => self.corollary_3_1(),
            TheoremId::HSlantIsDarboux => self.theorem_3_2(),
            TheoremId::DarbouxAxisCoupling => match self.theorems_3_3_3_4(&[]) {
                Ok(a) => a,
                Err(e) => Audit {
                    theorem,
                    status: AuditStatus::NotApplicable,
                    checks: Vec::new(),
                    notes: vec![e.to_string()],
                },
            },
        }
    }
}

pub fn verify_theorem_2_1(
    surface: &RuledSurfaceSpec,
    grid: &SampleGrid,
    tol: f64,
) -> Result<Audit> {
    Ok(Auditor::new(surface, grid, tol, DEFAULT_ANGLE_TOL)?.theorem_2_1())
}

pub fn verify_theorem_3_1(
    surface: &RuledSurfaceSpec,
    grid: &SampleGrid,
    tol: f64,
) -> Result<Audit> {
    Ok(Auditor::new(surface, grid, tol, DEFAULT_ANGLE_TOL)?.theorem_3_1())
}

pub fn verify_corollary_3_1(
    surface: &RuledSurfaceSpec,
    grid: &SampleGrid,
    tol: f64,
) -> Result<Audit> {
    Ok(Auditor::new(surface, grid, tol, DEFAULT_ANGLE_TOL)?.corollary_3_1())
}

pub fn verify_theorem_3_2(
    surface: &RuledSurfaceSpec,
    grid: &SampleGrid,
    tol: f64,
) -> Result<Audit> {
    Ok(Auditor::new(surface, grid, tol, DEFAULT_ANGLE_TOL)?.theorem_3_2())
}

pub fn verify_theorems_3_3_3_4(
    surface: &RuledSurfaceSpec,
    grid: &SampleGrid,
    tol: f64,
    extra_axes: &[Vec3],
) -> Result<Audit> {
    Auditor::new(surface, grid, tol, DEFAULT_ANGLE_TOL)?.theorems_3_3_3_4(extra_axes)
}
