//! Moving frames, conical curvature and slant classification of ruled surfaces
//! `r(u, v) = f(u) + v·q(u)` in Euclidean 3-space.
//!
//! The pipeline is: a [`RuledSurfaceSpec`] supplies jets of its base curve and
//! unit director; [`frame::frame_samples`] turns them into the frame
//! `{q, h, a}`, the conical curvature κ, `σ = κ'/(1+κ²)^{3/2}` and the Darboux
//! vector `W = κq + a`; [`slant::classify`] looks for fixed axes; and
//! [`audit::Auditor`] checks the h-slant and Darboux-slant characterizations.
//! [`generators`] builds surfaces with a prescribed κ.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod error;
pub mod frame;
pub mod generators;
pub mod geometry;
pub mod slant;
pub mod surface;

pub use error::{Error, Result};
pub use frame::{frame_samples, FrameSample, SampleGrid};
pub use geometry::{Jet3, Param, Vec3};
pub use slant::{classify, SlantReport};
pub use surface::{RigidMotion, RuledSurfaceSpec};
