//! Analysis of space curves through their Frenet apparatus.
//!
//! `twistlab` parses parametric curve definitions, computes tangent/normal/binormal
//! frames with curvature and torsion, decomposes position vectors into their Frenet
//! components, classifies curves into geometric families (constant-ratio, T-constant,
//! N-constant, rectifying, helices, equiangular and concho-spirals), and numerically
//! audits the closed-form identities those families are expected to satisfy.
//!
//! The crate is organized along the pipeline:
//!
//! - [`expr`]: the curve expression language and order-3 derivative jets
//! - [`frenet`]: frames, arc length, sampling and curve synthesis from curvatures
//! - [`decomp`]: position-vector decomposition and the fundamental ODE residuals
//! - [`classify`]: family membership flags with fitted parameters
//! - [`audit`]: residual verification of characterization formulas
//! - [`gallery`]: canonical curve and curvature-profile constructors
//! - [`cli`]: the `twistlab` command-line front end
//!
//! All types are immutable after construction and all operations are pure, so the
//! whole pipeline is safe to drive from concurrent workers.

pub mod audit;
pub mod classify;
pub mod cli;
pub mod decomp;
pub mod error;
pub mod expr;
pub mod frenet;
pub mod gallery;
pub mod numeric;
#[cfg(test)]
pub(crate) mod testutil;
pub mod vec3;

pub use error::{Error, Result};
pub use vec3::Vec3;
