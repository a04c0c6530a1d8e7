//! Invariant connections on reductive homogeneous spaces `G/H`.
//!
//! Everything is expressed through a Lie algebra `𝔤` with a chosen basis, a
//! reductive splitting `𝔤 = 𝔥 ⊕ 𝔪` and a bilinear map `α: 𝔪 × 𝔪 → 𝔪`
//! determining the connection. Geodesics and parallel transport are
//! integrated as ODEs on 𝔪 with the group frame carried alongside.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod catalog;
pub mod connection;
pub mod error;
pub mod linalg;
pub mod reductive;
pub mod report;
pub mod transport;

pub use algebra::{AlgebraVector, GroupElement, StructuredLieAlgebra};
pub use catalog::{Diagnostic, SpaceBundle};
pub use connection::{naturally_reductive_check, AlphaLabel, AlphaMap, TensorAtOrigin, TensorKind};
pub use error::{Error, Result};
pub use linalg::{Mat, Tensor3};
pub use reductive::{MetricOnM, ReductiveDecomposition};
pub use report::CheckReport;
pub use transport::{
    base_trajectory, convergence_probe, geodesic, holonomy, horizontal_lift, parallel_transport,
    ConvergenceProblem, ConvergenceReport, CurveSpec, EulerArnold, IntegratorOptions, Trajectory,
};
