//! Exact rank ratios, radii of comparison and oscillation on small
//! Cu-semigroup models.
//!
//! The crate is organized bottom-up: [`scalar`] provides exact arithmetic
//! on `[0, ∞]`; [`cucore`] states the model contract; [`models`] and
//! [`spectral`] implement it; [`functionals`], [`rankratio`], [`radius`]
//! and [`oscillation`] compute invariants; [`harness`] turns the known
//! identities between them into randomized, shrinking property checks.

pub mod cucore;
pub mod error;
pub mod functionals;
pub mod harness;
pub mod models;
pub mod oscillation;
pub mod radius;
pub mod rankratio;
pub mod scalar;
pub mod spectral;

pub use cucore::{ChainLaw, CuModel, Ray};
pub use error::{Error, Result};
pub use functionals::{Functional, NormalizedFamily};
pub use models::{AnyElement, AnyModel, DirectSum, Idem, IdempotentModel, PerforatedModel, PointFnModel};
pub use oscillation::OscillationReport;
pub use radius::{RcMethod, RcResult};
pub use rankratio::{RhoMethod, RhoResult, RhoWitness};
pub use scalar::{ExtNat, ExtScalar};
pub use spectral::{PlFunction, RankFn, SpectralModel, SpectralProfile};
