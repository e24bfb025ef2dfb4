//! Symbolic and numeric differential geometry of metallic structures on
//! pseudo-Riemannian chart manifolds.
//!
//! Everything here is `no_std` with `alloc`. File formats, reports and the
//! command line live in the companion `mgeo` crate.

#![no_std]

extern crate alloc;

pub mod catalog;
pub mod connections;
pub mod error;
pub mod expr;
pub mod generalized;
pub mod lifts;
pub mod manifold;
pub mod metallic;
pub mod sample;
pub mod suite;
pub mod tensor;

pub use error::{GeomError, Result};
pub use expr::{parse, DomainError, Expr, ParseError};
pub use manifold::{ChartManifold, ChartSpec};
pub use metallic::{MetallicParams, NordenFamilyParams, RootSign};
pub use sample::{CheckReport, Interval, PointSample, SampleConfig, Verifier};
pub use tensor::{ExprMatrix, Tensor3, Tensor4};
pub use suite::{Suite, SuiteConfig};
