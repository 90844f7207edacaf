//! Exact decision procedures and rigorous simulation for mod-1 density and
//! uniform distribution of polynomial sequences under periodic perturbation.
//!
//! The library is organized around a declared irrational basis: every exact
//! verdict (independence, classification, constructed relations) is relative
//! to the assumption that 1 together with the declared constants is
//! rationally independent. Sequence values are produced as validated
//! fixed-point enclosures, and the distribution diagnostics count with exact
//! accumulators so results are reproducible bit for bit.

pub mod error;
pub mod classifier;
pub mod construct;
pub mod diagnostics;
pub mod independence;
pub mod generator;
pub mod exactnum;
pub mod model;

pub use error::{Error, Result};
pub use exactnum::basis::{Basis, GeneratorKind, IrrationalGenerator};
pub use exactnum::interval::{FixedInterval, Mod1};
pub use exactnum::rational::Rational;
pub use exactnum::symbolic::SymbolicReal;
pub use model::config::{Config, SequenceSpec};
pub use model::periodic::{PeriodicBody, PeriodicFunction, Pwl, TrigTerm};
pub use model::poly::PolynomialSR;
pub use model::torus::TorusMap;
