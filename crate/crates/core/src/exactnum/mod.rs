//! Exact rational arithmetic, symbolic reals over a declared irrational
//! basis, validated fixed-point enclosures, exact kernels, and the advisory
//! integer-relation detector.

pub mod basis;
pub mod eval;
pub mod interval;
pub mod kernel;
pub mod rational;
pub mod relation;
pub mod symbolic;
