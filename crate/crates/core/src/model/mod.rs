//! Polynomials, periodic perturbations, torus maps, and experiment configs.

pub mod config;
pub mod periodic;
pub mod poly;
pub mod torus;
