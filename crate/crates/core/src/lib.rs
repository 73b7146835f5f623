//! Holomorphic representation of the θ-family of surfaces in Minkowski 4-space
//! and the numerical checks built on it.

pub mod association;
pub mod checks;
pub mod export;
pub mod expr;
pub mod geometry;
pub mod grid;
pub mod minkowski;
pub mod quadrature;
pub mod scenario;
pub mod weierstrass;
