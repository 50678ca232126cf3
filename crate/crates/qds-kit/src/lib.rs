//! Exact-arithmetic toolkit for quantum differential systems.
//!
//! The crate builds the connection matrices of the weighted-projective-space
//! Landau-Ginzburg mirrors and of the Hirzebruch-surface mirror, solves the
//! non-resonant recursion for canonical fundamental solutions, extracts
//! two-point gravitational correlators and J-function truncations, computes
//! the Gamma-class rational-structure constants with two independent routes,
//! and verifies every construction by exact matrix identities.

pub mod error;
pub mod rational;
pub mod gaussian;
pub mod ring;
pub mod poly;
pub mod matrix;
pub mod series;
pub mod localized;
pub mod extension;
pub mod parse;
pub mod wps;
pub mod qds;
pub mod birkhoff;
pub mod gamma;
pub mod rescaling;
pub mod f2;
pub mod json;

pub use error::{Error, Result};
pub use gaussian::GaussianRational;
pub use rational::Rational;
