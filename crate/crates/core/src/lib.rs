//! Relative trisection diagrams of compact 4-manifolds with boundary.
//!
//! A diagram is a closed-up compact surface together with three systems of
//! simple closed curves (alpha, beta, gamma), encoded combinatorially as a
//! rotation-system map with curves carried as dart paths. This crate builds
//! such diagrams, validates them, applies moves (slides, stabilization,
//! balancing), computes boundary open-book monodromy, glues diagrams along
//! matched boundary components, compiles Kirby-style handle presentations,
//! generates diagrams for thickened page bundles over the circle, and renders
//! everything to SVG.

pub mod error;
pub mod map;
pub mod surface;
pub mod curves;
pub mod surgery;
pub mod isotopy;
pub mod offset;
pub mod params;
pub mod standards;
pub mod diagram;
pub mod transforms;
pub mod monodromy;
pub mod gluing;
pub mod kirby;
pub mod product;
pub mod format;
pub mod render;

#[cfg(test)]
mod fixtures;

pub use error::{Error, Result};
