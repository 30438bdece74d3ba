//! Rigorous-computation toolkit for index systems of piecewise-linear
//! dynamical systems on the interval and circle.
//!
//! The crate verifies index systems (collections of compact pairs linked by
//! a precedes relation), computes the homology data they induce, analyzes
//! the resulting cocyclic subshift for symbolic dynamics and entropy
//! bounds, and constructs index systems from product index pairs over a
//! quantized square. All arithmetic is exact rational.

pub mod analysis;
pub mod cocyclic;
pub mod construct;
pub mod dynamics;
pub mod fixtures;
pub mod format;
pub mod geometry;
pub mod homology;
pub mod index;
pub mod scalar;
