//! Horospherical large-margin classifiers in the Poincaré ball.
//!
//! Decision boundaries are horospheres `μ⟨ω,x⟩_B = b`, trained by Riemannian
//! first-order optimization over `R⁺ × Sⁿ⁻¹ × R⁺`.

pub mod cli;
pub mod data;
pub mod geometry;
mod linalg;
pub mod manifold;
pub mod model;
pub mod optim;
pub mod synth;
