//! Generic Fock-space representations of the generalized diamond group
//! `G = ℝᵐ ⋉ Hₙ`, together with the symbol calculi attached to them:
//! Berezin symbols, the complex Weyl correspondence `W₀`, its Schrödinger
//! twin `W₁`, the coadjoint-orbit map `ψ`, and exact star products
//! (Moyal, `∗₁`, `∗₀`) with star exponentials.
//!
//! Every operator that shows up in the theory (representation operators,
//! Stratonovich–Weyl quantizers, coherent projectors) has a kernel of the
//! form `c·exp(aᵀz + bᵀw̄ + zᵀQw̄)`. [`gaussian::GaussianKernelOp`] keeps that
//! family closed under composition, adjoint and trace, so most symbols are
//! computed exactly. The [`fock`] module provides the independent numerical
//! oracle (truncated Fock matrices and Gauss–Hermite quadrature) used to
//! check those closed forms.
//!
//! Conventions:
//!
//! * `zw = Σ z_k w_k` is bilinear; conjugation is always explicit.
//! * The ℝᵐ-factor is written additively, so `t⁻¹` is `-t`.
//! * `χ(t) = exp(i⟨β, t⟩)`, hence `-i dχ = β`.
//! * Fock measure `dμ_λ = (λ/2π)ⁿ dm`, coherent states `e_z(w) = exp(λ z̄w/2)`.

pub mod algebra;
pub mod correspondences;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod group;
pub mod orbit;
pub mod representation;
pub mod sample;
pub mod star;
pub mod verify;

mod cplx;

pub use cplx::C64;
pub use error::{Error, Result};
