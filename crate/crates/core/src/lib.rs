//! Stable reduction of `p`-cyclic covers `z^p = x(x-1)^β(x-λ)^γ` of the
//! `p`-adic projective line.
//!
//! The crate is `no_std` (it needs `alloc`). Modules, bottom up:
//!
//! - [`padic`]: finite-precision arithmetic in ramified towers `π^e = -p`.
//! - [`residue`]: Artin–Schreier curves over the residue field.
//! - [`cover`]: normalization of four-point covers and `j(λ)`.
//! - [`torsor`]: special fibers of `μ_p`-torsors and blow-up charts.
//! - [`stable`]: classification, model construction, and checks.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod cover;
pub mod padic;
pub mod residue;
pub mod stable;
pub mod torsor;
