//! Numerical laboratory for the mapping class group action on relative
//! SU(3)-character varieties of the once-punctured torus.
//!
//! A representation of the free group on `α, β` into SU(3) is a pair
//! `(a, b)`; the boundary curve maps to the commutator `κ(a, b) = aba⁻¹b⁻¹`.
//! The fiber `R_c = κ⁻¹(c)` is moved around by Dehn twists ([`mcg`]) and by
//! Goldman twist flows ([`flows`]), and is coordinatized up to conjugation by
//! nine traces ([`trace`]). The [`lab`] module runs seeded statistical
//! experiments on these actions and [`cli`] exposes them on the command line.

pub mod cli;
pub mod error;
pub mod fiber;
pub mod flows;
pub mod lab;
pub mod mcg;
pub mod rng;
pub mod su3;
pub mod trace;

pub use error::{Error, Result};
