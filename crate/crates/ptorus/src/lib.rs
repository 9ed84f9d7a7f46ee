//! Punctured-torus bundle tessellations.
//!
//! Starting from a monodromy RL-word this crate builds the layered cusp
//! triangulation Δ(φ) and the Cannon-Thurston tessellation CW(φ) on finite
//! windows, checks the word identities relating the elliptic generators
//! `P_{m,n}` and `Q_{m,n}`, converts each tessellation into the other, solves
//! the gluing equations of the layered ideal triangulation and develops the
//! cusp into the complex plane.

pub mod cli;
pub mod complexes;
pub mod geometry;
pub mod monodromy;
pub mod ogroup;
pub mod render;
pub mod verify;

pub use monodromy::{canonicalize, parse_rl_word, Letter, Monodromy, RLWord, Slope};
pub use ogroup::{Automorphism, EgSystem, Gen, GroupElement};
