//! Coordinate-free solid and surface spherical harmonics.
//!
//! The library builds the whole apparatus of spherical harmonics from three
//! primitives that need no spherical coordinates at all:
//!
//! * elementary solid harmonics `(b·r)^l` for complex null vectors `b`,
//! * Maxwell harmonics, i.e. repeated directional derivatives of `1/r`,
//! * Maxwell's integral theorem relating sphere integrals to derivatives
//!   at the center.
//!
//! On top of these it provides the standard `Y_lm` set, recursion relations
//! for the irregular solid harmonics `V_lm`, Gauss-Legendre sphere
//! quadrature with projection/reconstruction, Wigner D rotation matrices
//! built from spinor parameters, Wigner 3j symbols and Gaunt integrals, and
//! the physical expansion layer (addition theorem, Green's function and
//! partial-wave series, method of images, multipole interaction energy,
//! Hobson's integral theorem).
//!
//! Every identity is exposed as a checkable residual; the [`checks`] module
//! bundles the seeded residual suites used by the CLI and the test
//! harness.

pub mod checks;
pub mod coupling;
pub mod expansions;
pub mod harmonics;
pub mod polynom;
pub mod quadrature;
pub mod recursion;
pub mod rotation;
pub mod specfun;

mod error;

pub use error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;
