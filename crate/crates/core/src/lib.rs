//! Holomorphically invariant objects on the tetrablock and the symmetrized
//! bidisc.
//!
//! The tetrablock is the domain of triples `(z1, z2, z3)` with
//! `|z1 - conj(z2) z3| + |z2 - conj(z1) z3| + |z3|^2 < 1`; the symmetrized
//! bidisc is the set of pairs `(λ + μ, λμ)` with `λ, μ` in the unit disc.
//!
//! The crate is organised bottom-up:
//!
//! * [`hyperbolic`]: Möbius distance, disc automorphisms, finite Blaschke products.
//! * [`domains`]: membership tests and the quasi-homogeneous gauge.
//! * [`extremals`]: the `Ψ_η` family, automorphisms, the square-root separating
//!   function, the symmetrized-bidisc left inverses, and Carathéodory lower bounds.
//! * [`geodesics`]: analytic discs (geodesics through the origin, boundary
//!   discs, product discs, transported extremals) and Lempert upper bounds.
//! * [`necessary`]: the quadratic-form condition that every complex geodesic of
//!   a circular domain satisfies, as a numerical checker.
//! * [`verify`]: seeded verification campaigns used by the command-line tool.
//!
//! Distances are always reported on both the Möbius scale `m` and the
//! Poincaré scale `p = artanh(m)`.

pub mod domains;
pub mod error;
pub mod extremals;
pub mod geodesics;
pub mod hyperbolic;
pub mod necessary;
pub mod optimize;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);

/// `e^{iθ}`.
#[inline]
pub fn unimodular(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}
