//! Exact computations in extended affine Hecke algebras attached to based root
//! data, and verification of duality identities relating induced modules,
//! twisted involutions, and the topology of Coxeter complexes.
//!
//! The crate is organized bottom-up:
//!
//! * [`coefficients`] — Laurent polynomials in formal parameter square roots,
//!   the coefficient ring for all generic Hecke computations.
//! * [`linalg`] — dense exact matrices over the rationals.
//! * [`root_datum`] — based root data (X, R, Y, R∨) with parameter maps.
//! * [`weyl`] — finite Weyl groups, their subgroups, coset combinatorics, and
//!   class functions.
//! * [`affine_weyl`] — the extended affine Weyl group Ω ⋉ W_aff acting on the
//!   alcove complex.
//! * [`hecke`] — the extended affine Hecke algebra in the standard and
//!   Bernstein presentations, plus a generic finite Hecke engine.
//! * [`hecke_modules`] — finite-dimensional modules with exact matrices,
//!   parabolic induction, and trace bookkeeping.
//! * [`coxeter_complex`] — the Coxeter complex as a simplicial W-complex with
//!   homology representations and Lefschetz bookkeeping.
//! * [`dualities`] — the verification suites tying everything together.

pub mod coefficients;
pub mod coxeter_complex;
pub mod dualities;
pub mod error;
pub mod linalg;
pub mod affine_weyl;
pub mod hecke;
pub mod hecke_modules;
pub mod report;
pub mod root_datum;
pub mod weyl;

pub use error::{Error, Result};
