//! Exact combinatorial calculus for Hirzebruch-Jung continued fractions,
//! two-bridge links, ribbon surfaces in the 4-ball, and the homology of
//! branched double covers.
//!
//! Everything here is integer-exact: continued fractions and lattice
//! determinants use arbitrary-precision arithmetic, link invariants are
//! Laurent polynomials over the integers, and every geometric claim is
//! checked through certificates (component counts, Jones polynomials,
//! determinants, Smith normal forms) rather than floating point.

pub mod error;
pub mod hjcf;
pub mod linkengine;
pub mod trees;
pub mod zmatrix;

pub use error::Error;
