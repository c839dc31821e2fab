//! Exact-arithmetic toolkit for root data, Chevalley Lie algebras, graded
//! quotients of parahoric filtrations, and Hilbert-Mumford stability over
//! small finite fields.
//!
//! The crate is organized bottom-up:
//!
//! - [`rootdata`]: simple root systems, affine roots, rational apartment
//!   points, alcove reduction, Kac coordinates.
//! - [`weyl`]: Weyl group enumeration, elliptic and Z-regular elements.
//! - [`chevalley`]: Chevalley bases with integer structure constants, the
//!   bracket, and root-group / torus actions over any supported ring.
//! - [`mpgrading`]: first filtration-quotient data for a rational point and
//!   the induced Z/m-grading of the Lie algebra.
//! - [`stability`]: finite fields, negative-weight sets, exact torus
//!   stability via chamber enumeration, destabilizer search, orbits.
//! - [`g2case`]: the rank-2 worked example: the `P1 (x) P3` representation
//!   of `SL2 x SL2`, its discriminant invariants, and the exhaustive
//!   stable-vector classification over small fields.
//!
//! All arithmetic is exact: `i64`/`BigInt` integers, `Ratio` rationals, and
//! table-driven `F_q`. No floating point anywhere.

pub mod chevalley;
pub mod error;
pub mod g2case;
pub mod mpgrading;
pub mod ring;
pub mod rng;
pub mod rootdata;
pub mod stability;
pub mod weyl;

pub use error::Error;
