//! Complex volumes of cusped hyperbolic 3-manifolds through the extended
//! Bloch group.
//!
//! The pipeline runs from a triangulation file to `i(vol + i cs)`:
//! [`gluing::solve_shapes`] finds the simplex shapes,
//! [`flattening::solve_flattenings`] picks integer flattenings, and
//! [`bloch::r_of_element`] evaluates the lifted Rogers function on the
//! resulting element. [`verify`] checks the algebraic identities that make the
//! answer well defined.

pub mod bloch;
pub mod error;
pub mod exec;
pub mod flattening;
pub mod geometry;
pub mod gluing;
pub mod intmat;
pub mod pipeline;
pub mod polylog;
pub mod triangulation;
pub mod verify;
pub mod wedge;

pub use error::{Error, Result};

use num_complex::Complex64;

pub(crate) fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}
