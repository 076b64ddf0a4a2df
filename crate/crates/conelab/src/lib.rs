//! conelab: exact polyhedral analysis of tangent and normal cones to the
//! graph of the regular normal-cone map of a smooth inequality system, with
//! an application to Aubin-property checks for parameterized generalized
//! equations.
//!
//! All geometry is carried out in arbitrary-precision rational arithmetic;
//! reported identities are exact, never approximate.

pub mod error;
pub mod exact;
pub mod par;
pub mod polyexpr;
pub mod polyhedra;
pub mod simplex;

pub mod model;
pub mod multipliers;
pub mod regularity;

pub mod cones;

pub mod assembly;
pub mod aubin;

pub use error::{Error, Result};
