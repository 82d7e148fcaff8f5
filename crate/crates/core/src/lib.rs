//! Construction and verification of a 17x17 solvable matrix group over
//! GF(3) whose set of element orders equals that of the simple group
//! PSp(4,3).
//!
//! The crate builds the group from literal generator matrices, mechanically
//! checks every structural claim behind the isospectrality statement
//! (exhaustively where feasible, by seeded sampling where not), computes
//! the reference spectrum by enumerating Sp(4,3) and quotienting out its
//! center, and assembles the results into a replayable JSON certificate.

pub mod certificate;
pub mod construction;
pub mod error;
pub mod exterior;
pub mod field;
pub mod group;
pub mod pgroup;
pub mod sp43;
pub mod verify;

pub use error::{Error, Result};
