//! Multi-well potentials with exactly known ground states.
//!
//! [`construction`] builds `V_{Λ,A}` from a solvable seed, [`triple`] holds the
//! closed forms of the symmetric triple well, [`variational`] bounds the
//! excited levels, and [`oracle`] is an independent finite-difference solver
//! used to check all of it.

pub mod construction;
pub mod oracle;
pub mod report;
pub mod scaling;
pub mod special;
pub mod sweep;
pub mod triple;
pub mod variational;
pub mod verify;
