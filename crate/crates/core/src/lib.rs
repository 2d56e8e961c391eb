//! F-purity, F-pure thresholds and quasi-F-pure heights of hypersurfaces
//! over prime fields.

pub mod field;
pub mod poly;
pub mod groebner;
pub mod witt;
pub mod frob;
pub mod classify;
pub mod qfp;
pub mod sample;
