//! Quadratically enriched counts of lines on quintic threefolds.
//!
//! The crate computes the local index `<det A>` of a simple line, its
//! type via Segre involutions with a brute-force double-point oracle over
//! finite fields, and the dynamic Euler number of the Fermat quintic
//! `1445<1> + 1430<-1>` by solving the deformation systems of its
//! multiplicity-2 and multiplicity-5 lines over truncated series.

pub mod binforms;
pub mod cli;
pub mod error;
pub mod fermat;
pub mod par;
pub mod gw;
pub mod lines;
pub mod rings;

pub use error::{Error, Result};
