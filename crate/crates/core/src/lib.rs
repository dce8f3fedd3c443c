//! Flat surfaces with two Jenkins-Strebel directions, encoded as signed
//! ("extended") origamis, and their Veech groups.

pub mod error;
pub mod exact;
pub mod origami;
pub mod invariants;
pub mod iso;
pub mod pdec;
pub mod geometry;
pub mod affine;
pub mod document;

pub use error::{Error, Result};
