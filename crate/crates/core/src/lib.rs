//! Exact algebraic proving, discovery, locus computation and grading for
//! ruler-and-compass constructions.

pub mod cli;
pub mod geomodel;
pub mod groebner;
pub mod locus;
pub mod polycore;
pub mod reasoner;
