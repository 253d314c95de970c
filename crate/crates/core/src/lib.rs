pub mod affine;
pub mod aut;
pub mod classify;
pub mod geometry;
pub mod perm;
pub mod report;
pub mod scheme;
