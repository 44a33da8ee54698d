//! Cohomotopy groups of suspended complex projective planes: exact abelian
//! group calculus, extension solving, a cited dataset and table verification.

pub mod abelian;
pub mod cli;
pub mod db;
pub mod ext;
pub mod gottlieb;
pub mod named;
pub mod pipeline;
