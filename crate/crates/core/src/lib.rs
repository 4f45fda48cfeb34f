//! Certified lower bounds for Ihara's constant `A(q)` from `(T, p)` class
//! field towers over explicit function fields.

pub mod cft;
pub mod cli;
pub mod config;
pub mod cover;
pub mod curve;
pub mod expr;
pub mod ff;
pub mod report;
pub mod search;
