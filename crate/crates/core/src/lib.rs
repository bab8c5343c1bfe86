//! Exact finite-field point counting, optimal-curve searches, hermitian
//! lattice verification and closed-form curve bounds.
//!
//! The crate is `no_std` (it needs `alloc`); IO, reports and the command
//! line live in the `optcurve` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod catalog;
pub mod curves;
pub mod ff;
pub mod hermitian;
pub mod poly;
pub mod search;
