//! Command-line front end for `aspectra-core`: word rewriting, probe sets,
//! pencil spectra, representation comparison and verification suites.

pub mod commands;
pub mod json;
pub mod suites;
