//! Instance files, path traces and the command-line front end for
//! `nullsolve-core`.

pub mod acceptance;
pub mod commands;
pub mod formats;
pub mod trace;
