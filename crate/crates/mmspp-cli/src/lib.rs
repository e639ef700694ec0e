//! Command-line front end and text formats for the `mmspp-core` solvers.
//!
//! The [`format`] module defines the instance and solution file formats;
//! [`commands`] implements the `mmspp` subcommands (`solve`, `verify`,
//! `oracle`, `lb`, `gen`, `bench`) as functions returning their stdout
//! payload and exit code, so everything is testable in-process.

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod commands;
pub mod format;
