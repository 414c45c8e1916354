//! Harness library behind the `relsheaf` binary: file formats, the random
//! instance generator, and the theorem suites.

pub mod formats;
pub mod generate;
pub mod suites;
