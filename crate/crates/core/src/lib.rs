pub mod aperiodic;
pub mod bounds;
pub mod cayley;
pub mod cli;
pub mod conetypes;
pub mod error;
pub mod fset;
pub mod lexgeo;
pub mod presentation;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
