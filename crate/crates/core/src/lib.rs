//! Normal forms, joins, boundary odometers, directed hereditary sets and
//! K-theory tables for the positive monoids of Baumslag-Solitar groups.

pub mod checks;
pub mod error;
pub mod hereditary;
pub mod ktheory;
pub mod lattice;
pub mod odometer;
pub mod params;
pub mod seq;
pub mod words;

pub use error::{Error, Result};
pub use params::{parse_grid, BSParams, Case, Variant};
pub use words::{
    compose, from_form_r, height, normalize, parse_word, to_form_r, GenWord, Letter, PathL, PathR,
    RawForm, Token,
};
pub use odometer::{CarrySeq, PrefixSeq};
pub use seq::EventuallyPeriodicSeq;
