//! Formal group laws, standard groups and word maps over truncated pro-p
//! coefficient rings.

pub mod atlas;
pub mod error;
pub mod fgl;
pub mod group;
pub mod json;
pub mod mono;
pub mod par;
pub mod ring;
pub mod series;
pub mod specialise;
pub mod stdgrp;
pub mod words;

pub use error::{Error, Result};
pub use mono::Monomial;
pub use par::Execution;
pub use ring::{CoeffMap, Coefficient, Elem, RingKind, RingSpec, Specialisation, Valuation};
pub use series::{Constancy, Series, SeriesTuple};

/// Default cap on the number of elements, tuples or triples any brute-force
/// enumeration may visit.
pub const DEFAULT_ENUM_BOUND: u128 = 1_000_000;

/// Environment variable overriding [`DEFAULT_ENUM_BOUND`].
pub const ENUM_BOUND_VAR: &str = "PROSTD_ENUM_BOUND";

/// The enumeration bound, honouring [`ENUM_BOUND_VAR`] when it parses.
pub fn enum_bound() -> u128 {
    std::env::var(ENUM_BOUND_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_BOUND)
}
