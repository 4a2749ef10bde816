//! Certification of Property E for symmetric spaces of noncompact type.
//!
//! The pipeline runs from a catalogued space to its restricted roots
//! ([`catalog`]), maximally singular lines and `dim Q_v` ([`singular`]),
//! the 0/1 incidence matrix of a frame ([`incidence`]), and finally to
//! 3-per-row column matchings, found greedily ([`matcher`]) or decided
//! exactly with Hall certificates ([`oracle`]).

pub mod arith;
pub mod catalog;
pub mod singular;
pub mod incidence;
pub mod matcher;
pub mod oracle;
pub mod cli;
