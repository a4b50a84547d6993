//! Library surface of the `si` command: the report document schema.
//!
//! The binary assembles [`report::Report`] values and prints them; tests
//! and downstream tooling deserialize the same schema from the JSON the
//! command emits.

pub mod report;
