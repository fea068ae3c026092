//! Library surface of the `qsc` command-line tool: the network-file
//! schema, the composition-expression parser, and the subcommand
//! implementations. The binary in `main.rs` is a thin argument-parsing
//! wrapper around [`commands`].

pub mod commands;
pub mod model;
pub mod parser;
