//! Library side of the `turaev` command-line tool: the graph-file text
//! format (parsing, rendering, cut-edge name resolution). The binary in
//! `main.rs` is a thin driver over this and the `turaev` crate.

pub mod doc;
