//! Doc-test bindings for the guide in `book/`: every fenced Rust block in
//! the chapters compiles and runs under `cargo test --doc`, keeping the
//! book and the library in lockstep.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/groups.md")]
mod groups {}

#[doc = include_str!("../../../book/src/sequences.md")]
mod sequences {}

#[doc = include_str!("../../../book/src/atoms.md")]
mod atoms {}

#[doc = include_str!("../../../book/src/families.md")]
mod families {}

#[doc = include_str!("../../../book/src/lengths.md")]
mod lengths {}

#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}
