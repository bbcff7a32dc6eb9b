pub mod algebra;
pub mod cli;
pub mod delta;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod ivm;
pub mod query;
pub mod reference;
pub mod rewrite;
pub mod semantics;
pub mod value;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/data-model.md")]
mod book_data_model {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/queries.md")]
mod book_queries {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/algebra.md")]
mod book_algebra {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/rewriting.md")]
mod book_rewriting {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/maintenance.md")]
mod book_maintenance {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
