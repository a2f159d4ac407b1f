//! Workbench for two-dimensional equational theories over finite carriers.
//!
//! The crate is organized around a small kernel of finite categories
//! ([`fincat`]), a term calculus with partial interpretation ([`terms`],
//! [`interp`]), classical ordered/metric semantics ([`concrete`]), free
//! structures built from probe equivalence ([`free`]), and closure checks
//! for model classes ([`variety`]). A text front end lives in [`dsl`].

pub mod budget;
pub mod concrete;
pub mod corpus;
pub mod dsl;
pub mod fincat;
pub mod free;
pub mod interp;
pub mod terms;
pub mod variety;
pub mod verdict;

pub use budget::Budget;
pub use verdict::{Status, Verdict};
