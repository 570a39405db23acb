//! Hypersequent calculus for the displacement calculus: syntax, cut-free
//! proof search, proof checking, cut elimination, Curry-Howard semantics and
//! lexical insertion.

pub mod analysis;
pub mod cutelim;
pub mod lexicon;
pub mod matcher;
pub mod proof;
pub mod search;
pub mod semantics;
pub mod syntax;

pub use syntax::{parse_config, parse_sequent, parse_type, Config, Item, Label, Sequent, Type};
