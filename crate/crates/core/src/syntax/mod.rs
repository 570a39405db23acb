//! Types, configurations, sequents and their textual syntax.

pub mod config;
pub mod parser;
pub mod sequent;
pub mod types;

pub use config::{vector_item, Config, Item, Label, WrapError};
pub use parser::{parse_config, parse_sequent, parse_type, parse_valid_type, ParseError};
pub use sequent::Sequent;
pub use types::{SortError, Type};
