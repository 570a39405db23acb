//! Curry-Howard semantics: lambda terms, semantic types, and the meaning of
//! proofs.

pub mod compose;
pub mod term;
pub mod types;

pub use compose::{
    compose, extract_term, fill_slots, forest_readings, proof_term, readings, ComposeError, Normal,
    ReadingCounts,
};
pub use term::{
    alpha_eq, canonical, eta_reduce, normalize, normalize_eta, parse_term, pretty, render_term,
    subst, subst1, SemTerm, TermParseError,
};
pub use types::{
    check_type, parse_sem_type, sem_type, typecheck, AtomTable, SemType, SemTypeError, TypeEnv,
};
