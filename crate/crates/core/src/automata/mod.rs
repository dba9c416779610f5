//! Unweighted transducer and automaton algebra over a shared symbol table.

mod compose;
mod determinize;
mod dfa;
mod epsilon;
mod fst;
mod language;
mod minimize;
mod ops;

pub use compose::compose;
pub use determinize::{determinize, determinize_pairs};
pub use dfa::{is_deterministic, Dfa};
pub use epsilon::epsilon_remove;
pub use fst::{Fst, StateId, Transition};
pub use language::{
    accepts, enumerate_language, enumerate_language_capped, enumerate_pairs, transduce,
    DEFAULT_PATH_CAP,
};
pub use minimize::{canonicalize, minimize};
pub use ops::{connect_forward, kleene_star_closure, project_output, trim};


use crate::symbols::Sym;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FstError {
    #[error("operands use different symbol tables")]
    SymbolTableMismatch,
    #[error("state {state} has an arc whose input and output labels differ")]
    NotAcceptor { state: StateId },
    #[error("state {state} is not deterministic on symbol {symbol}")]
    NotDeterministic { state: StateId, symbol: Sym },
    #[error("enumeration cap exceeded after {explored} paths ({partial} sequences found)")]
    EnumerationCap { explored: usize, partial: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid machine: {0}")]
    Invalid(String),
}
