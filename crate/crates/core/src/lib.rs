//! Finite-state promotion of character-level patterns to subword-level
//! automata.
//!
//! A pattern is compiled to a minimal DFA over characters
//! ([`regex::compile_pattern`]) and then composed with a character-to-subword
//! transducer, projected onto its output tape, ε-removed and minimized:
//!
//! - [`promote::promote_agnostic`] keeps every segmentation of every
//!   matching string,
//! - [`promote::promote_maxmatch`] keeps only greedy longest-match
//!   tokenizations,
//! - [`promote::promote_bpe`] keeps only the output of a BPE tokenizer, by
//!   composing with one merge gadget per merge.
//!
//! [`guided`] turns a promoted DFA into a next-token mask for constrained
//! decoding.

pub mod automata;
pub mod cli;
pub mod dot;
pub mod guided;
pub mod io;
pub mod lexicon;
pub mod oracle;
pub mod promote;
pub mod regex;
pub mod symbols;
pub mod tokenize;

pub use automata::{Dfa, Fst, FstError, StateId, Transition};
pub use symbols::{Sym, SymbolTable, EPSILON, PHI};
