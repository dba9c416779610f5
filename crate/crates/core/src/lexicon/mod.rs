//! Character-to-subword machines: the lexicon transducer, the MaxMatch
//! transducer built from a failure trie, and BPE merge gadgets.

mod aho;
mod gadget;
mod trie;

pub use aho::{build_failure_trie, build_maxmatch_transducer, FailureTrie, TrieNode};
pub use gadget::{build_merge_gadget, MergeGadget, Q0, Q1, Q2};
pub use trie::build_lexicon_transducer;

use crate::symbols::Sym;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("merge result id {0} is not a vocabulary token")]
    MissingResult(Sym),
    #[error("merge operand id {0} is not in the gadget alphabet")]
    OperandNotInAlphabet(Sym),
}
