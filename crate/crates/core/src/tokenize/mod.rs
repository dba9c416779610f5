//! Reference string tokenizers: MaxMatch and BPE.

mod bpe;
mod maxmatch;
mod vocab;

pub use bpe::{
    apply_merge, bpe_tokenize, bpe_tokenize_iterative, bpe_train, BpeError, BpeTokenizer, Merge,
    TrainStatus,
};
pub use maxmatch::maxmatch_tokenize;
pub use vocab::{VocabError, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TokenizeError {
    #[error("character {ch:?} at byte {offset} is not in the vocabulary alphabet")]
    UnknownChar { ch: char, offset: usize },
}
